//! Maximal series paths of potential arcs.
//!
//! A chain runs through interior nodes that have exactly one incoming and one
//! outgoing arc and are neither source nor sink. Flow can cross a chain only
//! once every arc on it is usable, so the subproblem searches and the exact
//! solver treat a chain as a single weighted item.

use super::network::{ArcId, ArcSet, Network, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    /// Arcs in path order.
    pub arcs: Vec<ArcId>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn min_id(&self) -> ArcId {
        *self.arcs.iter().min().expect("chains are nonempty")
    }
}

fn is_interior(net: &Network, v: NodeId) -> bool {
    v != net.source() && v != net.sink() && net.in_arcs(v).len() == 1 && net.out_arcs(v).len() == 1
}

/// Partitions the potential arcs into chains, ordered by smallest arc id.
pub fn potential_chains(net: &Network) -> Vec<Chain> {
    let mut seen = ArcSet::empty(net.arc_count());
    let mut chains = Vec::new();
    for a in net.potential_arcs() {
        if seen.contains(a) {
            continue;
        }
        // Walk back to the chain start, stopping if the walk closes a cycle.
        let mut first = a;
        loop {
            let tail = net.arc(first).tail;
            if !is_interior(net, tail) {
                break;
            }
            let prev = net.in_arcs(tail)[0];
            if !net.arc(prev).is_potential() || prev == a {
                break;
            }
            first = prev;
        }
        let mut arcs = vec![first];
        seen.insert(first);
        let mut cur = first;
        loop {
            let head = net.arc(cur).head;
            if !is_interior(net, head) {
                break;
            }
            let next = net.out_arcs(head)[0];
            if !net.arc(next).is_potential() || seen.contains(next) {
                break;
            }
            arcs.push(next);
            seen.insert(next);
            cur = next;
        }
        chains.push(Chain { arcs });
    }
    chains.sort_by_key(Chain::min_id);
    chains
}

/// Chain-level view of the still-unbuilt potential arcs that may be chosen.
///
/// An item is the unbuilt remainder of a chain; chains with an unbuilt arc
/// outside `allowed` can never carry flow and are dropped.
#[derive(Debug, Clone)]
pub(crate) struct Items {
    pub arcs: Vec<Vec<ArcId>>,
}

impl Items {
    pub fn new(net: &Network, built: &ArcSet, allowed: &ArcSet) -> Items {
        let mut arcs = Vec::new();
        for chain in potential_chains(net) {
            let rest: Vec<ArcId> = chain.arcs.iter().copied().filter(|a| !built.contains(*a)).collect();
            if rest.is_empty() || !rest.iter().all(|a| allowed.contains(*a)) {
                continue;
            }
            arcs.push(rest);
        }
        arcs.sort_by_key(|r| *r.iter().min().unwrap());
        Items { arcs }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.arcs[i].len()
    }

    pub fn add_to(&self, set: &mut ArcSet, i: usize) {
        for &a in &self.arcs[i] {
            set.insert(a);
        }
    }

    pub fn union_of(&self, base: &ArcSet, chosen: impl IntoIterator<Item = usize>) -> ArcSet {
        let mut s = base.clone();
        for i in chosen {
            self.add_to(&mut s, i);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_collapses_to_one_chain() {
        let mut net = Network::new(2, 0, 1);
        let ids = net.add_potential_path(0, 1, 4, 1);
        let chains = potential_chains(&net);
        assert_eq!(chains, vec![Chain { arcs: ids }]);
    }

    #[test]
    fn branching_node_splits_chains() {
        // s -p-> a -p-> t and a -e-> t: a has out-degree 2.
        let mut net = Network::new(3, 0, 2);
        net.add_potential(0, 1, 1);
        net.add_potential(1, 2, 1);
        net.add_existing(1, 2, 1);
        let chains = potential_chains(&net);
        assert_eq!(chains.len(), 2);
    }

    #[test]
    fn existing_arc_breaks_chain() {
        let mut net = Network::new(4, 0, 3);
        net.add_potential(0, 1, 1);
        net.add_existing(1, 2, 1);
        net.add_potential(2, 3, 1);
        assert_eq!(potential_chains(&net).len(), 2);
    }

    #[test]
    fn isolated_cycle_is_one_chain() {
        let mut net = Network::new(5, 0, 1);
        net.add_existing(0, 1, 1);
        net.add_potential(2, 3, 1);
        net.add_potential(3, 4, 1);
        net.add_potential(4, 2, 1);
        let chains = potential_chains(&net);
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 3);
    }

    #[test]
    fn items_drop_partially_disallowed_chains() {
        let mut net = Network::new(2, 0, 1);
        let p = net.add_potential_path(0, 1, 3, 1);
        let q = net.add_potential(0, 1, 1);
        let built = ArcSet::from_ids(net.arc_count(), [p[0]]);
        let all = net.potential_set();
        let items = Items::new(&net, &built, &all);
        assert_eq!(items.arcs, vec![vec![p[1], p[2]], vec![q]]);
        let only_q = ArcSet::from_ids(net.arc_count(), [q]);
        assert_eq!(Items::new(&net, &built, &only_q).arcs, vec![vec![q]]);
    }
}
