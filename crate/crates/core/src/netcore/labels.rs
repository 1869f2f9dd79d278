//! Residual labels `(d, δ, p)`: fewest unbuilt potential arcs on an augmenting
//! path to each node, then the largest bottleneck among such paths.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::maxflow::{FlowResult, Residual};
use super::network::{ArcId, ArcSet, Network, NodeId};

/// Bottleneck recorded for the source.
pub const INF_DELTA: u64 = u64::MAX;

/// One residual step: arc `arc` traversed forward or against its direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidualStep {
    pub arc: ArcId,
    pub forward: bool,
}

impl ResidualStep {
    fn edge(self) -> usize {
        2 * self.arc.0 + usize::from(!self.forward)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualLabels {
    /// `None` for nodes no augmenting path reaches.
    pub d: Vec<Option<u32>>,
    /// 0 for unreached nodes, [`INF_DELTA`] for the source.
    pub delta: Vec<u64>,
    pub pred: Vec<Option<ResidualStep>>,
}

impl ResidualLabels {
    /// Residual steps from the source to `v` following predecessor links.
    pub fn path_to(&self, net: &Network, v: NodeId) -> Option<Vec<ResidualStep>> {
        self.d[v]?;
        let mut steps = Vec::new();
        let mut cur = v;
        while cur != net.source() {
            let step = self.pred[cur]?;
            let a = net.arc(step.arc);
            cur = if step.forward { a.tail } else { a.head };
            steps.push(step);
        }
        steps.reverse();
        Some(steps)
    }

    /// Unbuilt potential arcs used forward on the labeled path to `v`.
    pub fn new_arcs_to(&self, net: &Network, built: &ArcSet, v: NodeId) -> Option<Vec<ArcId>> {
        let path = self.path_to(net, v)?;
        Some(
            path.into_iter()
                .filter(|s| s.forward && net.arc(s.arc).is_potential() && !built.contains(s.arc))
                .map(|s| s.arc)
                .collect(),
        )
    }
}

/// Labels the residual graph of `base_flow`, where existing and built arcs
/// are free and unbuilt potential arcs cost one each.
pub fn residual_labels(net: &Network, built: &ArcSet, base_flow: &FlowResult) -> ResidualLabels {
    let candidates = net.potential_set().difference(built);
    labels_within(net, built, &candidates, base_flow)
}

/// Same as [`residual_labels`] but only the unbuilt arcs in `candidates` may
/// be used.
pub(crate) fn labels_within(
    net: &Network,
    built: &ArcSet,
    candidates: &ArcSet,
    base_flow: &FlowResult,
) -> ResidualLabels {
    let free = net.existing_set().union(built);
    let usable = free.union(candidates);
    let res = Residual::new(net, &usable, base_flow.flow.clone());
    let n = net.node_count();
    let mut d: Vec<Option<u32>> = vec![None; n];
    let mut delta = vec![0u64; n];
    let mut pred: Vec<Option<ResidualStep>> = vec![None; n];
    let mut done = vec![false; n];
    let s = net.source();
    d[s] = Some(0);
    delta[s] = INF_DELTA;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u32, Reverse(INF_DELTA), s)));
    while let Some(Reverse((dv, Reverse(bv), v))) = heap.pop() {
        if done[v] || d[v] != Some(dv) || delta[v] != bv {
            continue;
        }
        done[v] = true;
        for e in res.edges_from(v) {
            let r = res.residual(e);
            if r == 0 {
                continue;
            }
            let w = res.head(e);
            if done[w] {
                continue;
            }
            let arc = ArcId(e / 2);
            let cost = u32::from(e % 2 == 0 && !free.contains(arc));
            let cand = (dv + cost, bv.min(r));
            let better = match d[w] {
                None => true,
                Some(dw) => match compare(cand, (dw, delta[w])) {
                    Ordering::Less => true,
                    Ordering::Equal => pred[w].is_some_and(|p| arc < p.arc),
                    Ordering::Greater => false,
                },
            };
            if better {
                d[w] = Some(cand.0);
                delta[w] = cand.1;
                pred[w] = Some(ResidualStep { arc, forward: e % 2 == 0 });
                heap.push(Reverse((cand.0, Reverse(cand.1), w)));
            }
        }
    }
    ResidualLabels { d, delta, pred }
}

/// Lexicographic label order: smaller `d` first, then larger `δ`.
fn compare(a: (u32, u64), b: (u32, u64)) -> Ordering {
    a.0.cmp(&b.0).then(b.1.cmp(&a.1))
}

/// Pushes `amount` units along `path`.
pub(crate) fn augment(flow: &mut FlowResult, path: &[ResidualStep], amount: u64) {
    for step in path {
        let e = step.edge();
        if e % 2 == 0 {
            flow.flow[e / 2] += amount;
        } else {
            flow.flow[e / 2] -= amount;
        }
    }
    flow.value += amount;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::maxflow::max_flow;

    fn p2() -> Network {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        net.add_potential(0, 1, 1);
        net.add_potential(0, 1, 2);
        net
    }

    #[test]
    fn no_augmenting_path_when_everything_built() {
        let net = p2();
        let all = net.all_arcs();
        let flow = max_flow(&net, &all);
        let labels = residual_labels(&net, &net.potential_set(), &flow);
        assert_eq!(labels.d[1], None);
        assert_eq!(labels.delta[1], 0);
    }

    #[test]
    fn p2_prefers_larger_augmentation() {
        let net = p2();
        let built = ArcSet::empty(3);
        let flow = max_flow(&net, &net.existing_set());
        assert_eq!(flow.value, 1);
        let labels = residual_labels(&net, &built, &flow);
        assert_eq!(labels.d[1], Some(1));
        assert_eq!(labels.delta[1], 2);
        assert_eq!(labels.new_arcs_to(&net, &built, 1).unwrap(), vec![ArcId(2)]);
        assert_eq!(labels.delta[0], INF_DELTA);
    }

    #[test]
    fn backward_steps_are_free() {
        // Existing flow s->a->b->t blocks b; the cheapest route to t reverses a->b.
        let mut net = Network::new(4, 0, 3);
        net.add_existing(0, 1, 1);
        net.add_existing(1, 2, 1);
        net.add_existing(2, 3, 1);
        net.add_potential(0, 2, 1);
        net.add_potential(1, 3, 1);
        let flow = max_flow(&net, &net.existing_set());
        let built = ArcSet::empty(5);
        let labels = residual_labels(&net, &built, &flow);
        assert_eq!(labels.d[3], Some(2));
        let path = labels.path_to(&net, 3).unwrap();
        assert!(path.iter().any(|s| !s.forward && s.arc == ArcId(1)));
        let mut f = flow.clone();
        augment(&mut f, &path, labels.delta[3]);
        assert_eq!(f.value, 2);
        assert!(f.is_feasible(&net, &net.all_arcs()));
    }
}
