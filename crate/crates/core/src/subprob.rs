//! Fixed-charge subproblems: fewest new arcs for a flow target, and the best
//! flow value for an exact number of new arcs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netcore::{
    augment, labels_within, max_flow, max_flow_value, unit_cost_flow, unit_cost_profile, ArcId, ArcSet, FlowResult,
    Items, Network,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinArcsResult {
    pub z_star: usize,
    /// Sorted ids of the new potential arcs.
    pub witness: Vec<ArcId>,
    pub flow: FlowResult,
}

/// Minimum costs `c[j]` of raising the flow from `f` to `f + j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CValues {
    pub c: Vec<u64>,
}

impl CValues {
    pub fn r(&self) -> u64 {
        self.c.len() as u64 - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UpperBound {
    /// `T·F − Σ c_j`.
    pub bound: i64,
    /// `T·F − r(r−1)/2 − c_r`.
    pub weak: i64,
}

/// Fewest new potential arcs beyond `built` that permit a flow of at least
/// `target`. `None` when `target` exceeds the ultimate flow.
pub fn min_arcs(net: &Network, built: &ArcSet, target: u64) -> Option<MinArcsResult> {
    min_arcs_within(net, built, &net.potential_set(), target)
}

/// [`min_arcs`] restricted to new arcs from `allowed`.
pub fn min_arcs_within(net: &Network, built: &ArcSet, allowed: &ArcSet, target: u64) -> Option<MinArcsResult> {
    let base = net.existing_set().union(built);
    let start = max_flow(net, &base);
    if start.value >= target {
        return Some(MinArcsResult { z_star: 0, witness: Vec::new(), flow: start });
    }
    let items = Items::new(net, built, allowed);
    let everything = items.union_of(&base, 0..items.len());
    if max_flow_value(net, &everything) < target {
        return None;
    }
    if net.is_unit_capacity() {
        let charged = everything.difference(&base);
        let (cost, flow) = unit_cost_flow(net, &base, &charged, target)?;
        let witness: Vec<ArcId> = charged.iter().filter(|a| flow.flow[a.0] > 0).collect();
        debug_assert_eq!(witness.len() as u64, cost);
        return Some(MinArcsResult { z_star: witness.len(), witness, flow });
    }
    let mut search = MinSearch { net, items: &items, base: &base, target, best: None };
    search.seed(&start);
    let mut chosen = Vec::new();
    search.dfs(0, &mut chosen, 0);
    let best = search.best.expect("feasible target has a witness");
    let set = items.union_of(&base, best.iter().copied());
    let mut witness: Vec<ArcId> = best.iter().flat_map(|&i| items.arcs[i].iter().copied()).collect();
    witness.sort();
    Some(MinArcsResult { z_star: witness.len(), witness, flow: max_flow(net, &set) })
}

struct MinSearch<'a> {
    net: &'a Network,
    items: &'a Items,
    base: &'a ArcSet,
    target: u64,
    best: Option<Vec<usize>>,
}

impl MinSearch<'_> {
    fn best_weight(&self) -> usize {
        self.best.as_ref().map_or(usize::MAX, |b| b.iter().map(|&i| self.items.weight(i)).sum())
    }

    /// Greedy incumbent: follow cheapest labeled augmenting paths.
    fn seed(&mut self, start: &FlowResult) {
        let mut flow = start.clone();
        let mut usable = self.base.clone();
        let mut chosen = Vec::new();
        let mut owner = vec![None; self.net.arc_count()];
        for (i, arcs) in self.items.arcs.iter().enumerate() {
            for a in arcs {
                owner[a.0] = Some(i);
            }
        }
        let candidates = self.items.union_of(&ArcSet::empty(self.net.arc_count()), 0..self.items.len());
        while flow.value < self.target {
            let built = usable.difference(&self.net.existing_set());
            let pending = candidates.difference(&usable);
            let labels = labels_within(self.net, &built, &pending, &flow);
            let t = self.net.sink();
            let Some(path) = labels.path_to(self.net, t) else { return };
            for step in &path {
                if let Some(i) = owner[step.arc.0] {
                    if !chosen.contains(&i) {
                        chosen.push(i);
                        self.items.add_to(&mut usable, i);
                    }
                }
            }
            let amount = labels.delta[t].min(self.target - flow.value);
            augment(&mut flow, &path, amount);
        }
        chosen.sort();
        self.best = Some(chosen);
    }

    fn dfs(&mut self, idx: usize, chosen: &mut Vec<usize>, weight: usize) {
        if weight >= self.best_weight() {
            return;
        }
        let usable = self.items.union_of(self.base, chosen.iter().copied());
        let flow = max_flow(self.net, &usable);
        if flow.value >= self.target {
            self.best = Some(chosen.clone());
            return;
        }
        if idx == self.items.len() {
            return;
        }
        let remaining = self.items.union_of(&ArcSet::empty(self.net.arc_count()), idx..self.items.len());
        let built = usable.difference(&self.net.existing_set());
        let labels = labels_within(self.net, &built, &remaining, &flow);
        let Some(lb) = labels.d[self.net.sink()] else { return };
        if weight + lb as usize >= self.best_weight() {
            return;
        }
        if max_flow_value(self.net, &usable.union(&remaining)) < self.target {
            return;
        }
        chosen.push(idx);
        self.dfs(idx + 1, chosen, weight + self.items.weight(idx));
        chosen.pop();
        self.dfs(idx + 1, chosen, weight);
    }
}

/// Among sets of exactly `z_star` new potential arcs, one maximizing the
/// resulting flow value; ties go to the earliest set in arc-id order.
pub fn max_val(net: &Network, built: &ArcSet, z_star: usize) -> Result<(u64, Vec<ArcId>)> {
    max_val_within(net, built, &net.potential_set(), z_star)
}

/// [`max_val`] restricted to new arcs from `allowed`.
///
/// Selections range over whole chains (see [`crate::netcore::potential_chains`]):
/// a partly built chain carries no flow, so any optimum built from whole
/// chains is an optimum overall whenever a whole-chain set of size `z_star`
/// exists, which holds for the budgets produced by [`min_arcs`].
pub fn max_val_within(net: &Network, built: &ArcSet, allowed: &ArcSet, z_star: usize) -> Result<(u64, Vec<ArcId>)> {
    let base = net.existing_set().union(built);
    if z_star == 0 {
        return Ok((max_flow_value(net, &base), Vec::new()));
    }
    let items = Items::new(net, built, allowed);
    let n = items.len();
    // reach[i][w]: some subset of items i.. has total weight exactly w.
    let mut reach = vec![vec![false; z_star + 1]; n + 1];
    reach[n][0] = true;
    for i in (0..n).rev() {
        for w in 0..=z_star {
            let wi = items.weight(i);
            reach[i][w] = reach[i + 1][w] || (w >= wi && reach[i + 1][w - wi]);
        }
    }
    if !reach[0][z_star] {
        return Err(Error::InvalidBudget { z_star });
    }
    let ceiling = max_flow_value(net, &items.union_of(&base, 0..n));
    let mut search = ValSearch { net, items: &items, base: &base, reach: &reach, ceiling, best: None };
    search.dfs(0, &mut Vec::new(), z_star);
    let (xi, chosen) = search.best.expect("budget is reachable");
    let mut arcs: Vec<ArcId> = chosen.iter().flat_map(|&i| items.arcs[i].iter().copied()).collect();
    arcs.sort();
    Ok((xi, arcs))
}

struct ValSearch<'a> {
    net: &'a Network,
    items: &'a Items,
    base: &'a ArcSet,
    reach: &'a [Vec<bool>],
    ceiling: u64,
    best: Option<(u64, Vec<usize>)>,
}

impl ValSearch<'_> {
    fn done(&self) -> bool {
        self.best.as_ref().is_some_and(|b| b.0 >= self.ceiling)
    }

    fn dfs(&mut self, idx: usize, chosen: &mut Vec<usize>, budget: usize) {
        if self.done() || !self.reach[idx][budget] {
            return;
        }
        if budget == 0 {
            let xi = max_flow_value(self.net, &self.items.union_of(self.base, chosen.iter().copied()));
            if self.best.as_ref().is_none_or(|b| xi > b.0) {
                self.best = Some((xi, chosen.clone()));
            }
            return;
        }
        if let Some((best, _)) = &self.best {
            let fitting = (idx..self.items.len()).filter(|&i| self.items.weight(i) <= budget);
            let optimistic = self.items.union_of(self.base, chosen.iter().copied().chain(fitting));
            if max_flow_value(self.net, &optimistic) <= *best {
                return;
            }
        }
        let w = self.items.weight(idx);
        if w <= budget {
            chosen.push(idx);
            self.dfs(idx + 1, chosen, budget - w);
            chosen.pop();
        }
        self.dfs(idx + 1, chosen, budget);
    }
}

/// `c[j]` for `j = 0..=r` on a unit-capacity network.
pub fn c_values(net: &Network) -> Result<CValues> {
    net.require_unit_capacity()?;
    let profile = unit_cost_profile(net, &net.existing_set(), &net.potential_set(), u64::MAX);
    let f = max_flow_value(net, &net.existing_set()) as usize;
    Ok(CValues { c: profile.costs[f..].to_vec() })
}

/// Upper bounds on the optimum from the `c` values.
pub fn upper_bound_opt(net: &Network, horizon: u64) -> Result<UpperBound> {
    let c = c_values(net)?;
    Ok(bound_from_c(&c, max_flow_value(net, &net.all_arcs()), horizon))
}

pub(crate) fn bound_from_c(c: &CValues, ultimate: u64, horizon: u64) -> UpperBound {
    let r = c.r() as i64;
    let tf = (horizon * ultimate) as i64;
    let sum: i64 = c.c.iter().map(|&x| x as i64).sum();
    let cr = *c.c.last().unwrap() as i64;
    UpperBound { bound: tf - sum, weak: tf - r * (r - 1).max(0) / 2 - cr }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Network {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        net.add_potential(0, 1, 1);
        net.add_potential(0, 1, 2);
        net
    }

    #[test]
    fn target_already_met() {
        let net = p2();
        let r = min_arcs(&net, &ArcSet::empty(3), 1).unwrap();
        assert_eq!(r.z_star, 0);
        assert!(r.witness.is_empty());
    }

    #[test]
    fn p2_min_arcs_and_max_val() {
        let net = p2();
        let empty = ArcSet::empty(3);
        assert_eq!(min_arcs(&net, &empty, 2).unwrap().z_star, 1);
        assert_eq!(min_arcs(&net, &empty, 4).unwrap().z_star, 2);
        assert!(min_arcs(&net, &empty, 5).is_none());
        assert_eq!(max_val(&net, &empty, 1).unwrap(), (3, vec![ArcId(2)]));
        assert_eq!(max_val(&net, &empty, 0).unwrap(), (1, vec![]));
        assert!(matches!(max_val(&net, &empty, 3), Err(Error::InvalidBudget { z_star: 3 })));
    }

    #[test]
    fn unit_network_c_values() {
        // s->a existing, a->t potential, plus a 3-arc potential path s->t.
        let mut net = Network::new(3, 0, 2);
        net.add_existing(0, 1, 1);
        net.add_potential(1, 2, 1);
        net.add_potential_path(0, 2, 3, 1);
        assert_eq!(c_values(&net).unwrap().c, vec![0, 1, 4]);
        let ub = upper_bound_opt(&net, 5).unwrap();
        assert_eq!(ub.bound, 10 - 5);
        assert_eq!(ub.weak, 10 - 1 - 4);
    }

    #[test]
    fn c_values_need_unit_capacities() {
        assert!(matches!(c_values(&p2()), Err(Error::UnitCapacityRequired { .. })));
        assert!(upper_bound_opt(&p2(), 3).is_err());
    }

    #[test]
    fn restricted_candidates() {
        let net = p2();
        let only_q1 = ArcSet::from_ids(3, [ArcId(1)]);
        let empty = ArcSet::empty(3);
        assert!(min_arcs_within(&net, &empty, &only_q1, 3).is_none());
        assert_eq!(max_val_within(&net, &empty, &only_q1, 1).unwrap(), (2, vec![ArcId(1)]));
    }
}
