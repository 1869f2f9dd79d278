//! Exact optima: a dynamic program over built subsets and a plain
//! permutation enumeration used to cross-check it.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heur::{evaluate_schedule, BuildSchedule};
use crate::netcore::{check_horizon, max_flow_value, ArcId, ArcSet, Instance, Items};

pub const DEFAULT_CAP: usize = 22;
pub const PERMUTATION_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub optimum: u64,
    pub schedule: BuildSchedule,
    /// Subsets (dynamic program) or complete orders (enumeration) visited.
    pub explored: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Largest number of chains the dynamic program accepts.
    pub cap: usize,
    pub deadline: Option<Instant>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { cap: DEFAULT_CAP, deadline: None }
    }
}

/// Optimum over all build orders with default options.
pub fn exact_subset_dp(inst: &Instance) -> Result<ExactResult> {
    exact_subset_dp_with(inst, ExactOptions::default())
}

/// Optimum over all build orders.
///
/// Some optimal schedule builds one arc per period and builds every chain of
/// potential arcs contiguously, so the state is the set of completed chains:
/// `value(S) = max_{c ∈ S} value(S∖c) + len(c)·flow(S∖c)`.
pub fn exact_subset_dp_with(inst: &Instance, opts: ExactOptions) -> Result<ExactResult> {
    check_horizon(&inst.network, inst.horizon)?;
    let net = &inst.network;
    let items = Items::new(net, &ArcSet::empty(net.arc_count()), &net.potential_set());
    let m = items.len();
    if m > opts.cap {
        return Err(Error::TooLarge { items: m, cap: opts.cap });
    }
    let existing = net.existing_set();
    let subsets = 1usize << m;
    let mut flow = vec![0u64; subsets];
    for (mask, slot) in flow.iter_mut().enumerate() {
        if mask % 4096 == 0 && opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::TimeLimit);
        }
        *slot = max_flow_value(net, &items.union_of(&existing, bits(mask)));
    }
    let mut value = vec![0u64; subsets];
    let mut last = vec![usize::MAX; subsets];
    for mask in 1..subsets {
        let mut best = None;
        for c in bits(mask) {
            let rest = mask & !(1 << c);
            let v = value[rest] + items.weight(c) as u64 * flow[rest];
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, c));
            }
        }
        let (v, c) = best.unwrap();
        value[mask] = v;
        last[mask] = c;
    }
    let full = subsets - 1;
    let tail = inst.horizon - net.potential_count() as u64;
    let optimum = value[full] + tail * flow[full];
    let mut chains = Vec::with_capacity(m);
    let mut mask = full;
    while mask != 0 {
        let c = last[mask];
        chains.push(c);
        mask &= !(1 << c);
    }
    chains.reverse();
    let order: Vec<ArcId> = chains.iter().flat_map(|&c| items.arcs[c].iter().copied()).collect();
    let schedule = BuildSchedule::new(order);
    debug_assert_eq!(evaluate_schedule(inst, &schedule).map(|r| r.total).ok(), Some(optimum));
    Ok(ExactResult { optimum, schedule, explored: subsets as u64 })
}

fn bits(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&i| mask >> i & 1 == 1)
}

/// Optimum by trying every order of the individual potential arcs.
pub fn brute_force_permutations(inst: &Instance) -> Result<ExactResult> {
    check_horizon(&inst.network, inst.horizon)?;
    let net = &inst.network;
    let pot: Vec<ArcId> = net.potential_arcs().collect();
    let m = pot.len();
    if m > PERMUTATION_CAP {
        return Err(Error::TooLarge { items: m, cap: PERMUTATION_CAP });
    }
    let existing = net.existing_set();
    let mut memo: Vec<Option<u64>> = vec![None; 1 << m];
    let mut flow_of = |mask: usize| -> u64 {
        *memo[mask].get_or_insert_with(|| {
            let mut usable = existing.clone();
            for i in bits(mask) {
                usable.insert(pot[i]);
            }
            max_flow_value(net, &usable)
        })
    };
    let tail = inst.horizon - m as u64;
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut explored = 0u64;
    loop {
        explored += 1;
        let mut mask = 0usize;
        let mut total = 0u64;
        for &i in &perm {
            total += flow_of(mask);
            mask |= 1 << i;
        }
        total += tail * flow_of(mask);
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, perm.clone()));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (optimum, order) = best.unwrap();
    let schedule = BuildSchedule::new(order.into_iter().map(|i| pot[i]).collect());
    Ok(ExactResult { optimum, schedule, explored })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Value of a feasible schedule, hence a lower bound on the optimum.
pub fn certified_lower_bound(inst: &Instance, schedule: &BuildSchedule) -> Result<u64> {
    Ok(evaluate_schedule(inst, schedule)?.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::Network;

    fn p2() -> Instance {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        net.add_potential(0, 1, 1);
        net.add_potential(0, 1, 2);
        Instance::new(net, 3).unwrap()
    }

    #[test]
    fn p2_optimum() {
        let dp = exact_subset_dp(&p2()).unwrap();
        assert_eq!(dp.optimum, 8);
        assert_eq!(dp.schedule.order, vec![ArcId(2), ArcId(1)]);
        let bf = brute_force_permutations(&p2()).unwrap();
        assert_eq!(bf.optimum, 8);
        assert_eq!(bf.explored, 2);
    }

    #[test]
    fn diamond_optimum() {
        let mut net = Network::new(3, 0, 2);
        net.add_existing(0, 1, 1);
        net.add_potential(1, 2, 1);
        let inst = Instance::new(net, 2).unwrap();
        assert_eq!(exact_subset_dp(&inst).unwrap().optimum, 1);
    }

    #[test]
    fn no_potential_arcs() {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 2);
        let inst = Instance::new(net, 3).unwrap();
        assert_eq!(brute_force_permutations(&inst).unwrap().optimum, 6);
        assert_eq!(exact_subset_dp(&inst).unwrap().optimum, 6);
    }

    #[test]
    fn chains_are_scheduled_whole() {
        // A 3-arc path and a single arc in parallel; the single arc goes first.
        let mut net = Network::new(2, 0, 1);
        net.add_potential_path(0, 1, 3, 1);
        net.add_potential(0, 1, 1);
        let inst = Instance::new(net, 5).unwrap();
        let dp = exact_subset_dp(&inst).unwrap();
        assert_eq!(dp.optimum, 1 + 1 + 1 + 2);
        assert_eq!(dp.schedule.order[0], ArcId(3));
        assert_eq!(brute_force_permutations(&inst).unwrap().optimum, dp.optimum);
    }

    #[test]
    fn caps_are_enforced() {
        let mut net = Network::new(2, 0, 1);
        for _ in 0..9 {
            net.add_potential(0, 1, 1);
        }
        let inst = Instance::with_min_horizon(net).unwrap();
        assert!(matches!(brute_force_permutations(&inst), Err(Error::TooLarge { items: 9, cap: 8 })));
        let opts = ExactOptions { cap: 4, deadline: None };
        assert!(matches!(exact_subset_dp_with(&inst, opts), Err(Error::TooLarge { .. })));
        let past = ExactOptions { cap: 22, deadline: Some(Instant::now()) };
        assert!(matches!(exact_subset_dp_with(&inst, past), Err(Error::TimeLimit)));
    }

    #[test]
    fn permutation_step() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
    }
}
