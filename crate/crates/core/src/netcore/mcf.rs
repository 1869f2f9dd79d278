//! Successive shortest augmenting paths for the fixed-charge subproblem
//! when every potential arc has unit capacity: each unit of flow on an unbuilt
//! potential arc then means building that arc, so arc count equals flow cost.

use std::collections::VecDeque;

use super::maxflow::{FlowResult, Residual};
use super::network::{ArcId, ArcSet, Network};
use crate::error::Result;

/// Cost profile of a min-cost flow computation: `costs[v]` is the minimum
/// number of charged arcs carrying flow in a flow of value `v`.
#[derive(Debug, Clone)]
pub(crate) struct CostProfile {
    pub costs: Vec<u64>,
    pub flow: FlowResult,
}

/// Runs successive unit augmentations along cheapest residual paths until
/// `limit` units have been routed or no augmenting path is left. Arcs in
/// `free` cost nothing, arcs in `charged` cost one; other arcs are unusable.
pub(crate) fn unit_cost_profile(net: &Network, free: &ArcSet, charged: &ArcSet, limit: u64) -> CostProfile {
    let usable = free.union(charged);
    let mut res = Residual::new(net, &usable, vec![0; net.arc_count()]);
    let (s, t) = (net.source(), net.sink());
    let cost_of = |e: usize| -> i64 {
        let c = i64::from(charged.contains(ArcId(e / 2)));
        if e.is_multiple_of(2) {
            c
        } else {
            -c
        }
    };
    let n = net.node_count();
    let mut costs = vec![0u64];
    let mut total = 0i64;
    while (costs.len() as u64) <= limit {
        // Bellman-Ford with a FIFO queue; the residual graph of a min-cost flow
        // carries no negative cycle.
        let mut dist = vec![i64::MAX; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut in_queue = vec![false; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        in_queue[s] = true;
        while let Some(v) = queue.pop_front() {
            in_queue[v] = false;
            for e in res.edges_from(v) {
                if res.residual(e) == 0 {
                    continue;
                }
                let w = res.head(e);
                let nd = dist[v] + cost_of(e);
                if nd < dist[w] {
                    dist[w] = nd;
                    pred[w] = Some(e);
                    if !in_queue[w] {
                        in_queue[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        if dist[t] == i64::MAX {
            break;
        }
        let mut v = t;
        while v != s {
            let e = pred[v].expect("predecessor on shortest path");
            res.push(e, 1);
            v = res.head(e ^ 1);
        }
        total += dist[t];
        costs.push(total as u64);
    }
    let value = costs.len() as u64 - 1;
    CostProfile { costs, flow: FlowResult { value, flow: res.flow } }
}

/// Minimum number of potential arcs outside `built` that must carry flow in an
/// s-t flow of value exactly `target`. Requires every arc to have capacity 1.
/// Returns `None` when `target` exceeds the ultimate maximum flow.
pub fn min_cost_flow_unit(net: &Network, built: &ArcSet, target: u64) -> Result<Option<(u64, FlowResult)>> {
    net.require_unit_capacity()?;
    let free = net.existing_set().union(built);
    let charged = net.potential_set().difference(built);
    Ok(unit_cost_flow(net, &free, &charged, target))
}

pub(crate) fn unit_cost_flow(net: &Network, free: &ArcSet, charged: &ArcSet, target: u64) -> Option<(u64, FlowResult)> {
    let profile = unit_cost_profile(net, free, charged, target);
    if profile.flow.value < target {
        return None;
    }
    Some((profile.costs[target as usize], profile.flow))
}
