//! Maximum s-t flow by blocking flows on a layered residual graph (Dinic).

use std::collections::VecDeque;

use super::network::{ArcId, ArcSet, Network, NodeId};

/// Integral s-t flow on a network; `flow[a]` is the flow on arc `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    pub flow: Vec<u64>,
}

impl FlowResult {
    pub fn zero(net: &Network) -> Self {
        FlowResult { value: 0, flow: vec![0; net.arc_count()] }
    }

    /// Checks capacity bounds, usability and conservation; the net outflow of
    /// the source must equal `value`.
    pub fn is_feasible(&self, net: &Network, usable: &ArcSet) -> bool {
        if self.flow.len() != net.arc_count() {
            return false;
        }
        for a in net.arcs() {
            let x = self.flow[a.id.0];
            if x > a.capacity || (x > 0 && !usable.contains(a.id)) {
                return false;
            }
        }
        let mut balance = vec![0i128; net.node_count()];
        for a in net.arcs() {
            let x = self.flow[a.id.0] as i128;
            balance[a.tail] -= x;
            balance[a.head] += x;
        }
        (0..net.node_count()).all(|v| {
            if v == net.source() {
                balance[v] == -(self.value as i128)
            } else if v == net.sink() {
                balance[v] == self.value as i128
            } else {
                balance[v] == 0
            }
        })
    }
}

/// Residual-graph bookkeeping shared with the labeling and min-cost routines.
/// Residual edge `2a` is arc `a` forward, `2a + 1` is arc `a` backward.
pub(crate) struct Residual<'n> {
    pub net: &'n Network,
    pub flow: Vec<u64>,
    usable: &'n ArcSet,
}

impl<'n> Residual<'n> {
    pub fn new(net: &'n Network, usable: &'n ArcSet, flow: Vec<u64>) -> Self {
        Residual { net, flow, usable }
    }

    pub fn edges_from(&self, v: NodeId) -> impl Iterator<Item = usize> + '_ {
        let fwd = self.net.out_arcs(v).iter().map(|a| 2 * a.0);
        let bwd = self.net.in_arcs(v).iter().map(|a| 2 * a.0 + 1);
        fwd.chain(bwd).filter(|&e| self.usable.contains(ArcId(e / 2)))
    }

    pub fn head(&self, e: usize) -> NodeId {
        let a = &self.net.arcs()[e / 2];
        if e.is_multiple_of(2) {
            a.head
        } else {
            a.tail
        }
    }

    pub fn residual(&self, e: usize) -> u64 {
        let a = &self.net.arcs()[e / 2];
        if e.is_multiple_of(2) {
            a.capacity - self.flow[a.id.0]
        } else {
            self.flow[a.id.0]
        }
    }

    pub fn push(&mut self, e: usize, amount: u64) {
        if e.is_multiple_of(2) {
            self.flow[e / 2] += amount;
        } else {
            self.flow[e / 2] -= amount;
        }
    }
}

/// Maximum flow using only the arcs in `usable`.
pub fn max_flow(net: &Network, usable: &ArcSet) -> FlowResult {
    max_flow_from(net, usable, FlowResult::zero(net))
}

/// Maximum flow value using only the arcs in `usable`.
pub fn max_flow_value(net: &Network, usable: &ArcSet) -> u64 {
    max_flow(net, usable).value
}

/// Augments a feasible starting flow to a maximum one on `usable`.
pub fn max_flow_from(net: &Network, usable: &ArcSet, start: FlowResult) -> FlowResult {
    let (s, t) = (net.source(), net.sink());
    let mut res = Residual::new(net, usable, start.flow);
    let mut value = start.value;
    let n = net.node_count();
    let mut level = vec![u32::MAX; n];
    let adj: Vec<Vec<usize>> = (0..n).map(|v| res.edges_from(v).collect()).collect();
    let mut next = vec![0usize; n];
    loop {
        level.fill(u32::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                let w = res.head(e);
                if level[w] == u32::MAX && res.residual(e) > 0 {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if level[t] == u32::MAX {
            break;
        }
        next.fill(0);
        loop {
            let pushed = blocking_dfs(&mut res, &adj, &level, &mut next, s, t, u64::MAX);
            if pushed == 0 {
                break;
            }
            value += pushed;
        }
    }
    FlowResult { value, flow: res.flow }
}

fn blocking_dfs(
    res: &mut Residual<'_>,
    adj: &[Vec<usize>],
    level: &[u32],
    next: &mut [usize],
    v: NodeId,
    t: NodeId,
    limit: u64,
) -> u64 {
    if v == t {
        return limit;
    }
    while next[v] < adj[v].len() {
        let e = adj[v][next[v]];
        let w = res.head(e);
        let r = res.residual(e);
        if r > 0 && level[w] == level[v] + 1 {
            let got = blocking_dfs(res, adj, level, next, w, t, limit.min(r));
            if got > 0 {
                res.push(e, got);
                return got;
            }
        }
        next[v] += 1;
    }
    0
}

/// Capacity of the s-t cut whose source side is `side` (arcs restricted to `usable`).
pub fn cut_capacity(net: &Network, usable: &ArcSet, side: &[bool]) -> u64 {
    net.arcs().iter().filter(|a| usable.contains(a.id) && side[a.tail] && !side[a.head]).map(|a| a.capacity).sum()
}
