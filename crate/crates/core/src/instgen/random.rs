//! Seeded random instance generators.
//!
//! All draws come from xoshiro256** seeded through SplitMix64
//! (`seed_from_u64`). A uniform real is `(next_u64 >> 11) · 2^-53`, a
//! capacity is `1 + next_u64 % u_max`, an orientation bit is `next_u64 >> 63`.
//! Pairs are visited in lexicographic node order, so the same parameters give
//! the same instance on every platform.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netcore::{ArcKind, Instance, Network};

pub(crate) struct Draws(Xoshiro256StarStar);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Draws(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn capacity(&mut self, u_max: u64) -> u64 {
        1 + self.0.next_u64() % u_max
    }

    pub fn bit(&mut self) -> bool {
        self.0.next_u64() >> 63 == 1
    }

    fn kind(&mut self, p: f64) -> ArcKind {
        if self.chance(p) {
            ArcKind::Potential
        } else {
            ArcKind::Existing
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralParams {
    pub n: usize,
    /// Expected density `2|A| / n(n−1)`.
    pub d: f64,
    /// Probability that an arc is potential.
    pub p: f64,
    pub u_max: u64,
    pub seed: u64,
    /// Defaults to `|A_p| + 1`.
    pub horizon: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayeredParams {
    pub layers: usize,
    /// Nodes per layer.
    pub width: usize,
    /// Probability of each arc between consecutive layers.
    pub d: f64,
    pub p: f64,
    pub u_max: u64,
    pub seed: u64,
    pub horizon: Option<u64>,
}

fn check_common(d: f64, p: f64, u_max: u64) -> Result<()> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidParams(format!("density {d} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("potential fraction {p} outside [0, 1]")));
    }
    if u_max < 1 {
        return Err(Error::InvalidParams("u_max must be at least 1".into()));
    }
    Ok(())
}

fn with_horizon(net: Network, horizon: Option<u64>) -> Result<Instance> {
    match horizon {
        Some(t) => Instance::new(net, t),
        None => Instance::with_min_horizon(net),
    }
}

/// Each unordered node pair receives an arc with probability `d`, oriented by
/// a fair coin. Source is node 0, sink is node `n − 1`.
pub fn gen_general(params: &GeneralParams) -> Result<Instance> {
    check_common(params.d, params.p, params.u_max)?;
    if params.n < 2 {
        return Err(Error::InvalidParams("need at least two nodes".into()));
    }
    let n = params.n;
    let mut rng = Draws::new(params.seed);
    let mut net = Network::new(n, 0, n - 1);
    for i in 0..n {
        for j in i + 1..n {
            if !rng.chance(params.d) {
                continue;
            }
            let (tail, head) = if rng.bit() { (j, i) } else { (i, j) };
            let kind = rng.kind(params.p);
            let cap = rng.capacity(params.u_max);
            net.add_arc(tail, head, cap, kind);
        }
    }
    with_horizon(net, params.horizon)
}

/// Source 0, layer `l` holding nodes `1 + l·width ..`, sink last. Boundary
/// arcs are existing with capacity `u_max`; arcs between consecutive layers
/// are drawn per ordered pair with probability `d`.
pub fn gen_layered(params: &LayeredParams) -> Result<Instance> {
    check_common(params.d, params.p, params.u_max)?;
    if params.layers < 2 || params.width < 1 {
        return Err(Error::InvalidParams("need at least two layers of at least one node".into()));
    }
    let (l, w) = (params.layers, params.width);
    let node = |layer: usize, i: usize| 1 + layer * w + i;
    let sink = l * w + 1;
    let mut rng = Draws::new(params.seed);
    let mut net = Network::new(sink + 1, 0, sink);
    for i in 0..w {
        net.add_existing(0, node(0, i), params.u_max);
    }
    for layer in 0..l - 1 {
        for i in 0..w {
            for j in 0..w {
                if !rng.chance(params.d) {
                    continue;
                }
                let kind = rng.kind(params.p);
                let cap = rng.capacity(params.u_max);
                net.add_arc(node(layer, i), node(layer + 1, j), cap, kind);
            }
        }
    }
    for i in 0..w {
        net.add_existing(node(l - 1, i), sink, params.u_max);
    }
    with_horizon(net, params.horizon)
}

/// Unit-capacity bipartite instance: existing arcs `s → v` for `v ∈ V` and
/// `w → t` for `w ∈ W`; each pair `(v, w)` gets an arc with probability `d`,
/// potential with probability `p`. Nodes: `s = 0`, `V = 1..=nv`, then `W`,
/// then `t`.
pub fn gen_bipartite(nv: usize, nw: usize, d: f64, p: f64, seed: u64) -> Result<Instance> {
    check_common(d, p, 1)?;
    if nv == 0 || nw == 0 {
        return Err(Error::InvalidParams("both sides need at least one node".into()));
    }
    let t = nv + nw + 1;
    let mut rng = Draws::new(seed);
    let mut net = Network::new(t + 1, 0, t);
    for v in 1..=nv {
        net.add_existing(0, v, 1);
    }
    for w in nv + 1..=nv + nw {
        net.add_existing(w, t, 1);
    }
    for v in 1..=nv {
        for w in nv + 1..=nv + nw {
            if rng.chance(d) {
                let kind = rng.kind(p);
                net.add_arc(v, w, 1, kind);
            }
        }
    }
    Instance::with_min_horizon(net)
}
