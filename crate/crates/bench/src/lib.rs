//! Fixed instances shared by the criterion benchmarks.

use incflow::instgen::{gen_family, gen_general, gen_layered, Family, GeneralParams, LayeredParams};
use incflow::Instance;

pub fn general(n: usize, u_max: u64, seed: u64) -> Instance {
    gen_general(&GeneralParams { n, d: 0.3, p: 0.5, u_max, seed, horizon: None }).expect("valid parameters")
}

pub fn layered(layers: usize, width: usize, u_max: u64, seed: u64) -> Instance {
    gen_layered(&LayeredParams { layers, width, d: 0.5, p: 0.5, u_max, seed, horizon: None }).expect("valid parameters")
}

pub fn family(which: Family, k: usize) -> Instance {
    gen_family(which, k).expect("k is large enough").instance
}

/// Instances with at most `cap` potential arcs, for the exhaustive solvers.
pub fn small_general(cap: usize, seed: u64) -> Instance {
    (seed..)
        .map(|s| general(7, 3, s))
        .find(|inst| inst.network.potential_count() <= cap && inst.network.potential_count() >= cap - 1)
        .expect("some seed fits")
}
