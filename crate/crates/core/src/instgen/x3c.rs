//! Reduction from Exact Cover by 3-Sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netcore::{Instance, Network};

/// Universe `{1, …, 3n}` and a collection of 3-element subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3CInstance {
    pub n: usize,
    pub sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidX3C("universe must be nonempty".into()));
        }
        for (i, s) in self.sets.iter().enumerate() {
            if s.iter().any(|&e| e == 0 || e > 3 * self.n) {
                return Err(Error::InvalidX3C(format!("set {i} has an element outside 1..={}", 3 * self.n)));
            }
            if s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
                return Err(Error::InvalidX3C(format!("set {i} repeats an element")));
            }
        }
        Ok(())
    }

    /// Whether some subcollection covers every element exactly once.
    pub fn has_exact_cover(&self) -> bool {
        fn go(sets: &[[usize; 3]], covered: &mut [bool], left: usize) -> bool {
            if left == 0 {
                return true;
            }
            let e = covered.iter().position(|c| !c).unwrap();
            for s in sets.iter().filter(|s| s.contains(&(e + 1))) {
                if s.iter().all(|&x| !covered[x - 1]) {
                    s.iter().for_each(|&x| covered[x - 1] = true);
                    if go(sets, covered, left - 3) {
                        return true;
                    }
                    s.iter().for_each(|&x| covered[x - 1] = false);
                }
            }
            false
        }
        go(&self.sets, &mut vec![false; 3 * self.n], 3 * self.n)
    }
}

/// Source `s`, one node per set, one node per element, sink `t`. Each set
/// node gets a potential arc of capacity 3 from `s` and existing unit arcs to
/// its elements; every element has an existing unit arc to `t`.
pub fn gen_x3c(x: &X3CInstance, horizon: u64) -> Result<Instance> {
    x.validate()?;
    let m = x.sets.len();
    let element = |e: usize| m + e;
    let t = m + 3 * x.n + 1;
    let mut net = Network::new(t + 1, 0, t);
    for i in 0..m {
        net.add_potential(0, 1 + i, 3);
    }
    for (i, s) in x.sets.iter().enumerate() {
        for &e in s {
            net.add_existing(1 + i, element(e), 1);
        }
    }
    for e in 1..=3 * x.n {
        net.add_existing(element(e), t, 1);
    }
    Instance::new(net, horizon)
}

/// Cumulative flow reached exactly when an exact cover exists:
/// `3·(0 + 1 + … + (n−1)) + 3n(T − n)`.
pub fn x3c_bound(n: usize, horizon: u64) -> u64 {
    let n = n as u64;
    3 * n * (n.saturating_sub(1)) / 2 + 3 * n * (horizon - n)
}
