//! Adversarial families on which each heuristic is provably suboptimal, and
//! two small bipartite matching instances.
//!
//! Most families are built from one gadget: nodes `s, u, v, t` with existing
//! arcs `s → u` and `v → t`, a middle potential path `u → v` of length `m`,
//! and side potential paths `s → v` and `u → t` of length `len` each. Building
//! the middle path gains one unit quickly; the side paths together reach two
//! units.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heur::BuildSchedule;
use crate::netcore::{ArcId, Instance, Network, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
    F5,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::F1, Family::F2, Family::F3, Family::F4, Family::F5];

    /// Smallest `k` for which the family separates the heuristics.
    pub fn k_min(self) -> usize {
        match self {
            Family::F1 => 1,
            Family::F5 => 2,
            Family::F2 | Family::F3 | Family::F4 => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family `{s}` (expected F1..F5)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Matching {
    M1,
    M2,
}

impl FromStr for Matching {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "M1" => Ok(Matching::M1),
            "M2" => Ok(Matching::M2),
            _ => Err(format!("unknown matching instance `{s}` (expected M1 or M2)")),
        }
    }
}

/// Heuristic totals the construction is designed to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedValues {
    pub qi_total: u64,
    pub qtu_total: u64,
    /// Quickest-to-target with [`FamilyInstance::targets`], where given.
    pub qtt_total: Option<u64>,
    /// Polynomial Quickest-increment, where the family is aimed at it.
    pub poly_total: Option<u64>,
    /// Value of [`FamilyInstance::certified`].
    pub best: u64,
    /// Whether `best` is known to be optimal.
    pub best_is_optimal: bool,
}

#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub instance: Instance,
    pub predicted: PredictedValues,
    /// A schedule attaining `predicted.best`.
    pub certified: BuildSchedule,
    /// Flow increments for Quickest-to-target, where the family has them.
    pub targets: Option<Vec<u64>>,
}

struct Gadget {
    middle: Vec<ArcId>,
    left: Vec<ArcId>,
    right: Vec<ArcId>,
}

/// Adds the gadget between `s` and `t` and returns its three paths.
fn add_gadget(net: &mut Network, s: NodeId, t: NodeId, m: usize, len: usize) -> Gadget {
    let u = net.add_node();
    let v = net.add_node();
    net.add_existing(s, u, 1);
    net.add_existing(v, t, 1);
    let middle = net.add_potential_path(u, v, m, 1);
    let left = net.add_potential_path(s, v, len, 1);
    let right = net.add_potential_path(u, t, len, 1);
    Gadget { middle, left, right }
}

fn concat(parts: &[&[ArcId]]) -> BuildSchedule {
    BuildSchedule::new(parts.iter().flat_map(|p| p.iter().copied()).collect())
}

pub fn gen_family(which: Family, k: usize) -> Result<FamilyInstance> {
    if k < which.k_min() {
        return Err(Error::KTooSmall { family: which.to_string(), k, k_min: which.k_min() });
    }
    let kk = k as u64;
    let fi = match which {
        Family::F1 => {
            // Upper arc: large capacity behind two parallel routes of half
            // the size. Lower arc: smaller capacity on a single route.
            let mut net = Network::new(5, 0, 4);
            let upper = net.add_potential(0, 1, 4 * kk);
            net.add_existing(1, 4, 2 * kk);
            net.add_existing(1, 2, 2 * kk);
            net.add_existing(2, 4, 2 * kk);
            net.add_potential(0, 3, 3 * kk);
            net.add_existing(3, 4, 3 * kk);
            let instance = Instance::new(net, 3)?;
            FamilyInstance {
                instance,
                predicted: PredictedValues {
                    qi_total: 11 * kk,
                    qtu_total: 11 * kk,
                    qtt_total: None,
                    poly_total: Some(10 * kk),
                    best: 11 * kk,
                    best_is_optimal: true,
                },
                certified: BuildSchedule::new(vec![upper, ArcId(4)]),
                targets: None,
            }
        }
        Family::F2 => {
            let mut net = Network::new(2, 0, 1);
            let g = add_gadget(&mut net, 0, 1, 1, k);
            let horizon = 2 * kk + 2;
            FamilyInstance {
                instance: Instance::new(net, horizon)?,
                predicted: PredictedValues {
                    qi_total: 2 * kk + 2,
                    qtu_total: kk + 4,
                    qtt_total: None,
                    poly_total: None,
                    best: 2 * kk + 2,
                    best_is_optimal: true,
                },
                certified: concat(&[&g.middle, &g.left, &g.right]),
                targets: None,
            }
        }
        Family::F3 => {
            let mut net = Network::new(2, 0, 1);
            let g = add_gadget(&mut net, 0, 1, k - 1, k);
            FamilyInstance {
                instance: Instance::new(net, 3 * kk)?,
                predicted: PredictedValues {
                    qi_total: 2 * kk + 2,
                    qtu_total: 3 * kk,
                    qtt_total: None,
                    poly_total: None,
                    best: 3 * kk,
                    best_is_optimal: true,
                },
                certified: concat(&[&g.left, &g.right, &g.middle]),
                targets: None,
            }
        }
        Family::F4 => {
            // The F2 and F3 gadgets side by side.
            let mut net = Network::new(2, 0, 1);
            let a = add_gadget(&mut net, 0, 1, 1, k);
            let b = add_gadget(&mut net, 0, 1, k - 1, k);
            FamilyInstance {
                instance: Instance::new(net, 5 * kk + 1)?,
                predicted: PredictedValues {
                    qi_total: 11 * kk + 3,
                    qtu_total: 10 * kk + 4,
                    qtt_total: Some(13 * kk),
                    poly_total: None,
                    best: 13 * kk,
                    best_is_optimal: false,
                },
                certified: concat(&[&a.middle, &b.left, &b.right, &a.left, &a.right, &b.middle]),
                targets: Some(vec![1, 4]),
            }
        }
        Family::F5 => {
            let (s, a, b, c, d, t) = (0, 1, 2, 3, 4, 5);
            let mut net = Network::new(6, s, t);
            net.add_existing(s, a, 1);
            net.add_existing(b, t, 1);
            net.add_existing(s, d, 1);
            net.add_existing(c, t, 1);
            let middle = net.add_potential_path(a, b, k - 1, 1);
            let left = net.add_potential_path(d, b, k, 1);
            let right = net.add_potential_path(a, c, k, 1);
            let quick_a = net.add_potential_path(a, t, k + 1, 1);
            let quick_b = net.add_potential_path(s, b, k + 1, 1);
            let long = net.add_potential_path(d, c, 2 * k + 1, 1);
            FamilyInstance {
                instance: Instance::new(net, 7 * kk + 3)?,
                predicted: PredictedValues {
                    qi_total: 10 * kk + 9,
                    qtu_total: 14 * kk + 3,
                    qtt_total: None,
                    poly_total: None,
                    best: 14 * kk + 3,
                    best_is_optimal: false,
                },
                certified: concat(&[&quick_a, &quick_b, &long, &middle, &left, &right]),
                targets: None,
            }
        }
    };
    Ok(fi)
}

/// Bipartite instance with `V` the odd and `W` the even nodes of `1..=2h`,
/// source 0 and sink `2h + 1`.
fn bipartite(
    h: usize,
    existing: &[(usize, usize)],
    potential: &[(usize, usize)],
    horizon: u64,
) -> Result<(Instance, Vec<ArcId>)> {
    let t = 2 * h + 1;
    let mut net = Network::new(t + 1, 0, t);
    for v in (1..=2 * h).step_by(2) {
        net.add_existing(0, v, 1);
    }
    for w in (2..=2 * h).step_by(2) {
        net.add_existing(w, t, 1);
    }
    for &(v, w) in existing {
        net.add_existing(v, w, 1);
    }
    let ids = potential.iter().map(|&(v, w)| net.add_potential(v, w, 1)).collect();
    Ok((Instance::new(net, horizon)?, ids))
}

/// `M1`: Quickest-to-ultimate falls one short of the best schedule.
/// `M2`: Quickest-increment falls one short.
pub fn gen_matching(which: Matching) -> Result<FamilyInstance> {
    match which {
        Matching::M1 => {
            let existing = [(1, 4), (3, 6), (5, 8), (11, 10), (13, 12), (15, 14)];
            let mut potential: Vec<(usize, usize)> = (1..=15).step_by(2).map(|v| (v, v + 1)).collect();
            potential.push((9, 4));
            let (instance, ids) = bipartite(8, &existing, &potential, 10)?;
            let mut order = vec![ids[0], ids[8]];
            order.extend_from_slice(&ids[1..8]);
            Ok(FamilyInstance {
                instance,
                predicted: PredictedValues {
                    qi_total: 69,
                    qtu_total: 68,
                    qtt_total: None,
                    poly_total: None,
                    best: 69,
                    best_is_optimal: true,
                },
                certified: BuildSchedule::new(order),
                targets: None,
            })
        }
        Matching::M2 => {
            let existing = [(3, 6), (1, 4), (7, 8), (9, 12), (11, 14)];
            let potential = [(1, 2), (3, 4), (5, 6), (9, 10), (11, 12), (13, 14), (5, 8), (7, 10)];
            let (instance, ids) = bipartite(7, &existing, &potential, 9)?;
            Ok(FamilyInstance {
                instance,
                predicted: PredictedValues {
                    qi_total: 53,
                    qtu_total: 54,
                    qtt_total: None,
                    poly_total: None,
                    best: 54,
                    best_is_optimal: true,
                },
                certified: BuildSchedule::new(ids),
                targets: None,
            })
        }
    }
}
