//! Numerical checks of the approximation bounds against exact optima.
//!
//! All comparisons are carried out on integers, scaled where a bound has a
//! fractional coefficient.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::exact_subset_dp;
use crate::heur::{quickest_increment_all, quickest_to_ultimate};
use crate::instgen::random::Draws;
use crate::instgen::{gen_bipartite, gen_general, gen_layered, GeneralParams, LayeredParams};
use crate::netcore::{max_flow_value, Instance, Network, NodeId};
use crate::subprob::c_values;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioRecord {
    pub id: String,
    pub z_star: u64,
    /// Quickest-to-ultimate.
    pub z1: u64,
    /// Quickest-increment.
    pub z2: u64,
    pub r: u64,
    pub f: u64,
    #[serde(rename = "F")]
    pub ultimate: u64,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub c: Vec<u64>,
    /// Periods at flow `f + i` for `i < r` under Quickest-to-ultimate.
    pub lambda: Vec<u64>,
    /// Same for Quickest-increment.
    pub mu: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn verdict(name: &'static str, passed: bool, detail: String) -> Verdict {
    Verdict { name, passed, detail }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub record: RatioRecord,
    pub verdicts: Vec<Verdict>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

fn record(inst: &Instance, id: &str) -> Result<RatioRecord> {
    let net = &inst.network;
    net.require_unit_capacity()?;
    let c = c_values(net)?;
    let f = max_flow_value(net, &net.existing_set());
    let ultimate = max_flow_value(net, &net.all_arcs());
    let r = ultimate - f;
    let qtu = quickest_to_ultimate(inst)?;
    let qi = quickest_increment_all(inst)?;
    let exact = exact_subset_dp(inst)?;
    let below = |counts: Vec<u64>| counts[..r as usize].to_vec();
    Ok(RatioRecord {
        id: id.to_string(),
        z_star: exact.optimum,
        z1: qtu.total,
        z2: qi.total,
        r,
        f,
        ultimate,
        horizon: inst.horizon,
        c: c.c,
        lambda: below(qtu.level_counts(f, r)),
        mu: below(qi.level_counts(f, r)),
    })
}

fn nondecreasing(v: &[u64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

/// Trace identity: `z = TF − Σ_i counts_i (r − i)`.
fn identity(rec: &RatioRecord, counts: &[u64]) -> i128 {
    let tf = (rec.horizon * rec.ultimate) as i128;
    tf - counts.iter().enumerate().map(|(i, &n)| n as i128 * (rec.r as i128 - i as i128)).sum::<i128>()
}

/// Runs both heuristics and the exact solver on a unit-capacity instance and
/// checks every bound relating them.
pub fn check_instance(inst: &Instance, id: &str) -> Result<CheckOutcome> {
    let rec = record(inst, id)?;
    let (zs, z1, z2, r) = (rec.z_star as i128, rec.z1 as i128, rec.z2 as i128, rec.r as i128);
    let tf = (rec.horizon * rec.ultimate) as i128;
    let csum: i128 = rec.c.iter().map(|&x| x as i128).sum();
    let mut v = Vec::new();
    v.push(verdict("heuristics_below_optimum", z1 <= zs && z2 <= zs, format!("z1 = {z1}, z2 = {z2}, z* = {zs}")));
    v.push(verdict("c_bound", zs <= tf - csum, format!("z* = {zs} <= TF - sum c = {}", tf - csum)));
    let cr = *rec.c.last().unwrap() as i128;
    let weak = tf - r * (r - 1).max(0) / 2 - cr;
    v.push(verdict("c_bound_weak", zs <= weak, format!("z* = {zs} <= {weak}")));
    let (id1, id2) = (identity(&rec, &rec.lambda), identity(&rec, &rec.mu));
    v.push(verdict("trace_identity", id1 == z1 && id2 == z2, format!("z1 = {z1} vs {id1}, z2 = {z2} vs {id2}")));
    v.push(verdict(
        "monotone_counts",
        nondecreasing(&rec.lambda) && nondecreasing(&rec.mu),
        format!("lambda = {:?}, mu = {:?}", rec.lambda, rec.mu),
    ));
    let mut mu_ok = true;
    let mut mu_detail = String::from("ok");
    'outer: for (i, &m) in rec.mu.iter().enumerate() {
        for j in i + 1..=rec.r as usize {
            if (j - i) as u64 * m > rec.c[j] {
                mu_ok = false;
                mu_detail = format!("({j} - {i}) * mu_{i} = {} > c_{j} = {}", (j - i) as u64 * m, rec.c[j]);
                break 'outer;
            }
        }
    }
    v.push(verdict("mu_by_c", mu_ok, mu_detail));
    v.push(verdict("qtu_ratio_2", zs <= 2 * z1, format!("z* = {zs} <= 2 z1 = {}", 2 * z1)));
    let sharp = 2 * z1 - r * (r - 1).max(0) / 2;
    v.push(verdict("qtu_ratio_2_sharp", zs <= sharp, format!("z* = {zs} <= 2 z1 - r(r-1)/2 = {sharp}")));
    v.push(verdict("qi_ratio_3_2", 2 * zs <= 3 * z2, format!("2 z* = {} <= 3 z2 = {}", 2 * zs, 3 * z2)));
    Ok(CheckOutcome { record: rec, verdicts: v })
}

/// Sides `(V, W)` of a matching instance: existing unit arcs `s → v` for all
/// of `V`, `w → t` for all of `W`, every other arc from `V` to `W`.
pub fn matching_sides(net: &Network) -> Result<(Vec<NodeId>, Vec<NodeId>)> {
    let bad = |m: String| Err(Error::NotMatchingStructure(m));
    if !net.is_unit_capacity() {
        return bad("capacities must all be 1".into());
    }
    let (s, t) = (net.source(), net.sink());
    let mut side = vec![0u8; net.node_count()];
    for &a in net.out_arcs(s) {
        let arc = net.arc(a);
        if arc.is_potential() || arc.head == t {
            return bad(format!("source arc {a} must be existing and end in V"));
        }
        side[arc.head] |= 1;
    }
    for &a in net.in_arcs(t) {
        let arc = net.arc(a);
        if arc.is_potential() || arc.tail == s {
            return bad(format!("sink arc {a} must be existing and start in W"));
        }
        side[arc.tail] |= 2;
    }
    if !net.in_arcs(s).is_empty() || !net.out_arcs(t).is_empty() {
        return bad("no arc may enter the source or leave the sink".into());
    }
    for (v, &mark) in side.iter().enumerate() {
        if v != s && v != t && mark != 1 && mark != 2 {
            return bad(format!("node {v} is not on exactly one side"));
        }
    }
    for a in net.arcs() {
        if a.tail != s && a.head != t && (side[a.tail] != 1 || side[a.head] != 2) {
            return bad(format!("arc {} does not run from V to W", a.id));
        }
    }
    let pick = |k: u8| (0..net.node_count()).filter(|&v| v != s && v != t && side[v] == k).collect();
    Ok((pick(1), pick(2)))
}

/// Checks for the bipartite matching special case.
pub fn check_matching_instance(inst: &Instance, id: &str) -> Result<CheckOutcome> {
    matching_sides(&inst.network)?;
    let rec = record(inst, id)?;
    let (zs, z1) = (rec.z_star as i128, rec.z1 as i128);
    let (r, f, ff) = (rec.r as i128, rec.f as i128, rec.ultimate as i128);
    let tf = (rec.horizon * rec.ultimate) as i128;
    let cr = *rec.c.last().unwrap() as i128;
    let mut v = Vec::new();
    v.push(verdict("qtu_ratio_4_3", 3 * zs <= 4 * z1, format!("3 z* = {} <= 4 z1 = {}", 3 * zs, 4 * z1)));
    if f >= r {
        let rhs = 2 * tf - cr * (r + 1);
        v.push(verdict("z1_lower_bound", 2 * z1 >= rhs, format!("2 z1 = {} >= 2TF - c_r(r+1) = {rhs}", 2 * z1)));
    } else {
        let rhs = 4 * tf - (cr * ff + r * (r - f) + 2 * cr);
        v.push(verdict(
            "z1_lower_bound",
            4 * z1 >= rhs,
            format!("4 z1 = {} >= 4TF - [c_r F + r(r-f) + 2c_r] = {rhs}", 4 * z1),
        ));
    }
    // Averaging with weights α_i = r − i against the nondecreasing λ_i.
    let n = rec.lambda.len() as i128;
    let b: i128 = rec.lambda.iter().map(|&x| x as i128).sum();
    let alpha: Vec<i128> = (0..n).map(|i| r - i).collect();
    let lhs: i128 = n * alpha.iter().zip(&rec.lambda).map(|(a, &l)| a * l as i128).sum::<i128>();
    let rhs = b * alpha.iter().sum::<i128>();
    v.push(verdict("averaging", lhs <= rhs, format!("n sum(alpha lambda) = {lhs} <= B sum(alpha) = {rhs}")));
    v.push(verdict("lambda_sum_is_c_r", b == cr, format!("sum lambda = {b}, c_r = {cr}")));
    Ok(CheckOutcome { record: rec, verdicts: v })
}

/// Largest number of potential arcs in fuzz instances.
pub const FUZZ_POTENTIAL_CAP: usize = 8;

fn gap(inst: &Instance) -> u64 {
    let net = &inst.network;
    max_flow_value(net, &net.all_arcs()) - max_flow_value(net, &net.existing_set())
}

/// Small random unit-capacity instance number `index` of stream `seed`,
/// alternating general and layered topologies; `F > f` always, and
/// instances with `F − f = 1` are thinned out in favour of larger gaps.
pub fn fuzz_unit_instance(seed: u64, index: u64) -> Instance {
    let mut draws = Draws::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    loop {
        let sub = draws.capacity(u64::MAX);
        let d = [0.5, 0.7, 0.9][draws.capacity(3) as usize - 1];
        let p = [0.2, 0.35, 0.5][draws.capacity(3) as usize - 1];
        let inst = if index.is_multiple_of(2) {
            let n = 3 + draws.capacity(7) as usize;
            gen_general(&GeneralParams { n, d, p, u_max: 1, seed: sub, horizon: None })
        } else {
            let layers = 1 + draws.capacity(3) as usize;
            let width = 1 + draws.capacity(3) as usize;
            gen_layered(&LayeredParams { layers, width, d, p, u_max: 1, seed: sub, horizon: None })
        };
        let inst = inst.expect("fuzz parameters are valid");
        let r = gap(&inst);
        let keep = r > 1 || (r == 1 && draws.chance(0.25));
        if inst.network.potential_count() <= FUZZ_POTENTIAL_CAP && keep {
            return inst;
        }
    }
}

/// Small random bipartite instance with two to six nodes per side and `F > f`.
pub fn fuzz_matching_instance(seed: u64, index: u64) -> Instance {
    let mut draws = Draws::new(seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    loop {
        let nv = 1 + draws.capacity(5) as usize;
        let nw = 1 + draws.capacity(5) as usize;
        let d = [0.3, 0.5, 0.7][draws.capacity(3) as usize - 1];
        let p = [0.3, 0.5, 0.7][draws.capacity(3) as usize - 1];
        let inst = gen_bipartite(nv, nw, d, p, draws.capacity(u64::MAX)).expect("valid parameters");
        if inst.network.potential_count() <= 12 && gap(&inst) > 0 {
            return inst;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    UnitCapacity,
    Matching,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unit-capacity" => Ok(Suite::UnitCapacity),
            "matching" => Ok(Suite::Matching),
            _ => Err(format!("unknown suite `{s}` (expected unit-capacity or matching)")),
        }
    }
}

/// Runs `count` random instances of a suite in parallel, ordered by index.
pub fn run_suite(suite: Suite, count: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    (0..count)
        .into_par_iter()
        .map(|i| match suite {
            Suite::UnitCapacity => check_instance(&fuzz_unit_instance(seed, i), &format!("unit-{seed}-{i}")),
            Suite::Matching => {
                check_matching_instance(&fuzz_matching_instance(seed, i), &format!("matching-{seed}-{i}"))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{gen_family, gen_matching, Family, Matching};

    #[test]
    fn trivial_instance_passes() {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        let inst = Instance::new(net, 2).unwrap();
        let out = check_instance(&inst, "trivial").unwrap();
        assert!(out.passed());
        assert_eq!(out.record.z_star, 2);
        assert_eq!(out.record.z1, 2);
    }

    #[test]
    fn second_family_ratio() {
        let inst = gen_family(Family::F2, 10).unwrap().instance;
        let out = check_instance(&inst, "F2").unwrap();
        assert!(out.passed(), "{:?}", out.failures().collect::<Vec<_>>());
        assert_eq!((out.record.z_star, out.record.z1), (22, 14));
    }

    #[test]
    fn matching_structure() {
        let m1 = gen_matching(Matching::M1).unwrap().instance;
        let (v, w) = matching_sides(&m1.network).unwrap();
        assert_eq!((v.len(), w.len()), (8, 8));
        let f2 = gen_family(Family::F2, 3).unwrap().instance;
        assert!(matches!(check_matching_instance(&f2, "x"), Err(Error::NotMatchingStructure(_))));
    }

    #[test]
    fn general_capacities_rejected() {
        let inst = gen_family(Family::F1, 1).unwrap().instance;
        assert!(matches!(check_instance(&inst, "F1"), Err(Error::UnitCapacityRequired { .. })));
    }

    #[test]
    fn fuzz_instances_are_small_and_unit() {
        for i in 0..20 {
            let inst = fuzz_unit_instance(1, i);
            assert!(inst.network.potential_count() <= FUZZ_POTENTIAL_CAP);
            assert!(inst.network.is_unit_capacity());
            matching_sides(&fuzz_matching_instance(1, i).network).unwrap();
        }
    }
}
