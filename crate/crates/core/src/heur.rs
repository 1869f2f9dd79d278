//! Schedule evaluation and the greedy build-order heuristics.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::netcore::{
    augment, check_horizon, max_flow, max_flow_from, max_flow_value, residual_labels, ArcId, ArcSet, Instance,
};
use crate::subprob::{max_val, max_val_within, min_arcs, min_arcs_within};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Quickest-increment.
    Qi,
    /// Quickest-increment with residual labels instead of exact subproblems.
    QiPoly,
    /// Quickest-to-ultimate.
    Qtu,
    /// Quickest-to-target.
    Qtt,
    Exact,
    /// A schedule supplied by the caller.
    Given,
}

impl Method {
    pub const HEURISTICS: [Method; 4] = [Method::Qi, Method::QiPoly, Method::Qtu, Method::Qtt];

    pub fn name(self) -> &'static str {
        match self {
            Method::Qi => "qi",
            Method::QiPoly => "qi-poly",
            Method::Qtu => "qtu",
            Method::Qtt => "qtt",
            Method::Exact => "exact",
            Method::Given => "given",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Method::Qi, Method::QiPoly, Method::Qtu, Method::Qtt, Method::Exact, Method::Given]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected qi, qi-poly, qtu, qtt or exact)"))
    }
}

/// Potential arcs in build order; the arc at position `i` is built in period
/// `i + 1` and usable from period `i + 2` on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BuildSchedule {
    pub order: Vec<ArcId>,
}

impl BuildSchedule {
    pub fn new(order: Vec<ArcId>) -> Self {
        BuildSchedule { order }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub schedule: BuildSchedule,
    /// Maximum flow value of each period `1..=T`.
    pub period_flows: Vec<u64>,
    pub total: u64,
    /// Runs of equal flow: `(flow level, number of periods)`.
    pub trace: Vec<(u64, u64)>,
    #[serde(rename = "elapsed_s", serialize_with = "as_secs")]
    pub elapsed: Duration,
}

fn as_secs<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SolveReport {
    /// Number of periods spent at flow `f + i` for `i = 0..=r`.
    pub fn level_counts(&self, f: u64, r: u64) -> Vec<u64> {
        level_counts(&self.period_flows, f, r)
    }
}

pub fn level_counts(period_flows: &[u64], f: u64, r: u64) -> Vec<u64> {
    let mut counts = vec![0; r as usize + 1];
    for &v in period_flows {
        if v >= f && v - f <= r {
            counts[(v - f) as usize] += 1;
        }
    }
    counts
}

fn validate_schedule(inst: &Instance, schedule: &BuildSchedule) -> Result<()> {
    let net = &inst.network;
    check_horizon(net, inst.horizon)?;
    let mut seen = ArcSet::empty(net.arc_count());
    for &a in &schedule.order {
        if a.0 >= net.arc_count() {
            return Err(Error::InvalidSchedule(format!("arc {a} does not exist")));
        }
        if !net.arc(a).is_potential() {
            return Err(Error::InvalidSchedule(format!("arc {a} is not a potential arc")));
        }
        if !seen.insert(a) {
            return Err(Error::InvalidSchedule(format!("arc {a} is scheduled twice")));
        }
    }
    Ok(())
}

/// Period flows and cumulative flow of building `schedule` one arc per period.
pub fn evaluate_schedule(inst: &Instance, schedule: &BuildSchedule) -> Result<SolveReport> {
    let started = Instant::now();
    validate_schedule(inst, schedule)?;
    let net = &inst.network;
    let mut usable = net.existing_set();
    let mut flow = max_flow(net, &usable);
    let mut period_flows = Vec::with_capacity(inst.horizon as usize);
    for k in 0..inst.horizon as usize {
        if k > 0 && k <= schedule.len() {
            usable.insert(schedule.order[k - 1]);
            flow = max_flow_from(net, &usable, flow);
        }
        period_flows.push(flow.value);
    }
    Ok(report(Method::Given, schedule.clone(), period_flows, started))
}

fn report(method: Method, schedule: BuildSchedule, period_flows: Vec<u64>, started: Instant) -> SolveReport {
    let total = period_flows.iter().sum();
    let mut trace: Vec<(u64, u64)> = Vec::new();
    for &v in &period_flows {
        match trace.last_mut() {
            Some((level, count)) if *level == v => *count += 1,
            _ => trace.push((v, 1)),
        }
    }
    SolveReport { method, schedule, period_flows, total, trace, elapsed: started.elapsed() }
}

fn finish(inst: &Instance, method: Method, order: Vec<ArcId>, started: Instant) -> Result<SolveReport> {
    let mut rep = evaluate_schedule(inst, &BuildSchedule::new(order))?;
    rep.method = method;
    rep.elapsed = started.elapsed();
    Ok(rep)
}

/// Build order of repeatedly adding the fewest arcs that raise the flow by
/// one unit, choosing among those the arcs giving the largest flow.
fn increment_order(inst: &Instance, allowed: &ArcSet) -> Vec<ArcId> {
    let net = &inst.network;
    let mut built = ArcSet::empty(net.arc_count());
    let mut current = max_flow_value(net, &net.existing_set());
    let ceiling = max_flow_value(net, &net.existing_set().union(allowed));
    let mut order = Vec::new();
    while current < ceiling {
        let Some(step) = min_arcs_within(net, &built, allowed, current + 1) else { break };
        let (xi, chosen) = max_val_within(net, &built, allowed, step.z_star).expect("min_arcs budget is attainable");
        for &a in &chosen {
            built.insert(a);
        }
        order.extend(chosen);
        current = xi;
    }
    order
}

/// Quickest-increment over the potential arcs in `allowed`.
pub fn quickest_increment(inst: &Instance, allowed: &ArcSet) -> Result<SolveReport> {
    let started = Instant::now();
    check_horizon(&inst.network, inst.horizon)?;
    let allowed = allowed.difference(&inst.network.existing_set());
    let order = increment_order(inst, &allowed);
    finish(inst, Method::Qi, order, started)
}

/// Quickest-increment over all potential arcs.
pub fn quickest_increment_all(inst: &Instance) -> Result<SolveReport> {
    quickest_increment(inst, &inst.network.potential_set())
}

/// Quickest-increment with subproblems replaced by residual labels: augment
/// along a path with the fewest new arcs and, among those, the largest
/// bottleneck.
pub fn quickest_increment_poly(inst: &Instance) -> Result<SolveReport> {
    let started = Instant::now();
    check_horizon(&inst.network, inst.horizon)?;
    let net = &inst.network;
    let mut built = ArcSet::empty(net.arc_count());
    let mut flow = max_flow(net, &net.existing_set());
    let mut order = Vec::new();
    loop {
        let labels = residual_labels(net, &built, &flow);
        let t = net.sink();
        let Some(path) = labels.path_to(net, t) else { break };
        for step in &path {
            if step.forward && net.arc(step.arc).is_potential() && built.insert(step.arc) {
                order.push(step.arc);
            }
        }
        augment(&mut flow, &path, labels.delta[t]);
    }
    finish(inst, Method::QiPoly, order, started)
}

/// Quickest-to-ultimate: restrict to a smallest arc set admitting the
/// ultimate flow, then order it by Quickest-increment.
pub fn quickest_to_ultimate(inst: &Instance) -> Result<SolveReport> {
    let started = Instant::now();
    check_horizon(&inst.network, inst.horizon)?;
    let net = &inst.network;
    let empty = ArcSet::empty(net.arc_count());
    let ultimate = max_flow_value(net, &net.all_arcs());
    let z = min_arcs(net, &empty, ultimate).expect("ultimate flow is attainable").z_star;
    let (_, chosen) = max_val(net, &empty, z)?;
    let allowed = ArcSet::from_ids(net.arc_count(), chosen);
    let order = increment_order(inst, &allowed);
    finish(inst, Method::Qtu, order, started)
}

/// Targets `⌊r/2⌋, r`, collapsing to `[r]` when `r < 2`.
pub fn default_targets(r: u64) -> Vec<u64> {
    match r {
        0 => Vec::new(),
        1 => vec![1],
        _ => vec![r / 2, r],
    }
}

/// Quickest-to-target with flow increments `targets` over the initial flow;
/// the sequence must be strictly increasing, positive, and end at `r`.
pub fn quickest_to_target(inst: &Instance, targets: &[u64]) -> Result<SolveReport> {
    let started = Instant::now();
    check_horizon(&inst.network, inst.horizon)?;
    let net = &inst.network;
    let f = max_flow_value(net, &net.existing_set());
    let r = max_flow_value(net, &net.all_arcs()) - f;
    check_targets(targets, r)?;
    let mut built = ArcSet::empty(net.arc_count());
    let mut order = Vec::new();
    for &ri in targets {
        let z = min_arcs(net, &built, f + ri).expect("targets stay within the ultimate flow").z_star;
        let (_, chosen) = max_val(net, &built, z)?;
        for a in chosen {
            built.insert(a);
        }
        order = increment_order(inst, &built);
    }
    finish(inst, Method::Qtt, order, started)
}

fn check_targets(targets: &[u64], r: u64) -> Result<()> {
    if targets.is_empty() {
        return if r == 0 {
            Ok(())
        } else {
            Err(Error::BadTargets(format!("empty sequence, expected to end at r = {r}")))
        };
    }
    if targets[0] == 0 {
        return Err(Error::BadTargets("targets must be positive".into()));
    }
    if targets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadTargets(format!("{targets:?} is not strictly increasing")));
    }
    if *targets.last().unwrap() != r {
        return Err(Error::BadTargets(format!("last target must equal r = {r}")));
    }
    Ok(())
}

/// Runs one heuristic by name; `Qtt` uses [`default_targets`].
pub fn run_heuristic(inst: &Instance, method: Method) -> Result<SolveReport> {
    match method {
        Method::Qi => quickest_increment_all(inst),
        Method::QiPoly => quickest_increment_poly(inst),
        Method::Qtu => quickest_to_ultimate(inst),
        Method::Qtt => {
            let net = &inst.network;
            let r = max_flow_value(net, &net.all_arcs()) - max_flow_value(net, &net.existing_set());
            quickest_to_target(inst, &default_targets(r))
        }
        Method::Exact | Method::Given => Err(Error::InvalidParams(format!("{method} is not a heuristic"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::Network;

    fn p2(horizon: u64) -> Instance {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        net.add_potential(0, 1, 1);
        net.add_potential(0, 1, 2);
        Instance::new(net, horizon).unwrap()
    }

    fn diamond() -> Instance {
        let mut net = Network::new(3, 0, 2);
        net.add_existing(0, 1, 1);
        net.add_potential(1, 2, 1);
        Instance::new(net, 2).unwrap()
    }

    #[test]
    fn diamond_evaluation() {
        let inst = diamond();
        let rep = evaluate_schedule(&inst, &BuildSchedule::new(vec![ArcId(1)])).unwrap();
        assert_eq!(rep.period_flows, vec![0, 1]);
        assert_eq!(rep.total, 1);
        assert_eq!(rep.trace, vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn p2_evaluation_and_heuristics() {
        let inst = p2(3);
        let rep = evaluate_schedule(&inst, &BuildSchedule::new(vec![ArcId(2), ArcId(1)])).unwrap();
        assert_eq!(rep.period_flows, vec![1, 3, 4]);
        assert_eq!(rep.total, 8);
        let qi = quickest_increment_all(&inst).unwrap();
        assert_eq!(qi.schedule.order, vec![ArcId(2), ArcId(1)]);
        assert_eq!(qi.total, 8);
        assert_eq!(quickest_to_ultimate(&inst).unwrap().total, 8);
    }

    #[test]
    fn empty_schedule_keeps_initial_flow() {
        let inst = p2(4);
        assert_eq!(evaluate_schedule(&inst, &BuildSchedule::default()).unwrap().total, 4);
    }

    #[test]
    fn schedule_validation() {
        let inst = p2(3);
        for bad in [vec![ArcId(0)], vec![ArcId(1), ArcId(1)], vec![ArcId(7)]] {
            assert!(matches!(evaluate_schedule(&inst, &BuildSchedule::new(bad)), Err(Error::InvalidSchedule(_))));
        }
        let short = Instance { network: inst.network.clone(), horizon: 2 };
        assert!(matches!(evaluate_schedule(&short, &BuildSchedule::default()), Err(Error::HorizonTooShort { .. })));
    }

    #[test]
    fn poly_on_diamond() {
        let rep = quickest_increment_poly(&diamond()).unwrap();
        assert_eq!(rep.schedule.order, vec![ArcId(1)]);
        assert_eq!(rep.total, 1);
    }

    #[test]
    fn target_validation() {
        let inst = p2(3);
        assert!(matches!(quickest_to_target(&inst, &[2, 1]), Err(Error::BadTargets(_))));
        assert!(matches!(quickest_to_target(&inst, &[1, 2]), Err(Error::BadTargets(_))));
        assert!(matches!(quickest_to_target(&inst, &[0, 3]), Err(Error::BadTargets(_))));
        assert_eq!(quickest_to_target(&inst, &[3]).unwrap().total, 8);
        assert_eq!(default_targets(5), vec![2, 5]);
        assert_eq!(default_targets(1), vec![1]);
    }

    #[test]
    fn level_counting() {
        assert_eq!(level_counts(&[1, 1, 2, 4, 4], 1, 3), vec![2, 1, 0, 2]);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::HEURISTICS {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }
}
