//! LP-file writers for the two mixed integer formulations.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::netcore::{max_flow_value, ArcId, Instance, Network};

const WIDTH: usize = 78;

fn x(a: ArcId, k: u64) -> String {
    format!("x_a{}_k{}", a.0, k)
}

fn y(a: ArcId, k: u64) -> String {
    format!("y_a{}_k{}", a.0, k)
}

/// Accumulates a linear expression and wraps it over several lines.
struct Expr {
    terms: Vec<String>,
}

impl Expr {
    fn new() -> Self {
        Expr { terms: Vec::new() }
    }

    fn add(&mut self, coef: i64, var: String) {
        let sign = if coef < 0 { "-" } else { "+" };
        let term = match coef.unsigned_abs() {
            1 => format!("{sign} {var}"),
            c => format!("{sign} {c} {var}"),
        };
        self.terms.push(term);
    }

    fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn write(&self, out: &mut String, label: &str, tail: &str) {
        let mut line = format!(" {label}:");
        for (i, t) in self.terms.iter().enumerate() {
            let t = if i == 0 { t.strip_prefix("+ ").unwrap_or(t) } else { t };
            if line.len() + 1 + t.len() > WIDTH {
                out.push_str(&line);
                out.push('\n');
                line = "   ".to_string();
            }
            line.push(' ');
            line.push_str(t);
        }
        if self.terms.is_empty() {
            line.push_str(" 0");
        }
        if !tail.is_empty() {
            if line.len() + 1 + tail.len() > WIDTH {
                out.push_str(&line);
                out.push('\n');
                line = "   ".to_string();
            }
            line.push(' ');
            line.push_str(tail);
        }
        out.push_str(&line);
        out.push('\n');
    }
}

fn net_outflow(net: &Network, v: usize, k: u64) -> Expr {
    let mut e = Expr::new();
    for &a in net.out_arcs(v) {
        e.add(1, x(a, k));
    }
    for &a in net.in_arcs(v) {
        e.add(-1, x(a, k));
    }
    e
}

/// Conservation and capacity rows for period `k`; `rhs(v)` is the required
/// net outflow at `v`, or `None` to leave the node unconstrained.
fn flow_rows(out: &mut String, net: &Network, k: u64, rhs: impl Fn(usize) -> Option<i64>) {
    for v in 0..net.node_count() {
        let Some(b) = rhs(v) else { continue };
        let e = net_outflow(net, v, k);
        if e.is_empty() && b == 0 {
            continue;
        }
        e.write(out, &format!("flow_v{v}_k{k}"), &format!("= {b}"));
    }
    for arc in net.arcs() {
        if arc.is_potential() {
            let mut e = Expr::new();
            e.add(1, x(arc.id, k));
            e.add(-(arc.capacity as i64), y(arc.id, k));
            e.write(out, &format!("link_a{}_k{k}", arc.id.0), "<= 0");
        } else {
            let mut e = Expr::new();
            e.add(1, x(arc.id, k));
            e.write(out, &format!("cap_a{}_k{k}", arc.id.0), &format!("<= {}", arc.capacity));
        }
    }
}

fn bounds_and_binaries(out: &mut String, net: &Network, periods: u64) {
    out.push_str("Bounds\n");
    for k in 1..=periods {
        for arc in net.arcs() {
            let _ = writeln!(out, " {} >= 0", x(arc.id, k));
        }
    }
    out.push_str("Binaries\n");
    for k in 1..=periods {
        for a in net.potential_arcs() {
            let _ = writeln!(out, " {}", y(a, k));
        }
    }
    out.push_str("End\n");
}

/// Time-indexed model: flow variables for every arc and period, build
/// indicators for every potential arc and period.
pub fn emit_imfp1(inst: &Instance) -> String {
    let net = &inst.network;
    let t = inst.horizon;
    let (s, sink) = (net.source(), net.sink());
    let mut out = String::new();
    let _ = writeln!(out, "\\ incremental max flow, time-indexed model");
    let _ = writeln!(
        out,
        "\\ nodes {} arcs {} potential {} horizon {}",
        net.node_count(),
        net.arc_count(),
        net.potential_count(),
        t
    );
    out.push_str("Maximize\n");
    let mut obj = Expr::new();
    for k in 1..=t {
        obj.terms.extend(net_outflow(net, s, k).terms);
    }
    obj.write(&mut out, "total", "");

    out.push_str("Subject To\n");
    for k in 1..=t {
        flow_rows(&mut out, net, k, |v| (v != s && v != sink).then_some(0));
    }
    for a in net.potential_arcs() {
        for k in 2..=t {
            let mut e = Expr::new();
            e.add(1, y(a, k));
            e.add(-1, y(a, k - 1));
            e.write(&mut out, &format!("keep_a{}_k{k}", a.0), ">= 0");
        }
        let mut e = Expr::new();
        e.add(1, y(a, 1));
        e.write(&mut out, &format!("start_a{}", a.0), "= 0");
    }
    if net.potential_count() > 0 {
        for k in 2..=t {
            let mut e = Expr::new();
            for a in net.potential_arcs() {
                e.add(1, y(a, k));
                e.add(-1, y(a, k - 1));
            }
            e.write(&mut out, &format!("once_k{k}"), "<= 1");
        }
    }
    bounds_and_binaries(&mut out, net, t);
    out
}

/// Level-indexed model: one flow copy per increment level `k = 1..r`, with
/// `y_ak = 1` when arc `a` is built while the flow is still below `f + k`.
/// The cumulative flow is `T·F` minus the objective.
pub fn emit_imfp2(inst: &Instance) -> String {
    let net = &inst.network;
    let f = max_flow_value(net, &net.existing_set());
    let big_f = max_flow_value(net, &net.all_arcs());
    let r = big_f - f;
    let t = inst.horizon;
    let (s, sink) = (net.source(), net.sink());
    let mut out = String::new();
    let _ = writeln!(out, "\\ incremental max flow, level-indexed model");
    let _ = writeln!(out, "\\ f {f} F {big_f} r {r} horizon {t}");
    let _ = writeln!(out, "\\ total = T*F - objective = {} - objective", t * big_f);
    out.push_str("Minimize\n");
    let mut obj = Expr::new();
    for k in 1..=r {
        for a in net.potential_arcs() {
            obj.add(1, y(a, k));
        }
    }
    obj.write(&mut out, "delay", "");

    out.push_str("Subject To\n");
    for k in 1..=r {
        let level = (f + k) as i64;
        flow_rows(&mut out, net, k, |v| {
            Some(if v == s {
                level
            } else if v == sink {
                -level
            } else {
                0
            })
        });
    }
    for a in net.potential_arcs() {
        for k in 1..r {
            let mut e = Expr::new();
            e.add(1, y(a, k));
            e.add(-1, y(a, k + 1));
            e.write(&mut out, &format!("keep_a{}_k{k}", a.0), "<= 0");
        }
    }
    bounds_and_binaries(&mut out, net, r);
    out
}

/// Variable, binary and row counts read back from LP text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpSize {
    pub variables: usize,
    pub binaries: usize,
    pub constraints: usize,
}

pub fn lp_size(text: &str) -> LpSize {
    let mut section = "";
    let mut vars = BTreeSet::new();
    let mut binaries = 0;
    let mut constraints = 0;
    for line in text.lines() {
        if line.starts_with('\\') {
            continue;
        }
        if !line.starts_with(' ') {
            section = line.trim();
            continue;
        }
        match section {
            "Subject To" if !line.starts_with("   ") => constraints += 1,
            "Binaries" => binaries += 1,
            _ => {}
        }
        for tok in line.split_whitespace() {
            if tok.starts_with("x_a") || tok.starts_with("y_a") {
                vars.insert(tok.trim_end_matches(':').to_string());
            }
        }
    }
    LpSize { variables: vars.len(), binaries, constraints }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Instance {
        let mut net = Network::new(3, 0, 2);
        net.add_existing(0, 1, 1);
        net.add_potential(1, 2, 1);
        Instance::new(net, 2).unwrap()
    }

    fn p2() -> Instance {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 1);
        net.add_potential(0, 1, 1);
        net.add_potential(0, 1, 2);
        Instance::new(net, 3).unwrap()
    }

    #[test]
    fn diamond_imfp1_counts() {
        let lp = emit_imfp1(&diamond());
        let size = lp_size(&lp);
        assert_eq!(size, LpSize { variables: 6, binaries: 2, constraints: 9 });
        assert!(lp.contains(" start_a1: y_a1_k1 = 0\n"));
        assert!(lp.contains(" link_a1_k2: x_a1_k2 - y_a1_k2 <= 0\n"));
        assert!(lp.contains(" flow_v1_k1: x_a1_k1 - x_a0_k1 = 0\n"));
        assert!(lp.contains(" total: x_a0_k1 + x_a0_k2\n"));
    }

    #[test]
    fn no_potential_arcs_means_no_binaries() {
        let mut net = Network::new(2, 0, 1);
        net.add_existing(0, 1, 2);
        let lp = emit_imfp1(&Instance::new(net, 3).unwrap());
        assert_eq!(lp_size(&lp).binaries, 0);
        assert!(!lp.contains("y_a"));
        assert!(!lp.contains("once_k"));
    }

    #[test]
    fn p2_imfp2_has_three_levels() {
        let lp = emit_imfp2(&p2());
        assert!(lp.contains("\\ f 1 F 4 r 3 horizon 3\n"));
        assert!(lp.contains("= 12 - objective"));
        assert_eq!(lp_size(&lp).binaries, 6);
        assert!(lp.contains(" flow_v0_k3: x_a0_k3 + x_a1_k3 + x_a2_k3 = 4\n"));
        assert!(lp.contains(" keep_a2_k2: y_a2_k2 - y_a2_k3 <= 0\n"));
        assert!(lp.contains(" link_a2_k1: x_a2_k1 - 2 y_a2_k1 <= 0\n"));
    }

    #[test]
    fn zero_gap_gives_trivial_model() {
        let lp = emit_imfp2(&all_existing(&diamond()));
        assert!(lp.contains(" delay: 0\n"));
        assert_eq!(lp_size(&lp), LpSize { variables: 0, binaries: 0, constraints: 0 });
    }

    #[test]
    fn long_rows_wrap() {
        let mut net = Network::new(2, 0, 1);
        for _ in 0..30 {
            net.add_potential(0, 1, 1);
        }
        let lp = emit_imfp1(&Instance::new(net, 31).unwrap());
        assert!(lp.lines().all(|l| l.len() <= WIDTH));
        assert_eq!(lp_size(&lp).binaries, 30 * 31);
    }

    fn all_existing(inst: &Instance) -> Instance {
        let old = &inst.network;
        let mut net = Network::new(old.node_count(), old.source(), old.sink());
        for a in old.arcs() {
            net.add_existing(a.tail, a.head, a.capacity);
        }
        Instance::new(net, inst.horizon).unwrap()
    }
}
