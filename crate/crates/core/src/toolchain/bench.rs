//! Benchmark harness: random cells, every configured method, relative gaps.

use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_subset_dp_with, ExactOptions, DEFAULT_CAP};
use crate::heur::{run_heuristic, Method};
use crate::instgen::{gen_general, gen_layered, GeneralParams, LayeredParams};
use crate::netcore::{max_flow_value, Instance};

/// One grid point; instance `i` of the cell is generated with `seed + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CellSpec {
    General(GeneralParams),
    Layered(LayeredParams),
}

impl CellSpec {
    pub fn label(&self) -> String {
        match self {
            CellSpec::General(p) => format!("general n={} d={} p={} u={}", p.n, p.d, p.p, p.u_max),
            CellSpec::Layered(p) => {
                format!("layered {}x{} d={} p={} u={}", p.layers, p.width, p.d, p.p, p.u_max)
            }
        }
    }

    pub fn is_layered(&self) -> bool {
        matches!(self, CellSpec::Layered(_))
    }

    fn seed(&self, index: usize) -> u64 {
        let base = match self {
            CellSpec::General(p) => p.seed,
            CellSpec::Layered(p) => p.seed,
        };
        base.wrapping_add(index as u64)
    }

    pub fn generate(&self, index: usize) -> Result<Instance> {
        let seed = self.seed(index);
        match *self {
            CellSpec::General(p) => gen_general(&GeneralParams { seed, ..p }),
            CellSpec::Layered(p) => gen_layered(&LayeredParams { seed, ..p }),
        }
    }
}

fn default_count() -> usize {
    10
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub cells: Vec<CellSpec>,
    /// Instances per cell.
    #[serde(default = "default_count")]
    pub count: usize,
    pub methods: Vec<Method>,
    /// Wall-clock budget for the exact method, in seconds.
    #[serde(default)]
    pub time_limit_s: Option<f64>,
    /// Largest number of potential chains handed to the exact method.
    #[serde(default = "default_cap")]
    pub exact_cap: usize,
    /// CSV destination; the JSON report goes next to it.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(cells: Vec<CellSpec>, methods: Vec<Method>) -> Self {
        BenchConfig { cells, count: default_count(), methods, time_limit_s: None, exact_cap: DEFAULT_CAP, output: None }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.methods.is_empty() {
            return bad("no methods configured");
        }
        if self.methods.contains(&Method::Given) {
            return bad("`given` needs a schedule and cannot be benchmarked");
        }
        if self.cells.is_empty() {
            return bad("no cells configured");
        }
        if self.count == 0 {
            return bad("instance count must be positive");
        }
        if self.time_limit_s.is_some_and(|t| t.is_nan() || t <= 0.0) {
            return bad("time limit must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub total: Option<u64>,
    /// `(z_best − total) / z_best`.
    pub delta: Option<f64>,
    pub elapsed_s: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub id: String,
    pub cell: usize,
    pub seed: u64,
    /// `F − f`, absent when generation failed.
    pub gap: Option<u64>,
    pub z_best: Option<u64>,
    /// Whether `z_best` is a proven optimum.
    pub z_best_exact: bool,
    pub outcomes: Vec<MethodOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodAverage {
    pub method: Method,
    pub avg_flow: Option<f64>,
    pub avg_delta: Option<f64>,
    pub avg_elapsed_s: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub cell: usize,
    pub label: String,
    pub instances: usize,
    pub avg_gap: Option<f64>,
    pub methods: Vec<MethodAverage>,
}

/// Average Δ of quickest-to-target against quickest-increment over the
/// layered cells. Reported, never enforced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingCheck {
    pub layered_cells: usize,
    pub qtt_avg_delta: f64,
    pub qi_avg_delta: f64,
    pub qtt_not_worse: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    pub cells: Vec<CellSummary>,
    pub ranking: Option<RankingCheck>,
}

fn run_method(inst: &Instance, method: Method, cfg: &BenchConfig) -> (Result<u64>, Duration) {
    let start = Instant::now();
    let res = match method {
        Method::Exact => {
            let deadline = cfg.time_limit_s.map(|s| start + Duration::from_secs_f64(s));
            exact_subset_dp_with(inst, ExactOptions { cap: cfg.exact_cap, deadline }).map(|r| r.optimum)
        }
        m => run_heuristic(inst, m).map(|r| r.total),
    };
    (res, start.elapsed())
}

fn bench_one(cfg: &BenchConfig, cell: usize, index: usize) -> BenchRow {
    let spec = &cfg.cells[cell];
    let mut row = BenchRow {
        id: format!("c{cell}-i{index}"),
        cell,
        seed: spec.seed(index),
        gap: None,
        z_best: None,
        z_best_exact: false,
        outcomes: Vec::new(),
    };
    let inst = match spec.generate(index) {
        Ok(inst) => inst,
        Err(e) => {
            row.outcomes = cfg
                .methods
                .iter()
                .map(|&method| MethodOutcome {
                    method,
                    total: None,
                    delta: None,
                    elapsed_s: 0.0,
                    error: Some(e.to_string()),
                })
                .collect();
            return row;
        }
    };
    let net = &inst.network;
    row.gap = Some(max_flow_value(net, &net.all_arcs()) - max_flow_value(net, &net.existing_set()));
    for &method in &cfg.methods {
        let (res, elapsed) = run_method(&inst, method, cfg);
        let (total, error) = match res {
            Ok(z) => (Some(z), None),
            Err(e) => (None, Some(e.to_string())),
        };
        if method == Method::Exact && total.is_some() {
            row.z_best_exact = true;
        }
        row.outcomes.push(MethodOutcome { method, total, delta: None, elapsed_s: elapsed.as_secs_f64(), error });
    }
    row.z_best = row.outcomes.iter().filter_map(|o| o.total).max();
    if let Some(best) = row.z_best {
        for o in &mut row.outcomes {
            o.delta = o.total.map(|z| if best == 0 { 0.0 } else { (best - z) as f64 / best as f64 });
        }
    }
    row
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn summarize(cfg: &BenchConfig, rows: &[BenchRow]) -> Vec<CellSummary> {
    cfg.cells
        .iter()
        .enumerate()
        .map(|(cell, spec)| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.cell == cell).collect();
            let methods = cfg
                .methods
                .iter()
                .enumerate()
                .map(|(m, &method)| {
                    let outs = || mine.iter().map(|r| &r.outcomes[m]);
                    MethodAverage {
                        method,
                        avg_flow: mean(outs().filter_map(|o| o.total).map(|z| z as f64)),
                        avg_delta: mean(outs().filter_map(|o| o.delta)),
                        avg_elapsed_s: mean(outs().map(|o| o.elapsed_s)).unwrap_or(0.0),
                        failures: outs().filter(|o| o.error.is_some()).count(),
                    }
                })
                .collect();
            CellSummary {
                cell,
                label: spec.label(),
                instances: mine.len(),
                avg_gap: mean(mine.iter().filter_map(|r| r.gap).map(|g| g as f64)),
                methods,
            }
        })
        .collect()
}

fn ranking(cfg: &BenchConfig, rows: &[BenchRow]) -> Option<RankingCheck> {
    let qtt = cfg.methods.iter().position(|&m| m == Method::Qtt)?;
    let qi = cfg.methods.iter().position(|&m| m == Method::Qi)?;
    let layered: Vec<&BenchRow> = rows.iter().filter(|r| cfg.cells[r.cell].is_layered()).collect();
    let qtt_avg_delta = mean(layered.iter().filter_map(|r| r.outcomes[qtt].delta))?;
    let qi_avg_delta = mean(layered.iter().filter_map(|r| r.outcomes[qi].delta))?;
    Some(RankingCheck {
        layered_cells: cfg.cells.iter().filter(|c| c.is_layered()).count(),
        qtt_avg_delta,
        qi_avg_delta,
        qtt_not_worse: qtt_avg_delta <= qi_avg_delta,
    })
}

/// Runs every configured method on every instance. Instances run in
/// parallel; rows come back ordered by cell, then index. When an output path
/// is configured the CSV and JSON reports are written there.
pub fn bench_run(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.cells.len()).flat_map(|c| (0..cfg.count).map(move |i| (c, i))).collect();
    let rows: Vec<BenchRow> = jobs.par_iter().map(|&(c, i)| bench_one(cfg, c, i)).collect();
    let report = BenchReport { cells: summarize(cfg, &rows), ranking: ranking(cfg, &rows), rows, config: cfg.clone() };
    if let Some(path) = &cfg.output {
        fs::write(path, report.to_csv(true)?)?;
        fs::write(path.with_extension("json"), report.to_json()?)?;
    }
    Ok(report)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl BenchReport {
    /// One line per instance. Without `timing` the output depends only on
    /// the configuration.
    pub fn to_csv(&self, timing: bool) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> =
            ["id", "cell", "seed", "gap", "z_best", "z_best_exact"].map(String::from).to_vec();
        for m in &self.config.methods {
            header.push(format!("{m}_flow"));
            header.push(format!("{m}_delta"));
            if timing {
                header.push(format!("{m}_time_s"));
            }
            header.push(format!("{m}_error"));
        }
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![
                row.id.clone(),
                row.cell.to_string(),
                row.seed.to_string(),
                opt(row.gap),
                opt(row.z_best),
                row.z_best_exact.to_string(),
            ];
            for o in &row.outcomes {
                rec.push(opt(o.total));
                rec.push(fixed(o.delta));
                if timing {
                    rec.push(format!("{:.6}", o.elapsed_s));
                }
                rec.push(o.error.clone().unwrap_or_default());
            }
            w.write_record(&rec)?;
        }
        finish(w)
    }

    /// Per-cell averages, one line per cell and method.
    pub fn cells_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "cell",
            "label",
            "instances",
            "avg_gap",
            "method",
            "avg_flow",
            "avg_delta",
            "avg_time_s",
            "failures",
        ])?;
        for c in &self.cells {
            for m in &c.methods {
                w.write_record([
                    c.cell.to_string(),
                    c.label.clone(),
                    c.instances.to_string(),
                    fixed(c.avg_gap),
                    m.method.to_string(),
                    fixed(m.avg_flow),
                    fixed(m.avg_delta),
                    format!("{:.6}", m.avg_elapsed_s),
                    m.failures.to_string(),
                ])?;
            }
        }
        finish(w)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_general(seed: u64) -> CellSpec {
        CellSpec::General(GeneralParams { n: 7, d: 0.5, p: 0.6, u_max: 3, seed, horizon: None })
    }

    #[test]
    fn single_method_has_zero_delta() {
        let mut cfg = BenchConfig::new(vec![small_general(1)], vec![Method::Qi]);
        cfg.count = 4;
        let report = bench_run(&cfg).unwrap();
        assert_eq!(report.rows.len(), 4);
        for row in &report.rows {
            assert_eq!(row.outcomes[0].delta, Some(0.0));
            assert!(!row.z_best_exact);
        }
    }

    #[test]
    fn exact_is_the_reference() {
        let mut cfg =
            BenchConfig::new(vec![small_general(5)], vec![Method::Qi, Method::Qtu, Method::Qtt, Method::Exact]);
        cfg.count = 5;
        let report = bench_run(&cfg).unwrap();
        for row in &report.rows {
            let exact = row.outcomes[3].total.unwrap();
            assert_eq!(row.z_best, Some(exact));
            assert!(row.z_best_exact);
            for o in &row.outcomes {
                let d = o.delta.unwrap();
                assert!((0.0..=1.0).contains(&d));
            }
        }
    }

    #[test]
    fn oversized_exact_fails_in_row() {
        let mut cfg = BenchConfig::new(vec![small_general(2)], vec![Method::Qtu, Method::Exact]);
        cfg.count = 3;
        cfg.exact_cap = 0;
        let report = bench_run(&cfg).unwrap();
        let failed = report.rows.iter().filter(|r| r.outcomes[1].error.is_some()).count();
        assert!(failed > 0);
        assert_eq!(report.cells[0].methods[1].failures, failed);
        assert!(report.rows.iter().all(|r| r.outcomes[0].total.is_some()));
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(BenchConfig::new(vec![small_general(1)], vec![]).validate().is_err());
        assert!(BenchConfig::new(vec![], vec![Method::Qi]).validate().is_err());
        assert!(BenchConfig::new(vec![small_general(1)], vec![Method::Given]).validate().is_err());
        let mut cfg = BenchConfig::new(vec![small_general(1)], vec![Method::Qi]);
        cfg.count = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn csv_without_timing_is_stable() {
        let mut cfg = BenchConfig::new(vec![small_general(9)], vec![Method::Qi, Method::Qtt]);
        cfg.count = 3;
        let a = bench_run(&cfg).unwrap().to_csv(false).unwrap();
        let b = bench_run(&cfg).unwrap().to_csv(false).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("id,cell,seed,gap,z_best,z_best_exact,qi_flow,qi_delta,qi_error,qtt_flow"));
    }

    #[test]
    fn config_parses_from_json() {
        let text = r#"{"cells":[{"kind":"layered","layers":3,"width":2,"d":0.5,"p":0.5,"u_max":1,"seed":0,"horizon":null}],
                       "methods":["qi","qtt"]}"#;
        let cfg: BenchConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.count, 10);
        assert!(cfg.cells[0].is_layered());
        assert_eq!(cfg.methods, vec![Method::Qi, Method::Qtt]);
    }
}
