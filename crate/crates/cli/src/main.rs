use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use incflow::exact::{exact_subset_dp_with, ExactOptions, DEFAULT_CAP};
use incflow::heur::{default_targets, quickest_to_target, run_heuristic, Method};
use incflow::instgen::{
    gen_bipartite, gen_family, gen_general, gen_layered, gen_matching, gen_x3c, instance_to_string, read_instance,
    FamilyInstance, GeneralParams, LayeredParams, X3CInstance,
};
use incflow::theory::{check_instance, check_matching_instance, run_suite, witness_y, CheckOutcome, Suite};
use incflow::toolchain::{bench_run, emit_imfp1, emit_imfp2, BenchConfig, BenchReport, CellSpec};
use incflow::{brute_force_permutations, evaluate_schedule, max_flow_value, ArcId, BuildSchedule, Error, Instance};

#[derive(Parser)]
#[command(name = "incflow", version, about = "Incremental maximum flow: heuristics, exact solvers, bound checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Imfp1,
    Imfp2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    General,
    Layered,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
        /// Destination; stdout when omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run one method on an instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// qi, qi-poly, qtu, qtt, exact or given.
        #[arg(long, default_value = "qtt")]
        method: Method,
        /// Flow increments for qtt, e.g. `1,4`.
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<u64>>,
        /// Potential arc ids in build order, for `given`.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
    },
    /// Optimum over all build orders.
    Exact {
        #[arg(long)]
        instance: PathBuf,
        /// Enumerate arc permutations instead of the subset program.
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Benchmark the methods on random cells.
    Bench {
        /// JSON configuration; overrides the cell flags below.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Kind::General)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        #[arg(long, default_value_t = 4)]
        width: usize,
        #[arg(long, default_value_t = 0.3)]
        d: f64,
        #[arg(long, default_value_t = 0.7)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        u_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "qi,qtu,qtt,exact")]
        methods: Vec<Method>,
        /// Seconds allowed for the exact method per instance.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Write the CSV here and the JSON report next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the approximation bounds; exits 1 on any failed verdict.
    Verify {
        /// unit-capacity or matching.
        #[arg(long, conflicts_with = "instance")]
        suite: Option<Suite>,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check one unit-capacity instance file instead of a suite.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Treat the instance as bipartite matching.
        #[arg(long, requires = "instance")]
        matching: bool,
        /// Also verify the dual witness for every r in 2..=R.
        #[arg(long)]
        witness: Option<usize>,
    },
    /// Write an LP model of an instance.
    EmitLp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Model::Imfp2)]
        model: Model,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run methods on an adversarial family or matching instance.
    Family {
        /// F1..F5, M1 or M2.
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// qi, qi-poly, qtu, qtt, exact, certified or all.
        #[arg(long, default_value = "all")]
        run: String,
    },
}

#[derive(Subcommand)]
enum GenWhat {
    General {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        u_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        horizon: Option<u64>,
    },
    Layered {
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        u_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        horizon: Option<u64>,
    },
    Bipartite {
        #[arg(long)]
        nv: usize,
        #[arg(long)]
        nw: usize,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduction from exact cover by 3-sets.
    X3c {
        /// Universe size, a multiple of 3.
        #[arg(long)]
        elements: usize,
        /// Triples of 1-based elements, e.g. `1 2 3,4 5 6`.
        #[arg(long, value_delimiter = ',')]
        sets: Vec<String>,
        #[arg(long)]
        horizon: u64,
    },
    Family {
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
}

/// Failures that map to exit code 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Run {
    let format = cli.format;
    match cli.command {
        Command::Gen { what, out } => gen(what, out),
        Command::Solve { instance, method, targets, schedule } => solve(format, instance, method, targets, schedule),
        Command::Exact { instance, brute, cap, time_limit } => exact(format, instance, brute, cap, time_limit),
        Command::Bench { config, kind, n, layers, width, d, p, u_max, seed, count, methods, time_limit, out } => {
            let cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)?;
                    let mut cfg: BenchConfig =
                        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                    if out.is_some() {
                        cfg.output = out;
                    }
                    cfg
                }
                None => {
                    let cell = match kind {
                        Kind::General => CellSpec::General(GeneralParams { n, d, p, u_max, seed, horizon: None }),
                        Kind::Layered => {
                            CellSpec::Layered(LayeredParams { layers, width, d, p, u_max, seed, horizon: None })
                        }
                    };
                    let mut cfg = BenchConfig::new(vec![cell], methods);
                    cfg.count = count;
                    cfg.time_limit_s = time_limit;
                    cfg.output = out;
                    cfg
                }
            };
            let report = bench_run(&cfg)?;
            print!("{}", render_bench(format, &report)?);
            Ok(true)
        }
        Command::Verify { suite, count, seed, instance, matching, witness } => {
            verify(format, suite, count, seed, instance, matching, witness)
        }
        Command::EmitLp { instance, model, out } => {
            let inst = read_instance(&instance)?;
            let text = match model {
                Model::Imfp1 => emit_imfp1(&inst),
                Model::Imfp2 => emit_imfp2(&inst),
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Family { which, k, run } => family(format, &which, k, &run),
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_triple(s: &str) -> Result<[usize; 3], UsageError> {
    let bad = || UsageError(format!("set `{s}` is not three 1-based elements"));
    let nums: Vec<usize> =
        s.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match nums[..] {
        [a, b, c] => Ok([a, b, c]),
        _ => Err(bad()),
    }
}

fn load_family(which: &str, k: usize) -> Result<FamilyInstance, UsageError> {
    if let Ok(m) = which.parse() {
        return Ok(gen_matching(m)?);
    }
    let fam: incflow::instgen::Family = which.parse().map_err(UsageError)?;
    let k = if k == 0 { fam.k_min() } else { k };
    Ok(gen_family(fam, k)?)
}

fn gen(what: GenWhat, out: Option<PathBuf>) -> Run {
    let inst = match what {
        GenWhat::General { n, d, p, u_max, seed, horizon } => {
            gen_general(&GeneralParams { n, d, p, u_max, seed, horizon })?
        }
        GenWhat::Layered { layers, width, d, p, u_max, seed, horizon } => {
            gen_layered(&LayeredParams { layers, width, d, p, u_max, seed, horizon })?
        }
        GenWhat::Bipartite { nv, nw, d, p, seed } => gen_bipartite(nv, nw, d, p, seed)?,
        GenWhat::X3c { elements, sets, horizon } => {
            if elements == 0 || elements % 3 != 0 {
                return Err(UsageError(format!("universe size {elements} is not a positive multiple of 3")));
            }
            let sets = sets.iter().map(|s| parse_triple(s)).collect::<Result<_, _>>()?;
            gen_x3c(&X3CInstance { n: elements / 3, sets }, horizon)?
        }
        GenWhat::Family { which, k } => load_family(&which, k)?.instance,
    };
    emit(out, &instance_to_string(&inst))?;
    Ok(true)
}

fn ultimate_gap(inst: &Instance) -> u64 {
    let net = &inst.network;
    max_flow_value(net, &net.all_arcs()) - max_flow_value(net, &net.existing_set())
}

fn solve(
    format: Format,
    path: PathBuf,
    method: Method,
    targets: Option<Vec<u64>>,
    schedule: Option<Vec<usize>>,
) -> Run {
    let inst = read_instance(&path)?;
    let report = match method {
        Method::Given => {
            let ids = schedule.ok_or_else(|| UsageError("`given` needs --schedule".into()))?;
            evaluate_schedule(&inst, &BuildSchedule::new(ids.into_iter().map(ArcId).collect()))?
        }
        Method::Exact => {
            let started = Instant::now();
            let best = exact_subset_dp_with(&inst, ExactOptions::default())?;
            let mut report = evaluate_schedule(&inst, &best.schedule)?;
            report.method = Method::Exact;
            report.elapsed = started.elapsed();
            report
        }
        Method::Qtt => {
            let targets = targets.unwrap_or_else(|| default_targets(ultimate_gap(&inst)));
            quickest_to_target(&inst, &targets)?
        }
        m => run_heuristic(&inst, m)?,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("period,flow\n");
            for (k, v) in report.period_flows.iter().enumerate() {
                let _ = writeln!(s, "{},{v}", k + 1);
            }
            s
        }
        Format::Text => {
            let order: Vec<String> = report.schedule.order.iter().map(|a| a.0.to_string()).collect();
            let flows: Vec<String> = report.period_flows.iter().map(u64::to_string).collect();
            format!(
                "method   {}\ntotal    {}\nschedule {}\nflows    {}\n",
                report.method,
                report.total,
                order.join(" "),
                flows.join(" ")
            )
        }
    };
    print!("{text}");
    Ok(true)
}

fn exact(format: Format, path: PathBuf, brute: bool, cap: usize, time_limit: Option<f64>) -> Run {
    let inst = read_instance(&path)?;
    let result = if brute {
        brute_force_permutations(&inst)?
    } else {
        let deadline = time_limit.map(|s| Instant::now() + Duration::from_secs_f64(s));
        exact_subset_dp_with(&inst, ExactOptions { cap, deadline })?
    };
    let order: Vec<String> = result.schedule.order.iter().map(|a| a.0.to_string()).collect();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&result).expect("result serializes") + "\n",
        Format::Csv => {
            format!("optimum,explored,schedule\n{},{},{}\n", result.optimum, result.explored, order.join(" "))
        }
        Format::Text => format!("optimum  {}\nschedule {}\n", result.optimum, order.join(" ")),
    };
    print!("{text}");
    Ok(true)
}

fn render_bench(format: Format, report: &BenchReport) -> Result<String, UsageError> {
    Ok(match format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv(true)?,
        Format::Text => {
            let mut s = String::new();
            for c in &report.cells {
                let _ = writeln!(s, "cell {}: {} ({} instances)", c.cell, c.label, c.instances);
                for m in &c.methods {
                    let num = |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$}")).unwrap_or_else(|| "-".into());
                    let _ = writeln!(
                        s,
                        "  {:<8} flow {:>10}  delta {:>8}  time {:>9.4}s  failures {}",
                        m.method.name(),
                        num(m.avg_flow, 2),
                        num(m.avg_delta, 4),
                        m.avg_elapsed_s,
                        m.failures
                    );
                }
            }
            if let Some(r) = &report.ranking {
                let _ = writeln!(
                    s,
                    "layered cells: qtt delta {:.4}, qi delta {:.4} ({})",
                    r.qtt_avg_delta,
                    r.qi_avg_delta,
                    if r.qtt_not_worse { "qtt not worse" } else { "qtt worse" }
                );
            }
            s
        }
    })
}

fn verify(
    format: Format,
    suite: Option<Suite>,
    count: u64,
    seed: u64,
    instance: Option<PathBuf>,
    matching: bool,
    witness: Option<usize>,
) -> Run {
    let outcomes: Vec<CheckOutcome> = match (&instance, suite) {
        (Some(path), _) => {
            let inst = read_instance(path)?;
            let id = path.display().to_string();
            vec![if matching { check_matching_instance(&inst, &id)? } else { check_instance(&inst, &id)? }]
        }
        (None, Some(suite)) => run_suite(suite, count, seed)?,
        (None, None) if witness.is_some() => Vec::new(),
        (None, None) => return Err(UsageError("verify needs --suite, --instance or --witness".into())),
    };
    let mut witness_failures = Vec::new();
    if let Some(max_r) = witness {
        for r in 2..=max_r {
            if let Err(e) = witness_y(r) {
                witness_failures.push(format!("r = {r}: {e}"));
            }
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let mut s = String::new();
    match format {
        Format::Json => {
            for o in &outcomes {
                s.push_str(&o.to_json_line());
                s.push('\n');
            }
            if let Some(max_r) = witness {
                let _ = writeln!(s, "{}", json!({ "witness_max_r": max_r, "failures": witness_failures }));
            }
        }
        Format::Csv => {
            s.push_str("id,passed,failed_verdicts\n");
            for o in &outcomes {
                let names: Vec<&str> = o.failures().map(|v| v.name).collect();
                let _ = writeln!(s, "{},{},{}", o.record.id, o.passed(), names.join(" "));
            }
        }
        Format::Text => {
            for o in &outcomes {
                for v in o.failures() {
                    let _ = writeln!(s, "FAIL {} {}: {}", o.record.id, v.name, v.detail);
                }
            }
            for w in &witness_failures {
                let _ = writeln!(s, "FAIL witness {w}");
            }
            if !outcomes.is_empty() {
                let _ = writeln!(s, "{}/{} instances passed", outcomes.len() - failed, outcomes.len());
            }
            if let Some(max_r) = witness {
                let _ = writeln!(s, "witness verified for r in 2..={max_r}: {}", witness_failures.is_empty());
            }
        }
    }
    print!("{s}");
    Ok(failed == 0 && witness_failures.is_empty())
}

fn family(format: Format, which: &str, k: usize, run: &str) -> Run {
    let fam = load_family(which, k)?;
    let inst = &fam.instance;
    let names = ["qi", "qi-poly", "qtu", "qtt", "certified", "exact"];
    let selected: Vec<&str> = if run == "all" {
        names.to_vec()
    } else {
        let pick = names.iter().find(|&&n| n == run).ok_or_else(|| UsageError(format!("unknown --run `{run}`")))?;
        vec![*pick]
    };
    let mut rows: Vec<(&str, u64)> = Vec::new();
    for name in selected {
        let total = match name {
            "certified" => evaluate_schedule(inst, &fam.certified)?.total,
            "exact" => match exact_subset_dp_with(inst, ExactOptions::default()) {
                Ok(r) => r.optimum,
                Err(Error::TooLarge { .. }) if run == "all" => continue,
                Err(e) => return Err(e.into()),
            },
            "qtt" => match &fam.targets {
                Some(t) => quickest_to_target(inst, t)?.total,
                None => run_heuristic(inst, Method::Qtt)?.total,
            },
            other => run_heuristic(inst, other.parse().map_err(UsageError)?)?.total,
        };
        rows.push((name, total));
    }
    let text = match format {
        Format::Json => {
            let totals: serde_json::Map<String, serde_json::Value> =
                rows.iter().map(|&(n, v)| (n.to_string(), json!(v))).collect();
            json!({ "family": which, "k": k, "horizon": inst.horizon, "totals": totals, "predicted": fam.predicted })
                .to_string()
                + "\n"
        }
        Format::Csv => {
            let mut s = String::from("method,total\n");
            for (n, v) in &rows {
                let _ = writeln!(s, "{n},{v}");
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (n, v) in &rows {
                let _ = writeln!(s, "{n:<10}{v}");
            }
            s
        }
    };
    print!("{text}");
    Ok(true)
}
