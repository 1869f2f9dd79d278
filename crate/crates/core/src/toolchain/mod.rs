//! LP export and the benchmark harness.

mod bench;
mod lp;

pub use bench::{
    bench_run, BenchConfig, BenchReport, BenchRow, CellSpec, CellSummary, MethodAverage, MethodOutcome, RankingCheck,
};
pub use lp::{emit_imfp1, emit_imfp2, lp_size, LpSize};
