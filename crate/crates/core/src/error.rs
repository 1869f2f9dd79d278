use thiserror::Error;

use crate::netcore::{ArcId, Violation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("horizon {horizon} must exceed the number of potential arcs ({potential})")]
    HorizonTooShort { horizon: u64, potential: usize },

    #[error("invalid build schedule: {0}")]
    InvalidSchedule(String),

    #[error("unit capacities required, but arc {arc} has capacity {capacity}")]
    UnitCapacityRequired { arc: ArcId, capacity: u64 },

    #[error("no set of exactly {z_star} new potential arcs can be selected")]
    InvalidBudget { z_star: usize },

    #[error("invalid target sequence: {0}")]
    BadTargets(String),

    #[error("instance too large for exhaustive search: {items} items, cap is {cap}")]
    TooLarge { items: usize, cap: usize },

    #[error("time limit reached")]
    TimeLimit,

    #[error("family {family} needs k >= {k_min}, got {k}")]
    KTooSmall { family: String, k: usize, k_min: usize },

    #[error("invalid network: {}", format_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("invalid X3C instance: {0}")]
    InvalidX3C(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("witness constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("instance lacks the bipartite matching structure: {0}")]
    NotMatchingStructure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
