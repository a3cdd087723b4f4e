use thiserror::Error;

use crate::model::Process;

pub type Result<T> = std::result::Result<T, MintError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MintError {
    #[error("{process} usage {usage} exceeds the last breakpoint {limit}{}", quarter_suffix(*.quarter))]
    CapacityExceeded {
        process: Process,
        usage: f64,
        limit: f64,
        quarter: Option<usize>,
    },

    #[error("length mismatch: expected {expected}, got {actual} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("unknown process `{0}` (expected blanking, annealing or striking)")]
    UnknownProcess(String),

    #[error("quarter {quarter} is outside the horizon of {horizon} quarters")]
    QuarterOutOfRange { quarter: usize, horizon: usize },

    #[error("invalid scenario: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),

    #[error("malformed linear program: {0}")]
    InvalidProblem(String),

    #[error("simplex iteration cap of {0} exceeded")]
    IterationLimit(usize),

    #[error("branch-and-bound node cap of {0} exceeded")]
    NodeLimit(usize),

    #[error("integer repair failed in quarter {quarter}: {reason}")]
    RepairInfeasible { quarter: usize, reason: String },

    #[error("inconsistent history at epoch {epoch}: {reason}")]
    InconsistentHistory { epoch: usize, reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}

fn quarter_suffix(quarter: Option<usize>) -> String {
    match quarter {
        Some(q) => format!(" in quarter {q}"),
        None => String::new(),
    }
}
