use thiserror::Error;

/// Errors raised by the network, solver, simulation and calibration routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LfnError {
    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("node id {node} out of range for a network of {n} nodes")]
    OutOfRangeId { node: usize, n: usize },

    #[error("network is disconnected: node {node} lies outside the largest component ({unreachable} nodes outside in total)")]
    Disconnected { node: usize, unreachable: usize },

    #[error("node {node} has no edges")]
    IsolatedNode { node: usize },

    #[error("infeasible degree request: {0}")]
    InfeasibleDegree(String),

    #[error("network generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid hiring vector: {0}")]
    InvalidHiring(String),

    #[error("degenerate hiring policy: {0}")]
    DegenerateHiring(String),

    #[error("invalid degree {0}: must be at least 1")]
    InvalidDegree(f64),

    #[error("corner solution: optimal hiring {unclamped} is clamped to 1")]
    CornerSolution { unclamped: f64 },

    #[error("exact chain enumeration needs max degree <= {max}, found {found}")]
    DegreeTooLarge { found: usize, max: usize },

    #[error("singular transition system")]
    SingularSystem,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("degenerate panel: {0}")]
    DegeneratePanel(String),

    #[error("value {value} out of range: {reason}")]
    OutOfRange { value: f64, reason: String },

    #[error("target unemployment {target} not reachable: model spans [{lo}, {hi}]")]
    TargetOutOfBracket { target: f64, lo: f64, hi: f64 },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl LfnError {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            LfnError::SelfLoop { .. } => "SelfLoop",
            LfnError::OutOfRangeId { .. } => "OutOfRangeId",
            LfnError::Disconnected { .. } => "Disconnected",
            LfnError::IsolatedNode { .. } => "IsolatedNode",
            LfnError::InfeasibleDegree(_) => "InfeasibleDegree",
            LfnError::GenerationFailed { .. } => "GenerationFailed",
            LfnError::InvalidParameter { .. } => "InvalidParameter",
            LfnError::InvalidHiring(_) => "InvalidHiring",
            LfnError::DegenerateHiring(_) => "DegenerateHiring",
            LfnError::InvalidDegree(_) => "InvalidDegree",
            LfnError::CornerSolution { .. } => "CornerSolution",
            LfnError::DegreeTooLarge { .. } => "DegreeTooLarge",
            LfnError::SingularSystem => "SingularSystem",
            LfnError::NoConvergence { .. } => "NoConvergence",
            LfnError::DegeneratePanel(_) => "DegeneratePanel",
            LfnError::OutOfRange { .. } => "OutOfRange",
            LfnError::TargetOutOfBracket { .. } => "TargetOutOfBracket",
            LfnError::Parse { .. } => "Parse",
            LfnError::Io(_) => "Io",
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            LfnError::NoConvergence { .. }
                | LfnError::TargetOutOfBracket { .. }
                | LfnError::SingularSystem
                | LfnError::GenerationFailed { .. }
        )
    }
}

impl From<std::io::Error> for LfnError {
    fn from(e: std::io::Error) -> Self {
        LfnError::Io(e.to_string())
    }
}

impl From<csv::Error> for LfnError {
    fn from(e: csv::Error) -> Self {
        match e.position() {
            Some(pos) => LfnError::Parse {
                line: pos.line() as usize,
                reason: e.to_string(),
            },
            None => LfnError::Io(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for LfnError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            LfnError::Io(e.to_string())
        } else {
            LfnError::Parse {
                line: e.line(),
                reason: e.to_string(),
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, LfnError>;
