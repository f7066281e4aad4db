use thiserror::Error;

use crate::circuit::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("fit error: gradient descent diverged at step {step} (loss is not finite)")]
    Divergent { step: usize },

    #[error("cannot normalize the all-zero polynomial; its estimate is identically 0")]
    ZeroPolynomial,

    #[error("weight {0} lies outside [0, 1]")]
    WeightDomain(f64),

    #[error("input x = {0} lies outside the encodable range [-1, 1]")]
    EncodingDomain(f64),

    #[error("invalid circuit: {}", format_violations(.0))]
    InvalidCircuit(Vec<Violation>),

    #[error(
        "circuit needs {n_qubits} qubits but the dense simulator is capped at {cap}; \
         use the windowed (stream) simulator instead"
    )]
    Capacity { n_qubits: usize, cap: usize },

    #[error(
        "window overflow at gate {gate_index}: {active} active qubits exceed the cap of {cap}; \
         compile with forward aggregation order to bound the window"
    )]
    WindowOverflow {
        gate_index: usize,
        active: usize,
        cap: usize,
    },

    #[error("estimator error: {0}")]
    Estimator(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degree {degree}, trial {trial}, point {point}: {source}")]
    Experiment {
        degree: usize,
        trial: usize,
        point: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
