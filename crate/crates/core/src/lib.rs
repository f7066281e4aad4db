//! Polynomial evaluation on expectation-value-encoded qubits: fitting,
//! compilation to a gate schedule, simulation, and shot-based estimation.

pub mod bench;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod estimator;
pub mod polynomial;
pub mod qasm;
pub mod rng;
pub mod sim;

pub use circuit::{Circuit, Gate};
pub use compiler::{build_circuit, CompiledProgram, Order};
pub use error::{Error, Result};
pub use polynomial::{normalize, NormalizedPolynomial, Polynomial};
