pub mod dense;
pub mod kernels;
pub mod noise;
pub mod stream;

pub use dense::{run_statevector, DenseSimulator, StateVector};
pub use noise::{ErrorEvent, NoiseModel, Pauli, ShotOutcome};
pub use stream::{liveness, run_window, sample_output_stream, RetirementSchedule, WindowState};
