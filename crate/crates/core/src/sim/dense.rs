//! Reference dense statevector simulator.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::sim::kernels::{apply_1q, apply_cx, gate_matrix};
use crate::sim::noise::{sample_from_expectation, sample_trajectories, ErrorEvent, NoiseModel, ShotOutcome};

/// 2^26 amplitudes of 16 bytes: 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::Cx { control, target } => apply_cx(&mut self.amps, control, target),
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::X { qubit } => {
                let m = gate_matrix(gate).expect("one-qubit gate");
                apply_1q(&mut self.amps, qubit, &m);
            }
        }
    }

    fn apply_event(&mut self, event: &ErrorEvent) {
        apply_1q(&mut self.amps, event.qubit, &event.pauli.matrix());
    }

    /// `<Z_qubit>`
    pub fn expect_z(&self, qubit: usize) -> f64 {
        let mask = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseSimulator {
    pub max_qubits: usize,
}

impl Default for DenseSimulator {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_QUBIT_CAP,
        }
    }
}

impl DenseSimulator {
    pub fn new(max_qubits: usize) -> Self {
        Self { max_qubits }
    }

    fn check(&self, circuit: &Circuit) -> Result<()> {
        circuit.validate().map_err(Error::InvalidCircuit)?;
        if circuit.n_qubits() > self.max_qubits {
            return Err(Error::Capacity {
                n_qubits: circuit.n_qubits(),
                cap: self.max_qubits,
            });
        }
        Ok(())
    }

    pub fn run(&self, circuit: &Circuit) -> Result<StateVector> {
        self.run_with_events(circuit, &[])
    }

    /// Run with Pauli errors inserted after the gates they name. `events`
    /// must be sorted by gate index.
    pub fn run_with_events(&self, circuit: &Circuit, events: &[ErrorEvent]) -> Result<StateVector> {
        self.check(circuit)?;
        let mut state = StateVector::zero(circuit.n_qubits());
        let mut pending = events.iter().peekable();
        for (i, gate) in circuit.gates().iter().enumerate() {
            state.apply(gate);
            while let Some(ev) = pending.next_if(|ev| ev.after_gate == i) {
                state.apply_event(ev);
            }
        }
        Ok(state)
    }

    /// Exact `<Z>` of the measured qubit.
    pub fn expect_output(&self, circuit: &Circuit) -> Result<f64> {
        Ok(self.run(circuit)?.expect_z(circuit.measured_qubit()))
    }

    pub fn sample_output(
        &self,
        circuit: &Circuit,
        shots: u64,
        seed: u64,
        noise: Option<&NoiseModel>,
    ) -> Result<ShotOutcome> {
        match noise {
            Some(model) if !model.is_noiseless() => {
                self.check(circuit)?;
                sample_trajectories(circuit, shots, seed, model, |events| {
                    Ok(self
                        .run_with_events(circuit, events)?
                        .expect_z(circuit.measured_qubit()))
                })
            }
            _ => sample_from_expectation(self.expect_output(circuit)?, shots, seed),
        }
    }
}

/// Run with the default qubit cap.
pub fn run_statevector(circuit: &Circuit) -> Result<StateVector> {
    DenseSimulator::default().run(circuit)
}

pub fn expect_z(state: &StateVector, qubit: usize) -> f64 {
    state.expect_z(qubit)
}

pub fn sample_output(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<ShotOutcome> {
    DenseSimulator::default().sample_output(circuit, shots, seed, noise)
}
