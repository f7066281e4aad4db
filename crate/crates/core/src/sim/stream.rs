//! Windowed density-matrix simulator.
//!
//! Gates are swept in order. A qubit joins the window (as `|0><0|`) at its
//! first gate and is traced out right after its last one, so memory follows
//! the number of simultaneously live qubits rather than the register size.
//! The measured qubit stays live until the end.
//!
//! The window density matrix over `w` qubits is a flat array of `4^w`
//! entries indexed `(row << w) | col`. Window position `p` is bit `p` of
//! both `row` and `col`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::sim::kernels::{apply_1q, apply_cx, conj, gate_matrix, Matrix2};
use crate::sim::noise::{sample_from_expectation, sample_trajectories, ErrorEvent, NoiseModel, ShotOutcome};

pub const DEFAULT_WINDOW_CAP: usize = 8;
pub const MAX_WINDOW_CAP: usize = 12;

/// First and last gate index touching each qubit.
///
/// Qubits no gate touches have `None`. The measured qubit has
/// `last_use = gates.len()`, meaning "until the end"; if no gate touches it
/// its `first_use` is also `gates.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetirementSchedule {
    pub first_use: Vec<Option<usize>>,
    pub last_use: Vec<Option<usize>>,
    pub peak_window: usize,
    /// Live qubits right after the adjoins at each gate.
    pub live_counts: Vec<usize>,
}

pub fn liveness(circuit: &Circuit) -> RetirementSchedule {
    let n = circuit.n_qubits();
    let n_gates = circuit.gates().len();
    let mut first_use = vec![None; n];
    let mut last_use = vec![None; n];
    for (i, gate) in circuit.gates().iter().enumerate() {
        for q in gate.qubits().iter() {
            first_use[q].get_or_insert(i);
            last_use[q] = Some(i);
        }
    }
    let m = circuit.measured_qubit();
    if m < n {
        first_use[m].get_or_insert(n_gates);
        last_use[m] = Some(n_gates);
    }

    let mut adds = vec![0usize; n_gates + 1];
    let mut drops = vec![0usize; n_gates + 1];
    for q in 0..n {
        if let (Some(f), Some(l)) = (first_use[q], last_use[q]) {
            adds[f] += 1;
            drops[l] += 1;
        }
    }
    let mut live = 0;
    let mut peak = 0;
    let mut live_counts = Vec::with_capacity(n_gates);
    for i in 0..=n_gates {
        live += adds[i];
        peak = peak.max(live);
        if i < n_gates {
            live_counts.push(live);
        }
        live -= drops[i];
    }
    RetirementSchedule {
        first_use,
        last_use,
        peak_window: peak,
        live_counts,
    }
}

/// Density matrix over the currently live qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowState {
    active: Vec<usize>,
    rho: Vec<Complex64>,
}

impl Default for WindowState {
    fn default() -> Self {
        Self::new()
    }
}

impl WindowState {
    /// Empty window: the scalar 1.
    pub fn new() -> Self {
        Self {
            active: Vec::new(),
            rho: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn window(&self) -> usize {
        self.active.len()
    }

    /// Register indices of the live qubits, by window position.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn position(&self, qubit: usize) -> Option<usize> {
        self.active.iter().position(|&q| q == qubit)
    }

    fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.rho[(row << self.window()) | col]
    }

    /// Tensor in `|0><0|` for `qubit` at the top window position.
    pub fn adjoin(&mut self, qubit: usize) {
        let w = self.window();
        let dim = 1usize << w;
        let mut next = vec![Complex64::new(0.0, 0.0); 1 << (2 * (w + 1))];
        for row in 0..dim {
            for col in 0..dim {
                next[(row << (w + 1)) | col] = self.rho[(row << w) | col];
            }
        }
        self.rho = next;
        self.active.push(qubit);
    }

    /// Partial trace over `qubit`. Positions above it shift down by one.
    pub fn trace_out(&mut self, qubit: usize) {
        let p = self.position(qubit).expect("qubit is live");
        let w = self.window();
        let dim = 1usize << (w - 1);
        let low = (1usize << p) - 1;
        let insert = |i: usize, b: usize| ((i & !low) << 1) | (b << p) | (i & low);
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        for row in 0..dim {
            for col in 0..dim {
                next[(row << (w - 1)) | col] =
                    self.entry(insert(row, 0), insert(col, 0)) + self.entry(insert(row, 1), insert(col, 1));
            }
        }
        self.rho = next;
        self.active.remove(p);
    }

    /// `rho -> U rho U^dagger` on one live qubit.
    pub fn apply_1q(&mut self, qubit: usize, m: &Matrix2) {
        let p = self.position(qubit).expect("qubit is live");
        let w = self.window();
        apply_1q(&mut self.rho, p + w, m);
        apply_1q(&mut self.rho, p, &conj(m));
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let c = self.position(control).expect("control is live");
        let t = self.position(target).expect("target is live");
        let w = self.window();
        apply_cx(&mut self.rho, c + w, t + w);
        apply_cx(&mut self.rho, c, t);
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::Cx { control, target } => self.apply_cx(control, target),
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::X { qubit } => {
                self.apply_1q(qubit, &gate_matrix(gate).expect("one-qubit gate"))
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..1usize << self.window()).map(|i| self.entry(i, i)).sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = 1usize << self.window();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let dim = 1usize << self.window();
        let m = DMatrix::from_fn(dim, dim, |r, c| self.entry(r, c));
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `<Z>` of a live qubit.
    pub fn expect_z(&self, qubit: usize) -> f64 {
        let p = self.position(qubit).expect("qubit is live");
        (0..1usize << self.window())
            .map(|i| {
                let d = self.entry(i, i).re;
                if i >> p & 1 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }
}

/// One step of a sweep, reported to [`sweep`] observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepEvent {
    Gate(usize),
    TraceOut(usize),
}

fn check_cap(cap: usize) -> Result<()> {
    if cap == 0 || cap > MAX_WINDOW_CAP {
        return Err(Error::Config(format!(
            "window cap {cap} outside 1..={MAX_WINDOW_CAP}"
        )));
    }
    Ok(())
}

/// Sweep `circuit` with error `events` (sorted by gate) inserted, calling
/// `observe` after every gate and every trace-out. Returns the output
/// `<Z>`.
pub fn sweep<F>(circuit: &Circuit, cap: usize, events: &[ErrorEvent], mut observe: F) -> Result<f64>
where
    F: FnMut(SweepEvent, &WindowState),
{
    check_cap(cap)?;
    circuit.validate().map_err(Error::InvalidCircuit)?;
    let sched = liveness(circuit);
    if sched.peak_window > cap {
        let (gate_index, &active) = sched
            .live_counts
            .iter()
            .enumerate()
            .find(|(_, &n)| n > cap)
            .unwrap_or((circuit.gates().len(), &sched.peak_window));
        return Err(Error::WindowOverflow {
            gate_index,
            active,
            cap,
        });
    }

    let m = circuit.measured_qubit();
    let mut state = WindowState::new();
    let mut pending = events.iter().peekable();
    for (i, gate) in circuit.gates().iter().enumerate() {
        for q in gate.qubits().iter() {
            if sched.first_use[q] == Some(i) {
                state.adjoin(q);
            }
        }
        state.apply(gate);
        while let Some(ev) = pending.next_if(|ev| ev.after_gate == i) {
            state.apply_1q(ev.qubit, &ev.pauli.matrix());
        }
        observe(SweepEvent::Gate(i), &state);
        for q in gate.qubits().iter() {
            if q != m && sched.last_use[q] == Some(i) {
                state.trace_out(q);
                observe(SweepEvent::TraceOut(q), &state);
            }
        }
    }
    if state.position(m).is_none() {
        state.adjoin(m);
    }
    Ok(state.expect_z(m))
}

/// Exact output `<Z>` with the window capped at `cap` qubits.
pub fn run_window(circuit: &Circuit, cap: usize) -> Result<f64> {
    sweep(circuit, cap, &[], |_, _| {})
}

pub fn sample_output_stream(
    circuit: &Circuit,
    cap: usize,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<ShotOutcome> {
    match noise {
        Some(model) if !model.is_noiseless() => {
            // Surface capacity problems before drawing anything.
            run_window(circuit, cap)?;
            sample_trajectories(circuit, shots, seed, model, |events| {
                sweep(circuit, cap, events, |_, _| {})
            })
        }
        _ => sample_from_expectation(run_window(circuit, cap)?, shots, seed),
    }
}
