//! Flat gate-level IR shared by the compiler and both simulators.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    X { qubit: usize },
    Cx { control: usize, target: usize },
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    /// Qubits the gate acts on, control first for `Cx`.
    pub fn qubits(&self) -> GateQubits {
        match *self {
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::X { qubit } => {
                GateQubits::One(qubit)
            }
            Gate::Cx { control, target } => GateQubits::Two(control, target),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateQubits {
    One(usize),
    Two(usize, usize),
}

impl GateQubits {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let (first, second) = match *self {
            GateQubits::One(q) => (q, None),
            GateQubits::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(first).chain(second)
    }
}

/// One invariant violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub gate_index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate_index {
            Some(i) => write!(f, "{} at index {}", self.message, i),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    measured_qubit: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, measured_qubit: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            measured_qubit,
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>, measured_qubit: usize) -> Self {
        Self {
            n_qubits,
            gates,
            measured_qubit,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured_qubit(&self) -> usize {
        self.measured_qubit
    }

    pub fn set_measured_qubit(&mut self, qubit: usize) {
        self.measured_qubit = qubit;
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn ry(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(Gate::Ry { qubit, angle })
    }

    pub fn rz(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(Gate::Rz { qubit, angle })
    }

    pub fn x(&mut self, qubit: usize) -> &mut Self {
        self.push(Gate::X { qubit })
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(Gate::Cx { control, target })
    }

    /// Every invariant violation, in gate order.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.n_qubits == 0 {
            out.push(Violation {
                gate_index: None,
                message: "circuit has zero qubits".to_string(),
            });
        }
        if self.measured_qubit >= self.n_qubits {
            out.push(Violation {
                gate_index: None,
                message: format!(
                    "measured qubit {} out of range for {} qubits",
                    self.measured_qubit, self.n_qubits
                ),
            });
        }
        for (i, gate) in self.gates.iter().enumerate() {
            let mut bad = |message: String| {
                out.push(Violation {
                    gate_index: Some(i),
                    message,
                })
            };
            match *gate {
                Gate::Ry { qubit, angle } | Gate::Rz { qubit, angle } => {
                    if qubit >= self.n_qubits {
                        bad(format!("qubit {qubit} out of range"));
                    }
                    if !angle.is_finite() {
                        bad("non-finite rotation angle".to_string());
                    }
                }
                Gate::X { qubit } => {
                    if qubit >= self.n_qubits {
                        bad(format!("qubit {qubit} out of range"));
                    }
                }
                Gate::Cx { control, target } => {
                    if control == target {
                        bad("identical control/target".to_string());
                    }
                    for q in [control, target] {
                        if q >= self.n_qubits {
                            bad(format!("qubit {q} out of range"));
                        }
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Longest chain in the dependency DAG; two gates conflict iff they
    /// share a qubit and every gate counts as one layer.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let l = match gate.qubits() {
                GateQubits::One(q) => {
                    level[q] += 1;
                    level[q]
                }
                GateQubits::Two(a, b) => {
                    let l = level[a].max(level[b]) + 1;
                    level[a] = l;
                    level[b] = l;
                    l
                }
            };
            depth = depth.max(l);
        }
        depth
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn single_qubit_gate_count(&self) -> usize {
        self.gates.len() - self.two_qubit_gate_count()
    }
}
