//! Closed-form compilation of a normalized polynomial into convex
//! aggregation weights, rotation angles and a concrete circuit.
//!
//! Circuit layout for degree `d` on qubits `q_0..q_d`:
//!
//! * encoding: `q_k` (k >= 1) gets `Ry(arccos x)` so that `<Z_k> = x`;
//!   `q_0` stays in `|0>` and carries the constant term;
//! * powers: a multiplication block with control `q_{k-1}` and target `q_k`
//!   leaves `<Z_k> = x^k` for k = 2..d;
//! * aggregation: terms are folded into a running sum one at a time, each
//!   step a two-qubit sum block `(term, sum)` whose output lives on the term
//!   qubit. A static `X` on the term qubit right before its step supplies the
//!   coefficient sign; magnitudes live only in the weights.
//!
//! Phase convention (frozen by the golden and exactness tests). The sum
//! block's cross term is `c (Y_t X_s - X_t Y_s)` when it opens with
//! `Rz(pi/2)` on the sum qubit and `c (X_t X_s + Y_t Y_s)` without it. Both
//! vanish on independent encodings but not on the entangled power chain, so
//! the phase gates are placed where the chain state cancels them:
//!
//! * backward order: the power chain uses bare `CX` (real amplitudes) and
//!   only the first executed aggregation step carries the `Rz(pi/2)`;
//! * forward order: the power chain uses the full `Rz(pi/2)` + `CX`
//!   multiplication block and every aggregation step omits the `Rz`.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::polynomial::{format_sig17, normalize, NormalizedPolynomial, Polynomial};

/// Clamp tolerance for weights that drift outside `[0, 1]` by rounding.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Order in which monomials are folded into the running sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// Highest degree first; the output lands on `q_0`.
    #[default]
    Backward,
    /// Constant term first; the output lands on the last aggregated qubit
    /// and at most four qubits are ever live at once.
    Forward,
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backward" => Ok(Order::Backward),
            "forward" => Ok(Order::Forward),
            other => Err(Error::Config(format!(
                "unknown aggregation order `{other}` (expected backward or forward)"
            ))),
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Order::Backward => "backward",
            Order::Forward => "forward",
        })
    }
}

/// Per-coefficient aggregation parameters, indexed by monomial degree.
///
/// The seed term (`d` for backward, `0` for forward) initializes the running
/// sum and emits no aggregation block; its weight is 1 (or 0 when its
/// coefficient is zero) so that `angle = arccos(1 - 2 weight)` holds for
/// every non-skipped entry.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSchedule {
    pub order: Order,
    pub weights: Vec<f64>,
    pub angles: Vec<f64>,
    pub signs: Vec<i8>,
    pub skip_flags: Vec<bool>,
}

impl WeightSchedule {
    pub fn degree(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn seed(&self) -> usize {
        match self.order {
            Order::Backward => self.degree(),
            Order::Forward => 0,
        }
    }

    /// Non-seed terms in aggregation order.
    pub fn steps(&self) -> Vec<usize> {
        let d = self.degree();
        match self.order {
            Order::Backward => (0..d).rev().collect(),
            Order::Forward => (1..=d).collect(),
        }
    }

    /// `|ã_k|` recovered by unrolling the convex recursion from the output
    /// back to the seed.
    pub fn magnitudes(&self) -> Vec<f64> {
        let mut mags = vec![0.0; self.weights.len()];
        let mut remaining = 1.0;
        for &k in self.steps().iter().rev() {
            mags[k] = self.weights[k] * remaining;
            remaining *= 1.0 - self.weights[k];
        }
        let seed = self.seed();
        mags[seed] = self.weights[seed] * remaining;
        mags
    }
}

/// `arccos(1 - 2w)`, clamping weights within [`WEIGHT_TOLERANCE`] of the
/// unit interval.
pub fn angle_of_weight(w: f64) -> Result<f64> {
    if !w.is_finite() || w < -WEIGHT_TOLERANCE || w > 1.0 + WEIGHT_TOLERANCE {
        return Err(Error::WeightDomain(w));
    }
    let w = w.clamp(0.0, 1.0);
    Ok((1.0 - 2.0 * w).acos())
}

pub fn compute_weights(np: &NormalizedPolynomial, order: Order) -> Result<WeightSchedule> {
    let mags: Vec<f64> = np.tilde_coeffs.iter().map(|a| a.abs()).collect();
    let l1: f64 = mags.iter().sum();
    if !((l1 - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidPolynomial(format!(
            "normalized coefficients must have unit l1 norm, got {l1}"
        )));
    }
    let d = np.degree();
    let mut weights = vec![0.0; d + 1];

    let (seed, steps): (usize, Vec<usize>) = match order {
        Order::Backward => (d, (0..d).rev().collect()),
        Order::Forward => (0, (1..=d).collect()),
    };
    let mut running = mags[seed];
    weights[seed] = if mags[seed] > 0.0 { 1.0 } else { 0.0 };
    for k in steps {
        running += mags[k];
        weights[k] = if mags[k] > 0.0 { mags[k] / running } else { 0.0 };
    }

    let angles = weights
        .iter()
        .map(|&w| angle_of_weight(w))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightSchedule {
        order,
        angles,
        signs: np
            .tilde_coeffs
            .iter()
            .map(|&a| if a < 0.0 { -1 } else { 1 })
            .collect(),
        skip_flags: weights.iter().map(|&w| w == 0.0).collect(),
        weights,
    })
}

/// Everything needed to build the evaluation circuit for any input `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledProgram {
    pub schedule: WeightSchedule,
    pub rescale: f64,
    /// Coefficients the program was compiled from, when known.
    pub source: Option<Polynomial>,
}

impl CompiledProgram {
    pub fn compile(poly: &Polynomial, order: Order) -> Result<Self> {
        let np = normalize(poly, 0.0)?;
        Self::from_normalized(&np, order, Some(poly.clone()))
    }

    pub fn from_normalized(
        np: &NormalizedPolynomial,
        order: Order,
        source: Option<Polynomial>,
    ) -> Result<Self> {
        Ok(Self {
            schedule: compute_weights(np, order)?,
            rescale: np.scale,
            source,
        })
    }

    pub fn degree(&self) -> usize {
        self.schedule.degree()
    }

    pub fn order(&self) -> Order {
        self.schedule.order
    }

    /// `C · sign_k · |ã_k|` from the schedule alone.
    pub fn reconstruct_coeffs(&self) -> Vec<f64> {
        self.schedule
            .magnitudes()
            .iter()
            .zip(&self.schedule.signs)
            .map(|(m, &s)| self.rescale * m * s as f64)
            .collect()
    }

    /// Noiseless output `<Z_out>` predicted by the schedule, `P(x) / C`.
    pub fn normalized_value(&self, x: f64) -> f64 {
        let mags = self.schedule.magnitudes();
        mags.iter()
            .zip(&self.schedule.signs)
            .rev()
            .fold(0.0, |acc, (m, &s)| acc * x + m * s as f64)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let s = &self.schedule;
        let angles = s
            .angles
            .iter()
            .map(|&a| RawValue::from_string(format_sig17(a)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let file = ProgramFileOut {
            order: s.order,
            c: self.rescale,
            degree: s.degree(),
            weights: &s.weights,
            angles,
            signs: &s.signs,
            skips: &s.skip_flags,
            coeffs: self.source.as_ref().map(|p| p.coeffs()),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: ProgramFileIn = serde_json::from_str(text)?;
        let n = f.degree + 1;
        if [f.weights.len(), f.angles.len(), f.signs.len(), f.skips.len()]
            .iter()
            .any(|&len| len != n)
        {
            return Err(Error::Config(format!(
                "program arrays must all have degree + 1 = {n} entries"
            )));
        }
        if !(f.c > 0.0 && f.c.is_finite()) {
            return Err(Error::Config(format!("rescale C must be positive, got {}", f.c)));
        }
        for k in 0..n {
            let expected = angle_of_weight(f.weights[k])?;
            if (expected - f.angles[k]).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "angle {k} = {} does not match its weight {}",
                    f.angles[k], f.weights[k]
                )));
            }
            if f.signs[k] != 1 && f.signs[k] != -1 {
                return Err(Error::Config(format!("sign {k} must be +1 or -1")));
            }
            if f.skips[k] != (f.weights[k] == 0.0) {
                return Err(Error::Config(format!(
                    "skip flag {k} disagrees with weight {}",
                    f.weights[k]
                )));
            }
        }
        let source = f.coeffs.map(Polynomial::new).transpose()?;
        Ok(Self {
            schedule: WeightSchedule {
                order: f.order,
                weights: f.weights,
                angles: f.angles,
                signs: f.signs,
                skip_flags: f.skips,
            },
            rescale: f.c,
            source,
        })
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize)]
struct ProgramFileOut<'a> {
    order: Order,
    #[serde(rename = "C")]
    c: f64,
    degree: usize,
    weights: &'a [f64],
    angles: Vec<Box<RawValue>>,
    signs: &'a [i8],
    skips: &'a [bool],
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<&'a [f64]>,
}

#[derive(Deserialize)]
struct ProgramFileIn {
    order: Order,
    #[serde(rename = "C")]
    c: f64,
    degree: usize,
    weights: Vec<f64>,
    angles: Vec<f64>,
    signs: Vec<i8>,
    skips: Vec<bool>,
    #[serde(default)]
    coeffs: Option<Vec<f64>>,
}

/// The arithmetic building blocks.
pub mod blocks {
    use super::*;

    /// Single-qubit encoding `Ry(arccos x)` giving `<Z> = x`.
    pub fn encode(circuit: &mut Circuit, qubit: usize, x: f64) {
        circuit.ry(qubit, x.acos());
    }

    /// Multiplication block: `<Z_target>` becomes `<Z_control> <Z_target>`
    /// on independent inputs. `phase` adds the leading `Rz(pi/2)` on the
    /// target.
    pub fn mult(circuit: &mut Circuit, control: usize, target: usize, phase: bool) {
        if phase {
            circuit.rz(target, FRAC_PI_2);
        }
        circuit.cx(control, target);
    }

    /// Weighted-sum block with `alpha = arccos(1 - 2w)`: `<Z_term>` becomes
    /// `w <Z_term> + (1 - w) <Z_sum>`. On independent encodings this needs
    /// `phase = true`.
    pub fn sum(circuit: &mut Circuit, term: usize, sum: usize, alpha: f64, phase: bool) {
        mult(circuit, term, sum, phase);
        circuit
            .ry(term, alpha / 2.0)
            .cx(sum, term)
            .ry(term, -alpha / 2.0);
    }
}

/// Evaluation circuit for input `x`.
pub fn build_circuit(program: &CompiledProgram, x: f64) -> Result<Circuit> {
    if !(x.abs() <= 1.0) {
        return Err(Error::EncodingDomain(x));
    }
    let s = &program.schedule;
    let d = s.degree();
    let mut c = Circuit::new(d + 1, 0);

    let seed = s.seed();
    let mut sum = seed;
    let mut first_step = true;
    let aggregate = |c: &mut Circuit, k: usize, sum: &mut usize, phase: bool| {
        if s.skip_flags[k] {
            return;
        }
        if s.signs[k] < 0 {
            c.x(k);
        }
        blocks::sum(c, k, *sum, s.angles[k], phase);
        *sum = k;
    };

    match s.order {
        Order::Backward => {
            for k in 1..=d {
                blocks::encode(&mut c, k, x);
            }
            for k in 2..=d {
                blocks::mult(&mut c, k - 1, k, false);
            }
            if s.signs[seed] < 0 {
                c.x(seed);
            }
            for k in (0..d).rev() {
                let phase = first_step && !s.skip_flags[k];
                aggregate(&mut c, k, &mut sum, phase);
                if phase {
                    first_step = false;
                }
            }
        }
        Order::Forward => {
            if s.signs[seed] < 0 {
                c.x(seed);
            }
            // Interleaved so each power qubit is aggregated right after it
            // has served as the control for the next power.
            for k in 1..=d {
                blocks::encode(&mut c, k, x);
                if k >= 2 {
                    blocks::mult(&mut c, k - 1, k, true);
                    aggregate(&mut c, k - 1, &mut sum, false);
                }
            }
            if d >= 1 {
                aggregate(&mut c, d, &mut sum, false);
            }
        }
    }
    c.set_measured_qubit(sum);
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCounts {
    pub qubits: usize,
    pub two_qubit_gates: usize,
    pub single_qubit_gates: usize,
    pub depth: usize,
}

pub fn resources(circuit: &Circuit) -> ResourceCounts {
    ResourceCounts {
        qubits: circuit.n_qubits(),
        two_qubit_gates: circuit.two_qubit_gate_count(),
        single_qubit_gates: circuit.single_qubit_gate_count(),
        depth: circuit.depth(),
    }
}
