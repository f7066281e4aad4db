//! Stochastic Pauli noise by trajectory sampling, and the shared shot
//! sampler used by both simulators.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rng::{binomial, rng_from_seed, unit_f64};
use crate::sim::kernels::{pauli_x, pauli_y, pauli_z, Matrix2};

/// Per-gate error probabilities. With probability `p1` (one-qubit gate) or
/// `p2` (two-qubit gate) the gate is followed by an independent, uniformly
/// chosen X, Y or Z on each qubit it touched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        let m = Self { p1, p2 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("noise {name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Matrix2 {
        match self {
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }
}

/// A Pauli inserted right after gate `after_gate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErrorEvent {
    pub after_gate: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// Counts of output-qubit measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotOutcome {
    pub n0: u64,
    pub n1: u64,
    #[serde(rename = "N")]
    pub shots: u64,
}

impl ShotOutcome {
    pub fn new(n0: u64, n1: u64) -> Self {
        Self {
            n0,
            n1,
            shots: n0 + n1,
        }
    }
}

/// Probability of reading 1 on a qubit with the given `<Z>`.
pub fn prob_one(expect_z: f64) -> f64 {
    ((1.0 - expect_z) / 2.0).clamp(0.0, 1.0)
}

/// Noiseless sampling: one binomial draw from the exact marginal.
pub fn sample_from_expectation(expect_z: f64, shots: u64, seed: u64) -> Result<ShotOutcome> {
    if shots == 0 {
        return Err(Error::Config("shot count must be at least 1".to_string()));
    }
    let mut rng = rng_from_seed(seed);
    let n1 = binomial(&mut rng, shots, prob_one(expect_z));
    Ok(ShotOutcome::new(shots - n1, n1))
}

/// Noisy sampling: `shots` independent trajectories, one readout each.
///
/// `eval` returns the exact output `<Z>` for a given error pattern. Patterns
/// repeat often at low error rates, so results are memoized per pattern;
/// the random stream consumed is the same either way.
pub fn sample_trajectories<F>(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: &NoiseModel,
    mut eval: F,
) -> Result<ShotOutcome>
where
    F: FnMut(&[ErrorEvent]) -> Result<f64>,
{
    if shots == 0 {
        return Err(Error::Config("shot count must be at least 1".to_string()));
    }
    noise.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut cache: HashMap<Vec<ErrorEvent>, f64> = HashMap::new();
    let mut events = Vec::new();
    let mut n1 = 0;
    for _ in 0..shots {
        events.clear();
        for (i, gate) in circuit.gates().iter().enumerate() {
            let p = if gate.is_two_qubit() { noise.p2 } else { noise.p1 };
            if p > 0.0 && unit_f64(&mut rng) < p {
                for qubit in gate.qubits().iter() {
                    let pauli = match rng.random_range(0..3u8) {
                        0 => Pauli::X,
                        1 => Pauli::Y,
                        _ => Pauli::Z,
                    };
                    events.push(ErrorEvent {
                        after_gate: i,
                        qubit,
                        pauli,
                    });
                }
            }
        }
        let z = match cache.get(&events) {
            Some(&z) => z,
            None => {
                let z = eval(&events)?;
                cache.insert(events.clone(), z);
                z
            }
        };
        if unit_f64(&mut rng) < prob_one(z) {
            n1 += 1;
        }
    }
    Ok(ShotOutcome::new(shots - n1, n1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_extremes() {
        assert_eq!(sample_from_expectation(1.0, 777, 1).unwrap(), ShotOutcome::new(777, 0));
        assert_eq!(sample_from_expectation(-1.0, 777, 1).unwrap(), ShotOutcome::new(0, 777));
        assert!(sample_from_expectation(0.0, 0, 1).is_err());
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::new(0.0, 1.0).is_ok());
        assert!(NoiseModel::new(-0.1, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 1.5).is_err());
        assert!(NoiseModel::default().is_noiseless());
    }

    #[test]
    fn zero_noise_trajectories_see_no_events() {
        let mut c = Circuit::new(2, 1);
        c.ry(0, 0.3).cx(0, 1);
        let noise = NoiseModel::new(0.0, 0.0).unwrap();
        let out = sample_trajectories(&c, 100, 5, &noise, |ev| {
            assert!(ev.is_empty());
            Ok(1.0)
        })
        .unwrap();
        assert_eq!(out, ShotOutcome::new(100, 0));
    }

    #[test]
    fn certain_noise_hits_every_touched_qubit() {
        let mut c = Circuit::new(2, 1);
        c.ry(0, 0.3).cx(0, 1);
        let noise = NoiseModel::new(1.0, 1.0).unwrap();
        sample_trajectories(&c, 20, 5, &noise, |ev| {
            assert_eq!(ev.len(), 3);
            assert_eq!((ev[0].after_gate, ev[0].qubit), (0, 0));
            assert_eq!((ev[1].after_gate, ev[1].qubit), (1, 0));
            assert_eq!((ev[2].after_gate, ev[2].qubit), (1, 1));
            Ok(0.0)
        })
        .unwrap();
    }
}
