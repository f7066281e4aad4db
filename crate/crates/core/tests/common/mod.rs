#![allow(dead_code)]

use qpoly::{Order, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients in [-1, 1], each zeroed with probability `zero_p`, never
/// all zero.
pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize, zero_p: f64) -> Polynomial {
    loop {
        let coeffs: Vec<f64> = (0..=degree)
            .map(|_| {
                if rng.random::<f64>() < zero_p {
                    0.0
                } else {
                    rng.random_range(-1.0..1.0)
                }
            })
            .collect();
        if coeffs.iter().any(|&a| a != 0.0) {
            return Polynomial::new(coeffs).unwrap();
        }
    }
}

/// Power-sum evaluation, deliberately not Horner.
pub fn power_sum(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a * x.powi(k as i32))
        .sum()
}

pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Pinned programs behind the QASM fixtures: (file, coeffs, order, x).
pub fn golden_cases() -> Vec<(&'static str, Vec<f64>, Order, f64)> {
    vec![
        ("degree2_x0.qasm", vec![0.1, 0.2, 0.3], Order::Backward, 0.0),
        ("degree3_x0p3.qasm", vec![0.5, -0.25, 0.0, 0.125], Order::Backward, 0.3),
        ("constant_neg.qasm", vec![-0.7], Order::Backward, 0.9),
    ]
}
