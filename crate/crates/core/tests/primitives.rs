//! Arithmetic blocks on independent encodings.

mod common;

use common::grid;
use qpoly::compiler::{angle_of_weight, blocks};
use qpoly::sim::run_statevector;
use qpoly::Circuit;

fn product(x0: f64, x1: f64) -> f64 {
    let mut c = Circuit::new(2, 1);
    blocks::encode(&mut c, 0, x0);
    blocks::encode(&mut c, 1, x1);
    blocks::mult(&mut c, 0, 1, true);
    run_statevector(&c).unwrap().expect_z(1)
}

fn convex(x_term: f64, x_sum: f64, w: f64) -> f64 {
    let mut c = Circuit::new(2, 0);
    blocks::encode(&mut c, 0, x_term);
    blocks::encode(&mut c, 1, x_sum);
    blocks::sum(&mut c, 0, 1, angle_of_weight(w).unwrap(), true);
    run_statevector(&c).unwrap().expect_z(0)
}

#[test]
fn mult_grid_81() {
    let xs = grid(-1.0, 1.0, 9);
    let mut worst: f64 = 0.0;
    for &a in &xs {
        for &b in &xs {
            worst = worst.max((product(a, b) - a * b).abs());
        }
    }
    assert!(worst < 1e-12, "worst {worst:e}");
}

#[test]
fn sum_grid_729() {
    let xs = grid(-1.0, 1.0, 9);
    let ws = grid(0.0, 1.0, 9);
    let mut worst: f64 = 0.0;
    for &a in &xs {
        for &b in &xs {
            for &w in &ws {
                worst = worst.max((convex(a, b, w) - (w * a + (1.0 - w) * b)).abs());
            }
        }
    }
    assert!(worst < 1e-10, "worst {worst:e}");
}

#[test]
fn sum_endpoints_select_one_input() {
    assert!((convex(0.3, -0.8, 1.0) - 0.3).abs() < 1e-14);
    assert!((convex(0.3, -0.8, 0.0) + 0.8).abs() < 1e-14);
}

#[test]
fn mult_without_phase_still_multiplies_product_states() {
    let mut c = Circuit::new(2, 1);
    blocks::encode(&mut c, 0, 0.4);
    blocks::encode(&mut c, 1, -0.6);
    blocks::mult(&mut c, 0, 1, false);
    assert!((run_statevector(&c).unwrap().expect_z(1) + 0.24).abs() < 1e-14);
}
