//! Noiseless end-to-end exactness against an independent power-sum oracle.

mod common;

use common::{grid, power_sum, random_poly, rng};
use qpoly::compiler::resources;
use qpoly::sim::run_statevector;
use qpoly::{build_circuit, CompiledProgram, Order, Polynomial};

fn max_error(poly: &Polynomial, order: Order, xs: &[f64]) -> f64 {
    let prog = CompiledProgram::compile(poly, order).unwrap();
    xs.iter()
        .map(|&x| {
            let c = build_circuit(&prog, x).unwrap();
            let z = run_statevector(&c).unwrap().expect_z(c.measured_qubit());
            (prog.rescale * z - power_sum(poly.coeffs(), x)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn random_programs_are_exact_in_both_orders() {
    let xs = grid(-1.0, 1.0, 15);
    let mut r = rng(101);
    for d in 0..=8 {
        for _ in 0..20 {
            let p = random_poly(&mut r, d, 0.15);
            for order in [Order::Backward, Order::Forward] {
                let e = max_error(&p, order, &xs);
                assert!(e < 1e-9, "degree {d} {order} error {e:e} for {:?}", p.coeffs());
            }
        }
    }
}

#[test]
fn sparse_and_signed_programs() {
    let xs = grid(-1.0, 1.0, 7);
    let cases: &[&[f64]] = &[
        &[0.0, 0.0, 0.0, 1.0],
        &[-1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, -0.5],
        &[0.3, 0.0, -0.2, 0.0, 0.4, 0.0, -0.1],
        &[-0.7],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0],
    ];
    for c in cases {
        let p = Polynomial::new(c.to_vec()).unwrap();
        for order in [Order::Backward, Order::Forward] {
            let e = max_error(&p, order, &xs);
            assert!(e < 1e-9, "{order} error {e:e} for {c:?}");
        }
    }
}

#[test]
fn higher_degrees_stay_exact() {
    let xs = grid(-1.0, 1.0, 5);
    let mut r = rng(7);
    for d in [10, 12, 14] {
        let p = random_poly(&mut r, d, 0.1);
        for order in [Order::Backward, Order::Forward] {
            assert!(max_error(&p, order, &xs) < 1e-9);
        }
    }
}

#[test]
fn constant_program_is_a_single_x_or_nothing() {
    let p = Polynomial::new(vec![-0.7]).unwrap();
    let prog = CompiledProgram::compile(&p, Order::Backward).unwrap();
    let c = build_circuit(&prog, 0.2).unwrap();
    assert_eq!(c.n_qubits(), 1);
    assert_eq!(c.gates().len(), 1);
    let z = run_statevector(&c).unwrap().expect_z(0);
    assert_eq!(prog.rescale * z, -0.7);
}

#[test]
fn dense_resource_counts() {
    let mut r = rng(3);
    for d in 1..=12 {
        let p = random_poly(&mut r, d, 0.0);
        for order in [Order::Backward, Order::Forward] {
            let c = build_circuit(&CompiledProgram::compile(&p, order).unwrap(), 0.1).unwrap();
            let res = resources(&c);
            assert_eq!(res.qubits, d + 1);
            assert_eq!(res.two_qubit_gates, 3 * d - 1, "degree {d} {order}");
        }
    }
}
