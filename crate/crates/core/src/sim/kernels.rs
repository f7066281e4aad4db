//! Amplitude-array kernels. Qubit `q` of a register is bit `q` of the basis
//! index (little-endian).

use num_complex::Complex64;

use crate::circuit::Gate;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn ry(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz(theta: f64) -> Matrix2 {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn pauli_x() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_y() -> Matrix2 {
    [[ZERO, -I], [I, ZERO]]
}

pub fn pauli_z() -> Matrix2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub fn conj(m: &Matrix2) -> Matrix2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

/// Single-qubit matrix of a one-qubit gate; `None` for `Cx`.
pub fn gate_matrix(gate: &Gate) -> Option<Matrix2> {
    match *gate {
        Gate::Ry { angle, .. } => Some(ry(angle)),
        Gate::Rz { angle, .. } => Some(rz(angle)),
        Gate::X { .. } => Some(pauli_x()),
        Gate::Cx { .. } => None,
    }
}

pub fn apply_1q(amps: &mut [Complex64], bit: usize, m: &Matrix2) {
    let stride = 1usize << bit;
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += 2 * stride;
    }
}

pub fn apply_cx(amps: &mut [Complex64], control_bit: usize, target_bit: usize) {
    let cmask = 1usize << control_bit;
    let tmask = 1usize << target_bit;
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}
