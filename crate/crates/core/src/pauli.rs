//! Pauli operators and the computational / Fourier basis kets used
//! throughout the crate.
//!
//! Conventions: X = |0><1| + |1><0|, Z = |0><0| - |1><1|, Y = i(|1><0| - |0><1|),
//! so that ZX = -XZ = iY.

use num_complex::Complex64;

use crate::matrix::{c64, outer, Matrix};

pub fn x() -> Matrix {
    Matrix::new(
        2,
        2,
        vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)],
    )
    .unwrap()
}

pub fn y() -> Matrix {
    Matrix::new(
        2,
        2,
        vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)],
    )
    .unwrap()
}

pub fn z() -> Matrix {
    Matrix::new(
        2,
        2,
        vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)],
    )
    .unwrap()
}

pub fn ket_zero() -> Matrix {
    Matrix::col_vec(&[c64(1.0, 0.0), c64(0.0, 0.0)])
}

pub fn ket_one() -> Matrix {
    Matrix::col_vec(&[c64(0.0, 0.0), c64(1.0, 0.0)])
}

pub fn ket_plus() -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::col_vec(&[c64(s, 0.0), c64(s, 0.0)])
}

pub fn ket_minus() -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::col_vec(&[c64(s, 0.0), c64(-s, 0.0)])
}

/// |ψ><ψ| for a column vector ψ (not renormalized).
pub fn projector(ket: &Matrix) -> Matrix {
    outer(ket, ket)
}

/// (|00> + |11>) / √2 as a 4-component column vector.
pub fn bell_phi_plus() -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::col_vec(&[c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)])
}

/// The scalar i.
pub fn im() -> Complex64 {
    c64(0.0, 1.0)
}
