//! Deterministic random instances for tests and benchmarks.
//!
//! Everything here is seeded through [`SplitMix64`], so test failures
//! reproduce exactly. Not intended for statistics-grade sampling; the
//! distributions just need to hit generic (non-symmetric) inputs.

use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::eig::hermitian_eig;
use crate::matrix::{c64, Matrix};
use crate::rng::SplitMix64;
use crate::state::DensityMatrix;

/// Matrix with entries uniform in the complex square [-1, 1) x [-1, 1)i.
pub fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        c64(rng.next_symmetric(), rng.next_symmetric())
    })
}

pub fn random_hermitian(rng: &mut SplitMix64, n: usize) -> Matrix {
    random_matrix(rng, n, n).hermitize()
}

/// Haar-ish random unitary via Gram-Schmidt on a random matrix. Exact
/// distribution does not matter for the tests; unitarity does.
pub fn random_unitary(rng: &mut SplitMix64, n: usize) -> Matrix {
    loop {
        let g = random_matrix(rng, n, n);
        if let Some(u) = gram_schmidt(&g) {
            return u;
        }
    }
}

/// First `cols` columns of a random `rows x rows` unitary, so u†u = I.
pub fn random_isometry(rng: &mut SplitMix64, rows: usize, cols: usize) -> Matrix {
    assert!(cols <= rows, "isometry needs rows >= cols");
    let u = random_unitary(rng, rows);
    Matrix::from_fn(rows, cols, |i, j| u.get(i, j))
}

fn gram_schmidt(g: &Matrix) -> Option<Matrix> {
    let n = g.rows();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| g.get(i, j)).collect();
        for u in &cols {
            let ip: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= ip * ui;
            }
        }
        let norm: f64 = v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None; // numerically dependent columns, caller retries
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        cols.push(v);
    }
    Some(Matrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// Normalized random ket of dimension `d`.
pub fn random_pure_ket(rng: &mut SplitMix64, d: usize) -> Matrix {
    loop {
        let v = random_matrix(rng, d, 1);
        let norm = v.frobenius_norm();
        if norm > 1e-6 {
            return v.scale(1.0 / norm);
        }
    }
}

/// Full-rank random density matrix via a normalized Gram matrix.
pub fn random_density(rng: &mut SplitMix64, dims: Vec<usize>) -> DensityMatrix {
    let d: usize = dims.iter().product();
    let g = random_matrix(rng, d, d);
    let gg = g.matmul(&g.adjoint()).expect("square factors");
    let rho = gg.scale(1.0 / gg.trace().re);
    DensityMatrix::new(rho, dims).expect("Gram construction yields a valid state")
}

/// Random trace-preserving channel: Kraus families G_i renormalized by
/// S^{-1/2} where S = Σ G_i†G_i.
pub fn random_channel(rng: &mut SplitMix64, d: usize, n_kraus: usize) -> KrausChannel {
    assert!(n_kraus > 0);
    let g: Vec<Matrix> = (0..n_kraus).map(|_| random_matrix(rng, d, d)).collect();
    let mut s = Matrix::zeros(d, d);
    for gi in &g {
        s = s.add(&gi.adjoint().matmul(gi).expect("square factors"));
    }
    let s_inv_sqrt = inv_sqrt(&s);
    let kraus = g
        .into_iter()
        .map(|gi| gi.matmul(&s_inv_sqrt).expect("square factors"))
        .collect();
    KrausChannel::new(kraus).expect("renormalized family is a valid channel")
}

/// S^{-1/2} of a positive definite Hermitian matrix.
fn inv_sqrt(s: &Matrix) -> Matrix {
    let eig = hermitian_eig(&s.hermitize()).expect("Hermitian by construction");
    let n = s.rows();
    let mut scaled = Matrix::zeros(n, n);
    for j in 0..n {
        let lam = eig.values[j];
        assert!(lam > 1e-12, "inv_sqrt needs a positive definite matrix");
        let f = 1.0 / lam.sqrt();
        for i in 0..n {
            scaled.set(i, j, eig.vectors.get(i, j) * f);
        }
    }
    scaled
        .matmul(&eig.vectors.adjoint())
        .expect("square factors")
}
