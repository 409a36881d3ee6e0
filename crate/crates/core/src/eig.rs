//! Eigendecomposition of complex Hermitian matrices by cyclic Jacobi
//! rotations.
//!
//! Every matrix this crate diagonalizes is Hermitian and of dimension 16 or
//! less, a regime where Jacobi sweeps converge in a handful of passes and are
//! simple enough to keep the crate dependency-free. Each rotation zeroes one
//! off-diagonal pair (p, q): the entry a_pq = |a_pq| e^{iφ} is first made real
//! by the phase diag(1, e^{-iφ}) on the (p, q) plane, then killed by a real
//! rotation with tan(2θ) = 2|a_pq| / (a_pp - a_qq). Sweeps repeat in cyclic
//! order until the off-diagonal Frobenius norm drops below 1e-12, with a hard
//! cap of 100 sweeps.

use crate::error::{Error, Result};
use crate::matrix::{c64, Matrix};

/// Hermiticity tolerance shared by the validating constructors.
pub const TOL_HERM: f64 = 1e-9;
/// Convergence threshold on the off-diagonal Frobenius norm.
const OFF_DIAG_THRESHOLD: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Unitary matrix whose column j is the eigenvector for `values[j]`.
    pub vectors: Matrix,
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a.get(p, q).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a Hermitian matrix.
///
/// Fails on non-square or non-Hermitian input (deviation above 1e-9) and when
/// the sweep cap is reached before convergence.
pub fn hermitian_eig(m: &Matrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > TOL_HERM {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = m.rows();
    // Work on the exactly Hermitian average so rounding-level asymmetry in
    // the input cannot leak into the rotations.
    let mut a = m.hermitize();
    let mut v = Matrix::identity(n);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAG_THRESHOLD {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let beta = apq.norm();
                if beta == 0.0 {
                    continue;
                }
                let phase = apq / beta; // e^{iφ}
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                let theta = 0.5 * (2.0 * beta).atan2(alpha - gamma);
                let (s, c) = theta.sin_cos();
                let pc = phase.conj(); // e^{-iφ}

                // Rotated plane: U[:,p] = c e_p + s e^{-iφ} e_q,
                //                U[:,q] = -s e_p + c e^{-iφ} e_q.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    let new_kp = akp * c + akq * pc * s;
                    let new_kq = akq * pc * c - akp * s;
                    a.set(k, p, new_kp);
                    a.set(p, k, new_kp.conj());
                    a.set(k, q, new_kq);
                    a.set(q, k, new_kq.conj());
                }
                let app = c * c * alpha + 2.0 * c * s * beta + s * s * gamma;
                let aqq = s * s * alpha - 2.0 * c * s * beta + c * c * gamma;
                a.set(p, p, c64(app, 0.0));
                a.set(q, q, c64(aqq, 0.0));
                a.set(p, q, c64(0.0, 0.0));
                a.set(q, p, c64(0.0, 0.0));

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * pc * s);
                    v.set(k, q, vkq * pc * c - vkp * s);
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= OFF_DIAG_THRESHOLD {
        return Err(Error::EigNotConverged {
            sweeps: MAX_SWEEPS,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let raw: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v.get(row, old_col));
        }
    }
    Ok(HermitianEig { values, vectors })
}

impl HermitianEig {
    /// Rebuilds V diag(λ) V†, the residual against the original matrix being
    /// the standard accuracy check.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut scaled = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                scaled.set(i, j, self.vectors.get(i, j) * self.values[j]);
            }
        }
        scaled
            .matmul(&self.vectors.adjoint())
            .expect("square factors")
    }
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn largest_eigenvalue(m: &Matrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::outer;
    use crate::pauli;
    use crate::rng::SplitMix64;

    fn random_hermitian(rng: &mut SplitMix64, n: usize) -> Matrix {
        let g = Matrix::from_fn(n, n, |_, _| c64(rng.next_symmetric(), rng.next_symmetric()));
        g.hermitize()
    }

    #[test]
    fn pauli_z_has_computational_eigenbasis() {
        let eig = hermitian_eig(&pauli::z()).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] + 1.0).abs() < 1e-14);
        // Eigenvector for +1 must be |0> up to phase.
        let v0 = eig.vectors.column(0);
        let overlap = v0.adjoint().matmul(&pauli::ket_zero()).unwrap().get(0, 0);
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_x_has_fourier_eigenbasis() {
        let eig = hermitian_eig(&pauli::x()).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[1] + 1.0).abs() < 1e-12);
        let plus_overlap = eig
            .vectors
            .column(0)
            .adjoint()
            .matmul(&pauli::ket_plus())
            .unwrap()
            .get(0, 0);
        let minus_overlap = eig
            .vectors
            .column(1)
            .adjoint()
            .matmul(&pauli::ket_minus())
            .unwrap()
            .get(0, 0);
        assert!(
            (plus_overlap.norm() - 1.0).abs() < 1e-12,
            "+1 vector is |+>"
        );
        assert!(
            (minus_overlap.norm() - 1.0).abs() < 1e-12,
            "-1 vector is |->"
        );
    }

    #[test]
    fn random_hermitian_reconstructs_and_vectors_are_unitary() {
        let mut rng = SplitMix64::new(21);
        for n in [2, 4, 8] {
            let m = random_hermitian(&mut rng, n);
            let eig = hermitian_eig(&m).unwrap();
            let residual = eig.reconstruct().frobenius_distance(&m);
            assert!(
                residual < 1e-9,
                "reconstruction residual {residual:.3e} too large at n={n}"
            );
            let vtv = eig.vectors.adjoint().matmul(&eig.vectors).unwrap();
            assert!(
                vtv.max_abs_diff(&Matrix::identity(n)) < 1e-9,
                "eigenvector matrix must be unitary"
            );
        }
    }

    #[test]
    fn eigenvalues_come_out_descending() {
        let mut rng = SplitMix64::new(22);
        let m = random_hermitian(&mut rng, 6);
        let eig = hermitian_eig(&m).unwrap();
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1], "eigenvalues must be sorted descending");
        }
    }

    #[test]
    fn density_like_matrix_keeps_unit_eigenvalue_sum() {
        let mut rng = SplitMix64::new(23);
        let g = Matrix::from_fn(4, 4, |_, _| c64(rng.next_symmetric(), rng.next_symmetric()));
        let gg = g.matmul(&g.adjoint()).unwrap();
        let rho = gg.scale(1.0 / gg.trace().re);
        let eig = hermitian_eig(&rho).unwrap();
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - 1.0).abs() < 1e-10, "eigenvalues of a state sum to 1");
        assert!(
            eig.values.iter().all(|&l| l > -1e-10),
            "Gram-constructed state must be PSD"
        );
    }

    #[test]
    fn rank_one_projector_spectrum() {
        let psi = pauli::ket_plus();
        let eig = hermitian_eig(&outer(&psi, &psi)).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!(eig.values[1].abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = Matrix::new(
            2,
            2,
            vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn handles_degenerate_spectra() {
        let eig = hermitian_eig(&Matrix::identity(5)).unwrap();
        assert!(eig.values.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }
}
