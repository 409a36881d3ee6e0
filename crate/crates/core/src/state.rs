//! Density matrices over small multipartite systems.
//!
//! A [`DensityMatrix`] bundles the raw matrix with a list of subsystem
//! dimensions so partial traces know the factor structure. The validating
//! constructor enforces Hermiticity, unit trace, and positivity; paths that
//! produce states from already-validated inputs through trace-preserving
//! arithmetic use [`DensityMatrix::new_unchecked`] and are covered by tests
//! instead of per-call eigendecompositions.

use num_complex::Complex64;

use crate::eig::{hermitian_eig, TOL_HERM};
use crate::error::{Error, Result};
use crate::matrix::{outer, Matrix};
use crate::pauli;

/// Trace tolerance for state validation.
pub const TOL_TRACE: f64 = 1e-9;
/// Eigenvalues above -TOL_PSD count as nonnegative.
pub const TOL_PSD: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: Matrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates and wraps a density matrix: square, dims consistent,
    /// Hermitian within 1e-9, trace 1 within 1e-9, eigenvalues above -1e-9.
    pub fn new(mat: Matrix, dims: Vec<usize>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let d: usize = dims.iter().product();
        if d != mat.rows() || dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadSubsystemDims {
                dims,
                dim: mat.rows(),
            });
        }
        let dev = mat.hermiticity_deviation();
        if dev > TOL_HERM {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let eig = hermitian_eig(&mat)?;
        let min = *eig
            .values
            .last()
            .expect("nonempty spectrum for a validated square matrix");
        if min < -TOL_PSD {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(Self { mat, dims })
    }

    /// Wraps without validation. Callers guarantee the invariants hold, e.g.
    /// because the matrix came from a trace-preserving map on a valid state.
    pub fn new_unchecked(mat: Matrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.rows());
        Self { mat, dims }
    }

    /// Pure state |ψ><ψ| / <ψ|ψ> from a column vector of amplitudes.
    pub fn pure(ket: &Matrix, dims: Vec<usize>) -> Result<Self> {
        let norm_sq = ket.frobenius_norm().powi(2);
        if norm_sq < 1e-24 {
            return Err(Error::ZeroNorm);
        }
        Self::new(outer(ket, ket).scale(1.0 / norm_sq), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self::new_unchecked(Matrix::identity(d).scale(1.0 / d as f64), dims)
    }

    /// Two-qubit maximally entangled state (|00> + |11>)(<00| + <11|) / 2.
    pub fn maximally_entangled_qubits() -> Self {
        let phi = pauli::bell_phi_plus();
        Self::new_unchecked(outer(&phi, &phi), vec![2, 2])
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn into_mat(self) -> Matrix {
        self.mat
    }

    /// Traces out every subsystem not listed in `keep`, preserving the
    /// original subsystem order among the kept ones.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = partial_trace_mat(&self.mat, &self.dims, keep)?;
        let kept_dims: Vec<usize> = {
            let mut ks = keep.to_vec();
            ks.sort_unstable();
            ks.iter().map(|&k| self.dims[k]).collect()
        };
        Ok(DensityMatrix::new_unchecked(reduced, kept_dims))
    }

    /// tr(ρ²), equal to 1 exactly when the state is pure.
    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).expect("square state").trace().re
    }

    /// <ψ|ρ|ψ> for a normalized pure target.
    pub fn fidelity_with_pure(&self, ket: &Matrix) -> Result<f64> {
        if ket.rows() != self.dim() || ket.cols() != 1 {
            return Err(Error::DimensionMismatch {
                left_rows: self.dim(),
                left_cols: self.dim(),
                right_rows: ket.rows(),
                right_cols: ket.cols(),
            });
        }
        let val = ket.adjoint().matmul(&self.mat)?.matmul(ket)?.get(0, 0);
        Ok(val.re)
    }
}

/// Partial trace on a raw square matrix with explicit subsystem dims.
///
/// `keep` selects subsystem indices (any order, no repeats); the traced-out
/// indices are summed over. Works on any operator, not only states, which is
/// what the Choi-matrix code relies on.
pub fn partial_trace_mat(m: &Matrix, dims: &[usize], keep: &[usize]) -> Result<Matrix> {
    let d: usize = dims.iter().product();
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if d != m.rows() {
        return Err(Error::BadSubsystemDims {
            dims: dims.to_vec(),
            dim: m.rows(),
        });
    }
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::InvalidSubsystem {
                index: k,
                count: dims.len(),
            });
        }
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    if kept.is_empty() || kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadSelection);
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();

    // Row-major strides of the full index.
    let n = dims.len();
    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let dk: usize = kept.iter().map(|&i| dims[i]).product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();

    // Flat offset of a mixed-radix counter over the given subsystems.
    let offset = |subsys: &[usize], mut counter: usize| -> usize {
        let mut off = 0;
        for &s in subsys.iter().rev() {
            off += (counter % dims[s]) * stride[s];
            counter /= dims[s];
        }
        off
    };

    let mut out = Matrix::zeros(dk, dk);
    for ki in 0..dk {
        let row_base = offset(&kept, ki);
        for kj in 0..dk {
            let col_base = offset(&kept, kj);
            let mut sum = Complex64::new(0.0, 0.0);
            for t in 0..dt.max(1) {
                let t_off = if traced.is_empty() {
                    0
                } else {
                    offset(&traced, t)
                };
                sum += m.get(row_base + t_off, col_base + t_off);
            }
            out.set(ki, kj, sum);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c64;
    use crate::rng::SplitMix64;

    fn random_density(rng: &mut SplitMix64, dims: Vec<usize>) -> DensityMatrix {
        let d: usize = dims.iter().product();
        let g = Matrix::from_fn(d, d, |_, _| c64(rng.next_symmetric(), rng.next_symmetric()));
        let gg = g.matmul(&g.adjoint()).unwrap();
        let rho = gg.scale(1.0 / gg.trace().re);
        DensityMatrix::new(rho, dims).unwrap()
    }

    #[test]
    fn validation_rejects_bad_trace_and_negativity() {
        let double = Matrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(double, vec![2]),
            Err(Error::BadTrace { .. })
        ));

        let negative = Matrix::new(
            2,
            2,
            vec![c64(1.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            DensityMatrix::new(negative, vec![2]),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn validation_rejects_inconsistent_dims() {
        let rho = Matrix::identity(4).scale(0.25);
        assert!(matches!(
            DensityMatrix::new(rho, vec![3]),
            Err(Error::BadSubsystemDims { .. })
        ));
    }

    #[test]
    fn product_state_partial_trace_recovers_factors() {
        let a = DensityMatrix::pure(&pauli::ket_plus(), vec![2]).unwrap();
        let b = DensityMatrix::pure(&pauli::ket_one(), vec![2]).unwrap();
        let joint = DensityMatrix::new(a.mat().tensor(b.mat()), vec![2, 2]).unwrap();
        let left = joint.partial_trace(&[0]).unwrap();
        let right = joint.partial_trace(&[1]).unwrap();
        assert!(left.mat().max_abs_diff(a.mat()) < 1e-12);
        assert!(right.mat().max_abs_diff(b.mat()) < 1e-12);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let bell = DensityMatrix::maximally_entangled_qubits();
        let reduced = bell.partial_trace(&[0]).unwrap();
        let mixed = Matrix::identity(2).scale(0.5);
        assert!(
            reduced.mat().max_abs_diff(&mixed) < 1e-12,
            "either side of a Bell pair is I/2"
        );
    }

    #[test]
    fn partial_trace_matches_explicit_double_sum() {
        let mut rng = SplitMix64::new(31);
        let rho = random_density(&mut rng, vec![2, 2]);
        let reduced = rho.partial_trace(&[1]).unwrap();
        // Oracle: (tr_A ρ)[k, l] = Σ_i ρ[(i,k), (i,l)] with flat index i*2+k.
        for k in 0..2 {
            for l in 0..2 {
                let mut s = c64(0.0, 0.0);
                for i in 0..2 {
                    s += rho.mat().get(i * 2 + k, i * 2 + l);
                }
                assert!(
                    (reduced.mat().get(k, l) - s).norm() < 1e-12,
                    "entry ({k},{l}) disagrees with the double sum"
                );
            }
        }
    }

    #[test]
    fn keeping_everything_is_the_identity_operation() {
        let mut rng = SplitMix64::new(32);
        let rho = random_density(&mut rng, vec![2, 2]);
        let same = rho.partial_trace(&[0, 1]).unwrap();
        assert!(same.mat().max_abs_diff(rho.mat()) < 1e-13);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = SplitMix64::new(33);
        let rho = random_density(&mut rng, vec![2, 2, 2]);
        for keep in [vec![0], vec![1], vec![2], vec![0, 2]] {
            let red = rho.partial_trace(&keep).unwrap();
            assert!((red.mat().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_selections() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(matches!(rho.partial_trace(&[]), Err(Error::BadSelection)));
        assert!(matches!(
            rho.partial_trace(&[0, 0]),
            Err(Error::BadSelection)
        ));
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::InvalidSubsystem { .. })
        ));
    }

    #[test]
    fn purity_and_fidelity_behave_on_known_states() {
        let plus = DensityMatrix::pure(&pauli::ket_plus(), vec![2]).unwrap();
        assert!((plus.purity() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(vec![2]);
        assert!((mixed.purity() - 0.5).abs() < 1e-12);
        assert!((plus.fidelity_with_pure(&pauli::ket_plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!(plus.fidelity_with_pure(&pauli::ket_minus()).unwrap().abs() < 1e-12);
        assert!((mixed.fidelity_with_pure(&pauli::ket_zero()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pure_constructor_normalizes() {
        let unnormalized = Matrix::col_vec(&[c64(3.0, 0.0), c64(4.0, 0.0)]);
        let rho = DensityMatrix::pure(&unnormalized, vec![2]).unwrap();
        assert!((rho.mat().trace().re - 1.0).abs() < 1e-12);
        assert!((rho.mat().get(0, 0).re - 0.36).abs() < 1e-12);
    }
}
