//! Dense complex matrices in row-major order.
//!
//! Everything in this crate works on systems of dimension 16 or less, so the
//! representation is a flat `Vec<Complex64>` with no blocking or sparsity.
//! Operations that can fail on malformed shapes return [`Result`]; elementwise
//! helpers whose shape requirements are structural (`add`, `sub`) panic on
//! mismatch like ordinary indexing would.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, entries stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl Matrix {
    /// Builds a matrix from a row-major entry buffer.
    ///
    /// Fails when the buffer length does not equal `rows * cols` or when any
    /// entry is non-finite.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadEntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for (idx, e) in entries.iter().enumerate() {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: idx / cols.max(1),
                    col: idx % cols.max(1),
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Column vector from a slice of amplitudes.
    pub fn col_vec(amplitudes: &[Complex64]) -> Self {
        Self {
            rows: amplitudes.len(),
            cols: 1,
            entries: amplitudes.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Kronecker product; `self` indexes the left (slow) factor.
    pub fn tensor(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Elementwise sum. Panics on shape mismatch.
    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix add shape mismatch"
        );
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Elementwise difference. Panics on shape mismatch.
    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sub shape mismatch"
        );
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Matrix {
        let f = factor.into();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * f).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_distance(&self, rhs: &Matrix) -> f64 {
        self.sub(rhs).frobenius_norm()
    }

    /// Largest entrywise absolute difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix compare shape mismatch"
        );
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute deviation from `self == self†`. Zero for non-square.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    /// `(self + self†) / 2`, used to strip rounding-level asymmetry before
    /// feeding a mathematically Hermitian result to the eigensolver.
    pub fn hermitize(&self) -> Matrix {
        assert!(self.is_square(), "hermitize of a non-square matrix");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    /// Column `j` as a column vector.
    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j))
    }
}

/// Rank-one product `a * b†` of two column vectors.
pub fn outer(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), 1, "outer expects column vectors");
    assert_eq!(b.cols(), 1, "outer expects column vectors");
    Matrix::from_fn(a.rows(), b.rows(), |i, j| a.get(i, 0) * b.get(j, 0).conj())
}

/// Convenience constructor for complex scalars.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli;
    use crate::rng::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| {
            c64(rng.next_symmetric(), rng.next_symmetric())
        })
    }

    #[test]
    fn identity_times_pauli_x_is_pauli_x() {
        let x = pauli::x();
        let prod = Matrix::identity(2).matmul(&x).unwrap();
        assert_eq!(prod.max_abs_diff(&x), 0.0, "I * X must be X exactly");
    }

    #[test]
    fn pauli_product_anticommutes_and_gives_iy() {
        let zx = pauli::z().matmul(&pauli::x()).unwrap();
        let xz = pauli::x().matmul(&pauli::z()).unwrap();
        let iy = pauli::y().scale(c64(0.0, 1.0));
        assert!(zx.max_abs_diff(&iy) < 1e-15, "ZX must equal iY");
        assert!(
            xz.max_abs_diff(&zx.scale(-1.0)) < 1e-15,
            "XZ must equal -ZX"
        );
    }

    #[test]
    fn matmul_matches_naive_triple_loop_on_random_input() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 3);
            let b = random_matrix(&mut rng, 3, 3);
            let prod = a.matmul(&b).unwrap();
            // Oracle written out separately from the implementation.
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = c64(0.0, 0.0);
                    for k in 0..3 {
                        s += a.get(i, k) * b.get(k, j);
                    }
                    assert!(
                        (prod.get(i, j) - s).norm() < 1e-12,
                        "entry ({i},{j}) disagrees with the summed products"
                    );
                }
            }
        }
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn adjoint_fixes_hermitian_y_and_swaps_raising_lowering() {
        let y = pauli::y();
        assert_eq!(y.adjoint().max_abs_diff(&y), 0.0, "Y is Hermitian");

        let raise = outer(&pauli::ket_one(), &pauli::ket_zero()); // |1><0|
        let lower = outer(&pauli::ket_zero(), &pauli::ket_one()); // |0><1|
        assert_eq!(lower.adjoint().max_abs_diff(&raise), 0.0);
    }

    #[test]
    fn adjoint_is_an_involution() {
        let mut rng = SplitMix64::new(12);
        let m = random_matrix(&mut rng, 4, 3);
        assert_eq!(m.adjoint().adjoint().max_abs_diff(&m), 0.0);
    }

    #[test]
    fn adjoint_reverses_products() {
        let mut rng = SplitMix64::new(13);
        let a = random_matrix(&mut rng, 4, 4);
        let b = random_matrix(&mut rng, 4, 4);
        let lhs = a.matmul(&b).unwrap().adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12, "(AB)† must equal B†A†");
    }

    #[test]
    fn tensor_of_identities_is_bigger_identity() {
        let i4 = Matrix::identity(2).tensor(&Matrix::identity(2));
        assert_eq!(i4.max_abs_diff(&Matrix::identity(4)), 0.0);
    }

    #[test]
    fn tensor_z_with_ket0_projector_is_expected_diagonal() {
        let proj0 = pauli::projector(&pauli::ket_zero());
        let t = pauli::z().tensor(&proj0);
        let expected = Matrix::new(
            4,
            4,
            vec![
                c64(1.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(-1.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(
            t.max_abs_diff(&expected),
            0.0,
            "Z ⊗ |0><0| = diag(1,0,-1,0)"
        );
    }

    #[test]
    fn tensor_matches_index_formula_on_random_input() {
        let mut rng = SplitMix64::new(14);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let t = a.tensor(&b);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expected = a.get(i, j) * b.get(k, l);
                        assert_eq!(
                            t.get(i * 2 + k, j * 2 + l),
                            expected,
                            "(a⊗b)[(i·2+k),(j·2+l)] must be a[i,j]·b[k,l]"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_is_associative_on_integer_entries() {
        let a = pauli::x();
        let b = pauli::z();
        let c = pauli::projector(&pauli::ket_one());
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        assert_eq!(left.max_abs_diff(&right), 0.0);
    }

    #[test]
    fn new_rejects_bad_buffer_and_non_finite_entries() {
        assert!(matches!(
            Matrix::new(2, 2, vec![c64(0.0, 0.0); 3]),
            Err(Error::BadEntryCount { .. })
        ));
        let mut entries = vec![c64(0.0, 0.0); 4];
        entries[2] = c64(f64::NAN, 0.0);
        assert!(matches!(
            Matrix::new(2, 2, entries),
            Err(Error::NonFiniteEntry { row: 1, col: 0 })
        ));
    }

    #[test]
    fn trace_and_norm_basics() {
        let m = pauli::z();
        assert_eq!(m.trace(), c64(0.0, 0.0));
        assert!((m.frobenius_norm() - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hermitize_reports_and_removes_asymmetry() {
        let m = Matrix::new(
            2,
            2,
            vec![c64(1.0, 0.0), c64(0.5, 0.1), c64(0.5, -0.1), c64(2.0, 0.0)],
        )
        .unwrap();
        assert_eq!(m.hermiticity_deviation(), 0.0);
        let skew = Matrix::new(
            2,
            2,
            vec![c64(1.0, 0.0), c64(0.5, 0.1), c64(0.5, 0.1), c64(2.0, 0.0)],
        )
        .unwrap();
        assert!(skew.hermiticity_deviation() > 0.1);
        assert_eq!(skew.hermitize().hermiticity_deviation(), 0.0);
    }
}
