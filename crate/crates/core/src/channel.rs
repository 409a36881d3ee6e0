//! Quantum channels in Kraus and Choi form.
//!
//! A channel N with Kraus operators {K_i} acts as ρ ↦ Σᵢ KᵢρKᵢ†. Its Choi
//! matrix uses the trace-1 convention C = (N ⊗ id)(|Φ><Φ|) with
//! |Φ> = Σᵢ |i>|i> / √d, the channel acting on the left factor. Two channels
//! are the same map exactly when their Choi matrices agree, which is what all
//! representation-independence tests compare.

use num_complex::Complex64;

use crate::eig::hermitian_eig;
use crate::entropy::binary_entropy;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pauli;
use crate::state::{partial_trace_mat, DensityMatrix, TOL_PSD, TOL_TRACE};

/// Trace-preservation tolerance: Σ KᵢᵀKᵢ must match I entrywise this tightly.
pub const TOL_CPTP: f64 = 1e-9;
/// Choi eigenvalues below this are dropped when extracting Kraus operators.
pub const KRAUS_PRUNE_THRESHOLD: f64 = 1e-10;

/// Completely positive map given by a nonempty list of equally shaped Kraus
/// operators. Trace preservation is diagnosed by [`KrausChannel::validate_cptp`]
/// rather than enforced at construction, so deliberately deficient families
/// can be inspected.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<Matrix>,
    d_in: usize,
    d_out: usize,
}

/// Outcome of a CPTP check: `valid` is true when the family is trace
/// preserving within tolerance, and `max_deviation` is the largest entrywise
/// distance of Σ KᵢᵀKᵢ from the identity either way.
#[derive(Debug, Clone, Copy)]
pub struct CptpReport {
    pub valid: bool,
    pub max_deviation: f64,
}

impl KrausChannel {
    /// Wraps a Kraus family after checking it is nonempty and all operators
    /// share one shape.
    pub fn new(kraus: Vec<Matrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKrausList)?;
        let (d_out, d_in) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != d_out || k.cols() != d_in {
                return Err(Error::DimensionMismatch {
                    left_rows: d_out,
                    left_cols: d_in,
                    right_rows: k.rows(),
                    right_cols: k.cols(),
                });
            }
        }
        Ok(Self { kraus, d_in, d_out })
    }

    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Measures how far Σ KᵢᵀKᵢ sits from the identity.
    pub fn validate_cptp(&self) -> CptpReport {
        let mut sum = Matrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            sum = sum.add(
                &k.adjoint()
                    .matmul(k)
                    .expect("shape checked at construction"),
            );
        }
        let max_deviation = sum.max_abs_diff(&Matrix::identity(self.d_in));
        CptpReport {
            valid: max_deviation <= TOL_CPTP,
            max_deviation,
        }
    }

    /// Applies the channel: ρ ↦ Σᵢ KᵢρKᵢ†. The output is reported as a
    /// single system of dimension `d_out`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in {
            return Err(Error::DimensionMismatch {
                left_rows: self.d_out,
                left_cols: self.d_in,
                right_rows: rho.dim(),
                right_cols: rho.dim(),
            });
        }
        let mut out = Matrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = out.add(&k.matmul(rho.mat())?.matmul(&k.adjoint())?);
        }
        DensityMatrix::new(out.hermitize(), vec![self.d_out])
    }

    /// Choi matrix in the trace-1 convention, output factor on the left:
    /// C[(b,a),(b',a')] = Σᵢ Kᵢ[b,a] Kᵢ[b',a']* / d_in.
    pub fn to_choi(&self) -> Result<ChoiMatrix> {
        let dim = self.d_out * self.d_in;
        let mut c = Matrix::zeros(dim, dim);
        let norm = 1.0 / self.d_in as f64;
        for k in &self.kraus {
            let vec: Vec<Complex64> = (0..dim)
                .map(|idx| k.get(idx / self.d_in, idx % self.d_in))
                .collect();
            for (r, vr) in vec.iter().enumerate() {
                if vr.re == 0.0 && vr.im == 0.0 {
                    continue;
                }
                for (col, vc) in vec.iter().enumerate() {
                    let v = c.get(r, col) + vr * vc.conj() * norm;
                    c.set(r, col, v);
                }
            }
        }
        ChoiMatrix::new(c, self.d_in, self.d_out)
    }
}

/// Composition `second ∘ first`: apply `first`, then `second`.
pub fn compose(second: &KrausChannel, first: &KrausChannel) -> Result<KrausChannel> {
    if second.d_in != first.d_out {
        return Err(Error::DimensionMismatch {
            left_rows: second.d_out,
            left_cols: second.d_in,
            right_rows: first.d_out,
            right_cols: first.d_in,
        });
    }
    let mut kraus = Vec::with_capacity(second.kraus.len() * first.kraus.len());
    for a in &second.kraus {
        for b in &first.kraus {
            kraus.push(a.matmul(b)?);
        }
    }
    KrausChannel::new(kraus)
}

/// Choi matrix of a channel: Hermitian, positive semidefinite, trace 1.
/// Trace preservation of the underlying map (partial trace over the output
/// factor equal to I/d_in) holds for channels but not for postselected maps,
/// so it is a query rather than a construction invariant.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    mat: Matrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiMatrix {
    pub fn new(mat: Matrix, d_in: usize, d_out: usize) -> Result<Self> {
        if mat.rows() != d_in * d_out || !mat.is_square() {
            return Err(Error::BadSubsystemDims {
                dims: vec![d_out, d_in],
                dim: mat.rows(),
            });
        }
        let dev = mat.hermiticity_deviation();
        if dev > crate::eig::TOL_HERM {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let eig = hermitian_eig(&mat)?;
        let min = *eig.values.last().expect("nonempty spectrum");
        if min < -TOL_PSD {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(Self { mat, d_in, d_out })
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn frobenius_distance(&self, other: &ChoiMatrix) -> f64 {
        self.mat.frobenius_distance(&other.mat)
    }

    /// True when the partial trace over the output factor is I/d_in within
    /// `tol`, i.e. the underlying map preserves trace.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let reduced = partial_trace_mat(&self.mat, &[self.d_out, self.d_in], &[1])
            .expect("dims fixed at construction");
        let target = Matrix::identity(self.d_in).scale(1.0 / self.d_in as f64);
        reduced.max_abs_diff(&target) <= tol
    }

    /// Extracts a Kraus family by eigendecomposition, dropping eigenvalues
    /// below 1e-10: K = √(λ d_in) · unvec(v).
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        let eig = hermitian_eig(&self.mat)?;
        let mut kraus = Vec::new();
        for (j, &lam) in eig.values.iter().enumerate() {
            if lam < KRAUS_PRUNE_THRESHOLD {
                continue;
            }
            let scale = (lam * self.d_in as f64).sqrt();
            let mut k = Matrix::zeros(self.d_out, self.d_in);
            for b in 0..self.d_out {
                for a in 0..self.d_in {
                    k.set(b, a, eig.vectors.get(b * self.d_in + a, j) * scale);
                }
            }
            kraus.push(k);
        }
        KrausChannel::new(kraus)
    }

    /// Applies the underlying map through the inverse Choi formula
    /// N(ρ) = d_in · tr_in[C (I ⊗ ρᵀ)], an independent route to the same
    /// action as the Kraus sum.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_raw(rho.mat())?;
        DensityMatrix::new(out.hermitize(), vec![self.d_out])
    }

    /// Linear action of the represented map without assuming the output is a
    /// state. A trace-normalized sub-trace-preserving map (a postselected
    /// channel) outputs trace below 1, so only this route applies to it.
    pub fn apply_raw(&self, input: &Matrix) -> Result<Matrix> {
        if input.rows() != self.d_in || input.cols() != self.d_in {
            return Err(Error::DimensionMismatch {
                left_rows: self.d_out,
                left_cols: self.d_in,
                right_rows: input.rows(),
                right_cols: input.cols(),
            });
        }
        let lifted = Matrix::identity(self.d_out).tensor(&input.transpose());
        let prod = self.mat.matmul(&lifted)?;
        Ok(partial_trace_mat(&prod, &[self.d_out, self.d_in], &[0])?.scale(self.d_in as f64))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidProbability { value: p });
    }
    Ok(())
}

/// Bit flip channel: ρ ↦ (1-p) ρ + p XρX.
pub fn bit_flip(p: f64) -> Result<KrausChannel> {
    check_probability(p)?;
    KrausChannel::new(vec![
        Matrix::identity(2).scale((1.0 - p).sqrt()),
        pauli::x().scale(p.sqrt()),
    ])
}

/// Phase flip channel: ρ ↦ (1-q) ρ + q ZρZ.
pub fn phase_flip(q: f64) -> Result<KrausChannel> {
    check_probability(q)?;
    KrausChannel::new(vec![
        Matrix::identity(2).scale((1.0 - q).sqrt()),
        pauli::z().scale(q.sqrt()),
    ])
}

/// Identity channel on a `d`-dimensional system.
pub fn identity_channel(d: usize) -> KrausChannel {
    KrausChannel::new(vec![Matrix::identity(d)]).expect("single identity operator")
}

/// Quantum capacity of the dephasing family: 1 - H₂(p). Used as the
/// single-channel baseline that switched transmission is compared against.
pub fn dephasing_capacity(p: f64) -> Result<f64> {
    Ok(1.0 - binary_entropy(p)?)
}
