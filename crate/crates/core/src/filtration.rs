//! Interferometric error filtration and its limits.
//!
//! A particle traverses two paths in superposition, path m applying a
//! unitary drawn from ensemble m. Preparing the path qubit in |α> and
//! postselecting it on |β> turns each unitary pair (U₀, U₁) into the
//! conditional operator
//!
//!   A = α₀·conj(β₀)·U₀ + α₁·conj(β₁)·U₁,
//!
//! and the kept state is the weighted mixture of A ρ A† over noise draws.
//! The unitarity score of the kept map is the largest eigenvalue of its
//! trace-normalized Choi matrix: 1 exactly when a single conditional
//! operator survives, 1/4 for complete depolarization.
//!
//! When the two arms draw independently, no postselection reaches score 1
//! once each arm has at least two distinct members and at least three of the
//! involved unitaries are linearly independent. `no_go_hypotheses` checks
//! that precondition and `search_postselection` scans (α, β) to certify the
//! gap numerically. Correlated draws evade the obstruction: the ordered flip
//! pairs arising from a superposition of causal orders interfere down to the
//! single operator XZ ∝ Y, which `switch_correlated_demo` exhibits.

use num_complex::Complex64;

use crate::channel::ChoiMatrix;
use crate::eig::{hermitian_eig, largest_eigenvalue, TOL_HERM};
use crate::error::{Error, Result};
use crate::matrix::{c64, Matrix};
use crate::optim::{minimize, NelderMeadOptions};
use crate::pauli;
use crate::state::DensityMatrix;

/// Below this acceptance probability a postselection is treated as never
/// firing and carries no conditional state.
pub const ACCEPTANCE_CUTOFF: f64 = 1e-14;

const WEIGHT_SUM_TOL: f64 = 1e-10;
const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

/// A two-arm filtration instance: one unitary ensemble per arm plus the
/// prepared and postselected path amplitudes.
#[derive(Debug, Clone)]
pub struct FiltrationSetup {
    ensemble0: Vec<(Matrix, f64)>,
    ensemble1: Vec<(Matrix, f64)>,
    alpha: [Complex64; 2],
    beta: [Complex64; 2],
}

fn validate_ensemble(members: &[(Matrix, f64)]) -> Result<()> {
    if members.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let mut sum = 0.0;
    for (index, (u, w)) in members.iter().enumerate() {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::InvalidProbability { value: *w });
        }
        sum += w;
        if u.rows() != 2 || u.cols() != 2 {
            return Err(Error::NotQubitChannel {
                d_in: u.cols(),
                d_out: u.rows(),
            });
        }
        let deviation = u
            .adjoint()
            .matmul(u)
            .expect("2x2 shapes checked above")
            .max_abs_diff(&Matrix::identity(2));
        if deviation > TOL_HERM {
            return Err(Error::NotUnitary { index, deviation });
        }
    }
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::BadEnsembleWeights { sum });
    }
    Ok(())
}

fn validate_amplitudes(amps: &[Complex64; 2]) -> Result<()> {
    let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > TOL_HERM {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

impl FiltrationSetup {
    pub fn new(
        ensemble0: Vec<(Matrix, f64)>,
        ensemble1: Vec<(Matrix, f64)>,
        alpha: [Complex64; 2],
        beta: [Complex64; 2],
    ) -> Result<Self> {
        validate_ensemble(&ensemble0)?;
        validate_ensemble(&ensemble1)?;
        validate_amplitudes(&alpha)?;
        validate_amplitudes(&beta)?;
        Ok(Self {
            ensemble0,
            ensemble1,
            alpha,
            beta,
        })
    }

    pub fn ensemble0(&self) -> &[(Matrix, f64)] {
        &self.ensemble0
    }

    pub fn ensemble1(&self) -> &[(Matrix, f64)] {
        &self.ensemble1
    }

    pub fn alpha(&self) -> &[Complex64; 2] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex64; 2] {
        &self.beta
    }

    /// The product-distribution pair list (U₀ᵏ, U₁ˡ, wₖ·vₗ) of independent
    /// draws.
    pub fn independent_pairs(&self) -> Vec<(Matrix, Matrix, f64)> {
        let mut pairs = Vec::with_capacity(self.ensemble0.len() * self.ensemble1.len());
        for (u0, w0) in &self.ensemble0 {
            for (u1, w1) in &self.ensemble1 {
                pairs.push((u0.clone(), u1.clone(), w0 * w1));
            }
        }
        pairs
    }
}

/// The conditional operator a postselection applies for one unitary pair.
pub fn filtration_operator(
    alpha: &[Complex64; 2],
    beta: &[Complex64; 2],
    u0: &Matrix,
    u1: &Matrix,
) -> Matrix {
    u0.scale(alpha[0] * beta[0].conj())
        .add(&u1.scale(alpha[1] * beta[1].conj()))
}

/// Path amplitudes (cos θ/2, e^{iφ} sin θ/2) from polar angles.
pub fn amplitudes_from_angles(theta: f64, phi: f64) -> [Complex64; 2] {
    [
        c64((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Postselected state and acceptance probability for an explicit joint
/// distribution of unitary pairs. Correlated noise is expressed by listing
/// the actually occurring pairs with their joint weights.
pub fn postselected_state_pairs(
    pairs: &[(Matrix, Matrix, f64)],
    alpha: &[Complex64; 2],
    beta: &[Complex64; 2],
    rho: &DensityMatrix,
) -> Result<(DensityMatrix, f64)> {
    if pairs.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let mut kept = Matrix::zeros(2, 2);
    for (u0, u1, w) in pairs {
        if *w <= 0.0 {
            continue;
        }
        let a = filtration_operator(alpha, beta, u0, u1);
        kept = kept.add(&a.matmul(rho.mat())?.matmul(&a.adjoint())?.scale(*w));
    }
    let acceptance = kept.trace().re.max(0.0);
    if acceptance < ACCEPTANCE_CUTOFF {
        return Err(Error::ZeroAcceptance { acceptance });
    }
    let state = DensityMatrix::new(kept.hermitize().scale(1.0 / acceptance), vec![2])?;
    Ok((state, acceptance))
}

/// Trace-normalized Choi matrix of the kept map together with its acceptance
/// probability (the trace before normalization, i.e. the acceptance at a
/// maximally mixed input).
pub fn postselected_choi_pairs(
    pairs: &[(Matrix, Matrix, f64)],
    alpha: &[Complex64; 2],
    beta: &[Complex64; 2],
) -> Result<(ChoiMatrix, f64)> {
    let (unnorm, acceptance) = unnormalized_choi(pairs, alpha, beta)?;
    if acceptance < ACCEPTANCE_CUTOFF {
        return Err(Error::ZeroAcceptance { acceptance });
    }
    let choi = ChoiMatrix::new(unnorm.hermitize().scale(1.0 / acceptance), 2, 2)?;
    Ok((choi, acceptance))
}

/// Unnormalized Choi accumulation shared by the public entry point and the
/// search hot path. vec(A) flattens row-major, matching the channel module.
fn unnormalized_choi(
    pairs: &[(Matrix, Matrix, f64)],
    alpha: &[Complex64; 2],
    beta: &[Complex64; 2],
) -> Result<(Matrix, f64)> {
    if pairs.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let c0 = alpha[0] * beta[0].conj();
    let c1 = alpha[1] * beta[1].conj();
    let mut choi = Matrix::zeros(4, 4);
    for (u0, u1, w) in pairs {
        if *w <= 0.0 {
            continue;
        }
        let mut v = [c64(0.0, 0.0); 4];
        for b in 0..2 {
            for a in 0..2 {
                v[b * 2 + a] = c0 * u0.get(b, a) + c1 * u1.get(b, a);
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                let cur = choi.get(r, c);
                choi.set(r, c, cur + v[r] * v[c].conj() * c64(w * 0.5, 0.0));
            }
        }
    }
    let acceptance = choi.trace().re.max(0.0);
    Ok((choi, acceptance))
}

/// Postselected state of a setup with independent arms.
pub fn postselected_state(
    setup: &FiltrationSetup,
    rho: &DensityMatrix,
) -> Result<(DensityMatrix, f64)> {
    postselected_state_pairs(&setup.independent_pairs(), &setup.alpha, &setup.beta, rho)
}

/// Choi matrix of the kept map of a setup with independent arms.
pub fn postselected_channel_choi(setup: &FiltrationSetup) -> Result<(ChoiMatrix, f64)> {
    postselected_choi_pairs(&setup.independent_pairs(), &setup.alpha, &setup.beta)
}

/// Largest eigenvalue of a trace-normalized qubit Choi matrix. Ranges from
/// 1/4 (complete depolarization) to 1 (a single surviving operator).
pub fn unitarity_score(choi: &ChoiMatrix) -> Result<f64> {
    if choi.d_in() != 2 || choi.d_out() != 2 {
        return Err(Error::NotQubitChannel {
            d_in: choi.d_in(),
            d_out: choi.d_out(),
        });
    }
    Ok(largest_eigenvalue(choi.mat())?.min(1.0))
}

/// Whether the independence obstruction applies to a pair of ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisReport {
    /// Distinct members of arm 0 with non-negligible weight.
    pub distinct0: usize,
    /// Distinct members of arm 1 with non-negligible weight.
    pub distinct1: usize,
    /// Dimension of the span of all distinct members of both arms.
    pub independent_count: usize,
    /// True when both arms have at least two distinct members and the union
    /// spans at least three directions.
    pub met: bool,
}

fn distinct_members(ensemble: &[(Matrix, f64)]) -> Vec<Matrix> {
    let mut kept: Vec<Matrix> = Vec::new();
    for (u, w) in ensemble {
        if *w <= NEGLIGIBLE_WEIGHT {
            continue;
        }
        if kept.iter().all(|k| k.frobenius_distance(u) > TOL_HERM) {
            kept.push(u.clone());
        }
    }
    kept
}

/// Counts distinct ensemble members and the rank of their joint span. The
/// rank comes from the Gram matrix of the vectorized unitaries; entries of a
/// unitary pair have inner products of order 1, so Gram eigenvalues above
/// 1e-18 correspond to singular values above 1e-9.
pub fn no_go_hypotheses(
    ensemble0: &[(Matrix, f64)],
    ensemble1: &[(Matrix, f64)],
) -> Result<HypothesisReport> {
    validate_ensemble(ensemble0)?;
    validate_ensemble(ensemble1)?;
    let d0 = distinct_members(ensemble0);
    let d1 = distinct_members(ensemble1);
    let mut union = d0.clone();
    for u in &d1 {
        if union.iter().all(|k| k.frobenius_distance(u) > TOL_HERM) {
            union.push(u.clone());
        }
    }
    let k = union.len();
    let gram = Matrix::from_fn(k, k, |i, j| {
        union[i].adjoint().matmul(&union[j]).expect("2x2").trace()
    });
    let rank = hermitian_eig(&gram)?
        .values
        .iter()
        .filter(|&&v| v > 1e-18)
        .count();
    Ok(HypothesisReport {
        distinct0: d0.len(),
        distinct1: d1.len(),
        independent_count: rank,
        met: d0.len() >= 2 && d1.len() >= 2 && rank >= 3,
    })
}

/// Outcome of a postselection search: the best unitarity score found over
/// path preparations and postselections, with the angles that achieve it.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub score: f64,
    pub acceptance: f64,
    pub alpha: [Complex64; 2],
    pub beta: [Complex64; 2],
    /// (θ, φ) of the preparation.
    pub alpha_angles: (f64, f64),
    /// (θ, φ) of the postselection.
    pub beta_angles: (f64, f64),
}

fn score_at(
    pairs: &[(Matrix, Matrix, f64)],
    alpha: &[Complex64; 2],
    beta: &[Complex64; 2],
) -> Option<(f64, f64)> {
    let (unnorm, acceptance) = unnormalized_choi(pairs, alpha, beta).ok()?;
    if acceptance < ACCEPTANCE_CUTOFF {
        return None;
    }
    let normalized = unnorm.hermitize().scale(1.0 / acceptance);
    let score = largest_eigenvalue(&normalized).ok()?.min(1.0);
    Some((score, acceptance))
}

/// Scans preparation and postselection angles on a grid, then polishes the
/// best grid point with a simplex descent. θ runs over `grid_points`
/// inclusive samples of [0, π] and φ over `grid_points` samples of [0, 2π);
/// at least 8 points per axis are required for the polish to start near the
/// basin of the true maximum. Grid points where the postselection never
/// fires are skipped.
pub fn search_postselection(
    ensemble0: &[(Matrix, f64)],
    ensemble1: &[(Matrix, f64)],
    grid_points: usize,
) -> Result<SearchResult> {
    validate_ensemble(ensemble0)?;
    validate_ensemble(ensemble1)?;
    if grid_points < 8 {
        return Err(Error::GridTooCoarse {
            got: grid_points,
            min: 8,
        });
    }
    let mut pairs = Vec::with_capacity(ensemble0.len() * ensemble1.len());
    for (u0, w0) in ensemble0 {
        for (u1, w1) in ensemble1 {
            pairs.push((u0.clone(), u1.clone(), w0 * w1));
        }
    }

    let n = grid_points;
    let theta_step = std::f64::consts::PI / (n - 1) as f64;
    let phi_step = 2.0 * std::f64::consts::PI / n as f64;
    let mut best: Option<(f64, f64, [f64; 4])> = None;
    for ia in 0..n {
        let theta_a = ia as f64 * theta_step;
        for ja in 0..n {
            let phi_a = ja as f64 * phi_step;
            let alpha = amplitudes_from_angles(theta_a, phi_a);
            for ib in 0..n {
                let theta_b = ib as f64 * theta_step;
                for jb in 0..n {
                    let phi_b = jb as f64 * phi_step;
                    let beta = amplitudes_from_angles(theta_b, phi_b);
                    if let Some((score, acceptance)) = score_at(&pairs, &alpha, &beta) {
                        // Strict comparison keeps the first (lexicographically
                        // smallest) maximizer, making the result reproducible.
                        if best.is_none_or(|(s, _, _)| score > s) {
                            best = Some((score, acceptance, [theta_a, phi_a, theta_b, phi_b]));
                        }
                    }
                }
            }
        }
    }
    let (grid_score, grid_acceptance, grid_angles) =
        best.expect("theta = 0 forces acceptance |beta_0|^2 ... full grid cannot be empty");

    // Polish with a simplex around the best grid cell. Angles are
    // unconstrained: any (θ, φ) yields normalized amplitudes.
    let mut objective = |x: &[f64]| {
        let alpha = amplitudes_from_angles(x[0], x[1]);
        let beta = amplitudes_from_angles(x[2], x[3]);
        match score_at(&pairs, &alpha, &beta) {
            Some((score, _)) => -score,
            None => 10.0,
        }
    };
    let polish = minimize(
        &mut objective,
        &grid_angles,
        &NelderMeadOptions {
            max_iterations: 400,
            tolerance: 1e-10,
            initial_step: theta_step / 2.0,
        },
    );

    let mut final_score = grid_score;
    let mut final_acceptance = grid_acceptance;
    let mut final_angles = grid_angles;
    let refined_alpha = amplitudes_from_angles(polish.x[0], polish.x[1]);
    let refined_beta = amplitudes_from_angles(polish.x[2], polish.x[3]);
    if let Some((score, acceptance)) = score_at(&pairs, &refined_alpha, &refined_beta) {
        if score > final_score {
            final_score = score;
            final_acceptance = acceptance;
            final_angles = [polish.x[0], polish.x[1], polish.x[2], polish.x[3]];
        }
    }

    Ok(SearchResult {
        score: final_score,
        acceptance: final_acceptance,
        alpha: amplitudes_from_angles(final_angles[0], final_angles[1]),
        beta: amplitudes_from_angles(final_angles[2], final_angles[3]),
        alpha_angles: (final_angles[0], final_angles[1]),
        beta_angles: (final_angles[2], final_angles[3]),
    })
}

/// Result of postselecting the correlated pairs produced by a causal-order
/// superposition of the two flip channels.
#[derive(Debug, Clone)]
pub struct CorrelatedDemo {
    pub score: f64,
    pub acceptance: f64,
    /// The single surviving conditional operator, scaled to Frobenius norm
    /// √2 so a unitary comes out with unit-modulus entries. Its global phase
    /// is arbitrary.
    pub recovered_operator: Matrix,
}

/// The joint pair distribution a causal-order superposition of bit flip p
/// and phase flip q induces on the two orderings: pair k applies the k-th
/// Kraus product in one order on arm 0 and the reverse order on arm 1.
pub fn switch_correlated_pairs(p: f64, q: f64) -> Result<Vec<(Matrix, Matrix, f64)>> {
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) || !v.is_finite() {
            return Err(Error::InvalidProbability { value: v });
        }
    }
    let i2 = Matrix::identity(2);
    let x = pauli::x();
    let z = pauli::z();
    let xz = x.matmul(&z).expect("2x2");
    let zx = z.matmul(&x).expect("2x2");
    Ok(vec![
        (i2.clone(), i2, (1.0 - p) * (1.0 - q)),
        (x.clone(), x, p * (1.0 - q)),
        (z.clone(), z, (1.0 - p) * q),
        (xz, zx, p * q),
    ])
}

/// Runs the correlated-noise postselection with preparation |+> and
/// postselection |->: only the anticommuting pair survives, so the kept map
/// is exactly conjugation by XZ ∝ Y with acceptance p·q.
pub fn switch_correlated_demo(p: f64, q: f64) -> Result<CorrelatedDemo> {
    let pairs = switch_correlated_pairs(p, q)?;
    if p * q == 0.0 {
        return Err(Error::ZeroSuccessProbability { p, q });
    }
    let alpha = [c64(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
    let beta = [
        c64(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        c64(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ];
    let (choi, acceptance) = postselected_choi_pairs(&pairs, &alpha, &beta)?;
    let score = unitarity_score(&choi)?;
    let eig = hermitian_eig(choi.mat())?;
    let top = eig.vectors.column(0);
    let mut recovered = Matrix::from_fn(2, 2, |b, a| top.get(b * 2 + a, 0));
    let norm = recovered.frobenius_norm();
    recovered = recovered.scale(std::f64::consts::SQRT_2 / norm);
    Ok(CorrelatedDemo {
        score,
        acceptance,
        recovered_operator: recovered,
    })
}
