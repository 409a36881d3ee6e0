//! Heralded noiseless transmission through the switched flip channels.
//!
//! Measuring the control of the switched output in the {|+>, |->} basis
//! splits the state into two branches. For bit flip p and phase flip q with
//! control |+><+| the |-> outcome fires with probability exactly p·q and
//! leaves the particle in YρY, so a single Y correction restores the input
//! perfectly. The |+> branch keeps the three residual noise terms.

use crate::error::{Error, Result};
use crate::matrix::{c64, Matrix};
use crate::pauli;
use crate::rng::SplitMix64;
use crate::state::DensityMatrix;
use crate::switch::pauli_switch_closed_form;

/// Branch weights and normalized post-measurement particle states after a
/// {|+>, |->} measurement of the control. A branch with negligible weight
/// (below 1e-14) carries no state.
#[derive(Debug, Clone)]
pub struct HeraldOutcome {
    pub prob_plus: f64,
    pub prob_minus: f64,
    pub state_plus: Option<DensityMatrix>,
    pub state_minus: Option<DensityMatrix>,
}

const BRANCH_CUTOFF: f64 = 1e-14;

/// Measures the control (right factor) of a particle ⊗ control state in the
/// Fourier basis and returns both branches.
pub fn herald_measure(joint: &DensityMatrix) -> Result<HeraldOutcome> {
    if joint.dims() != [2, 2] {
        return Err(Error::BadSubsystemDims {
            dims: joint.dims().to_vec(),
            dim: joint.dim(),
        });
    }
    let m = joint.mat();
    // <±| B |±> on the control index contracts the four control blocks:
    // B_± = (1/2) (block00 ± block01 ± block10 + block11).
    let branch = |sign: f64| {
        Matrix::from_fn(2, 2, |i, j| {
            (m.get(i * 2, j * 2)
                + m.get(i * 2, j * 2 + 1).scale(sign)
                + m.get(i * 2 + 1, j * 2).scale(sign)
                + m.get(i * 2 + 1, j * 2 + 1))
                * c64(0.5, 0.0)
        })
    };
    let unnorm_plus = branch(1.0).hermitize();
    let unnorm_minus = branch(-1.0).hermitize();
    let prob_plus = unnorm_plus.trace().re.max(0.0);
    let prob_minus = unnorm_minus.trace().re.max(0.0);

    let normalize = |unnorm: Matrix, prob: f64| -> Result<Option<DensityMatrix>> {
        if prob < BRANCH_CUTOFF {
            return Ok(None);
        }
        Ok(Some(DensityMatrix::new(unnorm.scale(1.0 / prob), vec![2])?))
    };
    Ok(HeraldOutcome {
        prob_plus,
        prob_minus,
        state_plus: normalize(unnorm_plus, prob_plus)?,
        state_minus: normalize(unnorm_minus, prob_minus)?,
    })
}

/// The recovery operation for the |-> branch: conjugation by Y.
pub fn correct_minus(state: &DensityMatrix) -> Result<DensityMatrix> {
    let y = pauli::y();
    let corrected = y.matmul(state.mat())?.matmul(&y.adjoint())?;
    DensityMatrix::new(corrected.hermitize(), vec![2])
}

/// Probability of the noiseless herald for flip strengths p and q.
pub fn heralded_success_probability(p: f64, q: f64) -> Result<f64> {
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) || !v.is_finite() {
            return Err(Error::InvalidProbability { value: v });
        }
    }
    Ok(p * q)
}

/// The four BB84 signal kets |0>, |1>, |+>, |->.
pub fn bb84_states() -> Vec<Matrix> {
    vec![
        pauli::ket_zero(),
        pauli::ket_one(),
        pauli::ket_plus(),
        pauli::ket_minus(),
    ]
}

/// Per-input-state tallies from a Monte Carlo heralding run.
#[derive(Debug, Clone)]
pub struct PerStateStats {
    pub state_index: usize,
    pub trials: u64,
    pub successes: u64,
    pub success_frequency: f64,
    /// Mean fidelity of the corrected |-> branch with the sent ket, absent
    /// when this state never heralded.
    pub mean_success_fidelity: Option<f64>,
}

/// Aggregate statistics of a Monte Carlo heralding run.
#[derive(Debug, Clone)]
pub struct HeraldStats {
    pub trials: u64,
    pub successes: u64,
    pub success_frequency: f64,
    /// Binomial standard error √(f(1-f)/n) of the success frequency.
    pub std_error: f64,
    /// The exact herald probability p·q the frequency estimates.
    pub analytic_success: f64,
    pub mean_success_fidelity: Option<f64>,
    pub min_success_fidelity: Option<f64>,
    /// Fraction of raw transmissions a postselecting protocol keeps, equal
    /// to the herald probability.
    pub key_rate_factor: f64,
    pub per_state: Vec<PerStateStats>,
}

/// Simulates n_trials transmissions of kets drawn uniformly from `inputs`
/// through the switched flip channels, sampling the control measurement and
/// applying the Y correction on herald. Each trial uses an independent RNG
/// substream of `seed`, so results are reproducible and order-independent.
pub fn monte_carlo_herald(
    p: f64,
    q: f64,
    n_trials: u64,
    seed: u64,
    inputs: &[Matrix],
) -> Result<HeraldStats> {
    heralded_success_probability(p, q)?;
    if inputs.is_empty() {
        return Err(Error::EmptyInputList);
    }
    if n_trials == 0 {
        return Err(Error::NoTrials);
    }

    // Precompute each input's heralded branch once; trials only sample.
    struct Prepared {
        prob_minus: f64,
        corrected_fidelity: Option<f64>,
    }
    let mut prepared = Vec::with_capacity(inputs.len());
    for ket in inputs {
        let rho = DensityMatrix::pure(ket, vec![2])?;
        let joint = pauli_switch_closed_form(p, q, &rho)?;
        let outcome = herald_measure(&joint)?;
        let corrected_fidelity = match outcome.state_minus {
            Some(ref s) => Some(correct_minus(s)?.fidelity_with_pure(ket)?),
            None => None,
        };
        prepared.push(Prepared {
            prob_minus: outcome.prob_minus,
            corrected_fidelity,
        });
    }

    let mut per_trials = vec![0u64; inputs.len()];
    let mut per_successes = vec![0u64; inputs.len()];
    let mut per_fid_sum = vec![0.0f64; inputs.len()];
    let mut min_fid: Option<f64> = None;

    for trial in 0..n_trials {
        let mut rng = SplitMix64::substream(seed, trial);
        let idx = rng.next_index(inputs.len());
        per_trials[idx] += 1;
        let herald_draw = rng.next_f64();
        if herald_draw < prepared[idx].prob_minus {
            per_successes[idx] += 1;
            let fid = prepared[idx]
                .corrected_fidelity
                .expect("herald fired, so the branch state exists");
            per_fid_sum[idx] += fid;
            min_fid = Some(match min_fid {
                Some(m) => m.min(fid),
                None => fid,
            });
        }
    }

    let successes: u64 = per_successes.iter().sum();
    let f = successes as f64 / n_trials as f64;
    let std_error = (f * (1.0 - f) / n_trials as f64).sqrt();
    let total_fid: f64 = per_fid_sum.iter().sum();
    let mean_success_fidelity = if successes > 0 {
        Some(total_fid / successes as f64)
    } else {
        None
    };

    let per_state = (0..inputs.len())
        .map(|i| PerStateStats {
            state_index: i,
            trials: per_trials[i],
            successes: per_successes[i],
            success_frequency: if per_trials[i] > 0 {
                per_successes[i] as f64 / per_trials[i] as f64
            } else {
                0.0
            },
            mean_success_fidelity: if per_successes[i] > 0 {
                Some(per_fid_sum[i] / per_successes[i] as f64)
            } else {
                None
            },
        })
        .collect();

    Ok(HeraldStats {
        trials: n_trials,
        successes,
        success_frequency: f,
        std_error,
        analytic_success: p * q,
        mean_success_fidelity,
        min_success_fidelity: min_fid,
        key_rate_factor: p * q,
        per_state,
    })
}
