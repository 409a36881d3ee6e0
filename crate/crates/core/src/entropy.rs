//! Entropies and coherent information.
//!
//! All logarithms are base 2. The coherent information of a channel N at a
//! pure input φ on reference ⊗ input is I(A⟩B) = H(B) - H(AB) evaluated on
//! σ = (id ⊗ N)(φ), with the channel acting on the right factor and the
//! whole channel output (for switched channels: particle and control
//! together) counted as B. Maximization over inputs runs Nelder-Mead on the
//! 8 real amplitude parameters of the input ket from one deterministic
//! maximally entangled start plus seeded random restarts.

use crate::channel::{dephasing_capacity, KrausChannel};
use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{c64, outer, Matrix};
use crate::optim::{self, NelderMeadOptions};
use crate::rng::SplitMix64;
use crate::state::{partial_trace_mat, DensityMatrix};

/// Largest eigenvalue a pure input may miss 1 by.
const TOL_PURE: f64 = 1e-8;
/// Eigenvalues below this (but above -1e-9) are treated as exact zeros in
/// entropy sums.
const EIG_CLAMP: f64 = 0.0;

/// Binary entropy H₂(x) = -x log₂ x - (1-x) log₂ (1-x), with H₂(0) = H₂(1) = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::OutOfRange {
            value: x,
            min: 0.0,
            max: 1.0,
        });
    }
    let term = |t: f64| if t > 0.0 { -t * t.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// Shannon entropy in bits of a clamped eigenvalue list. Values in
/// [-1e-9, 0] count as zero; anything lower is rejected as an invalid state.
pub fn entropy_of_eigenvalues(values: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &lam in values {
        if lam < -crate::state::TOL_PSD {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: lam,
            });
        }
        if lam > EIG_CLAMP {
            h -= lam * lam.log2();
        }
    }
    Ok(h)
}

/// Von Neumann entropy H(ρ) = -tr(ρ log₂ ρ).
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_mat(rho.mat())
}

fn entropy_of_mat(m: &Matrix) -> Result<f64> {
    entropy_of_eigenvalues(&hermitian_eig(m)?.values)
}

/// Entanglement entropy of a bipartite state: entropy of the reduced state
/// on the first factor.
pub fn entanglement_entropy(phi: &DensityMatrix) -> Result<f64> {
    if phi.dims().len() < 2 {
        return Err(Error::BadSubsystemDims {
            dims: phi.dims().to_vec(),
            dim: phi.dim(),
        });
    }
    von_neumann_entropy(&phi.partial_trace(&[0])?)
}

/// σ = (id ⊗ N)(φ) as a raw matrix, for Kraus operators already lifted to
/// I₂ ⊗ K.
fn joint_output(lifted: &[Matrix], phi_mat: &Matrix) -> Matrix {
    let d = lifted[0].rows();
    let mut sigma = Matrix::zeros(d, d);
    for l in lifted {
        sigma = sigma.add(
            &l.matmul(phi_mat)
                .expect("lifted operator shape")
                .matmul(&l.adjoint())
                .expect("lifted operator shape"),
        );
    }
    sigma.hermitize()
}

fn lift_kraus(channel: &KrausChannel) -> Vec<Matrix> {
    let id = Matrix::identity(2);
    channel.kraus().iter().map(|k| id.tensor(k)).collect()
}

/// Coherent information I(A⟩B) = H(B) - H(AB) of `channel` at the pure
/// bipartite input `phi` (reference qubit ⊗ channel input qubit).
pub fn coherent_information_at(channel: &KrausChannel, phi: &DensityMatrix) -> Result<f64> {
    if channel.d_in() != 2 {
        return Err(Error::NotQubitChannel {
            d_in: channel.d_in(),
            d_out: channel.d_out(),
        });
    }
    if phi.dims() != [2, 2] {
        return Err(Error::BadSubsystemDims {
            dims: phi.dims().to_vec(),
            dim: phi.dim(),
        });
    }
    let largest = hermitian_eig(phi.mat())?.values[0];
    if (largest - 1.0).abs() > TOL_PURE {
        return Err(Error::NotPure { largest });
    }
    let lifted = lift_kraus(channel);
    let sigma = joint_output(&lifted, phi.mat());
    let h_ab = entropy_of_mat(&sigma)?;
    let rho_b = partial_trace_mat(&sigma, &[2, channel.d_out()], &[1])?;
    let h_b = entropy_of_mat(&rho_b)?;
    Ok(h_b - h_ab)
}

/// Settings for [`maximize_coherent_information`]. Defaults: 16 random
/// starts on top of the deterministic maximally entangled start, 2000
/// iterations per start, simplex tolerance 1e-10, seed 42.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub random_starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            random_starts: 16,
            max_iterations: 2000,
            tolerance: 1e-10,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoherentInfoResult {
    /// Best coherent information found across all starts.
    pub value: f64,
    /// Input state achieving `value`.
    pub optimal_input: DensityMatrix,
    /// Total optimizer starts, including the deterministic one.
    pub starts_used: usize,
    /// Whether the winning start converged before its iteration cap.
    pub converged: bool,
}

fn amplitudes_to_ket(x: &[f64]) -> Option<Matrix> {
    let amps = [
        c64(x[0], x[1]),
        c64(x[2], x[3]),
        c64(x[4], x[5]),
        c64(x[6], x[7]),
    ];
    let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if norm_sq < 1e-20 {
        return None;
    }
    let norm = norm_sq.sqrt();
    Some(Matrix::col_vec(&[
        amps[0] / norm,
        amps[1] / norm,
        amps[2] / norm,
        amps[3] / norm,
    ]))
}

/// Maximizes coherent information over pure two-qubit inputs.
///
/// Parametrization: 8 reals (4 complex amplitudes), normalized before each
/// evaluation; the redundant global phase and scale cost the optimizer
/// nothing. Multi-start keeps whichever start attains the best value, ties
/// resolved toward the earliest start, so results are seed-deterministic.
pub fn maximize_coherent_information(
    channel: &KrausChannel,
    config: &OptimizerConfig,
) -> Result<CoherentInfoResult> {
    if channel.d_in() != 2 {
        return Err(Error::NotQubitChannel {
            d_in: channel.d_in(),
            d_out: channel.d_out(),
        });
    }
    let lifted = lift_kraus(channel);
    let d_out = channel.d_out();

    let mut objective = |x: &[f64]| -> f64 {
        let ket = match amplitudes_to_ket(x) {
            Some(k) => k,
            None => return 1e9,
        };
        let phi_mat = outer(&ket, &ket);
        let sigma = joint_output(&lifted, &phi_mat);
        let h_ab = match entropy_of_mat(&sigma) {
            Ok(h) => h,
            Err(_) => return 1e9,
        };
        let rho_b = match partial_trace_mat(&sigma, &[2, d_out], &[1]) {
            Ok(m) => m,
            Err(_) => return 1e9,
        };
        let h_b = match entropy_of_mat(&rho_b) {
            Ok(h) => h,
            Err(_) => return 1e9,
        };
        h_ab - h_b // minimize -I
    };

    let opts = NelderMeadOptions {
        max_iterations: config.max_iterations,
        tolerance: config.tolerance,
        initial_step: 0.2,
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let maxent_start = [s, 0.0, 0.0, 0.0, 0.0, 0.0, s, 0.0];

    let mut rng = SplitMix64::new(config.seed);
    let mut best_x: Option<Vec<f64>> = None;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_converged = false;
    for start in 0..=config.random_starts {
        let x0: Vec<f64> = if start == 0 {
            maxent_start.to_vec()
        } else {
            loop {
                let cand: Vec<f64> = (0..8).map(|_| rng.next_symmetric()).collect();
                if cand.iter().map(|v| v * v).sum::<f64>() > 1e-6 {
                    break cand;
                }
            }
        };
        let run = optim::minimize(&mut objective, &x0, &opts);
        let value = -run.fx;
        if value > best_value {
            best_value = value;
            best_x = Some(run.x);
            best_converged = run.converged;
        }
    }

    let ket = amplitudes_to_ket(&best_x.expect("at least the deterministic start ran"))
        .ok_or(Error::ZeroNorm)?;
    let optimal_input = DensityMatrix::pure(&ket, vec![2, 2])?;
    // Report the value through the same code path callers use directly.
    let value = coherent_information_at(channel, &optimal_input)?;
    Ok(CoherentInfoResult {
        value,
        optimal_input,
        starts_used: config.random_starts + 1,
        converged: best_converged,
    })
}

/// Closed-form switched-flip coherent information at the maximizing input:
/// max(0, 1 + H₂(p²) - 2 H₂(p)) for equal flip strengths p.
pub fn switch_flip_coherent_info_closed(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidProbability { value: p });
    }
    let raw = 1.0 + binary_entropy(p * p)? - 2.0 * binary_entropy(p)?;
    Ok(raw.max(0.0))
}

/// Smallest grid point p in (0.5, 1] (step `grid_step`) where the switched
/// bound strictly exceeds the single-use dephasing capacity 1 - H₂(p).
pub fn crossover_p(grid_step: f64) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step <= 0.01) {
        return Err(Error::OutOfRange {
            value: grid_step,
            min: f64::MIN_POSITIVE,
            max: 0.01,
        });
    }
    let mut k = 1usize;
    loop {
        let p = 0.5 + k as f64 * grid_step;
        if p > 1.0 + grid_step * 0.5 {
            return Err(Error::NoCrossover);
        }
        let p = p.min(1.0);
        if switch_flip_coherent_info_closed(p)? > dephasing_capacity(p)? {
            return Ok(p);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{self, bit_flip, identity_channel, phase_flip};
    use crate::pauli;
    use crate::switch;
    use crate::testkit;

    #[test]
    fn binary_entropy_known_points() {
        assert!(binary_entropy(0.0).unwrap().abs() < 1e-15);
        assert!(binary_entropy(1.0).unwrap().abs() < 1e-15);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        let expected_quarter = -(0.25_f64 * 0.25_f64.log2() + 0.75 * 0.75_f64.log2());
        assert!((binary_entropy(0.25).unwrap() - expected_quarter).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn binary_entropy_rejects_out_of_range() {
        assert!(binary_entropy(-0.01).is_err());
        assert!(binary_entropy(1.01).is_err());
    }

    #[test]
    fn von_neumann_entropy_known_states() {
        let pure = DensityMatrix::pure(&pauli::ket_plus(), vec![2]).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-12);

        let diag = Matrix::from_fn(4, 4, |i, j| {
            if i != j {
                c64(0.0, 0.0)
            } else {
                c64([0.5, 0.25, 0.25, 0.0][i], 0.0)
            }
        });
        let rho = DensityMatrix::new(diag, vec![2, 2]).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_invariant_under_unitary_conjugation() {
        let mut rng = SplitMix64::new(61);
        let rho = testkit::random_density(&mut rng, vec![2, 2]);
        let u = testkit::random_unitary(&mut rng, 4);
        let rotated = u.matmul(rho.mat()).unwrap().matmul(&u.adjoint()).unwrap();
        let rotated = DensityMatrix::new(rotated.hermitize(), vec![2, 2]).unwrap();
        let a = von_neumann_entropy(&rho).unwrap();
        let b = von_neumann_entropy(&rotated).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn coherent_information_of_identity_at_maxent_is_one() {
        let phi = DensityMatrix::maximally_entangled_qubits();
        let i = coherent_information_at(&identity_channel(2), &phi).unwrap();
        assert!((i - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_information_of_full_dephasing_at_maxent_is_zero() {
        let phi = DensityMatrix::maximally_entangled_qubits();
        let i = coherent_information_at(&phase_flip(0.5).unwrap(), &phi).unwrap();
        assert!(i.abs() < 1e-10);
    }

    #[test]
    fn switched_half_flips_at_maxent_give_negative_value() {
        let sc = switch::switched_flips(0.5, 0.5).unwrap();
        let phi = DensityMatrix::maximally_entangled_qubits();
        let i = coherent_information_at(&sc.induced_channel().unwrap(), &phi).unwrap();
        let expected = 1.0 + binary_entropy(0.25).unwrap() - 2.0;
        assert!(
            (i - expected).abs() < 1e-6,
            "maxent value at p=q=1/2 should be 1 + H₂(1/4) - 2 ≈ -0.1887, got {i}"
        );
    }

    #[test]
    fn product_inputs_carry_zero_coherent_information() {
        let mut rng = SplitMix64::new(62);
        let c = bit_flip(0.3).unwrap();
        for _ in 0..5 {
            let a = testkit::random_pure_ket(&mut rng, 2);
            let b = testkit::random_pure_ket(&mut rng, 2);
            let phi = DensityMatrix::pure(&a.tensor(&b), vec![2, 2]).unwrap();
            let i = coherent_information_at(&c, &phi).unwrap();
            assert!(
                i.abs() < 1e-10,
                "pure uncorrelated reference gives H(B) - H(B) = 0, got {i}"
            );
        }
    }

    #[test]
    fn coherent_information_rejects_mixed_input() {
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(matches!(
            coherent_information_at(&identity_channel(2), &mixed),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn maximizer_recovers_bit_flip_hashing_value() {
        let config = OptimizerConfig {
            random_starts: 6,
            ..Default::default()
        };
        let r = maximize_coherent_information(&bit_flip(0.8).unwrap(), &config).unwrap();
        let expected = 1.0 - binary_entropy(0.8).unwrap();
        assert!(
            (r.value - expected).abs() < 1e-5,
            "bit flip optimum is 1 - H₂(p): expected {expected}, got {}",
            r.value
        );
        assert_eq!(r.starts_used, 7);
    }

    #[test]
    fn maximizer_matches_switched_closed_form_at_p08() {
        let sc = switch::switched_flips(0.8, 0.8).unwrap();
        let config = OptimizerConfig {
            random_starts: 4,
            ..Default::default()
        };
        let r = maximize_coherent_information(&sc.induced_channel().unwrap(), &config).unwrap();
        let expected = switch_flip_coherent_info_closed(0.8).unwrap();
        assert!(
            (r.value - expected).abs() < 1e-4,
            "expected {expected}, got {}",
            r.value
        );
        let ent = entanglement_entropy(&r.optimal_input).unwrap();
        assert!(
            (ent - 1.0).abs() < 1e-3,
            "optimal input is maximally entangled"
        );
    }

    #[test]
    fn maximizer_value_never_below_maxent_evaluation() {
        let sc = switch::switched_flips(0.7, 0.7).unwrap();
        let induced = sc.induced_channel().unwrap();
        let config = OptimizerConfig {
            random_starts: 2,
            ..Default::default()
        };
        let r = maximize_coherent_information(&induced, &config).unwrap();
        let at_maxent =
            coherent_information_at(&induced, &DensityMatrix::maximally_entangled_qubits())
                .unwrap();
        assert!(r.value >= at_maxent - 1e-8);
    }

    #[test]
    fn closed_form_endpoints_and_clipping() {
        assert!((switch_flip_coherent_info_closed(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((switch_flip_coherent_info_closed(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            switch_flip_coherent_info_closed(0.5).unwrap(),
            0.0,
            "raw value -0.1887 clips to zero"
        );
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            assert!(switch_flip_coherent_info_closed(p).unwrap() >= 0.0);
        }
    }

    #[test]
    fn closed_form_is_continuous_across_the_clip() {
        // The raw expression crosses zero near p ≈ 0.5585; step over that
        // region and require small increments.
        let mut prev = switch_flip_coherent_info_closed(0.54).unwrap();
        let mut p = 0.5405;
        while p < 0.58 {
            let v = switch_flip_coherent_info_closed(p).unwrap();
            assert!((v - prev).abs() < 2e-3, "jump at p={p}");
            prev = v;
            p += 0.0005;
        }
    }

    #[test]
    fn crossover_lands_in_expected_window() {
        let p = crossover_p(0.005).unwrap();
        assert!(
            (0.61..=0.63).contains(&p),
            "crossover should sit just above the golden-ratio point, got {p}"
        );
    }

    #[test]
    fn switched_beats_single_use_at_p07_but_not_p055() {
        let better = switch_flip_coherent_info_closed(0.7).unwrap();
        let single = channel::dephasing_capacity(0.7).unwrap();
        assert!(better > single, "advantage must hold at p = 0.7");

        let worse = switch_flip_coherent_info_closed(0.55).unwrap();
        let single = channel::dephasing_capacity(0.55).unwrap();
        assert!(worse < single, "no advantage yet at p = 0.55");
    }

    #[test]
    fn crossover_rejects_coarse_grids() {
        assert!(crossover_p(0.02).is_err());
        assert!(crossover_p(0.0).is_err());
    }

    #[test]
    fn entanglement_entropy_of_bell_state_is_one() {
        let e = entanglement_entropy(&DensityMatrix::maximally_entangled_qubits()).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }
}
