//! Two qubit channels routed in a superposition of causal orders.
//!
//! Given channels E and F with Kraus operators {E_i} and {F_j} and a control
//! qubit prepared in ω, the switched channel acts on particle ⊗ control as
//!
//!   S(ρ) = Σᵢⱼ Wᵢⱼ (ρ ⊗ ω) Wᵢⱼ†,   Wᵢⱼ = EᵢFⱼ ⊗ |0><0| + FⱼEᵢ ⊗ |1><1|,
//!
//! so control |0> runs F before E and control |1> the reverse. The tensor
//! convention everywhere is particle on the left, control on the right.
//!
//! For bit flip (strength p) and phase flip (strength q) with ω = |+><+| the
//! output has the closed form
//!
//!   [(1-p)(1-q) ρ + p(1-q) XρX + q(1-p) ZρZ] ⊗ |+><+|  +  pq YρY ⊗ |-><-|,
//!
//! the |-> branch arising from the anticommutation XZ = -ZX: the two
//! orderings interfere destructively in the diagonal control blocks and
//! constructively in the off-diagonal ones, isolating the noiseless YρY term.

use crate::channel::{bit_flip, phase_flip, KrausChannel, TOL_CPTP};
use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pauli;
use crate::state::DensityMatrix;

use crate::channel::ChoiMatrix;

/// Ingredients of a switch: the two channels and the control state ω.
#[derive(Debug, Clone)]
pub struct SwitchConfig {
    channel_e: KrausChannel,
    channel_f: KrausChannel,
    omega: DensityMatrix,
}

impl SwitchConfig {
    /// Both channels must be trace-preserving qubit channels and ω a qubit
    /// state.
    pub fn new(
        channel_e: KrausChannel,
        channel_f: KrausChannel,
        omega: DensityMatrix,
    ) -> Result<Self> {
        for c in [&channel_e, &channel_f] {
            if c.d_in() != 2 || c.d_out() != 2 {
                return Err(Error::NotQubitChannel {
                    d_in: c.d_in(),
                    d_out: c.d_out(),
                });
            }
            let report = c.validate_cptp();
            if !report.valid {
                return Err(Error::NotTracePreserving {
                    deviation: report.max_deviation,
                });
            }
        }
        if omega.dim() != 2 {
            return Err(Error::BadSubsystemDims {
                dims: omega.dims().to_vec(),
                dim: omega.dim(),
            });
        }
        Ok(Self {
            channel_e,
            channel_f,
            omega,
        })
    }

    pub fn channel_e(&self) -> &KrausChannel {
        &self.channel_e
    }

    pub fn channel_f(&self) -> &KrausChannel {
        &self.channel_f
    }

    pub fn omega(&self) -> &DensityMatrix {
        &self.omega
    }
}

/// A built switch: the joint Kraus operators Wᵢⱼ on particle ⊗ control plus
/// the configuration they came from.
#[derive(Debug, Clone)]
pub struct SwitchedChannel {
    kraus_w: Vec<Matrix>,
    config: SwitchConfig,
}

/// Constructs the switched channel from a validated configuration and
/// verifies the Wᵢⱼ close to a trace-preserving family.
pub fn build_switch(config: SwitchConfig) -> Result<SwitchedChannel> {
    let proj0 = pauli::projector(&pauli::ket_zero());
    let proj1 = pauli::projector(&pauli::ket_one());
    let mut kraus_w = Vec::new();
    for e in config.channel_e.kraus() {
        for f in config.channel_f.kraus() {
            let ef = e.matmul(f)?;
            let fe = f.matmul(e)?;
            kraus_w.push(ef.tensor(&proj0).add(&fe.tensor(&proj1)));
        }
    }
    let mut sum = Matrix::zeros(4, 4);
    for w in &kraus_w {
        sum = sum.add(&w.adjoint().matmul(w)?);
    }
    let deviation = sum.max_abs_diff(&Matrix::identity(4));
    if deviation > TOL_CPTP {
        return Err(Error::NotTracePreserving { deviation });
    }
    Ok(SwitchedChannel { kraus_w, config })
}

/// Convenience builder for the main configuration studied here: bit flip and
/// phase flip of strengths p, q with control |+><+|.
pub fn switched_flips(p: f64, q: f64) -> Result<SwitchedChannel> {
    let omega = DensityMatrix::pure(&pauli::ket_plus(), vec![2])?;
    build_switch(SwitchConfig::new(bit_flip(p)?, phase_flip(q)?, omega)?)
}

/// The four joint-output blocks indexed by control bra/ket, i.e.
/// block(k, k') = (I ⊗ <k|) S(ρ) (I ⊗ |k'>), unnormalized.
#[derive(Debug, Clone)]
pub struct ControlBlocks {
    blocks: [[Matrix; 2]; 2],
}

impl ControlBlocks {
    pub fn block(&self, k: usize, k_prime: usize) -> &Matrix {
        &self.blocks[k][k_prime]
    }

    /// Reassembles the joint 4x4 state: Σ block(k,k') ⊗ |k><k'|.
    pub fn reassemble(&self) -> Matrix {
        let mut joint = Matrix::zeros(4, 4);
        for k in 0..2 {
            for k2 in 0..2 {
                let b = &self.blocks[k][k2];
                for i in 0..2 {
                    for j in 0..2 {
                        joint.set(i * 2 + k, j * 2 + k2, b.get(i, j));
                    }
                }
            }
        }
        joint
    }
}

impl SwitchedChannel {
    pub fn config(&self) -> &SwitchConfig {
        &self.config
    }

    pub fn kraus_w(&self) -> &[Matrix] {
        &self.kraus_w
    }

    /// Applies the switch directly as Σᵢⱼ Wᵢⱼ (ρ ⊗ ω) Wᵢⱼ†, which works for
    /// any control state ω without purifying it.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::BadSubsystemDims {
                dims: rho.dims().to_vec(),
                dim: rho.dim(),
            });
        }
        let joint_in = rho.mat().tensor(self.config.omega.mat());
        let mut out = Matrix::zeros(4, 4);
        for w in &self.kraus_w {
            out = out.add(&w.matmul(&joint_in)?.matmul(&w.adjoint())?);
        }
        DensityMatrix::new(out.hermitize(), vec![2, 2])
    }

    /// The induced 2 -> 4 channel ρ ↦ S(ρ) as a plain Kraus family:
    /// ω = Σ μ |w><w| contributes operators √μ · Wᵢⱼ (I ⊗ |w>).
    pub fn induced_channel(&self) -> Result<KrausChannel> {
        let eig = hermitian_eig(self.config.omega.mat())?;
        let id = Matrix::identity(2);
        let mut kraus = Vec::new();
        for (m, &mu) in eig.values.iter().enumerate() {
            if mu < 1e-12 {
                continue;
            }
            let embed = id.tensor(&eig.vectors.column(m)); // 4x2
            let root = mu.sqrt();
            for w in &self.kraus_w {
                kraus.push(w.matmul(&embed)?.scale(root));
            }
        }
        KrausChannel::new(kraus)
    }

    /// Choi matrix of the induced 2 -> 4 channel (8-dimensional, trace 1).
    pub fn choi(&self) -> Result<ChoiMatrix> {
        self.induced_channel()?.to_choi()
    }

    /// Slices the joint output into the four control blocks. Blocks carry
    /// the matrix elements of ω: block(k,k') = ω[k,k'] Σᵢⱼ G_k ρ G_{k'}†
    /// with G_0 = EᵢFⱼ and G_1 = FⱼEᵢ.
    pub fn control_blocks(&self, rho: &DensityMatrix) -> Result<ControlBlocks> {
        let joint = self.apply(rho)?;
        let slice = |k: usize, k2: usize| {
            Matrix::from_fn(2, 2, |i, j| joint.mat().get(i * 2 + k, j * 2 + k2))
        };
        Ok(ControlBlocks {
            blocks: [[slice(0, 0), slice(0, 1)], [slice(1, 0), slice(1, 1)]],
        })
    }
}

/// Closed-form switched output for flip channels with ω = |+><+|.
pub fn pauli_switch_closed_form(p: f64, q: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) || !v.is_finite() {
            return Err(Error::InvalidProbability { value: v });
        }
    }
    if rho.dim() != 2 {
        return Err(Error::BadSubsystemDims {
            dims: rho.dims().to_vec(),
            dim: rho.dim(),
        });
    }
    let x = pauli::x();
    let y = pauli::y();
    let z = pauli::z();
    let conj = |u: &Matrix| -> Result<Matrix> { u.matmul(rho.mat())?.matmul(&u.adjoint()) };
    let plus_branch = rho
        .mat()
        .scale((1.0 - p) * (1.0 - q))
        .add(&conj(&x)?.scale(p * (1.0 - q)))
        .add(&conj(&z)?.scale(q * (1.0 - p)));
    let minus_branch = conj(&y)?.scale(p * q);
    let joint = plus_branch
        .tensor(&pauli::projector(&pauli::ket_plus()))
        .add(&minus_branch.tensor(&pauli::projector(&pauli::ket_minus())));
    DensityMatrix::new(joint.hermitize(), vec![2, 2])
}
