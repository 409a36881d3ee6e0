//! Numerics for qubit channels placed in a superposition of causal orders.
//!
//! The library builds the switched channel of two noisy qubit channels,
//! measures its control qubit to herald noiseless transmission, bounds the
//! quantum capacity of the induced channel through its coherent information,
//! and certifies numerically that postselected interferometry over
//! independent noise cannot reproduce the effect.
//!
//! Everything is deterministic: random draws go through the pinned
//! [`rng::SplitMix64`] generator, eigenvalues through the [`eig`] Jacobi
//! solver, and optimization through the [`optim`] simplex search, so results
//! are bit-reproducible across platforms.

pub mod channel;
pub mod eig;
pub mod entropy;
pub mod error;
pub mod filtration;
pub mod herald;
pub mod matrix;
pub mod optim;
pub mod pauli;
pub mod rng;
pub mod state;
pub mod switch;
pub mod testkit;

pub use channel::{
    bit_flip, compose, dephasing_capacity, identity_channel, phase_flip, ChoiMatrix, CptpReport,
    KrausChannel,
};
pub use entropy::{
    binary_entropy, coherent_information_at, crossover_p, maximize_coherent_information,
    switch_flip_coherent_info_closed, von_neumann_entropy, CoherentInfoResult, OptimizerConfig,
};
pub use error::{Error, Result};
pub use filtration::{
    no_go_hypotheses, search_postselection, switch_correlated_demo, unitarity_score,
    CorrelatedDemo, FiltrationSetup, HypothesisReport, SearchResult,
};
pub use herald::{
    bb84_states, correct_minus, herald_measure, heralded_success_probability, monte_carlo_herald,
    HeraldOutcome, HeraldStats, PerStateStats,
};
pub use matrix::Matrix;
pub use state::DensityMatrix;
pub use switch::{
    build_switch, pauli_switch_closed_form, switched_flips, SwitchConfig, SwitchedChannel,
};
