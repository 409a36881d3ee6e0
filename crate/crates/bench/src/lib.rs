//! Shared fixtures for the benchmark targets.

use causal_switch::rng::SplitMix64;
use causal_switch::state::DensityMatrix;
use causal_switch::switch::{switched_flips, SwitchedChannel};
use causal_switch::testkit;

/// The configuration every benchmark exercises: both flips at strength 1/2,
/// the regime where heralding fires 25% of the time.
pub fn reference_switch() -> SwitchedChannel {
    switched_flips(0.5, 0.5).expect("flip strengths are valid")
}

/// A deterministic mixed qubit input, the same across benchmark runs.
pub fn reference_input() -> DensityMatrix {
    let mut rng = SplitMix64::new(2024);
    testkit::random_density(&mut rng, vec![2])
}
