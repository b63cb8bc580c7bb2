#![allow(dead_code)]

use anyonsim::interferometry::{BeamSplitterPair, InterferometerConfig, Layout, ProbeSpec, TargetState};
use anyonsim::mtc::{AnyonModel, Charge};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn all_charges(model: &AnyonModel) -> Vec<Charge> {
    model.charges().collect()
}

pub fn random_state(model: &AnyonModel, layout: Layout, rng: &mut ChaCha8Rng) -> TargetState {
    let all = all_charges(model);
    TargetState::random(model, layout, [&all, &all, &all], || rng.gen_range(-1.0..1.0)).unwrap()
}

pub fn random_splitters(rng: &mut ChaCha8Rng) -> BeamSplitterPair {
    let mut mixing = || rng.gen_range(0.1..1.4);
    let (a1, a2) = (mixing(), mixing());
    let mut angle = || rng.gen_range(-3.0..3.0);
    BeamSplitterPair::from_angles(a1, angle(), angle(), a2, angle(), angle(), angle(), angle())
}

pub fn generic_splitters() -> BeamSplitterPair {
    BeamSplitterPair::from_angles(0.7, 0.3, -0.4, 1.1, 0.9, 0.2, 0.5, -0.8)
}

/// A probe mixing the last charge and the first nontrivial one.
pub fn mixed_probe(model: &AnyonModel) -> ProbeSpec {
    ProbeSpec::new(model, vec![(model.rank() - 1, 0.6), (1, 0.4)]).unwrap()
}

pub fn generic_config(model: &AnyonModel) -> InterferometerConfig {
    InterferometerConfig::new(generic_splitters(), mixed_probe(model))
}

/// Largest entry-wise difference between two states, over the union of their labels.
pub fn state_diff(a: &TargetState, b: &TargetState) -> f64 {
    a.max_abs_diff(b)
}
