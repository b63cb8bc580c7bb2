//! Mach-Zehnder interferometry of anyonic targets: configurations, states and probe updates.

mod config;
mod engine;
mod factors;
mod measurement;
pub(crate) mod runs;
mod state;

pub use config::{BeamSplitterPair, InterferometerConfig, Outcome, Path, ProbeSpec, TwistSpec, TwistVariant};
pub use factors::{distinguishability_classes, generalized_probe_factor, probe_factor, ChannelLabels, ClassOrigin, DistinguishabilityClass};
pub(crate) use factors::{classes_from_values, factor};
pub use measurement::{
    asymptotic_outcomes, binomial_weight, channel_weights, generalized_asymptotic, multi_probe_distribution, multi_probe_outcomes, multi_probe_update,
    single_probe_update,
};
pub use crate::oracle::omega_form_fixed_state;
pub use runs::{OutcomeLabel, OutcomeReport, ZERO_PROBABILITY};
pub use state::{BasisLabel, Layout, TargetState, STATE_TOLERANCE};
