//! Probe factors and distinguishability classes.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::config::{InterferometerConfig, Outcome, Path, TwistSpec};
use super::runs::CHARGE_TOLERANCE;
use crate::error::{Error, Result};
use crate::mtc::{AnyonModel, Charge, VACUUM};

/// Charge labels of one component of the generalized target, as seen by a probe.
///
/// `e1` and `e2` are the channels exchanged between ket and bra when the probe passes
/// on the same arm in both (lower, upper). `h1` and `h2` are the charges enclosed by
/// the two interference terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelLabels {
    pub h1: Charge,
    pub h2: Charge,
    pub e1: Charge,
    pub e2: Charge,
}

/// Four-term probe factor with the arm phases of `twist` inside the probe-charge average.
pub(crate) fn factor(model: &AnyonModel, config: &InterferometerConfig, twist: &TwistSpec, s: Outcome, labels: ChannelLabels) -> C64 {
    let amp = |p: Path| config.splitters.path_amplitude(s, p);
    let (lower, upper) = (amp(Path::I), amp(Path::II));
    let q = config.visibility;
    config
        .probe
        .distribution()
        .iter()
        .map(|&(b, pb)| {
            let phase = twist.probe_phase(model, b, Path::I) * twist.probe_phase(model, b, Path::II).conj();
            let terms = lower.norm_sqr() * model.monodromy(labels.e1, b)
                + lower * upper.conj() * phase * model.monodromy(labels.h1, b) * q
                + upper * lower.conj() * phase.conj() * model.monodromy(labels.h2, b).conj() * q
                + upper.norm_sqr() * model.monodromy(labels.e2, b);
            terms * pb
        })
        .sum()
}

fn check_labels(model: &AnyonModel, labels: &[Charge]) -> Result<()> {
    for &c in labels {
        if c >= model.rank() {
            return Err(Error::InadmissibleChannel(format!("charge index {c} is outside the model")));
        }
    }
    Ok(())
}

/// `p^s_{a a' e, B}` for a component `|a, c><a', c'|` whose ket and bra exchange charge `e`.
pub fn probe_factor(model: &AnyonModel, config: &InterferometerConfig, s: Outcome, a: Charge, a_bra: Charge, e: Charge) -> Result<C64> {
    check_labels(model, &[a, a_bra, e])?;
    if !model.fuses(a_bra, e, a) {
        return Err(Error::InadmissibleChannel(format!(
            "{} does not appear in {} x {}",
            model.label(a),
            model.label(a_bra),
            model.label(e)
        )));
    }
    let labels = ChannelLabels {
        h1: a,
        h2: a_bra,
        e1: e,
        e2: VACUUM,
    };
    Ok(factor(model, config, &TwistSpec::NONE, s, labels))
}

/// Probe factor of a generalized-layout component, ignoring any twist in `config`.
pub fn generalized_probe_factor(model: &AnyonModel, config: &InterferometerConfig, s: Outcome, labels: ChannelLabels) -> Result<C64> {
    check_labels(model, &[labels.h1, labels.h2, labels.e1, labels.e2])?;
    Ok(factor(model, config, &TwistSpec::NONE, s, labels))
}

/// Why the charges of a class could not be told apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassOrigin {
    /// A single charge.
    Singleton,
    /// An amplitude of the interferometer vanishes, so there is no interference at all.
    NullAmplitude,
    /// The members share the same probe monodromy.
    EqualMonodromy,
    /// Distinct monodromies give equal probabilities at this particular tuning.
    FineTuned,
}

/// A maximal set of charges with the same probability of sending a probe to the horizontal detector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishabilityClass {
    pub charges: Vec<Charge>,
    pub p_right: f64,
    pub origin: ClassOrigin,
}

/// Groups charges by `p^→` computed from the per-charge interference weights `values`.
pub(crate) fn classes_from_values(model: &AnyonModel, config: &InterferometerConfig, values: &[C64]) -> Vec<DistinguishabilityClass> {
    let (lower, upper) = config.splitters.diagonal_weights(Outcome::Right);
    let cross = config.splitters.cross_weight(Outcome::Right) * config.visibility;
    let p_right = |a: Charge| lower + upper + 2.0 * (cross * values[a]).re;
    let mut classes: Vec<DistinguishabilityClass> = Vec::new();
    for a in model.charges() {
        let p = p_right(a);
        match classes.iter_mut().find(|k| (k.p_right - p).abs() < CHARGE_TOLERANCE) {
            Some(class) => class.charges.push(a),
            None => classes.push(DistinguishabilityClass {
                charges: vec![a],
                p_right: p,
                origin: ClassOrigin::Singleton,
            }),
        }
    }
    let null = cross.norm() < CHARGE_TOLERANCE;
    for class in &mut classes {
        if class.charges.len() < 2 {
            continue;
        }
        let first = values[class.charges[0]];
        class.origin = if null {
            ClassOrigin::NullAmplitude
        } else if class.charges.iter().all(|&a| (values[a] - first).norm() < CHARGE_TOLERANCE) {
            ClassOrigin::EqualMonodromy
        } else {
            ClassOrigin::FineTuned
        };
    }
    classes
}

/// Partition of all charges into classes the untwisted interferometer cannot distinguish.
pub fn distinguishability_classes(model: &AnyonModel, config: &InterferometerConfig) -> Vec<DistinguishabilityClass> {
    classes_from_values(model, config, &config.probe.monodromy(model))
}
