//! Single-probe, finite-N and asymptotic measurements with an untwisted interferometer.

use num_complex::Complex64 as C64;

use super::config::{InterferometerConfig, Outcome, Path};
use super::factors::{probe_factor, ChannelLabels};
use super::runs::{OutcomeLabel, OutcomeReport, Prepared, ZERO_PROBABILITY};
use super::state::{Layout, TargetState};
use crate::error::{Error, Result};
use crate::mtc::{AnyonModel, VACUUM};

fn require_untwisted(config: &InterferometerConfig) -> Result<()> {
    config.validate()?;
    if !config.twist.is_trivial() {
        return Err(Error::InvalidParameter("configuration is twisted; use the twisted engine".into()));
    }
    Ok(())
}

fn require_layout(target: &TargetState, layout: Layout) -> Result<()> {
    if target.layout() != layout {
        return Err(Error::InvalidState(format!("expected a {layout:?} target, got {:?}", target.layout())));
    }
    Ok(())
}

/// `C(N, n) p^n q^(N - n)` for complex `p` and `q`.
pub fn binomial_weight(n_probes: usize, n: usize, p: C64, q: C64) -> C64 {
    if n > n_probes {
        return C64::new(0.0, 0.0);
    }
    let k = n.min(n_probes - n);
    let ln_choose: f64 = (0..k).map(|i| ((n_probes - i) as f64 / (i + 1) as f64).ln()).sum();
    p.powu(n as u32) * q.powu((n_probes - n) as u32) * ln_choose.exp()
}

/// Pure-arm factor `p^s` of a diagonal simple-layout component with charge `a`.
fn diagonal_factor(model: &AnyonModel, config: &InterferometerConfig, s: Outcome, a: usize) -> f64 {
    probe_factor(model, config, s, a, a, VACUUM).expect("vacuum channel is admissible").re
}

/// Count distribution from closed-form factors on the diagonal of a simple target.
fn simple_distribution(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig, n_probes: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_probes + 1];
    for ((ket, bra), coef) in target.entries() {
        if ket != bra {
            continue;
        }
        let right = C64::new(diagonal_factor(model, config, Outcome::Right, ket.a), 0.0);
        let up = C64::new(diagonal_factor(model, config, Outcome::Up, ket.a), 0.0);
        for (n, slot) in out.iter_mut().enumerate() {
            *slot += (coef * binomial_weight(n_probes, n, right, up)).re;
        }
    }
    out
}

/// Simple-layout update: every crossed component picks up `C(N, n) (p^→)^n (p^↑)^(N - n)`.
fn simple_update(prepared: &Prepared<'_>, config: &InterferometerConfig, n_probes: usize, n: usize) -> Result<(f64, TargetState)> {
    let model = prepared.model();
    let y = prepared.engine.channel_map(&prepared.x, Path::I, Path::I, |a, a_bra, e| {
        let labels = ChannelLabels {
            h1: a,
            h2: a_bra,
            e1: e,
            e2: VACUUM,
        };
        let right = super::factors::factor(model, config, &config.twist, Outcome::Right, labels);
        let up = super::factors::factor(model, config, &config.twist, Outcome::Up, labels);
        binomial_weight(n_probes, n, right, up)
    })?;
    prepared.normalized(&y)
}

/// Probability of `s` for one probe and the normalized target state it leaves.
pub fn single_probe_update(
    model: &AnyonModel,
    target: &TargetState,
    config: &InterferometerConfig,
    s: Outcome,
) -> Result<(f64, TargetState)> {
    let n = match s {
        Outcome::Right => 1,
        Outcome::Up => 0,
    };
    let state = multi_probe_update(model, target, config, 1, n)?;
    let probability = multi_probe_distribution(model, target, config, 1)?[n];
    Ok((probability, state))
}

/// `Pr_N(n)` for `n = 0..=N`, indexed by `n`.
pub fn multi_probe_distribution(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig, n_probes: usize) -> Result<Vec<f64>> {
    require_untwisted(config)?;
    target.validate_shape(model)?;
    if n_probes == 0 {
        return Err(Error::InvalidParameter("at least one probe is required".into()));
    }
    match target.layout() {
        Layout::Simple => Ok(simple_distribution(model, target, config, n_probes)),
        Layout::Generalized => {
            let prepared = Prepared::untwisted(model, target)?;
            let ys = prepared.count_operators(config, n_probes)?;
            Ok(ys.iter().map(|y| prepared.probability(y)).collect())
        }
    }
}

/// The normalized target state after `n` of `N` probes reach the horizontal detector.
pub fn multi_probe_update(
    model: &AnyonModel,
    target: &TargetState,
    config: &InterferometerConfig,
    n_probes: usize,
    n: usize,
) -> Result<TargetState> {
    require_untwisted(config)?;
    if n_probes == 0 || n > n_probes {
        return Err(Error::InvalidParameter(format!("count {n} of {n_probes} probes")));
    }
    let prepared = Prepared::untwisted(model, target)?;
    let (_, state) = match target.layout() {
        Layout::Simple => simple_update(&prepared, config, n_probes, n)?,
        Layout::Generalized => {
            let mut ys = prepared.count_operators(config, n_probes)?;
            prepared.normalized(&ys.swap_remove(n))?
        }
    };
    Ok(state)
}

/// Every finite-N outcome with its probability and post state; impossible counts are skipped.
pub fn multi_probe_outcomes(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig, n_probes: usize) -> Result<Vec<OutcomeReport>> {
    require_untwisted(config)?;
    if n_probes == 0 {
        return Err(Error::InvalidParameter("at least one probe is required".into()));
    }
    let prepared = Prepared::untwisted(model, target)?;
    let mut reports = Vec::new();
    match target.layout() {
        Layout::Simple => {
            let probabilities = simple_distribution(model, target, config, n_probes);
            for (n, &p) in probabilities.iter().enumerate() {
                if p < ZERO_PROBABILITY {
                    continue;
                }
                let (probability, post_state) = simple_update(&prepared, config, n_probes, n)?;
                reports.push(OutcomeReport {
                    label: OutcomeLabel::Count(n),
                    probability,
                    post_state,
                });
            }
        }
        Layout::Generalized => {
            for (n, y) in prepared.count_operators(config, n_probes)?.iter().enumerate() {
                if prepared.probability(y) < ZERO_PROBABILITY {
                    continue;
                }
                let (probability, post_state) = prepared.normalized(y)?;
                reports.push(OutcomeReport {
                    label: OutcomeLabel::Count(n),
                    probability,
                    post_state,
                });
            }
        }
    }
    Ok(reports)
}

/// Outcomes of infinitely many probes on a simple target, one per class with nonzero probability.
pub fn asymptotic_outcomes(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig) -> Result<Vec<OutcomeReport>> {
    require_untwisted(config)?;
    require_layout(target, Layout::Simple)?;
    Prepared::untwisted(model, target)?.asymptotic(config, &config.probe.monodromy(model))
}

/// Outcomes of infinitely many probes on a generalized target.
pub fn generalized_asymptotic(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig) -> Result<Vec<OutcomeReport>> {
    require_untwisted(config)?;
    require_layout(target, Layout::Generalized)?;
    Prepared::untwisted(model, target)?.asymptotic(config, &config.probe.monodromy(model))
}

/// Frobenius weight of each crossed channel `e` between the ket split at arm `ket` and the bra split at arm `bra`.
///
/// With `(Path::I, Path::I)` this is the `A`-`C` channel of the simple layout and `e1` of the
/// generalized one; `(Path::II, Path::II)` gives `e2`.
pub fn channel_weights(model: &AnyonModel, target: &TargetState, ket: Path, bra: Path) -> Result<Vec<f64>> {
    let prepared = Prepared::untwisted(model, target)?;
    model
        .charges()
        .map(|e| {
            let y = prepared.engine.loop_term(&prepared.x, ket, bra, |c| C64::new(if c == e { 1.0 } else { 0.0 }, 0.0))?;
            Ok(y.norm())
        })
        .collect()
}
