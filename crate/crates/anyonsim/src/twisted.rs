//! Twisted interferometers: probes on each arm are wound around one another before recombining.
//!
//! Winding the probes of an arm `m` times is equivalent to a `tau^m` loop around that
//! arm. The loop is cut open into a pair of leaves next to the target, which turns the
//! twisted problem into an untwisted one on a larger target. The lower loop sits
//! between `A` and `C1`, the upper loop between `C2` and `A`:
//! `[C2, z, zbar, A, x, xbar, C1]`. After the probes have passed, the loops are
//! closed again.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::interferometry::runs::{OutcomeLabel, OutcomeReport, Prepared, ZERO_PROBABILITY};
use crate::interferometry::{classes_from_values, factor, ChannelLabels, DistinguishabilityClass, InterferometerConfig, Layout, Outcome, Path, TargetState, TwistSpec};
use crate::mtc::{AnyonModel, Charge};
use crate::oracle::{close_twist_loops, open_twist_loops, BasisRef, TreeLabel};

pub use crate::oracle::omega_tau_form;

/// Leaf index of the lower loop charge in the twisted basis.
const LOWER_LOOP: usize = 4;
/// Leaf index of the upper loop charge in the twisted basis.
const UPPER_LOOP: usize = 1;

/// One nonzero component `weight |ket><bra|` of a target with its twisting loops opened.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedTerm {
    pub ket: TreeLabel,
    pub bra: TreeLabel,
    pub weight: C64,
}

impl TwistedTerm {
    /// Lower loop charges `(x, y)` on the ket and bra.
    pub fn lower_loop(&self) -> (Charge, Charge) {
        (self.ket.leaves[LOWER_LOOP], self.bra.leaves[LOWER_LOOP])
    }

    /// Upper loop charges on the ket and bra.
    pub fn upper_loop(&self) -> (Charge, Charge) {
        (self.ket.leaves[UPPER_LOOP], self.bra.leaves[UPPER_LOOP])
    }
}

/// A target state with the `tau` loops of a twist absorbed into its fusion trees.
#[derive(Debug, Clone)]
pub struct TwistedExpansion {
    layout: Layout,
    twist: TwistSpec,
    basis: BasisRef,
    operator: DMatrix<C64>,
}

impl TwistedExpansion {
    pub fn twist(&self) -> TwistSpec {
        self.twist
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn operator(&self) -> &DMatrix<C64> {
        &self.operator
    }

    /// Nonzero components, with entries below `1e-15` dropped.
    pub fn terms(&self) -> Vec<TwistedTerm> {
        let states = self.basis.states();
        let mut out = Vec::new();
        for j in 0..self.basis.dim() {
            for i in 0..self.basis.dim() {
                let weight = self.operator[(i, j)];
                if weight.norm() > 1e-15 {
                    out.push(TwistedTerm {
                        ket: states[i].clone(),
                        bra: states[j].clone(),
                        weight,
                    });
                }
            }
        }
        out
    }

    /// Closes the loops without any probes, recovering the untwisted state.
    pub fn reconstruct(&self, model: &AnyonModel) -> TargetState {
        let (basis, x) = close_twist_loops(model, &self.basis, &self.operator);
        TargetState::from_operator(model, self.layout, &basis, &x)
    }
}

/// Opens the `tau^{m_lower}` and `tau^{m_upper}` loops of `twist` into leaf pairs.
pub fn tau_absorption(model: &AnyonModel, target: &TargetState, twist: &TwistSpec) -> Result<TwistedExpansion> {
    target.validate_shape(model)?;
    let ext = open_twist_loops(model, target, twist);
    Ok(TwistedExpansion {
        layout: ext.layout,
        twist: *twist,
        basis: ext.basis,
        operator: ext.x,
    })
}

/// Probe factor of a twisted component, with the pure-braid spin phases of `config.twist`.
///
/// The labels refer to the charges of the twisted basis.
pub fn twisted_probe_factor(model: &AnyonModel, config: &InterferometerConfig, s: Outcome, labels: ChannelLabels) -> Result<C64> {
    crate::interferometry::generalized_probe_factor(model, config, s, labels)?;
    Ok(factor(model, config, &config.twist, s, labels))
}

/// `sum_b Pr(b) phase_I(b) conj(phase_II(b)) M_{ab}` for every charge `a`.
pub fn twisted_monodromy(model: &AnyonModel, config: &InterferometerConfig) -> Vec<C64> {
    let twist = config.twist;
    config
        .probe
        .weighted_monodromy(model, |b| twist.probe_phase(model, b, Path::I) * twist.probe_phase(model, b, Path::II).conj())
}

fn prepare<'m>(model: &'m AnyonModel, target: &TargetState, config: &InterferometerConfig) -> Result<Prepared<'m>> {
    config.validate()?;
    Prepared::twisted(model, target, &config.twist)
}

fn require_probes(n_probes: usize) -> Result<()> {
    if n_probes == 0 {
        return Err(crate::Error::InvalidParameter("at least one probe is required".into()));
    }
    Ok(())
}

/// `Pr_N(n)` of the twisted interferometer for `n = 0..=N`.
pub fn twisted_distribution(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig, n_probes: usize) -> Result<Vec<f64>> {
    require_probes(n_probes)?;
    let prepared = prepare(model, target, config)?;
    let ys = prepared.count_operators(config, n_probes)?;
    Ok(ys.iter().map(|y| prepared.probability(y)).collect())
}

/// Every count outcome of `N` probes through the twisted interferometer, with post states.
pub fn twisted_outcomes(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig, n_probes: usize) -> Result<Vec<OutcomeReport>> {
    require_probes(n_probes)?;
    let prepared = prepare(model, target, config)?;
    let mut reports = Vec::new();
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
    Ok(reports)
}

/// Asymptotic outcomes of the twisted interferometer, with post states in the untwisted basis.
pub fn twisted_asymptotic(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig) -> Result<Vec<OutcomeReport>> {
    let prepared = prepare(model, target, config)?;
    prepared.asymptotic(config, &twisted_monodromy(model, config))
}

/// Distinguishability classes of the twisted interferometer.
pub fn twisted_classes(model: &AnyonModel, config: &InterferometerConfig) -> Vec<DistinguishabilityClass> {
    classes_from_values(model, config, &twisted_monodromy(model, config))
}
