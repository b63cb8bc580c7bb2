//! Finite-N and asymptotic runs shared by the untwisted and twisted front ends.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::config::{InterferometerConfig, Path};
use super::engine::ProbeEngine;
use super::factors::{classes_from_values, DistinguishabilityClass};
use super::state::{Layout, TargetState};
use crate::error::{Error, Result};
use crate::mtc::{AnyonModel, Charge};
use crate::oracle::{close_twist_loops, open_twist_loops, quantum_trace, BasisRef};
use crate::interferometry::TwistSpec;

/// Probabilities below this are treated as impossible outcomes.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Tolerance for deciding `M_{eB} = 1` and class membership.
pub(crate) const CHARGE_TOLERANCE: f64 = 1e-10;

/// Identifies one outcome of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeLabel {
    /// `n` of the probes reached the horizontal detector.
    Count(usize),
    /// The run converged to distinguishability class `index`.
    Class { index: usize, charges: Vec<Charge> },
}

/// One outcome with its probability and the normalized target state it leaves behind.
#[derive(Debug, Clone)]
pub struct OutcomeReport {
    pub label: OutcomeLabel,
    pub probability: f64,
    pub post_state: TargetState,
}

/// A target opened up for probing: the operator, the engine acting on it and how to close it again.
pub(crate) struct Prepared<'m> {
    pub engine: ProbeEngine<'m>,
    pub x: DMatrix<C64>,
    layout: Layout,
    twisted: bool,
}

impl<'m> Prepared<'m> {
    /// Probes wind around `[C2, A]` on the lower arm and `[C2]` on the upper arm.
    pub fn untwisted(model: &'m AnyonModel, target: &TargetState) -> Result<Self> {
        target.validate_shape(model)?;
        let (basis, x) = target.to_operator(model);
        Ok(Self {
            engine: ProbeEngine::new(model, basis, [2, 1]),
            x,
            layout: target.layout(),
            twisted: false,
        })
    }

    /// The twisting loops of both arms are opened into leaf pairs `(z, zbar)` and `(x, xbar)`.
    pub fn twisted(model: &'m AnyonModel, target: &TargetState, twist: &TwistSpec) -> Result<Self> {
        target.validate_shape(model)?;
        let ext = open_twist_loops(model, target, twist);
        Ok(Self {
            engine: ProbeEngine::new(model, ext.basis, [5, 2]),
            x: ext.x,
            layout: target.layout(),
            twisted: true,
        })
    }

    pub fn model(&self) -> &'m AnyonModel {
        self.engine.model()
    }

    /// The operator on `[C2, A, C1]` represented by `y`.
    pub fn close(&self, y: &DMatrix<C64>) -> (BasisRef, DMatrix<C64>) {
        if self.twisted {
            close_twist_loops(self.model(), self.engine.basis(), y)
        } else {
            (self.engine.basis().clone(), y.clone())
        }
    }

    pub fn probability(&self, y: &DMatrix<C64>) -> f64 {
        let (basis, y3) = self.close(y);
        quantum_trace(self.model(), &basis, &y3).re
    }

    /// The state `y / Pr`, failing if `Pr` is below [`ZERO_PROBABILITY`].
    pub fn normalized(&self, y: &DMatrix<C64>) -> Result<(f64, TargetState)> {
        let (basis, y3) = self.close(y);
        let probability = quantum_trace(self.model(), &basis, &y3).re;
        if probability < ZERO_PROBABILITY {
            return Err(Error::ZeroProbabilityOutcome { probability });
        }
        let state = TargetState::from_operator(self.model(), self.layout, &basis, &(y3 / C64::new(probability, 0.0)));
        Ok((probability, state))
    }

    /// Unnormalized operators for every count of `Right` outcomes among `n_probes` probes.
    pub fn count_operators(&self, config: &InterferometerConfig, n_probes: usize) -> Result<Vec<DMatrix<C64>>> {
        self.engine.count_operators(&self.x, config, n_probes)
    }

    /// Asymptotic outcomes for the classes of `values`, the per-charge interference weights.
    pub fn asymptotic(&self, config: &InterferometerConfig, values: &[C64]) -> Result<Vec<OutcomeReport>> {
        let model = self.model();
        let blind = config.probe.monodromy(model);
        let invisible = |e: Charge| (blind[e] - 1.0).norm() < CHARGE_TOLERANCE;
        let classes = classes_from_values(model, config, values);
        let mut reports = Vec::new();
        for (index, class) in classes.iter().enumerate() {
            let y = self.class_projection(&self.x, class, &invisible)?;
            let probability = self.probability(&y);
            if probability < ZERO_PROBABILITY {
                continue;
            }
            let (probability, post_state) = self.normalized(&y)?;
            reports.push(OutcomeReport {
                label: OutcomeLabel::Class {
                    index,
                    charges: class.charges.clone(),
                },
                probability,
                post_state,
            });
        }
        Ok(reports)
    }

    /// Keeps the components that survive forever in `class`: both diagonal channels invisible
    /// to the probes and both interference channels inside the class.
    pub fn class_projection(
        &self,
        x: &DMatrix<C64>,
        class: &DistinguishabilityClass,
        invisible: &impl Fn(Charge) -> bool,
    ) -> Result<DMatrix<C64>> {
        let model = self.model();
        let indicator = |keep: bool| if keep { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        let member = |c: Charge| class.charges.contains(&c);
        let y = self.engine.loop_term(x, Path::I, Path::I, |e| indicator(invisible(e)))?;
        let y = self.engine.loop_term(&y, Path::II, Path::II, |e| indicator(invisible(e)))?;
        let y = self.engine.loop_term(&y, Path::I, Path::II, |e| indicator(member(e)))?;
        self.engine.loop_term(&y, Path::II, Path::I, |e| indicator(member(model.dual(e))))
    }
}
