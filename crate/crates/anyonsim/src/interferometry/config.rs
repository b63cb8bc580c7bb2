use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mtc::{AnyonModel, Charge, VACUUM};

/// Detector that registers a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    /// The horizontal detector, `s = ->`.
    Right,
    /// The vertical detector, `s = ^`.
    Up,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Right, Outcome::Up];

    pub fn symbol(self) -> char {
        match self {
            Outcome::Right => 'R',
            Outcome::Up => 'U',
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Arm of the interferometer taken by a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Path {
    /// Passes below the target `A`.
    I,
    /// Passes above the target `A`.
    II,
}

impl Path {
    pub const BOTH: [Path; 2] = [Path::I, Path::II];
}

/// The two beam splitters `T_j = [[t_j, r_j*], [r_j, -t_j*]]` and the arm phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterPair {
    pub t1: C64,
    pub r1: C64,
    pub t2: C64,
    pub r2: C64,
    pub theta_i: f64,
    pub theta_ii: f64,
}

impl BeamSplitterPair {
    pub fn new(t1: C64, r1: C64, t2: C64, r2: C64, theta_i: f64, theta_ii: f64) -> Result<Self> {
        let s = Self {
            t1,
            r1,
            t2,
            r2,
            theta_i,
            theta_ii,
        };
        s.validate()?;
        Ok(s)
    }

    /// Balanced splitters with `t1 r1* r2* t2* e^{i(theta_I - theta_II)} = e^{i phi} / 4`.
    pub fn tuned(phi: f64) -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            t1: h,
            r1: h,
            t2: h,
            r2: h,
            theta_i: phi,
            theta_ii: 0.0,
        }
    }

    /// Splitters from real mixing angles and phases: `t_j = cos(alpha_j) e^{i phi_j}`, `r_j = sin(alpha_j) e^{i chi_j}`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_angles(alpha1: f64, phi1: f64, chi1: f64, alpha2: f64, phi2: f64, chi2: f64, theta_i: f64, theta_ii: f64) -> Self {
        Self {
            t1: C64::from_polar(alpha1.cos(), phi1),
            r1: C64::from_polar(alpha1.sin(), chi1),
            t2: C64::from_polar(alpha2.cos(), phi2),
            r2: C64::from_polar(alpha2.sin(), chi2),
            theta_i,
            theta_ii,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (j, (t, r)) in [(self.t1, self.r1), (self.t2, self.r2)].into_iter().enumerate() {
            let norm = t.norm_sqr() + r.norm_sqr();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSplitters(format!(
                    "|t{0}|^2 + |r{0}|^2 = {norm}",
                    j + 1
                )));
            }
        }
        if !self.theta_i.is_finite() || !self.theta_ii.is_finite() {
            return Err(Error::InvalidSplitters("arm phases must be finite".into()));
        }
        Ok(())
    }

    /// The interference coefficient `t1 r1* r2* t2* e^{i(theta_I - theta_II)}`.
    pub fn interference(&self) -> C64 {
        self.t1 * self.r1.conj() * self.r2.conj() * self.t2.conj() * C64::from_polar(1.0, self.theta_i - self.theta_ii)
    }

    /// Amplitude for a probe taking `path` to reach detector `outcome`.
    pub fn path_amplitude(&self, outcome: Outcome, path: Path) -> C64 {
        let arm_i = self.t1 * C64::from_polar(1.0, self.theta_i);
        let arm_ii = self.r1 * C64::from_polar(1.0, self.theta_ii);
        match (outcome, path) {
            (Outcome::Right, Path::I) => self.r2.conj() * arm_i,
            (Outcome::Right, Path::II) => self.t2 * arm_ii,
            (Outcome::Up, Path::I) => -self.t2.conj() * arm_i,
            (Outcome::Up, Path::II) => self.r2 * arm_ii,
        }
    }

    /// Weights `(both below A, both above A)` of the diagonal path terms for an outcome.
    pub fn diagonal_weights(&self, outcome: Outcome) -> (f64, f64) {
        (
            self.path_amplitude(outcome, Path::I).norm_sqr(),
            self.path_amplitude(outcome, Path::II).norm_sqr(),
        )
    }

    /// Coefficient of the cross term with the ket below `A` and the bra above it.
    pub fn cross_weight(&self, outcome: Outcome) -> C64 {
        self.path_amplitude(outcome, Path::I) * self.path_amplitude(outcome, Path::II).conj()
    }
}

/// Charge distribution of the probe anyons.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    distribution: Vec<(Charge, f64)>,
}

impl ProbeSpec {
    pub fn new(model: &AnyonModel, distribution: Vec<(Charge, f64)>) -> Result<Self> {
        model.validate_distribution(&distribution)?;
        let mut merged: Vec<(Charge, f64)> = Vec::new();
        for (b, p) in distribution {
            match merged.iter_mut().find(|(c, _)| *c == b) {
                Some(entry) => entry.1 += p,
                None => merged.push((b, p)),
            }
        }
        merged.retain(|&(_, p)| p > 0.0);
        merged.sort_by_key(|&(b, _)| b);
        Ok(Self { distribution: merged })
    }

    /// A probe of definite charge `b`.
    pub fn single(model: &AnyonModel, b: Charge) -> Result<Self> {
        Self::new(model, vec![(b, 1.0)])
    }

    pub fn vacuum() -> Self {
        Self {
            distribution: vec![(VACUUM, 1.0)],
        }
    }

    pub fn distribution(&self) -> &[(Charge, f64)] {
        &self.distribution
    }

    /// `M_{aB}` for every charge `a`.
    pub fn monodromy(&self, model: &AnyonModel) -> Vec<C64> {
        model
            .charges()
            .map(|a| self.distribution.iter().map(|&(b, p)| model.monodromy(a, b) * p).sum())
            .collect()
    }

    /// `sum_b Pr(b) phase(b) M_{ab}` for every charge `a`.
    pub fn weighted_monodromy(&self, model: &AnyonModel, phase: impl Fn(Charge) -> C64) -> Vec<C64> {
        model
            .charges()
            .map(|a| self.distribution.iter().map(|&(b, p)| model.monodromy(a, b) * phase(b) * p).sum())
            .collect()
    }
}

/// How the probes passing each arm are wound around one another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistVariant {
    /// Twist operators on the probe bundle of each arm.
    Twist,
    /// Pure braids: the twist operator with each probe's own spin removed.
    PureBraid,
}

/// Twists applied to the lower arm (path I) and upper arm (path II).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSpec {
    pub m_lower: i64,
    pub m_upper: i64,
    pub variant: TwistVariant,
}

impl TwistSpec {
    pub const NONE: TwistSpec = TwistSpec {
        m_lower: 0,
        m_upper: 0,
        variant: TwistVariant::Twist,
    };

    pub fn new(m_lower: i64, m_upper: i64, variant: TwistVariant) -> Self {
        Self {
            m_lower,
            m_upper,
            variant,
        }
    }

    pub fn lower(m: i64) -> Self {
        Self::new(m, 0, TwistVariant::Twist)
    }

    pub fn is_trivial(&self) -> bool {
        self.m_lower == 0 && self.m_upper == 0
    }

    /// Extra phase on a probe of charge `b` taking `path` in the ket, for the pure-braid variant.
    pub fn probe_phase(&self, model: &AnyonModel, b: Charge, path: Path) -> C64 {
        match self.variant {
            TwistVariant::Twist => C64::new(1.0, 0.0),
            TwistVariant::PureBraid => {
                let m = match path {
                    Path::I => self.m_lower,
                    Path::II => self.m_upper,
                };
                crate::mtc::theta_pow(model.theta(b), -m)
            }
        }
    }
}

/// Everything that defines one interferometer run apart from the target state.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerConfig {
    pub splitters: BeamSplitterPair,
    pub probe: ProbeSpec,
    pub twist: TwistSpec,
    /// Suppression factor `Q` on both interference terms; 1 for an ideal device.
    pub visibility: f64,
}

impl InterferometerConfig {
    pub fn new(splitters: BeamSplitterPair, probe: ProbeSpec) -> Self {
        Self {
            splitters,
            probe,
            twist: TwistSpec::NONE,
            visibility: 1.0,
        }
    }

    pub fn with_twist(mut self, twist: TwistSpec) -> Self {
        self.twist = twist;
        self
    }

    pub fn with_visibility(mut self, q: f64) -> Self {
        self.visibility = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.splitters.validate()?;
        if !(self.visibility > 0.0 && self.visibility <= 1.0) {
            return Err(Error::InvalidParameter(format!("visibility {} is outside (0, 1]", self.visibility)));
        }
        Ok(())
    }
}
