//! Resolved experiment configuration: model, target, interferometer and what to compute.

use std::path::Path;

use anyonsim::interferometry::{BeamSplitterPair, InterferometerConfig, ProbeSpec, TargetState, TwistSpec, TwistVariant};
use anyonsim::ising::{encode_qubit, TopologicalQubit};
use anyonsim::mtc::{bundled, load_model_file, AnyonModel, VACUUM};
use anyonsim::C64;

use crate::args::{ModeArg, RunArgs, VariantArg};
use crate::error::{CliError, Context};

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Exact count distribution and post states for `N` probes.
    FiniteN { n_probes: usize },
    /// Outcome classes of infinitely many probes.
    Asymptotic,
    /// Monte Carlo histogram of the `N`-probe count distribution.
    Sample { n_probes: usize, trials: u64, seed: u64 },
    /// One probe through splitters tuned to `e^{i phi} / 4`, acting on an Ising qubit.
    FakeTwist { phi: f64 },
    /// `N` probes on a pure Ising qubit, tracked as a pure state.
    Partial { n_probes: usize },
}

/// Physical lengths bounding how many probes fit in one coherent run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    /// Probe separation.
    pub xi: f64,
    /// Coherence length of the target.
    pub coherence_length: f64,
}

impl Feasibility {
    pub fn max_probes(&self) -> f64 {
        self.coherence_length / self.xi
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// How the model was named on the command line.
    pub model_ref: String,
    pub model: AnyonModel,
    /// How the state was named on the command line.
    pub state_ref: String,
    pub state: TargetState,
    pub interferometer: InterferometerConfig,
    pub mode: Mode,
    pub oracle_check: bool,
    pub feasibility: Option<Feasibility>,
}

impl ExperimentConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        let model = load_model(&args.model)?;
        let state = load_state(&model, &args.state)?;
        let splitters = parse_splitters(&args.splitters)?;
        let probe = match &args.probe {
            Some(spec) => parse_probe(&model, spec)?,
            None => default_probe(&model)?,
        };
        let variant = match args.variant {
            VariantArg::Twist => TwistVariant::Twist,
            VariantArg::Purebraid => TwistVariant::PureBraid,
        };
        let interferometer = InterferometerConfig::new(splitters, probe)
            .with_twist(TwistSpec::new(args.twist_lower, args.twist_upper, variant))
            .with_visibility(args.q);
        interferometer.validate().context(|| "--splitters/--q".into())?;
        let probes = || match args.n_probes {
            Some(0) => Err(CliError::Config("--n-probes must be at least 1".into())),
            Some(n) => Ok(n),
            None => Err(CliError::Config(format!("--mode {} needs --n-probes", args.mode.name()))),
        };
        let mode = match args.mode {
            ModeArg::FiniteN => Mode::FiniteN { n_probes: probes()? },
            ModeArg::Asymptotic => Mode::Asymptotic,
            ModeArg::Sample => Mode::Sample {
                n_probes: probes()?,
                trials: args.trials,
                seed: args.seed,
            },
            ModeArg::FakeTwist => Mode::FakeTwist { phi: args.phi },
            ModeArg::Partial => Mode::Partial { n_probes: probes()? },
        };
        let feasibility = match (args.xi, args.coherence_length) {
            (Some(xi), Some(coherence_length)) if xi > 0.0 && coherence_length > 0.0 => Some(Feasibility { xi, coherence_length }),
            (None, None) => None,
            _ => return Err(CliError::Config("--xi and --coherence-length must both be given and positive".into())),
        };
        Ok(Self {
            model_ref: args.model.clone(),
            model,
            state_ref: args.state.clone(),
            state,
            interferometer,
            mode,
            oracle_check: args.oracle_check,
            feasibility,
        })
    }
}

/// A bundled model name, or a path to a model file.
pub fn load_model(reference: &str) -> Result<AnyonModel, CliError> {
    if Path::new(reference).is_file() {
        return load_model_file(reference).context(|| format!("--model {reference}"));
    }
    bundled(reference).context(|| format!("--model {reference}"))
}

/// Qubit presets for Ising-type models.
pub const QUBIT_PRESETS: [&str; 6] = ["zero", "one", "plus", "minus", "magic", "mixed"];

fn preset_qubit(name: &str) -> Option<TopologicalQubit> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| C64::new(x, 0.0);
    match name {
        "zero" => Some(TopologicalQubit::zero()),
        "one" => TopologicalQubit::pure(re(0.0), re(1.0)).ok(),
        "plus" => Some(TopologicalQubit::plus()),
        "minus" => TopologicalQubit::pure(re(h), re(-h)).ok(),
        "magic" => Some(TopologicalQubit::magic()),
        "mixed" => Some(TopologicalQubit::maximally_mixed()),
        _ => None,
    }
}

/// A qubit preset name, or a path to a state file in the target-state text format.
pub fn load_state(model: &AnyonModel, reference: &str) -> Result<TargetState, CliError> {
    let context = || format!("--state {reference}");
    let state = if let Some(qubit) = preset_qubit(reference) {
        encode_qubit(model, &qubit).context(context)?
    } else {
        let text = std::fs::read_to_string(reference).map_err(|source| CliError::Io {
            path: reference.into(),
            source,
        })?;
        TargetState::from_text(model, &text).context(context)?
    };
    state.validate(model).context(context)?;
    Ok(state)
}

fn parse_numbers(text: &str, expected: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("{what}: {e}")))?;
    if values.len() != expected {
        return Err(CliError::Config(format!("{what}: expected {expected} numbers, got {}", values.len())));
    }
    Ok(values)
}

/// `tuned:PHI` or `angles:ALPHA1,PHI1,CHI1,ALPHA2,PHI2,CHI2,THETA_I,THETA_II` (radians).
pub fn parse_splitters(text: &str) -> Result<BeamSplitterPair, CliError> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "tuned" if rest.is_empty() => Ok(BeamSplitterPair::tuned(0.0)),
        "tuned" => Ok(BeamSplitterPair::tuned(parse_numbers(rest, 1, "--splitters tuned")?[0])),
        "angles" => {
            let v = parse_numbers(rest, 8, "--splitters angles")?;
            Ok(BeamSplitterPair::from_angles(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]))
        }
        _ => Err(CliError::Config(format!("--splitters `{text}`: expected tuned[:PHI] or angles:..."))),
    }
}

/// `LABEL` for a single charge or `LABEL:WEIGHT,LABEL:WEIGHT,...` for a mixture.
pub fn parse_probe(model: &AnyonModel, text: &str) -> Result<ProbeSpec, CliError> {
    let context = || format!("--probe {text}");
    let mut distribution = Vec::new();
    for part in text.split(',') {
        let (label, weight) = match part.split_once(':') {
            Some((label, weight)) => {
                let w = weight.trim().parse::<f64>().map_err(|e| CliError::Config(format!("--probe {text}: {e}")))?;
                (label.trim(), w)
            }
            None => (part.trim(), 1.0),
        };
        distribution.push((model.charge(label).context(context)?, weight));
    }
    ProbeSpec::new(model, distribution).context(context)
}

/// `sigma` when the model has one, otherwise the first nontrivial charge.
pub fn default_probe(model: &AnyonModel) -> Result<ProbeSpec, CliError> {
    let charge = match model.charge("sigma") {
        Ok(c) => c,
        Err(_) if model.rank() > 1 => VACUUM + 1,
        Err(_) => VACUUM,
    };
    ProbeSpec::single(model, charge).context(|| "default probe".into())
}
