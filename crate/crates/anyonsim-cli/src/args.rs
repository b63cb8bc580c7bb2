use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "anyonsim", version, about = "Simulate anyonic Mach-Zehnder interferometry experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write its results.
    Run(RunArgs),
    /// Minimum number of probes needed to resolve a probability gap.
    Estimate(EstimateArgs),
    /// List the bundled anyon models.
    Models,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "finite_n", alias = "finite-n")]
    FiniteN,
    Asymptotic,
    Sample,
    #[value(name = "fake_twist", alias = "fake-twist")]
    FakeTwist,
    Partial,
}

impl ModeArg {
    pub fn name(self) -> &'static str {
        match self {
            ModeArg::FiniteN => "finite_n",
            ModeArg::Asymptotic => "asymptotic",
            ModeArg::Sample => "sample",
            ModeArg::FakeTwist => "fake_twist",
            ModeArg::Partial => "partial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Twist operators on the probe bundle of each arm.
    Twist,
    /// Pure braids of the probes of each arm around one another.
    Purebraid,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Bundled model name or path to a model file.
    #[arg(long)]
    pub model: String,
    /// Qubit preset (zero, one, plus, minus, magic, mixed) or path to a target-state file.
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long)]
    pub n_probes: Option<usize>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub twist_lower: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub twist_upper: i64,
    #[arg(long, value_enum, default_value = "twist")]
    pub variant: VariantArg,
    /// Phase of the tuned interference coefficient in fake_twist mode (radians).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Visibility multiplying the interference terms.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cross-check the result against the explicit diagram evaluator.
    #[arg(long)]
    pub oracle_check: bool,
    /// Output directory; results go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `tuned[:PHI]` or `angles:ALPHA1,PHI1,CHI1,ALPHA2,PHI2,CHI2,THETA_I,THETA_II`.
    #[arg(long, default_value = "tuned:0", allow_hyphen_values = true)]
    pub splitters: String,
    /// Probe charge `LABEL` or mixture `LABEL:WEIGHT,...`; defaults to sigma or the first nontrivial charge.
    #[arg(long)]
    pub probe: Option<String>,
    /// Probe separation, recorded as an advisory field.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Target coherence length, recorded as an advisory field.
    #[arg(long = "coherence-length", alias = "lt")]
    pub coherence_length: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Two-sided significance level.
    #[arg(long)]
    pub alpha: f64,
    /// Probability gap to resolve.
    #[arg(long)]
    pub delta_p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
}
