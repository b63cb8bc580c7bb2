//! Dispatches an [`ExperimentConfig`] to the simulation modules and checks what comes back.

use std::collections::BTreeMap;
use std::time::Instant;

use anyonsim::interferometry::{
    asymptotic_outcomes, distinguishability_classes, generalized_asymptotic, multi_probe_distribution, multi_probe_outcomes, single_probe_update, BasisLabel,
    DistinguishabilityClass, InterferometerConfig, Layout, Outcome, OutcomeLabel, OutcomeReport, ProbeSpec, TargetState, TwistSpec,
};
use anyonsim::ising::{decode_qubit, encode_qubit, partial_interferometry, IsingCharges, PhaseGateSpec, TopologicalQubit};
use anyonsim::mtc::AnyonModel;
use anyonsim::oracle::{omega_tau_form, oracle_post_states};
use anyonsim::twisted::{twisted_asymptotic, twisted_classes, twisted_distribution, twisted_outcomes};
use anyonsim::{Error, C64};
use serde::Serialize;

use crate::error::{CliError, Context};
use crate::experiment::{ExperimentConfig, Mode};
use crate::sampling::sample_counts;

/// Schema tag of the structured result document.
pub const RUN_SCHEMA: &str = "anyonsim.run.v1";
/// Allowed deviation of a probability table's total from one.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;
/// Allowed entrywise deviation between module results and the diagram oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub schema: &'static str,
    pub metadata: Metadata,
    pub outcomes: Vec<OutcomeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advisory: Option<Advisory>,
    /// Wall-clock timings; kept out of the result document so it stays reproducible.
    #[serde(skip)]
    pub timings: Timings,
}

impl RunResult {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// The record whose outcome column equals `outcome`.
    pub fn outcome(&self, outcome: &str) -> Option<&OutcomeRecord> {
        self.outcomes.iter().find(|o| o.outcome == outcome)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub generator: String,
    pub model: String,
    pub state: String,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_probes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    pub visibility_q: f64,
    pub splitters: SplitterRecord,
    pub probe: Vec<(String, f64)>,
    pub twist: TwistRecord,
    pub tolerances: Tolerances,
    pub tables: BTreeMap<&'static str, &'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitterRecord {
    pub t1: [f64; 2],
    pub r1: [f64; 2],
    pub t2: [f64; 2],
    pub r2: [f64; 2],
    pub theta_i: f64,
    pub theta_ii: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistRecord {
    pub lower: i64,
    pub upper: i64,
    pub variant: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub probability_sum: f64,
    pub oracle: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Timings {
    pub compute_seconds: f64,
    pub oracle_seconds: f64,
}

/// One row of the outcome table, with the post state when the run produced one.
#[derive(Debug, Clone, Serialize)]
pub struct OutcomeRecord {
    /// `n` for counts, `+`-joined charge labels for classes, `right`/`up` for single probes.
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charges: Option<Vec<String>>,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateRecord {
    pub layout: Layout,
    pub entries: Vec<EntryRecord>,
    /// Density matrix `[[re, im]; 2]` rows on `{|0>, |1>}` when the state is an Ising qubit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit: Option<[[[f64; 2]; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryRecord {
    pub ket: Vec<String>,
    pub bra: Vec<String>,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub charges: Vec<String>,
    pub p_right: f64,
    pub origin: anyonsim::interferometry::ClassOrigin,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub method: &'static str,
    pub max_probability_deviation: f64,
    pub max_state_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Advisory {
    pub xi: f64,
    pub coherence_length: f64,
    /// `L_t / xi`, the most probes that fit within the coherence length.
    pub max_probes: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_bound: Option<bool>,
}

fn complex_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn label_record(model: &AnyonModel, layout: Layout, l: &BasisLabel) -> Vec<String> {
    let charges = match layout {
        Layout::Simple => vec![l.a, l.c1, l.f],
        Layout::Generalized => vec![l.c2, l.a, l.g, l.c1, l.f],
    };
    charges.into_iter().map(|c| model.label(c).to_string()).collect()
}

fn qubit_record(qubit: &TopologicalQubit) -> [[[f64; 2]; 2]; 2] {
    let rho = qubit.rho();
    [[complex_pair(rho[(0, 0)]), complex_pair(rho[(0, 1)])], [complex_pair(rho[(1, 0)]), complex_pair(rho[(1, 1)])]]
}

/// Serializable form of a target state; entries below `1e-14` are dropped.
pub fn state_record(model: &AnyonModel, state: &TargetState) -> StateRecord {
    let layout = state.layout();
    let entries = state
        .pruned(1e-14)
        .entries()
        .iter()
        .map(|((ket, bra), v)| EntryRecord {
            ket: label_record(model, layout, ket),
            bra: label_record(model, layout, bra),
            value: complex_pair(*v),
        })
        .collect();
    let qubit = IsingCharges::of(model)
        .ok()
        .and_then(|_| decode_qubit(model, state).ok())
        .map(|q| qubit_record(&q));
    StateRecord { layout, entries, qubit }
}

fn charge_labels(model: &AnyonModel, charges: &[usize]) -> Vec<String> {
    charges.iter().map(|&c| model.label(c).to_string()).collect()
}

fn report_record(model: &AnyonModel, report: &OutcomeReport) -> OutcomeRecord {
    let (outcome, count, charges) = match &report.label {
        OutcomeLabel::Count(n) => (n.to_string(), Some(*n), None),
        OutcomeLabel::Class { charges, .. } => {
            let labels = charge_labels(model, charges);
            (labels.join("+"), None, Some(labels))
        }
    };
    OutcomeRecord {
        outcome,
        count,
        charges,
        probability: report.probability,
        sampled: None,
        state: Some(state_record(model, &report.post_state)),
    }
}

fn class_records(model: &AnyonModel, classes: Vec<DistinguishabilityClass>) -> Vec<ClassRecord> {
    classes
        .into_iter()
        .map(|k| ClassRecord {
            charges: charge_labels(model, &k.charges),
            p_right: k.p_right,
            origin: k.origin,
        })
        .collect()
}

fn outcome_name(s: Outcome) -> &'static str {
    match s {
        Outcome::Right => "right",
        Outcome::Up => "up",
    }
}

fn metadata(config: &ExperimentConfig) -> Metadata {
    let ic = &config.interferometer;
    let s = &ic.splitters;
    let (mode, n_probes, trials, seed, phi) = match config.mode {
        Mode::FiniteN { n_probes } => ("finite_n", Some(n_probes), None, None, None),
        Mode::Asymptotic => ("asymptotic", None, None, None, None),
        Mode::Sample { n_probes, trials, seed } => ("sample", Some(n_probes), Some(trials), Some(seed), None),
        Mode::FakeTwist { phi } => ("fake_twist", Some(1), None, None, Some(phi)),
        Mode::Partial { n_probes } => ("partial", Some(n_probes), None, None, None),
    };
    let splitters = match config.mode {
        Mode::FakeTwist { phi } => PhaseGateSpec::new(phi).splitters,
        _ => *s,
    };
    let probe = match config.mode {
        Mode::FakeTwist { .. } | Mode::Partial { .. } => vec![("sigma".to_string(), 1.0)],
        _ => ic.probe.distribution().iter().map(|&(b, p)| (config.model.label(b).to_string(), p)).collect(),
    };
    let mut tables = BTreeMap::new();
    tables.insert(crate::report::OUTCOMES_FILE, crate::report::OUTCOMES_SCHEMA);
    Metadata {
        generator: format!("anyonsim {}", env!("CARGO_PKG_VERSION")),
        model: config.model_ref.clone(),
        state: config.state_ref.clone(),
        mode,
        n_probes,
        trials,
        seed,
        rng: seed.map(|_| "chacha20"),
        phi,
        visibility_q: ic.visibility,
        splitters: SplitterRecord {
            t1: complex_pair(splitters.t1),
            r1: complex_pair(splitters.r1),
            t2: complex_pair(splitters.t2),
            r2: complex_pair(splitters.r2),
            theta_i: splitters.theta_i,
            theta_ii: splitters.theta_ii,
        },
        probe,
        twist: TwistRecord {
            lower: ic.twist.m_lower,
            upper: ic.twist.m_upper,
            variant: match ic.twist.variant {
                anyonsim::interferometry::TwistVariant::Twist => "twist",
                anyonsim::interferometry::TwistVariant::PureBraid => "purebraid",
            },
        },
        tolerances: Tolerances {
            probability_sum: PROBABILITY_SUM_TOLERANCE,
            oracle: ORACLE_TOLERANCE,
        },
        tables,
    }
}

/// Runs the experiment, validates its probability table and, if asked, cross-checks it against the oracle.
pub fn run(config: &ExperimentConfig) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let (outcomes, classes) = compute(config)?;
    let compute_seconds = started.elapsed().as_secs_f64();

    let mut result = RunResult {
        schema: RUN_SCHEMA,
        metadata: metadata(config),
        outcomes,
        classes,
        oracle: None,
        advisory: config.feasibility.map(|f| Advisory {
            xi: f.xi,
            coherence_length: f.coherence_length,
            max_probes: f.max_probes(),
            within_bound: match config.mode {
                Mode::FiniteN { n_probes } | Mode::Sample { n_probes, .. } | Mode::Partial { n_probes } => Some(n_probes as f64 <= f.max_probes()),
                Mode::FakeTwist { .. } => Some(f.max_probes() >= 1.0),
                Mode::Asymptotic => None,
            },
        }),
        timings: Timings {
            compute_seconds,
            oracle_seconds: 0.0,
        },
    };

    let total = result.total_probability();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE || result.outcomes.iter().any(|o| !o.probability.is_finite()) {
        return Err(CliError::Validation(format!("outcome probabilities sum to {total}")));
    }

    if config.oracle_check {
        let started = Instant::now();
        let summary = oracle_check(config, &result)?;
        result.timings.oracle_seconds = started.elapsed().as_secs_f64();
        if summary.max_probability_deviation > ORACLE_TOLERANCE || summary.max_state_deviation > ORACLE_TOLERANCE {
            return Err(CliError::Validation(format!(
                "oracle disagrees: probability deviation {:.3e}, state deviation {:.3e}",
                summary.max_probability_deviation, summary.max_state_deviation
            )));
        }
        result.oracle = Some(summary);
    }
    Ok(result)
}

type Computed = (Vec<OutcomeRecord>, Option<Vec<ClassRecord>>);

fn compute(config: &ExperimentConfig) -> Result<Computed, CliError> {
    match config.mode {
        Mode::FiniteN { n_probes } => finite_n(config, n_probes).map(|rows| (rows, None)),
        Mode::Sample { n_probes, trials, seed } => sample(config, n_probes, trials, seed).map(|rows| (rows, None)),
        Mode::Asymptotic => asymptotic(config),
        Mode::FakeTwist { phi } => fake_twist(config, phi).map(|rows| (rows, None)),
        Mode::Partial { n_probes } => partial(config, n_probes).map(|rows| (rows, None)),
    }
}

fn is_twisted(config: &ExperimentConfig) -> bool {
    !config.interferometer.twist.is_trivial()
}

/// `Pr_N(n)` for every count.
fn distribution(config: &ExperimentConfig, n_probes: usize) -> Result<Vec<f64>, CliError> {
    let (model, target, ic) = (&config.model, &config.state, &config.interferometer);
    let context = || format!("{n_probes}-probe distribution");
    if is_twisted(config) {
        twisted_distribution(model, target, ic, n_probes).context(context)
    } else {
        multi_probe_distribution(model, target, ic, n_probes).context(context)
    }
}

fn count_rows(distribution: &[f64]) -> Vec<OutcomeRecord> {
    distribution
        .iter()
        .enumerate()
        .map(|(n, &p)| OutcomeRecord {
            outcome: n.to_string(),
            count: Some(n),
            charges: None,
            probability: p,
            sampled: None,
            state: None,
        })
        .collect()
}

fn finite_n(config: &ExperimentConfig, n_probes: usize) -> Result<Vec<OutcomeRecord>, CliError> {
    let (model, target, ic) = (&config.model, &config.state, &config.interferometer);
    let mut rows = count_rows(&distribution(config, n_probes)?);
    let context = || format!("{n_probes}-probe post states");
    let reports = if is_twisted(config) {
        twisted_outcomes(model, target, ic, n_probes).context(context)?
    } else {
        multi_probe_outcomes(model, target, ic, n_probes).context(context)?
    };
    for report in &reports {
        if let OutcomeLabel::Count(n) = report.label {
            rows[n].state = Some(state_record(model, &report.post_state));
        }
    }
    Ok(rows)
}

fn sample(config: &ExperimentConfig, n_probes: usize, trials: u64, seed: u64) -> Result<Vec<OutcomeRecord>, CliError> {
    let distribution = distribution(config, n_probes)?;
    let histogram = sample_counts(&distribution, trials, seed)?;
    let mut rows = count_rows(&distribution);
    for (row, count) in rows.iter_mut().zip(histogram) {
        row.sampled = Some(count);
    }
    Ok(rows)
}

fn asymptotic(config: &ExperimentConfig) -> Result<Computed, CliError> {
    let (model, target, ic) = (&config.model, &config.state, &config.interferometer);
    let context = || "asymptotic outcomes".to_string();
    let (reports, classes) = if is_twisted(config) {
        (twisted_asymptotic(model, target, ic).context(context)?, twisted_classes(model, ic))
    } else {
        let reports = match target.layout() {
            Layout::Simple => asymptotic_outcomes(model, target, ic),
            Layout::Generalized => generalized_asymptotic(model, target, ic),
        }
        .context(context)?;
        (reports, distinguishability_classes(model, ic))
    };
    let rows = reports.iter().map(|r| report_record(model, r)).collect();
    Ok((rows, Some(class_records(model, classes))))
}

fn require_untwisted(config: &ExperimentConfig, mode: &str) -> Result<(), CliError> {
    if is_twisted(config) {
        return Err(CliError::Config(format!("--mode {mode} does not take twists")));
    }
    Ok(())
}

/// Interferometer of a single tuned `sigma` probe acting as a phase gate.
fn phase_gate_config(config: &ExperimentConfig, phi: f64) -> Result<InterferometerConfig, CliError> {
    let model = &config.model;
    let spec = PhaseGateSpec::new(phi);
    spec.validate().context(|| "--phi".into())?;
    let sigma = IsingCharges::of(model).context(|| "--mode fake_twist".into())?.sigma;
    let probe = ProbeSpec::single(model, sigma).context(|| "sigma probe".into())?;
    Ok(InterferometerConfig::new(spec.splitters, probe).with_visibility(config.interferometer.visibility))
}

fn fake_twist(config: &ExperimentConfig, phi: f64) -> Result<Vec<OutcomeRecord>, CliError> {
    require_untwisted(config, "fake_twist")?;
    let model = &config.model;
    let ic = phase_gate_config(config, phi)?;
    decode_qubit(model, &config.state).context(|| "--state must be an Ising qubit".into())?;
    let mut rows = Vec::new();
    for s in Outcome::BOTH {
        match single_probe_update(model, &config.state, &ic, s) {
            Ok((probability, post)) => rows.push(OutcomeRecord {
                outcome: outcome_name(s).into(),
                count: Some(usize::from(s == Outcome::Right)),
                charges: None,
                probability,
                sampled: None,
                state: Some(state_record(model, &post)),
            }),
            Err(Error::ZeroProbabilityOutcome { .. }) => {}
            Err(e) => return Err(CliError::Module { context: "single probe".into(), source: e }),
        }
    }
    Ok(rows)
}

/// Amplitudes of a pure qubit, fixed by making the larger component real and positive.
fn pure_amplitudes(qubit: &TopologicalQubit) -> Result<[C64; 2], CliError> {
    let rho = qubit.rho();
    let purity = (rho * rho).trace().re;
    if (purity - 1.0).abs() > 1e-9 {
        return Err(CliError::Config(format!("--mode partial needs a pure qubit (purity {purity})")));
    }
    let k = if rho[(0, 0)].re >= rho[(1, 1)].re { 0 } else { 1 };
    let scale = rho[(k, k)].re.sqrt();
    Ok([rho[(0, k)] / scale, rho[(1, k)] / scale])
}

fn partial(config: &ExperimentConfig, n_probes: usize) -> Result<Vec<OutcomeRecord>, CliError> {
    require_untwisted(config, "partial")?;
    if config.interferometer.visibility != 1.0 {
        return Err(CliError::Config("--mode partial tracks pure states and needs --q 1".into()));
    }
    let model = &config.model;
    let qubit = decode_qubit(model, &config.state).context(|| "--state must be an Ising qubit".into())?;
    let psi = pure_amplitudes(&qubit)?;
    let splitters = &config.interferometer.splitters;
    let mut rows = Vec::new();
    for n in 0..=n_probes {
        match partial_interferometry(model, psi, splitters, n_probes, n) {
            Ok((probability, amplitudes)) => {
                let post = TopologicalQubit::pure(amplitudes[0], amplitudes[1]).context(|| "post-measurement qubit".into())?;
                let state = encode_qubit(model, &post).context(|| "post-measurement qubit".into())?;
                rows.push(OutcomeRecord {
                    outcome: n.to_string(),
                    count: Some(n),
                    charges: None,
                    probability,
                    sampled: None,
                    state: Some(state_record(model, &state)),
                });
            }
            Err(Error::ZeroProbabilityOutcome { .. }) => {}
            Err(e) => return Err(CliError::Module { context: format!("count {n}"), source: e }),
        }
    }
    Ok(rows)
}

/// Count probabilities and one post state per count, from explicit enumeration of outcome strings.
fn oracle_counts(model: &AnyonModel, target: &TargetState, ic: &InterferometerConfig, n_probes: usize) -> Result<Vec<(f64, Option<TargetState>)>, CliError> {
    let runs = oracle_post_states(model, target, ic, n_probes, true).context(|| "--oracle-check".into())?;
    let mut counts: Vec<(f64, Option<TargetState>)> = vec![(0.0, None); n_probes + 1];
    for run in runs {
        let n = run.outcomes.iter().filter(|&&s| s == Outcome::Right).count();
        counts[n].0 += run.probability;
        if counts[n].1.is_none() && run.probability > 1e-12 {
            counts[n].1 = run.post_state;
        }
    }
    Ok(counts)
}

fn state_deviation(model: &AnyonModel, record: &StateRecord, expected: &TargetState) -> f64 {
    let expected = state_record(model, &expected.pruned(1e-12));
    let mut values: BTreeMap<(Vec<String>, Vec<String>), (C64, C64)> = BTreeMap::new();
    for e in &record.entries {
        values.entry((e.ket.clone(), e.bra.clone())).or_default().0 = C64::new(e.value[0], e.value[1]);
    }
    for e in &expected.entries {
        values.entry((e.ket.clone(), e.bra.clone())).or_default().1 = C64::new(e.value[0], e.value[1]);
    }
    values.values().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn compare_counts(model: &AnyonModel, rows: &[OutcomeRecord], oracle: &[(f64, Option<TargetState>)]) -> (f64, f64) {
    let mut dp: f64 = 0.0;
    let mut ds: f64 = 0.0;
    for (n, (p, state)) in oracle.iter().enumerate() {
        let row = rows.iter().find(|r| r.count == Some(n));
        dp = dp.max((row.map_or(0.0, |r| r.probability) - p).abs());
        if let (Some(record), Some(expected)) = (row.and_then(|r| r.state.as_ref()), state) {
            ds = ds.max(state_deviation(model, record, expected));
        }
    }
    (dp, ds)
}

fn oracle_check(config: &ExperimentConfig, result: &RunResult) -> Result<OracleSummary, CliError> {
    let (model, target, ic) = (&config.model, &config.state, &config.interferometer);
    let rows = &result.outcomes;
    let (method, (dp, ds)) = match config.mode {
        Mode::FiniteN { n_probes } | Mode::Sample { n_probes, .. } => ("enumerate_probe_paths", compare_counts(model, rows, &oracle_counts(model, target, ic, n_probes)?)),
        Mode::FakeTwist { phi } => {
            let gate = phase_gate_config(config, phi)?;
            ("enumerate_probe_paths", compare_counts(model, rows, &oracle_counts(model, target, &gate, 1)?))
        }
        Mode::Partial { n_probes } => {
            let qubit = decode_qubit(model, target).context(|| "--state".into())?;
            let pure = encode_qubit(model, &TopologicalQubit::pure(pure_amplitudes(&qubit)?[0], pure_amplitudes(&qubit)?[1]).context(|| "--state".into())?)
                .context(|| "--state".into())?;
            let sigma = IsingCharges::of(model).context(|| "--state".into())?.sigma;
            let probe = ProbeSpec::single(model, sigma).context(|| "sigma probe".into())?;
            let sigma_config = InterferometerConfig::new(ic.splitters, probe).with_twist(TwistSpec::NONE);
            ("enumerate_probe_paths", compare_counts(model, rows, &oracle_counts(model, &pure, &sigma_config, n_probes)?))
        }
        Mode::Asymptotic => {
            let mut ds: f64 = 0.0;
            for row in rows {
                let (Some(labels), Some(record)) = (&row.charges, &row.state) else { continue };
                let class: Vec<usize> = labels.iter().map(|l| model.charge(l)).collect::<Result<_, _>>().context(|| "class labels".into())?;
                let expected = omega_tau_form(model, target, &class, ic).context(|| "--oracle-check".into())?;
                ds = ds.max(state_deviation(model, record, &expected));
            }
            ("omega_tau_form", (0.0, ds))
        }
    };
    Ok(OracleSummary {
        method,
        max_probability_deviation: dp,
        max_state_deviation: ds,
    })
}
