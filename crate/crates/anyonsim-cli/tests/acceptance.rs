//! Acceptance checks, one line per criterion. Exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use anyonsim::interferometry::{
    asymptotic_outcomes, binomial_weight, channel_weights, distinguishability_classes, generalized_asymptotic, multi_probe_distribution, multi_probe_outcomes,
    multi_probe_update, probe_factor, single_probe_update, BasisLabel, BeamSplitterPair, InterferometerConfig, Layout, Outcome, OutcomeLabel, OutcomeReport, Path,
    ProbeSpec, TargetState, TwistSpec, TwistVariant,
};
use anyonsim::ising::{encode_qubit, fake_twist_single_probe, m_odd_protocol, partial_interferometry, PhaseGateSpec, TopologicalQubit};
use anyonsim::mtc::{bundled, ising, AnyonModel, Charge, Z2GradedModel};
use anyonsim::twisted::{twisted_asymptotic, twisted_distribution, twisted_outcomes};
use anyonsim::C64;
use anyonsim_cli::estimate_sample_size;
use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I: Charge = 0;
const SIGMA: Charge = 1;
const PSI: Charge = 2;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn random_qubit(rng: &mut impl Rng) -> TopologicalQubit {
    let g = Matrix2::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = g * g.adjoint();
    TopologicalQubit::new(rho / rho.trace()).expect("positive matrix")
}

fn random_state(model: &AnyonModel, layout: Layout, rng: &mut impl Rng) -> TargetState {
    let all: Vec<Charge> = model.charges().collect();
    TargetState::random(model, layout, [&all, &all, &all], || rng.gen_range(-1.0..1.0)).expect("random state")
}

fn random_splitters(rng: &mut impl Rng) -> BeamSplitterPair {
    let mut mixing = || rng.gen_range(0.1..1.4);
    let (a1, a2) = (mixing(), mixing());
    let mut angle = || rng.gen_range(-3.0..3.0);
    BeamSplitterPair::from_angles(a1, angle(), angle(), a2, angle(), angle(), angle(), angle())
}

fn generic_splitters() -> BeamSplitterPair {
    BeamSplitterPair::from_angles(0.7, 0.3, -0.4, 1.1, 0.9, 0.2, 0.5, -0.8)
}

fn mixed_probe(model: &AnyonModel) -> ProbeSpec {
    ProbeSpec::new(model, vec![(model.rank() - 1, 0.6), (1, 0.4)]).expect("probe distribution")
}

fn sigma_config(splitters: BeamSplitterPair) -> InterferometerConfig {
    InterferometerConfig::new(splitters, ProbeSpec::single(&ising().unwrap(), SIGMA).unwrap())
}

fn class_charges(report: &OutcomeReport) -> Vec<Charge> {
    match &report.label {
        OutcomeLabel::Class { charges, .. } => charges.clone(),
        OutcomeLabel::Count(n) => vec![*n],
    }
}

/// `|<psi|rho|psi>|` for a pure reference state.
fn fidelity(qubit: &TopologicalQubit, psi: [C64; 2]) -> f64 {
    let v = nalgebra::Vector2::new(psi[0], psi[1]);
    (v.adjoint() * qubit.rho() * v)[(0, 0)].re
}

fn magic_amplitudes() -> [C64; 2] {
    [re((PI / 8.0).cos()), C64::new(0.0, -(PI / 8.0).sin())]
}

fn flipped_magic_amplitudes() -> [C64; 2] {
    let [a, b] = magic_amplitudes();
    [b, a]
}

fn ising_table() -> Check {
    let started = Instant::now();
    let m = ok(bundled("ising"))?;
    let elapsed = started.elapsed();
    let s = DMatrix::from_row_slice(3, 3, &[1.0, SQRT_2, 1.0, SQRT_2, 0.0, -SQRT_2, 1.0, -SQRT_2, 1.0]).map(|x| re(x / 2.0));
    let mono = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 1.0, 1.0, 0.0, -1.0, 1.0, -1.0, 1.0]).map(re);
    let ds = (m.s_matrix() - &s).camax();
    let dm = (m.monodromy_matrix() - &mono).camax();
    ensure!(ds <= 1e-12, "S deviates by {ds:.2e}");
    ensure!(dm <= 1e-12, "M deviates by {dm:.2e}");
    ensure!((m.quantum_dimension(SIGMA) - SQRT_2).abs() <= 1e-12, "d_sigma = {}", m.quantum_dimension(SIGMA));
    ensure!((m.theta(SIGMA) - C64::from_polar(1.0, PI / 8.0)).norm() <= 1e-12, "theta_sigma = {}", m.theta(SIGMA));
    ensure!((m.theta(PSI) + 1.0).norm() <= 1e-12, "theta_psi = {}", m.theta(PSI));
    ensure!(elapsed < Duration::from_secs(1), "loading took {elapsed:?}");
    Ok(format!("max |dS| {ds:.1e}, max |dM| {dm:.1e}, load {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn tau_coefficients() -> Check {
    let m = ok(ising())?;
    let mut worst: f64 = 0.0;
    for k in 1..=16i64 {
        let theta_m = C64::from_polar(1.0, k as f64 * PI / 8.0);
        let row = m.tau_coefficients(k);
        let expected = if k % 2 == 1 {
            [theta_m / 2.0, re(FRAC_1_SQRT_2), -theta_m / 2.0]
        } else {
            let angle = k as f64 * PI / 16.0;
            let half = C64::from_polar(1.0, angle);
            let closed = [half * angle.cos(), re(0.0), half * C64::new(0.0, -angle.sin())];
            worst = worst.max((closed[0] - (1.0 + theta_m) / 2.0).norm()).max((closed[2] - (1.0 - theta_m) / 2.0).norm());
            closed
        };
        for x in 0..3 {
            worst = worst.max((row[x] - expected[x]).norm());
        }
    }
    ensure!(worst <= 1e-12, "max deviation {worst:.2e}");
    Ok(format!("m = 1..16, max deviation {worst:.1e}"))
}

fn tuned_single_probe() -> Check {
    let model = ok(ising())?;
    let config = sigma_config(BeamSplitterPair::tuned(0.0));
    let p_vac = ok(probe_factor(&model, &config, Outcome::Right, I, I, I))?;
    let p_psi = ok(probe_factor(&model, &config, Outcome::Right, PSI, PSI, I))?;
    ensure!((p_vac - 1.0).norm() <= 1e-12, "p_III = {p_vac}");
    ensure!(p_psi.norm() <= 1e-12, "p_psipsiI = {p_psi}");
    let zero = ok(encode_qubit(&model, &TopologicalQubit::zero()))?;
    let one = ok(encode_qubit(&model, &ok(TopologicalQubit::pure(re(0.0), re(1.0)))?))?;
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let qubit = random_qubit(&mut rng);
        let target = ok(encode_qubit(&model, &qubit))?;
        let (p0, post0) = ok(single_probe_update(&model, &target, &config, Outcome::Right))?;
        let (p1, post1) = ok(single_probe_update(&model, &target, &config, Outcome::Up))?;
        worst = worst
            .max((p0 - qubit.rho()[(0, 0)].re).abs())
            .max((p1 - qubit.rho()[(1, 1)].re).abs())
            .max(post0.max_abs_diff(&zero))
            .max(post1.max_abs_diff(&one));
    }
    ensure!(worst <= 1e-10, "projection deviates by {worst:.2e}");
    Ok(format!("|p_III - 1| {:.1e}, |p_psipsiI| {:.1e}, 50 random qubits within {worst:.1e}", (p_vac - 1.0).norm(), p_psi.norm()))
}

fn magic_state() -> Check {
    let started = Instant::now();
    let model = ok(ising())?;
    let plus = TopologicalQubit::plus();
    let config = sigma_config(BeamSplitterPair::tuned(0.0)).with_twist(TwistSpec::new(2, 0, TwistVariant::Twist));
    let target = ok(encode_qubit(&model, &plus))?;
    let reports = ok(twisted_asymptotic(&model, &target, &config))?;
    ensure!(reports.len() == 2, "{} outcomes", reports.len());
    let mut worst_p: f64 = 0.0;
    let mut worst_f: f64 = 1.0;
    for (report, psi) in reports.iter().zip([magic_amplitudes(), flipped_magic_amplitudes()]) {
        worst_p = worst_p.max((report.probability - 0.5).abs());
        let qubit = ok(anyonsim::ising::decode_qubit(&model, &report.post_state))?;
        worst_f = worst_f.min(fidelity(&qubit, psi));
    }
    let gate = ok(fake_twist_single_probe(&model, &plus, &PhaseGateSpec::new(PI / 4.0)))?;
    ensure!(gate.len() == 2, "{} fake-twist outcomes", gate.len());
    for (outcome, psi) in gate.iter().zip([magic_amplitudes(), flipped_magic_amplitudes()]) {
        worst_p = worst_p.max((outcome.probability - 0.5).abs());
        worst_f = worst_f.min(fidelity(&outcome.qubit, psi));
    }
    let elapsed = started.elapsed();
    ensure!(worst_p <= 1e-10, "probabilities deviate by {worst_p:.2e}");
    ensure!(worst_f >= 1.0 - 1e-9, "fidelity {worst_f}");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("twisted and fake twist: |dp| {worst_p:.1e}, 1 - F {:.1e}, {:.0} ms", 1.0 - worst_f, elapsed.as_secs_f64() * 1e3))
}

fn m_odd() -> Check {
    let model = ok(ising())?;
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for m in [1, 3, 5, 7, 9, 11, 13, 15, -1] {
        for _ in 0..20 {
            let qubit = random_qubit(&mut rng);
            let outcomes = ok(m_odd_protocol(&model, &qubit, m))?;
            ensure!(outcomes.len() == 3, "m = {m}: {} outcomes", outcomes.len());
            let rho = qubit.rho();
            let negated = ok(TopologicalQubit::new(Matrix2::new(rho[(0, 0)], -rho[(0, 1)], -rho[(1, 0)], rho[(1, 1)])))?;
            for (outcome, (label, p, expected)) in outcomes.iter().zip([(I, 0.25, &negated), (SIGMA, 0.5, &qubit), (PSI, 0.25, &negated)]) {
                ensure!(outcome.label == label, "m = {m}: outcome {} where {label} was expected", outcome.label);
                worst = worst.max((outcome.probability - p).abs()).max(outcome.qubit.max_abs_diff(expected));
            }
        }
    }
    ensure!(worst <= 1e-10, "max deviation {worst:.2e}");
    Ok(format!("180 random qubits, max deviation {worst:.1e}"))
}

fn reduction() -> Check {
    let mut rng = rng(6);
    let models = [ok(bundled("ising"))?, ok(bundled("fibonacci"))?];
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let model = &models[trial % 2];
        let layout = if trial % 4 < 2 { Layout::Simple } else { Layout::Generalized };
        let target = random_state(model, layout, &mut rng);
        let config = InterferometerConfig::new(random_splitters(&mut rng), mixed_probe(model));
        let variant = if rng.gen_bool(0.5) { TwistVariant::Twist } else { TwistVariant::PureBraid };
        let twisted = config.clone().with_twist(TwistSpec::new(0, 0, variant));
        let n_probes = rng.gen_range(1..=4);
        let a = ok(twisted_distribution(model, &target, &twisted, n_probes))?;
        let b = ok(multi_probe_distribution(model, &target, &config, n_probes))?;
        worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
        let a = ok(twisted_outcomes(model, &target, &twisted, n_probes))?;
        let b = ok(multi_probe_outcomes(model, &target, &config, n_probes))?;
        ensure!(a.len() == b.len(), "trial {trial}: {} vs {} outcomes", a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max(x.post_state.max_abs_diff(&y.post_state));
        }
        let a = ok(twisted_asymptotic(model, &target, &twisted))?;
        let b = match layout {
            Layout::Simple => ok(asymptotic_outcomes(model, &target, &config))?,
            Layout::Generalized => ok(generalized_asymptotic(model, &target, &config))?,
        };
        ensure!(a.len() == b.len(), "trial {trial}: {} vs {} classes", a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            ensure!(x.label == y.label, "trial {trial}: labels differ");
            worst = worst.max((x.probability - y.probability).abs()).max(x.post_state.max_abs_diff(&y.post_state));
        }
    }
    ensure!(worst < 1e-12, "max deviation {worst:.2e}");
    Ok(format!("100 triples, max deviation {worst:.1e}"))
}

fn oracle_equivalence() -> Check {
    let started = Instant::now();
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    let mut strings = 0;
    for name in ["ising", "fibonacci"] {
        let model = ok(bundled(name))?;
        for n_probes in 1..=3 {
            for variant in [TwistVariant::Twist, TwistVariant::PureBraid] {
                for layout in [Layout::Simple, Layout::Generalized] {
                    let target = random_state(&model, layout, &mut rng);
                    let upper = if layout == Layout::Generalized { rng.gen_range(-2..=2) } else { 0 };
                    let twist = TwistSpec::new(rng.gen_range(-2..=2), upper, variant);
                    let config = InterferometerConfig::new(random_splitters(&mut rng), mixed_probe(&model)).with_twist(twist);
                    let dist = if twist.is_trivial() {
                        ok(multi_probe_distribution(&model, &target, &config.clone().with_twist(TwistSpec::NONE), n_probes))?
                    } else {
                        ok(twisted_distribution(&model, &target, &config, n_probes))?
                    };
                    for (outcomes, p) in ok(anyonsim::oracle::enumerate_probe_paths(&model, &target, &config, n_probes))? {
                        let n = outcomes.iter().filter(|&&s| s == Outcome::Right).count();
                        let per_string = dist[n] / binomial_weight(n_probes, n, re(1.0), re(1.0)).re;
                        worst = worst.max((per_string - p).abs());
                        strings += 1;
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed();
    ensure!(worst <= 1e-9, "max deviation {worst:.2e}");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{strings} outcome strings, max deviation {worst:.1e}, {:.1} s", elapsed.as_secs_f64()))
}

fn fixed_points() -> Check {
    let mut rng = rng(8);
    let mut worst: f64 = 0.0;
    let mut states = 0;
    for name in ["ising", "fibonacci", "z3", "su2_2"] {
        let model = ok(bundled(name))?;
        let config = InterferometerConfig::new(generic_splitters(), mixed_probe(&model));
        let classes = distinguishability_classes(&model, &config);
        for layout in [Layout::Simple, Layout::Generalized] {
            let target = random_state(&model, layout, &mut rng);
            let reports = match layout {
                Layout::Simple => ok(asymptotic_outcomes(&model, &target, &config))?,
                Layout::Generalized => ok(generalized_asymptotic(&model, &target, &config))?,
            };
            for report in reports {
                let charges = class_charges(&report);
                let class = classes.iter().find(|k| k.charges == charges).ok_or("unknown class")?;
                let n = (20.0 * class.p_right).round() as usize;
                let again = ok(multi_probe_update(&model, &report.post_state, &config, 20, n))?;
                worst = worst.max(again.max_abs_diff(&report.post_state));
                states += 1;
            }
        }
    }
    ensure!(worst <= 1e-9, "max change {worst:.2e}");
    Ok(format!("{states} asymptotic states, max change {worst:.1e}"))
}

fn decoherence() -> Check {
    let mut rng = rng(9);
    let mut worst: f64 = 0.0;
    for name in ["ising", "fibonacci", "z3", "su2_2"] {
        let model = ok(bundled(name))?;
        let config = InterferometerConfig::new(generic_splitters(), mixed_probe(&model));
        ensure!(distinguishability_classes(&model, &config).iter().all(|k| k.charges.len() == 1), "{name}: probe is not all-distinguishing");
        for layout in [Layout::Simple, Layout::Generalized] {
            let target = random_state(&model, layout, &mut rng);
            let reports = match layout {
                Layout::Simple => ok(asymptotic_outcomes(&model, &target, &config))?,
                Layout::Generalized => ok(generalized_asymptotic(&model, &target, &config))?,
            };
            let arms: &[Path] = match layout {
                Layout::Simple => &[Path::I],
                Layout::Generalized => &Path::BOTH,
            };
            for report in &reports {
                for &arm in arms {
                    let weights = ok(channel_weights(&model, &report.post_state, arm, arm))?;
                    worst = weights.iter().skip(1).fold(worst, |w, x| w.max(*x));
                }
            }
        }
    }
    ensure!(worst <= 1e-10, "nonvacuum channel weight {worst:.2e}");
    Ok(format!("max nonvacuum channel weight {worst:.1e}"))
}

fn sigma_targets() -> Check {
    let model = ok(ising())?;
    let pair = |f: Charge| BasisLabel::simple(SIGMA, SIGMA, f);
    let mut target = TargetState::new(Layout::Simple);
    target.add(pair(I), pair(I), re(1.0));
    let mut worst: f64 = 0.0;
    for m in [2, 4, -2] {
        let config = sigma_config(generic_splitters()).with_twist(TwistSpec::lower(m));
        let reports = ok(twisted_asymptotic(&model, &target, &config))?;
        ensure!(reports.len() == 1, "m = {m}: {} outcomes", reports.len());
        let mut mixed = TargetState::new(Layout::Simple);
        mixed.add(pair(I), pair(I), re(0.5));
        mixed.add(pair(PSI), pair(PSI), re(0.5));
        worst = worst.max((reports[0].probability - 1.0).abs()).max(reports[0].post_state.max_abs_diff(&mixed));
    }
    for m in [1, 3, -1] {
        let config = sigma_config(generic_splitters()).with_twist(TwistSpec::lower(m));
        let reports = ok(twisted_asymptotic(&model, &target, &config))?;
        ensure!(reports.len() == 3, "m = {m}: {} outcomes", reports.len());
        for (report, (charges, p, f)) in reports.iter().zip([(vec![I], 0.25, I), (vec![SIGMA], 0.5, PSI), (vec![PSI], 0.25, I)]) {
            ensure!(class_charges(report) == charges, "m = {m}: unexpected class {:?}", class_charges(report));
            let mut pure = TargetState::new(Layout::Simple);
            pure.add(pair(f), pair(f), re(1.0));
            worst = worst.max((report.probability - p).abs()).max(report.post_state.max_abs_diff(&pure));
        }
    }
    ensure!(worst <= 1e-10, "max deviation {worst:.2e}");
    Ok(format!("even and odd twists, max deviation {worst:.1e}"))
}

/// `sum_n Pr(n) psi0(n) conj(psi1(n))` after `N` partial probes.
fn averaged_coherence(model: &AnyonModel, splitters: &BeamSplitterPair, psi: [C64; 2], n_probes: usize) -> C64 {
    (0..=n_probes)
        .filter_map(|n| partial_interferometry(model, psi, splitters, n_probes, n).ok())
        .map(|(p, post)| post[0] * post[1].conj() * p)
        .sum()
}

fn partial_interferometry_laws() -> Check {
    let model = ok(ising())?;
    let mut rng = rng(11);
    let h = re(FRAC_1_SQRT_2);
    let choose = |n: usize, k: usize| binomial_weight(n, k, re(1.0), re(1.0)).re;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let splitters = random_splitters(&mut rng);
        let (n1, n2) = (rng.gen_range(0..=5), rng.gen_range(0..=7));
        let (p1, first) = ok(partial_interferometry(&model, [h, h], &splitters, 5, n1))?;
        let (p2, second) = ok(partial_interferometry(&model, first, &splitters, 7, n2))?;
        let (p, whole) = ok(partial_interferometry(&model, [h, h], &splitters, 12, n1 + n2))?;
        let per_string = p / choose(12, n1 + n2);
        let relative = ((p1 / choose(5, n1)) * (p2 / choose(7, n2)) - per_string).abs() / per_string;
        worst = worst.max((second[0] - whole[0]).norm()).max((second[1] - whole[1]).norm()).max(relative);
    }
    ensure!(worst <= 1e-12, "composition deviates by {worst:.2e}");
    let splitters = BeamSplitterPair::from_angles(0.25, 0.3, -0.4, 1.1, 0.9, 0.2, 0.5, -0.8);
    let coherence: Vec<f64> = (10..=50).map(|n| averaged_coherence(&model, &splitters, [h, h], n).norm()).collect();
    let ratios: Vec<f64> = coherence.windows(2).map(|w| w[1] / w[0]).collect();
    let spread = ratios.iter().map(|r| (r - ratios[0]).abs()).fold(0.0, f64::max);
    ensure!(ratios[0] < 1.0, "coherence ratio {} does not decay", ratios[0]);
    ensure!(spread <= 1e-6, "ratios spread by {spread:.2e}");
    Ok(format!("composition within {worst:.1e}; coherence ratio {:.6} per probe, spread {spread:.1e} over N = 10..50", ratios[0]))
}

fn graded_moore_read() -> Check {
    let mr = Z2GradedModel::moore_read_half();
    let residual = mr.unitarity_residual();
    ensure!(mr.s_matrix.nrows() == 6 && mr.s_matrix.ncols() == 6, "S is {}x{}", mr.s_matrix.nrows(), mr.s_matrix.ncols());
    ensure!(residual <= 1e-12, "unitarity residual {residual:.2e}");
    let expected = [re(1.0), re(1.0), C64::new(0.0, 1.0), re(-1.0), re(-1.0), C64::new(0.0, 1.0)];
    ensure!(mr.t_squared == expected, "T^2 = {:?}", mr.t_squared);
    Ok(format!("unitarity residual {residual:.1e}, T^2 exact"))
}

fn estimator() -> Check {
    let full = ok(estimate_sample_size(0.05, 0.25, 1.0))?;
    let half = ok(estimate_sample_size(0.05, 0.25, 0.5))?;
    ensure!(full == 62, "Q = 1 gives {full}");
    ensure!(half == 246, "Q = 0.5 gives {half}");
    Ok(format!("Q = 1 -> {full}, Q = 0.5 -> {half} (ceiling)"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("Ising derived data", ising_table),
        ("tau coefficients", tau_coefficients),
        ("tuned single probe", tuned_single_probe),
        ("magic state", magic_state),
        ("odd-twist protocol", m_odd),
        ("zero-twist reduction", reduction),
        ("oracle equivalence", oracle_equivalence),
        ("fixed-point property", fixed_points),
        ("decoherence rule", decoherence),
        ("sigma-pair targets", sigma_targets),
        ("partial interferometry", partial_interferometry_laws),
        ("graded Moore-Read data", graded_moore_read),
        ("sample-size estimator", estimator),
    ];
    let started = Instant::now();
    let mut failures = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic.downcast_ref::<String>().cloned().or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", message.unwrap_or_default()))
        });
        let seconds = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{seconds:.2} s]", index + 1),
            Err(reason) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {reason} [{seconds:.2} s]", index + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failures, criteria.len(), started.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
