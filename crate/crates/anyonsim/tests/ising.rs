mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use anyonsim::interferometry::{probe_factor, BasisLabel, BeamSplitterPair, InterferometerConfig, Outcome, Path, ProbeSpec};
use anyonsim::ising::{
    clifford_frames, decode_qubit, encode_qubit, fake_twist_single_probe, m_odd_protocol, magic_state_fidelity, magic_state_protocol,
    partial_interferometry, product_form_amplitudes, product_form_check, twists_for_odd_denominator, PhaseGateSpec, QubitOutcome,
    TopologicalQubit,
};
use anyonsim::mtc::{bundled, ising, ising_conjugate, AnyonModel, Charge, VACUUM};
use anyonsim::{Error, C64};
use common::{random_splitters, rng};
use nalgebra::Matrix2;
use proptest::prelude::*;
use rand::Rng;

const I: Charge = 0;
const SIGMA: Charge = 1;
const PSI: Charge = 2;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn random_qubit(rng: &mut impl Rng) -> TopologicalQubit {
    let g = Matrix2::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = g * g.adjoint();
    TopologicalQubit::new(rho / rho.trace()).unwrap()
}

/// `K rho K^dagger / Pr` with `Pr = tr(K rho K^dagger)`, for diagonal `K`.
fn filtered(qubit: &TopologicalQubit, k: [C64; 2]) -> (f64, TopologicalQubit) {
    let k = Matrix2::new(k[0], re(0.0), re(0.0), k[1]);
    let unnormalized = k * qubit.rho() * k.adjoint();
    let p = unnormalized.trace().re;
    (p, TopologicalQubit::new(unnormalized / re(p)).unwrap())
}

fn assert_outcome<L: PartialEq + std::fmt::Debug>(outcome: &QubitOutcome<L>, label: L, probability: f64, qubit: &TopologicalQubit, tolerance: f64) {
    assert_eq!(outcome.label, label);
    assert!((outcome.probability - probability).abs() < tolerance, "{:?}: {} vs {probability}", outcome.label, outcome.probability);
    assert!(outcome.qubit.max_abs_diff(qubit) < tolerance, "{:?}: {:?} vs {:?}", outcome.label, outcome.qubit, qubit);
}

#[test]
fn encoding_places_the_qubit_on_the_diagonal_charges() {
    let model = ising().unwrap();
    let zero = encode_qubit(&model, &TopologicalQubit::zero()).unwrap();
    assert_eq!(zero.entries().len(), 1);
    let vac = BasisLabel::simple(I, I, VACUUM);
    assert!((zero.get(vac, vac) - 1.0).norm() < 1e-15);
    let plus = encode_qubit(&model, &TopologicalQubit::plus()).unwrap();
    assert_eq!(plus.entries().len(), 4);
    assert!(plus.entries().values().all(|v| (v - 0.5).norm() < 1e-15));
    let fermion = BasisLabel::simple(PSI, PSI, VACUUM);
    assert!((plus.get(vac, fermion) - 0.5).norm() < 1e-15);
    let mut rng = rng(1);
    for _ in 0..10 {
        let qubit = random_qubit(&mut rng);
        let state = encode_qubit(&model, &qubit).unwrap();
        state.validate(&model).unwrap();
        assert!(decode_qubit(&model, &state).unwrap().max_abs_diff(&qubit) < 1e-15);
    }
}

#[test]
fn invalid_qubits_are_rejected() {
    let bad = [
        Matrix2::new(re(0.5), re(0.1), re(0.2), re(0.5)),
        Matrix2::new(re(0.7), re(0.0), re(0.0), re(0.7)),
        Matrix2::new(re(1.2), re(0.0), re(0.0), re(-0.2)),
        Matrix2::new(re(0.5), re(0.9), re(0.9), re(0.5)),
    ];
    for rho in bad {
        assert!(matches!(TopologicalQubit::new(rho), Err(Error::NotAState(_))), "{rho}");
    }
    let model = ising().unwrap();
    let mut leak = encode_qubit(&model, &TopologicalQubit::zero()).unwrap();
    let sigma = BasisLabel::simple(SIGMA, SIGMA, VACUUM);
    leak.add(sigma, sigma, re(0.1));
    assert!(decode_qubit(&model, &leak).is_err());
    assert!(encode_qubit(&bundled("fibonacci").unwrap(), &TopologicalQubit::zero()).is_err());
}

#[test]
fn even_twists_match_their_closed_forms() {
    let model = ising().unwrap();
    let mut rng = rng(2);
    for m in [2, 4, 6, 8] {
        let (c, s) = ((m as f64 * PI / 16.0).cos(), (m as f64 * PI / 16.0).sin());
        for _ in 0..50 {
            let qubit = random_qubit(&mut rng);
            let outcomes = magic_state_protocol(&model, &qubit, m).unwrap();
            assert_eq!(outcomes.len(), 2);
            let rho = qubit.rho();
            let closed = |a: f64, b: f64, phase: C64| {
                let p = a * a * rho[(0, 0)].re + b * b * rho[(1, 1)].re;
                let off = phase * a * b * rho[(0, 1)];
                let m = Matrix2::new(re(a * a) * rho[(0, 0)], off, off.conj(), re(b * b) * rho[(1, 1)]) / re(p);
                (p, TopologicalQubit::new(m).unwrap())
            };
            let (p_vac, rho_vac) = closed(c, s, C64::new(0.0, 1.0));
            let (p_psi, rho_psi) = closed(s, c, C64::new(0.0, -1.0));
            assert_outcome(&outcomes[0], I, p_vac, &rho_vac, 1e-9);
            assert_outcome(&outcomes[1], PSI, p_psi, &rho_psi, 1e-9);
        }
    }
}

#[test]
fn two_twists_on_the_plus_state_make_magic_states() {
    let model = ising().unwrap();
    let outcomes = magic_state_protocol(&model, &TopologicalQubit::plus(), 2).unwrap();
    let magic = TopologicalQubit::magic();
    let flipped = TopologicalQubit::pure(C64::new(0.0, -(PI / 8.0).sin()), re((PI / 8.0).cos())).unwrap();
    assert_outcome(&outcomes[0], I, 0.5, &magic, 1e-10);
    assert_outcome(&outcomes[1], PSI, 0.5, &flipped, 1e-10);
    for outcome in &outcomes {
        assert!(magic_state_fidelity(&outcome.qubit).0 > 1.0 - 1e-9);
    }
}

#[test]
fn trivial_and_full_period_twists_measure_the_charge() {
    let model = ising().unwrap();
    for m in [0, 16] {
        for (qubit, charge) in [(TopologicalQubit::zero(), I), (TopologicalQubit::pure(re(0.0), re(1.0)).unwrap(), PSI)] {
            let outcomes = magic_state_protocol(&model, &qubit, m).unwrap();
            assert_eq!(outcomes.len(), 1);
            assert_outcome(&outcomes[0], charge, 1.0, &qubit, 1e-10);
        }
        let qubit = random_qubit(&mut rng(3));
        let outcomes = magic_state_protocol(&model, &qubit, m).unwrap();
        assert!((outcomes[0].probability - qubit.rho()[(0, 0)].re).abs() < 1e-10);
        assert!((outcomes[1].probability - qubit.rho()[(1, 1)].re).abs() < 1e-10);
        assert!(outcomes[0].qubit.max_abs_diff(&TopologicalQubit::zero()) < 1e-10);
    }
}

#[test]
fn twist_parity_is_enforced() {
    let model = ising().unwrap();
    let qubit = TopologicalQubit::plus();
    assert!(matches!(magic_state_protocol(&model, &qubit, 3), Err(Error::OddTwist(3))));
    assert!(matches!(m_odd_protocol(&model, &qubit, 2), Err(Error::EvenTwist(2))));
}

#[test]
fn odd_twists_flip_or_keep_the_qubit() {
    let model = ising().unwrap();
    let mut rng = rng(4);
    for m in [1, 3, 5, -1] {
        for _ in 0..20 {
            let qubit = random_qubit(&mut rng);
            let outcomes = m_odd_protocol(&model, &qubit, m).unwrap();
            assert_eq!(outcomes.len(), 3);
            let rho = qubit.rho();
            let negated = TopologicalQubit::new(Matrix2::new(rho[(0, 0)], -rho[(0, 1)], -rho[(1, 0)], rho[(1, 1)])).unwrap();
            assert_outcome(&outcomes[0], I, 0.25, &negated, 1e-10);
            assert_outcome(&outcomes[1], SIGMA, 0.5, &qubit, 1e-10);
            assert_outcome(&outcomes[2], PSI, 0.25, &negated, 1e-10);
        }
    }
    let outcomes = m_odd_protocol(&model, &TopologicalQubit::plus(), 1).unwrap();
    let minus = TopologicalQubit::pure(re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2)).unwrap();
    assert!(outcomes[0].qubit.max_abs_diff(&minus) < 1e-10);
    for outcome in m_odd_protocol(&model, &TopologicalQubit::zero(), 3).unwrap() {
        assert!(outcome.qubit.max_abs_diff(&TopologicalQubit::zero()) < 1e-10);
    }
}

#[test]
fn galois_conjugates_rephase_by_their_own_spin() {
    let mut rng = rng(5);
    for nu in (1..=15).step_by(2) {
        let model = ising_conjugate(nu).unwrap();
        let theta = model.theta(SIGMA);
        assert!((theta - C64::from_polar(1.0, nu as f64 * PI / 8.0)).norm() < 1e-12);
        for m in [2, 4, 6] {
            let qubit = random_qubit(&mut rng);
            let outcomes = magic_state_protocol(&model, &qubit, m).unwrap();
            let twist = theta.powi(m as i32);
            let plus = (re(1.0) + twist) / 2.0;
            let minus = (re(1.0) - twist) / 2.0;
            let expected: Vec<(f64, TopologicalQubit)> = [[plus, minus], [minus, plus]].into_iter().map(|k| filtered(&qubit, k)).collect();
            let live: Vec<&(f64, TopologicalQubit)> = expected.iter().filter(|(p, _)| *p > 1e-14).collect();
            assert_eq!(outcomes.len(), live.len(), "nu={nu} m={m}");
            for (outcome, (p, state)) in outcomes.iter().zip(live) {
                assert!((outcome.probability - p).abs() < 1e-9, "nu={nu} m={m}");
                assert!(outcome.qubit.max_abs_diff(state) < 1e-9, "nu={nu} m={m}");
            }
        }
    }
}

#[test]
fn a_tuned_probe_replays_the_even_twist() {
    let model = ising().unwrap();
    let mut rng = rng(6);
    for m in [2, 4, 6, 8] {
        for _ in 0..10 {
            let qubit = random_qubit(&mut rng);
            let twisted = magic_state_protocol(&model, &qubit, m).unwrap();
            let probe = fake_twist_single_probe(&model, &qubit, &PhaseGateSpec::new(m as f64 * PI / 8.0)).unwrap();
            assert_eq!(twisted.len(), probe.len());
            for (t, (p, s)) in twisted.iter().zip(probe.iter().zip([Outcome::Right, Outcome::Up])) {
                assert_eq!(p.label, s);
                assert!((t.probability - p.probability).abs() < 1e-10);
                assert!(t.qubit.max_abs_diff(&p.qubit) < 1e-10);
            }
        }
    }
}

#[test]
fn tuned_probe_at_arbitrary_phase() {
    let model = ising().unwrap();
    let mut rng = rng(7);
    for _ in 0..20 {
        let phi: f64 = rng.gen_range(-PI..PI);
        let qubit = random_qubit(&mut rng);
        let outcomes = fake_twist_single_probe(&model, &qubit, &PhaseGateSpec::new(phi)).unwrap();
        let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let rho = qubit.rho();
        let p_right = c * c * rho[(0, 0)].re + s * s * rho[(1, 1)].re;
        assert!((outcomes[0].probability - p_right).abs() < 1e-10);
        let off = C64::new(0.0, c * s) * rho[(0, 1)] / p_right;
        assert!((outcomes[0].qubit.rho()[(0, 1)] - off).norm() < 1e-10);
    }
    let outcomes = fake_twist_single_probe(&model, &TopologicalQubit::plus(), &PhaseGateSpec::new(PI / 4.0)).unwrap();
    assert_outcome(&outcomes[0], Outcome::Right, 0.5, &TopologicalQubit::magic(), 1e-10);
    let qubit = random_qubit(&mut rng);
    let outcomes = fake_twist_single_probe(&model, &qubit, &PhaseGateSpec::new(0.0)).unwrap();
    assert_outcome(&outcomes[0], Outcome::Right, qubit.rho()[(0, 0)].re, &TopologicalQubit::zero(), 1e-10);
    assert_outcome(&outcomes[1], Outcome::Up, qubit.rho()[(1, 1)].re, &TopologicalQubit::pure(re(0.0), re(1.0)).unwrap(), 1e-10);
}

#[test]
fn untuned_splitters_are_rejected() {
    let model = ising().unwrap();
    let mut spec = PhaseGateSpec::new(0.3);
    spec.splitters = BeamSplitterPair::from_angles(0.7, 0.0, 0.0, PI / 4.0, 0.0, 0.0, 0.3, 0.0);
    let err = fake_twist_single_probe(&model, &TopologicalQubit::plus(), &spec).unwrap_err();
    assert!(matches!(err, Error::UntunedSplitters(_)), "{err:?}");
    let mut spec = PhaseGateSpec::new(0.3);
    spec.splitters.theta_i += 1e-6;
    assert!(spec.validate().is_err());
}

#[test]
fn product_amplitudes_reproduce_the_probe_factors() {
    let model = ising().unwrap();
    let mut rng = rng(8);
    for _ in 0..100 {
        let splitters = random_splitters(&mut rng);
        let config = InterferometerConfig::new(splitters, ProbeSpec::single(&model, SIGMA).unwrap());
        let amps = product_form_amplitudes(&model, &splitters).unwrap();
        for a in [I, PSI] {
            let total: f64 = Outcome::BOTH.iter().map(|&s| amps[&(s, a)].norm_sqr()).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for a_bra in [I, PSI] {
                let e = if a == a_bra { I } else { PSI };
                for s in Outcome::BOTH {
                    let p = probe_factor(&model, &config, s, a, a_bra, e).unwrap();
                    assert!((amps[&(s, a)] * amps[&(s, a_bra)].conj() - p).norm() < 1e-12);
                }
            }
        }
        let explicit = splitters.t1 * splitters.r2.conj() * C64::from_polar(1.0, splitters.theta_i)
            + splitters.r1 * splitters.t2 * C64::from_polar(1.0, splitters.theta_ii);
        assert!((amps[&(Outcome::Right, I)] - explicit).norm() < 1e-12);
        assert!((splitters.path_amplitude(Outcome::Right, Path::I) + splitters.path_amplitude(Outcome::Right, Path::II) - explicit).norm() < 1e-12);
    }
    let tuned = product_form_amplitudes(&model, &BeamSplitterPair::tuned(0.0)).unwrap();
    assert!(tuned[&(Outcome::Right, PSI)].norm() < 1e-12);
}

#[test]
fn one_partial_probe_is_the_tuned_probe() {
    let model = ising().unwrap();
    let mut rng = rng(9);
    for _ in 0..10 {
        let phi = rng.gen_range(-PI..PI);
        let psi = [C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        let psi = [psi[0] / norm, psi[1] / norm];
        let spec = PhaseGateSpec::new(phi);
        let qubit = TopologicalQubit::pure(psi[0], psi[1]).unwrap();
        let probe = fake_twist_single_probe(&model, &qubit, &spec).unwrap();
        for (outcome, n) in probe.iter().zip([1, 0]) {
            let (p, post) = partial_interferometry(&model, psi, &spec.splitters, 1, n).unwrap();
            assert!((p - outcome.probability).abs() < 1e-12);
            assert!(TopologicalQubit::pure(post[0], post[1]).unwrap().max_abs_diff(&outcome.qubit) < 1e-12);
        }
    }
    let h = re(FRAC_1_SQRT_2);
    let (p, post) = partial_interferometry(&model, [h, h], &BeamSplitterPair::tuned(PI / 4.0), 1, 1).unwrap();
    assert!((p - 0.5).abs() < 1e-12);
    assert!(TopologicalQubit::pure(post[0], post[1]).unwrap().max_abs_diff(&TopologicalQubit::magic()) < 1e-12);
}

#[test]
fn partial_runs_compose() {
    let model = ising().unwrap();
    let mut rng = rng(10);
    for _ in 0..20 {
        let splitters = random_splitters(&mut rng);
        let h = re(FRAC_1_SQRT_2);
        let (n1, n2) = (rng.gen_range(0..=5), rng.gen_range(0..=7));
        let (p1, first) = partial_interferometry(&model, [h, h], &splitters, 5, n1).unwrap();
        let (p2, second) = partial_interferometry(&model, first, &splitters, 7, n2).unwrap();
        let (p, whole) = partial_interferometry(&model, [h, h], &splitters, 12, n1 + n2).unwrap();
        assert!((second[0] - whole[0]).norm() < 1e-12 && (second[1] - whole[1]).norm() < 1e-12);
        let choose = |n: usize, k: usize| anyonsim::interferometry::binomial_weight(n, k, re(1.0), re(1.0)).re;
        let per_string = p / choose(12, n1 + n2);
        assert!((p1 / choose(5, n1) * p2 / choose(7, n2) - per_string).abs() < 1e-12 * per_string.max(1e-300) + 1e-15);
    }
}

#[test]
fn many_partial_probes_collapse_to_the_likelier_charge() {
    let model = ising().unwrap();
    let splitters = common::generic_splitters();
    let amps = product_form_amplitudes(&model, &splitters).unwrap();
    let p_vac = amps[&(Outcome::Right, I)].norm_sqr();
    let n = (100.0 * p_vac).round() as usize;
    let h = re(FRAC_1_SQRT_2);
    let (_, post) = partial_interferometry(&model, [h, h], &splitters, 100, n).unwrap();
    assert!((post[0].norm() - 1.0).abs() < 1e-6 && post[1].norm() < 1e-6, "{post:?}");
}

/// Count-averaged coherence `sum_n Pr(n) psi0(n) conj(psi1(n))` after `N` partial probes.
fn averaged_coherence(model: &AnyonModel, splitters: &BeamSplitterPair, psi: [C64; 2], n_probes: usize) -> C64 {
    (0..=n_probes)
        .filter_map(|n| partial_interferometry(model, psi, splitters, n_probes, n).ok())
        .map(|(p, post)| post[0] * post[1].conj() * p)
        .sum()
}

#[test]
fn coherence_decays_geometrically() {
    let model = ising().unwrap();
    // A weakly reflecting first splitter keeps the coherence far above roundoff out to N = 50.
    let splitters = BeamSplitterPair::from_angles(0.25, 0.3, -0.4, 1.1, 0.9, 0.2, 0.5, -0.8);
    let h = re(FRAC_1_SQRT_2);
    let ratios: Vec<f64> = (10..50)
        .map(|n| averaged_coherence(&model, &splitters, [h, h], n + 1).norm() / averaged_coherence(&model, &splitters, [h, h], n).norm())
        .collect();
    assert!(ratios[0] < 1.0);
    for r in &ratios {
        assert!((r - ratios[0]).abs() < 1e-6, "{ratios:?}");
    }
}

#[test]
fn product_form_conditions() {
    let model = ising().unwrap();
    assert!(product_form_check(&model, I, PSI, PSI, SIGMA).unwrap().holds);
    let fibonacci = bundled("fibonacci").unwrap();
    let tau = fibonacci.charge("tau").unwrap();
    let check = product_form_check(&fibonacci, tau, tau, tau, tau).unwrap();
    assert!(!check.holds);
    assert!(check.reasons.iter().any(|r| r.contains("|M_(a, b)|")), "{:?}", check.reasons);
    let sigma_target = product_form_check(&model, SIGMA, SIGMA, I, SIGMA).unwrap();
    assert!(!sigma_target.holds);
    for name in ["ising", "fibonacci", "z3", "su2_2"] {
        let model = bundled(name).unwrap();
        for a in model.charges() {
            for a_bra in model.charges() {
                for e in model.charges().filter(|&e| model.fuses(a_bra, e, a)) {
                    assert!(product_form_check(&model, a, a_bra, e, VACUUM).unwrap().holds, "{name}");
                }
            }
        }
    }
}

#[test]
fn clifford_group_has_twenty_four_frames() {
    let frames = clifford_frames();
    assert_eq!(frames.len(), 24);
    for frame in &frames {
        let u = frame.matrix;
        assert!((u.adjoint() * u - Matrix2::identity()).camax() < 1e-12);
    }
}

#[test]
fn magic_fidelity_examples() {
    assert!((magic_state_fidelity(&TopologicalQubit::magic()).0 - 1.0).abs() < 1e-12);
    assert!((magic_state_fidelity(&TopologicalQubit::zero()).0 - (PI / 8.0).cos().powi(2)).abs() < 1e-12);
    assert!((magic_state_fidelity(&TopologicalQubit::maximally_mixed()).0 - 0.5).abs() < 1e-12);
}

#[test]
fn odd_denominators_need_twice_as_many_twists() {
    assert_eq!(twists_for_odd_denominator(1).unwrap(), 2);
    assert_eq!(twists_for_odd_denominator(5).unwrap(), 10);
    assert!(twists_for_odd_denominator(4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fidelity_is_clifford_invariant(seed in any::<u64>(), frame in 0usize..24) {
        let qubit = random_qubit(&mut rng(seed));
        let u = clifford_frames()[frame].matrix;
        let rotated = TopologicalQubit::new(u * qubit.rho() * u.adjoint()).unwrap();
        prop_assert!((magic_state_fidelity(&rotated).0 - magic_state_fidelity(&qubit).0).abs() < 1e-9);
    }

    #[test]
    fn odd_twist_probabilities_ignore_the_input(seed in any::<u64>()) {
        let qubit = random_qubit(&mut rng(seed));
        let probabilities: Vec<f64> = m_odd_protocol(&ising().unwrap(), &qubit, 1).unwrap().iter().map(|o| o.probability).collect();
        prop_assert!((probabilities[0] - 0.25).abs() < 1e-10);
        prop_assert!((probabilities[1] - 0.5).abs() < 1e-10);
        prop_assert!((probabilities[2] - 0.25).abs() < 1e-10);
    }
}
