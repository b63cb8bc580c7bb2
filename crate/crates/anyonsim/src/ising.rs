//! Topological qubits of Ising-type anyons: encoding, magic-state generation and tuned
//! single-probe gates.
//!
//! The qubit lives in the `A`-`C` pair with `|0> = |I, I; I>` and `|1> = |psi, psi; I>`.
//! Every protocol accepts any Ising-type model whose charges are labelled `I`, `sigma`
//! and `psi`, so the Galois conjugates run through the same code.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::interferometry::{
    binomial_weight, single_probe_update, BasisLabel, BeamSplitterPair, InterferometerConfig, Layout, Outcome, Path, ProbeSpec,
    TargetState, TwistSpec,
};
use crate::mtc::{AnyonModel, Charge, VACUUM};
use crate::twisted::twisted_asymptotic;

const QUBIT_TOLERANCE: f64 = 1e-10;
const TUNING_TOLERANCE: f64 = 1e-12;

/// The three charges of an Ising-type model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsingCharges {
    pub vacuum: Charge,
    pub sigma: Charge,
    pub psi: Charge,
}

impl IsingCharges {
    pub fn of(model: &AnyonModel) -> Result<Self> {
        let charges = Self {
            vacuum: model.charge("I")?,
            sigma: model.charge("sigma")?,
            psi: model.charge("psi")?,
        };
        if charges.vacuum != VACUUM || model.rank() != 3 {
            return Err(Error::InvalidParameter(format!("{} is not an Ising-type model", model.name())));
        }
        Ok(charges)
    }

    fn qubit_charge(&self, k: usize) -> Charge {
        [self.vacuum, self.psi][k]
    }
}

/// A density matrix on the basis `{|0>, |1>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologicalQubit {
    rho: Matrix2<C64>,
}

impl TopologicalQubit {
    /// Checks that `rho` is Hermitian, positive semidefinite and of unit trace.
    pub fn new(rho: Matrix2<C64>) -> Result<Self> {
        let hermitian = (rho - rho.adjoint()).camax();
        if hermitian > QUBIT_TOLERANCE {
            return Err(Error::NotAState(format!("not Hermitian (residual {hermitian:.3e})")));
        }
        let trace = rho.trace();
        if (trace - 1.0).norm() > QUBIT_TOLERANCE {
            return Err(Error::NotAState(format!("trace is {trace}")));
        }
        let det = rho.determinant().re;
        if rho[(0, 0)].re < -QUBIT_TOLERANCE || rho[(1, 1)].re < -QUBIT_TOLERANCE || det < -QUBIT_TOLERANCE {
            return Err(Error::NotAState("not positive semidefinite".into()));
        }
        Ok(Self { rho })
    }

    /// The pure state `psi0 |0> + psi1 |1>`, normalized.
    pub fn pure(psi0: C64, psi1: C64) -> Result<Self> {
        let v = Vector2::new(psi0, psi1);
        let norm = v.norm();
        if norm < QUBIT_TOLERANCE {
            return Err(Error::NotAState("zero vector".into()));
        }
        let v = v / C64::new(norm, 0.0);
        Self::new(v * v.adjoint())
    }

    pub fn zero() -> Self {
        Self::pure(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).expect("basis state")
    }

    /// `H|0> = (|0> + |1>) / sqrt 2`.
    pub fn plus() -> Self {
        Self::pure(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)).expect("unit vector")
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: Matrix2::identity() * C64::new(0.5, 0.0),
        }
    }

    /// The magic state `cos(pi/8)|0> - i sin(pi/8)|1>`.
    pub fn magic() -> Self {
        Self::pure(C64::new((PI / 8.0).cos(), 0.0), C64::new(0.0, -(PI / 8.0).sin())).expect("unit vector")
    }

    pub fn rho(&self) -> &Matrix2<C64> {
        &self.rho
    }

    pub fn max_abs_diff(&self, other: &TopologicalQubit) -> f64 {
        (self.rho - other.rho).camax()
    }
}

/// The target state of `qubit` in the simple layout.
pub fn encode_qubit(model: &AnyonModel, qubit: &TopologicalQubit) -> Result<TargetState> {
    let charges = IsingCharges::of(model)?;
    let mut state = TargetState::new(Layout::Simple);
    for i in 0..2 {
        for j in 0..2 {
            let value = qubit.rho[(i, j)];
            if value != C64::new(0.0, 0.0) {
                let (a, b) = (charges.qubit_charge(i), charges.qubit_charge(j));
                state.add(BasisLabel::simple(a, a, VACUUM), BasisLabel::simple(b, b, VACUUM), value);
            }
        }
    }
    Ok(state)
}

/// Reads a qubit back from a target state, failing if it has weight outside the qubit subspace.
pub fn decode_qubit(model: &AnyonModel, state: &TargetState) -> Result<TopologicalQubit> {
    let charges = IsingCharges::of(model)?;
    let slot = |label: &BasisLabel| {
        (0..2).find(|&k| {
            let a = charges.qubit_charge(k);
            *label == BasisLabel::simple(a, a, VACUUM)
        })
    };
    let mut rho = Matrix2::zeros();
    for ((ket, bra), &value) in state.entries() {
        match (slot(ket), slot(bra)) {
            (Some(i), Some(j)) => rho[(i, j)] = value,
            _ if value.norm() <= QUBIT_TOLERANCE => {}
            _ => return Err(Error::InvalidState("state has weight outside the qubit subspace".into())),
        }
    }
    TopologicalQubit::new(rho)
}

/// One outcome of a qubit protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitOutcome<L> {
    pub label: L,
    pub probability: f64,
    pub qubit: TopologicalQubit,
}

fn twisted_qubit_protocol(model: &AnyonModel, qubit: &TopologicalQubit, m: i64) -> Result<Vec<QubitOutcome<Charge>>> {
    let charges = IsingCharges::of(model)?;
    let config = InterferometerConfig::new(BeamSplitterPair::tuned(0.0), ProbeSpec::single(model, charges.sigma)?).with_twist(TwistSpec::lower(m));
    let target = encode_qubit(model, qubit)?;
    twisted_asymptotic(model, &target, &config)?
        .into_iter()
        .map(|report| {
            let label = match &report.label {
                crate::interferometry::OutcomeLabel::Class { charges, .. } if charges.len() == 1 => charges[0],
                other => return Err(Error::InconsistentData(format!("unexpected outcome {other:?}"))),
            };
            Ok(QubitOutcome {
                label,
                probability: report.probability,
                qubit: decode_qubit(model, &report.post_state)?,
            })
        })
        .collect()
}

/// Twisted interferometry with an even number `m` of twists on the lower arm; outcomes are labelled by charge.
pub fn magic_state_protocol(model: &AnyonModel, qubit: &TopologicalQubit, m: i64) -> Result<Vec<QubitOutcome<Charge>>> {
    if m % 2 != 0 {
        return Err(Error::OddTwist(m));
    }
    twisted_qubit_protocol(model, qubit, m)
}

/// Twisted interferometry with an odd number `m` of twists; outcomes are labelled by charge.
pub fn m_odd_protocol(model: &AnyonModel, qubit: &TopologicalQubit, m: i64) -> Result<Vec<QubitOutcome<Charge>>> {
    if m % 2 == 0 {
        return Err(Error::EvenTwist(m));
    }
    twisted_qubit_protocol(model, qubit, m)
}

/// Splitters tuned so that `t1 r1* r2* t2* e^{i(theta_I - theta_II)} = e^{i phi} / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGateSpec {
    pub phi: f64,
    pub splitters: BeamSplitterPair,
}

impl PhaseGateSpec {
    pub fn new(phi: f64) -> Self {
        Self {
            phi,
            splitters: BeamSplitterPair::tuned(phi),
        }
    }

    /// Every amplitude has modulus `1/sqrt 2` and the interference coefficient is `e^{i phi} / 4`.
    pub fn validate(&self) -> Result<()> {
        let s = &self.splitters;
        for (name, z) in [("t1", s.t1), ("r1", s.r1), ("t2", s.t2), ("r2", s.r2)] {
            if (z.norm() - FRAC_1_SQRT_2).abs() > TUNING_TOLERANCE {
                return Err(Error::UntunedSplitters(format!("|{name}| = {}", z.norm())));
            }
        }
        let target = C64::from_polar(0.25, self.phi);
        if (s.interference() - target).norm() > TUNING_TOLERANCE {
            return Err(Error::UntunedSplitters(format!("interference coefficient {} differs from {target}", s.interference())));
        }
        Ok(())
    }
}

/// A single `sigma` probe through tuned splitters, acting as a phase gate on the qubit.
pub fn fake_twist_single_probe(model: &AnyonModel, qubit: &TopologicalQubit, spec: &PhaseGateSpec) -> Result<Vec<QubitOutcome<Outcome>>> {
    spec.validate()?;
    let charges = IsingCharges::of(model)?;
    let config = InterferometerConfig::new(spec.splitters, ProbeSpec::single(model, charges.sigma)?);
    let target = encode_qubit(model, qubit)?;
    let mut out = Vec::new();
    for s in Outcome::BOTH {
        match single_probe_update(model, &target, &config, s) {
            Ok((probability, post)) => out.push(QubitOutcome {
                label: s,
                probability,
                qubit: decode_qubit(model, &post)?,
            }),
            Err(Error::ZeroProbabilityOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Amplitudes `A^s_a` with `p^s_{a a' e, sigma} = A^s_a conj(A^s_{a'})` for `a, a'` in `{I, psi}`.
pub fn product_form_amplitudes(model: &AnyonModel, splitters: &BeamSplitterPair) -> Result<BTreeMap<(Outcome, Charge), C64>> {
    let charges = IsingCharges::of(model)?;
    let mut out = BTreeMap::new();
    for s in Outcome::BOTH {
        for a in [charges.vacuum, charges.psi] {
            let amplitude = splitters.path_amplitude(s, Path::I) * model.monodromy(a, charges.sigma) + splitters.path_amplitude(s, Path::II);
            out.insert((s, a), amplitude);
        }
    }
    Ok(out)
}

/// `N` tuned probes on a pure qubit `psi0 |0> + psi1 |1>` with `n` of them reaching the horizontal detector.
///
/// Returns the probability of the count and the normalized post-measurement amplitudes.
pub fn partial_interferometry(
    model: &AnyonModel,
    psi: [C64; 2],
    splitters: &BeamSplitterPair,
    n_probes: usize,
    n: usize,
) -> Result<(f64, [C64; 2])> {
    let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > QUBIT_TOLERANCE {
        return Err(Error::NotAState(format!("amplitudes have norm {norm}")));
    }
    if n > n_probes {
        return Err(Error::InvalidParameter(format!("count {n} of {n_probes} probes")));
    }
    let charges = IsingCharges::of(model)?;
    let amps = product_form_amplitudes(model, splitters)?;
    let weight = |a: Charge| binomial_weight(n_probes, n, amps[&(Outcome::Right, a)], amps[&(Outcome::Up, a)]);
    let unnormalized = [weight(charges.vacuum) * psi[0], weight(charges.psi) * psi[1]];
    // The binomial coefficient enters the amplitude squared; the probability needs it once.
    let choose = binomial_weight(n_probes, n, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).re;
    let squared = unnormalized[0].norm_sqr() + unnormalized[1].norm_sqr();
    let probability = squared / choose;
    if probability < crate::interferometry::ZERO_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome { probability });
    }
    let scale = C64::new(1.0 / squared.sqrt(), 0.0);
    Ok((probability, [unnormalized[0] * scale, unnormalized[1] * scale]))
}

/// Whether `p^s_{a a' e, b}` factorizes, with the conditions that fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFormCheck {
    pub holds: bool,
    pub reasons: Vec<String>,
}

/// Tests `|M_{ab}| = |M_{a'b}| = 1`, `a` in `a' x e` and `M_{eb} = +-1`.
pub fn product_form_check(model: &AnyonModel, a: Charge, a_bra: Charge, e: Charge, b: Charge) -> Result<ProductFormCheck> {
    for c in [a, a_bra, e, b] {
        model.check_charge(c)?;
    }
    let mut reasons = Vec::new();
    for (name, c) in [("a", a), ("a'", a_bra)] {
        let m = model.monodromy(c, b).norm();
        if (m - 1.0).abs() > QUBIT_TOLERANCE {
            reasons.push(format!("|M_({name}, b)| = {m:.6}"));
        }
    }
    if !model.fuses(a_bra, e, a) {
        reasons.push("a is not in a' x e".into());
    }
    let meb = model.monodromy(e, b);
    if (meb - 1.0).norm() > QUBIT_TOLERANCE && (meb + 1.0).norm() > QUBIT_TOLERANCE {
        reasons.push(format!("M_(e, b) = {meb} is not +-1"));
    }
    Ok(ProductFormCheck {
        holds: reasons.is_empty(),
        reasons,
    })
}

/// A single-qubit Clifford gate, up to phase, as a word in `H` and `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordFrame {
    pub word: String,
    pub matrix: Matrix2<C64>,
}

/// The 24 single-qubit Clifford gates modulo phase, generated breadth-first from `H` and `P`.
pub fn clifford_frames() -> Vec<CliffordFrame> {
    let h = Matrix2::new(1.0, 1.0, 1.0, -1.0).map(|x| C64::new(x * FRAC_1_SQRT_2, 0.0));
    let p = Matrix2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let same_up_to_phase = |u: &Matrix2<C64>, v: &Matrix2<C64>| (u.adjoint() * v).trace().norm() > 2.0 - 1e-9;
    let mut frames = vec![CliffordFrame {
        word: String::new(),
        matrix: Matrix2::identity(),
    }];
    let mut next = 0;
    while next < frames.len() {
        let current = frames[next].clone();
        for (name, g) in [('H', &h), ('P', &p)] {
            let matrix = g * current.matrix;
            if !frames.iter().any(|f| same_up_to_phase(&f.matrix, &matrix)) {
                frames.push(CliffordFrame {
                    word: format!("{name}{}", current.word),
                    matrix,
                });
            }
        }
        next += 1;
    }
    frames
}

/// Largest fidelity of `C rho C^dagger` with the magic state over all Clifford frames `C`.
pub fn magic_state_fidelity(qubit: &TopologicalQubit) -> (f64, CliffordFrame) {
    let magic = Vector2::new(C64::new((PI / 8.0).cos(), 0.0), C64::new(0.0, -(PI / 8.0).sin()));
    clifford_frames()
        .into_iter()
        .map(|frame| {
            let rotated = frame.matrix * qubit.rho * frame.matrix.adjoint();
            let fidelity = (magic.adjoint() * rotated * magic)[(0, 0)].re;
            (fidelity, frame)
        })
        .fold(None, |best: Option<(f64, CliffordFrame)>, item| match best {
            Some(b) if b.0 >= item.0 - 1e-15 => Some(b),
            _ => Some(item),
        })
        .expect("the Clifford group is nonempty")
}

/// Twists needed on an Ising-type state at filling `p/q` with odd `q`: `m = 2q`.
pub fn twists_for_odd_denominator(q: u32) -> Result<i64> {
    if q.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("denominator {q} is even")));
    }
    Ok(2 * i64::from(q))
}
