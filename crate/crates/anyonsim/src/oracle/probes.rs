//! Explicit evaluation of probes passing through the interferometer.
//!
//! Target leaves are laid out as `[C2, z, zbar, A, x, xbar, C1]`, where the
//! pairs `(z, zbar)` and `(x, xbar)` are the loops that twist the probes of the
//! upper and lower arm. A probe enters at the left end and leaves at the right
//! end, passing over the leaves on one side of its arm and under the rest. Every
//! bra/ket pair of arms is summed with its amplitude, and the probe is then traced
//! out. Loops are closed after the last probe.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::basis::{BasisRef, FusionTreeBasis, TreeLabel};
use super::maps::{insert_pairs, remove_pairs, transport, Crossing, SparseMap};
use super::ops::{partial_trace_last, quantum_trace};
use crate::error::{Error, Result};
use crate::interferometry::{InterferometerConfig, Layout, Outcome, Path, TargetState, TwistSpec};
use crate::mtc::{AnyonModel, Charge};

/// Largest number of bra/ket arm configurations the oracle will sum.
pub const ORACLE_BUDGET: u128 = 4096;

/// Tolerance below which a loop coefficient is treated as absent.
const COEFFICIENT_CUTOFF: f64 = 1e-14;

/// Number of target leaves, including both twisting loops.
const TARGET_LEAVES: usize = 7;

/// One outcome string with its probability and normalized post-measurement state.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub outcomes: Vec<Outcome>,
    pub probability: f64,
    pub post_state: Option<TargetState>,
}

/// Crossings met by a probe taking `path`, for target leaves `[C2, z, zbar, A, x, xbar, C1]`.
fn crossings(path: Path) -> [Crossing; TARGET_LEAVES] {
    use Crossing::{Over, Under};
    match path {
        Path::I => [Over, Over, Over, Over, Over, Under, Under],
        Path::II => [Over, Over, Under, Under, Under, Under, Under],
    }
}

/// The target with both twisting loops opened up as leaf pairs.
pub(crate) struct Extended {
    pub layout: Layout,
    pub basis: BasisRef,
    pub x: DMatrix<C64>,
}

fn loop_weights(model: &AnyonModel, m: i64) -> Vec<(Charge, C64)> {
    model
        .tau_coefficients(m)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > COEFFICIENT_CUTOFF)
        .collect()
}

pub(crate) fn embed(x: &DMatrix<C64>, from: &FusionTreeBasis, into: &FusionTreeBasis) -> DMatrix<C64> {
    let pos: Vec<usize> = from.states().iter().map(|s| into.find(s).expect("tree lies in the larger basis")).collect();
    let mut out = DMatrix::zeros(into.dim(), into.dim());
    for j in 0..from.dim() {
        for i in 0..from.dim() {
            out[(pos[i], pos[j])] = x[(i, j)];
        }
    }
    out
}

pub(crate) fn extend(model: &AnyonModel, target: &TargetState, twist: &TwistSpec) -> Extended {
    let (basis3, x) = target.to_operator(model);
    let upper = insert_pairs(model, &basis3, 1, &loop_weights(model, twist.m_upper));
    let lower = insert_pairs(model, &upper.target, 4, &loop_weights(model, twist.m_lower));
    let x5 = upper.right_mul_adjoint(&upper.left_mul(&x));
    let x7 = lower.right_mul_adjoint(&lower.left_mul(&x5));
    let full = FusionTreeBasis::from_tuples(model, TARGET_LEAVES, lower.target.tuples().to_vec(), None).into_ref();
    Extended {
        layout: target.layout(),
        x: embed(&x7, &lower.target, &full),
        basis: full,
    }
}

/// Closes both loops and returns the unnormalized operator on `[C2, A, C1]`.
pub(crate) fn close(model: &AnyonModel, basis: &BasisRef, y: &DMatrix<C64>) -> (BasisRef, DMatrix<C64>) {
    let lower = remove_pairs(model, basis, 4);
    let upper = remove_pairs(model, &lower.target, 1);
    let y5 = lower.right_mul_adjoint(&lower.left_mul(y));
    let y3 = upper.right_mul_adjoint(&upper.left_mul(&y5));
    (upper.target.clone(), y3)
}

/// Appends a probe leaf of charge `b` in the state `weight |b><b|`.
fn attach_probe(model: &AnyonModel, basis: &BasisRef, y: &DMatrix<C64>, b: Charge, weight: f64) -> (BasisRef, DMatrix<C64>) {
    let n = basis.n_leaves();
    let tuples = basis
        .tuples()
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.push(b);
            t
        })
        .collect();
    let big = FusionTreeBasis::from_tuples(model, n + 1, tuples, None).into_ref();
    let mut groups: HashMap<Charge, Vec<(usize, usize)>> = HashMap::new();
    for (i, s) in big.states().iter().enumerate() {
        let head = TreeLabel {
            leaves: s.leaves[..n].to_vec(),
            internal: s.internal[..n].to_vec(),
        };
        groups.entry(s.total()).or_default().push((i, basis.find(&head).expect("head is a tree")));
    }
    let mut out = DMatrix::zeros(big.dim(), big.dim());
    for members in groups.values() {
        for &(i, ri) in members {
            for &(j, rj) in members {
                if basis.state(ri).total() == basis.state(rj).total() {
                    out[(i, j)] = y[(ri, rj)] * weight;
                }
            }
        }
    }
    (big, out)
}

/// Routes for a probe of charge `b`: from the right end to the entrance, then across along each arm.
struct ProbeRoutes {
    source: BasisRef,
    arms: [SparseMap; 2],
}

fn probe_routes(model: &AnyonModel, basis: &BasisRef) -> ProbeRoutes {
    let last = basis.n_leaves() - 1;
    let entrance = transport(model, basis, last, 0, |_| Crossing::Over);
    let arm = |path: Path| {
        let pattern = crossings(path);
        transport(model, &entrance.target, 0, last, |k| pattern[k]).after(&entrance)
    };
    ProbeRoutes {
        source: basis.clone(),
        arms: [arm(Path::I), arm(Path::II)],
    }
}

fn path_index(path: Path) -> usize {
    match path {
        Path::I => 0,
        Path::II => 1,
    }
}

/// A single loop step: for each probe charge `w`, weight `c_w` and arm pair `(p, p')`
/// with coefficient `k_{pp'}`, the probe passes and is traced out.
struct Step<'a> {
    charges: &'a [(Charge, C64)],
    pairs: Vec<(Path, Path, C64)>,
    phase: &'a dyn Fn(Charge, Path) -> C64,
}

struct Evaluator<'m> {
    model: &'m AnyonModel,
    ext_basis: BasisRef,
    routes: HashMap<Charge, (BasisRef, ProbeRoutes)>,
}

impl<'m> Evaluator<'m> {
    fn new(model: &'m AnyonModel, ext_basis: BasisRef) -> Self {
        Self {
            model,
            ext_basis,
            routes: HashMap::new(),
        }
    }

    fn apply(&mut self, y: &DMatrix<C64>, step: &Step<'_>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(y.nrows(), y.ncols());
        for &(b, cb) in step.charges {
            let (big, z) = attach_probe(self.model, &self.ext_basis, y, b, 1.0 / self.model.quantum_dimension(b));
            let model = self.model;
            let (_, routes) = self
                .routes
                .entry(b)
                .or_insert_with(|| (big.clone(), probe_routes(model, &big)));
            debug_assert_eq!(routes.source.dim(), big.dim());
            let mut passed: Option<DMatrix<C64>> = None;
            for &(p, q, k) in &step.pairs {
                let coef = k * cb * (step.phase)(b, p) * (step.phase)(b, q).conj();
                if coef == C64::new(0.0, 0.0) {
                    continue;
                }
                let ket = &routes.arms[path_index(p)];
                let bra = &routes.arms[path_index(q)];
                let term = bra.right_mul_adjoint(&ket.left_mul(&z)) * coef;
                passed = Some(match passed {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
            if let Some(passed) = passed {
                let after = routes.arms[0].target.clone();
                let (reduced, traced) = partial_trace_last(self.model, &after, &passed);
                out += embed(&traced, &reduced, &self.ext_basis);
            }
        }
        out
    }
}

fn probe_step_pairs(config: &InterferometerConfig, s: Outcome) -> Vec<(Path, Path, C64)> {
    let mut pairs = Vec::with_capacity(4);
    for p in Path::BOTH {
        for q in Path::BOTH {
            let mut k = config.splitters.path_amplitude(s, p) * config.splitters.path_amplitude(s, q).conj();
            if p != q {
                k *= config.visibility;
            }
            pairs.push((p, q, k));
        }
    }
    pairs
}

fn check_budget(n: usize) -> Result<()> {
    let configurations = 4u128.checked_pow(n as u32).unwrap_or(u128::MAX);
    if configurations > ORACLE_BUDGET {
        return Err(Error::OracleTooLarge {
            configurations,
            budget: ORACLE_BUDGET,
        });
    }
    Ok(())
}

/// Every outcome string of `n` probes with its probability and, if requested, post state.
pub fn oracle_post_states(
    model: &AnyonModel,
    target: &TargetState,
    config: &InterferometerConfig,
    n: usize,
    with_states: bool,
) -> Result<Vec<OracleRun>> {
    check_budget(n)?;
    config.validate()?;
    target.validate_shape(model)?;
    let ext = extend(model, target, &config.twist);
    let mut eval = Evaluator::new(model, ext.basis.clone());
    let charges: Vec<(Charge, C64)> = config.probe.distribution().iter().map(|&(b, p)| (b, C64::new(p, 0.0))).collect();
    let twist = config.twist;
    let phase = move |b: Charge, path: Path| twist.probe_phase(model, b, path);
    let mut frontier: Vec<(Vec<Outcome>, DMatrix<C64>)> = vec![(Vec::new(), ext.x.clone())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (outcomes, y) in &frontier {
            for s in Outcome::BOTH {
                let step = Step {
                    charges: &charges,
                    pairs: probe_step_pairs(config, s),
                    phase: &phase,
                };
                let mut string = outcomes.clone();
                string.push(s);
                next.push((string, eval.apply(y, &step)));
            }
        }
        frontier = next;
    }
    frontier
        .into_iter()
        .map(|(outcomes, y)| {
            let (basis3, y3) = close(model, &ext.basis, &y);
            let probability = quantum_trace(model, &basis3, &y3).re;
            let post_state = if with_states && probability > 1e-14 {
                let scaled = y3 / C64::new(probability, 0.0);
                Some(TargetState::from_operator(model, ext.layout, &basis3, &scaled))
            } else {
                None
            };
            Ok(OracleRun {
                outcomes,
                probability,
                post_state,
            })
        })
        .collect()
}

/// Joint probability of every outcome string of `n` probes.
pub fn enumerate_probe_paths(
    model: &AnyonModel,
    target: &TargetState,
    config: &InterferometerConfig,
    n: usize,
) -> Result<BTreeMap<Vec<Outcome>, f64>> {
    Ok(oracle_post_states(model, target, config, n, false)?
        .into_iter()
        .map(|run| (run.outcomes, run.probability))
        .collect())
}

/// Fixed state of class `class` evaluated as four `omega` loops threaded along the arms.
///
/// Both diagonal arm pairs carry `omega_{B0}` with `B0 = {a : M_{aB} = 1}`; the
/// cross pairs carry `omega_C` and its conjugate.
pub fn omega_form_fixed_state(
    model: &AnyonModel,
    target: &TargetState,
    class: &[Charge],
    config: &InterferometerConfig,
) -> Result<TargetState> {
    omega_tau_form(model, target, class, &InterferometerConfig {
        twist: TwistSpec::NONE,
        ..config.clone()
    })
}

/// [`omega_form_fixed_state`] with the twisting loops of `config.twist` linked through the arms.
pub fn omega_tau_form(
    model: &AnyonModel,
    target: &TargetState,
    class: &[Charge],
    config: &InterferometerConfig,
) -> Result<TargetState> {
    target.validate_shape(model)?;
    let monodromy = config.probe.monodromy(model);
    let blind: Vec<Charge> = model.charges().filter(|&a| (monodromy[a] - 1.0).norm() < 1e-10).collect();
    let omega_blind = model.omega_coefficients(&blind)?;
    let omega_class = model.omega_coefficients(class)?;
    let loop_weights = |omega: &[C64], conjugate: bool| -> Vec<(Charge, C64)> {
        model
            .charges()
            .map(|w| {
                let c = if conjugate { omega[w].conj() } else { omega[w] };
                (w, c * model.quantum_dimension(w))
            })
            .filter(|(_, c)| c.norm() > COEFFICIENT_CUTOFF)
            .collect()
    };
    let ext = extend(model, target, &config.twist);
    let mut eval = Evaluator::new(model, ext.basis.clone());
    let unit = |_: Charge, _: Path| C64::new(1.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let steps = [
        (loop_weights(&omega_blind, false), Path::I, Path::I),
        (loop_weights(&omega_blind, false), Path::II, Path::II),
        (loop_weights(&omega_class, false), Path::I, Path::II),
        (loop_weights(&omega_class, true), Path::II, Path::I),
    ];
    let mut y = ext.x.clone();
    for (weights, p, q) in &steps {
        let step = Step {
            charges: weights,
            pairs: vec![(*p, *q, one)],
            phase: &unit,
        };
        y = eval.apply(&y, &step);
    }
    let (basis3, y3) = close(model, &ext.basis, &y);
    let probability = quantum_trace(model, &basis3, &y3).re;
    if probability < 1e-14 {
        return Err(Error::ZeroProbabilityOutcome { probability });
    }
    Ok(TargetState::from_operator(model, ext.layout, &basis3, &(y3 / C64::new(probability, 0.0))))
}
