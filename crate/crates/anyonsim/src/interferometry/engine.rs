//! Closed-form probe evaluation on operators in a caterpillar basis.
//!
//! A probe taking a given arm winds around the leftmost `k` leaves of the ket and
//! the leftmost `k'` leaves of the bra. After the probe is traced out this is a
//! single loop around the charge line `e` that joins the two prefixes, so it acts
//! diagonally once the operator is written in the crossed channel of the split
//! `(prefix, suffix)` trees.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::config::{InterferometerConfig, Outcome, Path};
use crate::error::Result;
use crate::mtc::{AnyonModel, Charge};
use crate::oracle::{crossed_f, BasisRef, CrossedF, FusionTreeBasis, TreeLabel};

/// Charges of a tree `(P_u S_v)_f` built from a prefix caterpillar `P` and a suffix caterpillar `S`.
#[derive(Debug, Clone, Copy)]
struct SplitLabel {
    u: Charge,
    v: Charge,
}

/// Split trees of one leaf tuple at one cut position.
struct TupleSplit {
    /// One entry per stem `(P, S)`: its charges and `(f, local column)` members.
    stems: Vec<(SplitLabel, Vec<(Charge, usize)>)>,
    /// Column `j` holds split tree `j` in the caterpillar trees of the tuple.
    unitary: DMatrix<C64>,
}

/// Caterpillar expansion of `|P (S) ; f>` where the suffix caterpillar has the given leaves and internal charges.
fn expand(model: &AnyonModel, prefix: &TreeLabel, leaves: &[Charge], internal: &[Charge], f: Charge) -> Vec<(TreeLabel, C64)> {
    let u = prefix.total();
    let Some((&s, rest)) = leaves.split_last() else {
        return if f == u { vec![(prefix.clone(), C64::new(1.0, 0.0))] } else { Vec::new() };
    };
    let attach = |mut tree: TreeLabel| {
        tree.leaves.push(s);
        tree.internal.push(f);
        tree
    };
    if rest.is_empty() {
        return if model.fuses(u, s, f) { vec![(attach(prefix.clone()), C64::new(1.0, 0.0))] } else { Vec::new() };
    }
    let v = internal[internal.len() - 1];
    let inner = internal[internal.len() - 2];
    let mut out = Vec::new();
    for &t in model.products(u, inner) {
        if !model.fuses(t, s, f) {
            continue;
        }
        let c = model.f(u, inner, s, f, t, v).conj();
        for (tree, c2) in expand(model, prefix, rest, &internal[..internal.len() - 1], t) {
            out.push((attach(tree), c * c2));
        }
    }
    out
}

impl TupleSplit {
    fn new(model: &AnyonModel, basis: &FusionTreeBasis, members: &[usize], tuple: &[Charge], k: usize) -> Self {
        let prefixes = FusionTreeBasis::from_charges(model, &tuple[..k]);
        let suffixes = FusionTreeBasis::from_charges(model, &tuple[k..]);
        let local = |tree: &TreeLabel| {
            let global = basis.find(tree).expect("expanded tree lies in the basis");
            members.iter().position(|&m| m == global).expect("expanded tree keeps its leaves")
        };
        let mut stems = Vec::new();
        let mut unitary = DMatrix::zeros(members.len(), members.len());
        let mut column = 0;
        for p in prefixes.states() {
            for s in suffixes.states() {
                let label = SplitLabel {
                    u: p.total(),
                    v: s.total(),
                };
                let mut entries = Vec::new();
                for &f in model.products(label.u, label.v) {
                    for (tree, c) in expand(model, p, &s.leaves, &s.internal, f) {
                        unitary[(local(&tree), column)] += c;
                    }
                    entries.push((f, column));
                    column += 1;
                }
                if !entries.is_empty() {
                    stems.push((label, entries));
                }
            }
        }
        debug_assert_eq!(column, members.len());
        Self { stems, unitary }
    }
}

/// Probe evaluation for operators on a fixed caterpillar basis.
pub(crate) struct ProbeEngine<'m> {
    model: &'m AnyonModel,
    basis: BasisRef,
    /// Basis indices of the trees of each leaf tuple.
    blocks: Vec<Vec<usize>>,
    /// Split trees of every tuple, for the reach of each arm.
    splits: [Vec<TupleSplit>; 2],
    crossed: RefCell<HashMap<[Charge; 4], Rc<CrossedF>>>,
}

fn path_index(path: Path) -> usize {
    match path {
        Path::I => 0,
        Path::II => 1,
    }
}

impl<'m> ProbeEngine<'m> {
    /// `reach[p]` is the number of leftmost leaves encircled by a probe on arm `p`.
    ///
    /// The basis must contain every total charge of each of its leaf tuples.
    pub fn new(model: &'m AnyonModel, basis: BasisRef, reach: [usize; 2]) -> Self {
        let position: HashMap<&[Charge], usize> = basis.tuples().iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut blocks = vec![Vec::new(); basis.tuples().len()];
        for (i, s) in basis.states().iter().enumerate() {
            blocks[position[s.leaves.as_slice()]].push(i);
        }
        let splits = reach.map(|k| {
            basis
                .tuples()
                .iter()
                .zip(&blocks)
                .map(|(t, members)| TupleSplit::new(model, &basis, members, t, k))
                .collect()
        });
        Self {
            model,
            basis,
            blocks,
            splits,
            crossed: RefCell::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &'m AnyonModel {
        self.model
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    fn crossed(&self, key: [Charge; 4]) -> Result<Rc<CrossedF>> {
        if let Some(g) = self.crossed.borrow().get(&key) {
            return Ok(g.clone());
        }
        let g = Rc::new(crossed_f(self.model, key[0], key[1], key[2], key[3])?);
        self.crossed.borrow_mut().insert(key, g.clone());
        Ok(g)
    }

    /// Multiplies each crossed-channel component by `weight(u, u', e)`, with the ket split
    /// at the reach of `ket` and the bra at the reach of `bra`.
    pub fn channel_map(
        &self,
        x: &DMatrix<C64>,
        ket: Path,
        bra: Path,
        weight: impl Fn(Charge, Charge, Charge) -> C64,
    ) -> Result<DMatrix<C64>> {
        let zero = C64::new(0.0, 0.0);
        let mut out = DMatrix::zeros(x.nrows(), x.ncols());
        for (rows_idx, rows) in self.blocks.iter().zip(&self.splits[path_index(ket)]) {
            for (cols_idx, cols) in self.blocks.iter().zip(&self.splits[path_index(bra)]) {
                let block = DMatrix::from_fn(rows_idx.len(), cols_idx.len(), |r, c| x[(rows_idx[r], cols_idx[c])]);
                if block.iter().all(|&v| v == zero) {
                    continue;
                }
                let xs = rows.unitary.adjoint() * block * &cols.unitary;
                let mut ys = DMatrix::zeros(xs.nrows(), xs.ncols());
                for (ket_label, ket_members) in &rows.stems {
                    for (bra_label, bra_members) in &cols.stems {
                        self.crossed_block(&xs, &mut ys, (ket_label, ket_members), (bra_label, bra_members), &weight)?;
                    }
                }
                let back = &rows.unitary * ys * cols.unitary.adjoint();
                for (r, &i) in rows_idx.iter().enumerate() {
                    for (c, &j) in cols_idx.iter().enumerate() {
                        out[(i, j)] = back[(r, c)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies the channel weights to one pair of stems.
    fn crossed_block(
        &self,
        xs: &DMatrix<C64>,
        ys: &mut DMatrix<C64>,
        (ket, ket_members): (&SplitLabel, &[(Charge, usize)]),
        (bra, bra_members): (&SplitLabel, &[(Charge, usize)]),
        weight: &impl Fn(Charge, Charge, Charge) -> C64,
    ) -> Result<()> {
        let pairs: Vec<(Charge, usize, usize)> = ket_members
            .iter()
            .filter_map(|&(f, i)| bra_members.iter().find(|&&(g, _)| g == f).map(|&(_, j)| (f, i, j)))
            .collect();
        if pairs.iter().all(|&(_, i, j)| xs[(i, j)] == C64::new(0.0, 0.0)) {
            return Ok(());
        }
        let g = self.crossed([ket.u, ket.v, bra.u, bra.v])?;
        let sqrt_d = |f: Charge| self.model.quantum_dimension(f).sqrt();
        let row_of = |f: Charge| g.totals.iter().position(|&t| t == f).expect("block total is a crossed-F row");
        let mut x_hat = vec![C64::new(0.0, 0.0); g.totals.len()];
        for &(f, i, j) in &pairs {
            x_hat[row_of(f)] = xs[(i, j)] * sqrt_d(f);
        }
        let y_hat: Vec<C64> = g
            .channels
            .iter()
            .enumerate()
            .map(|(col, &e)| {
                let overlap: C64 = (0..g.totals.len()).map(|row| g.matrix[(row, col)].conj() * x_hat[row]).sum();
                overlap * weight(ket.u, bra.u, e)
            })
            .collect();
        for &(f, i, j) in &pairs {
            let row = row_of(f);
            let back: C64 = (0..g.channels.len()).map(|col| g.matrix[(row, col)] * y_hat[col]).sum();
            ys[(i, j)] = back / sqrt_d(f);
        }
        Ok(())
    }

    /// A probe loop on arms `(ket, bra)` with weight `w(e)` on crossed channel `e`.
    pub fn loop_term(&self, x: &DMatrix<C64>, ket: Path, bra: Path, w: impl Fn(Charge) -> C64) -> Result<DMatrix<C64>> {
        self.channel_map(x, ket, bra, |_, _, e| w(e))
    }

    /// Unnormalized effect of one probe registered at detector `s`.
    pub fn probe_step(&self, x: &DMatrix<C64>, config: &InterferometerConfig, s: Outcome) -> Result<DMatrix<C64>> {
        let model = self.model;
        let mut out = DMatrix::zeros(x.nrows(), x.ncols());
        for p in Path::BOTH {
            for q in Path::BOTH {
                let mut k = config.splitters.path_amplitude(s, p) * config.splitters.path_amplitude(s, q).conj();
                if p != q {
                    k *= config.visibility;
                }
                if k == C64::new(0.0, 0.0) {
                    continue;
                }
                let weights: Vec<C64> = model
                    .charges()
                    .map(|e| {
                        config
                            .probe
                            .distribution()
                            .iter()
                            .map(|&(b, pb)| {
                                let phase = config.twist.probe_phase(model, b, p) * config.twist.probe_phase(model, b, q).conj();
                                model.monodromy(e, b) * phase * pb
                            })
                            .sum()
                    })
                    .collect();
                out += self.loop_term(x, p, q, |e| weights[e])? * k;
            }
        }
        Ok(out)
    }

    /// Unnormalized operators `Y_N[n]` for every count `n` of `Right` outcomes among `n_probes` probes.
    pub fn count_operators(&self, x: &DMatrix<C64>, config: &InterferometerConfig, n_probes: usize) -> Result<Vec<DMatrix<C64>>> {
        let mut layer = vec![x.clone()];
        for _ in 0..n_probes {
            let mut next = vec![DMatrix::zeros(x.nrows(), x.ncols()); layer.len() + 1];
            for (n, y) in layer.iter().enumerate() {
                next[n + 1] += self.probe_step(y, config, Outcome::Right)?;
                next[n] += self.probe_step(y, config, Outcome::Up)?;
            }
            layer = next;
        }
        Ok(layer)
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::interferometry::{BeamSplitterPair, Layout, ProbeSpec, TargetState, TwistSpec, TwistVariant};
    use crate::mtc::bundled;
    use crate::oracle::{close_twist_loops, enumerate_probe_paths, open_twist_loops, quantum_trace};

    fn string_probability(model: &AnyonModel, target: &TargetState, config: &InterferometerConfig, outcomes: &[Outcome]) -> f64 {
        let ext = open_twist_loops(model, target, &config.twist);
        let engine = ProbeEngine::new(model, ext.basis.clone(), [5, 2]);
        let mut y = ext.x.clone();
        for &s in outcomes {
            y = engine.probe_step(&y, config, s).unwrap();
        }
        let (basis, y3) = close_twist_loops(model, &ext.basis, &y);
        quantum_trace(model, &basis, &y3).re
    }

    #[test]
    fn agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["z3", "ising", "fibonacci"] {
            let model = bundled(name).unwrap();
            let all: Vec<Charge> = model.charges().collect();
            for twist in [TwistSpec::NONE, TwistSpec::new(1, 0, TwistVariant::Twist), TwistSpec::new(2, -1, TwistVariant::PureBraid)] {
                let target = TargetState::random(&model, Layout::Generalized, [&all, &all, &all], || rng.gen_range(-1.0..1.0)).unwrap();
                let splitters = BeamSplitterPair::from_angles(0.7, 0.3, -0.4, 1.1, 0.9, 0.2, 0.5, -0.8);
                let probe = ProbeSpec::new(&model, vec![(model.rank() - 1, 0.6), (1, 0.4)]).unwrap();
                let config = InterferometerConfig::new(splitters, probe).with_twist(twist);
                let exact = enumerate_probe_paths(&model, &target, &config, 2).unwrap();
                for (outcomes, p) in &exact {
                    let q = string_probability(&model, &target, &config, outcomes);
                    assert!((p - q).abs() < 1e-9, "{name} {twist:?} {outcomes:?}: oracle {p} engine {q}");
                }
            }
        }
    }
}
