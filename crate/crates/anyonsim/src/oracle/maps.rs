//! Sparse linear maps between fusion-tree bases and the elementary moves that generate them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::basis::{BasisRef, DiagramVector, FusionTreeBasis, TreeLabel};
use crate::mtc::{AnyonModel, Charge, VACUUM};

/// Which strand passes in front when two neighbouring leaves are exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    /// The braiding `c_{a,b}` with eigenvalues `R^{ab}`.
    Over,
    /// The inverse braiding `c_{b,a}^{-1}` with eigenvalues `conj(R^{ba})`.
    Under,
}

/// Linear map stored column by column: `columns[j]` lists `(target index, coefficient)`.
#[derive(Debug, Clone)]
pub struct SparseMap {
    pub source: BasisRef,
    pub target: BasisRef,
    columns: Vec<Vec<(usize, C64)>>,
}

impl SparseMap {
    /// Builds a map from the images of each source basis state.
    pub fn from_fn(source: BasisRef, target: BasisRef, image: impl Fn(&TreeLabel) -> Vec<(TreeLabel, C64)>) -> Self {
        let columns = source
            .states()
            .iter()
            .map(|s| {
                let mut col: Vec<(usize, C64)> = Vec::new();
                for (label, c) in image(s) {
                    if c == C64::new(0.0, 0.0) {
                        continue;
                    }
                    match target.find(&label) {
                        Some(i) => match col.iter_mut().find(|(t, _)| *t == i) {
                            Some(entry) => entry.1 += c,
                            None => col.push((i, c)),
                        },
                        None => debug_assert!(false, "image label {label:?} missing from target basis"),
                    }
                }
                col
            })
            .collect();
        Self {
            source,
            target,
            columns,
        }
    }

    pub fn identity(basis: BasisRef) -> Self {
        let columns = (0..basis.dim()).map(|i| vec![(i, C64::new(1.0, 0.0))]).collect();
        Self {
            source: basis.clone(),
            target: basis,
            columns,
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, C64)] {
        &self.columns[j]
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.target.dim());
        for (j, col) in self.columns.iter().enumerate() {
            let x = v[j];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for &(i, c) in col {
                out[i] += c * x;
            }
        }
        out
    }

    pub fn apply_vector(&self, v: &DiagramVector) -> DiagramVector {
        DiagramVector {
            basis: self.target.clone(),
            amplitudes: self.apply(&v.amplitudes),
        }
    }

    /// `self * x`, where the rows of `x` are indexed by the source basis.
    pub fn left_mul(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.target.dim(), x.ncols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                for k in 0..x.ncols() {
                    out[(i, k)] += c * x[(j, k)];
                }
            }
        }
        out
    }

    /// `x * self^dagger`, where the columns of `x` are indexed by the source basis.
    pub fn right_mul_adjoint(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(x.nrows(), self.target.dim());
        for (j, col) in self.columns.iter().enumerate() {
            let src = x.column(j);
            for &(i, c) in col {
                let cc = c.conj();
                let mut dst = out.column_mut(i);
                dst.axpy(cc, &src, C64::new(1.0, 0.0));
            }
        }
        out
    }

    /// The map `self` after `first`.
    pub fn after(&self, first: &SparseMap) -> SparseMap {
        debug_assert_eq!(first.target.dim(), self.source.dim());
        let columns = first
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, C64)> = Vec::new();
                for &(m, c1) in col {
                    for &(i, c2) in &self.columns[m] {
                        match acc.iter_mut().find(|(t, _)| *t == i) {
                            Some(entry) => entry.1 += c1 * c2,
                            None => acc.push((i, c1 * c2)),
                        }
                    }
                }
                acc
            })
            .collect();
        SparseMap {
            source: first.source.clone(),
            target: self.target.clone(),
            columns,
        }
    }

    pub fn adjoint(&self) -> SparseMap {
        let mut columns = vec![Vec::new(); self.target.dim()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                columns[i].push((j, c.conj()));
            }
        }
        SparseMap {
            source: self.target.clone(),
            target: self.source.clone(),
            columns,
        }
    }

    pub fn scaled(mut self, factor: C64) -> SparseMap {
        for col in &mut self.columns {
            for entry in col.iter_mut() {
                entry.1 *= factor;
            }
        }
        self
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.target.dim(), self.source.dim());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                out[(i, j)] += c;
            }
        }
        out
    }
}

fn totals(basis: &FusionTreeBasis) -> Vec<Charge> {
    let mut t: Vec<Charge> = basis.states().iter().map(TreeLabel::total).collect();
    t.sort_unstable();
    t.dedup();
    t
}

/// A basis over `tuples` with the total charges of `like`.
fn rebuild(model: &AnyonModel, like: &FusionTreeBasis, n_leaves: usize, tuples: Vec<Vec<Charge>>) -> BasisRef {
    FusionTreeBasis::from_tuples(model, n_leaves, tuples, Some(&totals(like))).into_ref()
}

/// Leaf tuples of `basis` with the slice `range` replaced by each of the alternatives `with(slice)`.
fn replace_leaves(
    basis: &FusionTreeBasis,
    range: std::ops::Range<usize>,
    with: impl Fn(&[Charge]) -> Vec<Vec<Charge>>,
) -> Vec<Vec<Charge>> {
    let mut out = Vec::new();
    for t in basis.tuples() {
        for middle in with(&t[range.clone()]) {
            let mut next = t[..range.start].to_vec();
            next.extend(middle);
            next.extend_from_slice(&t[range.end..]);
            out.push(next);
        }
    }
    out
}

/// Exchange of leaves `k` and `k + 1`.
pub fn braid(model: &AnyonModel, basis: &BasisRef, k: usize, crossing: Crossing) -> SparseMap {
    let tuples = replace_leaves(basis, k..k + 2, |pair| vec![vec![pair[1], pair[0]]]);
    let target = rebuild(model, basis, basis.n_leaves(), tuples);
    SparseMap::from_fn(basis.clone(), target, |s| {
        let big_g = s.left_of(k);
        let (a, b) = (s.leaves[k], s.leaves[k + 1]);
        let (g, h) = (s.internal[k], s.internal[k + 1]);
        let mut out = Vec::new();
        for &g2 in model.products(big_g, b) {
            if !model.fuses(g2, a, h) {
                continue;
            }
            let coeff: C64 = model
                .products(a, b)
                .iter()
                .map(|&u| {
                    let phase = match crossing {
                        Crossing::Over => model.r(a, b, u),
                        Crossing::Under => model.r(b, a, u).conj(),
                    };
                    model.f(big_g, a, b, h, g, u) * phase * model.f(big_g, b, a, h, g2, u).conj()
                })
                .sum();
            let mut label = s.clone();
            label.leaves.swap(k, k + 1);
            label.internal[k] = g2;
            out.push((label, coeff));
        }
        out
    })
}

/// Isometric splitting of leaf `k` into two leaves with charges drawn from `x_set` and `y_set`.
pub fn split_leaf(model: &AnyonModel, basis: &BasisRef, k: usize, x_set: &[Charge], y_set: &[Charge]) -> SparseMap {
    let tuples = replace_leaves(basis, k..k + 1, |l| {
        let mut pairs = Vec::new();
        for &x in x_set {
            for &y in y_set {
                if model.fuses(x, y, l[0]) {
                    pairs.push(vec![x, y]);
                }
            }
        }
        pairs
    });
    let target = rebuild(model, basis, basis.n_leaves() + 1, tuples);
    split_into(model, basis, &target, k)
}

fn split_into(model: &AnyonModel, source: &BasisRef, target: &BasisRef, k: usize) -> SparseMap {
    let x_set = target.leaf_sets()[k].clone();
    let y_set = target.leaf_sets()[k + 1].clone();
    SparseMap::from_fn(source.clone(), target.clone(), |s| {
        let big_g = s.left_of(k);
        let (l, g) = (s.leaves[k], s.internal[k]);
        let mut out = Vec::new();
        for &x in &x_set {
            for &y in &y_set {
                if !model.fuses(x, y, l) {
                    continue;
                }
                for &h in model.products(big_g, x) {
                    if !model.fuses(h, y, g) {
                        continue;
                    }
                    let mut label = s.clone();
                    label.leaves.splice(k..=k, [x, y]);
                    label.internal.insert(k, h);
                    if target.find(&label).is_some() {
                        out.push((label, model.f(big_g, x, y, g, h, l).conj()));
                    }
                }
            }
        }
        out
    })
}

/// Isometric fusion of leaves `k` and `k + 1` into one leaf with charge in `z_set`; the adjoint of splitting.
pub fn fuse_leaves(model: &AnyonModel, basis: &BasisRef, k: usize, z_set: &[Charge]) -> SparseMap {
    let tuples = replace_leaves(basis, k..k + 2, |pair| {
        z_set.iter().filter(|&&z| model.fuses(pair[0], pair[1], z)).map(|&z| vec![z]).collect()
    });
    let fused = rebuild(model, basis, basis.n_leaves() - 1, tuples);
    split_into(model, &fused, basis, k).adjoint()
}

/// Creation of particle-antiparticle pairs `(x, xbar)` at positions `k`, `k + 1`, weighted per charge.
///
/// Each pair is created by the cup of norm `sqrt(d_x)`, so closing it again with
/// [`remove_pairs`] yields the loop value `d_x`.
pub fn insert_pairs(model: &AnyonModel, basis: &BasisRef, k: usize, weights: &[(Charge, C64)]) -> SparseMap {
    let tuples = replace_leaves(basis, k..k, |_| weights.iter().map(|&(x, _)| vec![x, model.dual(x)]).collect());
    let target = rebuild(model, basis, basis.n_leaves() + 2, tuples);
    insert_into(model, basis, &target, k, weights)
}

fn insert_into(model: &AnyonModel, source: &BasisRef, target: &BasisRef, k: usize, weights: &[(Charge, C64)]) -> SparseMap {
    SparseMap::from_fn(source.clone(), target.clone(), |s| {
        let big_g = if k == s.leaves.len() { s.total() } else { s.left_of(k) };
        let mut out = Vec::new();
        for &(x, w) in weights {
            let xbar = model.dual(x);
            let scale = w * model.quantum_dimension(x).sqrt();
            for &h in model.products(big_g, x) {
                if !model.fuses(h, xbar, big_g) {
                    continue;
                }
                let mut label = s.clone();
                label.leaves.splice(k..k, [x, xbar]);
                label.internal.splice(k..k, [h, big_g]);
                if target.find(&label).is_some() {
                    out.push((label, scale * model.f(big_g, x, xbar, big_g, h, VACUUM).conj()));
                }
            }
        }
        out
    })
}

/// Annihilation of the pair at positions `k`, `k + 1` into the vacuum; the adjoint of [`insert_pairs`] with unit weights.
pub fn remove_pairs(model: &AnyonModel, basis: &BasisRef, k: usize) -> SparseMap {
    let closable = |pair: &[Charge]| pair[1] == model.dual(pair[0]);
    let tuples = replace_leaves(basis, k..k + 2, |pair| if closable(pair) { vec![Vec::new()] } else { Vec::new() });
    let reduced = rebuild(model, basis, basis.n_leaves() - 2, tuples);
    let mut xs: Vec<Charge> = basis.tuples().iter().filter(|t| closable(&t[k..k + 2])).map(|t| t[k]).collect();
    xs.sort_unstable();
    xs.dedup();
    let weights: Vec<(Charge, C64)> = xs.into_iter().map(|x| (x, C64::new(1.0, 0.0))).collect();
    insert_into(model, &reduced, basis, k, &weights).adjoint()
}

/// Moves leaf `from` to position `to` by successive exchanges of the chosen crossing.
///
/// Moving right, the travelling leaf is the left partner of every exchange;
/// moving left, it is the right partner.
pub fn transport(model: &AnyonModel, basis: &BasisRef, from: usize, to: usize, crossing: impl Fn(usize) -> Crossing) -> SparseMap {
    let mut map = SparseMap::identity(basis.clone());
    let mut pos = from;
    while pos != to {
        let k = if to > pos { pos } else { pos - 1 };
        let step = braid(model, &map.target, k, crossing(k));
        map = step.after(&map);
        pos = if to > pos { pos + 1 } else { pos - 1 };
    }
    map
}
