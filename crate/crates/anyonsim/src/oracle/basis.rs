use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::mtc::{AnyonModel, Charge, VACUUM};

/// A labeling of a left-nested fusion tree.
///
/// `internal[k]` is the charge of leaves `0..=k` fused together, so the last
/// entry is the total charge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeLabel {
    pub leaves: Vec<Charge>,
    pub internal: Vec<Charge>,
}

impl TreeLabel {
    pub fn total(&self) -> Charge {
        self.internal.last().copied().unwrap_or(VACUUM)
    }

    /// Charge entering vertex `k` from the left, i.e. the fused charge of leaves `0..k`.
    pub fn left_of(&self, k: usize) -> Charge {
        if k == 0 {
            VACUUM
        } else {
            self.internal[k - 1]
        }
    }
}

/// Orthonormal basis of left-nested fusion trees over an explicit list of leaf-charge tuples.
#[derive(Debug, Clone)]
pub struct FusionTreeBasis {
    n_leaves: usize,
    leaf_sets: Vec<Vec<Charge>>,
    tuples: Vec<Vec<Charge>>,
    states: Vec<TreeLabel>,
    index: HashMap<TreeLabel, usize>,
}

pub type BasisRef = Arc<FusionTreeBasis>;

impl FusionTreeBasis {
    /// All trees whose leaves range independently over the given charge sets, with any total charge.
    pub fn new(model: &AnyonModel, leaf_sets: Vec<Vec<Charge>>) -> Self {
        let n = leaf_sets.len();
        Self::from_tuples(model, n, cartesian(&leaf_sets), None)
    }

    /// Trees over independent leaf sets whose total charge lies in `totals`.
    pub fn with_totals(model: &AnyonModel, leaf_sets: Vec<Vec<Charge>>, totals: &[Charge]) -> Self {
        let n = leaf_sets.len();
        Self::from_tuples(model, n, cartesian(&leaf_sets), Some(totals))
    }

    /// Trees with one fixed charge per leaf.
    pub fn from_charges(model: &AnyonModel, leaves: &[Charge]) -> Self {
        Self::from_tuples(model, leaves.len(), vec![leaves.to_vec()], None)
    }

    /// Trees whose leaf charges form one of `tuples`, optionally restricted to the given totals.
    pub fn from_tuples(model: &AnyonModel, n_leaves: usize, mut tuples: Vec<Vec<Charge>>, totals: Option<&[Charge]>) -> Self {
        debug_assert!(tuples.iter().all(|t| t.len() == n_leaves));
        tuples.sort_unstable();
        tuples.dedup();
        let mut states = Vec::new();
        let mut internal = Vec::with_capacity(n_leaves);
        for t in &tuples {
            enumerate(model, t, &mut internal, &mut states);
        }
        if let Some(totals) = totals {
            states.retain(|s| totals.contains(&s.total()));
        }
        states.sort_by(|a, b| (a.total(), &a.leaves, &a.internal).cmp(&(b.total(), &b.leaves, &b.internal)));
        let occupied: std::collections::HashSet<&[Charge]> = states.iter().map(|s| s.leaves.as_slice()).collect();
        tuples.retain(|t| occupied.contains(t.as_slice()));
        let mut leaf_sets = vec![Vec::new(); n_leaves];
        for t in &tuples {
            for (set, &c) in leaf_sets.iter_mut().zip(t) {
                set.push(c);
            }
        }
        for set in &mut leaf_sets {
            set.sort_unstable();
            set.dedup();
        }
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self {
            n_leaves,
            leaf_sets,
            tuples,
            states,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    /// Charges occurring at each leaf position.
    pub fn leaf_sets(&self) -> &[Vec<Charge>] {
        &self.leaf_sets
    }

    /// Leaf-charge tuples carrying at least one tree, sorted.
    pub fn tuples(&self) -> &[Vec<Charge>] {
        &self.tuples
    }

    pub fn states(&self) -> &[TreeLabel] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &TreeLabel {
        &self.states[i]
    }

    pub fn find(&self, label: &TreeLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn into_ref(self) -> BasisRef {
        Arc::new(self)
    }
}

fn cartesian(leaf_sets: &[Vec<Charge>]) -> Vec<Vec<Charge>> {
    let mut out: Vec<Vec<Charge>> = vec![Vec::new()];
    for set in leaf_sets {
        out = out
            .into_iter()
            .flat_map(|t| {
                set.iter().map(move |&c| {
                    let mut next = t.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

fn enumerate(model: &AnyonModel, leaves: &[Charge], internal: &mut Vec<Charge>, out: &mut Vec<TreeLabel>) {
    let k = internal.len();
    if k == leaves.len() {
        out.push(TreeLabel {
            leaves: leaves.to_vec(),
            internal: internal.clone(),
        });
        return;
    }
    let left = internal.last().copied().unwrap_or(VACUUM);
    for &g in model.products(left, leaves[k]) {
        internal.push(g);
        enumerate(model, leaves, internal, out);
        internal.pop();
    }
}

/// Explicit state vector in a fusion-tree basis.
#[derive(Debug, Clone)]
pub struct DiagramVector {
    pub basis: BasisRef,
    pub amplitudes: DVector<C64>,
}

impl DiagramVector {
    pub fn zeros(basis: BasisRef) -> Self {
        let n = basis.dim();
        Self {
            basis,
            amplitudes: DVector::zeros(n),
        }
    }

    /// Inner product `<self|other>`; both vectors must share a basis.
    pub fn inner(&self, other: &DiagramVector) -> C64 {
        debug_assert_eq!(self.basis.dim(), other.basis.dim());
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Quantum-trace norm `sum_i d_{total(i)} |v_i|^2`.
    pub fn quantum_norm_sqr(&self, model: &AnyonModel) -> f64 {
        self.basis
            .states()
            .iter()
            .zip(self.amplitudes.iter())
            .map(|(s, v)| model.quantum_dimension(s.total()) * v.norm_sqr())
            .sum()
    }
}
