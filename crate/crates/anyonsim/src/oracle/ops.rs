use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::basis::{BasisRef, FusionTreeBasis, TreeLabel};
use super::maps::{braid, fuse_leaves, insert_pairs, remove_pairs, split_leaf, transport, Crossing, SparseMap};
use crate::error::{Error, Result};
use crate::mtc::{theta_pow, AnyonModel, Charge, VACUUM};

/// Quantum trace `sum_i d_{total(i)} x_ii`.
pub fn quantum_trace(model: &AnyonModel, basis: &FusionTreeBasis, x: &DMatrix<C64>) -> C64 {
    basis
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| x[(i, i)] * model.quantum_dimension(s.total()))
        .sum()
}

/// Quantum partial trace over the last leaf.
///
/// Closing the last leaf `b` of `|t, b; h><t', b; h|` leaves `(d_h / d_g) |t><t'|`
/// where `g` is the total charge of `t`.
pub fn partial_trace_last(model: &AnyonModel, basis: &BasisRef, x: &DMatrix<C64>) -> (BasisRef, DMatrix<C64>) {
    let n = basis.n_leaves();
    let heads = basis.tuples().iter().map(|t| t[..n - 1].to_vec()).collect();
    let reduced = FusionTreeBasis::from_tuples(model, n - 1, heads, None).into_ref();
    let mut groups: HashMap<(Charge, Charge), Vec<(usize, usize)>> = HashMap::new();
    for (i, s) in basis.states().iter().enumerate() {
        let head = TreeLabel {
            leaves: s.leaves[..n - 1].to_vec(),
            internal: s.internal[..n - 1].to_vec(),
        };
        let r = reduced.find(&head).expect("prefix of a tree is a tree");
        groups.entry((s.leaves[n - 1], s.total())).or_default().push((i, r));
    }
    let mut out = DMatrix::zeros(reduced.dim(), reduced.dim());
    for (&(_, h), members) in &groups {
        for &(i, ri) in members {
            let g = reduced.state(ri).total();
            let ratio = model.quantum_dimension(h) / model.quantum_dimension(g);
            for &(j, rj) in members {
                if reduced.state(rj).total() == g {
                    out[(ri, rj)] += x[(i, j)] * ratio;
                }
            }
        }
    }
    (reduced, out)
}

/// Sum of closed loops encircling every leaf, with weight `weights[w]` on the loop of charge `w`.
///
/// A loop of charge `w` around a line of charge `a` evaluates to `S_{wa} / S_{0a}`.
pub fn loop_operator(model: &AnyonModel, basis: &BasisRef, weights: &[C64]) -> DMatrix<C64> {
    let n = basis.n_leaves();
    let mut total = DMatrix::zeros(basis.dim(), basis.dim());
    for w in model.charges() {
        if weights[w] == C64::new(0.0, 0.0) {
            continue;
        }
        // The pair (w, wbar) is created at the far left and `wbar` circles every leaf
        // before the pair is annihilated again.
        let create = insert_pairs(model, basis, 0, &[(w, weights[w])]);
        let out = transport(model, &create.target, 1, n + 1, |_| Crossing::Under);
        let back = transport(model, &out.target, n + 1, 1, |_| Crossing::Under);
        let close = remove_pairs(model, &back.target, 0);
        let map = close.after(&back.after(&out.after(&create)));
        total += to_square(&map, basis);
    }
    total
}

/// Dense matrix of a map whose source and target enumerate the same trees.
fn to_square(map: &SparseMap, basis: &BasisRef) -> DMatrix<C64> {
    let mut out = DMatrix::zeros(basis.dim(), basis.dim());
    for j in 0..map.source.dim() {
        let jj = basis.find(map.source.state(j)).expect("same tree set");
        for &(i, c) in map.column(j) {
            let ii = basis.find(map.target.state(i)).expect("same tree set");
            out[(ii, jj)] += c;
        }
    }
    out
}

/// Projector onto total charge `a` of the given leaves, evaluated as an `omega_a` loop.
pub fn projector_matrix(model: &AnyonModel, leaves: &[Charge], a: Charge) -> Result<(BasisRef, DMatrix<C64>)> {
    for &l in leaves {
        model.check_charge(l)?;
    }
    model.check_charge(a)?;
    let basis = FusionTreeBasis::from_charges(model, leaves).into_ref();
    let weights = model.omega_coefficients(&[a])?;
    let pi = loop_operator(model, &basis, &weights);
    Ok((basis, pi))
}

/// `sum_a theta_a^m Pi_a`, evaluated as a `tau^m` loop around the leaves.
pub fn twist_operator_matrix(model: &AnyonModel, leaves: &[Charge], m: i64) -> Result<(BasisRef, DMatrix<C64>)> {
    for &l in leaves {
        model.check_charge(l)?;
    }
    let basis = FusionTreeBasis::from_charges(model, leaves).into_ref();
    let theta = loop_operator(model, &basis, &model.tau_coefficients(m));
    Ok((basis, theta))
}

/// The twist operator with each strand's own spin removed: `prod_j theta_{a_j}^{-m} Theta^m`.
pub fn pure_braid_matrix(model: &AnyonModel, leaves: &[Charge], m: i64) -> Result<(BasisRef, DMatrix<C64>)> {
    let (basis, theta) = twist_operator_matrix(model, leaves, m)?;
    let own: C64 = leaves.iter().map(|&a| theta_pow(model.theta(a), -m)).product();
    Ok((basis, theta * own))
}

/// The full counterclockwise rotation `(sigma_1 ... sigma_{n-1})^n` of all strands as an explicit braid word.
pub fn full_twist_word(model: &AnyonModel, leaves: &[Charge]) -> Result<(BasisRef, DMatrix<C64>)> {
    for &l in leaves {
        model.check_charge(l)?;
    }
    let basis = FusionTreeBasis::from_charges(model, leaves).into_ref();
    let n = leaves.len();
    let mut word = SparseMap::identity(basis.clone());
    for _ in 0..n {
        for k in 0..n.saturating_sub(1) {
            let step = braid(model, &word.target, k, Crossing::Over);
            word = step.after(&word);
        }
    }
    let dense = to_square(&word, &basis);
    Ok((basis, dense))
}

/// Value `S_{ab} / S_{0a}` of a `b` loop around an `a` line.
pub fn loop_removal_value(model: &AnyonModel, b: Charge, a: Charge) -> Result<C64> {
    model.check_charge(a)?;
    model.check_charge(b)?;
    Ok(model.s(a, b) / model.s(VACUUM, a))
}

/// The same loop value evaluated explicitly by braiding a created pair around the line.
pub fn loop_removal_oracle(model: &AnyonModel, b: Charge, a: Charge) -> Result<C64> {
    model.check_charge(a)?;
    model.check_charge(b)?;
    let basis = FusionTreeBasis::from_charges(model, &[a]).into_ref();
    let mut weights = vec![C64::new(0.0, 0.0); model.rank()];
    weights[b] = C64::new(1.0, 0.0);
    Ok(loop_operator(model, &basis, &weights)[(0, 0)])
}

/// Change of basis between the `f` channel and the crossed `e` channel of operators
/// from `u' (x) v'` to `u (x) v`.
///
/// Column `e` is the normalized operator in which a line of charge `e` leaves the
/// `v'` strand and joins `u'` to form `u`. Rows are indexed by the total charge
/// `f`, in coordinates `sqrt(d_f) X_f` where `X_f` is the operator's matrix element.
#[derive(Debug, Clone)]
pub struct CrossedF {
    pub totals: Vec<Charge>,
    pub channels: Vec<Charge>,
    pub matrix: DMatrix<C64>,
}

pub fn crossed_f(model: &AnyonModel, u: Charge, v: Charge, u_bra: Charge, v_bra: Charge) -> Result<CrossedF> {
    let source = FusionTreeBasis::from_charges(model, &[u_bra, v_bra]).into_ref();
    let totals: Vec<Charge> = model
        .products(u, v)
        .iter()
        .copied()
        .filter(|f| model.fuses(u_bra, v_bra, *f))
        .collect();
    let channels: Vec<Charge> = model
        .charges()
        .filter(|&e| model.fuses(u_bra, e, u) && model.fuses(e, v, v_bra))
        .collect();
    let mut matrix = DMatrix::zeros(totals.len(), channels.len());
    if totals.is_empty() && channels.is_empty() {
        return Ok(CrossedF {
            totals,
            channels,
            matrix,
        });
    }
    for (col, &e) in channels.iter().enumerate() {
        let split = split_leaf(model, &source, 1, &[e], &[v]);
        let fuse = fuse_leaves(model, &split.target, 0, &[u]);
        let zshape = fuse.after(&split);
        for j in 0..source.dim() {
            let f = source.state(j).total();
            let Some(row) = totals.iter().position(|&t| t == f) else {
                continue;
            };
            for &(i, c) in zshape.column(j) {
                debug_assert_eq!(zshape.target.state(i).total(), f);
                matrix[(row, col)] += c * model.quantum_dimension(f).sqrt();
            }
        }
        let norm = matrix.column(col).norm();
        if norm < 1e-12 {
            return Err(Error::InconsistentData(format!(
                "crossed channel {} of ({}, {}; {}, {}) vanishes",
                model.label(e),
                model.label(u),
                model.label(v),
                model.label(u_bra),
                model.label(v_bra)
            )));
        }
        matrix.column_mut(col).scale_mut(1.0 / norm);
    }
    let residual = if totals.len() == channels.len() {
        (matrix.adjoint() * &matrix - DMatrix::identity(channels.len(), channels.len())).camax()
    } else {
        f64::INFINITY
    };
    if residual > 1e-10 {
        return Err(Error::InconsistentData(format!(
            "crossed F for ({}, {}; {}, {}) is not unitary (residual {residual:.3e})",
            model.label(u),
            model.label(v),
            model.label(u_bra),
            model.label(v_bra)
        )));
    }
    Ok(CrossedF {
        totals,
        channels,
        matrix,
    })
}
