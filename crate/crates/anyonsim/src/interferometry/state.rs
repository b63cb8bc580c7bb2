use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mtc::literal::{format_complex, parse_complex};
use crate::mtc::{AnyonModel, Charge, VACUUM};
use crate::oracle::{BasisRef, FusionTreeBasis, TreeLabel};

/// Entries below this magnitude are dropped when converting from operators.
const DROP_TOLERANCE: f64 = 1e-15;

/// Tolerance for the Hermiticity, trace and positivity checks of a state.
pub const STATE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Target `A` with its partner `C`.
    Simple,
    /// Target `A` between partner groups `C2` (left) and `C1` (right).
    Generalized,
}

/// Label of the basis tree `((c2 a)_g c1)_f`. The simple layout uses `c2 = vacuum`, `g = a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub c2: Charge,
    pub a: Charge,
    pub g: Charge,
    pub c1: Charge,
    pub f: Charge,
}

impl BasisLabel {
    /// The simple-layout label `|a, c; f>`.
    pub fn simple(a: Charge, c: Charge, f: Charge) -> Self {
        Self {
            c2: VACUUM,
            a,
            g: a,
            c1: c,
            f,
        }
    }

    pub fn generalized(c2: Charge, a: Charge, g: Charge, c1: Charge, f: Charge) -> Self {
        Self { c2, a, g, c1, f }
    }

    pub fn is_simple(&self) -> bool {
        self.c2 == VACUUM && self.g == self.a
    }

    pub fn admissible(&self, model: &AnyonModel) -> bool {
        model.fuses(self.c2, self.a, self.g) && model.fuses(self.g, self.c1, self.f)
    }

    /// The caterpillar label over leaves `[c2, a, c1]`.
    pub fn tree(&self) -> TreeLabel {
        TreeLabel {
            leaves: vec![self.c2, self.a, self.c1],
            internal: vec![self.c2, self.g, self.f],
        }
    }

    pub fn from_tree(tree: &TreeLabel) -> Self {
        Self {
            c2: tree.leaves[0],
            a: tree.leaves[1],
            g: tree.internal[1],
            c1: tree.leaves[2],
            f: tree.internal[2],
        }
    }
}

/// Anyonic density matrix `rho = sum rho_{L,L'} / d_f |L><L'|` of the target system.
///
/// Entries are the coefficients of normalized diagrams, so the quantum trace is
/// the sum of the diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    layout: Layout,
    entries: BTreeMap<(BasisLabel, BasisLabel), C64>,
}

impl TargetState {
    pub fn new(layout: Layout) -> Self {
        Self {
            layout,
            entries: BTreeMap::new(),
        }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn entries(&self) -> &BTreeMap<(BasisLabel, BasisLabel), C64> {
        &self.entries
    }

    pub fn get(&self, ket: BasisLabel, bra: BasisLabel) -> C64 {
        self.entries.get(&(ket, bra)).copied().unwrap_or_default()
    }

    /// Adds `value` to the entry `(ket, bra)`.
    pub fn add(&mut self, ket: BasisLabel, bra: BasisLabel, value: C64) {
        *self.entries.entry((ket, bra)).or_default() += value;
    }

    /// Sets an entry and its Hermitian partner.
    pub fn set_hermitian(&mut self, ket: BasisLabel, bra: BasisLabel, value: C64) {
        self.entries.insert((ket, bra), value);
        self.entries.insert((bra, ket), value.conj());
    }

    /// Sum of diagonal entries.
    pub fn quantum_trace(&self) -> C64 {
        self.entries.iter().filter(|((k, b), _)| k == b).map(|(_, v)| *v).sum()
    }

    /// Basis labels appearing in any entry, sorted.
    pub fn labels(&self) -> Vec<BasisLabel> {
        let set: BTreeSet<BasisLabel> = self.entries.keys().flat_map(|(k, b)| [*k, *b]).collect();
        set.into_iter().collect()
    }

    /// Coefficient matrix over [`Self::labels`].
    pub fn coefficient_matrix(&self) -> (Vec<BasisLabel>, DMatrix<C64>) {
        let labels = self.labels();
        let pos: BTreeMap<BasisLabel, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let mut m = DMatrix::zeros(labels.len(), labels.len());
        for ((k, b), v) in &self.entries {
            m[(pos[k], pos[b])] += *v;
        }
        (labels, m)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            layout: self.layout,
            entries: self.entries.iter().map(|(k, v)| (*k, *v * factor)).collect(),
        }
    }

    /// Largest entrywise difference to another state.
    pub fn max_abs_diff(&self, other: &TargetState) -> f64 {
        let keys: BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .map(|&(k, b)| (self.get(k, b) - other.get(k, b)).norm())
            .fold(0.0, f64::max)
    }

    /// Checks admissibility, charge conservation, Hermiticity, unit trace and positivity.
    pub fn validate(&self, model: &AnyonModel) -> Result<()> {
        self.validate_shape(model)?;
        let trace = self.quantum_trace();
        if (trace - C64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("quantum trace is {trace}")));
        }
        let min = self.min_eigenvalue();
        if min < -STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("not positive semidefinite (eigenvalue {min:.3e})")));
        }
        Ok(())
    }

    /// The structural half of [`Self::validate`]: labels, layout, charge conservation and Hermiticity.
    pub fn validate_shape(&self, model: &AnyonModel) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::InvalidState("state has no entries".into()));
        }
        for ((k, b), v) in &self.entries {
            for l in [k, b] {
                for c in [l.c2, l.a, l.g, l.c1, l.f] {
                    model.check_charge(c)?;
                }
                if !l.admissible(model) {
                    return Err(Error::InadmissibleChannel(self.format_label(model, l)));
                }
                if self.layout == Layout::Simple && !l.is_simple() {
                    return Err(Error::InvalidState(format!(
                        "label {} does not belong to the simple layout",
                        self.format_label(model, l)
                    )));
                }
            }
            if k.f != b.f {
                return Err(Error::InvalidState(format!(
                    "entry {} / {} mixes total charges",
                    self.format_label(model, k),
                    self.format_label(model, b)
                )));
            }
            let partner = self.get(*b, *k);
            if (partner.conj() - v).norm() > STATE_TOLERANCE {
                return Err(Error::InvalidState("state is not Hermitian".into()));
            }
        }
        Ok(())
    }

    /// Smallest eigenvalue of the coefficient matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let (_, m) = self.coefficient_matrix();
        if m.nrows() == 0 {
            return 0.0;
        }
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Leaf charge sets `[C2, A, C1]` covering every label.
    pub fn leaf_sets(&self) -> Vec<Vec<Charge>> {
        let mut sets = vec![BTreeSet::new(), BTreeSet::new(), BTreeSet::new()];
        for l in self.labels() {
            sets[0].insert(l.c2);
            sets[1].insert(l.a);
            sets[2].insert(l.c1);
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// The state as an operator on the caterpillar basis of `[C2, A, C1]`.
    pub fn to_operator(&self, model: &AnyonModel) -> (BasisRef, DMatrix<C64>) {
        let tuples = self.labels().iter().map(|l| vec![l.c2, l.a, l.c1]).collect();
        let basis = FusionTreeBasis::from_tuples(model, 3, tuples, None).into_ref();
        let x = self.operator_on(model, &basis);
        (basis, x)
    }

    /// The state as an operator on a given basis of `[C2, A, C1]` leaves.
    pub fn operator_on(&self, model: &AnyonModel, basis: &BasisRef) -> DMatrix<C64> {
        let mut x = DMatrix::zeros(basis.dim(), basis.dim());
        for ((k, b), v) in &self.entries {
            let i = basis.find(&k.tree()).expect("label lies in the basis");
            let j = basis.find(&b.tree()).expect("label lies in the basis");
            x[(i, j)] += *v / model.quantum_dimension(k.f);
        }
        x
    }

    /// Inverse of [`Self::to_operator`].
    pub fn from_operator(model: &AnyonModel, layout: Layout, basis: &FusionTreeBasis, x: &DMatrix<C64>) -> Self {
        let mut state = Self::new(layout);
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let v = x[(i, j)];
                if v.norm() <= DROP_TOLERANCE {
                    continue;
                }
                let k = BasisLabel::from_tree(basis.state(i));
                let b = BasisLabel::from_tree(basis.state(j));
                state.entries.insert((k, b), v * model.quantum_dimension(k.f));
            }
        }
        state
    }

    /// A full-rank state on every admissible label over the given `[C2, A, C1]` charge sets.
    ///
    /// Each total-charge block is `G G^dagger` for a matrix `G` whose real and imaginary
    /// parts are drawn from `sample`; the result is scaled to unit trace.
    pub fn random(model: &AnyonModel, layout: Layout, leaf_sets: [&[Charge]; 3], mut sample: impl FnMut() -> f64) -> Result<Self> {
        let c2: &[Charge] = match layout {
            Layout::Simple => &[VACUUM],
            Layout::Generalized => leaf_sets[0],
        };
        let mut blocks: BTreeMap<Charge, Vec<BasisLabel>> = BTreeMap::new();
        for &x in c2 {
            for &a in leaf_sets[1] {
                for &g in model.products(x, a) {
                    for &c in leaf_sets[2] {
                        for &f in model.products(g, c) {
                            blocks.entry(f).or_default().push(BasisLabel::generalized(x, a, g, c, f));
                        }
                    }
                }
            }
        }
        if blocks.is_empty() {
            return Err(Error::InvalidState("no admissible labels for the given charges".into()));
        }
        let mut state = Self::new(layout);
        for labels in blocks.values() {
            let n = labels.len();
            let g = DMatrix::from_fn(n, n, |_, _| C64::new(sample(), sample()));
            let rho = &g * g.adjoint();
            for (i, k) in labels.iter().enumerate() {
                for (j, b) in labels.iter().enumerate() {
                    state.entries.insert((*k, *b), rho[(i, j)]);
                }
            }
        }
        let trace = state.quantum_trace().re;
        Ok(state.scaled(C64::new(1.0 / trace, 0.0)))
    }

    /// The same state viewed in the generalized layout.
    pub fn to_generalized(&self) -> Self {
        Self {
            layout: Layout::Generalized,
            entries: self.entries.clone(),
        }
    }

    /// The same state in the simple layout, if every label has a trivial `C2`.
    pub fn to_simple(&self) -> Result<Self> {
        if self.labels().iter().all(BasisLabel::is_simple) {
            Ok(Self {
                layout: Layout::Simple,
                entries: self.entries.clone(),
            })
        } else {
            Err(Error::InvalidState("state has a nontrivial C2 group".into()))
        }
    }

    /// Drops entries below `tolerance` in magnitude.
    pub fn pruned(&self, tolerance: f64) -> Self {
        Self {
            layout: self.layout,
            entries: self.entries.iter().filter(|(_, v)| v.norm() > tolerance).map(|(k, v)| (*k, *v)).collect(),
        }
    }

    fn format_label(&self, model: &AnyonModel, l: &BasisLabel) -> String {
        match self.layout {
            Layout::Simple => format!("({}, {}; {})", model.label(l.a), model.label(l.c1), model.label(l.f)),
            Layout::Generalized => format!(
                "({}, {}; {}, {}; {})",
                model.label(l.c2),
                model.label(l.a),
                model.label(l.g),
                model.label(l.c1),
                model.label(l.f)
            ),
        }
    }

    /// Text form: a header, then one `ket | bra = value` line per entry.
    ///
    /// Simple labels are `a c f mu`; generalized labels are `c2 a g c1 f mu1 mu2`.
    /// Vertex slots are always 0 for multiplicity-free models.
    pub fn to_text(&self, model: &AnyonModel) -> String {
        let mut out = String::from("# anyonsim target state v1\n");
        out.push_str(&format!("model {}\n", model.name()));
        let layout = match self.layout {
            Layout::Simple => "simple",
            Layout::Generalized => "generalized",
        };
        out.push_str(&format!("layout {layout}\n"));
        let fmt = |l: &BasisLabel| match self.layout {
            Layout::Simple => format!("{} {} {} 0", model.label(l.a), model.label(l.c1), model.label(l.f)),
            Layout::Generalized => format!(
                "{} {} {} {} {} 0 0",
                model.label(l.c2),
                model.label(l.a),
                model.label(l.g),
                model.label(l.c1),
                model.label(l.f)
            ),
        };
        for ((k, b), v) in &self.entries {
            out.push_str(&format!("{} | {} = {}\n", fmt(k), fmt(b), format_complex(*v)));
        }
        out
    }

    /// Parses [`Self::to_text`] output. The result is checked with [`Self::validate_shape`].
    pub fn from_text(model: &AnyonModel, text: &str) -> Result<Self> {
        let mut layout = None;
        let mut state: Option<TargetState> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("model ") {
                if rest.trim() != model.name() {
                    return Err(perr(&format!("state is for model `{}`", rest.trim())));
                }
                continue;
            }
            if let Some(rest) = line.strip_prefix("layout ") {
                let l = match rest.trim() {
                    "simple" => Layout::Simple,
                    "generalized" => Layout::Generalized,
                    other => return Err(perr(&format!("unknown layout `{other}`"))),
                };
                layout = Some(l);
                state = Some(TargetState::new(l));
                continue;
            }
            let st = state.as_mut().ok_or_else(|| perr("entry before layout line"))?;
            let (labels, value) = line.split_once('=').ok_or_else(|| perr("missing `=`"))?;
            let (ket, bra) = labels.split_once('|').ok_or_else(|| perr("missing `|`"))?;
            let parse_label = |s: &str| -> Result<BasisLabel> {
                let toks: Vec<&str> = s.split_whitespace().collect();
                let charge = |t: &str| model.charge(t);
                let zero = |t: &str| if t == "0" { Ok(()) } else { Err(perr("vertex slot must be 0")) };
                match layout {
                    Some(Layout::Simple) if toks.len() == 4 => {
                        zero(toks[3])?;
                        Ok(BasisLabel::simple(charge(toks[0])?, charge(toks[1])?, charge(toks[2])?))
                    }
                    Some(Layout::Generalized) if toks.len() == 7 => {
                        zero(toks[5])?;
                        zero(toks[6])?;
                        Ok(BasisLabel::generalized(
                            charge(toks[0])?,
                            charge(toks[1])?,
                            charge(toks[2])?,
                            charge(toks[3])?,
                            charge(toks[4])?,
                        ))
                    }
                    _ => Err(perr("wrong number of label fields")),
                }
            };
            let k = parse_label(ket)?;
            let b = parse_label(bra)?;
            let v = parse_complex(value)?;
            if st.entries.insert((k, b), v).is_some() {
                return Err(perr("duplicate entry"));
            }
        }
        let state = state.ok_or_else(|| Error::Parse("missing layout line".into()))?;
        state.validate_shape(model)?;
        Ok(state)
    }
}
