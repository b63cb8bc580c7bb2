use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Index of a charge within its model. The vacuum is always index 0.
pub type Charge = usize;

pub const VACUUM: Charge = 0;

/// Tolerance applied to pentagon, hexagon and unitarity residuals at load time.
pub const LOAD_TOLERANCE: f64 = 1e-9;

/// Dense storage for F-symbols, falling back to a map for large label sets.
#[derive(Debug, Clone)]
enum FTable {
    Dense(Vec<C64>),
    Sparse(HashMap<u64, C64>),
}

const DENSE_F_LIMIT: usize = 1 << 20;

/// Multiplicity-free anyon model with all derived spectral data.
#[derive(Debug, Clone)]
pub struct AnyonModel {
    name: String,
    labels: Vec<String>,
    dual: Vec<Charge>,
    fusion: Vec<bool>,
    products: Vec<Vec<Charge>>,
    f: FTable,
    r: Vec<C64>,
    d: Vec<f64>,
    theta: Vec<C64>,
    total_dim: f64,
    s: DMatrix<C64>,
    m: DMatrix<C64>,
}

/// Assembles model data and runs every load-time verification in [`ModelBuilder::build`].
///
/// Fusion rules involving the vacuum are implied. Admissible F and R entries
/// that are not set explicitly default to 1.
#[derive(Debug, Clone)]
pub struct ModelBuilder {
    name: String,
    labels: Vec<String>,
    dual: HashMap<Charge, Charge>,
    fusion: HashMap<(Charge, Charge), Vec<Charge>>,
    f: HashMap<[Charge; 6], C64>,
    r: HashMap<[Charge; 3], C64>,
}

impl ModelBuilder {
    /// Starts a model whose first label is the vacuum.
    pub fn new(name: impl Into<String>, labels: &[&str]) -> Self {
        Self::with_labels(name, labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_labels(name: impl Into<String>, labels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            labels,
            dual: HashMap::new(),
            fusion: HashMap::new(),
            f: HashMap::new(),
            r: HashMap::new(),
        }
    }

    /// Declares the dual of `a`; checked against the fusion rules at build time.
    pub fn dual(mut self, a: Charge, b: Charge) -> Self {
        self.dual.insert(a, b);
        self.dual.insert(b, a);
        self
    }

    /// Sets the fusion outcomes of `a x b`. Repeated outcomes count as multiplicity.
    pub fn fuse(mut self, a: Charge, b: Charge, outcomes: &[Charge]) -> Self {
        self.fusion.insert((a, b), outcomes.to_vec());
        self
    }

    /// Sets `[F^{abc}_d]_{ef}`.
    pub fn f(mut self, key: [Charge; 6], value: C64) -> Self {
        self.f.insert(key, value);
        self
    }

    /// Sets `R^{ab}_c`.
    pub fn r(mut self, key: [Charge; 3], value: C64) -> Self {
        self.r.insert(key, value);
        self
    }

    pub fn build(self) -> Result<AnyonModel> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::InconsistentData("model has no charges".into()));
        }
        let check = |c: Charge| -> Result<()> {
            if c < n {
                Ok(())
            } else {
                Err(Error::UnknownCharge(format!("index {c}")))
            }
        };
        let mut counts = vec![0usize; n * n * n];
        let mut given = vec![false; n * n];
        let tally = |a: Charge, b: Charge| -> Result<Vec<usize>> {
            check(a)?;
            check(b)?;
            let mut local = vec![0usize; n];
            for &c in &self.fusion[&(a, b)] {
                check(c)?;
                local[c] += 1;
            }
            Ok(local)
        };
        for &(a, b) in self.fusion.keys() {
            let local = tally(a, b)?;
            if self.fusion.contains_key(&(b, a)) && tally(b, a)? != local {
                return Err(Error::InconsistentData(format!(
                    "fusion rules for {} x {} are not symmetric",
                    self.labels[a], self.labels[b]
                )));
            }
            for idx in [a * n + b, b * n + a] {
                counts[idx * n..(idx + 1) * n].copy_from_slice(&local);
                given[idx] = true;
            }
        }
        for a in 0..n {
            for (x, y) in [(VACUUM, a), (a, VACUUM)] {
                let idx = x * n + y;
                if given[idx] {
                    let row = &counts[idx * n..(idx + 1) * n];
                    let unit = (0..n).all(|c| row[c] == usize::from(c == a));
                    if !unit {
                        return Err(Error::InconsistentData(format!(
                            "vacuum fusion with {} must give {}",
                            self.labels[a], self.labels[a]
                        )));
                    }
                } else {
                    counts[idx * n + a] = 1;
                    given[idx] = true;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !given[a * n + b] {
                    return Err(Error::InconsistentData(format!(
                        "no fusion rule for {} x {}",
                        self.labels[a], self.labels[b]
                    )));
                }
                for c in 0..n {
                    let count = counts[(a * n + b) * n + c];
                    if count > 1 {
                        return Err(Error::MultiplicityUnsupported {
                            a: self.labels[a].clone(),
                            b: self.labels[b].clone(),
                            c: self.labels[c].clone(),
                            count,
                        });
                    }
                }
            }
        }
        let fusion: Vec<bool> = counts.iter().map(|&c| c == 1).collect();
        let products: Vec<Vec<Charge>> = (0..n * n)
            .map(|ab| (0..n).filter(|&c| fusion[ab * n + c]).collect())
            .collect();

        let mut dual = vec![0; n];
        for a in 0..n {
            let candidates: Vec<Charge> = (0..n).filter(|&b| fusion[(a * n + b) * n]).collect();
            if candidates.len() != 1 {
                return Err(Error::InconsistentData(format!(
                    "charge {} has no unique dual",
                    self.labels[a]
                )));
            }
            dual[a] = candidates[0];
        }
        for (&a, &b) in &self.dual {
            check(a)?;
            check(b)?;
            if dual[a] != b {
                return Err(Error::InconsistentData(format!(
                    "declared dual of {} disagrees with the fusion rules",
                    self.labels[a]
                )));
            }
        }

        let mut model = AnyonModel {
            name: self.name,
            labels: self.labels,
            dual,
            fusion,
            products,
            f: if n.pow(6) <= DENSE_F_LIMIT {
                FTable::Dense(vec![C64::new(0.0, 0.0); n.pow(6)])
            } else {
                FTable::Sparse(HashMap::new())
            },
            r: vec![C64::new(0.0, 0.0); n * n * n],
            d: vec![1.0; n],
            theta: vec![C64::new(1.0, 0.0); n],
            total_dim: 1.0,
            s: DMatrix::identity(n, n),
            m: DMatrix::identity(n, n),
        };
        model.check_associativity()?;

        for &key in self.f.keys() {
            key.iter().try_for_each(|&c| check(c))?;
            let [a, b, c, d, e, f] = key;
            if !model.f_admissible(a, b, c, d, e, f) {
                return Err(Error::InconsistentData(format!(
                    "F symbol given for inadmissible labels {}",
                    model.format_labels(&key)
                )));
            }
        }
        for &key in self.r.keys() {
            key.iter().try_for_each(|&c| check(c))?;
            if !model.fuses(key[0], key[1], key[2]) {
                return Err(Error::InconsistentData(format!(
                    "R symbol given for inadmissible labels {}",
                    model.format_labels(&key)
                )));
            }
        }
        model.fill_symbols(&self.f, &self.r);
        model.verify_symbols()?;
        model.derive()?;
        Ok(model)
    }
}

impl AnyonModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of charges.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn charges(&self) -> std::ops::Range<Charge> {
        0..self.rank()
    }

    pub fn label(&self, a: Charge) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn charge(&self, label: &str) -> Result<Charge> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownCharge(label.to_string()))
    }

    pub fn check_charge(&self, a: Charge) -> Result<Charge> {
        if a < self.rank() {
            Ok(a)
        } else {
            Err(Error::UnknownCharge(format!("index {a}")))
        }
    }

    pub fn dual(&self, a: Charge) -> Charge {
        self.dual[a]
    }

    /// `N^c_{ab} = 1`.
    pub fn fuses(&self, a: Charge, b: Charge, c: Charge) -> bool {
        let n = self.rank();
        self.fusion[(a * n + b) * n + c]
    }

    /// Charges appearing in `a x b`, ascending.
    pub fn products(&self, a: Charge, b: Charge) -> &[Charge] {
        &self.products[a * self.rank() + b]
    }

    /// Whether `[F^{abc}_d]_{ef}` labels a valid pair of basis trees.
    pub fn f_admissible(&self, a: Charge, b: Charge, c: Charge, d: Charge, e: Charge, f: Charge) -> bool {
        self.fuses(a, b, e) && self.fuses(e, c, d) && self.fuses(b, c, f) && self.fuses(a, f, d)
    }

    fn f_index(&self, key: [Charge; 6]) -> u64 {
        let n = self.rank() as u64;
        key.iter().fold(0u64, |acc, &x| acc * n + x as u64)
    }

    /// `[F^{abc}_d]_{ef}`, zero when inadmissible.
    ///
    /// Convention: `|(a b)_e c; d> = sum_f [F^{abc}_d]_{ef} |a (b c)_f; d>`.
    pub fn f(&self, a: Charge, b: Charge, c: Charge, d: Charge, e: Charge, f: Charge) -> C64 {
        let idx = self.f_index([a, b, c, d, e, f]);
        match &self.f {
            FTable::Dense(v) => v[idx as usize],
            FTable::Sparse(m) => m.get(&idx).copied().unwrap_or_default(),
        }
    }

    /// `R^{ab}_c`, the exchange eigenvalue taking `a (x) b` in channel `c` to `b (x) a`; zero when inadmissible.
    pub fn r(&self, a: Charge, b: Charge, c: Charge) -> C64 {
        let n = self.rank();
        self.r[(a * n + b) * n + c]
    }

    /// The F-matrix of a block as (row labels e, column labels f, matrix).
    pub fn f_matrix(&self, a: Charge, b: Charge, c: Charge, d: Charge) -> (Vec<Charge>, Vec<Charge>, DMatrix<C64>) {
        let rows: Vec<Charge> = self
            .products(a, b)
            .iter()
            .copied()
            .filter(|&e| self.fuses(e, c, d))
            .collect();
        let cols: Vec<Charge> = self
            .products(b, c)
            .iter()
            .copied()
            .filter(|&f| self.fuses(a, f, d))
            .collect();
        let mat = DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.f(a, b, c, d, rows[i], cols[j]));
        (rows, cols, mat)
    }

    pub fn quantum_dimension(&self, a: Charge) -> f64 {
        self.d[a]
    }

    pub fn quantum_dimensions(&self) -> &[f64] {
        &self.d
    }

    /// Total quantum dimension `D = sqrt(sum_a d_a^2)`.
    pub fn total_dimension(&self) -> f64 {
        self.total_dim
    }

    pub fn theta(&self, a: Charge) -> C64 {
        self.theta[a]
    }

    pub fn spins(&self) -> &[C64] {
        &self.theta
    }

    pub fn s(&self, a: Charge, b: Charge) -> C64 {
        self.s[(a, b)]
    }

    pub fn s_matrix(&self) -> &DMatrix<C64> {
        &self.s
    }

    pub fn t_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.theta))
    }

    /// `M_{ab} = S_{ab} S_{00} / (S_{0a} S_{0b})`.
    pub fn monodromy(&self, a: Charge, b: Charge) -> C64 {
        self.m[(a, b)]
    }

    pub fn monodromy_matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// `M_{aB} = sum_b Pr(b) M_{ab}` for every charge `a`.
    pub fn monodromy_expectation(&self, distribution: &[(Charge, f64)]) -> Result<Vec<C64>> {
        self.validate_distribution(distribution)?;
        Ok(self
            .charges()
            .map(|a| distribution.iter().map(|&(b, p)| self.m[(a, b)] * p).sum())
            .collect())
    }

    /// Checks that a charge distribution is nonnegative and sums to one within 1e-12.
    pub fn validate_distribution(&self, distribution: &[(Charge, f64)]) -> Result<()> {
        let mut total = 0.0;
        for &(b, p) in distribution {
            self.check_charge(b)?;
            if p.is_nan() || p < 0.0 || !p.is_finite() {
                return Err(Error::InvalidDistribution(format!("probability {p} for {}", self.label(b))));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(())
    }

    /// Loop weights `w_x = sum_{a in set} S_{0a} conj(S_{ax})` of the projector onto `set`.
    pub fn omega_coefficients(&self, set: &[Charge]) -> Result<Vec<C64>> {
        if set.is_empty() {
            return Err(Error::InvalidParameter("charge set is empty".into()));
        }
        for &a in set {
            self.check_charge(a)?;
        }
        let mut members = set.to_vec();
        members.sort_unstable();
        members.dedup();
        Ok(self
            .charges()
            .map(|x| members.iter().map(|&a| self.s[(0, a)] * self.s[(a, x)].conj()).sum())
            .collect())
    }

    /// `[S T^m S^dagger]_{0x}` for every `x`.
    pub fn tau_coefficients(&self, m: i64) -> Vec<C64> {
        self.charges()
            .map(|x| {
                self.charges()
                    .map(|a| self.s[(0, a)] * theta_pow(self.theta[a], m) * self.s[(a, x)].conj())
                    .sum()
            })
            .collect()
    }

    pub(crate) fn format_labels(&self, key: &[Charge]) -> String {
        key.iter().map(|&c| self.labels[c].as_str()).collect::<Vec<_>>().join(",")
    }

    fn check_associativity(&self) -> Result<()> {
        for a in self.charges() {
            for b in self.charges() {
                for c in self.charges() {
                    for d in self.charges() {
                        let left = self.products(a, b).iter().filter(|&&e| self.fuses(e, c, d)).count();
                        let right = self.products(b, c).iter().filter(|&&f| self.fuses(a, f, d)).count();
                        if left != right {
                            return Err(Error::InconsistentData(format!(
                                "fusion rules are not associative at {}",
                                self.format_labels(&[a, b, c, d])
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn fill_symbols(&mut self, f: &HashMap<[Charge; 6], C64>, r: &HashMap<[Charge; 3], C64>) {
        let n = self.rank();
        let one = C64::new(1.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for &e in self.products(a, b).to_vec().iter() {
                            if !self.fuses(e, c, d) {
                                continue;
                            }
                            for &g in self.products(b, c).to_vec().iter() {
                                if !self.fuses(a, g, d) {
                                    continue;
                                }
                                let key = [a, b, c, d, e, g];
                                let value = f.get(&key).copied().unwrap_or(one);
                                let idx = self.f_index(key);
                                match &mut self.f {
                                    FTable::Dense(v) => v[idx as usize] = value,
                                    FTable::Sparse(m) => {
                                        m.insert(idx, value);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for &c in self.products(a, b).to_vec().iter() {
                    self.r[(a * n + b) * n + c] = r.get(&[a, b, c]).copied().unwrap_or(one);
                }
            }
        }
    }

    fn verify_symbols(&self) -> Result<()> {
        let one = C64::new(1.0, 0.0);
        for a in self.charges() {
            for b in self.charges() {
                for c in self.charges() {
                    for d in self.charges() {
                        let (rows, cols, mat) = self.f_matrix(a, b, c, d);
                        if rows.is_empty() {
                            continue;
                        }
                        let residual = (&mat * mat.adjoint() - DMatrix::identity(rows.len(), cols.len())).camax();
                        if residual > LOAD_TOLERANCE {
                            return Err(Error::InconsistentData(format!(
                                "F block {} is not unitary (residual {residual:.3e})",
                                self.format_labels(&[a, b, c, d])
                            )));
                        }
                        if a == VACUUM || b == VACUUM || c == VACUUM {
                            let trivial = mat.iter().all(|v| (v - one).norm() <= LOAD_TOLERANCE);
                            if !trivial {
                                return Err(Error::InconsistentData(format!(
                                    "F block {} with a vacuum leg must be trivial",
                                    self.format_labels(&[a, b, c, d])
                                )));
                            }
                        }
                    }
                }
            }
        }
        for a in self.charges() {
            for b in self.charges() {
                for &c in self.products(a, b) {
                    let r = self.r(a, b, c);
                    if (r.norm() - 1.0).abs() > LOAD_TOLERANCE {
                        return Err(Error::InconsistentData(format!(
                            "R symbol {} is not a phase",
                            self.format_labels(&[a, b, c])
                        )));
                    }
                    if (a == VACUUM || b == VACUUM) && (r - one).norm() > LOAD_TOLERANCE {
                        return Err(Error::InconsistentData(format!(
                            "R symbol {} with a vacuum leg must be 1",
                            self.format_labels(&[a, b, c])
                        )));
                    }
                }
            }
        }
        let pentagon = self.pentagon_residual();
        if pentagon > LOAD_TOLERANCE {
            return Err(Error::InconsistentData(format!("pentagon residual {pentagon:.3e}")));
        }
        let hexagon = self.hexagon_residual();
        if hexagon > LOAD_TOLERANCE {
            return Err(Error::InconsistentData(format!("hexagon residual {hexagon:.3e}")));
        }
        Ok(())
    }

    /// Largest violation of the pentagon equation over all label tuples.
    ///
    /// `F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]`.
    pub fn pentagon_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in self.charges() {
            for b in self.charges() {
                for c in self.charges() {
                    for d in self.charges() {
                        for &f in self.products(a, b) {
                            for &g in self.products(f, c) {
                                for &e in self.products(g, d) {
                                    for &l in self.products(c, d) {
                                        for &k in self.products(b, l) {
                                            if !self.fuses(a, k, e) {
                                                continue;
                                            }
                                            let lhs = self.f(f, c, d, e, g, l) * self.f(a, b, l, e, f, k);
                                            let rhs: C64 = self
                                                .products(b, c)
                                                .iter()
                                                .map(|&h| {
                                                    self.f(a, b, c, g, f, h)
                                                        * self.f(a, h, d, e, g, k)
                                                        * self.f(b, c, d, k, h, l)
                                                })
                                                .sum();
                                            worst = worst.max((lhs - rhs).norm());
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of either hexagon equation over all label tuples.
    ///
    /// `R^{ca}_e F^{acb}_d[e,g] R^{cb}_g = sum_f F^{cab}_d[e,f] R^{cf}_d F^{abc}_d[f,g]`,
    /// together with the same identity for the inverse braiding.
    pub fn hexagon_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in self.charges() {
            for b in self.charges() {
                for c in self.charges() {
                    for &e in self.products(c, a) {
                        for &d in self.products(e, b) {
                            for &g in self.products(c, b) {
                                if !self.fuses(a, g, d) {
                                    continue;
                                }
                                let lhs = self.r(c, a, e) * self.f(a, c, b, d, e, g) * self.r(c, b, g);
                                let rhs: C64 = self
                                    .products(a, b)
                                    .iter()
                                    .map(|&f| self.f(c, a, b, d, e, f) * self.r(c, f, d) * self.f(a, b, c, d, f, g))
                                    .sum();
                                worst = worst.max((lhs - rhs).norm());
                                let lhs_inv =
                                    self.r(a, c, e).inv() * self.f(a, c, b, d, e, g) * self.r(b, c, g).inv();
                                let rhs_inv: C64 = self
                                    .products(a, b)
                                    .iter()
                                    .filter(|&&f| self.fuses(f, c, d))
                                    .map(|&f| {
                                        self.f(c, a, b, d, e, f) * self.r(f, c, d).inv() * self.f(a, b, c, d, f, g)
                                    })
                                    .sum();
                                worst = worst.max((lhs_inv - rhs_inv).norm());
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    fn derive(&mut self) -> Result<()> {
        let n = self.rank();
        for a in 0..n {
            let abar = self.dual[a];
            let v = self.f(a, abar, a, a, VACUUM, VACUUM);
            if v.norm() < 1e-12 {
                return Err(Error::InconsistentData(format!(
                    "F^{{a abar a}}_a vanishes for {}",
                    self.labels[a]
                )));
            }
            self.d[a] = 1.0 / v.norm();
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = self.d[a] * self.d[b];
                let rhs: f64 = self.products(a, b).iter().map(|&c| self.d[c]).sum();
                if (lhs - rhs).abs() > LOAD_TOLERANCE * lhs.max(1.0) {
                    return Err(Error::InconsistentData(format!(
                        "quantum dimensions from F do not satisfy the fusion rules at {}",
                        self.format_labels(&[a, b])
                    )));
                }
            }
        }
        for a in 0..n {
            let theta: C64 = self
                .products(a, a)
                .iter()
                .map(|&c| self.r(a, a, c) * (self.d[c] / self.d[a]))
                .sum();
            if (theta.norm() - 1.0).abs() > LOAD_TOLERANCE {
                return Err(Error::InconsistentData(format!(
                    "topological spin of {} is not a phase",
                    self.labels[a]
                )));
            }
            self.theta[a] = theta;
        }
        for a in 0..n {
            if (self.theta[a] - self.theta[self.dual[a]]).norm() > LOAD_TOLERANCE {
                return Err(Error::InconsistentData(format!(
                    "spin of {} differs from the spin of its dual",
                    self.labels[a]
                )));
            }
        }
        self.total_dim = self.d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let s = DMatrix::from_fn(n, n, |a, b| {
            self.products(a, b)
                .iter()
                .map(|&c| self.r(b, a, c) * self.r(a, b, c) * self.d[c])
                .sum::<C64>()
                / self.total_dim
        });
        let residual = (&s * s.adjoint() - DMatrix::<C64>::identity(n, n)).camax();
        if residual > LOAD_TOLERANCE {
            return Err(Error::NonModular { residual });
        }
        self.m = DMatrix::from_fn(n, n, |a, b| s[(a, b)] * s[(0, 0)] / (s[(0, a)] * s[(0, b)]));
        self.s = s;
        Ok(())
    }
}

/// `theta^m` for any integer `m`.
pub fn theta_pow(theta: C64, m: i64) -> C64 {
    if m >= 0 {
        theta.powu(m as u32)
    } else {
        theta.inv().powu(m.unsigned_abs() as u32)
    }
}
