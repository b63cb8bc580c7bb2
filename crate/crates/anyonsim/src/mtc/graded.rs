use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// S and T^2 data of a fermionic theory with charges grouped into doublets.
///
/// There is no T matrix and no F/R data, so these models support matrix
/// queries only.
#[derive(Debug, Clone)]
pub struct Z2GradedModel {
    pub name: String,
    pub doublets: Vec<(String, String)>,
    pub s_matrix: DMatrix<C64>,
    pub t_squared: Vec<C64>,
}

impl Z2GradedModel {
    /// Graded data of the Moore-Read state at filling 1/2.
    pub fn moore_read_half() -> Self {
        let r = 2f64.sqrt();
        let c = |re: f64, im: f64| C64::new(re, im);
        let rows = [
            [c(1., 0.), c(1., 0.), c(r, 0.), c(1., 0.), c(1., 0.), c(r, 0.)],
            [c(1., 0.), c(1., 0.), c(-r, 0.), c(1., 0.), c(1., 0.), c(-r, 0.)],
            [c(r, 0.), c(-r, 0.), c(0., 0.), c(0., r), c(0., -r), c(0., 0.)],
            [c(1., 0.), c(1., 0.), c(0., r), c(-1., 0.), c(-1., 0.), c(0., -r)],
            [c(1., 0.), c(1., 0.), c(0., -r), c(-1., 0.), c(-1., 0.), c(0., r)],
            [c(r, 0.), c(-r, 0.), c(0., 0.), c(0., -r), c(0., r), c(0., 0.)],
        ];
        let norm = 8f64.sqrt();
        let s_matrix = DMatrix::from_fn(6, 6, |i, j| rows[i][j] / norm);
        let doublets = [
            ("I_0", "psi_2"),
            ("psi_0", "I_2"),
            ("sigma_1/2", "sigma_5/2"),
            ("I_1", "psi_3"),
            ("psi_1", "I_3"),
            ("sigma_3/2", "sigma_7/2"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let t_squared = vec![c(1., 0.), c(1., 0.), c(0., 1.), c(-1., 0.), c(-1., 0.), c(0., 1.)];
        Self {
            name: "moore_read_half".into(),
            doublets,
            s_matrix,
            t_squared,
        }
    }

    /// Largest entry of `S S^dagger - 1`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.s_matrix.nrows();
        (&self.s_matrix * self.s_matrix.adjoint() - DMatrix::<C64>::identity(n, n)).camax()
    }

    pub fn t_squared_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.t_squared))
    }

    /// `[S T^{2k} S^dagger]_{0x}`, the loop weights for an even number `2k` of twists.
    pub fn even_tau_coefficients(&self, k: i64) -> Vec<C64> {
        let n = self.s_matrix.nrows();
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|a| self.s_matrix[(0, a)] * super::model::theta_pow(self.t_squared[a], k) * self.s_matrix[(a, x)].conj())
                    .sum()
            })
            .collect()
    }
}
