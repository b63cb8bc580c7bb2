//! Anyon model data and the spectral quantities derived from it.

mod bundled;
mod file;
mod graded;
pub mod literal;
mod model;

pub use bundled::{bundled, bundled_names, cyclic, fibonacci, ising, ising_conjugate, su2_2, trivial};
pub use file::{load_model, load_model_file, write_model};
pub use graded::Z2GradedModel;
pub use model::{theta_pow, AnyonModel, Charge, ModelBuilder, LOAD_TOLERANCE, VACUUM};

use num_complex::Complex64 as C64;

/// Topological spins `theta_a` in charge order.
pub fn derive_spins(model: &AnyonModel) -> Vec<C64> {
    model.spins().to_vec()
}
