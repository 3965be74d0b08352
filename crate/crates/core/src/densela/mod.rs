//! Dense linear-algebra kernels.

mod condition;
mod matrix;
mod qr;
mod random;

pub use condition::{
    estimate_condition_number, extreme_singular_values, lanczos_max_eigenvalue,
    tridiagonal_max_eigenvalue, ExtremeSingularValues, MAX_LANCZOS_STEPS, RANK_TOLERANCE,
};
pub use matrix::{axpy, dot, norm, DenseMatrix, Vector};
pub use qr::HouseholderQr;
pub use random::{
    random_semi_orthogonal, random_semi_orthogonal_stream, seeded_stream, standard_normals,
    GENERATOR_NAME,
};
