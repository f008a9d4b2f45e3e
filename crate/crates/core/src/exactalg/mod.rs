//! Exact linear algebra over Q and Q[x]: scalars, sparse matrices, Smith
//! normal form with transforms, and homology of bounded free complexes.

mod complex;
mod matrix;
pub mod reference;
mod scalar;
mod snf;

pub use complex::{
    homology, homology_degrees_with, homology_with, DegreeHomology, FreeComplex, HomologyReport,
};
pub use matrix::SparseMatrix;
pub use scalar::{PolyScalar, RingTag};
pub use snf::{
    kernel_basis, smith_normal_form, smith_normal_form_tracked, smith_normal_form_with,
    solve_factor, solve_factor_with, Limits, Snf, TrackTransforms,
};

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum ExactError {
    #[error("resource limit exceeded: {nonzeros} nonzero entries (limit {limit})")]
    ResourceLimit { nonzeros: usize, limit: usize },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("not a complex: d∘d ≠ 0 into degree {degree}")]
    NotAComplex { degree: i64 },

    #[error("invalid construction: {0}")]
    Invalid(String),
}
