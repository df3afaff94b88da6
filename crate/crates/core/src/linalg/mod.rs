//! Dense and block-structured complex linear algebra, the backward-difference
//! weighting, and operator-norm estimation.

pub mod block;
pub mod matrix;
pub mod norm;
pub mod svd;
pub mod weighting;

pub use block::{Block, BlockDiagonal};
pub use matrix::ComplexMatrix;
pub use norm::{
    dense_operator_norm, operator_norm, power_iteration, LinearOperator, PowerIterate, Weighted,
    DEFAULT_NORM_TOL, DENSE_FALLBACK_MAX_DIM,
};
pub use svd::{largest_singular_value, singular_values};
pub use weighting::{
    binomial, cumulative_entry, cumulative_matrix, difference_entry, difference_matrix, weighted_vector_norm,
    NormContext, NormKind,
};
