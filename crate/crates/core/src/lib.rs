//! Finite-dimensional laboratory for the asymptotics of operator semigroups.
//!
//! Three block-structured semigroup families are realized on finite
//! truncations, with generators and resolvents in closed form and spectral
//! projections by contour quadrature. Norms are measured either in the
//! Euclidean sequence norm or in the backward-difference weighted norm
//! `||Delta^N c||_2`, and sampled growth curves are summarized by
//! concave-log envelopes and rate fits.
//!
//! Every numeric routine is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the double-precision instantiation used by the
//! command-line tools.

// `!(x > 0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod linalg;
pub mod models;
pub mod scalar;
pub mod spectral;

pub use error::{LabError, Result};
pub use linalg::{BlockDiagonal, ComplexMatrix, LinearOperator, NormContext, NormKind};
pub use models::{Family, Model, ModelSpec};
pub use scalar::{Real, C};

pub type Complex64 = num_complex::Complex<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type BlockDiagonal64 = BlockDiagonal<f64>;
pub type Model64 = Model<f64>;
pub type Model32 = Model<f32>;
pub type Contour64 = spectral::Contour<f64>;
pub type ProjectionReport64 = spectral::ProjectionReport<f64>;
pub type NormSamples64 = asymptotics::NormSamples<f64>;
pub type Envelope64 = asymptotics::Envelope<f64>;
pub type RateFit64 = asymptotics::RateFit<f64>;
pub type HardyReport64 = asymptotics::HardyReport<f64>;
