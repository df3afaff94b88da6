//! Backward-difference weighting of sequence spaces.
//!
//! The weighted norm of order `N` is `|| Delta^N c ||_2`, where `Delta` is the
//! lower-bidiagonal backward difference and entries before the first index
//! are taken to be zero. `Delta^N` is never formed for the hot paths: it is
//! applied as `N` successive differences, and its inverse as `N` successive
//! prefix sums.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{vec_norm, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormKind {
    Euclidean,
    DeltaWeighted,
}

/// Which norm a coordinate space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormContext {
    kind: NormKind,
    order: u32,
    dim: usize,
}

impl NormContext {
    pub fn euclidean(dim: usize) -> Self {
        Self {
            kind: NormKind::Euclidean,
            order: 0,
            dim,
        }
    }

    pub fn delta_weighted(order: u32, dim: usize) -> Result<Self> {
        check_order(order, dim)?;
        Ok(Self {
            kind: NormKind::DeltaWeighted,
            order,
            dim,
        })
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_euclidean(&self) -> bool {
        self.kind == NormKind::Euclidean
    }
}

fn check_order(order: u32, dim: usize) -> Result<()> {
    if order == 0 {
        return Err(LabError::IdentityWeighting);
    }
    if dim <= order as usize {
        return Err(LabError::InvalidArgument(format!(
            "dimension {dim} must exceed the difference order {order}"
        )));
    }
    Ok(())
}

/// Exact binomial coefficient; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Exact entry `(row, col)` of `Delta^order`.
pub fn difference_entry(order: u32, row: usize, col: usize) -> i128 {
    if col > row || row - col > order as usize {
        return 0;
    }
    let j = (row - col) as u64;
    let b = binomial(order as u64, j).expect("small binomial") as i128;
    if j.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

/// Exact entry `(row, col)` of `Delta^{-order}`: `C(row - col + order - 1, order - 1)`.
pub fn cumulative_entry(order: u32, row: usize, col: usize) -> Option<u128> {
    if col > row {
        return Some(0);
    }
    binomial((row - col) as u64 + order as u64 - 1, order as u64 - 1)
}

/// Dense `Delta^order` of size `dim x dim`.
pub fn difference_matrix<T: Real>(order: u32, dim: usize) -> Result<ComplexMatrix<T>> {
    check_order(order, dim)?;
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let v = difference_entry(order, i, j);
        C::new(T::from_i128(v).expect("small integer"), T::zero())
    }))
}

/// Dense inverse of [`difference_matrix`].
pub fn cumulative_matrix<T: Real>(order: u32, dim: usize) -> Result<ComplexMatrix<T>> {
    check_order(order, dim)?;
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let v = cumulative_entry(order, i, j).expect("binomial overflow");
        C::new(T::from_u128(v).unwrap_or_else(T::infinity), T::zero())
    }))
}

/// In-place `x <- Delta^order x`.
pub(crate) fn apply_difference<T: Real>(order: u32, x: &mut [C<T>]) {
    for _ in 0..order {
        for n in (1..x.len()).rev() {
            x[n] = x[n] - x[n - 1];
        }
    }
}

/// In-place `x <- (Delta^order)^H x`.
pub(crate) fn apply_difference_adjoint<T: Real>(order: u32, x: &mut [C<T>]) {
    for _ in 0..order {
        for n in 0..x.len().saturating_sub(1) {
            x[n] = x[n] - x[n + 1];
        }
    }
}

/// In-place `x <- Delta^{-order} x` (repeated prefix sums).
pub(crate) fn apply_cumulative<T: Real>(order: u32, x: &mut [C<T>]) {
    for _ in 0..order {
        for n in 1..x.len() {
            x[n] = x[n] + x[n - 1];
        }
    }
}

/// In-place `x <- (Delta^{-order})^H x` (repeated suffix sums).
pub(crate) fn apply_cumulative_adjoint<T: Real>(order: u32, x: &mut [C<T>]) {
    for _ in 0..order {
        for n in (0..x.len().saturating_sub(1)).rev() {
            x[n] = x[n] + x[n + 1];
        }
    }
}

/// Norm of `v` in the given context.
pub fn weighted_vector_norm<T: Real>(ctx: &NormContext, v: &[C<T>]) -> Result<T> {
    if v.len() != ctx.dim {
        return Err(LabError::DimensionMismatch {
            expected: ctx.dim,
            got: v.len(),
        });
    }
    match ctx.kind {
        NormKind::Euclidean => Ok(vec_norm(v)),
        NormKind::DeltaWeighted => {
            let mut w = v.to_vec();
            apply_difference(ctx.order, &mut w);
            Ok(vec_norm(&w))
        }
    }
}
