//! Operator norms between (possibly weighted) coordinate spaces.
//!
//! `||M||_{dom -> cod}` equals the largest singular value of
//! `D_cod * M * L_dom`, where `D` is the weighting transform of the codomain
//! and `L` the inverse weighting of the domain (both identity for Euclidean
//! spaces). The product is never formed: each power-iteration step applies the
//! three factors as separate matvecs.

use crate::error::{LabError, Result};
use crate::linalg::block::BlockDiagonal;
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::svd::largest_singular_value;
use crate::linalg::weighting::{
    apply_cumulative, apply_cumulative_adjoint, apply_difference, apply_difference_adjoint, NormContext,
};
use crate::scalar::{cis, czero, Real, C};

/// Matrices at or below this size fall back to a dense SVD when power
/// iteration stalls.
pub const DENSE_FALLBACK_MAX_DIM: usize = 512;

pub const DEFAULT_NORM_TOL: f64 = 1e-10;

/// Anything that can be applied to a vector and to its adjoint.
pub trait LinearOperator<T: Real>: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[C<T>], y: &mut [C<T>]);
    fn apply_adjoint(&self, x: &[C<T>], y: &mut [C<T>]);
    fn to_dense(&self) -> ComplexMatrix<T>;

    /// Exact Euclidean operator norm when the structure admits one.
    fn closed_form_norm(&self) -> Option<T> {
        None
    }
}

impl<T: Real> LinearOperator<T> for ComplexMatrix<T> {
    fn nrows(&self) -> usize {
        self.rows()
    }

    fn ncols(&self) -> usize {
        self.cols()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).fold(czero(), |acc, (a, b)| acc + a * b);
        }
    }

    fn apply_adjoint(&self, x: &[C<T>], y: &mut [C<T>]) {
        y.iter_mut().for_each(|z| *z = czero());
        for (i, xi) in x.iter().enumerate() {
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj = *yj + a.conj() * xi;
            }
        }
    }

    fn to_dense(&self) -> ComplexMatrix<T> {
        self.clone()
    }
}

impl<T: Real> LinearOperator<T> for BlockDiagonal<T> {
    fn nrows(&self) -> usize {
        self.dim()
    }

    fn ncols(&self) -> usize {
        self.dim()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        self.apply_into(x, y, false);
    }

    fn apply_adjoint(&self, x: &[C<T>], y: &mut [C<T>]) {
        self.apply_into(x, y, true);
    }

    fn to_dense(&self) -> ComplexMatrix<T> {
        BlockDiagonal::to_dense(self)
    }

    fn closed_form_norm(&self) -> Option<T> {
        Some(self.spectral_norm())
    }
}

/// `D_cod * op * L_dom` applied factor by factor.
pub struct Weighted<'a, T: Real, Op: LinearOperator<T> + ?Sized> {
    op: &'a Op,
    domain: NormContext,
    codomain: NormContext,
    _scalar: std::marker::PhantomData<T>,
}

impl<'a, T: Real, Op: LinearOperator<T> + ?Sized> Weighted<'a, T, Op> {
    pub fn new(op: &'a Op, domain: NormContext, codomain: NormContext) -> Result<Self> {
        if domain.dim() != op.ncols() {
            return Err(LabError::DimensionMismatch {
                expected: op.ncols(),
                got: domain.dim(),
            });
        }
        if codomain.dim() != op.nrows() {
            return Err(LabError::DimensionMismatch {
                expected: op.nrows(),
                got: codomain.dim(),
            });
        }
        Ok(Self {
            op,
            domain,
            codomain,
            _scalar: std::marker::PhantomData,
        })
    }
}

impl<T: Real, Op: LinearOperator<T> + ?Sized> LinearOperator<T> for Weighted<'_, T, Op> {
    fn nrows(&self) -> usize {
        self.op.nrows()
    }

    fn ncols(&self) -> usize {
        self.op.ncols()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        let mut tmp = x.to_vec();
        if !self.domain.is_euclidean() {
            apply_cumulative(self.domain.order(), &mut tmp);
        }
        self.op.apply(&tmp, y);
        if !self.codomain.is_euclidean() {
            apply_difference(self.codomain.order(), y);
        }
    }

    fn apply_adjoint(&self, x: &[C<T>], y: &mut [C<T>]) {
        let mut tmp = x.to_vec();
        if !self.codomain.is_euclidean() {
            apply_difference_adjoint(self.codomain.order(), &mut tmp);
        }
        self.op.apply_adjoint(&tmp, y);
        if !self.domain.is_euclidean() {
            apply_cumulative_adjoint(self.domain.order(), y);
        }
    }

    fn to_dense(&self) -> ComplexMatrix<T> {
        let n = self.ncols();
        let mut out = ComplexMatrix::zeros(self.nrows(), n);
        let mut e = vec![czero(); n];
        let mut col = vec![czero(); self.nrows()];
        for j in 0..n {
            e[j] = C::new(T::one(), T::zero());
            self.apply(&e, &mut col);
            for (i, v) in col.iter().enumerate() {
                out[(i, j)] = *v;
            }
            e[j] = czero();
        }
        out
    }
}

/// Outcome of a power iteration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIterate<T> {
    pub estimate: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration on the Gram operator `A^H A`, starting from the
/// normalized all-ones vector.
///
/// The estimate after each step is `||A^H A v|| / ||A v||`, a lower bound
/// for the largest singular value that increases towards it. Iteration
/// stops once both the relative step and the geometric extrapolation of
/// the remaining error fall below `tol`.
pub fn power_iteration<T: Real, Op: LinearOperator<T> + ?Sized>(op: &Op, tol: T, max_iter: usize) -> PowerIterate<T> {
    let n = op.ncols();
    let m = op.nrows();
    let inv_sqrt = T::one() / T::from_usize_lossy(n).sqrt();
    let mut v = vec![C::new(inv_sqrt, T::zero()); n];
    let mut w = vec![czero(); m];
    let mut u = vec![czero(); n];

    op.apply(&v, &mut w);
    if crate::scalar::vec_norm(&w) == T::zero() {
        // all-ones lies in the kernel; a fixed unimodular sequence is the
        // second deterministic start
        let golden = T::lit(2.399_963_229_728_653);
        for (k, z) in v.iter_mut().enumerate() {
            *z = cis(golden * T::from_usize_lossy(k)) * inv_sqrt;
        }
    }

    let mut prev = T::zero();
    let mut prev_step = T::infinity();
    for it in 1..=max_iter.max(1) {
        op.apply(&v, &mut w);
        let wn = crate::scalar::vec_norm(&w);
        if wn == T::zero() {
            return PowerIterate {
                estimate: T::zero(),
                iterations: it,
                converged: true,
            };
        }
        op.apply_adjoint(&w, &mut u);
        let un = crate::scalar::vec_norm(&u);
        let est = un / wn;
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui / un;
        }

        let step = (est - prev).abs();
        let rel = step / est;
        if it > 1 {
            let q = if prev_step.is_finite() && prev_step > T::zero() {
                step / prev_step
            } else {
                T::one()
            };
            let tail = if q < T::one() { step * q / (T::one() - q) } else { T::infinity() };
            if rel <= T::epsilon() * T::lit(8.0) || (rel <= tol && tail <= tol * est) {
                return PowerIterate {
                    estimate: est,
                    iterations: it,
                    converged: true,
                };
            }
        }
        prev_step = step;
        prev = est;
    }
    PowerIterate {
        estimate: prev,
        iterations: max_iter,
        converged: false,
    }
}

/// Largest singular value of the explicitly weighted dense matrix.
pub fn dense_operator_norm<T: Real, Op: LinearOperator<T> + ?Sized>(
    op: &Op,
    domain: NormContext,
    codomain: NormContext,
) -> Result<T> {
    let weighted = Weighted::new(op, domain, codomain)?;
    Ok(largest_singular_value(&weighted.to_dense()))
}

/// Operator norm of `op` as a map from `(X, ||.||_domain)` to
/// `(X, ||.||_codomain)`.
///
/// Block-diagonal operators between Euclidean spaces use the exact block
/// supremum. Otherwise power iteration runs with an iteration cap of
/// `10 * dim`; if it stalls, matrices up to [`DENSE_FALLBACK_MAX_DIM`] are
/// handed to the dense SVD and larger ones report `IllConditioned`.
pub fn operator_norm<T: Real, Op: LinearOperator<T> + ?Sized>(
    op: &Op,
    domain: NormContext,
    codomain: NormContext,
    tol: T,
) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(LabError::InvalidArgument("tolerance must be positive".into()));
    }
    let weighted = Weighted::new(op, domain, codomain)?;
    if domain.is_euclidean() && codomain.is_euclidean() {
        if let Some(v) = op.closed_form_norm() {
            return Ok(v);
        }
    }
    let dim = op.nrows().max(op.ncols());
    let run = power_iteration(&weighted, tol, 10 * dim);
    if run.converged {
        return Ok(run.estimate);
    }
    if dim <= DENSE_FALLBACK_MAX_DIM {
        return Ok(largest_singular_value(&weighted.to_dense()));
    }
    Err(LabError::IllConditioned {
        iterations: run.iterations,
        last: run.estimate.as_f64(),
    })
}
