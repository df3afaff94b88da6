//! Tent-vector lower bound for the log-spectrum semigroup.
//!
//! On the first-order weighted space, `x` peaks at index `2t` and the
//! smoothed orbit `T(t) A^{-1} x` has norm of order `(t / log t) ||x||`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{operator_norm, weighted_vector_norm, NormContext};
use crate::models::{check_truncation, Family, Model};
use crate::scalar::{czero, Real, C};

/// Index of the first coordinate of the log-spectrum model.
const FIRST_INDEX: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T: Real> {
    pub coords: Vec<C<T>>,
    /// First-order weighted norm.
    pub norm: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessBound<T: Real> {
    pub t: T,
    /// `||T(t) A^{-1} x|| / ||x||`
    pub raw: T,
    /// `raw * log t / t`
    pub normalized: T,
    pub witness_norm_sq: T,
    /// `||T(t) A^{-1}||`, which bounds `raw` from above.
    pub operator_norm: T,
}

/// The tent `c_n = n` for `n <= 2t`, `4t - n` for `2t < n <= 4t`, zero
/// afterwards, with coordinate `k` holding `c_{k+2}`.
pub fn witness_vector<T: Real>(t: T, dim: usize) -> Result<Witness<T>> {
    if !(t > T::E()) || !t.is_finite() {
        return Err(LabError::InvalidArgument(format!("witness needs t > e, got {t}")));
    }
    let needed = (T::lit(4.0) * t).ceil().as_f64() as usize + 1;
    if dim < needed {
        return Err(LabError::InvalidArgument(format!(
            "witness at t = {t} needs dim >= {needed}, got {dim}"
        )));
    }
    let two_t = T::lit(2.0) * t;
    let four_t = T::lit(4.0) * t;
    let coords: Vec<C<T>> = (0..dim)
        .map(|k| {
            let n = T::from_usize_lossy(k + FIRST_INDEX);
            let c = if n <= two_t {
                n
            } else if n <= four_t {
                four_t - n
            } else {
                T::zero()
            };
            C::new(c, T::zero())
        })
        .collect();
    let norm = weighted_vector_norm(&NormContext::delta_weighted(1, dim)?, &coords)?;
    Ok(Witness { coords, norm })
}

/// Evaluates the witness ratio at `t` on a first-order log-spectrum model
/// with `dim >= 8t`.
pub fn witness_lower_bound<T: Real>(model: &Model<T>, t: T, tol: T) -> Result<WitnessBound<T>> {
    if model.family() != Family::LogSpectrum || model.spec().order != 1 {
        return Err(LabError::InvalidArgument(
            "witness bound is defined for the first-order log-spectrum model".into(),
        ));
    }
    check_truncation(model.spec(), t.as_f64())?;
    let w = witness_vector(t, model.dim())?;
    // A^{-1} = -R(0); the sign does not affect norms
    let smoothing = model.evolve(t)?.mul(&model.resolvent(czero())?)?;
    let image = smoothing.matvec(&w.coords)?;
    let ctx = model.norm_context();
    let raw = weighted_vector_norm(&ctx, &image)? / w.norm;
    Ok(WitnessBound {
        t,
        raw,
        normalized: raw * t.ln() / t,
        witness_norm_sq: w.norm * w.norm,
        operator_norm: operator_norm(&smoothing, ctx, ctx, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelSpec;

    #[test]
    fn tent_at_ten() {
        let w = witness_vector(10.0f64, 60).unwrap();
        let head: Vec<f64> = w.coords[..40].iter().map(|z| z.re).collect();
        let mut expected: Vec<f64> = (2..=20).map(|n| n as f64).collect();
        expected.extend((0..=19).rev().map(|n| n as f64));
        expected.push(0.0);
        assert_eq!(&head[..], &expected[..40]);
        assert!(w.coords[39..].iter().all(|z| z.re == 0.0));
        assert!((w.norm * w.norm - 42.0).abs() < 1e-9);
    }

    #[test]
    fn norm_grows_linearly() {
        for t in [10.0f64, 20.0, 40.0, 80.0] {
            let w = witness_vector(t, 8 * t as usize).unwrap();
            assert!((w.norm * w.norm - (4.0 * t + 2.0)).abs() < 1e-9);
        }
        let small = witness_vector(std::f64::consts::E + 0.1, 20).unwrap();
        assert!((small.norm * small.norm - 4.0 * (std::f64::consts::E + 0.1)).abs() < 4.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(witness_vector(2.0f64, 100).is_err());
        assert!(witness_vector(10.0f64, 40).is_err());
        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 50)).unwrap();
        assert!(matches!(witness_lower_bound(&m, 10.0, 1e-10), Err(LabError::TruncationInadequate { .. })));
        let m2 = Model::<f64>::build(ModelSpec::log_spectrum(2, 200)).unwrap();
        assert!(witness_lower_bound(&m2, 10.0, 1e-10).is_err());
    }

    #[test]
    fn bound_at_ten() {
        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 81)).unwrap();
        let b = witness_lower_bound(&m, 10.0, 1e-10).unwrap();
        assert!((b.normalized - 0.696).abs() < 0.01, "{b:?}");
        assert!(b.raw <= b.operator_norm * (1.0 + 1e-9));
    }
}
