use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::operator_norm;
use crate::models::{check_truncation, Model};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Spacing {
    Linear,
    Geometric,
}

/// Sampling times `t_min = t_0 < ... < t_{points-1} = t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn linear(t_min: f64, t_max: f64, points: usize) -> Self {
        Self {
            t_min,
            t_max,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn geometric(t_min: f64, t_max: f64, points: usize) -> Self {
        Self {
            t_min,
            t_max,
            points,
            spacing: Spacing::Geometric,
        }
    }

    /// Geometric grid with ratio close to `sqrt(2)`.
    pub fn geometric_sqrt2(t_min: f64, t_max: f64) -> Self {
        let steps = ((t_max / t_min).ln() / std::f64::consts::SQRT_2.ln()).ceil().max(1.0) as usize;
        Self::geometric(t_min, t_max, steps + 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LabError::InvalidArgument(msg));
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_min < 0.0 {
            return bad(format!("time grid bounds must be finite and nonnegative: [{}, {}]", self.t_min, self.t_max));
        }
        if self.points == 0 {
            return bad("time grid needs at least one point".into());
        }
        if self.points == 1 {
            return if self.t_min == self.t_max {
                Ok(())
            } else {
                bad("a one-point grid needs t_min = t_max".into())
            };
        }
        if self.t_max <= self.t_min {
            return bad(format!("t_max ({}) must exceed t_min ({})", self.t_max, self.t_min));
        }
        if self.spacing == Spacing::Geometric && self.t_min <= 0.0 {
            return bad("a geometric grid needs t_min > 0".into());
        }
        Ok(())
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        if self.points == 1 {
            return Ok(vec![self.t_min]);
        }
        let last = (self.points - 1) as f64;
        let mut ts: Vec<f64> = (0..self.points)
            .map(|k| {
                let s = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.t_min + s * (self.t_max - self.t_min),
                    Spacing::Geometric => self.t_min * (self.t_max / self.t_min).powf(s),
                }
            })
            .collect();
        ts[0] = self.t_min;
        ts[self.points - 1] = self.t_max;
        Ok(ts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Quantity {
    /// `||T(t)||`
    SemigroupNorm,
    /// `||T(t) R_mu||`
    ResolventProductNorm,
    /// `||T(t) R_mu|| / ||T(t)||`
    Ratio,
}

/// A sampled norm curve with strictly increasing times and positive values.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSamples<T: Real> {
    pub points: Vec<(T, T)>,
    pub quantity: Quantity,
}

impl<T: Real> NormSamples<T> {
    pub fn new(points: Vec<(T, T)>, quantity: Quantity) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(LabError::InvalidArgument("sample times must be strictly increasing".into()));
            }
        }
        if let Some(&(t, v)) = points.iter().find(|(t, v)| !(v.is_finite() && *v > T::zero()) || !(*t >= T::zero())) {
            return Err(LabError::Degenerate(format!("sample value {v} at t = {t} is not finite and positive")));
        }
        Ok(Self { points, quantity })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn times(&self) -> Vec<T> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn values(&self) -> Vec<T> {
        self.points.iter().map(|p| p.1).collect()
    }
}

/// The three sampled quantities over a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurves<T: Real> {
    pub semigroup: NormSamples<T>,
    pub resolvent_product: NormSamples<T>,
    pub ratio: NormSamples<T>,
}

fn check_grid<T: Real>(ts: &[T]) -> Result<()> {
    if ts.is_empty() {
        return Err(LabError::InvalidArgument("empty time grid".into()));
    }
    if !(ts[0] >= T::zero()) {
        return Err(LabError::InvalidArgument("sample times must be nonnegative".into()));
    }
    Ok(())
}

/// Samples `||T(t)||` and `||T(t) R_mu||` (with `mu` the model default) at
/// every time in `ts`, in the model's norm.
///
/// Fails with `TruncationInadequate` if the truncation is too small for
/// `max(ts)`.
pub fn sample_all<T: Real>(model: &Model<T>, ts: &[T], tol: T) -> Result<SampledCurves<T>> {
    check_grid(ts)?;
    let t_max = ts.iter().fold(T::zero(), |m, &t| m.max(t));
    check_truncation(model.spec(), t_max.as_f64())?;
    let resolvent = model.resolvent(model.mu_default())?;
    let ctx = model.norm_context();
    let pairs = ts
        .par_iter()
        .map(|&t| {
            let semigroup = model.evolve(t)?;
            let a = operator_norm(&semigroup, ctx, ctx, tol)?;
            let b = operator_norm(&semigroup.mul(&resolvent)?, ctx, ctx, tol)?;
            Ok((t, a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCurves {
        semigroup: NormSamples::new(pairs.iter().map(|p| (p.0, p.1)).collect(), Quantity::SemigroupNorm)?,
        resolvent_product: NormSamples::new(pairs.iter().map(|p| (p.0, p.2)).collect(), Quantity::ResolventProductNorm)?,
        ratio: NormSamples::new(pairs.iter().map(|p| (p.0, p.2 / p.1)).collect(), Quantity::Ratio)?,
    })
}

/// One quantity of [`sample_all`]. Only the norms the quantity needs are
/// computed.
pub fn sample_norms<T: Real>(model: &Model<T>, ts: &[T], quantity: Quantity, tol: T) -> Result<NormSamples<T>> {
    match quantity {
        Quantity::Ratio => Ok(sample_all(model, ts, tol)?.ratio),
        Quantity::SemigroupNorm | Quantity::ResolventProductNorm => {
            check_grid(ts)?;
            let t_max = ts.iter().fold(T::zero(), |m, &t| m.max(t));
            check_truncation(model.spec(), t_max.as_f64())?;
            let resolvent = match quantity {
                Quantity::ResolventProductNorm => Some(model.resolvent(model.mu_default())?),
                _ => None,
            };
            let ctx = model.norm_context();
            let points = ts
                .par_iter()
                .map(|&t| {
                    let mut op = model.evolve(t)?;
                    if let Some(r) = &resolvent {
                        op = op.mul(r)?;
                    }
                    Ok((t, operator_norm(&op, ctx, ctx, tol)?))
                })
                .collect::<Result<Vec<_>>>()?;
            NormSamples::new(points, quantity)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Family, ModelSpec};

    #[test]
    fn grids() {
        let g = TimeGrid::geometric(1.0, 16.0, 5).values().unwrap();
        for (a, b) in g.iter().zip([1.0, 2.0, 4.0, 8.0, 16.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(TimeGrid::linear(0.0, 1.0, 3).values().unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(TimeGrid::geometric(0.0, 1.0, 3).values().is_err());
        assert!(TimeGrid::linear(2.0, 1.0, 3).values().is_err());
        assert!(TimeGrid::linear(1.0, 2.0, 0).values().is_err());
        let g = TimeGrid::geometric_sqrt2(1.0, 200.0);
        assert_eq!(g.points, 17);
    }

    #[test]
    fn semigroup_norm_at_zero_is_one() {
        for spec in [
            ModelSpec::new(Family::DiagJordan, 10),
            ModelSpec::new(Family::JordanPairs, 10),
            ModelSpec::log_spectrum(1, 10),
            ModelSpec::log_spectrum(2, 10),
        ] {
            let m = Model::<f64>::build(spec).unwrap();
            let s = sample_norms(&m, &[0.0], Quantity::SemigroupNorm, 1e-12).unwrap();
            assert!((s.points[0].1 - 1.0).abs() < 1e-10, "{spec:?}");
        }
    }

    #[test]
    fn truncation_is_a_hard_error() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 100)).unwrap();
        let err = sample_norms(&m, &[1.0, 10.0], Quantity::SemigroupNorm, 1e-10).unwrap_err();
        assert!(matches!(err, LabError::TruncationInadequate { required: 500, .. }));
    }

    #[test]
    fn jordan_pairs_norm_at_t_100() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 5000)).unwrap();
        let s = sample_norms(&m, &[100.0], Quantity::SemigroupNorm, 1e-10).unwrap();
        let v = s.points[0].1;
        assert!((99.0..=101.0).contains(&v), "{v}");
    }

    #[test]
    fn samples_reject_nonpositive_values() {
        assert!(NormSamples::new(vec![(1.0, 0.0)], Quantity::Ratio).is_err());
        assert!(NormSamples::new(vec![(1.0, 1.0), (1.0, 2.0)], Quantity::Ratio).is_err());
    }
}
