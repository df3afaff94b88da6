//! Least-squares fits of sampled curves to simple asymptotic laws.

use serde::{Deserialize, Serialize};

use crate::asymptotics::samples::NormSamples;
use crate::asymptotics::trend::least_squares_slope;
use crate::error::{LabError, Result};
use crate::scalar::Real;

/// Minimum number of samples inside the fit window.
pub const MIN_FIT_SAMPLES: usize = 8;
/// Largest `max/min` of `v / shape` accepted as two-sided equivalence.
pub const MAX_SPREAD: f64 = 3.0;
/// Largest residual log-log trend accepted as two-sided equivalence.
pub const MAX_TREND: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RateFamily {
    /// `v ~ c t^alpha`
    Power,
    /// `v ~ c / log t`
    InverseLog,
    /// `v ~ c`
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit<T: Real> {
    pub family: RateFamily,
    pub coefficient: T,
    /// `alpha` for `Power`, `-1` for `InverseLog`, `0` for `Constant`.
    pub exponent_or_scale: T,
    /// RMS residual in log space.
    pub residual: T,
    pub window: (T, T),
    /// `max / min` of `v / shape(t)` over the window.
    pub spread: T,
    /// Log-log slope of `v / shape(t)`.
    pub trend_slope: T,
    pub samples_used: usize,
}

impl<T: Real> RateFit<T> {
    /// Fitted law at `t`.
    pub fn eval(&self, t: T) -> T {
        match self.family {
            RateFamily::Power => self.coefficient * t.powf(self.exponent_or_scale),
            RateFamily::InverseLog => self.coefficient / t.ln(),
            RateFamily::Constant => self.coefficient,
        }
    }

    /// Whether the samples stay within fixed two-sided multiples of the law
    /// without residual drift.
    pub fn is_equivalent(&self) -> bool {
        self.spread <= T::lit(MAX_SPREAD) && self.trend_slope.abs() <= T::lit(MAX_TREND)
    }
}

fn log_shape<T: Real>(family: RateFamily, t: T, alpha: T) -> T {
    match family {
        RateFamily::Power => alpha * t.ln(),
        RateFamily::InverseLog => -t.ln().ln(),
        RateFamily::Constant => T::zero(),
    }
}

/// Fits `samples` over `window` (default: every sample with `t >= e^2`).
/// Windows starting below `e` are rejected.
pub fn fit_rate<T: Real>(samples: &NormSamples<T>, family: RateFamily, window: Option<(T, T)>) -> Result<RateFit<T>> {
    let e = T::E();
    let (lo, hi) = window.unwrap_or((e * e, T::infinity()));
    if !(lo >= e * (T::one() - T::lit(1e-9))) || !(hi >= lo) {
        return Err(LabError::InvalidArgument(format!(
            "fit window must satisfy e <= t_min <= t_max, got [{lo}, {hi}]"
        )));
    }
    let slack = T::one() - T::lit(1e-9);
    let pts: Vec<(T, T)> = samples
        .points
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo * slack && t <= hi)
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(LabError::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            have: pts.len(),
        });
    }
    let n = T::from_usize_lossy(pts.len());
    let xy: Vec<(T, T)> = pts.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();

    let alpha = match family {
        RateFamily::Power => least_squares_slope(&xy).ok_or_else(|| LabError::Degenerate("all fit times coincide".into()))?,
        RateFamily::InverseLog => -T::one(),
        RateFamily::Constant => T::zero(),
    };
    // log v - log shape(t) is fitted by its mean
    let rest: Vec<(T, T)> = pts
        .iter()
        .zip(&xy)
        .map(|(&(t, _), &(lt, lv))| (lt, lv - log_shape(family, t, alpha)))
        .collect();
    let log_c = rest.iter().map(|p| p.1).sum::<T>() / n;
    let residual = (rest.iter().map(|p| (p.1 - log_c).powi(2)).sum::<T>() / n).sqrt();
    let (rmin, rmax) = rest
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let trend_slope = least_squares_slope(&rest).unwrap_or_else(T::zero);

    Ok(RateFit {
        family,
        coefficient: log_c.exp(),
        exponent_or_scale: alpha,
        residual,
        window: (pts[0].0, pts[pts.len() - 1].0),
        spread: (rmax - rmin).exp(),
        trend_slope,
        samples_used: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::samples::Quantity;

    fn synth(f: impl Fn(f64) -> f64) -> NormSamples<f64> {
        let pts = (0..40)
            .map(|k| {
                let t = 10f64 * 1000f64.powf(k as f64 / 39.0);
                (t, f(t))
            })
            .collect();
        NormSamples::new(pts, Quantity::Ratio).unwrap()
    }

    #[test]
    fn recovers_power_law() {
        let fit = fit_rate(&synth(|t| 2.5 * t.powf(-0.75)), RateFamily::Power, None).unwrap();
        assert!((fit.exponent_or_scale + 0.75).abs() < 1e-10);
        assert!((fit.coefficient - 2.5).abs() < 1e-10);
        assert!(fit.residual < 1e-12);
        assert!(fit.is_equivalent());
    }

    #[test]
    fn recovers_inverse_log() {
        let fit = fit_rate(&synth(|t| 3.0 / t.ln()), RateFamily::InverseLog, None).unwrap();
        assert!((fit.coefficient - 3.0).abs() < 1e-10);
        assert!(fit.residual <= 1e-12);
        assert!((fit.spread - 1.0).abs() < 1e-12);
        assert_eq!(fit.exponent_or_scale, -1.0);
    }

    #[test]
    fn recovers_constant() {
        let fit = fit_rate(&synth(|_| 0.4), RateFamily::Constant, None).unwrap();
        assert!((fit.coefficient - 0.4).abs() < 1e-10);
        assert!((fit.eval(1e6) - 0.4).abs() < 1e-10);
    }

    #[test]
    fn drift_is_not_equivalence() {
        let fit = fit_rate(&synth(|t| t.sqrt()), RateFamily::Constant, None).unwrap();
        assert!(!fit.is_equivalent());
        assert!((fit.trend_slope - 0.5).abs() < 1e-10);
    }

    #[test]
    fn window_and_sample_count() {
        let s = synth(|t| t);
        let fit = fit_rate(&s, RateFamily::Power, Some((100.0, 1000.0))).unwrap();
        assert!(fit.window.0 >= 100.0 - 1e-6 && fit.window.1 <= 1000.0);
        assert!(matches!(
            fit_rate(&s, RateFamily::Power, Some((100.0, 120.0))),
            Err(LabError::InsufficientSamples { needed: 8, .. })
        ));
        assert!(fit_rate(&s, RateFamily::Power, Some((1.0, 120.0))).is_err());
    }
}
