use crate::scalar::Real;

/// Least-squares slope of `log v` against `log t` over points with `t > 0`
/// and `v > 0`; `None` with fewer than two usable points.
pub fn loglog_slope<T: Real>(points: &[(T, T)]) -> Option<T> {
    let xy: Vec<(T, T)> = points
        .iter()
        .filter(|(t, v)| *t > T::zero() && *v > T::zero())
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    least_squares_slope(&xy)
}

pub(crate) fn least_squares_slope<T: Real>(xy: &[(T, T)]) -> Option<T> {
    if xy.len() < 2 {
        return None;
    }
    let n = T::from_usize_lossy(xy.len());
    let mx = xy.iter().map(|p| p.0).sum::<T>() / n;
    let my = xy.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = xy.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == T::zero() {
        return None;
    }
    let sxy: T = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Finite-window decay test: the log-log slope must not exceed `max_slope`
/// and the last value must be below `max_last_over_first` times the first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCriterion {
    pub max_slope: f64,
    pub max_last_over_first: f64,
}

impl DecayCriterion {
    /// Norm of the semigroup restricted to a spectral subspace, over the
    /// envelope.
    pub const HYPOTHESIS_B: Self = Self {
        max_slope: -0.5,
        max_last_over_first: 0.1,
    };

    /// Resolvent-smoothed semigroup over the envelope. Calibrated for decay
    /// as slow as `1 / log t`.
    pub const CONCLUSION: Self = Self {
        max_slope: -0.1,
        max_last_over_first: 0.5,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve<T: Real> {
    pub points: Vec<(T, T)>,
    pub slope: Option<T>,
    pub decaying: bool,
}

impl<T: Real> DecayCurve<T> {
    pub fn evaluate(points: Vec<(T, T)>, criterion: DecayCriterion) -> Self {
        let scale = points.iter().fold(T::zero(), |m, p| m.max(p.1.abs()));
        // quadrature noise around an empty contour counts as identically zero
        if scale <= T::epsilon() * T::lit(1e3) {
            return Self {
                points,
                slope: None,
                decaying: true,
            };
        }
        let slope = loglog_slope(&points);
        let positive: Vec<&(T, T)> = points.iter().filter(|p| p.0 > T::zero()).collect();
        let drop_ok = match (positive.first(), positive.last()) {
            (Some(first), Some(last)) if positive.len() >= 2 => last.1 < T::lit(criterion.max_last_over_first) * first.1,
            _ => false,
        };
        let decaying = drop_ok && slope.is_some_and(|s| s <= T::lit(criterion.max_slope));
        Self {
            points,
            slope,
            decaying,
        }
    }
}
