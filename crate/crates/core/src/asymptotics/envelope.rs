//! Concave-log majorants of sampled norm curves.
//!
//! The envelope is the upper concave hull of the points `(t, log v)`,
//! linear in `log f` between knots and continued with the end slopes
//! outside the sampled range. By construction it majorizes every sample and
//! touches the curve at each knot.

use crate::asymptotics::samples::NormSamples;
use crate::error::{LabError, Result};
use crate::scalar::Real;

/// Tolerance on the half-width of the translation ratio at the window end.
pub const TRANSLATION_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<T: Real> {
    /// Hull vertices `(t, log f(t))`, strictly increasing in `t`.
    pub knots: Vec<(T, T)>,
    /// `max_i v_i / f(t_i)`; a lower estimate of `limsup ||T(t)|| / f(t)`.
    pub a_estimate: T,
}

/// Upper concave hull of `(t, log v)` by Andrew's monotone chain.
pub fn concave_envelope<T: Real>(samples: &NormSamples<T>) -> Result<Envelope<T>> {
    Envelope::from_points(&samples.points)
}

impl<T: Real> Envelope<T> {
    pub fn from_points(points: &[(T, T)]) -> Result<Self> {
        if points.len() < 3 {
            return Err(LabError::InsufficientSamples {
                needed: 3,
                have: points.len(),
            });
        }
        if points.iter().any(|p| !(p.1 > T::zero()) || !p.1.is_finite()) {
            return Err(LabError::Degenerate("envelope samples must be finite and positive".into()));
        }
        let mut pts: Vec<(T, T)> = points.iter().map(|&(t, v)| (t, v.ln())).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        if pts.first().map(|p| p.0) == pts.last().map(|p| p.0) {
            return Err(LabError::Degenerate("all sample times are equal".into()));
        }
        // among equal times only the largest value matters
        pts.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 = earlier.1.max(later.1);
                true
            } else {
                false
            }
        });

        let mut hull: Vec<(T, T)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
                if cross >= T::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }

        let mut env = Self {
            knots: hull,
            a_estimate: T::one(),
        };
        let a = points
            .iter()
            .fold(T::zero(), |m, &(t, v)| m.max(v / env.eval(t)));
        env.a_estimate = a.min(T::one());
        Ok(env)
    }

    /// `log f(t)`.
    pub fn eval_log(&self, t: T) -> T {
        let k = &self.knots;
        let seg = |i: usize| {
            let (a, b) = (k[i], k[i + 1]);
            a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
        };
        if k.len() == 1 {
            return k[0].1;
        }
        if t <= k[0].0 {
            return seg(0);
        }
        if t >= k[k.len() - 1].0 {
            return seg(k.len() - 2);
        }
        let i = k.partition_point(|p| p.0 <= t) - 1;
        seg(i.min(k.len() - 2))
    }

    pub fn eval(&self, t: T) -> T {
        self.eval_log(t).exp()
    }

    /// Largest second divided difference of `log f` over the knots (concave
    /// iff nonpositive).
    pub fn max_second_divided_difference(&self) -> T {
        self.knots
            .windows(3)
            .map(|w| {
                let d1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                let d2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                (d2 - d1) / (w[2].0 - w[0].0)
            })
            .fold(T::neg_infinity(), T::max)
    }

    /// Largest relative excess `v / f(t) - 1` over the samples (nonpositive
    /// when the envelope majorizes them).
    pub fn max_excess(&self, points: &[(T, T)]) -> T {
        points
            .iter()
            .map(|&(t, v)| v / self.eval(t) - T::one())
            .fold(T::neg_infinity(), T::max)
    }

    /// Slope of `log f` beyond the last knot.
    pub fn final_slope(&self) -> T {
        let k = &self.knots;
        if k.len() < 2 {
            return T::zero();
        }
        let (a, b) = (k[k.len() - 2], k[k.len() - 1]);
        (b.1 - a.1) / (b.0 - a.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationCheck<T: Real> {
    /// `(s, f(t + s) / f(s))`.
    pub curve: Vec<(T, T)>,
    pub verdict: bool,
}

/// Tabulates `f(shift + s) / f(s)` over `s_grid`; the verdict requires
/// `|ratio - 1| <= 0.05` at the largest `s`.
pub fn envelope_translation_check<T: Real>(env: &Envelope<T>, shift: T, s_grid: &[T]) -> Result<TranslationCheck<T>> {
    if !(shift > T::zero()) {
        return Err(LabError::InvalidArgument("translation must be positive".into()));
    }
    if s_grid.is_empty() {
        return Err(LabError::InvalidArgument("empty translation grid".into()));
    }
    let curve: Vec<(T, T)> = s_grid
        .iter()
        .map(|&s| (s, (env.eval_log(shift + s) - env.eval_log(s)).exp()))
        .collect();
    let last = curve
        .iter()
        .fold(None::<(T, T)>, |m, &p| match m {
            Some(q) if q.0 >= p.0 => Some(q),
            _ => Some(p),
        })
        .expect("nonempty");
    let verdict = (last.1 - T::one()).abs() <= T::lit(TRANSLATION_TOL);
    Ok(TranslationCheck { curve, verdict })
}
