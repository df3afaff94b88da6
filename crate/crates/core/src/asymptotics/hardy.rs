//! Discrete Hardy inequality `sum |c_n / n|^2 <= 4 sum |c_{n+1} - c_n|^2`.
//!
//! Indices start at `n = 1`. The sequence is taken to be zero before its
//! first entry and after its last, so the difference sum includes `|c_1|^2`
//! and `|c_len|^2`.

use serde::{Deserialize, Serialize};

use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyReport<T: Real> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs / (4 rhs)`, or `0` for the zero sequence.
    pub ratio: T,
}

pub fn hardy_check<T: Real>(c: &[C<T>]) -> HardyReport<T> {
    let lhs: T = c
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let n = T::from_usize_lossy(i + 1);
            z.norm_sqr() / (n * n)
        })
        .sum();
    let rhs = match (c.first(), c.last()) {
        (Some(first), Some(last)) => {
            first.norm_sqr() + c.windows(2).map(|w| (w[1] - w[0]).norm_sqr()).sum::<T>() + last.norm_sqr()
        }
        _ => T::zero(),
    };
    let ratio = if rhs > T::zero() { lhs / (T::lit(4.0) * rhs) } else { T::zero() };
    HardyReport { lhs, rhs, ratio }
}
