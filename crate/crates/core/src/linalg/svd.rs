//! Dense singular values by one-sided (Hestenes) Jacobi rotations.
//!
//! Used as the fallback and cross-check for power iteration; accurate to a
//! few ulps relative to the largest singular value, cubic cost per sweep.

use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 80;

/// All singular values of `m`, largest first.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    // orthogonalize the columns of whichever orientation has fewer of them
    let a = if m.rows() < m.cols() { m.adjoint() } else { m.clone() };
    let mut cols: Vec<Vec<C<T>>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let n = cols.len();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let alpha: T = cp.iter().map(|z| z.norm_sqr()).sum();
                    let beta: T = cq.iter().map(|z| z.norm_sqr()).sum();
                    let gamma = cp.iter().zip(cq).fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    // rotate (x, conj(phase) y) by the real Givens pair
                    let yr = *y * phase.conj();
                    let nx = *x * c - yr * s;
                    let ny = *x * s + yr * c;
                    *x = nx;
                    *y = ny;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = cols.iter().map(|c| crate::scalar::vec_norm(c)).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    sv
}

/// Largest singular value of `m`.
pub fn largest_singular_value<T: Real>(m: &ComplexMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rank_one() {
        let d = ComplexMatrix::from_diagonal(&[C::new(3.0f64, 0.0), C::new(0.0, -5.0), C::new(1.0, 1.0)]);
        let sv = singular_values(&d);
        assert!((sv[0] - 5.0).abs() < 1e-14);
        assert!((sv[1] - 3.0).abs() < 1e-14);
        assert!((sv[2] - 2f64.sqrt()).abs() < 1e-14);

        // u v^H with |u| = sqrt(2), |v| = sqrt(5)
        let u = [C::new(1.0, 0.0), C::new(0.0, 1.0)];
        let v = [C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(0.0, 0.0)];
        let m = ComplexMatrix::from_fn(2, 3, |i, j| u[i] * v[j].conj());
        let sv = singular_values(&m);
        assert!((sv[0] - 10f64.sqrt()).abs() < 1e-13);
        assert!(sv[1].abs() < 1e-13);
    }

    #[test]
    fn jordan_pair_block_closed_form() {
        // [[e^{ia}, b], [0, e^{-ia}]] has sigma_max = (b + sqrt(b^2 + 4)) / 2
        let (n, t) = (10.0f64, 5.0f64);
        let b = n * (t / n).sin();
        let m = ComplexMatrix::from_rows(&[
            vec![C::from_polar(1.0, t / n), C::new(b, 0.0)],
            vec![C::new(0.0, 0.0), C::from_polar(1.0, -t / n)],
        ])
        .unwrap();
        let expected = (b + (b * b + 4.0).sqrt()) / 2.0;
        assert!((largest_singular_value(&m) - expected).abs() < 1e-13);
    }
}
