//! Riesz spectral projections on circles, by trapezoidal quadrature and in
//! closed form, and the checks that an isolated eigenvalue admits an
//! enclosing contour whose projection grows slower than a given envelope.
//!
//! Projections are normalized as `P = (1 / 2 pi i) * contour integral of
//! (mu I - A)^{-1} d mu` over a counterclockwise circle, which makes `P`
//! idempotent. Defects are measured in the Euclidean operator norm.

use rayon::prelude::*;

use crate::asymptotics::trend::{DecayCriterion, DecayCurve};
use crate::error::{LabError, Result};
use crate::linalg::{operator_norm, Block, BlockDiagonal};
use crate::models::Model;
use crate::scalar::{cis, cone, czero, Real, C};

/// Minimal distance between any eigenvalue and the contour.
pub const CONTOUR_MARGIN: f64 = 1e-6;
/// Largest change in `P` tolerated when the node count is doubled.
pub const REFINEMENT_TOL: f64 = 1e-8;
/// Time points at which commutation with the semigroup is checked.
pub const COMMUTATION_TIMES: [f64; 4] = [0.0, 1.0, 10.0, 100.0];
pub const DEFAULT_NODES: usize = 64;
const MAX_RADIUS: f64 = 0.5;
const CLUSTER_GAP: f64 = 1e-9;

/// A counterclockwise circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour<T: Real> {
    pub center: C<T>,
    pub radius: T,
    pub nodes: usize,
}

impl<T: Real> Contour<T> {
    pub fn new(center: C<T>, radius: T, nodes: usize) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(LabError::InvalidArgument(format!("contour radius must be positive, got {radius}")));
        }
        if nodes < 16 || !nodes.is_multiple_of(2) {
            return Err(LabError::InvalidArgument(format!(
                "contour needs an even node count of at least 16, got {nodes}"
            )));
        }
        Ok(Self { center, radius, nodes })
    }

    pub fn encloses(&self, z: C<T>) -> bool {
        (z - self.center).norm() < self.radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport<T: Real> {
    pub projection: BlockDiagonal<T>,
    /// `||P^2 - P||`.
    pub idempotency_defect: T,
    /// `max_t ||T(t) P - P T(t)||` over [`COMMUTATION_TIMES`].
    pub commutation_defect: T,
    pub trace: C<T>,
    pub rank: usize,
    pub enclosed: Vec<C<T>>,
    /// `||P_2n - P_n||` for quadrature reports, zero for closed forms.
    pub refinement_change: T,
}

fn report<T: Real>(model: &Model<T>, projection: BlockDiagonal<T>, enclosed: Vec<C<T>>, refinement_change: T) -> Result<ProjectionReport<T>> {
    let idempotency_defect = projection.mul(&projection)?.sub(&projection)?.spectral_norm();
    let mut commutation_defect = T::zero();
    for &t in &COMMUTATION_TIMES {
        let semigroup = model.evolve(T::lit(t))?;
        let d = semigroup
            .mul(&projection)?
            .sub(&projection.mul(&semigroup)?)?
            .spectral_norm();
        commutation_defect = commutation_defect.max(d);
    }
    let trace = projection.trace();
    let rank = trace.re.round().max(T::zero()).to_usize().unwrap_or(0);
    Ok(ProjectionReport {
        projection,
        idempotency_defect,
        commutation_defect,
        trace,
        rank,
        enclosed,
        refinement_change,
    })
}

/// Trapezoidal rule with `nodes` equispaced points.
fn trapezoid<T: Real>(model: &Model<T>, contour: &Contour<T>, nodes: usize) -> BlockDiagonal<T> {
    let n = T::from_usize_lossy(nodes);
    let step = T::TAU() / n;
    let terms: Vec<BlockDiagonal<T>> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let w = cis(step * T::from_usize_lossy(k)) * contour.radius;
            // (mu - A)^{-1} = -R_mu
            model.resolvent_unchecked(contour.center + w).scale(-w / n)
        })
        .collect();
    let mut acc = terms[0].clone();
    for term in &terms[1..] {
        acc = acc.add(term).expect("shared layout");
    }
    acc
}

fn check_margin<T: Real>(model: &Model<T>, contour: &Contour<T>) -> Result<()> {
    for e in model.eigenvalues() {
        let margin = ((e.value - contour.center).norm() - contour.radius).abs();
        if margin < T::lit(CONTOUR_MARGIN) {
            return Err(LabError::ContourTooClose {
                re: e.value.re.as_f64(),
                im: e.value.im.as_f64(),
                margin: margin.as_f64(),
            });
        }
    }
    Ok(())
}

/// Riesz projection for the part of the spectrum inside `contour`.
///
/// The integral is evaluated with `contour.nodes` and `2 * contour.nodes`
/// points; the returned projection uses `contour.nodes`.
pub fn riesz_projection_quadrature<T: Real>(model: &Model<T>, contour: &Contour<T>) -> Result<ProjectionReport<T>> {
    check_margin(model, contour)?;
    let coarse = trapezoid(model, contour, contour.nodes);
    let fine = trapezoid(model, contour, 2 * contour.nodes);
    let change = fine.sub(&coarse)?.spectral_norm();
    if !(change <= T::lit(REFINEMENT_TOL)) {
        return Err(LabError::NonConverged { change: change.as_f64() });
    }
    let enclosed = model
        .eigenvalues()
        .iter()
        .filter(|e| contour.encloses(e.value))
        .map(|e| e.value)
        .collect();
    report(model, coarse, enclosed, change)
}

/// Exact spectral projection onto the eigenvalue at `eigenvalue_index` of
/// [`Model::eigenvalues`].
pub fn riesz_projection_closed<T: Real>(model: &Model<T>, eigenvalue_index: usize) -> Result<ProjectionReport<T>> {
    let spectrum = model.eigenvalues();
    let target = spectrum.get(eigenvalue_index).ok_or_else(|| {
        LabError::InvalidArgument(format!(
            "eigenvalue index {eigenvalue_index} out of range (have {})",
            spectrum.len()
        ))
    })?;
    let zero = model.generator().scale(czero());
    let projection = zero.map_blocks(|k, b| {
        if k != target.block {
            return *b;
        }
        let info = &model.blocks()[k];
        match info.eigenvalues[..] {
            [_] => Block::One(cone()),
            [a, bv] if a == bv => b.identity_like(),
            [a, bv] => {
                let coupling = (a - bv).inv();
                if target.value == a {
                    Block::Two([cone(), coupling, czero(), czero()])
                } else {
                    Block::Two([czero(), -coupling, czero(), cone()])
                }
            }
            _ => unreachable!("blocks have size 1 or 2"),
        }
    });
    report(model, projection, vec![target.value], T::zero())
}

/// Circle around `lambda` of radius half the gap to the nearest other
/// eigenvalue, capped at 1/2, with 64 nodes.
pub fn hypothesis_a_check<T: Real>(model: &Model<T>, lambda: C<T>) -> Result<Contour<T>> {
    let spectrum = model.eigenvalues();
    let tol = T::lit(1e-12) * (T::one() + lambda.norm());
    let own = spectrum
        .iter()
        .position(|e| (e.value - lambda).norm() <= tol)
        .ok_or_else(|| LabError::InvalidArgument(format!("{lambda} is not an eigenvalue of the model")))?;
    let gap = spectrum
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != own)
        .fold(T::infinity(), |m, (_, e)| m.min((e.value - spectrum[own].value).norm()));
    if gap < T::lit(CLUSTER_GAP) {
        return Err(LabError::ClusteredSpectrum {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
            gap: gap.as_f64(),
        });
    }
    let radius = (gap / T::lit(2.0)).min(T::lit(MAX_RADIUS));
    Contour::new(spectrum[own].value, radius, DEFAULT_NODES)
}

/// Samples `t -> ||T(t) P|| / f(t)` in the model's norm and judges whether it
/// decays (log-log slope at most -1/2 and a tenfold drop over the window).
pub fn hypothesis_b_check<T, F>(model: &Model<T>, contour: &Contour<T>, ts: &[T], envelope: F, tol: T) -> Result<DecayCurve<T>>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    let projection = riesz_projection_quadrature(model, contour)?.projection;
    let ctx = model.norm_context();
    let points = ts
        .par_iter()
        .map(|&t| {
            let tp = model.evolve(t)?.mul(&projection)?;
            let v = operator_norm(&tp, ctx, ctx, tol)?;
            Ok((t, v / envelope(t)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecayCurve::evaluate(points, DecayCriterion::HYPOTHESIS_B))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Family, ModelSpec};

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn contour_validation() {
        assert!(Contour::new(c(0.0, 0.0), 0.1, 15).is_err());
        assert!(Contour::new(c(0.0, 0.0), 0.1, 17).is_err());
        assert!(Contour::new(c(0.0, 0.0), -0.1, 64).is_err());
        assert!(Contour::new(c(0.0, 0.0), 0.1, 16).is_ok());
    }

    #[test]
    fn upper_eigenvalue_of_first_pair() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 5)).unwrap();
        let contour = Contour::new(c(0.0, 2.5), 0.08, 64).unwrap();
        let rep = riesz_projection_quadrature(&m, &contour).unwrap();
        let Block::Two(b) = rep.projection.blocks()[0] else { panic!() };
        assert!((b[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((b[1] - c(0.0, -1.0)).norm() < 1e-12);
        assert!(b[2].norm() < 1e-12 && b[3].norm() < 1e-12);
        for blk in &rep.projection.blocks()[1..] {
            assert!(blk.max_abs() < 1e-12);
        }
        assert_eq!(rep.rank, 1);
        assert_eq!(rep.enclosed, vec![c(0.0, 2.5)]);
    }

    #[test]
    fn closed_form_projections() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 6)).unwrap();
        let idx = m.eigenvalues().iter().position(|e| e.value == c(0.0, 4.25)).unwrap();
        let rep = riesz_projection_closed(&m, idx).unwrap();
        let Block::Two(b) = rep.projection.blocks()[2] else { panic!() };
        assert!((b[1] - c(0.0, -2.0)).norm() < 1e-14);
        let norm = rep.projection.spectral_norm();
        assert!((norm - (1.0f64 + 16.0 / 4.0).sqrt()).abs() < 1e-13);
        assert!(riesz_projection_closed(&m, 999).is_err());

        let dj = Model::<f64>::build(ModelSpec::new(Family::DiagJordan, 4)).unwrap();
        for (k, e) in dj.eigenvalues().iter().enumerate() {
            let rep = riesz_projection_closed(&dj, k).unwrap();
            assert_eq!(rep.rank, e.multiplicity);
            assert!(rep.idempotency_defect == 0.0);
        }
    }

    #[test]
    fn log_spectrum_coordinate_projection_and_empty_contour() {
        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 30)).unwrap();
        let contour = Contour::new(c(0.0, 2f64.ln()), 0.1, 64).unwrap();
        let p = riesz_projection_quadrature(&m, &contour).unwrap().projection;
        let mut expected = vec![c(0.0, 0.0); m.dim()];
        expected[0] = c(1.0, 0.0);
        let diff = BlockDiagonal::from_diagonal(expected).unwrap().sub(&p).unwrap();
        assert!(diff.max_abs() < 1e-13);

        let empty = Contour::new(c(5.0, 0.0), 0.5, 64).unwrap();
        let rep = riesz_projection_quadrature(&m, &empty).unwrap();
        assert!(rep.projection.spectral_norm() <= 1e-10);
        assert_eq!(rep.rank, 0);
        assert!(rep.enclosed.is_empty());
    }

    #[test]
    fn contour_through_an_eigenvalue_is_rejected() {
        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 10)).unwrap();
        let contour = Contour::new(c(0.0, 2f64.ln() + 0.1), 0.1, 64).unwrap();
        assert!(matches!(
            riesz_projection_quadrature(&m, &contour),
            Err(LabError::ContourTooClose { .. })
        ));
    }

    #[test]
    fn admissible_radii() {
        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 20)).unwrap();
        for n in 3..19usize {
            let lambda = c(0.0, (n as f64).ln());
            let contour = hypothesis_a_check(&m, lambda).unwrap();
            let expected = ((n as f64 + 1.0).ln() - (n as f64).ln()) / 2.0;
            assert!((contour.radius - expected).abs() < 1e-14, "n={n}");
            assert_eq!(contour.nodes, 64);
        }

        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 20)).unwrap();
        for n in 2..19 {
            let nf = n as f64;
            let contour = hypothesis_a_check(&m, c(0.0, nf + 1.0 / nf)).unwrap();
            let g1 = 2.0 / nf;
            let g2 = (nf + 1.0 - 1.0 / (nf + 1.0)) - (nf + 1.0 / nf);
            assert!((contour.radius - g1.min(g2) / 2.0).abs() < 1e-13, "n={n}");
        }

        let m = Model::<f64>::build(ModelSpec::new(Family::DiagJordan, 10)).unwrap();
        let contour = hypothesis_a_check(&m, c(0.0, 1.0)).unwrap();
        assert!(contour.radius <= 0.5);
        assert!(hypothesis_a_check(&m, c(0.0, 0.3)).is_err());
    }

    #[test]
    fn projection_norm_is_constant_under_the_flow() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 8)).unwrap();
        let n = 3.0f64;
        let contour = hypothesis_a_check(&m, c(0.0, n + 1.0 / n)).unwrap();
        let ts: Vec<f64> = (0..12).map(|k| 2f64.powi(k)).collect();
        let curve = hypothesis_b_check(&m, &contour, &ts, |t| t + 1.0, 1e-10).unwrap();
        let pn = (1.0 + n * n / 4.0).sqrt();
        for &(t, v) in &curve.points {
            assert!((v - pn / (t + 1.0)).abs() < 1e-9 * pn, "t={t}");
        }
        assert!(curve.decaying);
        assert!(curve.slope.unwrap() < -0.5);
    }
}
