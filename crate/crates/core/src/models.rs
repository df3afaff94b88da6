//! The three semigroup families on finite truncations.
//!
//! * `DiagJordan`: a unimodular 1x1 block `e^{it}` followed by Jordan blocks
//!   with the repeated eigenvalue `ik - 1/k`, `k = 1, 2, ...`.
//! * `JordanPairs`: 2x2 blocks `[[i(n + 1/n), 1], [0, i(n - 1/n)]]`,
//!   `n = 2, 3, ...`; the off-diagonal entry of `T(t)` is `e^{int} n sin(t/n)`.
//! * `LogSpectrum`: the diagonal semigroup `e^{it log n}`, `n = 2, 3, ...`,
//!   measured in the backward-difference weighted norm of order `N`.
//!
//! Basis vectors are numbered from 0 in block order; for `LogSpectrum`
//! coordinate `k` carries the sequence index `n = k + 2`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{Block, BlockDiagonal, NormContext};
use crate::scalar::{cis, cone, czero, Real, C};

/// Smallest allowed distance between a resolvent point and the spectrum.
pub const SPECTRUM_HIT_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    DiagJordan,
    JordanPairs,
    LogSpectrum,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::DiagJordan => "DIAG_JORDAN",
            Family::JordanPairs => "JORDAN_PAIRS",
            Family::LogSpectrum => "LOG_SPECTRUM",
        }
    }
}

fn default_order() -> u32 {
    1
}

fn default_mu() -> num_complex::Complex<f64> {
    num_complex::Complex::new(1.0, 0.0)
}

/// Which family to build and how far to truncate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    /// Largest block (or sequence) index kept by the truncation.
    pub max_index: usize,
    /// Difference order of the weighted norm; only used by `LogSpectrum`.
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default = "default_mu")]
    pub mu_default: num_complex::Complex<f64>,
}

impl ModelSpec {
    pub fn new(family: Family, max_index: usize) -> Self {
        Self {
            family,
            max_index,
            order: 1,
            mu_default: default_mu(),
        }
    }

    pub fn log_spectrum(order: u32, max_index: usize) -> Self {
        Self {
            order,
            ..Self::new(Family::LogSpectrum, max_index)
        }
    }

    pub fn with_mu(mut self, mu: num_complex::Complex<f64>) -> Self {
        self.mu_default = mu;
        self
    }

    /// Number of coordinates of the truncation.
    pub fn dim(&self) -> usize {
        match self.family {
            Family::DiagJordan => 1 + 2 * self.max_index.saturating_sub(1),
            Family::JordanPairs => 2 * self.max_index.saturating_sub(1),
            Family::LogSpectrum => self.max_index.saturating_sub(1),
        }
    }
}

/// Smallest `max_index` whose truncation is trusted up to time `t_max`.
///
/// Block families need `50 t_max` blocks; the weighted family needs
/// `dim >= 8 t_max`.
pub fn required_max_index(family: Family, order: u32, t_max: f64) -> usize {
    let t_max = t_max.max(0.0);
    match family {
        Family::DiagJordan | Family::JordanPairs => ((50.0 * t_max).ceil() as usize).max(2),
        Family::LogSpectrum => ((8.0 * t_max).ceil() as usize + 1).max(order as usize + 2),
    }
}

/// Hard check of [`required_max_index`].
pub fn check_truncation(spec: &ModelSpec, t_max: f64) -> Result<()> {
    let required = required_max_index(spec.family, spec.order, t_max);
    if spec.max_index < required {
        let probe = ModelSpec {
            max_index: required,
            ..*spec
        };
        return Err(LabError::TruncationInadequate {
            t_max,
            required,
            required_dim: probe.dim(),
            got: spec.max_index,
        });
    }
    Ok(())
}

/// Placement of one block and its eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockInfo<T: Real> {
    pub start: usize,
    pub size: usize,
    pub eigenvalues: Vec<C<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue<T: Real> {
    pub value: C<T>,
    pub multiplicity: usize,
    /// Index of the block carrying this eigenvalue.
    pub block: usize,
}

#[derive(Debug, Clone)]
enum Kind<T: Real> {
    /// 1x1 block with eigenvalue.
    Scalar(C<T>),
    /// Jordan block with repeated eigenvalue.
    Jordan(C<T>),
    /// `[[ia, 1], [0, ib]]` written through the pair index `n`.
    Pair { n: T },
}

/// A built model: block layout, norm context and spectrum.
#[derive(Debug, Clone)]
pub struct Model<T: Real> {
    spec: ModelSpec,
    kinds: Vec<Kind<T>>,
    layout: Vec<BlockInfo<T>>,
    ctx: NormContext,
    spectrum: Vec<Eigenvalue<T>>,
}

impl<T: Real> Model<T> {
    pub fn build(spec: ModelSpec) -> Result<Self> {
        if spec.max_index < 2 {
            return Err(LabError::InvalidArgument(format!(
                "max_index must be at least 2, got {}",
                spec.max_index
            )));
        }
        if !(spec.mu_default.re.is_finite() && spec.mu_default.im.is_finite()) {
            return Err(LabError::InvalidArgument("mu_default must be finite".into()));
        }
        let i = C::new(T::zero(), T::one());
        let kinds: Vec<Kind<T>> = match spec.family {
            Family::DiagJordan => std::iter::once(Kind::Scalar(i))
                .chain((1..spec.max_index).map(|k| {
                    let k = T::from_usize_lossy(k);
                    Kind::Jordan(C::new(-k.recip(), k))
                }))
                .collect(),
            Family::JordanPairs => (2..=spec.max_index)
                .map(|n| Kind::Pair {
                    n: T::from_usize_lossy(n),
                })
                .collect(),
            Family::LogSpectrum => {
                if spec.order == 0 {
                    return Err(LabError::IdentityWeighting);
                }
                (2..=spec.max_index)
                    .map(|n| Kind::Scalar(C::new(T::zero(), T::from_usize_lossy(n).ln())))
                    .collect()
            }
        };
        let ctx = match spec.family {
            Family::LogSpectrum => NormContext::delta_weighted(spec.order, spec.dim())?,
            _ => NormContext::euclidean(spec.dim()),
        };

        let mut layout = Vec::with_capacity(kinds.len());
        let mut start = 0;
        for kind in &kinds {
            let (size, eigenvalues) = match *kind {
                Kind::Scalar(l) => (1, vec![l]),
                Kind::Jordan(l) => (2, vec![l, l]),
                Kind::Pair { n } => (2, vec![C::new(T::zero(), n + n.recip()), C::new(T::zero(), n - n.recip())]),
            };
            layout.push(BlockInfo {
                start,
                size,
                eigenvalues,
            });
            start += size;
        }

        let mut spectrum: Vec<Eigenvalue<T>> = Vec::new();
        for (b, info) in layout.iter().enumerate() {
            for &value in &info.eigenvalues {
                match spectrum.iter_mut().find(|e| e.value == value) {
                    Some(e) => e.multiplicity += 1,
                    None => spectrum.push(Eigenvalue {
                        value,
                        multiplicity: 1,
                        block: b,
                    }),
                }
            }
        }
        spectrum.sort_by(|a, b| {
            (a.value.im, a.value.re)
                .partial_cmp(&(b.value.im, b.value.re))
                .expect("finite eigenvalues")
        });

        let model = Self {
            spec,
            kinds,
            layout,
            ctx,
            spectrum,
        };
        let mu = C::new(T::lit(spec.mu_default.re), T::lit(spec.mu_default.im));
        model.check_resolvent_point(mu)?;
        Ok(model)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn norm_context(&self) -> NormContext {
        self.ctx
    }

    pub fn blocks(&self) -> &[BlockInfo<T>] {
        &self.layout
    }

    /// Growth bound of every family.
    pub fn growth_bound(&self) -> T {
        T::zero()
    }

    pub fn mu_default(&self) -> C<T> {
        C::new(T::lit(self.spec.mu_default.re), T::lit(self.spec.mu_default.im))
    }

    /// Distinct eigenvalues sorted by imaginary then real part.
    pub fn eigenvalues(&self) -> &[Eigenvalue<T>] {
        &self.spectrum
    }

    /// Distance from `z` to the spectrum.
    pub fn spectral_distance(&self, z: C<T>) -> T {
        self.spectrum
            .iter()
            .fold(T::infinity(), |m, e| m.min((e.value - z).norm()))
    }

    fn check_resolvent_point(&self, mu: C<T>) -> Result<()> {
        let d = self.spectral_distance(mu);
        if !(d >= T::lit(SPECTRUM_HIT_DISTANCE)) {
            return Err(LabError::SpectrumHit {
                re: mu.re.as_f64(),
                im: mu.im.as_f64(),
                distance: d.as_f64(),
            });
        }
        Ok(())
    }

    /// `T(t)` in closed form.
    pub fn evolve(&self, t: T) -> Result<BlockDiagonal<T>> {
        if !(t >= T::zero()) || !t.is_finite() {
            return Err(LabError::InvalidArgument(format!("time must be finite and nonnegative, got {t}")));
        }
        let blocks = self
            .kinds
            .iter()
            .map(|k| match *k {
                Kind::Scalar(l) => Block::One(exp_t(l, t)),
                Kind::Jordan(l) => {
                    let e = exp_t(l, t);
                    Block::Two([e, e * t, czero(), e])
                }
                Kind::Pair { n } => {
                    let upper = cis((n + n.recip()) * t);
                    let lower = cis((n - n.recip()) * t);
                    let coupling = cis(n * t) * (n * (t / n).sin());
                    Block::Two([upper, coupling, czero(), lower])
                }
            })
            .collect();
        BlockDiagonal::new(blocks)
    }

    /// The generator `A`.
    pub fn generator(&self) -> BlockDiagonal<T> {
        let blocks = self
            .kinds
            .iter()
            .map(|k| match *k {
                Kind::Scalar(l) => Block::One(l),
                Kind::Jordan(l) => Block::Two([l, cone(), czero(), l]),
                Kind::Pair { n } => Block::Two([
                    C::new(T::zero(), n + n.recip()),
                    cone(),
                    czero(),
                    C::new(T::zero(), n - n.recip()),
                ]),
            })
            .collect();
        BlockDiagonal::new(blocks).expect("finite generator")
    }

    /// `R_mu = (A - mu I)^{-1}` blockwise.
    pub fn resolvent(&self, mu: C<T>) -> Result<BlockDiagonal<T>> {
        self.check_resolvent_point(mu)?;
        Ok(self.resolvent_unchecked(mu))
    }

    pub(crate) fn resolvent_unchecked(&self, mu: C<T>) -> BlockDiagonal<T> {
        let blocks = self
            .layout
            .iter()
            .map(|info| match info.eigenvalues[..] {
                [l] => Block::One((l - mu).inv()),
                [a, b] => {
                    let ia = (a - mu).inv();
                    let ib = (b - mu).inv();
                    Block::Two([ia, -(ia * ib), czero(), ib])
                }
                _ => unreachable!("blocks have size 1 or 2"),
            })
            .collect();
        BlockDiagonal::new(blocks).expect("resolvent entries are finite off the spectrum")
    }
}

/// `e^{lambda t}` split into modulus and phase.
fn exp_t<T: Real>(lambda: C<T>, t: T) -> C<T> {
    cis(lambda.im * t) * (lambda.re * t).exp()
}

/// Convenience: `Model::build`.
pub fn build_model<T: Real>(spec: ModelSpec) -> Result<Model<T>> {
    Model::build(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn close(a: C<f64>, b: C<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn diag_jordan_layout() {
        let m = Model::<f64>::build(ModelSpec::new(Family::DiagJordan, 3)).unwrap();
        assert_eq!(m.dim(), 5);
        let b = m.blocks();
        assert_eq!(b.len(), 3);
        assert_eq!((b[0].start, b[0].size), (0, 1));
        assert_eq!(b[0].eigenvalues, vec![c(0.0, 1.0)]);
        assert_eq!(b[1].eigenvalues, vec![c(-1.0, 1.0); 2]);
        assert_eq!(b[2].eigenvalues, vec![c(-0.5, 2.0); 2]);
        assert_eq!((b[2].start, b[2].size), (3, 2));
        assert!(m.norm_context().is_euclidean());
    }

    #[test]
    fn jordan_pairs_and_log_spectrum_layouts() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 2)).unwrap();
        assert_eq!(m.blocks().len(), 1);
        assert_eq!(m.blocks()[0].eigenvalues, vec![c(0.0, 2.5), c(0.0, 1.5)]);

        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 4)).unwrap();
        assert_eq!(m.dim(), 3);
        let diag = m.generator().diagonal();
        for (k, z) in diag.iter().enumerate() {
            assert!(close(*z, c(0.0, ((k + 2) as f64).ln()), 1e-15));
        }
        assert!((diag[0].im - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(m.norm_context(), NormContext::delta_weighted(1, 3).unwrap());
    }

    #[test]
    fn eigenvalue_lists() {
        let m = Model::<f64>::build(ModelSpec::new(Family::DiagJordan, 2)).unwrap();
        let ev: Vec<_> = m.eigenvalues().iter().map(|e| (e.value, e.multiplicity)).collect();
        assert_eq!(ev, vec![(c(-1.0, 1.0), 2), (c(0.0, 1.0), 1)]);

        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 2)).unwrap();
        let ev: Vec<_> = m.eigenvalues().iter().map(|e| e.value).collect();
        assert_eq!(ev, vec![c(0.0, 1.5), c(0.0, 2.5)]);

        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 3)).unwrap();
        let ev: Vec<_> = m.eigenvalues().iter().map(|e| e.value.im).collect();
        assert_eq!(ev, vec![2f64.ln(), 3f64.ln()]);
    }

    #[test]
    fn invalid_specs() {
        assert!(Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 1)).is_err());
        assert_eq!(
            Model::<f64>::build(ModelSpec::log_spectrum(0, 10)).unwrap_err(),
            LabError::IdentityWeighting
        );
        // dim 2 cannot carry a second-order weighting
        assert!(Model::<f64>::build(ModelSpec::log_spectrum(2, 3)).is_err());
        let hit = ModelSpec::log_spectrum(1, 5).with_mu(num_complex::Complex::new(0.0, 2f64.ln()));
        assert!(matches!(Model::<f64>::build(hit), Err(LabError::SpectrumHit { .. })));
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        for spec in [
            ModelSpec::new(Family::DiagJordan, 6),
            ModelSpec::new(Family::JordanPairs, 6),
            ModelSpec::log_spectrum(2, 6),
        ] {
            let m = Model::<f64>::build(spec).unwrap();
            let t0 = m.evolve(0.0).unwrap();
            assert_eq!(t0, m.generator().identity_like());
        }
        let m = Model::<f64>::build(ModelSpec::new(Family::DiagJordan, 3)).unwrap();
        assert!(m.evolve(-1.0).is_err());
    }

    #[test]
    fn jordan_pair_at_pi() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 2)).unwrap();
        let t = m.evolve(std::f64::consts::PI).unwrap();
        let Block::Two(b) = t.blocks()[0] else { panic!() };
        assert!(close(b[0], c(0.0, 1.0), 1e-14));
        assert!(close(b[1], c(2.0, 0.0), 1e-14));
        assert!(close(b[2], c(0.0, 0.0), 0.0));
        assert!(close(b[3], c(0.0, -1.0), 1e-14));
    }

    #[test]
    fn generator_blocks() {
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 2)).unwrap();
        let Block::Two(b) = m.generator().blocks()[0] else { panic!() };
        assert_eq!(b, [c(0.0, 2.5), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.5)]);
    }

    #[test]
    fn resolvent_at_zero_of_log_spectrum() {
        let m = Model::<f64>::build(ModelSpec::log_spectrum(1, 6)).unwrap();
        let r = m.resolvent(c(0.0, 0.0)).unwrap();
        for (k, z) in r.diagonal().iter().enumerate() {
            let n = (k + 2) as f64;
            assert!(close(*z, c(0.0, -1.0 / n.ln()), 1e-15));
        }
    }

    #[test]
    fn jordan_pair_resolvent_product_matches_closed_form() {
        // T_n(t) A_n^{-1} = in/(1 - n^4) e^{tni} [[(n^2-1) e^{it/n}, (n^2-1) n sin(t/n) + i n e^{-it/n}],
        //                                         [0, (n^2+1) e^{-it/n}]]
        let m = Model::<f64>::build(ModelSpec::new(Family::JordanPairs, 12)).unwrap();
        for t in [0.0, 0.7, 3.0, 25.0] {
            let prod = m.evolve(t).unwrap().mul(&m.resolvent(c(0.0, 0.0)).unwrap()).unwrap();
            for (k, blk) in prod.blocks().iter().enumerate() {
                let n = (k + 2) as f64;
                let pre = c(0.0, n) / (1.0 - n.powi(4)) * C::from_polar(1.0, t * n);
                let ep = C::from_polar(1.0, t / n);
                let em = C::from_polar(1.0, -t / n);
                let expected = [
                    pre * (n * n - 1.0) * ep,
                    pre * ((n * n - 1.0) * n * (t / n).sin() + c(0.0, n) * em),
                    c(0.0, 0.0),
                    pre * (n * n + 1.0) * em,
                ];
                let Block::Two(b) = *blk else { panic!() };
                for (x, y) in b.iter().zip(&expected) {
                    assert!(close(*x, *y, 1e-10), "n={n} t={t}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(required_max_index(Family::JordanPairs, 1, 100.0), 5000);
        assert_eq!(required_max_index(Family::LogSpectrum, 1, 200.0), 1601);
        let spec = ModelSpec::new(Family::JordanPairs, 4999);
        match check_truncation(&spec, 100.0) {
            Err(LabError::TruncationInadequate { required, .. }) => assert_eq!(required, 5000),
            other => panic!("{other:?}"),
        }
        assert!(check_truncation(&ModelSpec::log_spectrum(1, 1601), 200.0).is_ok());
    }
}
