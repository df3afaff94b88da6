//! Block-diagonal operators with 1x1 and 2x2 blocks.
//!
//! Every model in the laboratory is block diagonal in its natural basis, so
//! semigroup values and resolvents are computed blockwise here. The
//! dense form is only materialized on request.

use crate::error::{LabError, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{cone, czero, Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Block<T: Real> {
    One(C<T>),
    /// Row-major `[[a, b], [c, d]]`.
    Two([C<T>; 4]),
}

impl<T: Real> Block<T> {
    pub fn size(&self) -> usize {
        match self {
            Block::One(_) => 1,
            Block::Two(_) => 2,
        }
    }

    pub fn identity_like(&self) -> Self {
        match self {
            Block::One(_) => Block::One(cone()),
            Block::Two(_) => Block::Two([cone(), czero(), czero(), cone()]),
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        match *self {
            Block::One(a) => Block::One(a * s),
            Block::Two(m) => Block::Two(m.map(|z| z * s)),
        }
    }

    fn mul(&self, rhs: &Self) -> Option<Self> {
        match (*self, *rhs) {
            (Block::One(a), Block::One(b)) => Some(Block::One(a * b)),
            (Block::Two(a), Block::Two(b)) => Some(Block::Two([
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ])),
            _ => None,
        }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(C<T>, C<T>) -> C<T>) -> Option<Self> {
        match (*self, *rhs) {
            (Block::One(a), Block::One(b)) => Some(Block::One(f(a, b))),
            (Block::Two(a), Block::Two(b)) => Some(Block::Two([
                f(a[0], b[0]),
                f(a[1], b[1]),
                f(a[2], b[2]),
                f(a[3], b[3]),
            ])),
            _ => None,
        }
    }

    /// Largest singular value in closed form.
    pub fn spectral_norm(&self) -> T {
        match *self {
            Block::One(a) => a.norm(),
            Block::Two(m) => {
                let scale = m.iter().fold(T::zero(), |s, z| s.max(z.norm()));
                if scale == T::zero() {
                    return T::zero();
                }
                let m = m.map(|z| z / scale);
                let fro: T = m.iter().map(|z| z.norm_sqr()).sum();
                let det = (m[0] * m[3] - m[1] * m[2]).norm();
                let two = T::lit(2.0);
                let disc = (fro * fro - T::lit(4.0) * det * det).max(T::zero());
                scale * ((fro + disc.sqrt()) / two).sqrt()
            }
        }
    }

    pub fn trace(&self) -> C<T> {
        match *self {
            Block::One(a) => a,
            Block::Two(m) => m[0] + m[3],
        }
    }

    pub fn max_abs(&self) -> T {
        match *self {
            Block::One(a) => a.norm(),
            Block::Two(m) => m.iter().fold(T::zero(), |s, z| s.max(z.norm())),
        }
    }

    fn is_finite(&self) -> bool {
        let ok = |z: &C<T>| z.re.is_finite() && z.im.is_finite();
        match self {
            Block::One(a) => ok(a),
            Block::Two(m) => m.iter().all(ok),
        }
    }
}

/// A block-diagonal operator; block `k` acts on coordinates
/// `offsets[k] .. offsets[k] + size`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonal<T: Real> {
    blocks: Vec<Block<T>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl<T: Real> BlockDiagonal<T> {
    pub fn new(blocks: Vec<Block<T>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(LabError::InvalidArgument("no blocks".into()));
        }
        if let Some(k) = blocks.iter().position(|b| !b.is_finite()) {
            return Err(LabError::NonFinite { row: k, col: k });
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.size();
        }
        Ok(Self { blocks, offsets, dim })
    }

    pub fn from_diagonal(diag: Vec<C<T>>) -> Result<Self> {
        Self::new(diag.into_iter().map(Block::One).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| b.size() == 1)
    }

    /// Same layout, blocks produced by `f(index, block)`.
    pub fn map_blocks(&self, f: impl Fn(usize, &Block<T>) -> Block<T>) -> Self {
        Self {
            blocks: self.blocks.iter().enumerate().map(|(k, b)| f(k, b)).collect(),
            offsets: self.offsets.clone(),
            dim: self.dim,
        }
    }

    pub fn identity_like(&self) -> Self {
        self.map_blocks(|_, b| b.identity_like())
    }

    fn check_layout(&self, rhs: &Self) -> Result<()> {
        if self.offsets != rhs.offsets || self.dim != rhs.dim {
            return Err(LabError::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_layout(rhs)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| a.mul(b).expect("layout checked"))
            .collect();
        Ok(Self {
            blocks,
            offsets: self.offsets.clone(),
            dim: self.dim,
        })
    }

    fn zip(&self, rhs: &Self, f: impl Fn(C<T>, C<T>) -> C<T> + Copy) -> Result<Self> {
        self.check_layout(rhs)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| a.zip(b, f).expect("layout checked"))
            .collect();
        Ok(Self {
            blocks,
            offsets: self.offsets.clone(),
            dim: self.dim,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        self.map_blocks(|_, b| b.scale(s))
    }

    pub fn trace(&self) -> C<T> {
        self.blocks.iter().fold(czero(), |acc, b| acc + b.trace())
    }

    /// Euclidean operator norm: the supremum of the block norms, reduced in
    /// block order.
    pub fn spectral_norm(&self) -> T {
        self.blocks.iter().fold(T::zero(), |m, b| m.max(b.spectral_norm()))
    }

    pub fn max_abs(&self) -> T {
        self.blocks.iter().fold(T::zero(), |m, b| m.max(b.max_abs()))
    }

    /// Diagonal entries in coordinate order.
    pub fn diagonal(&self) -> Vec<C<T>> {
        let mut out = Vec::with_capacity(self.dim);
        for b in &self.blocks {
            match *b {
                Block::One(a) => out.push(a),
                Block::Two(m) => {
                    out.push(m[0]);
                    out.push(m[3]);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (b, &o) in self.blocks.iter().zip(&self.offsets) {
            match *b {
                Block::One(a) => m[(o, o)] = a,
                Block::Two(v) => {
                    m[(o, o)] = v[0];
                    m[(o, o + 1)] = v[1];
                    m[(o + 1, o)] = v[2];
                    m[(o + 1, o + 1)] = v[3];
                }
            }
        }
        m
    }

    pub(crate) fn apply_into(&self, x: &[C<T>], y: &mut [C<T>], adjoint: bool) {
        debug_assert_eq!(x.len(), self.dim);
        for (b, &o) in self.blocks.iter().zip(&self.offsets) {
            match *b {
                Block::One(a) => y[o] = if adjoint { a.conj() } else { a } * x[o],
                Block::Two(m) => {
                    let (x0, x1) = (x[o], x[o + 1]);
                    if adjoint {
                        y[o] = m[0].conj() * x0 + m[2].conj() * x1;
                        y[o + 1] = m[1].conj() * x0 + m[3].conj() * x1;
                    } else {
                        y[o] = m[0] * x0 + m[1] * x1;
                        y[o + 1] = m[2] * x0 + m[3] * x1;
                    }
                }
            }
        }
    }

    pub fn matvec(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        if x.len() != self.dim {
            return Err(LabError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut y = vec![czero(); self.dim];
        self.apply_into(x, &mut y, false);
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn two_by_two_norm_closed_form() {
        // [[1, 3], [0, 1]]: sigma_max = (3 + sqrt(13)) / 2
        let b = Block::Two([c(1.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let expected = (3.0 + 13f64.sqrt()) / 2.0;
        assert!((b.spectral_norm() - expected).abs() < 1e-14);
        assert_eq!(Block::Two([c(0.0, 0.0); 4]).spectral_norm(), 0.0);
    }

    #[test]
    fn dense_roundtrip_matches_matvec() {
        let bd = BlockDiagonal::new(vec![
            Block::One(c(0.0, 1.0)),
            Block::Two([c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        ])
        .unwrap();
        let x = vec![c(1.0, 0.0), c(0.5, -0.5), c(2.0, 0.0)];
        let dense = bd.to_dense();
        assert_eq!(dense.matvec(&x).unwrap(), bd.matvec(&x).unwrap());
        assert_eq!(bd.diagonal(), vec![c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn layout_mismatch_is_an_error() {
        let a = BlockDiagonal::from_diagonal(vec![c(1.0, 0.0); 2]).unwrap();
        let b = BlockDiagonal::new(vec![Block::Two([c(1.0, 0.0); 4])]).unwrap();
        assert!(a.mul(&b).is_err());
    }
}
