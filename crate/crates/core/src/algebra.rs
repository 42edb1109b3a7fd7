//! Finite-dimensional C*-algebras realized as direct sums of full matrix
//! algebras `M_{n_1} ⊕ ... ⊕ M_{n_r}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen};

/// Default relative tolerance for order and Hermiticity tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Block dimensions `[n_1, ..., n_r]` of `M_{n_1} ⊕ ... ⊕ M_{n_r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    block_dims: Vec<usize>,
}

impl TryFrom<ShapeRepr> for AlgebraShape {
    type Error = Error;

    fn try_from(r: ShapeRepr) -> Result<Self> {
        AlgebraShape::new(r.block_dims)
    }
}

impl From<AlgebraShape> for ShapeRepr {
    fn from(s: AlgebraShape) -> Self {
        ShapeRepr {
            block_dims: s.block_dims,
        }
    }
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(Error::InvalidShape);
        }
        Ok(Self { block_dims })
    }

    /// The complex numbers, `M_1`.
    pub fn scalar() -> Self {
        Self {
            block_dims: vec![1],
        }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Complex dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    pub(crate) fn check(&self, other: &AlgebraShape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: self.block_dims.clone(),
                found: other.block_dims.clone(),
            })
        }
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.block_dims)
    }
}

/// An element of the algebra, one square complex matrix per block.
///
/// The arithmetic operators panic on shape mismatch; the `checked_*` methods
/// report it as an error instead.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn new(shape: AlgebraShape, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "shape {shape} has {} blocks, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.block_dims()).enumerate() {
            if b.rows() != n || b.cols() != n {
                return Err(Error::BlockSize {
                    block: i,
                    expected: n * n,
                    found: b.rows() * b.cols(),
                });
            }
        }
        Ok(Self { shape, blocks })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn one(shape: &AlgebraShape) -> Self {
        Self::scalar(shape, Complex64::new(1.0, 0.0))
    }

    /// `c · 1`.
    pub fn scalar(shape: &AlgebraShape, c: Complex64) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| CMatrix::identity(n).scale(c))
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Element whose block `i` is `values[i] · I`.
    pub fn from_block_scalars(shape: &AlgebraShape, values: &[Complex64]) -> Result<Self> {
        if values.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "{} block scalars for shape {shape}",
                values.len()
            )));
        }
        let blocks = shape
            .block_dims()
            .iter()
            .zip(values)
            .map(|(&n, &v)| CMatrix::identity(n).scale(v))
            .collect();
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    /// Builds from blocks given as row-major `[re, im]` pairs.
    pub fn from_pairs(shape: &AlgebraShape, blocks: &[Vec<[f64; 2]>]) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "shape {shape} has {} blocks, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        let mut out = Vec::with_capacity(blocks.len());
        for (i, (pairs, &n)) in blocks.iter().zip(shape.block_dims()).enumerate() {
            if pairs.len() != n * n {
                return Err(Error::BlockSize {
                    block: i,
                    expected: n * n,
                    found: pairs.len(),
                });
            }
            let data = pairs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            out.push(CMatrix::from_row_major(n, n, data));
        }
        Ok(Self {
            shape: shape.clone(),
            blocks: out,
        })
    }

    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        self.blocks
            .iter()
            .map(|b| b.as_slice().iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        assert_eq!(self.shape, other.shape, "algebra shape mismatch");
        Self {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.shape.check(&other.shape)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.shape.check(&other.shape)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.shape.check(&other.shape)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_blocks(|b| b.scale(c))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Blockwise conjugate transpose.
    pub fn star(&self) -> Self {
        let s = self.map_blocks(CMatrix::adjoint);
        if cfg!(feature = "mutation-star-sign") {
            -&s
        } else {
            s
        }
    }

    /// `a · a*`, the meaning of `|a*|²` under `|x|² = x* x`.
    pub fn abs_sq_star(&self) -> Self {
        self * &self.star()
    }

    /// Frobenius norm over all blocks; used for scale estimates only.
    pub fn norm_fro(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.norm_fro().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// The C*-norm: largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::spectral_norm)
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (self - &self.map_blocks(CMatrix::adjoint)).norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * (1.0 + self.norm())
    }

    /// Per-block eigen-decomposition of a Hermitian element.
    pub fn hermitian_eigen(&self) -> Result<Vec<HermitianEigen>> {
        let deviation = self.hermitian_deviation();
        if deviation > DEFAULT_TOL * (1.0 + self.norm()) {
            return Err(Error::NotHermitian { deviation });
        }
        self.blocks.iter().map(linalg::hermitian_eigen).collect()
    }

    /// All eigenvalues of a Hermitian element, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut all: Vec<f64> = self
            .hermitian_eigen()?
            .into_iter()
            .flat_map(|e| e.values)
            .collect();
        all.sort_by(f64::total_cmp);
        Ok(all)
    }

    /// `a ≥ 0` up to a tolerance scaled by `1 + ‖a‖`.
    pub fn is_positive(&self, tol: f64) -> bool {
        let slack = tol * (1.0 + self.norm());
        if self.hermitian_deviation() > slack {
            return false;
        }
        self.blocks
            .iter()
            .all(|b| match linalg::hermitian_eigen(b) {
                Ok(e) => e.min() >= -slack,
                Err(_) => false,
            })
    }

    /// `self ≤ other`, i.e. `other - self ≥ 0`.
    pub fn leq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(other.checked_sub(self)?.is_positive(tol))
    }

    pub fn inverse(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            match linalg::gauss_inverse(b) {
                Ok(inv) => out.push(inv),
                Err(Error::SingularOperator { min_singular_value }) => {
                    return Err(Error::SingularBlock {
                        block: i,
                        min_singular_value,
                    })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Self {
            shape: self.shape.clone(),
            blocks: out,
        })
    }

    /// Positive square root via the spectral decomposition.
    pub fn sqrt_positive(&self) -> Result<Self> {
        if !self.is_positive(DEFAULT_TOL) {
            let min_eigenvalue = self
                .spectrum()
                .map(|s| s.first().copied().unwrap_or(0.0))
                .unwrap_or(f64::NAN);
            return Err(Error::NotPositive { min_eigenvalue });
        }
        let eig = self.hermitian_eigen()?;
        let blocks = eig
            .iter()
            .map(|e| {
                let d: Vec<Complex64> = e
                    .values
                    .iter()
                    .map(|&l| Complex64::new(l.max(0.0).sqrt(), 0.0))
                    .collect();
                e.vectors
                    .mul(&CMatrix::from_diagonal(&d))
                    .mul(&e.vectors.adjoint())
            })
            .collect();
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }

    /// Column-major flattening of every block, concatenated.
    pub fn flatten(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.shape.dim());
        for (b, &n) in self.blocks.iter().zip(self.shape.block_dims()) {
            for c in 0..n {
                for r in 0..n {
                    out.push(b[(r, c)]);
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.zip_blocks(rhs, CMatrix::add)
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.zip_blocks(rhs, CMatrix::sub)
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.zip_blocks(rhs, CMatrix::mul)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scale_real(-1.0)
    }
}
