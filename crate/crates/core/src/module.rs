//! The standard Hilbert module `A^k` and its adjointable operators.
//!
//! `A^k` is a left module with `⟨f, g⟩ = Σ_q f_q g_q*`, linear in the first
//! slot. Adjointable operators are k×k matrices over `A` acting on the right
//! of the entry tuple, `(Tf)_p = Σ_q f_q c_{qp}`, so `T(af) = aT(f)` holds by
//! construction.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    shape: AlgebraShape,
    entries: Vec<AlgebraElement>,
}

impl ModuleVector {
    pub fn new(shape: AlgebraShape, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch(
                "module rank must be at least 1".into(),
            ));
        }
        for e in &entries {
            shape.check(e.shape())?;
        }
        Ok(Self { shape, entries })
    }

    pub fn zero(shape: &AlgebraShape, rank: usize) -> Self {
        Self {
            shape: shape.clone(),
            entries: vec![AlgebraElement::zero(shape); rank],
        }
    }

    /// Canonical basis vector `e_q` (unit in slot `q`).
    pub fn basis(shape: &AlgebraShape, rank: usize, q: usize) -> Self {
        let mut v = Self::zero(shape, rank);
        v.entries[q] = AlgebraElement::one(shape);
        v
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn entry(&self, q: usize) -> &AlgebraElement {
        &self.entries[q]
    }

    fn check(&self, other: &Self) -> Result<()> {
        self.shape.check(&other.shape)?;
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch(format!(
                "module ranks {} and {}",
                self.rank(),
                other.rank()
            )));
        }
        Ok(())
    }

    /// `⟨self, g⟩ = Σ_q self_q · g_q*`.
    pub fn inner(&self, g: &Self) -> Result<AlgebraElement> {
        self.check(g)?;
        Ok(self.inner_unchecked(g))
    }

    pub(crate) fn inner_unchecked(&self, g: &Self) -> AlgebraElement {
        let terms: Vec<AlgebraElement> = self
            .entries
            .iter()
            .zip(&g.entries)
            .map(|(a, b)| a * &b.star())
            .collect();
        linalg::pairwise_sum(&terms, &|x: &AlgebraElement, y: &AlgebraElement| x + y)
            .expect("rank >= 1")
    }

    /// Left module action `a · f`.
    pub fn module_action(&self, a: &AlgebraElement) -> Result<Self> {
        self.shape.check(a.shape())?;
        Ok(self.left_mul(a))
    }

    pub(crate) fn left_mul(&self, a: &AlgebraElement) -> Self {
        Self {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|e| a * e).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    /// `‖f‖ = ‖⟨f, f⟩‖^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.inner_unchecked(self).norm().sqrt()
    }

    /// Stacks, block by block, the column-major matrices of every entry.
    pub fn flatten(&self) -> Vec<Complex64> {
        let k = self.rank();
        let mut out = Vec::with_capacity(k * self.shape.dim());
        for (i, &n) in self.shape.block_dims().iter().enumerate() {
            for e in &self.entries {
                let b = e.block(i);
                for c in 0..n {
                    for r in 0..n {
                        out.push(b[(r, c)]);
                    }
                }
            }
        }
        out
    }

    /// Inverse of [`ModuleVector::flatten`].
    pub fn from_flat(shape: &AlgebraShape, rank: usize, flat: &[Complex64]) -> Result<Self> {
        let expected = rank * shape.dim();
        if flat.len() != expected || rank == 0 {
            return Err(Error::DimensionMismatch(format!(
                "flat vector of length {} for rank {rank} over {shape}",
                flat.len()
            )));
        }
        let mut blocks: Vec<Vec<CMatrix>> = vec![Vec::with_capacity(shape.num_blocks()); rank];
        let mut it = flat.iter();
        for &n in shape.block_dims() {
            for entry in blocks.iter_mut() {
                let mut m = CMatrix::zeros(n, n);
                for c in 0..n {
                    for r in 0..n {
                        m[(r, c)] = *it.next().expect("length checked");
                    }
                }
                entry.push(m);
            }
        }
        let entries = blocks
            .into_iter()
            .map(|b| AlgebraElement::new(shape.clone(), b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            shape: shape.clone(),
            entries,
        })
    }

    /// Vector supported in algebra block `block` whose first matrix row,
    /// read across the k entries, is `row` (length `k · n_block`).
    ///
    /// This lifts eigenvectors of [`ModuleOperator::block_matrix`]-transposes
    /// back into the module.
    pub fn from_block_row(
        shape: &AlgebraShape,
        rank: usize,
        block: usize,
        row: &[Complex64],
    ) -> Result<Self> {
        let n = shape.block_dims()[block];
        if row.len() != rank * n {
            return Err(Error::DimensionMismatch(format!(
                "block row of length {} for rank {rank}, block size {n}",
                row.len()
            )));
        }
        let mut v = Self::zero(shape, rank);
        for (q, entry) in v.entries.iter_mut().enumerate() {
            let mut blocks = entry.blocks().to_vec();
            for c in 0..n {
                blocks[block][(0, c)] = row[q * n + c];
            }
            *entry = AlgebraElement::new(shape.clone(), blocks)?;
        }
        Ok(v)
    }
}

impl<'a> Add<&'a ModuleVector> for &'a ModuleVector {
    type Output = ModuleVector;

    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        assert_eq!(self.rank(), rhs.rank(), "module rank mismatch");
        ModuleVector {
            shape: self.shape.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a ModuleVector> for &'a ModuleVector {
    type Output = ModuleVector;

    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        assert_eq!(self.rank(), rhs.rank(), "module rank mismatch");
        ModuleVector {
            shape: self.shape.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Adjointable operator on `A^k`, stored as `coeffs[q][p]` (row-major k×k).
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    shape: AlgebraShape,
    rank: usize,
    coeffs: Vec<AlgebraElement>,
}

impl ModuleOperator {
    pub fn new(shape: AlgebraShape, coeffs: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let rank = coeffs.len();
        if rank == 0 {
            return Err(Error::DimensionMismatch(
                "operator rank must be at least 1".into(),
            ));
        }
        let mut flat = Vec::with_capacity(rank * rank);
        for row in coeffs {
            if row.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "operator row of length {} in a rank-{rank} operator",
                    row.len()
                )));
            }
            for c in row {
                shape.check(c.shape())?;
                flat.push(c);
            }
        }
        Ok(Self {
            shape,
            rank,
            coeffs: flat,
        })
    }

    pub(crate) fn from_flat_coeffs(
        shape: AlgebraShape,
        rank: usize,
        coeffs: Vec<AlgebraElement>,
    ) -> Self {
        debug_assert_eq!(coeffs.len(), rank * rank);
        Self {
            shape,
            rank,
            coeffs,
        }
    }

    pub fn zero(shape: &AlgebraShape, rank: usize) -> Self {
        Self {
            shape: shape.clone(),
            rank,
            coeffs: vec![AlgebraElement::zero(shape); rank * rank],
        }
    }

    pub fn identity(shape: &AlgebraShape, rank: usize) -> Self {
        let mut t = Self::zero(shape, rank);
        for q in 0..rank {
            t.coeffs[q * rank + q] = AlgebraElement::one(shape);
        }
        t
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeff(&self, q: usize, p: usize) -> &AlgebraElement {
        &self.coeffs[q * self.rank + p]
    }

    fn check_operator(&self, other: &Self) -> Result<()> {
        self.shape.check(&other.shape)?;
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch(format!(
                "operator ranks {} and {}",
                self.rank, other.rank
            )));
        }
        Ok(())
    }

    /// `(Tf)_p = Σ_q f_q · coeffs[q][p]`.
    pub fn apply(&self, f: &ModuleVector) -> Result<ModuleVector> {
        self.shape.check(f.shape())?;
        if f.rank() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "rank-{} operator applied to rank-{} vector",
                self.rank,
                f.rank()
            )));
        }
        Ok(self.apply_unchecked(f))
    }

    pub(crate) fn apply_unchecked(&self, f: &ModuleVector) -> ModuleVector {
        let k = self.rank;
        let entries = (0..k)
            .map(|p| {
                let terms: Vec<AlgebraElement> =
                    (0..k).map(|q| f.entry(q) * self.coeff(q, p)).collect();
                linalg::pairwise_sum(&terms, &|x: &AlgebraElement, y: &AlgebraElement| x + y)
                    .expect("rank >= 1")
            })
            .collect();
        ModuleVector {
            shape: self.shape.clone(),
            entries,
        }
    }

    /// `coeffs'[p][q] = coeffs[q][p]*`.
    pub fn adjoint(&self) -> Self {
        let k = self.rank;
        let mut coeffs = Vec::with_capacity(k * k);
        for p in 0..k {
            for q in 0..k {
                coeffs.push(self.coeff(q, p).star());
            }
        }
        Self {
            shape: self.shape.clone(),
            rank: k,
            coeffs,
        }
    }

    /// `then ∘ self`: applies `self` first.
    pub fn compose(&self, then: &Self) -> Result<Self> {
        self.check_operator(then)?;
        let k = self.rank;
        let mut coeffs = Vec::with_capacity(k * k);
        for q in 0..k {
            for p in 0..k {
                let terms: Vec<AlgebraElement> = (0..k)
                    .map(|r| self.coeff(q, r) * then.coeff(r, p))
                    .collect();
                coeffs.push(
                    linalg::pairwise_sum(&terms, &|x: &AlgebraElement, y: &AlgebraElement| x + y)
                        .expect("rank >= 1"),
                );
            }
        }
        Ok(Self {
            shape: self.shape.clone(),
            rank: k,
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_operator(other)?;
        Ok(Self {
            shape: self.shape.clone(),
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_operator(other)?;
        Ok(Self {
            shape: self.shape.clone(),
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            shape: self.shape.clone(),
            rank: self.rank,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// The `k n_i × k n_i` matrix `[c_{qp}]` of algebra block `i`.
    pub fn block_matrix(&self, i: usize) -> CMatrix {
        let n = self.shape.block_dims()[i];
        let k = self.rank;
        CMatrix::from_fn(k * n, k * n, |row, col| {
            let (q, r) = (row / n, row % n);
            let (p, c) = (col / n, col % n);
            self.coeff(q, p).block(i)[(r, c)]
        })
    }

    fn from_block_matrices(shape: &AlgebraShape, rank: usize, mats: &[CMatrix]) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(rank * rank);
        for q in 0..rank {
            for p in 0..rank {
                let blocks = shape
                    .block_dims()
                    .iter()
                    .zip(mats)
                    .map(|(&n, m)| CMatrix::from_fn(n, n, |r, c| m[(q * n + r, p * n + c)]))
                    .collect();
                coeffs.push(AlgebraElement::new(shape.clone(), blocks)?);
            }
        }
        Ok(Self {
            shape: shape.clone(),
            rank,
            coeffs,
        })
    }

    /// The image of `T` under the *-isomorphism `End*(A^k) ≅ ⊕_i M_{k n_i}`,
    /// block `i` being the transpose of [`ModuleOperator::block_matrix`].
    ///
    /// Composition maps to products (`then ∘ self` ↦ `φ(then) φ(self)`) and the
    /// module adjoint to the conjugate transpose, so norm, spectrum and the
    /// positivity order of operators are those of this algebra element.
    pub fn to_algebra_element(&self) -> AlgebraElement {
        let dims: Vec<usize> = self
            .shape
            .block_dims()
            .iter()
            .map(|n| n * self.rank)
            .collect();
        let shape = AlgebraShape::new(dims).expect("non-empty positive dims");
        let blocks = (0..self.shape.num_blocks())
            .map(|i| self.block_matrix(i).transpose())
            .collect();
        AlgebraElement::new(shape, blocks).expect("block sizes match")
    }

    /// Inverse of [`ModuleOperator::to_algebra_element`].
    pub fn from_algebra_element(
        shape: &AlgebraShape,
        rank: usize,
        a: &AlgebraElement,
    ) -> Result<Self> {
        let dims: Vec<usize> = shape.block_dims().iter().map(|n| n * rank).collect();
        if a.shape().block_dims() != dims.as_slice() {
            return Err(Error::ShapeMismatch {
                expected: dims,
                found: a.shape().block_dims().to_vec(),
            });
        }
        let mats: Vec<CMatrix> = a.blocks().iter().map(CMatrix::transpose).collect();
        Self::from_block_matrices(shape, rank, &mats)
    }

    /// Operator norm.
    pub fn norm(&self) -> f64 {
        self.to_algebra_element().norm()
    }

    /// The `D×D` complex matrix (`D = k · Σ n_i²`) acting on
    /// [`ModuleVector::flatten`] exactly as `apply` acts on vectors.
    pub fn complex_realization(&self) -> CMatrix {
        let k = self.rank;
        let d = k * self.shape.dim();
        let mut m = CMatrix::zeros(d, d);
        let mut offset = 0;
        for (i, &n) in self.shape.block_dims().iter().enumerate() {
            let idx = |q: usize, c: usize, r: usize| offset + q * n * n + c * n + r;
            for q in 0..k {
                for p in 0..k {
                    let cqp = self.coeff(q, p).block(i);
                    // (f_q c_qp)[r, c] = Σ_s f_q[r, s] c_qp[s, c]
                    for r in 0..n {
                        for c in 0..n {
                            for s in 0..n {
                                m[(idx(p, c, r), idx(q, s, r))] += cqp[(s, c)];
                            }
                        }
                    }
                }
            }
            offset += k * n * n;
        }
        m
    }

    /// Inverse operator, by Gauss elimination on each block matrix.
    pub fn invert(&self) -> Result<Self> {
        let mut inverses = Vec::with_capacity(self.shape.num_blocks());
        for i in 0..self.shape.num_blocks() {
            match linalg::gauss_inverse(&self.block_matrix(i)) {
                Ok(inv) => inverses.push(inv),
                Err(Error::SingularOperator { min_singular_value }) => {
                    return Err(Error::SingularOperator { min_singular_value })
                }
                Err(e) => return Err(e),
            }
        }
        Self::from_block_matrices(&self.shape, self.rank, &inverses)
    }
}
