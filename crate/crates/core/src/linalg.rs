//! Dense complex matrices and the numerical kernels everything else is built on:
//! cyclic Jacobi for Hermitian matrices, Gauss elimination with partial
//! pivoting, and a diagonally pivoted LDL* factorization used as a rank test.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const JACOBI_REL_THRESHOLD: f64 = 1e-14;
pub const PIVOT_REL_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - self^*`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).norm_fro()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascending; the
/// eigenvector for `values[i]` is column `i` of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += a[(p, q)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized as `(a + a^*)/2` before rotating, so tiny
/// asymmetries from rounding do not leak into complex eigenvalues. Callers
/// that need to reject non-Hermitian input check `hermitian_deviation` first.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    assert!(a.is_square(), "eigen-decomposition needs a square matrix");
    let n = a.rows();
    let mut m = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_REL_THRESHOLD * m.norm_fro();

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&m);
        if off > threshold {
            return Err(Error::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                off_diagonal: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation annihilating `m[(p, q)]`, accumulated into `v`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.rows();
    for r in 0..n {
        let (xp, xq) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = xp * jpp + xq * jqp;
        m[(r, q)] = xp * jpq + xq * jqq;
    }
    for r in 0..n {
        let (xp, xq) = (m[(p, r)], m[(q, r)]);
        m[(p, r)] = jpp.conj() * xp + jqp.conj() * xq;
        m[(q, r)] = jpq.conj() * xp + jqq.conj() * xq;
    }
    for r in 0..n {
        let (xp, xq) = (v[(r, p)], v[(r, q)]);
        v[(r, p)] = xp * jpp + xq * jqp;
        v[(r, q)] = xp * jpq + xq * jqq;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = a.adjoint().mul(a);
    match hermitian_eigen(&gram) {
        Ok(e) => e.max().max(0.0).sqrt(),
        Err(_) => a.norm_fro(),
    }
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(a: &CMatrix) -> f64 {
    if a.rows() == 0 {
        return 0.0;
    }
    let gram = a.adjoint().mul(a);
    match hermitian_eigen(&gram) {
        Ok(e) => e.min().max(0.0).sqrt(),
        Err(_) => 0.0,
    }
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// A pivot with modulus at most `PIVOT_REL_TOL * max|a_ij|` marks the matrix
/// singular; the error carries the smallest singular value.
pub fn gauss_inverse(a: &CMatrix) -> Result<CMatrix> {
    assert!(a.is_square(), "only square matrices can be inverted");
    let n = a.rows();
    let scale = a.max_abs();
    let singular = || Error::SingularOperator {
        min_singular_value: min_singular_value(a),
    };
    if scale == 0.0 {
        return Err(singular());
    }
    let mut work = a.clone();
    let mut inv = CMatrix::identity(n);

    for col in 0..n {
        let (pivot_row, pivot_abs) =
            (col..n)
                .map(|r| (r, work[(r, col)].norm()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= PIVOT_REL_TOL * scale {
            return Err(singular());
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = work[(col, c)];
                work[(col, c)] = work[(pivot_row, c)];
                work[(pivot_row, c)] = tmp;
                let tmp = inv[(col, c)];
                inv[(col, c)] = inv[(pivot_row, c)];
                inv[(pivot_row, c)] = tmp;
            }
        }
        let pivot = work[(col, col)];
        for c in 0..n {
            work[(col, c)] /= pivot;
            inv[(col, c)] /= pivot;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = work[(r, col)];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                let wc = work[(col, c)];
                let ic = inv[(col, c)];
                work[(r, c)] -= factor * wc;
                inv[(r, c)] -= factor * ic;
            }
        }
    }
    Ok(inv)
}

/// Smallest pivot of an LDL* factorization of a Hermitian positive
/// semidefinite matrix with greedy diagonal pivoting.
///
/// Every pivot is bounded below by the smallest eigenvalue, and a
/// rank-deficient matrix produces a pivot at rounding level, so comparing the
/// result with a threshold decides invertibility without an eigensolver.
/// Elimination stops at the first non-positive pivot.
pub fn min_pivot_hermitian(a: &CMatrix) -> f64 {
    assert!(a.is_square());
    let n = a.rows();
    let mut work = a.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    while !remaining.is_empty() {
        let (pos, &i) = remaining
            .iter()
            .enumerate()
            .max_by(|x, y| work[(*x.1, *x.1)].re.total_cmp(&work[(*y.1, *y.1)].re))
            .expect("non-empty");
        let d = work[(i, i)].re;
        min_pivot = min_pivot.min(d);
        if d <= 0.0 {
            break;
        }
        remaining.swap_remove(pos);
        for &r in &remaining {
            let lr = work[(r, i)] / d;
            for &c in &remaining {
                let ic = work[(i, c)];
                work[(r, c)] -= lr * ic;
            }
        }
    }
    if min_pivot.is_infinite() {
        0.0
    } else {
        min_pivot
    }
}

/// Pairwise (cascade) summation with a fixed association order, so the result
/// depends only on the input order.
pub fn pairwise_sum<T: Clone>(items: &[T], add: &impl Fn(&T, &T) -> T) -> Option<T> {
    match items.len() {
        0 => None,
        1 => Some(items[0].clone()),
        n => {
            let (lo, hi) = items.split_at(n / 2);
            let l = pairwise_sum(lo, add)?;
            let h = pairwise_sum(hi, add)?;
            Some(add(&l, &h))
        }
    }
}
