//! Discretized measure spaces and sampled fields.
//!
//! Integrals over `(Ω, μ)` become weighted sums `Σ_j w_j · value_j`. Atomic
//! spaces are exact; interval spaces carry a quadrature rule.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;
use crate::module::ModuleVector;

pub const DEFAULT_QUADRATURE_NODES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    GaussLegendre,
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureKind {
    /// Finite sum of point masses.
    Atomic,
    /// `[a, b]` with Lebesgue measure, discretized by `rule` with `m` nodes.
    Interval {
        a: f64,
        b: f64,
        rule: QuadratureRule,
        m: usize,
    },
    /// A quadrature discretization with some nodes removed.
    RestrictedQuadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    kind: MeasureKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl MeasureSpace {
    pub fn atomic(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidMeasure(
                "at least one atom is required".into(),
            ));
        }
        if let Some((j, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
        {
            return Err(Error::InvalidMeasure(format!(
                "weight {j} is {w}, weights must be positive"
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure("nodes must be finite".into()));
        }
        Ok(Self {
            kind: MeasureKind::Atomic,
            nodes,
            weights,
        })
    }

    pub fn interval(a: f64, b: f64, rule: QuadratureRule, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidMeasure(format!(
                "invalid interval [{a}, {b}]"
            )));
        }
        let (nodes, weights) = match rule {
            QuadratureRule::GaussLegendre => {
                if m == 0 {
                    return Err(Error::InvalidMeasure("gauss-legendre needs m >= 1".into()));
                }
                let (x, w) = gauss_legendre(m);
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                (
                    x.iter().map(|t| mid + half * t).collect(),
                    w.iter().map(|v| half * v).collect(),
                )
            }
            QuadratureRule::Trapezoid => {
                if m < 2 {
                    return Err(Error::InvalidMeasure("trapezoid needs m >= 2".into()));
                }
                let h = (b - a) / (m - 1) as f64;
                let nodes = (0..m)
                    .map(|j| if j == m - 1 { b } else { a + h * j as f64 })
                    .collect();
                let weights = (0..m)
                    .map(|j| if j == 0 || j == m - 1 { 0.5 * h } else { h })
                    .collect();
                (nodes, weights)
            }
        };
        Ok(Self {
            kind: MeasureKind::Interval { a, b, rule, m },
            nodes,
            weights,
        })
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn is_atomic(&self) -> bool {
        self.kind == MeasureKind::Atomic
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights, &|a: &f64, b: &f64| a + b).unwrap_or(0.0)
    }

    pub(crate) fn same_discretization(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.weights == other.weights
    }

    fn check_subset(&self, subset: &[usize]) -> Result<BTreeSet<usize>> {
        let mut set = BTreeSet::new();
        for &i in subset {
            if i >= self.len() {
                return Err(Error::BadIndex {
                    index: i,
                    len: self.len(),
                });
            }
            set.insert(i);
        }
        Ok(set)
    }

    /// `Ω \ Ω₁`, where `Ω₁` is given by node indices.
    pub fn restrict(&self, removed: &[usize]) -> Result<Self> {
        let removed = self.check_subset(removed)?;
        let keep: Vec<usize> = (0..self.len()).filter(|i| !removed.contains(i)).collect();
        if keep.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        let kind = match self.kind {
            _ if removed.is_empty() => self.kind.clone(),
            MeasureKind::Atomic => MeasureKind::Atomic,
            _ => MeasureKind::RestrictedQuadrature,
        };
        Ok(Self {
            kind,
            nodes: keep.iter().map(|&i| self.nodes[i]).collect(),
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
        })
    }
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=m {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let mf = m as f64;
    let dp = mf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Values a sampled field can carry.
pub trait FieldValue: Clone {
    fn algebra_shape(&self) -> &AlgebraShape;
    fn module_rank(&self) -> usize;
}

impl FieldValue for AlgebraElement {
    fn algebra_shape(&self) -> &AlgebraShape {
        self.shape()
    }

    fn module_rank(&self) -> usize {
        1
    }
}

impl FieldValue for ModuleVector {
    fn algebra_shape(&self) -> &AlgebraShape {
        self.shape()
    }

    fn module_rank(&self) -> usize {
        self.rank()
    }
}

/// One value per node of a measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    space: MeasureSpace,
    values: Vec<T>,
}

impl<T: FieldValue> SampledField<T> {
    pub fn new(space: MeasureSpace, values: Vec<T>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                space.len()
            )));
        }
        if let Some(first) = values.first() {
            for v in &values[1..] {
                first.algebra_shape().check(v.algebra_shape())?;
                if v.module_rank() != first.module_rank() {
                    return Err(Error::DimensionMismatch("non-uniform module rank".into()));
                }
            }
        }
        Ok(Self { space, values })
    }

    pub fn from_fn(space: MeasureSpace, f: impl FnMut(f64) -> T) -> Result<Self> {
        let values = space.nodes().iter().copied().map(f).collect();
        Self::new(space, values)
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, j: usize) -> &T {
        &self.values[j]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<U: FieldValue>(&self, f: impl FnMut(&T) -> U) -> SampledField<U> {
        SampledField {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// The field on `Ω \ Ω₁`.
    pub fn restrict(&self, removed: &[usize]) -> Result<Self> {
        let space = self.space.restrict(removed)?;
        let removed: BTreeSet<usize> = removed.iter().copied().collect();
        let values = self
            .values
            .iter()
            .enumerate()
            .filter(|(j, _)| !removed.contains(j))
            .map(|(_, v)| v.clone())
            .collect();
        Ok(Self { space, values })
    }

    pub(crate) fn check_space(&self, other: &MeasureSpace) -> Result<()> {
        if self.space.same_discretization(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl SampledField<AlgebraElement> {
    pub fn constant(space: MeasureSpace, value: AlgebraElement) -> Self {
        let values = vec![value; space.len()];
        Self { space, values }
    }

    pub fn zero(space: MeasureSpace, shape: &AlgebraShape) -> Self {
        Self::constant(space, AlgebraElement::zero(shape))
    }

    /// `χ_{Ω₁}`: 1 on the listed nodes, 0 elsewhere.
    pub fn indicator(space: MeasureSpace, shape: &AlgebraShape, subset: &[usize]) -> Result<Self> {
        let set = space.check_subset(subset)?;
        let values = (0..space.len())
            .map(|j| {
                if set.contains(&j) {
                    AlgebraElement::one(shape)
                } else {
                    AlgebraElement::zero(shape)
                }
            })
            .collect();
        Ok(Self { space, values })
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.values[0].shape()
    }

    /// `Σ_j w_j · φ_j`.
    pub fn integrate(&self) -> AlgebraElement {
        let terms: Vec<AlgebraElement> = self
            .values
            .iter()
            .zip(self.space.weights())
            .map(|(v, &w)| v.scale_real(w))
            .collect();
        pairwise_sum(&terms, &|a: &AlgebraElement, b: &AlgebraElement| a + b)
            .expect("spaces have at least one node")
    }

    /// `⟨φ, ψ⟩ = Σ_j w_j φ_j ψ_j*`.
    pub fn l2_inner(&self, other: &Self) -> Result<AlgebraElement> {
        self.check_space(&other.space)?;
        self.shape().check(other.shape())?;
        let terms: Vec<AlgebraElement> = self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.space.weights())
            .map(|((a, b), &w)| (a * &b.star()).scale_real(w))
            .collect();
        Ok(
            pairwise_sum(&terms, &|a: &AlgebraElement, b: &AlgebraElement| a + b)
                .expect("spaces have at least one node"),
        )
    }

    /// `‖∫ |φ*|² dμ‖^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.l2_inner(self).map(|g| g.norm().sqrt()).unwrap_or(0.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Pointwise product `φ_j · ψ_j`.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v.scale(c))
    }
}

impl SampledField<ModuleVector> {
    /// `Σ_j w_j · F_j`.
    pub fn integrate(&self) -> ModuleVector {
        let terms: Vec<ModuleVector> = self
            .values
            .iter()
            .zip(self.space.weights())
            .map(|(v, &w)| v.scale(Complex64::new(w, 0.0)))
            .collect();
        pairwise_sum(&terms, &|a: &ModuleVector, b: &ModuleVector| a + b)
            .expect("spaces have at least one node")
    }

    /// `‖Σ_j w_j ⟨F_j, F_j⟩‖^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let terms: Vec<AlgebraElement> = self
            .values
            .iter()
            .zip(self.space.weights())
            .map(|(v, &w)| v.inner_unchecked(v).scale_real(w))
            .collect();
        pairwise_sum(&terms, &|a: &AlgebraElement, b: &AlgebraElement| a + b)
            .map(|g| g.norm().sqrt())
            .unwrap_or(0.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s1() -> AlgebraShape {
        AlgebraShape::scalar()
    }

    fn scalar(z: Complex64) -> AlgebraElement {
        AlgebraElement::scalar(&s1(), z)
    }

    fn scalar_field(space: &MeasureSpace, zs: &[Complex64]) -> SampledField<AlgebraElement> {
        SampledField::new(space.clone(), zs.iter().map(|&z| scalar(z)).collect()).unwrap()
    }

    fn three_omega_sq(space: &MeasureSpace) -> f64 {
        SampledField::from_fn(space.clone(), |w| scalar(c(3.0 * w * w, 0.0)))
            .unwrap()
            .integrate()
            .block(0)[(0, 0)]
            .re
    }

    #[test]
    fn atomic_examples() {
        let one = MeasureSpace::atomic(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(one.total_mass(), 1.0);
        assert_eq!(
            MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, 1.0])
                .unwrap()
                .len(),
            2
        );
        assert!(matches!(
            MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, -1.0]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(MeasureSpace::atomic(vec![0.0], vec![1.0, 1.0]).is_err());
        assert!(MeasureSpace::atomic(vec![], vec![]).is_err());
    }

    #[test]
    fn interval_examples() {
        let gl2 = MeasureSpace::interval(0.0, 1.0, QuadratureRule::GaussLegendre, 2).unwrap();
        assert!((three_omega_sq(&gl2) - 1.0).abs() < 1e-15);
        for rule in [QuadratureRule::GaussLegendre, QuadratureRule::Trapezoid] {
            let sp = MeasureSpace::interval(0.0, 1.0, rule, 7).unwrap();
            assert!((sp.total_mass() - 1.0).abs() < 1e-14);
        }
        // composite trapezoid error: (b-a) h² max|f''| / 12 = 6 / (12 · 100²) = 5e-5
        let tr = MeasureSpace::interval(0.0, 1.0, QuadratureRule::Trapezoid, 101).unwrap();
        let err = (three_omega_sq(&tr) - 1.0).abs();
        assert!(err < 1e-4);
        assert!((err - 5e-5).abs() < 1e-12);

        assert!(MeasureSpace::interval(1.0, 0.0, QuadratureRule::GaussLegendre, 4).is_err());
        assert!(MeasureSpace::interval(0.0, 1.0, QuadratureRule::GaussLegendre, 0).is_err());
        assert!(MeasureSpace::interval(0.0, 1.0, QuadratureRule::Trapezoid, 1).is_err());
    }

    #[test]
    fn gauss_legendre_exactness_degree() {
        for m in 1..=12 {
            let sp = MeasureSpace::interval(-0.5, 2.0, QuadratureRule::GaussLegendre, m).unwrap();
            assert!((sp.total_mass() - 2.5).abs() <= 1e-12 * 2.5);
            for d in 0..(2 * m) {
                let exact =
                    (2.0f64.powi(d as i32 + 1) - (-0.5f64).powi(d as i32 + 1)) / (d as f64 + 1.0);
                let approx: f64 = sp
                    .nodes()
                    .iter()
                    .zip(sp.weights())
                    .map(|(x, w)| w * x.powi(d as i32))
                    .sum();
                assert!(
                    (approx - exact).abs() <= 1e-12 * (1.0 + exact.abs()),
                    "m={m} d={d}"
                );
            }
        }
        let (x, _) = gauss_legendre(5);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn trapezoid_error_decreases_under_refinement() {
        let mut last = f64::INFINITY;
        for m in [3, 5, 9, 17, 33, 65] {
            let sp = MeasureSpace::interval(0.0, 1.0, QuadratureRule::Trapezoid, m).unwrap();
            let err = (three_omega_sq(&sp) - 1.0).abs();
            assert!(err < last);
            last = err;
        }
    }

    #[test]
    fn integrate_examples() {
        let one = MeasureSpace::atomic(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(
            SampledField::constant(one.clone(), scalar(c(1.0, 0.0))).integrate(),
            scalar(c(1.0, 0.0))
        );
        assert_eq!(SampledField::zero(one, &s1()).integrate().norm(), 0.0);
        let two = MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            scalar_field(&two, &[c(1.0, 0.0), c(-1.0, 0.0)])
                .integrate()
                .norm(),
            0.0
        );
    }

    #[test]
    fn l2_examples() {
        let one = MeasureSpace::atomic(vec![0.0], vec![1.0]).unwrap();
        let chi = SampledField::constant(one.clone(), scalar(c(1.0, 0.0)));
        assert_eq!(chi.l2_inner(&chi).unwrap(), scalar(c(1.0, 0.0)));
        assert_eq!(
            chi.l2_inner(&SampledField::zero(one, &s1()))
                .unwrap()
                .norm(),
            0.0
        );

        let two = MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let phi = scalar_field(&two, &[c(1.0, 0.0), c(0.0, 1.0)]);
        let psi = scalar_field(&two, &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(phi.l2_inner(&psi).unwrap(), scalar(c(1.0, 1.0)));
        assert!(matches!(phi.l2_inner(&chi), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn l2_norm_examples() {
        let two = MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(SampledField::zero(two.clone(), &s1()).l2_norm(), 0.0);
        assert_eq!(
            SampledField::constant(two, scalar(c(1.0, 0.0))).l2_norm(),
            2.0
        );
        for m in [2, 5, 16] {
            let sp = MeasureSpace::interval(0.0, 1.0, QuadratureRule::GaussLegendre, m).unwrap();
            let phi = SampledField::from_fn(sp, |w| scalar(c(3f64.sqrt() * w, 0.0))).unwrap();
            assert!((phi.l2_norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn indicator_examples() {
        let two = MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let full = SampledField::indicator(two.clone(), &s1(), &[0, 1]).unwrap();
        assert_eq!(
            full,
            SampledField::constant(two.clone(), scalar(c(1.0, 0.0)))
        );
        let empty = SampledField::indicator(two.clone(), &s1(), &[]).unwrap();
        assert_eq!(empty, SampledField::zero(two.clone(), &s1()));
        let first = SampledField::indicator(two.clone(), &s1(), &[0]).unwrap();
        assert_eq!(first, scalar_field(&two, &[c(1.0, 0.0), c(0.0, 0.0)]));
        assert!(matches!(
            SampledField::indicator(two, &s1(), &[2]),
            Err(Error::BadIndex { index: 2, len: 2 })
        ));
    }

    #[test]
    fn restrict_examples() {
        let two = MeasureSpace::atomic(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(two.restrict(&[]).unwrap(), two);
        let r = two.restrict(&[0]).unwrap();
        assert_eq!((r.nodes(), r.weights()), (&[1.0][..], &[2.0][..]));
        assert_eq!(two.restrict(&[0, 1]), Err(Error::EmptyRestriction));

        let gl = MeasureSpace::interval(0.0, 1.0, QuadratureRule::GaussLegendre, 4).unwrap();
        assert_eq!(
            gl.restrict(&[1]).unwrap().kind(),
            &MeasureKind::RestrictedQuadrature
        );

        let phi = scalar_field(&two, &[c(1.0, 0.0), c(5.0, 0.0)]);
        assert_eq!(phi.restrict(&[0]).unwrap().values(), &[scalar(c(5.0, 0.0))]);
    }

    #[test]
    fn integration_is_additive_over_partitions() {
        let sp = MeasureSpace::atomic(
            vec![0.0, 1.0, 2.0, 3.0, 4.0],
            vec![0.5, 1.0, 0.25, 2.0, 1.5],
        )
        .unwrap();
        let phi = scalar_field(
            &sp,
            &[
                c(1.0, 2.0),
                c(-0.5, 0.0),
                c(3.0, -1.0),
                c(0.125, 0.5),
                c(2.0, 2.0),
            ],
        );
        let inside = [1usize, 3];
        let chi = SampledField::indicator(sp.clone(), &s1(), &inside).unwrap();
        let on_subset = phi.pointwise_mul(&chi).unwrap().integrate();
        let off_subset = phi.restrict(&inside).unwrap().integrate();
        assert!((&phi.integrate() - &(&on_subset + &off_subset)).norm() < 1e-15);
    }
}
