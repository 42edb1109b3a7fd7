//! Frame maps on discretized measure spaces and their operators: synthesis,
//! analysis, frame and Gram operators, bounds, duals, and the structural
//! tests (μ-completeness, L²-independence, Riesz, Riesz-type, exactness).
//!
//! Every decision compares a spectral quantity with `tol · (1 + scale)`,
//! where `scale` is the largest eigenvalue (or largest diagonal entry) of the
//! operator involved.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, pairwise_sum};
use crate::measure::{MeasureSpace, SampledField};
use crate::module::{ModuleOperator, ModuleVector};

fn sum_elements(terms: &[AlgebraElement]) -> AlgebraElement {
    pairwise_sum(terms, &|a: &AlgebraElement, b: &AlgebraElement| a + b).expect("non-empty sum")
}

fn sum_vectors(terms: &[ModuleVector]) -> ModuleVector {
    pairwise_sum(terms, &|a: &ModuleVector, b: &ModuleVector| a + b).expect("non-empty sum")
}

/// Relative decision threshold `tol · (1 + scale)`.
pub fn threshold(tol: f64, scale: f64) -> f64 {
    tol * (1.0 + scale.abs())
}

/// A frame map `F: Ω → A^k`, sampled at the nodes of a measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    samples: SampledField<ModuleVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Riesz constants in the squared convention
/// `A‖∫|φ*|²‖ ≤ ‖∫φF‖² ≤ B‖∫|φ*|²‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    pub lower: f64,
    pub upper: f64,
}

impl RieszBounds {
    /// Constants for the unsquared form `A‖∫|φ*|²‖^{1/2} ≤ ‖∫φF‖ ≤ …`.
    pub fn sqrt_convention(&self) -> (f64, f64) {
        (self.lower.sqrt(), self.upper.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticFlags {
    pub bessel: bool,
    pub frame: bool,
    pub tight: bool,
    pub mu_complete: bool,
    pub l2_independent: bool,
    pub riesz: bool,
    pub riesz_type: bool,
    /// `None` when exactness is not decidable (quadrature spaces).
    pub exact: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDiagnostics {
    pub bounds: FrameBounds,
    pub flags: DiagnosticFlags,
    pub riesz_bounds: Option<RieszBounds>,
    /// `‖T_F T_G* − I‖` for the canonical dual `G`; absent when not a frame.
    pub reconstruction_residual: Option<f64>,
    /// Sampled distance between the non-canonical dual witness and the
    /// canonical dual; absent when the dual is unique or not a frame.
    pub dual_witness_distance: Option<f64>,
    pub notes: Vec<String>,
}

/// The Gram operator `V = T*T` on the discretized `L²(Ω, A)`,
/// `(Vφ)(ω_l) = Σ_j w_j φ_j ⟨F_j, F_l⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramOperator {
    space: MeasureSpace,
    raw: ModuleOperator,
    symmetric: ModuleOperator,
}

impl GramOperator {
    /// Coefficients `w_j ⟨F_j, F_l⟩` acting on the node tuple `(φ_1, …, φ_m)`.
    pub fn coefficients(&self) -> &ModuleOperator {
        &self.raw
    }

    /// `W^{1/2} V W^{-1/2}`, coefficients `√(w_j w_l) ⟨F_j, F_l⟩`. Self-adjoint
    /// for the unweighted inner product and similar to `V`.
    pub fn hermitian_form(&self) -> &ModuleOperator {
        &self.symmetric
    }

    pub fn apply(
        &self,
        phi: &SampledField<AlgebraElement>,
    ) -> Result<SampledField<AlgebraElement>> {
        phi.check_space(&self.space)?;
        let v = ModuleVector::new(phi.shape().clone(), phi.values().to_vec())?;
        let out = self.raw.apply(&v)?;
        SampledField::new(self.space.clone(), out.entries().to_vec())
    }

    /// Eigenvalues of `V`, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        self.symmetric.to_algebra_element().spectrum()
    }

    /// A unit-norm kernel vector of `V` as a field, when `λ_min ≤ threshold`.
    fn kernel_witness(&self, tol: f64) -> Result<Option<SampledField<AlgebraElement>>> {
        let phi = self.symmetric.to_algebra_element();
        let eig = phi.hermitian_eigen()?;
        let lambda_max = eig.iter().map(|e| e.max()).fold(0.0, f64::max);
        let cut = threshold(tol, lambda_max);
        let Some((block, e)) = eig
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.min().total_cmp(&b.1.min()))
        else {
            return Ok(None);
        };
        if e.min() > cut {
            return Ok(None);
        }
        let shape = self.raw.shape();
        let m = self.space.len();
        let chi = ModuleVector::from_block_row(shape, m, block, &e.vectors.column(0))?;
        let values = chi
            .entries()
            .iter()
            .zip(self.space.weights())
            .map(|(x, &w)| x.scale_real(1.0 / w.sqrt()))
            .collect();
        Ok(Some(SampledField::new(self.space.clone(), values)?))
    }
}

impl Frame {
    pub fn new(space: MeasureSpace, samples: Vec<ModuleVector>) -> Result<Self> {
        Self::from_field(SampledField::new(space, samples)?)
    }

    pub fn from_field(samples: SampledField<ModuleVector>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidMeasure(
                "a frame needs at least one node".into(),
            ));
        }
        Ok(Self { samples })
    }

    pub fn space(&self) -> &MeasureSpace {
        self.samples.space()
    }

    pub fn samples(&self) -> &SampledField<ModuleVector> {
        &self.samples
    }

    pub fn sample(&self, j: usize) -> &ModuleVector {
        self.samples.value(j)
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.sample(0).shape()
    }

    pub fn rank(&self) -> usize {
        self.sample(0).rank()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        self.space().weights()
    }

    pub fn restrict(&self, removed: &[usize]) -> Result<Self> {
        Self::from_field(self.samples.restrict(removed)?)
    }

    fn check_vector(&self, f: &ModuleVector) -> Result<()> {
        self.shape().check(f.shape())?;
        if f.rank() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "rank-{} vector for a rank-{} frame",
                f.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Frame) -> Result<()> {
        other.samples.check_space(self.space())?;
        self.check_vector(other.sample(0))
    }

    /// `T_F φ = Σ_j w_j φ_j F_j`.
    pub fn synthesis(&self, phi: &SampledField<AlgebraElement>) -> Result<ModuleVector> {
        phi.check_space(self.space())?;
        self.shape().check(phi.shape())?;
        let terms: Vec<ModuleVector> = phi
            .values()
            .iter()
            .zip(self.samples.values())
            .zip(self.weights())
            .map(|((p, f), &w)| f.left_mul(&p.scale_real(w)))
            .collect();
        Ok(sum_vectors(&terms))
    }

    /// `(T_F* f)(ω_j) = ⟨f, F_j⟩`.
    pub fn analysis(&self, f: &ModuleVector) -> Result<SampledField<AlgebraElement>> {
        self.check_vector(f)?;
        Ok(self.samples.map(|fj| f.inner_unchecked(fj)))
    }

    /// `Σ_j w_j ⟨·, G_j⟩ F_j`, i.e. `T_F T_G*`.
    fn mixed_operator(&self, g: &Frame) -> ModuleOperator {
        let k = self.rank();
        let mut coeffs = Vec::with_capacity(k * k);
        for q in 0..k {
            for p in 0..k {
                let terms: Vec<AlgebraElement> = self
                    .samples
                    .values()
                    .iter()
                    .zip(g.samples.values())
                    .zip(self.weights())
                    .map(|((fj, gj), &w)| (&gj.entry(q).star() * fj.entry(p)).scale_real(w))
                    .collect();
                coeffs.push(sum_elements(&terms));
            }
        }
        ModuleOperator::from_flat_coeffs(self.shape().clone(), k, coeffs)
    }

    /// `S f = Σ_j w_j ⟨f, F_j⟩ F_j`.
    pub fn frame_operator(&self) -> ModuleOperator {
        self.mixed_operator(self)
    }

    pub fn gram_operator(&self) -> GramOperator {
        let m = self.len();
        let w = self.weights();
        let mut raw = Vec::with_capacity(m * m);
        let mut symmetric = Vec::with_capacity(m * m);
        for j in 0..m {
            for l in 0..m {
                let g = self.sample(j).inner_unchecked(self.sample(l));
                raw.push(g.scale_real(w[j]));
                symmetric.push(g.scale_real((w[j] * w[l]).sqrt()));
            }
        }
        let shape = self.shape().clone();
        GramOperator {
            space: self.space().clone(),
            raw: ModuleOperator::from_flat_coeffs(shape.clone(), m, raw),
            symmetric: ModuleOperator::from_flat_coeffs(shape, m, symmetric),
        }
    }

    /// Optimal constants `(λ_min(S), λ_max(S))`.
    pub fn frame_bounds(&self) -> Result<FrameBounds> {
        let spec = self.frame_operator().to_algebra_element().spectrum()?;
        Ok(FrameBounds {
            lower: spec.first().copied().unwrap_or(0.0).max(0.0),
            upper: spec.last().copied().unwrap_or(0.0).max(0.0),
        })
    }

    /// Finite weighted sums are always bounded.
    pub fn is_bessel(&self) -> Result<bool> {
        Ok(self.frame_bounds()?.upper.is_finite())
    }

    pub fn is_frame(&self, tol: f64) -> Result<bool> {
        let b = self.frame_bounds()?;
        Ok(b.lower > threshold(tol, b.upper))
    }

    pub fn is_tight(&self, tol: f64) -> Result<bool> {
        let b = self.frame_bounds()?;
        Ok(b.lower > threshold(tol, b.upper)
            && (b.upper - b.lower).abs() <= threshold(tol, b.upper))
    }

    fn require_frame(&self, tol: f64) -> Result<FrameBounds> {
        let b = self.frame_bounds()?;
        let t = threshold(tol, b.upper);
        if b.lower > t {
            Ok(b)
        } else {
            Err(Error::NotAFrame {
                lower: b.lower,
                threshold: t,
            })
        }
    }

    /// `G_j = S^{-1} F_j`.
    pub fn canonical_dual(&self) -> Result<Frame> {
        let b = self.require_frame(DEFAULT_TOL)?;
        let s_inv = self
            .frame_operator()
            .invert()
            .map_err(|_| Error::NotAFrame {
                lower: b.lower,
                threshold: threshold(DEFAULT_TOL, b.upper),
            })?;
        Frame::from_field(self.samples.map(|f| s_inv.apply_unchecked(f)))
    }

    /// `‖T_F T_G* − I‖` in operator norm.
    pub fn dual_residual(&self, g: &Frame) -> Result<f64> {
        self.check_compatible(g)?;
        let id = ModuleOperator::identity(self.shape(), self.rank());
        Ok(self.mixed_operator(g).sub(&id)?.norm())
    }

    pub fn is_dual(&self, g: &Frame, tol: f64) -> Result<bool> {
        Ok(self.dual_residual(g)? <= tol)
    }

    /// `Σ_j w_j ⟨f, G_j⟩ F_j`.
    pub fn reconstruct(&self, g: &Frame, f: &ModuleVector) -> Result<ModuleVector> {
        self.check_compatible(g)?;
        self.synthesis(&g.analysis(f)?)
    }

    /// No nonzero `f` has `⟨f, F(ω)⟩ = 0` at every node.
    pub fn mu_complete(&self, tol: f64) -> Result<bool> {
        self.is_frame(tol)
    }

    /// A nonzero `φ` with `T_F φ = 0`, if synthesis is not injective.
    pub fn l2_kernel_witness(&self, tol: f64) -> Result<Option<SampledField<AlgebraElement>>> {
        self.gram_operator().kernel_witness(tol)
    }

    pub fn l2_independent(&self, tol: f64) -> Result<bool> {
        Ok(self.l2_kernel_witness(tol)?.is_none())
    }

    /// Riesz constants `(λ_min(V), λ_max(V))` when `F` is μ-complete and
    /// L²-independent.
    pub fn riesz_bounds(&self, tol: f64) -> Result<Option<RieszBounds>> {
        if !(self.mu_complete(tol)? && self.l2_independent(tol)?) {
            return Ok(None);
        }
        let spec = self.gram_operator().spectrum()?;
        Ok(Some(RieszBounds {
            lower: spec.first().copied().unwrap_or(0.0),
            upper: spec.last().copied().unwrap_or(0.0),
        }))
    }

    pub fn is_riesz(&self, tol: f64) -> Result<bool> {
        Ok(self.riesz_bounds(tol)?.is_some())
    }

    /// Surjectivity of the analysis operator, decided by a pivoted LDL*
    /// elimination of the Gram operator rather than its spectrum.
    pub fn is_riesz_type(&self, tol: f64) -> Result<bool> {
        self.require_frame(tol)?;
        let gram = self.gram_operator().hermitian_form().to_algebra_element();
        Ok(gram.blocks().iter().all(|b| {
            let max_diag = (0..b.rows()).map(|i| b[(i, i)].re).fold(0.0, f64::max);
            linalg::min_pivot_hermitian(b) > threshold(tol, max_diag)
        }))
    }

    /// `G_j = (S^{-1}F)_j + ψ_j* · u`. A dual of `F` whenever `T_F ψ = 0`.
    pub fn dual_from_kernel(
        &self,
        psi: &SampledField<AlgebraElement>,
        u: &ModuleVector,
    ) -> Result<Frame> {
        psi.check_space(self.space())?;
        self.check_vector(u)?;
        let canonical = self.canonical_dual()?;
        let values = canonical
            .samples
            .values()
            .iter()
            .zip(psi.values())
            .map(|(g, p)| g + &u.left_mul(&p.star()))
            .collect();
        Frame::new(self.space().clone(), values)
    }

    /// A dual other than the canonical one, or `None` when the dual is unique.
    pub fn non_canonical_dual(&self, tol: f64) -> Result<Option<Frame>> {
        self.require_frame(tol)?;
        let Some(psi) = self.l2_kernel_witness(tol)? else {
            return Ok(None);
        };
        let e1 = ModuleVector::basis(self.shape(), self.rank(), 0);
        let correction = psi.map(|p| e1.left_mul(&p.star()));
        let scale = correction.l2_norm();
        if scale == 0.0 {
            return Ok(None);
        }
        let u = e1.scale(Complex64::new(1.0 / scale, 0.0));
        self.dual_from_kernel(&psi, &u).map(Some)
    }

    /// Every single-atom removal leaves a map that is not a frame.
    pub fn is_exact(&self, tol: f64) -> Result<bool> {
        if !self.space().is_atomic() {
            return Err(Error::ExactnessUndecidable);
        }
        self.require_frame(tol)?;
        for j in 0..self.len() {
            match self.restrict(&[j]) {
                Ok(rest) => {
                    if rest.is_frame(tol)? {
                        return Ok(false);
                    }
                }
                Err(Error::EmptyRestriction) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(true)
    }

    /// `K = (T_G T_F*)^{-1}`, so that `G = S_G K* F`.
    pub fn riesz_link_operator(&self, g: &Frame, tol: f64) -> Result<ModuleOperator> {
        self.check_compatible(g)?;
        if !self.is_riesz(tol)? {
            return Err(Error::NotRiesz("first frame".into()));
        }
        if !g.is_riesz(tol)? {
            return Err(Error::NotRiesz("second frame".into()));
        }
        g.mixed_operator(self).invert()
    }

    /// Runs every diagnostic and cross-checks the equivalences that must hold.
    pub fn diagnose(&self, tol: f64) -> Result<FrameDiagnostics> {
        let bounds = self.frame_bounds()?;
        let mut notes = Vec::new();
        let frame = bounds.lower > threshold(tol, bounds.upper);
        let tight = frame && (bounds.upper - bounds.lower).abs() <= threshold(tol, bounds.upper);
        let mu_complete = frame;
        let witness = self.l2_kernel_witness(tol)?;
        let l2_independent = witness.is_none();
        let riesz_bounds = self.riesz_bounds(tol)?;
        let riesz = riesz_bounds.is_some();

        let mut riesz_type = false;
        let mut exact = Some(false);
        let mut reconstruction_residual = None;
        let mut dual_witness_distance = None;

        if frame {
            riesz_type = self.is_riesz_type(tol)?;
            if riesz_type != riesz {
                notes.push(format!(
                    "cross-check failed: riesz={riesz} but riesz_type={riesz_type}"
                ));
            }
            exact = match self.is_exact(tol) {
                Ok(e) => Some(e),
                Err(Error::ExactnessUndecidable) => {
                    notes.push("exactness: not decidable under quadrature".into());
                    None
                }
                Err(e) => return Err(e),
            };
            if riesz && exact == Some(false) {
                notes.push("cross-check failed: riesz basis is not exact".into());
            }
            let canonical = self.canonical_dual()?;
            reconstruction_residual = Some(self.dual_residual(&canonical)?);
            match self.non_canonical_dual(tol)? {
                Some(g) => {
                    let d = g.samples.sub(&canonical.samples)?.l2_norm();
                    dual_witness_distance = Some(d);
                    let valid = self.is_dual(&g, 1e-9)?;
                    notes.push(format!(
                        "non-canonical dual witness found (sampled distance {d:.3e}, valid dual: {valid})"
                    ));
                }
                None => notes.push("dual is unique".into()),
            }
        } else {
            notes.push("not a frame: riesz-type, exactness and duals not evaluated".into());
        }

        Ok(FrameDiagnostics {
            bounds,
            flags: DiagnosticFlags {
                bessel: bounds.upper.is_finite(),
                frame,
                tight,
                mu_complete,
                l2_independent,
                riesz,
                riesz_type,
                exact,
            },
            riesz_bounds,
            reconstruction_residual,
            dual_witness_distance,
            notes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::QuadratureRule;

    const TOL: f64 = DEFAULT_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s1() -> AlgebraShape {
        AlgebraShape::scalar()
    }

    fn sv(zs: &[f64]) -> ModuleVector {
        ModuleVector::new(
            s1(),
            zs.iter()
                .map(|&z| AlgebraElement::scalar(&s1(), c(z, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    fn atoms(n: usize) -> MeasureSpace {
        MeasureSpace::atomic((0..n).map(|j| j as f64).collect(), vec![1.0; n]).unwrap()
    }

    fn scalar_frame(values: &[&[f64]]) -> Frame {
        Frame::new(atoms(values.len()), values.iter().map(|v| sv(v)).collect()).unwrap()
    }

    fn scalar_field(space: &MeasureSpace, zs: &[f64]) -> SampledField<AlgebraElement> {
        SampledField::new(
            space.clone(),
            zs.iter()
                .map(|&z| AlgebraElement::scalar(&s1(), c(z, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    /// F(ω) = √3 ω · 1 over diag(x, y), rank 1, Lebesgue measure on [0, 1].
    fn example_frame(m: usize) -> Frame {
        let shape = AlgebraShape::new(vec![1, 1]).unwrap();
        let space = MeasureSpace::interval(0.0, 1.0, QuadratureRule::GaussLegendre, m).unwrap();
        let field = SampledField::from_fn(space, |w| {
            ModuleVector::new(
                shape.clone(),
                vec![AlgebraElement::scalar(&shape, c(3f64.sqrt() * w, 0.0))],
            )
            .unwrap()
        })
        .unwrap();
        Frame::from_field(field).unwrap()
    }

    #[test]
    fn synthesis_examples() {
        let f = scalar_frame(&[&[1.0], &[1.0]]);
        let zero = SampledField::zero(f.space().clone(), &s1());
        assert_eq!(f.synthesis(&zero).unwrap().norm(), 0.0);
        let phi = scalar_field(f.space(), &[1.0, -1.0]);
        assert_eq!(f.synthesis(&phi).unwrap().norm(), 0.0);

        let e = ModuleVector::basis(&s1(), 2, 1);
        let one = Frame::new(atoms(1), vec![e.clone()]).unwrap();
        let a = AlgebraElement::scalar(&s1(), c(2.0, -1.0));
        let phi = SampledField::constant(atoms(1), a.clone());
        assert_eq!(one.synthesis(&phi).unwrap(), e.left_mul(&a));

        assert!(matches!(f.synthesis(&phi), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn analysis_examples() {
        let e = ModuleVector::basis(&s1(), 1, 0);
        let one = Frame::new(atoms(1), vec![e.clone()]).unwrap();
        assert_eq!(
            one.analysis(&ModuleVector::zero(&s1(), 1))
                .unwrap()
                .l2_norm(),
            0.0
        );
        assert_eq!(
            one.analysis(&e).unwrap(),
            SampledField::constant(atoms(1), AlgebraElement::one(&s1()))
        );

        // ⟨f, F(ω)⟩ = √3 ω · diag(a, b) for f = diag(a, b)
        let ex = example_frame(4);
        let shape = ex.shape().clone();
        let (a, b) = (c(1.0, 2.0), c(-0.5, 0.25));
        let f = ModuleVector::new(
            shape.clone(),
            vec![AlgebraElement::from_block_scalars(&shape, &[a, b]).unwrap()],
        )
        .unwrap();
        let vals = ex.analysis(&f).unwrap();
        for (j, &w) in ex.space().nodes().iter().enumerate() {
            let expected = AlgebraElement::from_block_scalars(
                &shape,
                &[a * 3f64.sqrt() * w, b * 3f64.sqrt() * w],
            )
            .unwrap();
            assert!((vals.value(j) - &expected).norm() < 1e-15);
        }
    }

    #[test]
    fn frame_operator_examples() {
        let one = Frame::new(atoms(1), vec![sv(&[1.0])]).unwrap();
        assert_eq!(one.frame_operator(), ModuleOperator::identity(&s1(), 1));
        let ex = example_frame(16);
        let resid = ex
            .frame_operator()
            .sub(&ModuleOperator::identity(ex.shape(), 1))
            .unwrap()
            .norm();
        assert!(resid < 1e-12);
        let two = scalar_frame(&[&[1.0], &[1.0]]);
        assert_eq!(
            two.frame_operator(),
            ModuleOperator::identity(&s1(), 1).scale(c(2.0, 0.0))
        );
    }

    #[test]
    fn gram_operator_examples() {
        let one = Frame::new(atoms(1), vec![sv(&[1.0])]).unwrap();
        assert_eq!(
            one.gram_operator().coefficients(),
            &ModuleOperator::identity(&s1(), 1)
        );
        let two = scalar_frame(&[&[1.0], &[1.0]]);
        let v = two.gram_operator();
        for j in 0..2 {
            for l in 0..2 {
                assert_eq!(v.coefficients().coeff(j, l), &AlgebraElement::one(&s1()));
            }
        }
        let phi = scalar_field(two.space(), &[2.0, 3.0]);
        assert_eq!(
            v.apply(&phi).unwrap(),
            scalar_field(two.space(), &[5.0, 5.0])
        );
    }

    #[test]
    fn bounds_examples() {
        let b = example_frame(16).frame_bounds().unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        let b = Frame::new(atoms(1), vec![sv(&[1.0])])
            .unwrap()
            .frame_bounds()
            .unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let b = scalar_frame(&[&[1.0], &[1.0]]).frame_bounds().unwrap();
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
    }

    #[test]
    fn frame_predicates() {
        let ex = example_frame(16);
        assert!(ex.is_bessel().unwrap() && ex.is_frame(TOL).unwrap() && ex.is_tight(TOL).unwrap());
        let deficient = Frame::new(atoms(1), vec![sv(&[1.0, 0.0])]).unwrap();
        assert!(!deficient.is_frame(TOL).unwrap());
        assert_eq!(deficient.frame_bounds().unwrap().lower, 0.0);
        let zero = scalar_frame(&[&[0.0], &[0.0]]);
        assert!(
            zero.is_bessel().unwrap()
                && !zero.is_frame(TOL).unwrap()
                && !zero.is_tight(TOL).unwrap()
        );
    }

    #[test]
    fn canonical_dual_examples() {
        let ex = example_frame(16);
        let g = ex.canonical_dual().unwrap();
        for j in 0..ex.len() {
            assert!((ex.sample(j) - g.sample(j)).norm() < 1e-12);
        }
        let f = Frame::new(atoms(1), vec![sv(&[2.0])]).unwrap();
        assert_eq!(f.canonical_dual().unwrap().sample(0), &sv(&[0.5]));
        let deficient = Frame::new(atoms(1), vec![sv(&[1.0, 0.0])]).unwrap();
        assert!(matches!(
            deficient.canonical_dual(),
            Err(Error::NotAFrame { .. })
        ));
    }

    #[test]
    fn is_dual_examples() {
        let f = scalar_frame(&[&[1.0], &[1.0]]);
        assert!(f.is_dual(&f.canonical_dual().unwrap(), TOL).unwrap());
        let g = scalar_frame(&[&[1.0], &[0.0]]);
        assert!(f.is_dual(&g, TOL).unwrap() && g.is_dual(&f, TOL).unwrap());
        assert!(!f.is_dual(&f, TOL).unwrap());
        assert!((f.dual_residual(&f).unwrap() - 1.0).abs() < 1e-15);
        let zero = scalar_frame(&[&[0.0], &[0.0]]);
        assert!(!f.is_dual(&zero, TOL).unwrap());
        assert!(f
            .is_dual(&Frame::new(atoms(1), vec![sv(&[1.0])]).unwrap(), TOL)
            .is_err());
    }

    #[test]
    fn reconstruct_examples() {
        let ex = example_frame(16);
        let shape = ex.shape().clone();
        assert_eq!(
            ex.reconstruct(&ex, &ModuleVector::zero(&shape, 1))
                .unwrap()
                .norm(),
            0.0
        );
        let f = ModuleVector::new(
            shape.clone(),
            vec![AlgebraElement::from_block_scalars(&shape, &[c(0.3, -1.7), c(2.5, 0.4)]).unwrap()],
        )
        .unwrap();
        assert!((&ex.reconstruct(&ex, &f).unwrap() - &f).norm() < 1e-10);

        let two = scalar_frame(&[&[1.0], &[1.0]]);
        let x = sv(&[1.5]);
        assert_eq!(two.reconstruct(&two, &x).unwrap(), sv(&[3.0]));
    }

    #[test]
    fn mu_complete_examples() {
        assert!(example_frame(16).mu_complete(TOL).unwrap());
        assert!(!Frame::new(atoms(1), vec![sv(&[1.0, 0.0])])
            .unwrap()
            .mu_complete(TOL)
            .unwrap());
        assert!(!scalar_frame(&[&[0.0, 0.0]]).mu_complete(TOL).unwrap());
    }

    #[test]
    fn l2_independent_examples() {
        assert!(Frame::new(atoms(1), vec![sv(&[1.0])])
            .unwrap()
            .l2_independent(TOL)
            .unwrap());
        let two = scalar_frame(&[&[1.0], &[1.0]]);
        let w = two.l2_kernel_witness(TOL).unwrap().expect("kernel");
        assert!(two.synthesis(&w).unwrap().norm() < 1e-14);
        let (a, b) = (w.value(0).block(0)[(0, 0)], w.value(1).block(0)[(0, 0)]);
        assert!((a + b).norm() < 1e-14 && a.norm() > 0.5);

        let ex = example_frame(16);
        let w = ex
            .l2_kernel_witness(TOL)
            .unwrap()
            .expect("overcomplete discretization");
        assert!(ex.synthesis(&w).unwrap().norm() < 1e-12);
        assert!((w.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn riesz_examples() {
        let one = Frame::new(atoms(1), vec![sv(&[1.0])]).unwrap();
        assert_eq!(
            one.riesz_bounds(TOL).unwrap(),
            Some(RieszBounds {
                lower: 1.0,
                upper: 1.0
            })
        );
        assert!(!scalar_frame(&[&[1.0], &[1.0]]).is_riesz(TOL).unwrap());
        let ortho = scalar_frame(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let rb = ortho.riesz_bounds(TOL).unwrap().unwrap();
        assert!((rb.lower - 1.0).abs() < 1e-15 && (rb.upper - 1.0).abs() < 1e-15);
        assert!(!example_frame(16).is_riesz(TOL).unwrap());
    }

    #[test]
    fn riesz_type_examples() {
        assert!(scalar_frame(&[&[1.0, 0.0], &[0.0, 1.0]])
            .is_riesz_type(TOL)
            .unwrap());
        let two = scalar_frame(&[&[1.0], &[1.0]]);
        assert!(!two.is_riesz_type(TOL).unwrap());
        assert!(two.non_canonical_dual(TOL).unwrap().is_some());
        assert!(!example_frame(24).is_riesz_type(TOL).unwrap());
        assert!(matches!(
            scalar_frame(&[&[0.0]]).is_riesz_type(TOL),
            Err(Error::NotAFrame { .. })
        ));
    }

    #[test]
    fn non_canonical_dual_examples() {
        assert!(scalar_frame(&[&[1.0, 0.0], &[0.0, 1.0]])
            .non_canonical_dual(TOL)
            .unwrap()
            .is_none());

        let two = scalar_frame(&[&[1.0], &[1.0]]);
        let canon = two.canonical_dual().unwrap();
        assert_eq!(canon, scalar_frame(&[&[0.5], &[0.5]]));
        let psi = scalar_field(two.space(), &[1.0, -1.0]);
        let g = two.dual_from_kernel(&psi, &sv(&[0.5])).unwrap();
        assert_eq!(g, scalar_frame(&[&[1.0], &[0.0]]));
        assert!(two.is_dual(&g, TOL).unwrap());

        let g = two.non_canonical_dual(TOL).unwrap().unwrap();
        assert!(two.is_dual(&g, 1e-12).unwrap());
        let d = g.samples().sub(canon.samples()).unwrap().l2_norm();
        assert!((d - 1.0).abs() < 1e-12);

        assert!(scalar_frame(&[&[0.0]]).non_canonical_dual(TOL).is_err());
    }

    #[test]
    fn exact_examples() {
        assert!(scalar_frame(&[&[1.0, 0.0], &[0.0, 1.0]])
            .is_exact(TOL)
            .unwrap());
        assert!(!scalar_frame(&[&[1.0], &[1.0]]).is_exact(TOL).unwrap());
        assert!(Frame::new(atoms(1), vec![sv(&[1.0])])
            .unwrap()
            .is_exact(TOL)
            .unwrap());
        assert_eq!(
            example_frame(4).is_exact(TOL),
            Err(Error::ExactnessUndecidable)
        );
    }

    #[test]
    fn exact_but_not_riesz_over_matrix_algebra() {
        // diag(1,0) and diag(0,1) in M_2 as a rank-1 module: S = I, but V is 2x2 over M_2.
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let e = |d: [f64; 4]| {
            ModuleVector::new(
                shape.clone(),
                vec![
                    AlgebraElement::from_pairs(&shape, &[d.iter().map(|&x| [x, 0.0]).collect()])
                        .unwrap(),
                ],
            )
            .unwrap()
        };
        let f = Frame::new(
            atoms(2),
            vec![e([1.0, 0.0, 0.0, 0.0]), e([0.0, 0.0, 0.0, 1.0])],
        )
        .unwrap();
        assert!(f.is_tight(TOL).unwrap());
        assert!(f.is_exact(TOL).unwrap());
        assert!(!f.is_riesz(TOL).unwrap());
        assert!(!f.is_riesz_type(TOL).unwrap());
    }

    #[test]
    fn link_operator_examples() {
        let f = Frame::new(atoms(1), vec![sv(&[1.0])]).unwrap();
        let g = Frame::new(atoms(1), vec![sv(&[2.0])]).unwrap();
        let k = f.riesz_link_operator(&g, TOL).unwrap();
        assert_eq!(k.coeff(0, 0), &AlgebraElement::scalar(&s1(), c(0.5, 0.0)));
        let s_g = g.frame_operator();
        assert_eq!(s_g.coeff(0, 0), &AlgebraElement::scalar(&s1(), c(4.0, 0.0)));
        let rebuilt = s_g.apply(&k.adjoint().apply(f.sample(0)).unwrap()).unwrap();
        assert_eq!(&rebuilt, g.sample(0));

        let ortho = scalar_frame(&[&[2.0, 0.5], &[0.0, 1.0]]);
        let k = ortho.riesz_link_operator(&ortho, TOL).unwrap();
        let s_inv = ortho.frame_operator().invert().unwrap();
        assert!(k.sub(&s_inv).unwrap().norm() < 1e-12);

        let two = scalar_frame(&[&[1.0], &[1.0]]);
        assert!(matches!(
            two.riesz_link_operator(&two, TOL),
            Err(Error::NotRiesz(_))
        ));
    }

    #[test]
    fn diagnose_examples() {
        let d = example_frame(16).diagnose(TOL).unwrap();
        assert!(d.flags.frame && d.flags.tight);
        assert!((d.bounds.lower - 1.0).abs() < 1e-12 && (d.bounds.upper - 1.0).abs() < 1e-12);
        assert!(d.reconstruction_residual.unwrap() <= 1e-10);
        assert_eq!(d.flags.exact, None);
        assert!(d
            .notes
            .iter()
            .any(|n| n.contains("not decidable under quadrature")));

        let d = scalar_frame(&[&[1.0], &[1.0]]).diagnose(TOL).unwrap();
        assert!(d.flags.frame && !d.flags.riesz && !d.flags.riesz_type);
        assert_eq!(d.flags.exact, Some(false));
        assert!(d.dual_witness_distance.is_some());

        let d = scalar_frame(&[&[0.0], &[0.0]]).diagnose(TOL).unwrap();
        assert!(!d.flags.frame && !d.flags.riesz && !d.flags.riesz_type && !d.flags.mu_complete);
        assert_eq!(d.flags.exact, Some(false));
        assert_eq!(d.reconstruction_residual, None);
    }
}
