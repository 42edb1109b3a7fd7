//! Executable versions of the structural results about frames and Riesz
//! bases, checked on concrete instances.
//!
//! Each check returns `Some(detail)` when the instance violates it. The suite
//! is shared by the `verify-theorems` command and the acceptance tests.

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::Result;
use crate::frame_ops::{threshold, Frame};
use crate::linalg::CMatrix;
use crate::measure::SampledField;
use crate::module::ModuleOperator;
use crate::random;

/// Invariant names, in the order they are checked.
pub const INVARIANTS: &[&str] = &[
    "factorization",
    "frame-inequality",
    "cauchy-schwarz",
    "sandwich-tt-star",
    "sandwich-t-star-t",
    "kernel-range-decomposition",
    "equivalence-chain",
    "riesz-implies-exact",
    "dual-symmetry",
    "reconstruction",
    "canonical-dual-bounds",
    "riesz-bounds",
    "non-canonical-dual",
    "link-operator",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

type Check = Result<Option<String>>;

fn fail(detail: String) -> Check {
    Ok(Some(detail))
}

fn field_dist(a: &SampledField<AlgebraElement>, b: &SampledField<AlgebraElement>) -> Result<f64> {
    Ok(a.sub(b)?.l2_norm())
}

/// `S = T T*` and `V = T* T` on random inputs.
pub fn check_factorization<R: Rng>(f: &Frame, rng: &mut R) -> Check {
    let v = random::random_vector(rng, f.shape(), f.rank());
    let direct = f.frame_operator().apply(&v)?;
    let composed = f.synthesis(&f.analysis(&v)?)?;
    let err = (&direct - &composed).norm();
    if err > 1e-10 * (1.0 + direct.norm()) {
        return fail(format!("|S f - T T* f| = {err:.3e}"));
    }
    let phi = random::random_field(rng, f.space(), f.shape());
    let direct = f.gram_operator().apply(&phi)?;
    let composed = f.analysis(&f.synthesis(&phi)?)?;
    let err = field_dist(&direct, &composed)?;
    if err > 1e-10 * (1.0 + direct.l2_norm()) {
        return fail(format!("|V phi - T* T phi| = {err:.3e}"));
    }
    Ok(None)
}

/// `A⟨f,f⟩ ≤ Σ_j w_j ⟨f,F_j⟩⟨F_j,f⟩ ≤ B⟨f,f⟩` with the computed bounds.
pub fn check_frame_inequality<R: Rng>(f: &Frame, rng: &mut R, tol: f64) -> Check {
    let b = f.frame_bounds()?;
    let v = random::random_vector(rng, f.shape(), f.rank());
    let coeffs = f.analysis(&v)?;
    let middle = coeffs.l2_inner(&coeffs)?;
    let ff = v.inner(&v)?;
    if !ff.scale_real(b.lower).leq(&middle, tol)? {
        return fail(format!("lower bound {} violated", b.lower));
    }
    if !middle.leq(&ff.scale_real(b.upper), tol)? {
        return fail(format!("upper bound {} violated", b.upper));
    }
    Ok(None)
}

/// `‖⟨f,g⟩‖² ≤ ‖⟨f,f⟩‖‖⟨g,g⟩‖` and the order form `⟨f,g⟩⟨g,f⟩ ≤ ‖⟨g,g⟩‖⟨f,f⟩`.
pub fn check_cauchy_schwarz<R: Rng>(
    shape: &AlgebraShape,
    rank: usize,
    rng: &mut R,
    tol: f64,
) -> Check {
    let f = random::random_vector(rng, shape, rank);
    let g = random::random_vector(rng, shape, rank);
    let fg = f.inner(&g)?;
    let ff = f.inner(&f)?;
    let gg = g.inner(&g)?;
    let lhs = fg.norm().powi(2);
    let rhs = ff.norm() * gg.norm();
    if lhs > rhs + 1e-10 * (1.0 + rhs) {
        return fail(format!("|<f,g>|^2 = {lhs:.6e} > {rhs:.6e}"));
    }
    let outer = &fg * &fg.star();
    if !outer.leq(&ff.scale_real(gg.norm()), tol)? {
        return fail("<f,g><g,f> <= |<g,g>| <f,f> violated".into());
    }
    Ok(None)
}

fn sandwich(op: &ModuleOperator, t_norm_sq: f64, tol: f64) -> Check {
    let inv = op.invert()?;
    let lower = 1.0 / inv.norm();
    let a = op.to_algebra_element();
    let one = AlgebraElement::one(a.shape());
    if !one.scale_real(lower).leq(&a, tol)? {
        return fail(format!("|X^-1|^-1 = {lower:.6e} is not below X"));
    }
    if !a.leq(&one.scale_real(t_norm_sq), tol)? {
        return fail(format!("X is not below |T|^2 = {t_norm_sq:.6e}"));
    }
    Ok(None)
}

/// `‖(TT*)^{-1}‖^{-1} ≤ TT* ≤ ‖T‖²` for frames, with `‖T‖²` taken from the
/// Gram spectrum rather than from `TT*`.
pub fn check_sandwich_tt_star(f: &Frame, tol: f64) -> Check {
    if !f.is_frame(tol)? {
        return Ok(None);
    }
    let gram = f.gram_operator().spectrum()?;
    sandwich(&f.frame_operator(), *gram.last().expect("non-empty"), tol)
}

/// `‖(T*T)^{-1}‖^{-1} ≤ T*T ≤ ‖T‖²` when synthesis is injective, with
/// `‖T‖²` taken from the frame operator.
pub fn check_sandwich_t_star_t(f: &Frame, tol: f64) -> Check {
    if !f.l2_independent(tol)? {
        return Ok(None);
    }
    let s = f.frame_bounds()?;
    sandwich(f.gram_operator().hermitian_form(), s.upper, tol)
}

/// Moore–Penrose pseudo-inverse of a positive operator.
fn positive_pseudo_inverse(op: &ModuleOperator, tol: f64) -> Result<ModuleOperator> {
    let a = op.to_algebra_element();
    let eig = a.hermitian_eigen()?;
    let lambda_max = eig.iter().map(|e| e.max()).fold(0.0, f64::max);
    let cut = threshold(tol, lambda_max);
    let blocks = eig
        .iter()
        .map(|e| {
            let d: Vec<_> = e
                .values
                .iter()
                .map(|&l| num_complex::Complex64::new(if l > cut { 1.0 / l } else { 0.0 }, 0.0))
                .collect();
            e.vectors
                .mul(&CMatrix::from_diagonal(&d))
                .mul(&e.vectors.adjoint())
        })
        .collect();
    let pinv = AlgebraElement::new(a.shape().clone(), blocks)?;
    ModuleOperator::from_algebra_element(op.shape(), op.rank(), &pinv)
}

/// `φ = p + q` with `p ∈ ker T`, `q ∈ range T*`, and `⟨p, q⟩ = 0`.
pub fn check_kernel_range<R: Rng>(f: &Frame, rng: &mut R, tol: f64) -> Check {
    let phi = random::random_field(rng, f.space(), f.shape());
    let s_pinv = positive_pseudo_inverse(&f.frame_operator(), tol)?;
    let q = f.analysis(&s_pinv.apply(&f.synthesis(&phi)?)?)?;
    let p = phi.sub(&q)?;
    let scale = 1.0 + phi.l2_norm() * (1.0 + f.frame_bounds()?.upper.sqrt());
    let tp = f.synthesis(&p)?.norm();
    if tp > 1e-9 * scale {
        return fail(format!("|T p| = {tp:.3e}"));
    }
    let cross = p.l2_inner(&q)?.norm();
    if cross > 1e-9 * scale * scale {
        return fail(format!("|<p, q>| = {cross:.3e}"));
    }
    Ok(None)
}

/// riesz ⇔ (μ-complete ∧ L²-independent) ⇔ riesz-type ⇔ unique dual.
pub fn check_equivalence_chain(f: &Frame, tol: f64) -> Check {
    let riesz = f.is_riesz(tol)?;
    let complete_independent = f.mu_complete(tol)? && f.l2_independent(tol)?;
    if !f.is_frame(tol)? {
        if riesz || complete_independent {
            return fail("non-frame reported as Riesz".into());
        }
        return Ok(None);
    }
    let riesz_type = f.is_riesz_type(tol)?;
    let unique_dual = f.non_canonical_dual(tol)?.is_none();
    if !(riesz == complete_independent && riesz == riesz_type && riesz == unique_dual) {
        return fail(format!(
            "riesz={riesz} complete&independent={complete_independent} riesz_type={riesz_type} unique_dual={unique_dual}"
        ));
    }
    Ok(None)
}

pub fn check_riesz_implies_exact(f: &Frame, tol: f64) -> Check {
    if !f.space().is_atomic() || !f.is_riesz(tol)? {
        return Ok(None);
    }
    if !f.is_exact(tol)? {
        return fail("Riesz basis is not exact".into());
    }
    Ok(None)
}

pub fn check_dual_symmetry<R: Rng>(f: &Frame, rng: &mut R, tol: f64) -> Check {
    if !f.is_frame(tol)? {
        return Ok(None);
    }
    let mut candidates = vec![f.canonical_dual()?];
    if let Some(g) = f.non_canonical_dual(tol)? {
        candidates.push(g);
    }
    candidates.push(random::random_frame_on(
        rng,
        f.space(),
        f.rank(),
        f.shape(),
    )?);
    for g in &candidates {
        let fg = f.is_dual(g, 1e-9)?;
        let gf = g.is_dual(f, 1e-9)?;
        if fg != gf {
            return fail(format!("is_dual(F,G)={fg} but is_dual(G,F)={gf}"));
        }
    }
    if !f.is_dual(&candidates[0], 1e-9)? {
        return fail("canonical dual is not a dual".into());
    }
    Ok(None)
}

pub fn check_reconstruction<R: Rng>(f: &Frame, rng: &mut R, tol: f64, vectors: usize) -> Check {
    if !f.is_frame(tol)? {
        return Ok(None);
    }
    let g = f.canonical_dual()?;
    for _ in 0..vectors {
        let v = random::random_vector(rng, f.shape(), f.rank());
        let err = (&v - &f.reconstruct(&g, &v)?).norm();
        if err > 1e-8 * (1.0 + v.norm()) {
            return fail(format!("reconstruction error {err:.3e}"));
        }
    }
    Ok(None)
}

/// The canonical dual has bounds `(1/B, 1/A)`.
pub fn check_canonical_dual_bounds(f: &Frame, tol: f64) -> Check {
    if !f.is_frame(tol)? {
        return Ok(None);
    }
    let b = f.frame_bounds()?;
    let d = f.canonical_dual()?.frame_bounds()?;
    let (lo, hi) = (1.0 / b.upper, 1.0 / b.lower);
    if (d.lower - lo).abs() > 1e-8 * lo || (d.upper - hi).abs() > 1e-8 * hi {
        return fail(format!(
            "dual bounds ({:.9e}, {:.9e}) vs ({lo:.9e}, {hi:.9e})",
            d.lower, d.upper
        ));
    }
    Ok(None)
}

/// `A_r ‖∫_{Ω₁}|φ*|²‖ ≤ ‖∫_{Ω₁} φF‖² ≤ B_r ‖∫_{Ω₁}|φ*|²‖` for a random φ and Ω₁.
pub fn check_riesz_bounds<R: Rng>(f: &Frame, rng: &mut R, tol: f64) -> Check {
    let Some(rb) = f.riesz_bounds(tol)? else {
        return Ok(None);
    };
    let phi = random::random_field(rng, f.space(), f.shape());
    let subset: Vec<usize> = (0..f.len()).filter(|_| rng.gen_bool(0.5)).collect();
    let chi = SampledField::indicator(f.space().clone(), f.shape(), &subset)?;
    let restricted = phi.pointwise_mul(&chi)?;
    let image = f.synthesis(&restricted)?.norm().powi(2);
    let mass = restricted.l2_inner(&restricted)?.norm();
    let slack = 1e-9 * (1.0 + image);
    if rb.lower * mass > image + slack || image > rb.upper * mass + slack {
        return fail(format!(
            "{:.6e} * {mass:.6e} <= {image:.6e} <= {:.6e} * {mass:.6e} fails",
            rb.lower, rb.upper
        ));
    }
    Ok(None)
}

pub fn check_non_canonical_dual(f: &Frame, tol: f64) -> Check {
    if !f.is_frame(tol)? || f.is_riesz_type(tol)? {
        return Ok(None);
    }
    let Some(g) = f.non_canonical_dual(tol)? else {
        return fail("non-Riesz frame without a second dual".into());
    };
    let residual = f.dual_residual(&g)?;
    if residual > 1e-9 {
        return fail(format!("witness dual residual {residual:.3e}"));
    }
    let d = g.samples().sub(f.canonical_dual()?.samples())?.l2_norm();
    if d < 1e-3 {
        return fail(format!("witness only {d:.3e} from the canonical dual"));
    }
    Ok(None)
}

/// `G_j = S_G K* F_j` for a second Riesz basis `G` on the same space.
pub fn check_link_with(f: &Frame, g: &Frame, tol: f64) -> Check {
    let k = f.riesz_link_operator(g, tol)?;
    let s_g = g.frame_operator();
    let k_star = k.adjoint();
    for j in 0..f.len() {
        let rebuilt = s_g.apply(&k_star.apply(f.sample(j))?)?;
        let err = (&rebuilt - g.sample(j)).norm();
        if err > 1e-8 * (1.0 + g.sample(j).norm()) {
            return fail(format!("node {j}: |G_j - S_G K* F_j| = {err:.3e}"));
        }
    }
    Ok(None)
}

pub fn check_link_operator<R: Rng>(f: &Frame, rng: &mut R, tol: f64) -> Check {
    if !f.is_riesz(tol)? {
        return Ok(None);
    }
    for _ in 0..random::MAX_REJECTION_ATTEMPTS {
        let g = random::random_frame_on(rng, f.space(), f.rank(), f.shape())?;
        if g.gram_operator().spectrum()?[0] >= random::RIESZ_MIN_GRAM_EIGENVALUE {
            return check_link_with(f, &g, tol);
        }
    }
    fail("could not draw a second Riesz basis".into())
}

/// Runs the whole suite on one instance.
pub fn check_instance<R: Rng>(f: &Frame, rng: &mut R, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut record = |name: &'static str, r: Check| match r {
        Ok(None) => {}
        Ok(Some(detail)) => out.push(Violation {
            invariant: name,
            detail,
        }),
        Err(e) => out.push(Violation {
            invariant: name,
            detail: format!("error: {e}"),
        }),
    };
    record("factorization", check_factorization(f, rng));
    record("frame-inequality", check_frame_inequality(f, rng, tol));
    record(
        "cauchy-schwarz",
        check_cauchy_schwarz(f.shape(), f.rank(), rng, tol),
    );
    record("sandwich-tt-star", check_sandwich_tt_star(f, tol));
    record("sandwich-t-star-t", check_sandwich_t_star_t(f, tol));
    record(
        "kernel-range-decomposition",
        check_kernel_range(f, rng, tol),
    );
    record("equivalence-chain", check_equivalence_chain(f, tol));
    record("riesz-implies-exact", check_riesz_implies_exact(f, tol));
    record("dual-symmetry", check_dual_symmetry(f, rng, tol));
    record("reconstruction", check_reconstruction(f, rng, tol, 3));
    record("canonical-dual-bounds", check_canonical_dual_bounds(f, tol));
    record("riesz-bounds", check_riesz_bounds(f, rng, tol));
    record("non-canonical-dual", check_non_canonical_dual(f, tol));
    record("link-operator", check_link_operator(f, rng, tol));
    out
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub index: usize,
    pub seed: u64,
    pub frame: Option<Frame>,
    pub violations: Vec<Violation>,
}

/// Generates instance `index` from `seed` and checks it.
pub fn run_case(index: usize, seed: u64, tol: f64) -> CaseReport {
    let case_seed = random::derive_seed(seed, index as u64);
    let mut rng = random::rng_from_seed(case_seed);
    match random::random_decidable_frame(&mut rng, tol) {
        Ok(frame) => {
            let violations = check_instance(&frame, &mut rng, tol);
            CaseReport {
                index,
                seed: case_seed,
                frame: Some(frame),
                violations,
            }
        }
        Err(e) => CaseReport {
            index,
            seed: case_seed,
            frame: None,
            violations: vec![Violation {
                invariant: "generation",
                detail: e.to_string(),
            }],
        },
    }
}

/// Runs `cases` instances concurrently; reports come back in case order.
pub fn verify(cases: usize, seed: u64, tol: f64) -> Vec<CaseReport> {
    (0..cases)
        .into_par_iter()
        .map(|i| run_case(i, seed, tol))
        .collect()
}
