//! Seeded random instances for property checks and the `generate` command.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::frame_ops::{threshold, Frame};
use crate::linalg::CMatrix;
use crate::measure::{MeasureSpace, SampledField};
use crate::module::ModuleVector;

/// Cap on the complex dimension `k · Σ n_i²` of generated modules.
pub const MAX_MODULE_DIM: usize = 16;
pub const RIESZ_MIN_GRAM_EIGENVALUE: f64 = 1e-3;
pub const MAX_REJECTION_ATTEMPTS: usize = 10_000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 step; derives independent per-case seeds from one seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_element<R: Rng>(rng: &mut R, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape
        .block_dims()
        .iter()
        .map(|&n| CMatrix::from_fn(n, n, |_, _| complex(rng)))
        .collect();
    AlgebraElement::new(shape.clone(), blocks).expect("blocks follow the shape")
}

pub fn random_vector<R: Rng>(rng: &mut R, shape: &AlgebraShape, rank: usize) -> ModuleVector {
    let entries = (0..rank).map(|_| random_element(rng, shape)).collect();
    ModuleVector::new(shape.clone(), entries).expect("rank >= 1")
}

pub fn random_field<R: Rng>(
    rng: &mut R,
    space: &MeasureSpace,
    shape: &AlgebraShape,
) -> SampledField<AlgebraElement> {
    let values = (0..space.len())
        .map(|_| random_element(rng, shape))
        .collect();
    SampledField::new(space.clone(), values).expect("one value per node")
}

/// Atoms at `0, 1, …, m−1` with weights in `[0.5, 2)`.
pub fn random_atomic_space<R: Rng>(rng: &mut R, atoms: usize) -> Result<MeasureSpace> {
    let nodes = (0..atoms).map(|j| j as f64).collect();
    let weights = (0..atoms).map(|_| rng.gen_range(0.5..2.0)).collect();
    MeasureSpace::atomic(nodes, weights)
}

pub fn random_frame_on<R: Rng>(
    rng: &mut R,
    space: &MeasureSpace,
    rank: usize,
    shape: &AlgebraShape,
) -> Result<Frame> {
    let samples = (0..space.len())
        .map(|_| random_vector(rng, shape, rank))
        .collect();
    Frame::new(space.clone(), samples)
}

pub fn random_atomic_frame<R: Rng>(
    rng: &mut R,
    atoms: usize,
    rank: usize,
    shape: &AlgebraShape,
) -> Result<Frame> {
    let space = random_atomic_space(rng, atoms)?;
    random_frame_on(rng, &space, rank, shape)
}

/// Smallest eigenvalue of the Gram operator relative to `1 + λ_max`.
pub fn relative_gram_gap(frame: &Frame) -> Result<f64> {
    let spec = frame.gram_operator().spectrum()?;
    let (lo, hi) = (spec[0], spec[spec.len() - 1]);
    Ok(lo / (1.0 + hi.abs()))
}

/// Rejection-samples an atomic frame whose Gram operator has
/// `λ_min ≥ RIESZ_MIN_GRAM_EIGENVALUE`. Only `atoms == rank` can succeed.
pub fn random_riesz_frame<R: Rng>(
    rng: &mut R,
    atoms: usize,
    rank: usize,
    shape: &AlgebraShape,
) -> Result<Frame> {
    if atoms != rank {
        return Err(Error::DimensionMismatch(format!(
            "a Riesz basis of A^{rank} needs exactly {rank} atoms, got {atoms}"
        )));
    }
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let f = random_atomic_frame(rng, atoms, rank, shape)?;
        let spec = f.gram_operator().spectrum()?;
        if spec[0] >= RIESZ_MIN_GRAM_EIGENVALUE {
            return Ok(f);
        }
    }
    Err(Error::NotRiesz(format!(
        "no instance with λ_min(V) ≥ {RIESZ_MIN_GRAM_EIGENVALUE} in {MAX_REJECTION_ATTEMPTS} attempts"
    )))
}

const SHAPES: &[&[usize]] = &[&[1], &[1, 1], &[2], &[2, 1], &[1, 1, 1], &[3]];

/// Shape, rank and atom count for a random instance with `k · dim(A) ≤ 16`.
pub fn random_dimensions<R: Rng>(rng: &mut R) -> (AlgebraShape, usize, usize) {
    let dims = SHAPES.choose(rng).expect("non-empty");
    let shape = AlgebraShape::new(dims.to_vec()).expect("valid shape");
    let max_rank = (MAX_MODULE_DIM / shape.dim()).clamp(1, 3);
    let rank = rng.gen_range(1..=max_rank);
    let atoms = rng.gen_range(rank.saturating_sub(1).max(1)..=rank + 2);
    (shape, rank, atoms)
}

/// A random atomic frame map whose frame and Gram spectra stay a decade
/// away from the decision threshold `tol · (1 + λ_max)`. Some samples are
/// zeroed so degenerate maps occur.
pub fn random_decidable_frame<R: Rng>(rng: &mut R, tol: f64) -> Result<Frame> {
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let (shape, rank, atoms) = random_dimensions(rng);
        let space = random_atomic_space(rng, atoms)?;
        let samples = (0..atoms)
            .map(|_| {
                if rng.gen_bool(0.08) {
                    ModuleVector::zero(&shape, rank)
                } else {
                    random_vector(rng, &shape, rank)
                }
            })
            .collect();
        let f = Frame::new(space, samples)?;
        if is_clear_of_boundary(&f, tol)? {
            return Ok(f);
        }
    }
    Err(Error::DimensionMismatch(
        "could not generate a decidable instance".into(),
    ))
}

fn clear(spectrum: &[f64], tol: f64) -> bool {
    let lo = spectrum[0];
    let t = threshold(tol, spectrum[spectrum.len() - 1]);
    !(lo >= t / 10.0 && lo <= 10.0 * t)
}

pub fn is_clear_of_boundary(f: &Frame, tol: f64) -> Result<bool> {
    let s = f.frame_operator().to_algebra_element().spectrum()?;
    let v = f.gram_operator().spectrum()?;
    Ok(clear(&s, tol) && clear(&v, tol))
}
