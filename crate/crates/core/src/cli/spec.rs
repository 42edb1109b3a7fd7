//! The `*.spec` input format: a JSON object describing the algebra, the
//! module rank, the measure and the frame map.
//!
//! ```json
//! {
//!   "algebra": {"block_dims": [1, 1]},
//!   "rank": 1,
//!   "measure": {"kind": "interval", "a": 0, "b": 1, "rule": "gauss-legendre", "m": 16},
//!   "frame": {"family": "polynomial", "coefficients": [
//!     [[[[0, 0]], [[0, 0]]]],
//!     [[[[1.7320508075688772, 0]], [[1.7320508075688772, 0]]]]
//!   ]}
//! }
//! ```
//!
//! A module vector is a list of `rank` algebra elements; an element is a list
//! of blocks; a block is its row-major list of `[re, im]` entries.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::frame_ops::Frame;
use crate::measure::{MeasureKind, MeasureSpace, QuadratureRule, DEFAULT_QUADRATURE_NODES};
use crate::module::ModuleVector;
use crate::report::{canonical_json, sha256_hex};

pub type ElementRepr = Vec<Vec<[f64; 2]>>;
pub type VectorRepr = Vec<ElementRepr>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpecFile {
    pub algebra: AlgebraShape,
    pub rank: usize,
    pub measure: MeasureSpec,
    pub frame: FrameSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

fn gauss_legendre() -> QuadratureRule {
    QuadratureRule::GaussLegendre
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureSpec {
    Atomic {
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
    Interval {
        a: f64,
        b: f64,
        #[serde(default = "gauss_legendre")]
        rule: QuadratureRule,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Polynomial,
}

/// Either `samples` (one module vector per node) or a `family` with its
/// `coefficients`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<VectorRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<VectorRepr>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// An input problem located by line/column or by field path.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub location: String,
    pub message: String,
}

impl SpecError {
    fn at(location: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for SpecError {}

fn element(
    shape: &AlgebraShape,
    repr: &ElementRepr,
    path: &str,
) -> Result<AlgebraElement, SpecError> {
    AlgebraElement::from_pairs(shape, repr).map_err(|e| SpecError::at(path, e))
}

fn vector(
    shape: &AlgebraShape,
    rank: usize,
    repr: &VectorRepr,
    path: &str,
) -> Result<ModuleVector, SpecError> {
    if repr.len() != rank {
        return Err(SpecError::at(
            path,
            format!("expected {rank} entries (the rank), found {}", repr.len()),
        ));
    }
    let entries = repr
        .iter()
        .enumerate()
        .map(|(q, e)| element(shape, e, &format!("{path}[{q}]")))
        .collect::<Result<Vec<_>, _>>()?;
    ModuleVector::new(shape.clone(), entries).map_err(|e| SpecError::at(path, e))
}

fn vector_repr(v: &ModuleVector) -> VectorRepr {
    v.entries().iter().map(AlgebraElement::to_pairs).collect()
}

impl FrameSpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
            SpecError::at(format!("line {}, column {}", e.line(), e.column()), msg)
        })
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }

    /// SHA-256 of the sorted-key compact form; whitespace and key order in
    /// the file do not matter.
    pub fn digest(&self) -> String {
        sha256_hex(canonical_json(self).as_bytes())
    }

    pub fn tol(&self) -> Option<f64> {
        self.tolerances.as_ref().and_then(|t| t.tol)
    }

    /// The measure space, with `quadrature_nodes` replacing the interval
    /// node count when given.
    pub fn measure_space(
        &self,
        quadrature_nodes: Option<usize>,
    ) -> Result<MeasureSpace, SpecError> {
        match &self.measure {
            MeasureSpec::Atomic { nodes, weights } => {
                MeasureSpace::atomic(nodes.clone(), weights.clone())
                    .map_err(|e| SpecError::at("measure", e))
            }
            MeasureSpec::Interval { a, b, rule, m } => {
                let m = quadrature_nodes.or(*m).unwrap_or(DEFAULT_QUADRATURE_NODES);
                MeasureSpace::interval(*a, *b, *rule, m).map_err(|e| SpecError::at("measure", e))
            }
        }
    }

    /// Samples the frame map at the nodes of the measure.
    pub fn build(&self, quadrature_nodes: Option<usize>) -> Result<Frame, SpecError> {
        if self.rank == 0 {
            return Err(SpecError::at("rank", "must be at least 1"));
        }
        let shape = &self.algebra;
        let space = self.measure_space(quadrature_nodes)?;
        let src = &self.frame;
        let samples = match (&src.samples, &src.family, &src.coefficients) {
            (Some(samples), None, None) => {
                if samples.len() != space.len() {
                    return Err(SpecError::at(
                        "frame.samples",
                        format!(
                            "{} samples for {} measure nodes",
                            samples.len(),
                            space.len()
                        ),
                    ));
                }
                samples
                    .iter()
                    .enumerate()
                    .map(|(j, v)| vector(shape, self.rank, v, &format!("frame.samples[{j}]")))
                    .collect::<Result<Vec<_>, _>>()?
            }
            (None, Some(Family::Polynomial), Some(coeffs)) => {
                if coeffs.is_empty() {
                    return Err(SpecError::at(
                        "frame.coefficients",
                        "at least one coefficient is required",
                    ));
                }
                let coeffs = coeffs
                    .iter()
                    .enumerate()
                    .map(|(d, v)| vector(shape, self.rank, v, &format!("frame.coefficients[{d}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                space.nodes().iter().map(|&w| horner(&coeffs, w)).collect()
            }
            (None, Some(_), None) => {
                return Err(SpecError::at("frame.coefficients", "missing for family"))
            }
            (None, None, Some(_)) => {
                return Err(SpecError::at("frame.family", "missing for coefficients"))
            }
            (None, None, None) => {
                return Err(SpecError::at(
                    "frame",
                    "needs `samples` or `family` with `coefficients`",
                ))
            }
            (Some(_), _, _) => {
                return Err(SpecError::at(
                    "frame",
                    "`samples` cannot be combined with `family`/`coefficients`",
                ))
            }
        };
        Frame::new(space, samples).map_err(|e| SpecError::at("frame", e))
    }

    /// Explicit-sample form of a frame; the measure is written as its nodes
    /// and weights.
    pub fn from_frame(frame: &Frame) -> Self {
        let space = frame.space();
        Self {
            algebra: frame.shape().clone(),
            rank: frame.rank(),
            measure: MeasureSpec::Atomic {
                nodes: space.nodes().to_vec(),
                weights: space.weights().to_vec(),
            },
            frame: FrameSource {
                samples: Some(frame.samples().values().iter().map(vector_repr).collect()),
                family: None,
                coefficients: None,
            },
            tolerances: None,
        }
    }
}

/// `Σ_d ω^d c_d`.
fn horner(coeffs: &[ModuleVector], w: f64) -> ModuleVector {
    let mut it = coeffs.iter().rev();
    let mut acc = it.next().expect("non-empty").clone();
    for c in it {
        acc = &acc.scale(Complex64::new(w, 0.0)) + c;
    }
    acc
}

/// One-line description of the discretization for report provenance.
pub fn describe_measure(space: &MeasureSpace) -> String {
    match space.kind() {
        MeasureKind::Atomic => format!("atomic, n={}", space.len()),
        MeasureKind::Interval { a, b, rule, m } => {
            let rule = match rule {
                QuadratureRule::GaussLegendre => "gauss-legendre",
                QuadratureRule::Trapezoid => "trapezoid",
            };
            format!("interval [{a}, {b}], {rule}, m={m}")
        }
        MeasureKind::RestrictedQuadrature => {
            format!("restricted quadrature, {} nodes", space.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
      "algebra": {"block_dims": [1, 1]},
      "rank": 1,
      "measure": {"kind": "interval", "a": 0, "b": 1, "rule": "gauss-legendre", "m": 16},
      "frame": {"family": "polynomial", "coefficients": [
        [[[[0, 0]], [[0, 0]]]],
        [[[[1.7320508075688772, 0]], [[1.7320508075688772, 0]]]]
      ]}
    }"#;

    #[test]
    fn polynomial_family_is_sampled_at_nodes() {
        let spec = FrameSpecFile::parse(EXAMPLE).unwrap();
        let f = spec.build(None).unwrap();
        assert_eq!(f.len(), 16);
        let b = f.frame_bounds().unwrap();
        assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);
        assert_eq!(spec.build(Some(8)).unwrap().len(), 8);
    }

    #[test]
    fn errors_name_the_location() {
        let e = FrameSpecFile::parse("{\n  \"rank\": 1,\n  \"bogus\": 2\n}").unwrap_err();
        assert!(e.location.starts_with("line 3"), "{e}");

        let text = r#"{"algebra": {"block_dims": [1]}, "rank": 1,
            "measure": {"kind": "atomic", "nodes": [0, 1], "weights": [1, 1]},
            "frame": {"samples": [[[[[1, 0]]]]]}}"#;
        let e = FrameSpecFile::parse(text).unwrap().build(None).unwrap_err();
        assert_eq!(e.location, "frame.samples");

        let text = r#"{"algebra": {"block_dims": [2]}, "rank": 1,
            "measure": {"kind": "atomic", "nodes": [0], "weights": [1]},
            "frame": {"samples": [[[[[1, 0], [0, 0], [0, 0]]]]]}}"#;
        let e = FrameSpecFile::parse(text).unwrap().build(None).unwrap_err();
        assert_eq!(e.location, "frame.samples[0][0]");
    }

    #[test]
    fn frame_round_trips_through_spec() {
        let spec = FrameSpecFile::parse(EXAMPLE).unwrap();
        let f = spec.build(None).unwrap();
        let back = FrameSpecFile::parse(&FrameSpecFile::from_frame(&f).to_pretty()).unwrap();
        assert_eq!(
            back.build(None).unwrap().samples().values(),
            f.samples().values()
        );
        assert_eq!(
            spec.digest(),
            FrameSpecFile::parse(&EXAMPLE.replace(' ', ""))
                .unwrap()
                .digest()
        );
    }
}
