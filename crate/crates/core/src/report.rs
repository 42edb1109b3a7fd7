//! Text and structured renderings of frame diagnostics.
//!
//! The structured form is compact JSON with sorted keys. Everything except
//! `timings` lives under `body`, and `body_digest` hashes the body bytes, so
//! two runs on the same input agree on both.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::frame_ops::FrameDiagnostics;

pub const TOOL_VERSION: &str = concat!("cframes ", env!("CARGO_PKG_VERSION"));

/// The digest-stable part of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    /// SHA-256 of the canonical form of the input spec.
    pub spec_digest: String,
    pub tool_version: String,
    pub tolerances: BTreeMap<String, f64>,
    /// Discretization and generation parameters (rule, node count, seed, …).
    pub provenance: BTreeMap<String, String>,
    pub diagnostics: FrameDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub body: ReportBody,
    /// Stage name to milliseconds.
    pub timings: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct StructuredReport {
    body: ReportBody,
    body_digest: String,
    timings: BTreeMap<String, f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Compact JSON with keys sorted at every level.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's Map is a BTreeMap unless `preserve_order` is enabled.
    let v = serde_json::to_value(value).expect("report types serialize");
    serde_json::to_string(&v).expect("values serialize")
}

impl ReportBody {
    pub fn canonical(&self) -> String {
        canonical_json(self)
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.canonical().as_bytes())
    }
}

pub fn render_structured(env: &ReportEnvelope) -> Vec<u8> {
    let out = StructuredReport {
        body_digest: env.body.digest(),
        body: env.body.clone(),
        timings: env.timings.clone(),
    };
    canonical_json(&out).into_bytes()
}

pub fn parse_structured(bytes: &[u8]) -> serde_json::Result<ReportEnvelope> {
    let r: StructuredReport = serde_json::from_slice(bytes)?;
    Ok(ReportEnvelope {
        body: r.body,
        timings: r.timings,
    })
}

/// Fixed 12-digit formatting: plain decimals for moderate magnitudes,
/// scientific notation otherwise.
pub fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-3..1e6).contains(&a) {
        format!("{x:.12}")
    } else {
        format!("{x:.12e}")
    }
}

fn fmt_opt(x: Option<f64>, missing: &str) -> String {
    x.map(fmt_real).unwrap_or_else(|| missing.to_string())
}

pub fn render_text(env: &ReportEnvelope) -> String {
    let b = &env.body;
    let d = &b.diagnostics;
    let f = &d.flags;
    let mut s = String::new();
    let na = "n/a (not a frame)";
    writeln!(s, "tool version: {}", b.tool_version).unwrap();
    writeln!(s, "spec digest: {}", b.spec_digest).unwrap();
    for (k, v) in &b.tolerances {
        writeln!(s, "tolerance {k}: {v:e}").unwrap();
    }
    for (k, v) in &b.provenance {
        writeln!(s, "{k}: {v}").unwrap();
    }
    writeln!(s, "bessel: {}, B={}", f.bessel, fmt_real(d.bounds.upper)).unwrap();
    writeln!(s, "frame: {}", f.frame).unwrap();
    writeln!(
        s,
        "tight: {}, A={}, B={}",
        f.tight,
        fmt_real(d.bounds.lower),
        fmt_real(d.bounds.upper)
    )
    .unwrap();
    writeln!(s, "mu_complete: {}", f.mu_complete).unwrap();
    writeln!(s, "l2_independent: {}", f.l2_independent).unwrap();
    writeln!(s, "riesz: {}", f.riesz).unwrap();
    match d.riesz_bounds {
        Some(r) => {
            let (a, bb) = r.sqrt_convention();
            writeln!(
                s,
                "riesz bounds (squared): A={}, B={}",
                fmt_real(r.lower),
                fmt_real(r.upper)
            )
            .unwrap();
            writeln!(
                s,
                "riesz bounds (sqrt): A={}, B={}",
                fmt_real(a),
                fmt_real(bb)
            )
            .unwrap();
        }
        None if f.frame => writeln!(s, "riesz bounds: none").unwrap(),
        None => writeln!(s, "riesz bounds: {na}").unwrap(),
    }
    if f.frame {
        writeln!(s, "riesz_type: {}", f.riesz_type).unwrap();
        match f.exact {
            Some(e) => writeln!(s, "exact: {e}").unwrap(),
            None => writeln!(s, "exact: n/a (not decidable)").unwrap(),
        }
    } else {
        writeln!(s, "riesz_type: {na}").unwrap();
        writeln!(s, "exact: {na}").unwrap();
    }
    writeln!(
        s,
        "reconstruction residual: {}",
        fmt_opt(d.reconstruction_residual, na)
    )
    .unwrap();
    let missing = if f.frame { "none" } else { na };
    writeln!(
        s,
        "dual witness distance: {}",
        fmt_opt(d.dual_witness_distance, missing)
    )
    .unwrap();
    writeln!(s, "notes:").unwrap();
    for n in &d.notes {
        writeln!(s, "  - {n}").unwrap();
    }
    s
}
