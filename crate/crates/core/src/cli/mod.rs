//! Command-line interface.
//!
//! Exit codes:
//!
//! | code | `analyze`          | `generate`   | `verify-theorems`   |
//! |------|--------------------|--------------|---------------------|
//! | 0    | frame              | spec written | no violations       |
//! | 1    | input error        | bad flags    | bad flags           |
//! | 2    | not a frame        |              | violations found    |

pub mod spec;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{AlgebraShape, DEFAULT_TOL};
use crate::frame_ops::Frame;
use crate::random;
use crate::report::{self, ReportBody, ReportEnvelope};
use crate::theorems;
use spec::FrameSpecFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_A_FRAME: i32 = 2;
pub const EXIT_VIOLATIONS: i32 = 2;

/// Environment variable overriding the built-in default tolerance.
pub const TOL_ENV: &str = "CFRAMES_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "cframes",
    version,
    about = "Frames and Riesz bases in Hilbert C*-modules over finite-dimensional C*-algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Diagnose the frame described by a spec file.
    Analyze(AnalyzeArgs),
    /// Print a seeded random atomic frame spec.
    Generate(GenerateArgs),
    /// Check the structural theorems on seeded random instances.
    VerifyTheorems(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(clap::Args, Debug)]
struct AnalyzeArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    tol: Option<f64>,
    /// Node count for interval measures, replacing the spec's `m`.
    #[arg(long)]
    quadrature_nodes: Option<usize>,
    /// Write the complex matrices of the frame and Gram operators as JSON.
    #[arg(long)]
    export_operators: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    atoms: usize,
    #[arg(long)]
    rank: usize,
    /// Block sizes of the algebra, e.g. `2,1`.
    #[arg(long, value_delimiter = ',', required = true)]
    blocks: Vec<usize>,
    /// Only emit instances whose Gram operator has λ_min ≥ 1e-3.
    #[arg(long)]
    riesz: bool,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    cases: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for replayable spec files of violating instances.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, out),
        Command::Generate(g) => generate(&g, out),
        Command::VerifyTheorems(v) => verify(&v, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn check_tol(tol: f64, source: &str) -> Result<f64, Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Failure(format!(
            "{source}: tolerance must be positive and finite, got {tol}"
        )))
    }
}

fn env_tol() -> Result<Option<f64>, Failure> {
    match std::env::var(TOL_ENV) {
        Ok(v) => {
            let t: f64 = v
                .trim()
                .parse()
                .map_err(|_| Failure(format!("{TOL_ENV}: cannot parse {v:?} as a number")))?;
            Ok(Some(check_tol(t, TOL_ENV)?))
        }
        Err(_) => Ok(None),
    }
}

/// `--tol`, then the spec file, then the environment, then the default.
fn resolve_tol(flag: Option<f64>, spec: Option<f64>) -> Result<(f64, &'static str), Failure> {
    if let Some(t) = flag {
        return Ok((check_tol(t, "--tol")?, "flag"));
    }
    if let Some(t) = spec {
        return Ok((check_tol(t, "tolerances.tol")?, "spec"));
    }
    if let Some(t) = env_tol()? {
        return Ok((t, "environment"));
    }
    Ok((DEFAULT_TOL, "default"))
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let t0 = Instant::now();
    let text = std::fs::read_to_string(&args.path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", args.path.display())))?;
    let spec = FrameSpecFile::parse(&text)
        .map_err(|e| Failure(format!("{}: {e}", args.path.display())))?;
    let frame = spec
        .build(args.quadrature_nodes)
        .map_err(|e| Failure(format!("{}: {e}", args.path.display())))?;
    let (tol, tol_source) = resolve_tol(args.tol, spec.tol())?;
    let parse_ms = millis(t0);

    let t1 = Instant::now();
    let diagnostics = frame.diagnose(tol)?;
    let diagnose_ms = millis(t1);

    if let Some(path) = &args.export_operators {
        export_operators(&frame, path)?;
    }

    let mut provenance = BTreeMap::new();
    provenance.insert("algebra".to_string(), frame.shape().to_string());
    provenance.insert("rank".to_string(), frame.rank().to_string());
    provenance.insert("measure".to_string(), spec::describe_measure(frame.space()));
    provenance.insert("tolerance source".to_string(), tol_source.to_string());
    let env = ReportEnvelope {
        body: ReportBody {
            spec_digest: spec.digest(),
            tool_version: report::TOOL_VERSION.to_string(),
            tolerances: BTreeMap::from([("tol".to_string(), tol)]),
            provenance,
            diagnostics,
        },
        timings: BTreeMap::from([
            ("parse".to_string(), parse_ms),
            ("diagnose".to_string(), diagnose_ms),
        ]),
    };
    match args.format {
        Format::Text => out.write_all(report::render_text(&env).as_bytes())?,
        Format::Structured => {
            out.write_all(&report::render_structured(&env))?;
            out.write_all(b"\n")?;
        }
    }
    Ok(if env.body.diagnostics.flags.frame {
        EXIT_OK
    } else {
        EXIT_NOT_A_FRAME
    })
}

fn export_operators(frame: &Frame, path: &Path) -> Result<(), Failure> {
    let dense = |m: crate::linalg::CMatrix| -> Vec<Vec<[f64; 2]>> {
        (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| [m[(r, c)].re, m[(r, c)].im])
                    .collect()
            })
            .collect()
    };
    let value = BTreeMap::from([
        (
            "frame_operator",
            dense(frame.frame_operator().complex_realization()),
        ),
        (
            "gram_operator",
            dense(frame.gram_operator().hermitian_form().complex_realization()),
        ),
    ]);
    std::fs::write(path, report::canonical_json(&value))
        .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if args.atoms == 0 {
        return Err(Failure("--atoms must be at least 1".into()));
    }
    if args.rank == 0 {
        return Err(Failure("--rank must be at least 1".into()));
    }
    let shape = AlgebraShape::new(args.blocks.clone())?;
    let mut rng = random::rng_from_seed(args.seed);
    let frame = if args.riesz {
        random::random_riesz_frame(&mut rng, args.atoms, args.rank, &shape)?
    } else {
        random::random_atomic_frame(&mut rng, args.atoms, args.rank, &shape)?
    };
    out.write_all(FrameSpecFile::from_frame(&frame).to_pretty().as_bytes())?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let tol = match args.tol {
        Some(t) => check_tol(t, "--tol")?,
        None => env_tol()?.unwrap_or(DEFAULT_TOL),
    };
    if let Some(dir) = &args.dump_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure(format!("cannot create {}: {e}", dir.display())))?;
    }
    let reports = theorems::verify(args.cases, args.seed, tol);
    let mut counts: BTreeMap<&str, usize> = theorems::INVARIANTS.iter().map(|&n| (n, 0)).collect();
    let mut total = 0;
    for case in &reports {
        for v in &case.violations {
            *counts.entry(v.invariant).or_default() += 1;
            total += 1;
            writeln!(
                out,
                "case {} (seed {:#018x}): {}: {}",
                case.index, case.seed, v.invariant, v.detail
            )?;
        }
        if let (false, Some(dir), Some(frame)) =
            (case.violations.is_empty(), &args.dump_dir, &case.frame)
        {
            let path = dir.join(format!("case-{:04}-{:016x}.spec", case.index, case.seed));
            std::fs::write(&path, FrameSpecFile::from_frame(frame).to_pretty())
                .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    writeln!(
        out,
        "cases: {}, seed: {}, tol: {tol:e}",
        args.cases, args.seed
    )?;
    for (name, n) in &counts {
        writeln!(out, "  {name}: {n}")?;
    }
    writeln!(out, "violations: {total}")?;
    Ok(if total == 0 { EXIT_OK } else { EXIT_VIOLATIONS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cframes").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generate_examples() {
        let a = call(&[
            "generate", "--seed", "42", "--atoms", "3", "--rank", "2", "--blocks", "2,1",
        ]);
        let b = call(&[
            "generate", "--seed", "42", "--atoms", "3", "--rank", "2", "--blocks", "2,1",
        ]);
        assert_eq!(a.0, EXIT_OK);
        assert_eq!(a.1, b.1);
        assert_eq!(
            call(&["generate", "--seed", "1", "--atoms", "0", "--rank", "1", "--blocks", "1"]).0,
            EXIT_ERROR
        );
        let (code, _, err) = call(&[
            "generate", "--seed", "1", "--atoms", "3", "--rank", "2", "--blocks", "1", "--riesz",
        ]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("needs exactly 2 atoms"), "{err}");
    }

    #[test]
    fn verify_examples() {
        let (code, out, _) = call(&["verify-theorems", "--cases", "0", "--seed", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("violations: 0"));
    }

    #[test]
    fn bad_flags_exit_one() {
        assert_eq!(call(&["analyze"]).0, EXIT_ERROR);
        assert_eq!(call(&["generate", "--seed", "x"]).0, EXIT_ERROR);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
