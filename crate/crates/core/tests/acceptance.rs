//! Acceptance gate: one `PASS`/`FAIL` line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cframes::frame_ops::threshold;
use cframes::random::{self, rng_from_seed};
use cframes::theorems;
use cframes::{Frame, ModuleVector, DEFAULT_TOL};
use num_complex::Complex64;
use rand::Rng;

const TOL: f64 = DEFAULT_TOL;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn frames(seed: u64, count: usize) -> Vec<Frame> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let f = random::random_decidable_frame(&mut rng, TOL).expect("generation");
        if f.is_frame(TOL).unwrap() {
            out.push(f);
        }
    }
    out
}

fn random_riesz<R: Rng>(rng: &mut R) -> Frame {
    let (shape, rank, _) = random::random_dimensions(rng);
    random::random_riesz_frame(rng, rank, rank, &shape).expect("riesz generation")
}

fn example_frame() -> Frame {
    let text = include_str!("../specs/tight-interval.spec");
    cframes::cli::spec::FrameSpecFile::parse(text)
        .unwrap()
        .build(None)
        .unwrap()
}

fn c1_example() -> Outcome {
    let f = example_frame();
    let b = f.frame_bounds().map_err(|e| e.to_string())?;
    let tight = f.is_tight(TOL).unwrap();
    let err = (b.lower - 1.0).abs().max((b.upper - 1.0).abs());
    if err <= 1e-10 && tight {
        Ok(format!("A={:.15}, B={:.15}, tight", b.lower, b.upper))
    } else {
        Err(format!("A={}, B={}, tight={tight}", b.lower, b.upper))
    }
}

fn extreme_vector(f: &Frame, lowest: bool) -> (f64, ModuleVector) {
    let s = f.frame_operator().to_algebra_element();
    let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
    for (i, eig) in s.hermitian_eigen().unwrap().iter().enumerate() {
        let j = if lowest { 0 } else { eig.values.len() - 1 };
        let lam = eig.values[j];
        let better = match &best {
            None => true,
            Some((b, _, _)) => (lowest && lam < *b) || (!lowest && lam > *b),
        };
        if better {
            best = Some((lam, i, eig.vectors.column(j)));
        }
    }
    let (lam, block, row) = best.unwrap();
    (
        lam,
        ModuleVector::from_block_row(f.shape(), f.rank(), block, &row).unwrap(),
    )
}

fn c2_bound_optimality() -> Outcome {
    let mut worst = 0.0f64;
    for f in frames(2, 50) {
        let b = f.frame_bounds().unwrap();
        let s = f.frame_operator();
        for (bound, lowest) in [(b.lower, true), (b.upper, false)] {
            let (lam, v) = extreme_vector(&f, lowest);
            let sv = s.apply(&v).unwrap();
            let gap = (&sv.inner(&v).unwrap() - &v.inner(&v).unwrap().scale_real(bound)).norm();
            worst = worst.max(gap);
            if gap > 1e-8 || (lam - bound).abs() > 1e-12 * (1.0 + bound) {
                return Err(format!("attainment gap {gap:.3e}"));
            }
        }
        let inv_norm = s.invert().unwrap().norm();
        let t_sq = *f.gram_operator().spectrum().unwrap().last().unwrap();
        if (1.0 / inv_norm - b.lower).abs() > 1e-8 * (1.0 + b.upper)
            || (t_sq - b.upper).abs() > 1e-8 * (1.0 + b.upper)
        {
            return Err(format!(
                "A={} vs 1/|S^-1|={}, B={} vs |T|^2={}",
                b.lower,
                1.0 / inv_norm,
                b.upper,
                t_sq
            ));
        }
    }
    Ok(format!("50 frames, max gap {worst:.2e}"))
}

fn c3_equivalence_chain() -> Outcome {
    let (mut riesz, mut other) = (0, 0);
    for (n, f) in frames(3, 100).iter().enumerate() {
        let a = f.is_riesz(TOL).unwrap();
        let b = f.mu_complete(TOL).unwrap() && f.l2_independent(TOL).unwrap();
        let c = f.is_riesz_type(TOL).unwrap();
        let d = f.non_canonical_dual(TOL).unwrap().is_none();
        if !(a == b && b == c && c == d) {
            return Err(format!("instance {n}: {a} {b} {c} {d}"));
        }
        if a {
            riesz += 1
        } else {
            other += 1
        }
    }
    Ok(format!("100 frames agree ({riesz} Riesz, {other} not)"))
}

fn c4_riesz_exact() -> Outcome {
    let mut rng = rng_from_seed(4);
    let mut instances: Vec<Frame> = (0..50).map(|_| random_riesz(&mut rng)).collect();
    instances.extend(
        frames(44, 100)
            .into_iter()
            .filter(|f| f.is_riesz(TOL).unwrap()),
    );
    for (n, f) in instances.iter().enumerate() {
        if !f.is_exact(TOL).unwrap() {
            return Err(format!("instance {n} not exact"));
        }
        for j in 0..f.len() {
            // Removing the only atom leaves no frame at all.
            if let Ok(r) = f.restrict(&[j]) {
                let b = r.frame_bounds().unwrap();
                if b.lower >= threshold(TOL, b.upper) {
                    return Err(format!("instance {n}, removing {j}: A={:.3e}", b.lower));
                }
            }
        }
    }
    Ok(format!("{} Riesz bases exact", instances.len()))
}

fn c5_reconstruction() -> Outcome {
    let mut rng = rng_from_seed(5);
    let mut worst = 0.0f64;
    let fs = frames(5, 100);
    for f in &fs {
        let g = f.canonical_dual().unwrap();
        for _ in 0..10 {
            let v = random::random_vector(&mut rng, f.shape(), f.rank());
            let rel = (&v - &f.reconstruct(&g, &v).unwrap()).norm() / (1.0 + v.norm());
            worst = worst.max(rel);
        }
    }
    if worst <= 1e-8 {
        Ok(format!(
            "{} frames x 10 vectors, max relative error {worst:.2e}",
            fs.len()
        ))
    } else {
        Err(format!("relative error {worst:.3e}"))
    }
}

fn c6_non_canonical_dual() -> Outcome {
    let mut checked = 0;
    let mut closest = f64::INFINITY;
    for f in frames(6, 100).iter().filter(|f| !f.is_riesz(TOL).unwrap()) {
        let g = f.non_canonical_dual(TOL).unwrap().ok_or("no witness")?;
        if !f.is_dual(&g, 1e-9).unwrap() {
            return Err(format!(
                "witness residual {:.3e}",
                f.dual_residual(&g).unwrap()
            ));
        }
        let d = g
            .samples()
            .sub(f.canonical_dual().unwrap().samples())
            .unwrap()
            .l2_norm();
        closest = closest.min(d);
        if d < 1e-3 {
            return Err(format!("witness distance {d:.3e}"));
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} non-Riesz frames, min distance {closest:.3e}"
    ))
}

fn c7_link_operator() -> Outcome {
    let mut rng = rng_from_seed(7);
    for n in 0..25 {
        let f = random_riesz(&mut rng);
        let g = loop {
            let g = random::random_frame_on(&mut rng, f.space(), f.rank(), f.shape()).unwrap();
            if g.gram_operator().spectrum().unwrap()[0] >= random::RIESZ_MIN_GRAM_EIGENVALUE {
                break g;
            }
        };
        if let Some(detail) = theorems::check_link_with(&f, &g, TOL).map_err(|e| e.to_string())? {
            return Err(format!("pair {n}: {detail}"));
        }
    }
    Ok("25 pairs".into())
}

fn c8_inequalities() -> Outcome {
    let mut rng = rng_from_seed(8);
    for n in 0..200 {
        let (shape, rank, _) = random::random_dimensions(&mut rng);
        if let Some(d) = theorems::check_cauchy_schwarz(&shape, rank, &mut rng, 1e-9)
            .map_err(|e| e.to_string())?
        {
            return Err(format!("cauchy-schwarz {n}: {d}"));
        }
    }
    let (mut tt, mut t_t) = (0, 0);
    for f in frames(88, 200) {
        if let Some(d) = theorems::check_sandwich_tt_star(&f, 1e-9).map_err(|e| e.to_string())? {
            return Err(format!("TT* sandwich: {d}"));
        }
        tt += 1;
        if f.l2_independent(1e-9).unwrap() {
            if let Some(d) =
                theorems::check_sandwich_t_star_t(&f, 1e-9).map_err(|e| e.to_string())?
            {
                return Err(format!("T*T sandwich: {d}"));
            }
            t_t += 1;
        }
    }
    Ok(format!(
        "200 Cauchy-Schwarz, {tt} TT* and {t_t} T*T sandwiches"
    ))
}

fn cframes(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cframes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn c9_determinism() -> Outcome {
    let gen = [
        "generate", "--seed", "42", "--atoms", "4", "--rank", "2", "--blocks", "2,1",
    ];
    let (a, b) = (cframes(&gen), cframes(&gen));
    if !a.status.success() || a.stdout != b.stdout {
        return Err("generate output differs between runs".into());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("generated.spec");
    std::fs::write(&path, &a.stdout).map_err(|e| e.to_string())?;
    let p = path.to_str().unwrap();
    let body = |out: std::process::Output| -> Result<(String, String), String> {
        let v: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        Ok((v["body"].to_string(), v["body_digest"].to_string()))
    };
    let r1 = body(cframes(&["analyze", p, "--format", "structured"]))?;
    let r2 = body(cframes(&["analyze", p, "--format", "structured"]))?;
    if r1 != r2 {
        return Err("structured report bodies differ".into());
    }
    Ok(format!(
        "generate byte-identical, body digest {}",
        &r1.1[1..13]
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "1 example tight frame A=B=1",
            c1_example,
            Duration::from_secs(1),
        ),
        (
            "2 bound optimality",
            c2_bound_optimality,
            Duration::from_secs(10),
        ),
        (
            "3 equivalence chain",
            c3_equivalence_chain,
            Duration::from_secs(30),
        ),
        (
            "4 riesz implies exact",
            c4_riesz_exact,
            Duration::from_secs(30),
        ),
        (
            "5 reconstruction",
            c5_reconstruction,
            Duration::from_secs(10),
        ),
        (
            "6 non-canonical dual",
            c6_non_canonical_dual,
            Duration::from_secs(10),
        ),
        ("7 link operator", c7_link_operator, Duration::from_secs(10)),
        (
            "8 inequality lemmas",
            c8_inequalities,
            Duration::from_secs(10),
        ),
        ("9 determinism", c9_determinism, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => {
                Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}"))
            }
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
