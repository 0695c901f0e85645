//! Acceptance battery: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use lieram::verify::{self, CriterionResult};
use std::process::Command;
use std::time::{Duration, Instant};

const SEED: u64 = 20240611;

fn timed(
    limit_secs: u64,
    f: impl FnOnce() -> CriterionResult,
) -> (CriterionResult, Duration, bool) {
    let t = Instant::now();
    let r = f();
    let el = t.elapsed();
    (r, el, el <= Duration::from_secs(limit_secs))
}

fn verify_run(dir: &std::path::Path, name: &str) -> Vec<u8> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_lieram"))
        .args([
            "verify",
            "--config",
            "c1",
            "--seed",
            &SEED.to_string(),
            "--out",
        ])
        .arg(&out)
        .status()
        .expect("run lieram");
    assert!(status.success(), "verify exited with {status}");
    std::fs::read(&out).expect("artifact written")
}

fn main() {
    let runs: Vec<(u64, Box<dyn FnOnce() -> CriterionResult>)> = vec![
        (10, Box::new(verify::u_function)),
        (10, Box::new(verify::m_function)),
        (60, Box::new(|| verify::bch_group(SEED))),
        (30, Box::new(|| verify::combinatorics(SEED))),
        (60, Box::new(verify::admissible_sets)),
        (120, Box::new(verify::filtration_spans)),
        (600, Box::new(verify::ramification_ideal)),
    ];
    let mut all = true;
    for (limit, f) in runs {
        let (r, el, in_time) = timed(limit, f);
        println!(
            "{} [{:.2?}, limit {}s{}]",
            r.line(),
            el,
            limit,
            if in_time { "" } else { ", EXCEEDED" }
        );
        all &= r.passed && in_time;
    }

    let dir = std::env::temp_dir().join(format!("lieram-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = verify_run(&dir, "first.json");
    let b = verify_run(&dir, "second.json");
    let r = verify::determinism(&a, &b);
    println!("{}", r.line());
    all &= r.passed;
    let _ = std::fs::remove_dir_all(&dir);

    if !all {
        eprintln!("at least one acceptance criterion failed");
        std::process::exit(1);
    }
}
