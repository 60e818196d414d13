//! The acceptance gate: each test runs one criterion and prints its
//! pass/fail line; run with `--nocapture` to see all seven.

use std::path::Path;
use std::process::Command;

use cli_harness::accept::{self, CriterionReport};

fn assert_criterion((report, _files): (CriterionReport, Vec<(String, String)>)) {
    println!("{}", report.summary_line());
    if !report.passed {
        for detail in report.failure_details() {
            println!("  {detail}");
        }
    }
    assert!(report.passed, "{}", report.summary_line());
}

#[test]
fn criterion_1_exact_identities() {
    assert_criterion(accept::criterion_exact_identities());
}

#[test]
fn criterion_2_gaussian_analytics_vs_sampling() {
    assert_criterion(accept::criterion_gaussian_mc());
}

#[test]
fn criterion_3_cantor_certificates() {
    assert_criterion(accept::criterion_cantor_certificates());
}

#[test]
fn criterion_4_ratio_averages() {
    assert_criterion(accept::criterion_ratio_averages());
}

#[test]
fn criterion_5_skew_products() {
    assert_criterion(accept::criterion_skew_products());
}

#[test]
fn criterion_6_growth_exponents() {
    assert_criterion(accept::criterion_growth_exponents());
}

fn accept_run(out: &Path, threads: &str) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nsgauss"))
        .args(["accept", "--out"])
        .arg(out)
        .env("NSGAUSS_THREADS", threads)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_7_thread_count_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("threads-1");
    let eight = dir.path().join("threads-8");
    let out_one = accept_run(&one, "1");
    assert!(
        out_one.status.success(),
        "single-thread accept failed:\n{}{}",
        String::from_utf8_lossy(&out_one.stdout),
        String::from_utf8_lossy(&out_one.stderr)
    );
    let out_eight = accept_run(&eight, "8");
    assert!(
        out_eight.status.success(),
        "eight-thread accept failed:\n{}{}",
        String::from_utf8_lossy(&out_eight.stdout),
        String::from_utf8_lossy(&out_eight.stderr)
    );

    let mut names: Vec<String> = std::fs::read_dir(&one)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    assert!(!names.is_empty(), "accept produced no CSV artifacts");
    let mut identical = true;
    for name in &names {
        let a = std::fs::read(one.join(name)).unwrap();
        let b = std::fs::read(eight.join(name)).unwrap_or_default();
        if a != b {
            identical = false;
            println!("  {name} differs between thread counts");
        }
    }
    println!(
        "acceptance criterion 7 (thread-count determinism): {}",
        if identical { "PASS" } else { "FAIL" }
    );
    assert!(identical, "CSV artifacts differ between NSGAUSS_THREADS=1 and 8");
}
