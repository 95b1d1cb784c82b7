//! Acceptance gate: one test per shipping criterion, each printing a
//! single verdict line (visible with `--nocapture`, and in the failure
//! report otherwise).
//!
//! Criterion 5 currently fails and is expected to: on its prescribed
//! random MIMO ensemble the nnc gap exceeds the additive constant G1 on
//! roughly 1% of draws (the pdf half within G2 holds). The bound is
//! checked exactly as stated rather than weakened to hide that.

use std::process::Command;
use std::time::Instant;

use diamond::checks::{run_suite, CheckConfig};
use diamond::scalar::gap_constants_scalar;
use diamond::sim::{run_monte_carlo, ChannelModel, Scheme, SimConfig};
use diamond::strategies::{bc_superposition_rates, PowerSplit};

const SEED: u64 = 42;

fn verdict(number: u8, passed: bool, detail: &str) {
    let word = if passed { "PASS" } else { "FAIL" };
    println!("criterion {number:02} {word} — {detail}");
}

fn sweep_configs() -> Vec<(ChannelModel, f64)> {
    vec![
        (ChannelModel::Rayleigh, 1.0),
        (ChannelModel::Rayleigh, 1000.0),
        (ChannelModel::Shadow, 1.0),
        (ChannelModel::Shadow, 1000.0),
    ]
}

fn gap_sweep(scheme: Scheme, bound: f64, number: u8, label: &str) {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut slowest = 0.0_f64;
    for (dist, snr) in sweep_configs() {
        let mut cfg = SimConfig::new(10, snr, dist);
        cfg.trials = 10_000;
        cfg.seed = SEED;
        cfg.schemes = vec![scheme];
        let start = Instant::now();
        // run_monte_carlo itself hard-asserts the bound per sample; a
        // violation surfaces as Err here.
        let run = run_monte_carlo(&cfg);
        let elapsed = start.elapsed().as_secs_f64();
        slowest = slowest.max(elapsed);
        match run {
            Ok(samples) => worst = worst.max(samples.stats(0).max),
            Err(e) => {
                verdict(number, false, &format!("{label}: {e}"));
                panic!("criterion {number} failed: {e}");
            }
        }
    }
    let passed = worst <= bound + 1e-9 && slowest < 30.0;
    verdict(
        number,
        passed,
        &format!(
            "{label}: worst gap {worst:.4} ≤ {bound:.4} over 4×10⁴ samples, \
             slowest config {slowest:.1}s"
        ),
    );
    assert!(
        passed,
        "worst gap {worst}, bound {bound}, slowest {slowest}s"
    );
}

#[test]
fn criterion_01_pdf_gap_within_two_log_n() {
    gap_sweep(
        Scheme::Pdf,
        gap_constants_scalar(10).g2,
        1,
        "pdf gap ≤ 2·log₂10 on every sample",
    );
}

#[test]
fn criterion_02_nnc_gap_within_constant() {
    gap_sweep(
        Scheme::Nnc,
        gap_constants_scalar(10).g1,
        2,
        "nnc gap ≤ log₂11 + log₂10 + 1 on every sample",
    );
}

#[test]
fn criterion_03_lp_matches_combinatorial_optimum() {
    let cfg = CheckConfig {
        trials: Some(200),
        n: Some(8),
        seed: SEED,
    };
    let outcome = run_suite("edmonds", &cfg).unwrap();
    verdict(3, outcome.passed, &outcome.detail);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_04_waterfilling_within_lemma_bound() {
    let cfg = CheckConfig {
        trials: Some(10_000),
        n: Some(4),
        seed: SEED,
    };
    let outcome = run_suite("lemma1", &cfg).unwrap();
    verdict(4, outcome.passed, &outcome.detail);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_05_mimo_gaps_within_constants() {
    let cfg = CheckConfig {
        trials: Some(1000),
        n: Some(4),
        seed: SEED,
    };
    let outcome = run_suite("remark12", &cfg).unwrap();
    verdict(5, outcome.passed, &outcome.detail);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_06_superposition_reference_rates() {
    const A: f64 = 1048576.0; // 2^20
    let gains = [A * A * A, A * A, A];
    let log_a = A.log2(); // 20

    let first =
        PowerSplit::new(vec![1.0 / (A * A), 1.0 / A, 1.0 - 1.0 / A - 1.0 / (A * A)]).unwrap();
    let r = bc_superposition_rates(&gains, 1.0, &first).unwrap();
    let first_ok = (r.rates()[0] - log_a).abs() < 1e-4
        && (r.rates()[1] - (log_a - 1.0)).abs() < 1e-4
        && (r.rates()[2] - (log_a - 1.0)).abs() < 1e-4;

    let improved =
        PowerSplit::new(vec![1.0 / (A * A), 2.0 / A, 1.0 - 2.0 / A - 1.0 / (A * A)]).unwrap();
    let r2 = bc_superposition_rates(&gains, 1.0, &improved).unwrap();
    let improved_ok = (r2.rates()[2] - (log_a - 3.0_f64.log2())).abs() < 1e-3;

    let passed = first_ok && improved_ok;
    verdict(
        6,
        passed,
        &format!(
            "superposition at a = 2²⁰: first split rates ({:.4}, {:.4}, {:.4}), \
             improved split weakest rate {:.4}",
            r.rates()[0],
            r.rates()[1],
            r.rates()[2],
            r2.rates()[2]
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_07_figure_statistics() {
    let mut cfg = SimConfig::new(10, 1000.0, ChannelModel::Rayleigh);
    cfg.trials = 10_000;
    cfg.seed = SEED;
    cfg.schemes = vec![Scheme::Pdf];
    let rayleigh = run_monte_carlo(&cfg).unwrap();
    let median = rayleigh.stats(0).median;
    let log_n = 10.0_f64.log2();
    let median_ok = (log_n - 1.0..=log_n + 1.0).contains(&median);

    let mut cfg = SimConfig::new(10, 1000.0, ChannelModel::Shadow);
    cfg.trials = 10_000;
    cfg.seed = SEED;
    cfg.schemes = vec![Scheme::Pdf, Scheme::AfOpt];
    let shadow = run_monte_carlo(&cfg).unwrap();
    let pdf_max = shadow.stats(0).max;
    let af_max = shadow.stats(1).max;
    let af_ok = af_max > pdf_max;

    let passed = median_ok && af_ok;
    verdict(
        7,
        passed,
        &format!(
            "Rayleigh median pdf gap {median:.4} ∈ [{:.4}, {:.4}]; \
             shadow max af_opt gap {af_max:.4} > max pdf gap {pdf_max:.4}",
            log_n - 1.0,
            log_n + 1.0
        ),
    );
    assert!(
        passed,
        "median {median}, af max {af_max}, pdf max {pdf_max}"
    );
}

#[test]
fn criterion_08_byte_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_diamond");
    let mut outputs = Vec::new();
    for (name, threads) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "4")] {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args([
                "simulate",
                "--relays",
                "10",
                "--snr",
                "1000",
                "--dist",
                "rayleigh",
                "--trials",
                "1000",
                "--seed",
                "42",
                "--threads",
                threads,
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    let passed = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    verdict(
        8,
        passed,
        &format!(
            "CSV byte-identical across reruns and thread counts ({} bytes)",
            outputs[0].len()
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_09_single_antenna_reduction() {
    let cfg = CheckConfig {
        trials: Some(100),
        n: Some(8),
        seed: SEED,
    };
    let outcome = run_suite("reduction", &cfg).unwrap();
    verdict(9, outcome.passed, &outcome.detail);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_10_polymatroid_axioms() {
    let cfg = CheckConfig {
        trials: Some(25),
        n: Some(8),
        seed: SEED,
    };
    let outcome = run_suite("polymatroid", &cfg).unwrap();
    verdict(10, outcome.passed, &outcome.detail);
    assert!(outcome.passed, "{}", outcome.detail);
}
