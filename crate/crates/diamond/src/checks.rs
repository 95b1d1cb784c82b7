//! Randomized self-check suites behind the `check` CLI command.
//!
//! Each suite stress-tests one mathematical contract of the crate on a
//! seeded random ensemble and reports pass/fail with a counterexample on
//! failure, rather than erroring out — a violated property is a result,
//! not an I/O problem. The suites:
//!
//! - `polymatroid` — the scalar and matrix rate set functions satisfy the
//!   polymatroid axioms, verified exhaustively per instance;
//! - `edmonds` — the combinatorial max-sum value agrees with an
//!   independent LP solve over the same constraints, and the LP's rate
//!   point is feasible for both polymatroids;
//! - `lemma1` — waterfilling beats equal power by at most
//!   n·log₂(1 + (n_t − 1)/n), n = min(n_t, n_r);
//! - `remark12` — on random MIMO networks the nnc and pdf gaps stay
//!   within their additive constants;
//! - `reduction` — MIMO formulas at one antenna per node reproduce the
//!   scalar formulas to near machine precision.
//!
//! Determinism: suite `k` draws from substream `100 + k` of the
//! configured seed, so runs are reproducible and suites independent.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::instance::{mimo_to_json, scalar_to_json, scalar_to_mimo};
use crate::mimo::{
    lemma1_bound, mimo_cutset_proxy, mimo_gap_constants, mimo_nnc_rate, mimo_pdf_rate,
    mimo_pdf_set_functions, waterfill, MimoDiamond,
};
use crate::polymatroid::{
    bc_lower_set_function, check_polymatroid, edmonds_max_sum, find_max_rate_point,
    mac_set_function, membership, SetFunction, LP_AGREEMENT_TOL,
};
use crate::scalar::{self, ScalarDiamond};
use crate::sim::{sample_channel, ChannelModel};
use crate::util::log2p1;
use crate::{Error, Result};

/// Suite names accepted by [`run_suite`], in [`run_all`] order.
pub const SUITE_NAMES: &[&str] = &["polymatroid", "edmonds", "lemma1", "remark12", "reduction"];

/// Knobs shared by all suites; `None` means the suite's default.
#[derive(Debug, Clone, Default)]
pub struct CheckConfig {
    /// Sample count (per size class where a suite sweeps sizes).
    pub trials: Option<usize>,
    /// Largest ground-set / relay-count size to exercise.
    pub n: Option<usize>,
    /// Master seed.
    pub seed: u64,
}

/// Verdict of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    /// Suite name as in [`SUITE_NAMES`].
    pub name: String,
    /// Whether every sampled instance satisfied the property.
    pub passed: bool,
    /// Human-readable summary; on failure, includes the first
    /// counterexample as replayable instance JSON.
    pub detail: String,
}

impl SuiteOutcome {
    fn pass(name: &str, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            detail,
        }
    }
}

/// Run one suite by name.
pub fn run_suite(name: &str, cfg: &CheckConfig) -> Result<SuiteOutcome> {
    match name {
        "polymatroid" => suite_polymatroid(cfg),
        "edmonds" => suite_edmonds(cfg),
        "lemma1" => suite_lemma1(cfg),
        "remark12" => suite_remark12(cfg),
        "reduction" => suite_reduction(cfg),
        other => Err(Error::InvalidInput(format!(
            "unknown suite `{other}` (expected one of {})",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Run every suite in order.
pub fn run_all(cfg: &CheckConfig) -> Result<Vec<SuiteOutcome>> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, cfg))
        .collect()
}

// --- shared sampling helpers ------------------------------------------------

fn suite_rng(cfg: &CheckConfig, suite_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(100 + suite_index);
    rng
}

fn cn01(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| cn01(rng))
}

fn random_scalar_net(rng: &mut impl Rng, n: usize, snr: f64) -> ScalarDiamond {
    sample_channel(n, ChannelModel::Rayleigh, 7.0, snr, rng)
        .expect("Rayleigh sampling of a valid configuration cannot fail")
}

fn random_mimo_net(
    rng: &mut impl Rng,
    max_relays: usize,
    max_antennas: usize,
    snr: f64,
) -> MimoDiamond {
    let n = rng.random_range(1..=max_relays);
    let antennas: Vec<usize> = (0..n).map(|_| rng.random_range(1..=max_antennas)).collect();
    // Endpoint antenna counts may not exceed the relay total.
    let endpoint_cap = max_antennas.min(antennas.iter().sum());
    let n_s = rng.random_range(1..=endpoint_cap);
    let n_d = rng.random_range(1..=endpoint_cap);
    let h_bc = antennas
        .iter()
        .map(|&n_i| random_matrix(rng, n_i, n_s))
        .collect();
    let h_mac = antennas
        .iter()
        .map(|&n_i| random_matrix(rng, n_d, n_i))
        .collect();
    MimoDiamond::new(n_s, n_d, h_bc, h_mac, snr)
        .expect("randomly drawn dimensions within the caps are valid")
}

fn alternating_snr(i: usize) -> f64 {
    if i.is_multiple_of(2) {
        1.0
    } else {
        1000.0
    }
}

fn first_violation(sf: &SetFunction) -> Result<Option<String>> {
    Ok(check_polymatroid(sf)?.map(|v| v.to_string()))
}

// --- suites -----------------------------------------------------------------

fn suite_polymatroid(cfg: &CheckConfig) -> Result<SuiteOutcome> {
    const NAME: &str = "polymatroid";
    let mut rng = suite_rng(cfg, 1);
    let rounds = cfg.trials.unwrap_or(25);
    let n_max = cfg.n.unwrap_or(8).clamp(1, 12);
    let mut checked = 0_usize;

    for n in 1..=n_max {
        for i in 0..rounds {
            let snr = alternating_snr(i);
            let net = random_scalar_net(&mut rng, n, snr);
            for sf in [
                mac_set_function(&net.mac_gains_sq(), snr)?,
                bc_lower_set_function(&net.bc_gains_sq(), snr)?,
            ] {
                if let Some(v) = first_violation(&sf)? {
                    return Ok(SuiteOutcome::fail(
                        NAME,
                        format!(
                            "scalar set function violated an axiom: {v}\ninstance: {}",
                            scalar_to_json(&net)
                        ),
                    ));
                }
                checked += 1;
            }
        }
    }

    let mimo_relays = n_max.min(4);
    for i in 0..rounds {
        let snr = alternating_snr(i);
        let net = random_mimo_net(&mut rng, mimo_relays, 3, snr);
        let (f, g) = mimo_pdf_set_functions(&net)?;
        for sf in [f, g] {
            if let Some(v) = first_violation(&sf)? {
                return Ok(SuiteOutcome::fail(
                    NAME,
                    format!(
                        "matrix set function violated an axiom: {v}\ninstance: {}",
                        mimo_to_json(&net)
                    ),
                ));
            }
            checked += 1;
        }
    }

    Ok(SuiteOutcome::pass(
        NAME,
        format!("{checked} set functions passed the exhaustive axiom check"),
    ))
}

fn suite_edmonds(cfg: &CheckConfig) -> Result<SuiteOutcome> {
    const NAME: &str = "edmonds";
    let mut rng = suite_rng(cfg, 2);
    let trials = cfg.trials.unwrap_or(200);
    let n_max = cfg.n.unwrap_or(8).clamp(2, 10);
    let mut checked = 0_usize;

    for n in 2..=n_max {
        for i in 0..trials {
            let snr = alternating_snr(i);
            let net = random_scalar_net(&mut rng, n, snr);
            let (f, g) = scalar::pdf_set_functions(&net)?;
            let combinatorial = edmonds_max_sum(&f, &g)?;
            let point = find_max_rate_point(&f, &g)?;
            let lp = point.sum_rate();
            if (lp - combinatorial.value).abs() > LP_AGREEMENT_TOL {
                return Ok(SuiteOutcome::fail(
                    NAME,
                    format!(
                        "LP sum rate {lp} disagrees with the combinatorial value {} \
                         (n = {n})\ninstance: {}",
                        combinatorial.value,
                        scalar_to_json(&net)
                    ),
                ));
            }
            if !(membership(&f, &point)? && membership(&g, &point)?) {
                return Ok(SuiteOutcome::fail(
                    NAME,
                    format!(
                        "LP rate point is infeasible for a polymatroid (n = {n})\ninstance: {}",
                        scalar_to_json(&net)
                    ),
                ));
            }
            checked += 1;
        }
    }

    Ok(SuiteOutcome::pass(
        NAME,
        format!("{checked} instances: LP agrees with the combinatorial optimum within {LP_AGREEMENT_TOL:e}"),
    ))
}

fn suite_lemma1(cfg: &CheckConfig) -> Result<SuiteOutcome> {
    const NAME: &str = "lemma1";
    let mut rng = suite_rng(cfg, 3);
    let trials = cfg.trials.unwrap_or(10_000);
    let max_antennas = cfg.n.unwrap_or(4).clamp(1, 8);

    for t in 0..trials {
        // Cycle deterministically through every (n_t, n_r, P) combination.
        let n_t = t % max_antennas + 1;
        let n_r = (t / max_antennas) % max_antennas + 1;
        let power = if (t / (max_antennas * max_antennas)).is_multiple_of(2) {
            1.0
        } else {
            1000.0
        };
        let h = random_matrix(&mut rng, n_r, n_t);
        let gram = h.adjoint() * &h;
        let eig = SymmetricEigen::new(gram);
        let modes: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let c_wf = waterfill(&modes, n_t as f64 * power)?.capacity;
        let c_ep: f64 = modes.iter().map(|&l| log2p1(power * l)).sum();
        let diff = c_wf - c_ep;
        let bound = lemma1_bound(n_t, n_r);
        if !(-1e-9..=bound + 1e-9).contains(&diff) {
            return Ok(SuiteOutcome::fail(
                NAME,
                format!(
                    "waterfilling vs equal power differs by {diff} bits, outside [0, {bound}] \
                     for n_t = {n_t}, n_r = {n_r}, P = {power}"
                ),
            ));
        }
    }

    Ok(SuiteOutcome::pass(
        NAME,
        format!("{trials} random channels: waterfilling gain within the bound"),
    ))
}

fn suite_remark12(cfg: &CheckConfig) -> Result<SuiteOutcome> {
    const NAME: &str = "remark12";
    let mut rng = suite_rng(cfg, 4);
    let trials = cfg.trials.unwrap_or(1000);
    let max_relays = cfg.n.unwrap_or(4).clamp(1, 6);

    let mut nnc_violations = 0_usize;
    let mut pdf_violations = 0_usize;
    let mut first_example = None;

    for i in 0..trials {
        let snr = alternating_snr(i);
        let net = random_mimo_net(&mut rng, max_relays, 3, snr);
        let cutset = mimo_cutset_proxy(&net)?;
        let nnc = mimo_nnc_rate(&net)?;
        let pdf = mimo_pdf_rate(&net)?;
        let constants = mimo_gap_constants(net.n_s(), net.n_d(), net.antennas());

        for (rate, scheme) in [(nnc, "nnc"), (pdf, "pdf")] {
            if cutset - rate < -1e-9 {
                return Ok(SuiteOutcome::fail(
                    NAME,
                    format!(
                        "{scheme} rate exceeds the cutset proxy by {} bits\ninstance: {}",
                        rate - cutset,
                        mimo_to_json(&net)
                    ),
                ));
            }
        }
        let nnc_gap = cutset - nnc;
        let pdf_gap = cutset - pdf;
        if nnc_gap > constants.g1 + 1e-9 {
            nnc_violations += 1;
            first_example.get_or_insert_with(|| {
                format!(
                    "nnc gap {} exceeds G1 = {} at snr {snr}\ninstance: {}",
                    nnc_gap,
                    constants.g1,
                    mimo_to_json(&net)
                )
            });
        }
        if pdf_gap > constants.g2 + 1e-9 {
            pdf_violations += 1;
            first_example.get_or_insert_with(|| {
                format!(
                    "pdf gap {} exceeds G2 = {} at snr {snr}\ninstance: {}",
                    pdf_gap,
                    constants.g2,
                    mimo_to_json(&net)
                )
            });
        }
    }

    if nnc_violations + pdf_violations > 0 {
        return Ok(SuiteOutcome::fail(
            NAME,
            format!(
                "{nnc_violations}/{trials} nnc gaps exceeded G1 and {pdf_violations}/{trials} \
                 pdf gaps exceeded G2; first counterexample:\n{}",
                first_example.unwrap_or_default()
            ),
        ));
    }
    Ok(SuiteOutcome::pass(
        NAME,
        format!("{trials} random MIMO networks: nnc within G1 and pdf within G2"),
    ))
}

fn suite_reduction(cfg: &CheckConfig) -> Result<SuiteOutcome> {
    const NAME: &str = "reduction";
    let mut rng = suite_rng(cfg, 5);
    let trials = cfg.trials.unwrap_or(100);
    let n_max = cfg.n.unwrap_or(8).clamp(1, 12);

    for i in 0..trials {
        let n = i % n_max + 1;
        let snr = alternating_snr(i);
        let net = random_scalar_net(&mut rng, n, snr);
        let lifted = scalar_to_mimo(&net);
        let pairs = [
            (scalar::nnc_rate(&net)?, mimo_nnc_rate(&lifted)?, "nnc"),
            (scalar::pdf_rate(&net)?, mimo_pdf_rate(&lifted)?, "pdf"),
        ];
        for (scalar_rate, mimo_rate, which) in pairs {
            if (scalar_rate - mimo_rate).abs() > 1e-12 {
                return Ok(SuiteOutcome::fail(
                    NAME,
                    format!(
                        "{which} disagrees between the scalar and single-antenna MIMO paths: \
                         {scalar_rate} vs {mimo_rate}\ninstance: {}",
                        scalar_to_json(&net)
                    ),
                ));
            }
        }
    }

    Ok(SuiteOutcome::pass(
        NAME,
        format!("{trials} networks: single-antenna MIMO matches scalar within 1e-12"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> CheckConfig {
        CheckConfig {
            trials: Some(20),
            n: Some(5),
            seed: 0,
        }
    }

    #[test]
    fn polymatroid_suite_passes() {
        let out = suite_polymatroid(&quick_cfg()).unwrap();
        assert!(out.passed, "{}", out.detail);
    }

    #[test]
    fn edmonds_suite_passes() {
        let out = suite_edmonds(&quick_cfg()).unwrap();
        assert!(out.passed, "{}", out.detail);
    }

    #[test]
    fn lemma1_suite_passes() {
        let mut cfg = quick_cfg();
        cfg.trials = Some(500);
        cfg.n = Some(4);
        let out = suite_lemma1(&cfg).unwrap();
        assert!(out.passed, "{}", out.detail);
    }

    #[test]
    fn reduction_suite_passes() {
        let out = suite_reduction(&quick_cfg()).unwrap();
        assert!(out.passed, "{}", out.detail);
    }

    #[test]
    fn remark12_suite_reports_instead_of_erroring() {
        // The nnc bound does not hold across this ensemble (see the
        // acceptance tests); the suite must report that as a failed
        // outcome with a replayable counterexample, not abort.
        let mut cfg = quick_cfg();
        cfg.trials = Some(300);
        cfg.n = Some(4);
        let out = suite_remark12(&cfg).unwrap();
        if !out.passed {
            assert!(out.detail.contains("relays"), "{}", out.detail);
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nonsense", &quick_cfg()).is_err());
    }

    #[test]
    fn run_all_covers_every_suite() {
        let mut cfg = quick_cfg();
        cfg.trials = Some(5);
        let outcomes = run_all(&cfg).unwrap();
        let names: Vec<&str> = outcomes.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, SUITE_NAMES);
    }

    #[test]
    fn suites_are_deterministic() {
        let out1 = suite_remark12(&quick_cfg()).unwrap();
        let out2 = suite_remark12(&quick_cfg()).unwrap();
        assert_eq!(out1.passed, out2.passed);
        assert_eq!(out1.detail, out2.detail);
    }
}
