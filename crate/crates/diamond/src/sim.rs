//! Seeded Monte Carlo studies of the gap between the cutset proxy and the
//! achievable schemes, over random channel ensembles.
//!
//! Each trial draws one static scalar network — Rayleigh fading
//! (every coefficient i.i.d. circularly symmetric complex Gaussian with
//! unit variance) or log-normal shadowing (real magnitudes 10^(−X/10) with
//! X ~ Normal(0, σ_dB²)) — evaluates the configured schemes on it, and
//! records per-scheme gaps
//!
//! ```text
//! gap = cutset_proxy − scheme_rate        (bits)
//! ```
//!
//! Two bounds are enforced on every sample as hard assertions, because a
//! violation can only mean an implementation bug:
//!
//! ```text
//! pdf gap ≤ 2·log₂ n + 1e−9              (when pdf is evaluated)
//! nnc gap ≤ log₂(n+1) + log₂ n + 1 + 1e−9 (when nnc is evaluated)
//! every gap ≥ −1e−9
//! ```
//!
//! Trials are independent: trial `t` uses a dedicated RNG substream derived
//! from (seed, t), so serial and parallel runs produce bit-identical
//! results. Gap samples export to CSV with a sibling `.summary.json`
//! carrying summary statistics and fixed-width histograms.

use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::instance::scalar_to_json;
use crate::scalar::{self, ScalarDiamond};
use crate::strategies::{self, AfMode};
use crate::{Error, Result};

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

// --- configuration -------------------------------------------------------

/// Channel ensemble to draw instances from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    /// Every coefficient i.i.d. CN(0, 1): re and im each N(0, 1/2).
    Rayleigh,
    /// Log-normal shadowing: each coefficient is the real positive number
    /// 10^(−X/10) with X ~ Normal(0, σ_dB²). Phases are omitted; every
    /// evaluated rate is phase-invariant.
    Shadow,
}

impl FromStr for ChannelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rayleigh" => Ok(Self::Rayleigh),
            "shadow" => Ok(Self::Shadow),
            other => Err(Error::InvalidInput(format!(
                "unknown channel model `{other}` (expected `rayleigh` or `shadow`)"
            ))),
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rayleigh => "rayleigh",
            Self::Shadow => "shadow",
        })
    }
}

/// A relaying scheme whose gap to the cutset proxy is tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Partial decode-and-forward.
    Pdf,
    /// Amplify-and-forward with optimized scaling magnitudes.
    AfOpt,
    /// Amplify-and-forward at maximum per-relay power.
    AfNaive,
    /// Route through the single best relay.
    BestRelay,
    /// Per-instance maximum over pdf, both af modes, and best relay.
    BestOf,
    /// Noisy network coding. Not in [`Scheme::default_set`]; opt in
    /// explicitly to track its gap.
    Nnc,
}

impl Scheme {
    /// Stable lowercase identifier, used in CSV output and CLI flags.
    pub fn name(self) -> &'static str {
        match self {
            Self::Pdf => "pdf",
            Self::AfOpt => "af_opt",
            Self::AfNaive => "af_naive",
            Self::BestRelay => "best_relay",
            Self::BestOf => "best_of",
            Self::Nnc => "nnc",
        }
    }

    /// The default scheme set: everything except nnc.
    pub fn default_set() -> Vec<Scheme> {
        vec![
            Self::Pdf,
            Self::AfOpt,
            Self::AfNaive,
            Self::BestRelay,
            Self::BestOf,
        ]
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pdf" => Ok(Self::Pdf),
            "af_opt" => Ok(Self::AfOpt),
            "af_naive" => Ok(Self::AfNaive),
            "best_relay" => Ok(Self::BestRelay),
            "best_of" => Ok(Self::BestOf),
            "nnc" => Ok(Self::Nnc),
            other => Err(Error::InvalidInput(format!(
                "unknown scheme `{other}` (expected one of pdf, af_opt, af_naive, best_relay, \
                 best_of, nnc)"
            ))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Number of relays.
    pub n: usize,
    /// Linear SNR (transmit power over unit noise).
    pub snr: f64,
    /// Channel ensemble.
    pub dist: ChannelModel,
    /// Shadowing standard deviation in dB; only consulted for
    /// [`ChannelModel::Shadow`].
    pub shadow_std_db: f64,
    /// Number of independent channel draws.
    pub trials: usize,
    /// Master seed; trial `t` uses substream `t + 1` of this seed.
    pub seed: u64,
    /// Schemes to evaluate, in output order.
    pub schemes: Vec<Scheme>,
    /// Worker threads for trial evaluation; 0 uses the global default pool.
    /// Results are identical for every setting.
    pub threads: usize,
    /// Histogram bin width in bits.
    pub bin_width: f64,
}

impl SimConfig {
    /// A configuration with the customary defaults: shadowing σ = 7 dB,
    /// 10⁴ trials, seed 0, the default scheme set, global thread pool,
    /// and 0.25-bit histogram bins.
    pub fn new(n: usize, snr: f64, dist: ChannelModel) -> Self {
        Self {
            n,
            snr,
            dist,
            shadow_std_db: 7.0,
            trials: 10_000,
            seed: 0,
            schemes: Scheme::default_set(),
            threads: 0,
            bin_width: 0.25,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("need at least one relay".into()));
        }
        if !(self.snr > 0.0 && self.snr.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "snr must be positive and finite, got {}",
                self.snr
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if !(self.shadow_std_db >= 0.0 && self.shadow_std_db.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "shadow-std must be nonnegative and finite, got {}",
                self.shadow_std_db
            )));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "bin width must be positive and finite, got {}",
                self.bin_width
            )));
        }
        let mut seen = Vec::new();
        for &s in &self.schemes {
            if seen.contains(&s) {
                return Err(Error::InvalidInput(format!(
                    "scheme `{s}` listed more than once"
                )));
            }
            seen.push(s);
        }
        Ok(())
    }
}

// --- results --------------------------------------------------------------

/// Summary statistics of one scheme's gap samples.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SchemeStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

/// Fixed-width histogram of one scheme's gap samples, binned from 0 to
/// the ceiling of the largest gap.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    /// Bin width in bits.
    pub bin_width: f64,
    /// `counts.len() + 1` bin boundaries: 0, w, 2w, …
    pub edges: Vec<f64>,
    /// Samples per bin; sums to the trial count.
    pub counts: Vec<usize>,
}

/// Per-scheme gap samples from one Monte Carlo run, with derived summary
/// statistics and histograms.
#[derive(Debug, Clone)]
pub struct GapSamples {
    schemes: Vec<Scheme>,
    gaps: Vec<Vec<f64>>,
    stats: Vec<SchemeStats>,
    histograms: Vec<Histogram>,
    trials: usize,
}

impl GapSamples {
    fn from_gaps(schemes: Vec<Scheme>, gaps: Vec<Vec<f64>>, trials: usize, bin_width: f64) -> Self {
        let stats = gaps.iter().map(|g| compute_stats(g)).collect();
        let histograms = gaps.iter().map(|g| bin_gaps(g, bin_width)).collect();
        Self {
            schemes,
            gaps,
            stats,
            histograms,
            trials,
        }
    }

    /// Schemes in output order.
    pub fn schemes(&self) -> &[Scheme] {
        &self.schemes
    }

    /// Gap samples for the k-th scheme, in trial order.
    pub fn gaps(&self, k: usize) -> &[f64] {
        &self.gaps[k]
    }

    /// Summary statistics for the k-th scheme.
    pub fn stats(&self, k: usize) -> SchemeStats {
        self.stats[k]
    }

    /// Histogram for the k-th scheme.
    pub fn histogram(&self, k: usize) -> &Histogram {
        &self.histograms[k]
    }

    /// Number of trials per scheme.
    pub fn trials(&self) -> usize {
        self.trials
    }
}

fn compute_stats(gaps: &[f64]) -> SchemeStats {
    assert!(!gaps.is_empty(), "stats need at least one sample");
    let mut sorted = gaps.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("gaps are finite"));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    SchemeStats {
        min: sorted[0],
        max: sorted[n - 1],
        mean: sorted.iter().sum::<f64>() / n as f64,
        median,
    }
}

fn bin_gaps(gaps: &[f64], bin_width: f64) -> Histogram {
    let max = gaps.iter().fold(0.0_f64, |m, &g| m.max(g));
    let span = max.ceil().max(bin_width);
    let bins = ((span / bin_width).ceil() as usize).max(1);
    let mut counts = vec![0_usize; bins];
    for &g in gaps {
        // Gaps may undershoot 0 by rounding; those land in the first bin.
        let idx = ((g / bin_width).floor().max(0.0) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let edges = (0..=bins).map(|k| k as f64 * bin_width).collect();
    Histogram {
        bin_width,
        edges,
        counts,
    }
}

// --- sampling -------------------------------------------------------------

fn draw_coefficient(dist: ChannelModel, shadow_std_db: f64, rng: &mut impl Rng) -> Complex64 {
    match dist {
        ChannelModel::Rayleigh => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            // CN(0, 1): each component N(0, 1/2).
            Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        }
        ChannelModel::Shadow => {
            let x: f64 = rng.sample::<f64, _>(StandardNormal) * shadow_std_db;
            Complex64::new(10.0_f64.powf(-x / 10.0), 0.0)
        }
    }
}

/// Draw one random network: first the `n` source→relay coefficients, then
/// the `n` relay→destination coefficients, each consuming the generator in
/// a fixed order (real part before imaginary).
pub fn sample_channel(
    n: usize,
    dist: ChannelModel,
    shadow_std_db: f64,
    snr: f64,
    rng: &mut impl Rng,
) -> Result<ScalarDiamond> {
    let h_bc = (0..n)
        .map(|_| draw_coefficient(dist, shadow_std_db, rng))
        .collect();
    let h_mac = (0..n)
        .map(|_| draw_coefficient(dist, shadow_std_db, rng))
        .collect();
    ScalarDiamond::new(h_bc, h_mac, snr)
}

/// Rates computed once per sampled instance and shared by the schemes.
struct TrialRates {
    pdf: Option<f64>,
    af_opt: Option<f64>,
    af_naive: Option<f64>,
    best_relay: Option<f64>,
    nnc: Option<f64>,
}

fn evaluate_trial(cfg: &SimConfig, trial: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64 + 1);
    let net = sample_channel(cfg.n, cfg.dist, cfg.shadow_std_db, cfg.snr, &mut rng)?;
    let cutset = scalar::cutset_proxy(&net)?;

    let wants = |s: Scheme| cfg.schemes.contains(&s);
    let constituents = wants(Scheme::BestOf);
    let rates = TrialRates {
        pdf: (wants(Scheme::Pdf) || constituents)
            .then(|| scalar::pdf_rate(&net))
            .transpose()?,
        af_opt: (wants(Scheme::AfOpt) || constituents)
            .then(|| strategies::af_rate(&net, AfMode::Optimized).rate),
        af_naive: (wants(Scheme::AfNaive) || constituents)
            .then(|| strategies::af_rate(&net, AfMode::Naive).rate),
        best_relay: (wants(Scheme::BestRelay) || constituents)
            .then(|| strategies::best_relay_rate(&net)),
        nnc: wants(Scheme::Nnc)
            .then(|| scalar::nnc_rate(&net))
            .transpose()?,
    };

    let rate_of = |s: Scheme| -> f64 {
        match s {
            Scheme::Pdf => rates.pdf.expect("pdf computed"),
            Scheme::AfOpt => rates.af_opt.expect("af_opt computed"),
            Scheme::AfNaive => rates.af_naive.expect("af_naive computed"),
            Scheme::BestRelay => rates.best_relay.expect("best_relay computed"),
            Scheme::BestOf => [rates.pdf, rates.af_opt, rates.af_naive, rates.best_relay]
                .iter()
                .map(|r| r.expect("constituent computed"))
                .fold(f64::NEG_INFINITY, f64::max),
            Scheme::Nnc => rates.nnc.expect("nnc computed"),
        }
    };

    let constants = scalar::gap_constants_scalar(net.n());
    let mut gaps = Vec::with_capacity(cfg.schemes.len());
    for &scheme in &cfg.schemes {
        let gap = cutset - rate_of(scheme);
        if gap < -1e-9 {
            return Err(Error::NegativeGap {
                scheme: scheme.name().to_string(),
                gap,
                instance_json: scalar_to_json(&net),
            });
        }
        let bound = match scheme {
            Scheme::Pdf => Some(constants.g2),
            Scheme::Nnc => Some(constants.g1),
            _ => None,
        };
        if let Some(bound) = bound {
            if gap > bound + 1e-9 {
                return Err(Error::GapBoundViolated {
                    scheme: scheme.name().to_string(),
                    gap,
                    bound,
                    instance_json: scalar_to_json(&net),
                });
            }
        }
        gaps.push(gap);
    }
    Ok(gaps)
}

/// Run the configured number of trials and collect per-scheme gaps.
///
/// Output is bit-identical for identical configurations regardless of
/// `threads`: each trial derives its RNG from (seed, trial index) alone,
/// and results are assembled in trial order. The theorem bounds are
/// enforced on every sample; a violation aborts the run with the offending
/// instance serialized in the error.
pub fn run_monte_carlo(cfg: &SimConfig) -> Result<GapSamples> {
    cfg.validate()?;

    let run = || -> Result<Vec<Vec<f64>>> {
        let per_trial: Vec<Result<Vec<f64>>> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| evaluate_trial(cfg, trial))
            .collect();
        // Surface the lowest-index failure so the reported instance does
        // not depend on scheduling.
        per_trial.into_iter().collect()
    };

    let by_trial = if cfg.threads == 0 {
        run()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Internal(format!("could not build thread pool: {e}")))?;
        pool.install(run)?
    };

    let mut gaps = vec![Vec::with_capacity(cfg.trials); cfg.schemes.len()];
    for trial_gaps in &by_trial {
        for (k, &g) in trial_gaps.iter().enumerate() {
            gaps[k].push(g);
        }
    }
    Ok(GapSamples::from_gaps(
        cfg.schemes.clone(),
        gaps,
        cfg.trials,
        cfg.bin_width,
    ))
}

// --- export ----------------------------------------------------------------

#[derive(Serialize)]
struct SchemeSummary<'a> {
    scheme: &'static str,
    #[serde(flatten)]
    stats: SchemeStats,
    histogram: &'a Histogram,
}

#[derive(Serialize)]
struct RunSummary<'a> {
    trials: usize,
    schemes: Vec<SchemeSummary<'a>>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write raw gap samples as CSV (`scheme,gap_bits`, one row per sample,
/// schemes in configured order) plus a sibling `.summary.json` with the
/// summary statistics and histograms.
pub fn export(gs: &GapSamples, path: &Path) -> Result<()> {
    let mut csv = String::from("scheme,gap_bits\n");
    for (k, scheme) in gs.schemes().iter().enumerate() {
        for gap in gs.gaps(k) {
            // f64 Display round-trips exactly, so re-parsing the CSV
            // reproduces the statistics and reruns diff byte-for-byte.
            csv.push_str(scheme.name());
            csv.push(',');
            csv.push_str(&gap.to_string());
            csv.push('\n');
        }
    }
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    file.write_all(csv.as_bytes()).map_err(io_err(path))?;

    let summary = RunSummary {
        trials: gs.trials(),
        schemes: gs
            .schemes()
            .iter()
            .enumerate()
            .map(|(k, s)| SchemeSummary {
                scheme: s.name(),
                stats: gs.stats(k),
                histogram: gs.histogram(k),
            })
            .collect(),
    };
    let summary_path = path.with_extension("summary.json");
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Internal(format!("summary serialization failed: {e}")))?;
    std::fs::write(&summary_path, text).map_err(io_err(&summary_path))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SimConfig {
        let mut cfg = SimConfig::new(4, 10.0, ChannelModel::Rayleigh);
        cfg.trials = 50;
        cfg.seed = 7;
        cfg
    }

    #[test]
    fn shadow_with_zero_std_gives_unit_magnitudes() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let net = sample_channel(5, ChannelModel::Shadow, 0.0, 1.0, &mut rng).unwrap();
        for h in net.h_bc().iter().chain(net.h_mac()) {
            assert_eq!(h.norm(), 1.0);
            assert_eq!(h.im, 0.0);
        }
    }

    #[test]
    fn rayleigh_mean_square_magnitude_is_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut sum = 0.0;
        let mut count = 0;
        for _ in 0..10_000 {
            let net = sample_channel(5, ChannelModel::Rayleigh, 7.0, 1.0, &mut rng).unwrap();
            for h in net.h_bc().iter().chain(net.h_mac()) {
                sum += h.norm_sqr();
                count += 1;
            }
        }
        let mean = sum / f64::from(count);
        assert!((0.99..=1.01).contains(&mean), "mean |h|^2 = {mean}");
    }

    #[test]
    fn shadow_median_magnitude_is_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut mags = Vec::with_capacity(100_000);
        for _ in 0..10_000 {
            let net = sample_channel(5, ChannelModel::Shadow, 7.0, 1.0, &mut rng).unwrap();
            for h in net.h_bc().iter().chain(net.h_mac()) {
                mags.push(h.norm());
            }
        }
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = mags[mags.len() / 2];
        assert!((0.97..=1.03).contains(&median), "median |h| = {median}");
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = small_cfg();
        let a = run_monte_carlo(&cfg).unwrap();
        let b = run_monte_carlo(&cfg).unwrap();
        for k in 0..cfg.schemes.len() {
            assert_eq!(a.gaps(k), b.gaps(k));
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut cfg = small_cfg();
        cfg.threads = 1;
        let serial = run_monte_carlo(&cfg).unwrap();
        cfg.threads = 3;
        let parallel = run_monte_carlo(&cfg).unwrap();
        for k in 0..cfg.schemes.len() {
            assert_eq!(serial.gaps(k), parallel.gaps(k));
        }
    }

    #[test]
    fn single_trial_pdf_gap_obeys_the_two_log_n_bound() {
        let mut cfg = SimConfig::new(10, 1000.0, ChannelModel::Rayleigh);
        cfg.trials = 1;
        cfg.seed = 42;
        cfg.schemes = vec![Scheme::Pdf];
        let gs = run_monte_carlo(&cfg).unwrap();
        let gap = gs.gaps(0)[0];
        assert!(gap >= 0.0, "gap = {gap}");
        assert!(gap <= 2.0 * 10.0_f64.log2(), "gap = {gap}");
    }

    #[test]
    fn nnc_can_be_tracked_and_obeys_its_bound() {
        let mut cfg = small_cfg();
        cfg.schemes = vec![Scheme::Nnc, Scheme::Pdf];
        cfg.trials = 100;
        let gs = run_monte_carlo(&cfg).unwrap();
        let g1 = scalar::gap_constants_scalar(cfg.n).g1;
        for &gap in gs.gaps(0) {
            assert!((-1e-9..=g1 + 1e-9).contains(&gap), "nnc gap = {gap}");
        }
    }

    #[test]
    fn best_of_gap_is_the_smallest_constituent_gap() {
        let cfg = small_cfg();
        let gs = run_monte_carlo(&cfg).unwrap();
        let idx = |s: Scheme| cfg.schemes.iter().position(|&x| x == s).unwrap();
        let best = idx(Scheme::BestOf);
        for t in 0..cfg.trials {
            let others = [
                Scheme::Pdf,
                Scheme::AfOpt,
                Scheme::AfNaive,
                Scheme::BestRelay,
            ]
            .map(|s| gs.gaps(idx(s))[t]);
            let min = others.iter().fold(f64::INFINITY, |m, &g| m.min(g));
            assert!((gs.gaps(best)[t] - min).abs() < 1e-12);
        }
    }

    #[test]
    fn histogram_covers_all_samples_with_quarter_bit_bins() {
        let cfg = small_cfg();
        let gs = run_monte_carlo(&cfg).unwrap();
        for k in 0..cfg.schemes.len() {
            let h = gs.histogram(k);
            assert_eq!(h.bin_width, 0.25);
            assert_eq!(h.edges.len(), h.counts.len() + 1);
            assert_eq!(h.edges[0], 0.0);
            assert_eq!(h.counts.iter().sum::<usize>(), cfg.trials);
            let max = gs.stats(k).max;
            assert!(*h.edges.last().unwrap() >= max.ceil());
        }
    }

    #[test]
    fn export_round_trips_the_statistics() {
        let mut cfg = small_cfg();
        cfg.trials = 200;
        let gs = run_monte_carlo(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gaps.csv");
        export(&gs, &path).unwrap();

        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("scheme,gap_bits"));
        let mut parsed: Vec<(String, f64)> = Vec::new();
        for line in lines {
            let (scheme, gap) = line.split_once(',').unwrap();
            parsed.push((scheme.to_string(), gap.parse().unwrap()));
        }
        assert_eq!(parsed.len(), cfg.trials * cfg.schemes.len());

        for (k, scheme) in gs.schemes().iter().enumerate() {
            let gaps: Vec<f64> = parsed
                .iter()
                .filter(|(s, _)| s == scheme.name())
                .map(|&(_, g)| g)
                .collect();
            let re = compute_stats(&gaps);
            let orig = gs.stats(k);
            assert!((re.min - orig.min).abs() < 1e-9);
            assert!((re.max - orig.max).abs() < 1e-9);
            assert!((re.mean - orig.mean).abs() < 1e-9);
            assert!((re.median - orig.median).abs() < 1e-9);
        }

        let summary_text = std::fs::read_to_string(dir.path().join("gaps.summary.json")).unwrap();
        let summary: serde_json::Value = serde_json::from_str(&summary_text).unwrap();
        assert_eq!(summary["trials"], 200);
        assert_eq!(
            summary["schemes"][0]["scheme"].as_str(),
            Some(gs.schemes()[0].name())
        );
    }

    #[test]
    fn empty_scheme_set_exports_a_header_only_csv() {
        let mut cfg = small_cfg();
        cfg.schemes = Vec::new();
        cfg.trials = 5;
        let gs = run_monte_carlo(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        export(&gs, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "scheme,gap_bits\n");
    }

    #[test]
    fn one_trial_one_scheme_is_a_two_line_csv() {
        let mut cfg = small_cfg();
        cfg.schemes = vec![Scheme::BestRelay];
        cfg.trials = 1;
        let gs = run_monte_carlo(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        export(&gs, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("best_relay,"));
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        let mut cfg = small_cfg();
        cfg.trials = 0;
        assert!(run_monte_carlo(&cfg).is_err());

        let mut cfg = small_cfg();
        cfg.snr = -1.0;
        assert!(run_monte_carlo(&cfg).is_err());

        let mut cfg = small_cfg();
        cfg.schemes = vec![Scheme::Pdf, Scheme::Pdf];
        assert!(run_monte_carlo(&cfg).is_err());
    }

    #[test]
    fn scheme_names_round_trip_through_from_str() {
        for scheme in [
            Scheme::Pdf,
            Scheme::AfOpt,
            Scheme::AfNaive,
            Scheme::BestRelay,
            Scheme::BestOf,
            Scheme::Nnc,
        ] {
            assert_eq!(scheme.name().parse::<Scheme>().unwrap(), scheme);
        }
        assert!("decode_everything".parse::<Scheme>().is_err());
        assert!(!Scheme::default_set().contains(&Scheme::Nnc));
    }
}
