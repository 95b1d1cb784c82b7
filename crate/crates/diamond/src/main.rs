//! Command-line interface: `bounds` evaluates one network instance,
//! `simulate` runs a seeded Monte Carlo gap study, and `check` runs the
//! randomized self-check suites.
//!
//! Exit codes are a stable contract:
//!
//! ```text
//! 0  success
//! 1  a check suite failed
//! 2  input error (flags, instance files, sizes)
//! 3  internal invariant violation (numerics, theorem bound exceeded)
//! 4  simulation hard assertion fired
//! ```

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde_json::json;

use diamond::checks::{run_all, run_suite, CheckConfig};
use diamond::instance::{load_instance, mimo_to_scalar, scalar_to_mimo, Instance};
use diamond::mimo::{
    mimo_cutset_proxy, mimo_gap_constants, mimo_nnc_rate, mimo_pdf_rate, mimo_pdf_set_functions,
    MimoDiamond,
};
use diamond::polymatroid::{find_max_rate_point, SetFunction, MAX_RATE_POINT};
use diamond::scalar::{
    cutset_proxy, gap_constants_scalar, nnc_rate, pdf_rate, pdf_set_functions, GapConstants,
    ScalarDiamond,
};
use diamond::sim::{export, run_monte_carlo, ChannelModel, Scheme, SimConfig};
use diamond::strategies::{af_rate, best_relay_rate, AfMode};
use diamond::Error;

/// Tolerance for the dual-path comparison behind `--cross-check`.
const CROSS_CHECK_TOL: f64 = 1e-12;
/// Slack when re-verifying theorem bounds on a single instance.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "diamond",
    version,
    about = "Capacity bounds and achievable rates for Gaussian diamond relay networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bounds, rates, and gaps for one instance file
    Bounds {
        /// JSON instance file (scalar or MIMO form)
        file: PathBuf,
        /// Recompute nnc and pdf through the other representation
        /// (scalar ↔ single-antenna MIMO) and require agreement
        #[arg(long)]
        cross_check: bool,
    },
    /// Monte Carlo study of per-scheme gaps to the cutset proxy
    Simulate {
        /// Number of relays
        #[arg(long, default_value_t = 10)]
        relays: usize,
        /// Linear SNR
        #[arg(long)]
        snr: f64,
        /// Channel ensemble: rayleigh or shadow
        #[arg(long, value_parser = ChannelModel::from_str)]
        dist: ChannelModel,
        /// Shadowing standard deviation in dB
        #[arg(long, default_value_t = 7.0)]
        shadow_std: f64,
        /// Number of channel draws
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path (a sibling .summary.json is written too)
        #[arg(long)]
        out: PathBuf,
        /// Histogram bin width in bits
        #[arg(long, default_value_t = 0.25)]
        bin_width: f64,
        /// Worker threads (0 = library default); results are identical
        /// for every setting
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Comma-separated schemes (default: pdf,af_opt,af_naive,best_relay,best_of)
        #[arg(long, value_delimiter = ',', value_parser = Scheme::from_str)]
        schemes: Option<Vec<Scheme>>,
    },
    /// Run the self-check suites
    Check {
        /// Single suite to run (default: all)
        #[arg(long)]
        suite: Option<String>,
        /// Override the suite's sample count
        #[arg(long)]
        trials: Option<usize>,
        /// Override the suite's maximum instance size
        #[arg(long)]
        n: Option<usize>,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Internal(_) | Error::NotHermitian { .. } | Error::NotPsd { .. } => 3,
        Error::GapBoundViolated { .. } | Error::NegativeGap { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds { file, cross_check } => cmd_bounds(&file, cross_check),
        Command::Simulate {
            relays,
            snr,
            dist,
            shadow_std,
            trials,
            seed,
            out,
            bin_width,
            threads,
            schemes,
        } => {
            let mut cfg = SimConfig::new(relays, snr, dist);
            cfg.shadow_std_db = shadow_std;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.bin_width = bin_width;
            cfg.threads = threads;
            if let Some(schemes) = schemes {
                cfg.schemes = schemes;
            }
            cmd_simulate(&cfg, &out)
        }
        Command::Check {
            suite,
            trials,
            n,
            seed,
        } => cmd_check(suite.as_deref(), &CheckConfig { trials, n, seed }),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

// --- bounds -----------------------------------------------------------------

/// Rate point of the pdf polymatroid intersection, when small enough to
/// solve; `None` renders as JSON null.
fn rate_point_json(f: &SetFunction, g: &SetFunction) -> diamond::Result<serde_json::Value> {
    if f.n() > MAX_RATE_POINT {
        return Ok(serde_json::Value::Null);
    }
    let point = find_max_rate_point(f, g)?;
    Ok(json!(point.rates()))
}

struct ScalarReport {
    cutset: f64,
    nnc: f64,
    pdf: f64,
    constants: GapConstants,
}

fn scalar_report(net: &ScalarDiamond) -> diamond::Result<ScalarReport> {
    Ok(ScalarReport {
        cutset: cutset_proxy(net)?,
        nnc: nnc_rate(net)?,
        pdf: pdf_rate(net)?,
        constants: gap_constants_scalar(net.n()),
    })
}

struct MimoReport {
    cutset: f64,
    nnc: f64,
    pdf: f64,
    constants: GapConstants,
}

fn mimo_report(net: &MimoDiamond) -> diamond::Result<MimoReport> {
    Ok(MimoReport {
        cutset: mimo_cutset_proxy(net)?,
        nnc: mimo_nnc_rate(net)?,
        pdf: mimo_pdf_rate(net)?,
        constants: mimo_gap_constants(net.n_s(), net.n_d(), net.antennas()),
    })
}

fn theorems_hold(cutset: f64, nnc: f64, pdf: f64, constants: &GapConstants) -> bool {
    let nnc_gap = cutset - nnc;
    let pdf_gap = cutset - pdf;
    nnc_gap >= -BOUND_SLACK
        && pdf_gap >= -BOUND_SLACK
        && nnc_gap <= constants.g1 + BOUND_SLACK
        && pdf_gap <= constants.g2 + BOUND_SLACK
}

fn cross_check_scalar(
    net: &ScalarDiamond,
    report: &ScalarReport,
) -> diamond::Result<serde_json::Value> {
    let lifted = scalar_to_mimo(net);
    let nnc = mimo_nnc_rate(&lifted)?;
    let pdf = mimo_pdf_rate(&lifted)?;
    let agree =
        (nnc - report.nnc).abs() <= CROSS_CHECK_TOL && (pdf - report.pdf).abs() <= CROSS_CHECK_TOL;
    Ok(json!({
        "against": "mimo",
        "nnc": nnc,
        "pdf": pdf,
        "tolerance": CROSS_CHECK_TOL,
        "agree": agree,
    }))
}

fn cross_check_mimo(net: &MimoDiamond, report: &MimoReport) -> diamond::Result<serde_json::Value> {
    let projected = mimo_to_scalar(net).map_err(|_| {
        Error::InvalidInput(
            "--cross-check on a MIMO instance requires one antenna at every node".into(),
        )
    })?;
    let nnc = nnc_rate(&projected)?;
    let pdf = pdf_rate(&projected)?;
    let agree =
        (nnc - report.nnc).abs() <= CROSS_CHECK_TOL && (pdf - report.pdf).abs() <= CROSS_CHECK_TOL;
    Ok(json!({
        "against": "scalar",
        "nnc": nnc,
        "pdf": pdf,
        "tolerance": CROSS_CHECK_TOL,
        "agree": agree,
    }))
}

fn cmd_bounds(file: &Path, cross_check: bool) -> diamond::Result<ExitCode> {
    let (output, satisfied, cross_agrees) = match load_instance(file)? {
        Instance::Scalar(net) => {
            let report = scalar_report(&net)?;
            let af_opt = af_rate(&net, AfMode::Optimized).rate;
            let af_naive = af_rate(&net, AfMode::Naive).rate;
            let best_relay = best_relay_rate(&net);
            let best_of = report.pdf.max(af_opt).max(af_naive).max(best_relay);
            let (f, g) = pdf_set_functions(&net)?;
            let satisfied = theorems_hold(report.cutset, report.nnc, report.pdf, &report.constants);
            let cross = cross_check
                .then(|| cross_check_scalar(&net, &report))
                .transpose()?;
            let cross_agrees = cross.as_ref().map(|c| c["agree"] == true);
            let output = json!({
                "network": { "kind": "scalar", "relays": net.n(), "snr": net.snr() },
                "cutset_proxy": report.cutset,
                "nnc": report.nnc,
                "pdf": report.pdf,
                "pdf_rate_point": rate_point_json(&f, &g)?,
                "af_opt": af_opt,
                "af_naive": af_naive,
                "best_relay": best_relay,
                "best_of": best_of,
                "gaps": {
                    "nnc": report.cutset - report.nnc,
                    "pdf": report.cutset - report.pdf,
                    "af_opt": report.cutset - af_opt,
                    "af_naive": report.cutset - af_naive,
                    "best_relay": report.cutset - best_relay,
                    "best_of": report.cutset - best_of,
                },
                "theorem_bounds": { "g1": report.constants.g1, "g2": report.constants.g2 },
                "theorems_satisfied": satisfied,
                "cross_check": cross,
            });
            (output, satisfied, cross_agrees)
        }
        Instance::Mimo(net) => {
            let report = mimo_report(&net)?;
            let (f, g) = mimo_pdf_set_functions(&net)?;
            let satisfied = theorems_hold(report.cutset, report.nnc, report.pdf, &report.constants);
            let cross = cross_check
                .then(|| cross_check_mimo(&net, &report))
                .transpose()?;
            let cross_agrees = cross.as_ref().map(|c| c["agree"] == true);
            let output = json!({
                "network": {
                    "kind": "mimo",
                    "relays": net.n(),
                    "snr": net.snr(),
                    "n_s": net.n_s(),
                    "n_d": net.n_d(),
                    "antennas": net.antennas(),
                },
                "cutset_proxy": report.cutset,
                "nnc": report.nnc,
                "pdf": report.pdf,
                "pdf_rate_point": rate_point_json(&f, &g)?,
                "af_opt": serde_json::Value::Null,
                "af_naive": serde_json::Value::Null,
                "best_relay": serde_json::Value::Null,
                "best_of": serde_json::Value::Null,
                "gaps": {
                    "nnc": report.cutset - report.nnc,
                    "pdf": report.cutset - report.pdf,
                },
                "theorem_bounds": { "g1": report.constants.g1, "g2": report.constants.g2 },
                "theorems_satisfied": satisfied,
                "cross_check": cross,
            });
            (output, satisfied, cross_agrees)
        }
    };

    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("report serializes")
    );
    if !satisfied {
        eprintln!("error: a theorem bound is violated on this instance");
        return Ok(ExitCode::from(3));
    }
    if cross_agrees == Some(false) {
        eprintln!("error: cross-check disagreement between the scalar and MIMO paths");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

// --- simulate ----------------------------------------------------------------

fn cmd_simulate(cfg: &SimConfig, out: &Path) -> diamond::Result<ExitCode> {
    let samples = run_monte_carlo(cfg)?;
    export(&samples, out)?;

    println!(
        "{} trials, {} relays, snr {}, {} channel, seed {}",
        cfg.trials, cfg.n, cfg.snr, cfg.dist, cfg.seed
    );
    println!(
        "{:<12} {:>10} {:>10} {:>10} {:>10}",
        "scheme", "min", "median", "mean", "max"
    );
    for (k, scheme) in samples.schemes().iter().enumerate() {
        let stats = samples.stats(k);
        println!(
            "{:<12} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            scheme.name(),
            stats.min,
            stats.median,
            stats.mean,
            stats.max
        );
    }
    println!(
        "wrote {} and {}",
        out.display(),
        out.with_extension("summary.json").display()
    );
    Ok(ExitCode::SUCCESS)
}

// --- check --------------------------------------------------------------------

fn cmd_check(suite: Option<&str>, cfg: &CheckConfig) -> diamond::Result<ExitCode> {
    let outcomes = match suite {
        Some(name) => vec![run_suite(name, cfg)?],
        None => run_all(cfg)?,
    };
    let mut all_passed = true;
    for outcome in &outcomes {
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", outcome.name, outcome.detail);
        all_passed &= outcome.passed;
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
