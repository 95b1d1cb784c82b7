//! Crate-wide error type.
//!
//! Every fallible operation in the library reports through [`Error`]; the CLI
//! maps these onto its stable exit codes (see `main.rs`).

use thiserror::Error;

/// Errors produced by the diamond-network library.
#[derive(Debug, Error)]
pub enum Error {
    /// An input failed basic validation (non-finite value, nonpositive SNR,
    /// negative gain, empty relay list, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A size guard tripped: the operation enumerates subsets (or stores all
    /// 2^n values) and the ground set is too large for that to be sane.
    #[error("{what}: n = {n} exceeds the supported maximum {max}")]
    SizeLimit {
        /// Operation or type that enforces the limit.
        what: &'static str,
        /// Requested ground-set size.
        n: usize,
        /// Hard cap for this operation.
        max: usize,
    },

    /// Two set functions (or a set function and a rate vector) disagree on
    /// the ground-set size.
    #[error("ground-set mismatch: {left} vs {right} elements")]
    GroundSetMismatch {
        /// Size on the left-hand argument.
        left: usize,
        /// Size on the right-hand argument.
        right: usize,
    },

    /// A matrix expected to be Hermitian was not, beyond tolerance.
    #[error("matrix is not Hermitian: max |A - A^†| entry = {asymmetry:.3e}")]
    NotHermitian {
        /// Largest absolute deviation between the matrix and its adjoint.
        asymmetry: f64,
    },

    /// A Gram matrix had an eigenvalue materially below zero.
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPsd {
        /// Most negative eigenvalue found.
        min_eigenvalue: f64,
    },

    /// Waterfilling was asked to spread a nonpositive power budget.
    #[error("waterfilling requires a positive total power, got {0}")]
    NonpositivePower(f64),

    /// Waterfilling was given no channel mode with positive gain.
    #[error("waterfilling requires at least one mode with positive gain")]
    NoPositiveMode,

    /// A superposition power split allocates more than the power budget.
    #[error("power split sums to {total}, which exceeds the budget of 1")]
    PowerSplitTooLarge {
        /// Sum of the requested power fractions.
        total: f64,
    },

    /// The rate-point LP failed; cannot happen for valid polymatroid inputs,
    /// so this indicates a bug or a non-polymatroid set function.
    #[error("internal error: {0}")]
    Internal(String),

    /// An instance file could not be parsed.
    #[error("parse error in {path}: {message}")]
    Parse {
        /// File that failed to parse.
        path: String,
        /// What went wrong, naming the offending field/position.
        message: String,
    },

    /// A Monte Carlo hard assertion fired: some sampled instance violated a
    /// theorem gap bound. Carries the offending instance as JSON so the case
    /// can be replayed.
    #[error(
        "gap bound violated for scheme `{scheme}`: gap = {gap} bits > bound = {bound} bits\n\
         offending instance: {instance_json}"
    )]
    GapBoundViolated {
        /// Scheme whose gap exceeded its theorem bound.
        scheme: String,
        /// Observed gap in bits.
        gap: f64,
        /// The bound that was exceeded.
        bound: f64,
        /// The sampled instance, serialized in the CLI instance-file format.
        instance_json: String,
    },

    /// A Monte Carlo hard assertion fired: an achievable rate exceeded the
    /// cutset proxy, i.e. a sampled gap came out materially negative.
    #[error(
        "achievable rate exceeded the cutset proxy for scheme `{scheme}`: gap = {gap} bits\n\
         offending instance: {instance_json}"
    )]
    NegativeGap {
        /// Scheme whose rate exceeded the upper bound.
        scheme: String,
        /// Observed (negative) gap in bits.
        gap: f64,
        /// The sampled instance, serialized in the CLI instance-file format.
        instance_json: String,
    },

    /// Underlying I/O failure (reading instances, writing exports).
    #[error("I/O error on {path}: {source}")]
    Io {
        /// Path involved in the failed operation.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
}
