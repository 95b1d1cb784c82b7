//! Capacity bounds and achievable rates for the N-relay Gaussian diamond
//! network (source → N parallel relays → destination, no direct link).
//!
//! The crate computes, for scalar and MIMO channel instances:
//!
//! - a cutset-style upper bound ([`scalar::cutset_proxy`],
//!   [`mimo::mimo_cutset_proxy`]),
//! - achievable rates for partial-decode-and-forward, noisy network coding,
//!   amplify-and-forward, best-relay routing, and superposition broadcast
//!   ([`scalar`], [`strategies`], [`mimo`]),
//! - the polymatroid set-function machinery those rates rest on
//!   ([`polymatroid`]),
//! - and seeded Monte Carlo verification that the additive gaps between the
//!   upper bound and the achievable rates stay within their proven
//!   constants ([`sim`], [`checks`]).
//!
//! All rates are in bits per channel use (logs base 2) and all SNRs are
//! linear-scale P/σ². The `diamond` binary exposes the same functionality
//! on the command line; [`instance`] defines its JSON input format.

pub mod checks;
pub mod error;
pub mod instance;
pub mod mimo;
pub mod polymatroid;
pub mod scalar;
pub mod sim;
pub mod strategies;

mod simplex;
mod util;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
