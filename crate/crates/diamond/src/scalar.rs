//! Scalar (single-antenna) diamond-network bounds and rates.
//!
//! A diamond network is a two-hop relay network: a source broadcasts to N
//! parallel relays, which talk to the destination over a multiple-access
//! channel; there is no direct source–destination link. This module computes,
//! for one channel realization:
//!
//! * [`cutset_proxy`] — an upper bound on capacity (a closed-form relaxation
//!   of the cutset bound with independent inputs and receive beamforming),
//! * [`nnc_rate`] — the rate achieved by noisy network coding with coarse
//!   (variance N·σ²) quantization at the relays,
//! * [`pdf_rate`] — the rate achieved by partial decode-and-forward, via
//!   polymatroid intersection,
//! * [`gap_constants_scalar`] — the worst-case bound-minus-rate guarantees
//!   for the two strategies.
//!
//! All rates are in bits per channel use; every logarithm is base 2. SNR is
//! the linear-scale ratio P/σ². Rate formulas depend on the channel
//! coefficients only through their magnitudes; phases matter solely to the
//! amplify-and-forward strategy (see the `strategies` module).

use num_complex::Complex64;

use crate::util::{log2p1, SubsetSums};
use crate::{Error, Result};

/// Hard cap on relay count for the subset-enumerating operations: they all
/// walk 2^N cuts, and every theorem check in this crate runs at N ≤ 12.
pub const MAX_SCALAR_RELAYS: usize = 30;

/// One scalar diamond-network instance: complex gains for both hops plus SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarDiamond {
    h_bc: Vec<Complex64>,
    h_mac: Vec<Complex64>,
    snr: f64,
}

impl ScalarDiamond {
    /// Create an instance from the broadcast-hop gains `h_bc` (source →
    /// relay i), the multiple-access-hop gains `h_mac` (relay i →
    /// destination), and the linear SNR.
    ///
    /// Requires at least one relay, matching gain-vector lengths, finite
    /// coefficients, and a positive finite SNR. Zero coefficients are legal
    /// (dead links).
    pub fn new(h_bc: Vec<Complex64>, h_mac: Vec<Complex64>, snr: f64) -> Result<Self> {
        if h_bc.is_empty() {
            return Err(Error::InvalidInput(
                "a diamond network needs at least one relay".into(),
            ));
        }
        if h_bc.len() != h_mac.len() {
            return Err(Error::InvalidInput(format!(
                "gain vectors disagree on relay count: h_bc has {}, h_mac has {}",
                h_bc.len(),
                h_mac.len()
            )));
        }
        if let Some(h) = h_bc.iter().chain(&h_mac).find(|h| !h.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "channel coefficient {h} is not finite"
            )));
        }
        if !(snr > 0.0 && snr.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "snr must be positive and finite, got {snr}"
            )));
        }
        Ok(Self { h_bc, h_mac, snr })
    }

    /// Number of relays N.
    pub fn n(&self) -> usize {
        self.h_bc.len()
    }

    /// Broadcast-hop gains h_{is}, one per relay.
    pub fn h_bc(&self) -> &[Complex64] {
        &self.h_bc
    }

    /// Multiple-access-hop gains h_{id}, one per relay.
    pub fn h_mac(&self) -> &[Complex64] {
        &self.h_mac
    }

    /// Linear SNR = P/σ².
    pub fn snr(&self) -> f64 {
        self.snr
    }

    /// |h_{is}|² per relay.
    pub(crate) fn bc_gains_sq(&self) -> Vec<f64> {
        self.h_bc.iter().map(|h| h.norm_sqr()).collect()
    }

    /// |h_{id}|² per relay.
    pub(crate) fn mac_gains_sq(&self) -> Vec<f64> {
        self.h_mac.iter().map(|h| h.norm_sqr()).collect()
    }
}

/// Worst-case gap guarantees, in bits: `g1` bounds cutset-proxy − NNC rate,
/// `g2` bounds cutset-proxy − PDF rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConstants {
    /// Gap guarantee for noisy network coding.
    pub g1: f64,
    /// Gap guarantee for partial decode-and-forward.
    pub g2: f64,
}

/// Gap constants for an N-relay single-antenna network:
/// g1 = log₂(N+1) + log₂N + 1 and g2 = 2·log₂N.
///
/// For every N ≥ 1, g1 ≥ g2 ≥ 0. Panics if `n` is zero.
pub fn gap_constants_scalar(n: usize) -> GapConstants {
    assert!(n >= 1, "gap constants need at least one relay");
    let nf = n as f64;
    GapConstants {
        g1: (nf + 1.0).log2() + nf.log2() + 1.0,
        g2: 2.0 * nf.log2(),
    }
}

fn check_size(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_SCALAR_RELAYS {
        return Err(Error::SizeLimit {
            what,
            n,
            max: MAX_SCALAR_RELAYS,
        });
    }
    Ok(())
}

/// Upper bound on network capacity: the independent-input cutset relaxation
///
/// ```text
/// min over Λ ⊆ {1..N} of
///     log₂(1 + SNR·Σ_{i∉Λ} |h_is|²)  +  log₂(1 + SNR·(Σ_{i∈Λ} |h_id|)²)
/// ```
///
/// The first term is the broadcast cut into the relays outside Λ; the second
/// is the coherent (beamforming) multiple-access cut out of Λ, which is why
/// the magnitudes are summed before squaring. Enumerates all 2^N cuts;
/// rejects N > [`MAX_SCALAR_RELAYS`].
pub fn cutset_proxy(net: &ScalarDiamond) -> Result<f64> {
    let n = net.n();
    check_size("cutset_proxy", n)?;
    let bc_sq = net.bc_gains_sq();
    let mac_abs: Vec<f64> = net.h_mac.iter().map(|h| h.norm()).collect();
    let bc = SubsetSums::new(&bc_sq);
    let mac = SubsetSums::new(&mac_abs);
    let full = ((1u64 << n) - 1) as u32;
    let snr = net.snr;

    let mut best = f64::INFINITY;
    for mask in 0..=full {
        let beam = mac.get(mask);
        let value = log2p1(snr * bc.get(full ^ mask)) + log2p1(snr * beam * beam);
        if value < best {
            best = value;
        }
    }
    Ok(best)
}

/// Achievable rate of noisy network coding when every relay quantizes its
/// observation at noise level N·σ² (coarse quantization):
///
/// ```text
/// max(0, min over Λ of
///     log₂(1 + Σ_{i∉Λ} |h_is|²·SNR/(N+1))
///   + log₂(1 + Σ_{i∈Λ} |h_id|²·SNR)
///   − |Λ|·log₂(1 + 1/N))
/// ```
///
/// The expression can go negative for degenerate gains, and an achievable
/// rate is nonnegative by definition, so the result is clamped at zero.
/// Always ≤ [`cutset_proxy`]. Same size guard.
pub fn nnc_rate(net: &ScalarDiamond) -> Result<f64> {
    let n = net.n();
    check_size("nnc_rate", n)?;
    let bc_sq = net.bc_gains_sq();
    let mac_sq = net.mac_gains_sq();
    let bc = SubsetSums::new(&bc_sq);
    let mac = SubsetSums::new(&mac_sq);
    let full = ((1u64 << n) - 1) as u32;
    let snr = net.snr;
    let nf = n as f64;
    let quant_penalty = log2p1(1.0 / nf);

    let mut best = f64::INFINITY;
    for mask in 0..=full {
        let value = log2p1(bc.get(full ^ mask) * snr / (nf + 1.0)) + log2p1(mac.get(mask) * snr)
            - f64::from(mask.count_ones()) * quant_penalty;
        if value < best {
            best = value;
        }
    }
    Ok(best.max(0.0))
}

/// Achievable rate of partial decode-and-forward:
///
/// ```text
/// min over Λ of
///     log₂(1 + Σ_{i∉Λ} |h_is|²·SNR/N)  +  log₂(1 + Σ_{i∈Λ} |h_id|²·SNR)
/// ```
///
/// The source splits its message across the relays; each relay decodes its
/// share on the broadcast hop (equal power split SNR/N, a dual-MAC inner
/// bound on the broadcast region) and re-encodes it on the multiple-access
/// hop. The min-over-cuts form is the value of the polymatroid-intersection
/// LP, and for N ≤ 20 the computation delegates to
/// [`crate::polymatroid::edmonds_max_sum`] on the two set functions; beyond
/// that (SetFunction storage is capped) the same minimum is evaluated by
/// streaming enumeration. Always ≤ [`cutset_proxy`], and the gap is at most
/// 2·log₂N bits. Same size guard.
pub fn pdf_rate(net: &ScalarDiamond) -> Result<f64> {
    let n = net.n();
    check_size("pdf_rate", n)?;
    if n <= crate::polymatroid::MAX_SET_FUNCTION_GROUND {
        let (f, g) = pdf_set_functions(net)?;
        return Ok(crate::polymatroid::edmonds_max_sum(&f, &g)?.value);
    }

    let bc_sq = net.bc_gains_sq();
    let mac_sq = net.mac_gains_sq();
    let bc = SubsetSums::new(&bc_sq);
    let mac = SubsetSums::new(&mac_sq);
    let full = ((1u64 << n) - 1) as u32;
    let snr = net.snr;
    let nf = n as f64;

    let mut best = f64::INFINITY;
    for mask in 0..=full {
        let value = log2p1(bc.get(full ^ mask) * snr / nf) + log2p1(mac.get(mask) * snr);
        if value < best {
            best = value;
        }
    }
    Ok(best)
}

/// The two rate set functions whose polymatroid intersection defines
/// [`pdf_rate`]: `f` over multiple-access cuts, `g` over broadcast cuts,
///
/// ```text
/// f(S) = log₂(1 + SNR·Σ_{i∈S} |h_id|²)
/// g(S) = log₂(1 + (SNR/N)·Σ_{i∈S} |h_is|²)
/// ```
///
/// Both are polymatroids over the relay ground set. Storage caps the relay
/// count at [`crate::polymatroid::MAX_SET_FUNCTION_GROUND`].
pub fn pdf_set_functions(
    net: &ScalarDiamond,
) -> Result<(
    crate::polymatroid::SetFunction,
    crate::polymatroid::SetFunction,
)> {
    let f = crate::polymatroid::mac_set_function(&net.mac_gains_sq(), net.snr)?;
    let g = crate::polymatroid::bc_lower_set_function(&net.bc_gains_sq(), net.snr)?;
    Ok((f, g))
}
