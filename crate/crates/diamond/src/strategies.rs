//! Comparison transmission schemes for the scalar diamond network:
//! best-relay routing, naive and optimized amplify-and-forward, the
//! superposition-coding broadcast rate calculator, and the best-of-all
//! envelope.
//!
//! Amplify-and-forward conventions (normalized σ² = 1, per-node power
//! P = SNR): relay i scales its received signal by a complex β_i subject to
//! the power constraint |β_i|²·(|h_is|²·SNR + 1) ≤ SNR. Phases are free, so
//! both AF modes set arg(β_i) = −arg(h_id·h_is), making every relay's
//! contribution combine coherently at the destination; what remains is a
//! choice of magnitudes, parameterized as fractions cᵢ ∈ [0, 1] of the
//! per-relay maximum amplitude. The end-to-end rate is
//!
//! ```text
//! rate = log₂(1 + SNR_eff),
//! SNR_eff = SNR·|Σᵢ h_id β_i h_is|² / (1 + Σᵢ |h_id β_i|²)
//! ```
//!
//! — the relayed signal power over the forwarded-plus-receiver noise.
//! Naive AF transmits at full power (cᵢ = 1 everywhere); optimized AF
//! maximizes SNR_eff over c ∈ [0, 1]^n by multi-start projected coordinate
//! ascent, each coordinate update being available in closed form.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::polymatroid::RateVector;
use crate::scalar::{self, ScalarDiamond};
use crate::util::log2p1;
use crate::{Error, Result};

/// Starting points for the AF multi-start optimizer: full power, up to three
/// single-relay corners, and random fills up to this total.
const AF_STARTS: usize = 8;

/// Per-sweep objective improvement below which coordinate ascent stops.
const AF_OBJECTIVE_TOL: f64 = 1e-10;

/// Hard cap on coordinate-ascent sweeps per start.
const AF_MAX_SWEEPS: usize = 10_000;

/// Fixed seed for the optimizer's random restarts, so that `af_rate` is a
/// deterministic function of its inputs.
const AF_RESTART_SEED: u64 = 0x5EED_AF01;

/// Which amplify-and-forward variant produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfMode {
    /// Every relay forwards at full power.
    Naive,
    /// Relay amplitudes chosen by numerical maximization of the effective
    /// SNR.
    Optimized,
}

/// An amplify-and-forward operating point: the achieved rate and the
/// per-relay complex scaling coefficients that realize it.
#[derive(Debug, Clone, PartialEq)]
pub struct AfSolution {
    /// Achieved rate, log₂(1 + SNR_eff), in bits per channel use.
    pub rate: f64,
    /// Per-relay amplification coefficients β_i; each satisfies the power
    /// constraint |β_i|²·(|h_is|²·SNR + 1) ≤ SNR.
    pub scalings: Vec<Complex64>,
    /// Variant that produced this solution.
    pub mode: AfMode,
}

/// A split of the source power into per-relay superposition fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSplit {
    powers: Vec<f64>,
}

impl PowerSplit {
    /// Wrap power fractions; each must be finite and ≥ 0, and they may sum
    /// to at most 1 (within 1e−12 slack for arithmetic on the caller's
    /// side).
    pub fn new(powers: Vec<f64>) -> Result<Self> {
        if powers.is_empty() {
            return Err(Error::InvalidInput("power split must be nonempty".into()));
        }
        if let Some(p) = powers.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidInput(format!(
                "power fractions must be finite and nonnegative, got {p}"
            )));
        }
        let total: f64 = powers.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::PowerSplitTooLarge { total });
        }
        Ok(Self { powers })
    }

    /// The split that spends 1/n of the power on each of n relays.
    pub fn equal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("power split must be nonempty".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Number of fractions.
    pub fn len(&self) -> usize {
        self.powers.len()
    }

    /// True when the split is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// The power fractions, indexed by descending-gain rank (entry 0 belongs
    /// to the strongest relay).
    pub fn powers(&self) -> &[f64] {
        &self.powers
    }
}

// ---------------------------------------------------------------------------
// Best relay
// ---------------------------------------------------------------------------

/// Rate of routing through the single best relay: each relay's end-to-end
/// capacity is the minimum of its two point-to-point hops, and the best
/// relay is the one maximizing that minimum.
pub fn best_relay_rate(net: &ScalarDiamond) -> f64 {
    let snr = net.snr();
    net.bc_gains_sq()
        .iter()
        .zip(net.mac_gains_sq())
        .map(|(&bc, mac)| log2p1(snr * bc).min(log2p1(snr * mac)))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Amplify-and-forward
// ---------------------------------------------------------------------------

/// Per-relay constants of the AF objective, derived once from the instance.
struct AfGeometry {
    /// aᵢ = |h_id|·β_max,i·|h_is|: amplitude through relay i at full power.
    a: Vec<f64>,
    /// b²ᵢ = (|h_id|·β_max,i)²: forwarded-noise power at full amplification.
    b2: Vec<f64>,
    /// β_max,i = √(SNR/(|h_is|²·SNR + 1)): largest feasible amplitude.
    beta_max: Vec<f64>,
    snr: f64,
}

impl AfGeometry {
    fn new(net: &ScalarDiamond) -> Self {
        let snr = net.snr();
        let n = net.n();
        let mut a = Vec::with_capacity(n);
        let mut b2 = Vec::with_capacity(n);
        let mut beta_max = Vec::with_capacity(n);
        for (&bc, mac) in net.bc_gains_sq().iter().zip(net.mac_gains_sq()) {
            let bmax = (snr / (bc * snr + 1.0)).sqrt();
            let mac_amp = mac.sqrt() * bmax;
            a.push(mac_amp * bc.sqrt());
            b2.push(mac_amp * mac_amp);
            beta_max.push(bmax);
        }
        Self {
            a,
            b2,
            beta_max,
            snr,
        }
    }

    /// Effective SNR at the magnitude fractions `c`.
    fn snr_eff(&self, c: &[f64]) -> f64 {
        let signal: f64 = self.a.iter().zip(c).map(|(a, c)| a * c).sum();
        let noise: f64 = self.b2.iter().zip(c).map(|(b2, c)| b2 * c * c).sum();
        self.snr * signal * signal / (1.0 + noise)
    }

    /// One pass of coordinate ascent over all relays, in place. Each update
    /// maximizes (A + aᵢcᵢ)²/(C + b²ᵢcᵢ²) over cᵢ ∈ [0, 1] with the other
    /// coordinates fixed; the unconstrained stationary point is
    /// cᵢ* = aᵢ·C/(A·b²ᵢ), and the objective rises before it and falls
    /// after, so clamping to the box keeps optimality.
    fn ascend_once(&self, c: &mut [f64]) {
        let mut sig: f64 = self.a.iter().zip(c.iter()).map(|(a, c)| a * c).sum();
        let mut noi: f64 = self.b2.iter().zip(c.iter()).map(|(b2, c)| b2 * c * c).sum();
        for ((&a, &b2), ci) in self.a.iter().zip(&self.b2).zip(c.iter_mut()) {
            let old = *ci;
            if a == 0.0 {
                // The relay forwards no signal; any power it spends is pure
                // noise at the destination.
                noi -= b2 * old * old;
                *ci = 0.0;
                continue;
            }
            let others_sig = sig - a * old;
            let others_noi = 1.0 + (noi - b2 * old * old);
            let new_ci = if others_sig <= 0.0 || b2 == 0.0 {
                // Alone (or noiseless), more amplitude is always better.
                1.0
            } else {
                (a * others_noi / (others_sig * b2)).clamp(0.0, 1.0)
            };
            sig = others_sig + a * new_ci;
            noi = (others_noi - 1.0) + b2 * new_ci * new_ci;
            *ci = new_ci;
        }
    }

    /// Run coordinate ascent from `c` until the objective stalls.
    fn ascend(&self, c: &mut [f64]) -> f64 {
        let mut obj = self.snr_eff(c);
        for _ in 0..AF_MAX_SWEEPS {
            self.ascend_once(c);
            let next = self.snr_eff(c);
            if next - obj <= AF_OBJECTIVE_TOL * (1.0 + obj.abs()) {
                return next.max(obj);
            }
            obj = next;
        }
        obj
    }
}

/// Assemble the solution struct for magnitude fractions `c`, deriving the
/// coherent phases and the reported rate from the resulting β vector.
fn af_solution(net: &ScalarDiamond, geo: &AfGeometry, c: &[f64], mode: AfMode) -> AfSolution {
    let scalings: Vec<Complex64> = net
        .h_bc()
        .iter()
        .zip(net.h_mac())
        .zip(c.iter().zip(&geo.beta_max))
        .map(|((h_bc, h_mac), (&ci, &bmax))| {
            // arg(0) = 0, so dead relays get a real (zero) coefficient.
            Complex64::from_polar(ci * bmax, -(h_mac * h_bc).arg())
        })
        .collect();
    // Report the rate from the stored coefficients via the defining formula,
    // so the struct's invariant holds for the exact values it carries.
    let forwarded: Complex64 = net
        .h_mac()
        .iter()
        .zip(&scalings)
        .zip(net.h_bc())
        .map(|((h_mac, beta), h_bc)| h_mac * beta * h_bc)
        .sum();
    let noise: f64 = net
        .h_mac()
        .iter()
        .zip(&scalings)
        .map(|(h_mac, beta)| (h_mac * beta).norm_sqr())
        .sum();
    let snr_eff = net.snr() * forwarded.norm_sqr() / (1.0 + noise);
    AfSolution {
        rate: log2p1(snr_eff),
        scalings,
        mode,
    }
}

/// Amplify-and-forward rate and scalings for the requested mode.
///
/// Naive mode forwards at full power from every relay; optimized mode
/// maximizes the effective SNR over the per-relay amplitude fractions by
/// multi-start projected coordinate ascent ([`AF_STARTS`] starts: full
/// power, the strongest single-relay corners, and seeded random interior
/// points), so `optimized.rate ≥ naive.rate` always — full power is one of
/// the starts. A network with no live source→relay→destination path yields
/// rate 0 with zeroed scalings in both modes.
pub fn af_rate(net: &ScalarDiamond, mode: AfMode) -> AfSolution {
    let n = net.n();
    let geo = AfGeometry::new(net);
    if geo.a.iter().all(|&a| a == 0.0) {
        return AfSolution {
            rate: 0.0,
            scalings: vec![Complex64::new(0.0, 0.0); n],
            mode,
        };
    }
    match mode {
        AfMode::Naive => af_solution(net, &geo, &vec![1.0; n], mode),
        AfMode::Optimized => {
            let mut starts: Vec<Vec<f64>> = vec![vec![1.0; n]];
            // Single-relay corners for the (up to three) relays with the
            // best solo SNR.
            let mut solo: Vec<usize> = (0..n).filter(|&i| geo.a[i] > 0.0).collect();
            solo.sort_by(|&i, &j| {
                let si = geo.a[i] * geo.a[i] / (1.0 + geo.b2[i]);
                let sj = geo.a[j] * geo.a[j] / (1.0 + geo.b2[j]);
                sj.partial_cmp(&si).unwrap().then(i.cmp(&j))
            });
            for &i in solo.iter().take(3) {
                let mut corner = vec![0.0; n];
                corner[i] = 1.0;
                starts.push(corner);
            }
            let mut rng = ChaCha12Rng::seed_from_u64(AF_RESTART_SEED);
            while starts.len() < AF_STARTS {
                starts.push((0..n).map(|_| rng.random::<f64>()).collect());
            }

            let mut best_c = starts[0].clone();
            let mut best_obj = f64::NEG_INFINITY;
            for mut c in starts {
                let obj = geo.ascend(&mut c);
                if obj > best_obj {
                    best_obj = obj;
                    best_c = c;
                }
            }
            af_solution(net, &geo, &best_c, mode)
        }
    }
}

// ---------------------------------------------------------------------------
// Superposition broadcast
// ---------------------------------------------------------------------------

/// Per-relay rates of superposition coding with successive cancellation on
/// the broadcast hop.
///
/// `gains_bc` are the power gains |h_is|² in arbitrary relay order;
/// `split.powers()[k]` is the power fraction of the k-th *strongest* relay.
/// Internally relays are ranked by descending gain (stable under ties); the
/// weakest relay's codeword carries the most power and is decoded first by
/// everyone, so rank k sees only the stronger relays' codewords as noise:
///
/// ```text
/// R_k = log₂(1 + g_k·snr·P_k / (1 + g_k·snr·Σ_{j<k} P_j))
/// ```
///
/// The returned rates are in the original relay order.
pub fn bc_superposition_rates(
    gains_bc: &[f64],
    snr: f64,
    split: &PowerSplit,
) -> Result<RateVector> {
    if gains_bc.is_empty() {
        return Err(Error::InvalidInput(
            "superposition needs at least one relay gain".into(),
        ));
    }
    if let Some(g) = gains_bc.iter().find(|g| !g.is_finite() || **g < 0.0) {
        return Err(Error::InvalidInput(format!(
            "broadcast gains must be finite and nonnegative, got {g}"
        )));
    }
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "snr must be positive and finite, got {snr}"
        )));
    }
    if split.len() != gains_bc.len() {
        return Err(Error::GroundSetMismatch {
            left: gains_bc.len(),
            right: split.len(),
        });
    }

    let mut order: Vec<usize> = (0..gains_bc.len()).collect();
    order.sort_by(|&i, &j| gains_bc[j].partial_cmp(&gains_bc[i]).unwrap());

    let mut rates = vec![0.0; gains_bc.len()];
    let mut stronger_power = 0.0;
    for (rank, &relay) in order.iter().enumerate() {
        let g_snr = gains_bc[relay] * snr;
        let p = split.powers()[rank];
        rates[relay] = log2p1(g_snr * p / (1.0 + g_snr * stronger_power));
        stronger_power += p;
    }
    RateVector::new(rates)
}

// ---------------------------------------------------------------------------
// Envelope
// ---------------------------------------------------------------------------

/// The best rate achieved among the four schemes: partial decode-and-
/// forward, optimized AF, naive AF, and best-relay routing.
pub fn best_of(net: &ScalarDiamond) -> Result<f64> {
    let pdf = scalar::pdf_rate(net)?;
    Ok(pdf
        .max(af_rate(net, AfMode::Optimized).rate)
        .max(af_rate(net, AfMode::Naive).rate)
        .max(best_relay_rate(net)))
}
