//! Multi-antenna bounds for the diamond network: the log-det rate kernel,
//! waterfilling and the equal-power gap bound, the MIMO cutset proxy, MIMO
//! NNC and PDF rates, and the matching gap constants.
//!
//! A [`MimoDiamond`] has a source with `n_s` antennas, N relays with `n_i`
//! antennas each, and a destination with `n_d` antennas; `M = Σ n_i` is the
//! total relay antenna count, with the standing assumption n_s ≤ M and
//! n_d ≤ M. The broadcast-cut matrices are the Grams H_is†·H_is (n_s × n_s)
//! and the access-cut matrices are H_id·H_id† (n_d × n_d); every bound below
//! is a minimum over relay subsets Λ of a sum of log₂-determinants of
//! I + (scaled Gram sums), evaluated through one shared kernel so the scalar
//! and matrix paths agree numerically when every antenna count is 1.
//!
//! The upper bound replaces the optimal input covariances by equal-power
//! ones and pays for it with two additive antenna terms, justified by the
//! waterfilling gap of [`lemma1_bound`]:
//!
//! ```text
//! mimo_cutset_proxy = min_Λ [ log₂det(I + SNR·Σ_{i∉Λ} H_is†H_is)
//!                           + log₂det(I + SNR·Σ_{i∈Λ} H_id H_id†) ]
//!                   + n_s·log₂(1 + (n_s−1)/n_a) + n_d·log₂(1 + (M−1)/n_b)
//! ```
//!
//! with n_a = min(n_s, minᵢ nᵢ) and n_b = min(n_d, minᵢ nᵢ).

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::polymatroid::{edmonds_max_sum, SetFunction};
use crate::scalar::GapConstants;
use crate::util::{log2p1, subset_sums};
use crate::{Error, Result};

/// Relay-count cap for the subset-enumerating MIMO bounds.
pub const MAX_MIMO_RELAYS: usize = 20;

/// Largest tolerated entry of |A − A†| before a matrix is rejected as
/// non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues below −[`PSD_EIG_TOL`] fail the positive-semidefinite gate.
pub const PSD_EIG_TOL: f64 = 1e-7;

/// A multi-antenna diamond network instance.
///
/// Shapes: `h_bc[i]` is H_is of size nᵢ × n_s (source → relay i) and
/// `h_mac[i]` is H_id of size n_d × nᵢ (relay i → destination); the antenna
/// counts nᵢ are read off the matrices and cross-checked between the hops.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoDiamond {
    n_s: usize,
    n_d: usize,
    antennas: Vec<usize>,
    h_bc: Vec<DMatrix<Complex64>>,
    h_mac: Vec<DMatrix<Complex64>>,
    snr: f64,
}

impl MimoDiamond {
    /// Validate and build an instance.
    ///
    /// Requires at least one relay, positive antenna counts, consistent
    /// matrix shapes, finite entries, positive finite `snr`, and the
    /// standing assumption n_s ≤ M, n_d ≤ M (M = total relay antennas).
    pub fn new(
        n_s: usize,
        n_d: usize,
        h_bc: Vec<DMatrix<Complex64>>,
        h_mac: Vec<DMatrix<Complex64>>,
        snr: f64,
    ) -> Result<Self> {
        if n_s == 0 || n_d == 0 {
            return Err(Error::InvalidInput(format!(
                "source and destination need at least one antenna, got n_s = {n_s}, n_d = {n_d}"
            )));
        }
        if h_bc.is_empty() {
            return Err(Error::InvalidInput("need at least one relay".into()));
        }
        if h_bc.len() != h_mac.len() {
            return Err(Error::InvalidInput(format!(
                "got {} broadcast matrices but {} access matrices",
                h_bc.len(),
                h_mac.len()
            )));
        }
        let mut antennas = Vec::with_capacity(h_bc.len());
        for (i, (bc, mac)) in h_bc.iter().zip(&h_mac).enumerate() {
            let n_i = bc.nrows();
            if n_i == 0 {
                return Err(Error::InvalidInput(format!("relay {i} has zero antennas")));
            }
            if bc.ncols() != n_s {
                return Err(Error::InvalidInput(format!(
                    "relay {i}: broadcast matrix is {}×{}, expected {n_i}×{n_s}",
                    bc.nrows(),
                    bc.ncols()
                )));
            }
            if mac.nrows() != n_d || mac.ncols() != n_i {
                return Err(Error::InvalidInput(format!(
                    "relay {i}: access matrix is {}×{}, expected {n_d}×{n_i}",
                    mac.nrows(),
                    mac.ncols()
                )));
            }
            if bc
                .iter()
                .chain(mac.iter())
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(Error::InvalidInput(format!(
                    "relay {i}: channel matrices must have finite entries"
                )));
            }
            antennas.push(n_i);
        }
        let m: usize = antennas.iter().sum();
        if n_s > m || n_d > m {
            return Err(Error::InvalidInput(format!(
                "endpoint antennas must not exceed the relay total: n_s = {n_s}, n_d = {n_d}, \
                 M = {m}"
            )));
        }
        if !(snr > 0.0 && snr.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "snr must be positive and finite, got {snr}"
            )));
        }
        Ok(Self {
            n_s,
            n_d,
            antennas,
            h_bc,
            h_mac,
            snr,
        })
    }

    /// Number of relays N.
    pub fn n(&self) -> usize {
        self.antennas.len()
    }

    /// Source antenna count.
    pub fn n_s(&self) -> usize {
        self.n_s
    }

    /// Destination antenna count.
    pub fn n_d(&self) -> usize {
        self.n_d
    }

    /// Per-relay antenna counts nᵢ.
    pub fn antennas(&self) -> &[usize] {
        &self.antennas
    }

    /// Total relay antenna count M = Σ nᵢ.
    pub fn total_antennas(&self) -> usize {
        self.antennas.iter().sum()
    }

    /// Source → relay channel matrices H_is (nᵢ × n_s).
    pub fn h_bc(&self) -> &[DMatrix<Complex64>] {
        &self.h_bc
    }

    /// Relay → destination channel matrices H_id (n_d × nᵢ).
    pub fn h_mac(&self) -> &[DMatrix<Complex64>] {
        &self.h_mac
    }

    /// Linear-scale SNR.
    pub fn snr(&self) -> f64 {
        self.snr
    }

    /// Broadcast Grams H_is†·H_is, each scaled by `factor(i)`.
    fn scaled_bc_grams(&self, factor: impl Fn(usize) -> f64) -> Vec<DMatrix<Complex64>> {
        self.h_bc
            .iter()
            .enumerate()
            .map(|(i, h)| (h.adjoint() * h) * Complex64::new(factor(i), 0.0))
            .collect()
    }

    /// Access Grams H_id·H_id†, each scaled by `factor(i)`.
    fn scaled_mac_grams(&self, factor: impl Fn(usize) -> f64) -> Vec<DMatrix<Complex64>> {
        self.h_mac
            .iter()
            .enumerate()
            .map(|(i, h)| (h * h.adjoint()) * Complex64::new(factor(i), 0.0))
            .collect()
    }
}

/// Waterfilling output: the per-mode power allocation, the common water
/// level, and the resulting capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillResult {
    /// Power on each mode, in the order the modes were given; zero-gain
    /// modes get exactly zero.
    pub allocation: Vec<f64>,
    /// Water level μ; every active mode satisfies allocation + 1/λ = μ.
    pub water_level: f64,
    /// Σ log₂(1 + allocationᵢ·λᵢ), in bits.
    pub capacity: f64,
}

// ---------------------------------------------------------------------------
// Log-det kernel
// ---------------------------------------------------------------------------

/// log₂ det(I + gram) for a Hermitian positive-semidefinite matrix, via its
/// eigenvalues: Σᵢ log₂(1 + λᵢ).
///
/// Gates: entries must be finite, the matrix square and Hermitian within
/// [`HERMITIAN_TOL`], and no eigenvalue may fall below −[`PSD_EIG_TOL`].
/// Eigenvalues in (−[`PSD_EIG_TOL`], 0) are treated as rounding noise and
/// clamped to zero, so the result is never negative and the zero matrix
/// gives exactly 0.
pub fn logdet_rate(gram: &DMatrix<Complex64>) -> Result<f64> {
    if gram.nrows() != gram.ncols() {
        return Err(Error::InvalidInput(format!(
            "log-det needs a square matrix, got {}×{}",
            gram.nrows(),
            gram.ncols()
        )));
    }
    if gram.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput(
            "log-det input has non-finite entries".into(),
        ));
    }
    let n = gram.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let mut asymmetry = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            asymmetry = asymmetry.max((gram[(i, j)] - gram[(j, i)].conj()).norm());
        }
    }
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    // Symmetrize before decomposing so the eigensolver sees an exactly
    // Hermitian matrix whatever rounding the caller accumulated.
    let herm = (gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let min_eigenvalue = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -PSD_EIG_TOL {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(eig.eigenvalues.iter().map(|&l| log2p1(l.max(0.0))).sum())
}

/// Trusted fast path for log₂ det(I + A) on matrices that are Hermitian PSD
/// by construction (scaled sums of Grams). 1×1 inputs go through the same
/// `log2p1` as the scalar module, so the all-antennas-1 reduction is exact;
/// larger inputs use a Cholesky factorization of I + A, falling back to the
/// eigenvalue form if rounding has pushed I + A off positive-definiteness.
pub(crate) fn logdet_i_plus(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return log2p1(a[(0, 0)].re.max(0.0));
    }
    let shifted = DMatrix::<Complex64>::identity(n, n) + a;
    match Cholesky::new(shifted) {
        Some(ch) => {
            let l = ch.l();
            let half: f64 = (0..n).map(|i| l[(i, i)].re.log2()).sum();
            (2.0 * half).max(0.0)
        }
        None => SymmetricEigen::new(a.clone())
            .eigenvalues
            .iter()
            .map(|&l| log2p1(l.max(0.0)))
            .sum(),
    }
}

/// log₂ det(I + Σ_{i∈mask} grams[i]) for every subset mask, in ascending
/// mask order. `dim` is the (common) Gram dimension.
fn mask_values(grams: &[DMatrix<Complex64>], dim: usize) -> Vec<f64> {
    let n = grams.len();
    let full = ((1u64 << n) - 1) as u32;
    let mut values = Vec::with_capacity(full as usize + 1);
    for mask in 0..=full {
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc += &grams[i];
            bits &= bits - 1;
        }
        values.push(logdet_i_plus(&acc));
    }
    values
}

fn check_mimo_size(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_MIMO_RELAYS {
        return Err(Error::SizeLimit {
            what,
            n,
            max: MAX_MIMO_RELAYS,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Waterfilling and the equal-power gap
// ---------------------------------------------------------------------------

/// Waterfill `total_power` over parallel modes with power gains
/// `modes_sq[i]` = λᵢ (squared singular values).
///
/// Zero-gain modes are excluded up front and receive exactly zero power.
/// The water level is found by bisection over [min 1/λᵢ, min 1/λᵢ + P],
/// driving the spent-power residual below 1e−12 (or 200 halvings, whichever
/// comes first); each active mode then gets μ − 1/λᵢ, which makes the KKT
/// identity allocation + 1/λ = μ exact by construction.
pub fn waterfill(modes_sq: &[f64], total_power: f64) -> Result<WaterfillResult> {
    if modes_sq.is_empty() {
        return Err(Error::InvalidInput(
            "waterfilling needs at least one mode".into(),
        ));
    }
    if let Some(l) = modes_sq.iter().find(|l| !l.is_finite() || **l < 0.0) {
        return Err(Error::InvalidInput(format!(
            "mode gains must be finite and nonnegative, got {l}"
        )));
    }
    if !(total_power > 0.0 && total_power.is_finite()) {
        return Err(Error::NonpositivePower(total_power));
    }
    let strongest = modes_sq.iter().copied().fold(0.0, f64::max);
    if strongest == 0.0 {
        return Err(Error::NoPositiveMode);
    }

    let spent = |level: f64| -> f64 {
        modes_sq
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| (level - 1.0 / l).max(0.0))
            .sum()
    };
    let mut lo = 1.0 / strongest;
    let mut hi = lo + total_power;
    let mut level = 0.5 * (lo + hi);
    for _ in 0..200 {
        level = 0.5 * (lo + hi);
        let used = spent(level);
        if (used - total_power).abs() <= 1e-12 {
            break;
        }
        if used > total_power {
            hi = level;
        } else {
            lo = level;
        }
    }

    let allocation: Vec<f64> = modes_sq
        .iter()
        .map(|&l| {
            if l > 0.0 {
                (level - 1.0 / l).max(0.0)
            } else {
                0.0
            }
        })
        .collect();
    let capacity = allocation
        .iter()
        .zip(modes_sq)
        .map(|(&q, &l)| log2p1(q * l))
        .sum();
    Ok(WaterfillResult {
        allocation,
        water_level: level,
        capacity,
    })
}

/// Upper bound on the waterfilling-vs-equal-power capacity loss for an
/// n_t-transmit, n_r-receive link: with n = min(n_r, n_t),
/// `C_wf − C_ep ≤ n·log₂(1 + (n_t − 1)/n)`, where C_wf spends n_t·P
/// optimally across the modes and C_ep puts P on every transmit antenna.
///
/// Panics if either antenna count is zero.
pub fn lemma1_bound(n_t: usize, n_r: usize) -> f64 {
    assert!(n_t >= 1 && n_r >= 1, "antenna counts must be positive");
    let n = n_r.min(n_t) as f64;
    n * log2p1((n_t as f64 - 1.0) / n)
}

// ---------------------------------------------------------------------------
// Gap constants
// ---------------------------------------------------------------------------

/// Gap constants for a MIMO diamond with the given antenna profile:
///
/// ```text
/// G1 = n_s·log₂(M+1) + n_s·log₂(1 + (n_s−1)/n_a)
///    + n_d·log₂(maxᵢ nᵢ) + n_d·log₂(1 + (M−1)/n_b) + 1
/// G2 = the same with log₂M in place of log₂(M+1), and no +1
/// ```
///
/// where M = Σ nᵢ, n_a = min(n_s, minᵢ nᵢ), n_b = min(n_d, minᵢ nᵢ). With
/// every antenna count 1 these reduce to the scalar constants
/// log₂(N+1) + log₂N + 1 and 2·log₂N. Panics on an empty profile or a zero
/// antenna count.
pub fn mimo_gap_constants(n_s: usize, n_d: usize, antennas: &[usize]) -> GapConstants {
    assert!(n_s >= 1 && n_d >= 1, "antenna counts must be positive");
    assert!(
        !antennas.is_empty() && antennas.iter().all(|&a| a >= 1),
        "need at least one relay, each with at least one antenna"
    );
    let m = antennas.iter().sum::<usize>() as f64;
    let n_min = *antennas.iter().min().expect("nonempty") as f64;
    let n_max = *antennas.iter().max().expect("nonempty") as f64;
    let (ns_f, nd_f) = (n_s as f64, n_d as f64);
    let n_a = ns_f.min(n_min);
    let n_b = nd_f.min(n_min);
    let shared =
        ns_f * log2p1((ns_f - 1.0) / n_a) + nd_f * n_max.log2() + nd_f * log2p1((m - 1.0) / n_b);
    GapConstants {
        g1: ns_f * (m + 1.0).log2() + shared + 1.0,
        g2: ns_f * m.log2() + shared,
    }
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// MIMO cutset-style upper bound: the minimum over relay subsets of the
/// equal-power broadcast and access cut log-dets, plus the two additive
/// antenna terms paying for the equal-power relaxation (see the module
/// docs). Rejects N > [`MAX_MIMO_RELAYS`].
pub fn mimo_cutset_proxy(net: &MimoDiamond) -> Result<f64> {
    let n = net.n();
    check_mimo_size("mimo_cutset_proxy", n)?;
    let snr = net.snr();
    let bc_vals = mask_values(&net.scaled_bc_grams(|_| snr), net.n_s());
    let mac_vals = mask_values(&net.scaled_mac_grams(|_| snr), net.n_d());

    let full = ((1u64 << n) - 1) as u32;
    let mut best = f64::INFINITY;
    for mask in 0..=full {
        let value = bc_vals[(full ^ mask) as usize] + mac_vals[mask as usize];
        if value < best {
            best = value;
        }
    }

    let m = net.total_antennas() as f64;
    let n_min = *net.antennas().iter().min().expect("nonempty") as f64;
    let (ns_f, nd_f) = (net.n_s() as f64, net.n_d() as f64);
    let n_a = ns_f.min(n_min);
    let n_b = nd_f.min(n_min);
    Ok(best + ns_f * log2p1((ns_f - 1.0) / n_a) + nd_f * log2p1((m - 1.0) / n_b))
}

/// MIMO noisy-network-coding achievable rate:
///
/// ```text
/// max(0, min_Λ [ log₂det(I + SNR/(n_s(M+1))·Σ_{i∉Λ} H_is†H_is)
///              + log₂det(I + Σ_{i∈Λ} (SNR/nᵢ)·H_id H_id†)
///              − (Σ_{i∈Λ} nᵢ)·log₂(1 + 1/M) ])
/// ```
///
/// The BC-side SNR discount covers the uniform source covariance and the
/// quantization noise; the subtracted term is the per-antenna quantization
/// penalty of the relays in Λ. Rejects N > [`MAX_MIMO_RELAYS`].
pub fn mimo_nnc_rate(net: &MimoDiamond) -> Result<f64> {
    let n = net.n();
    check_mimo_size("mimo_nnc_rate", n)?;
    let snr = net.snr();
    let m = net.total_antennas() as f64;
    let bc_factor = snr / (net.n_s() as f64 * (m + 1.0));
    let bc_vals = mask_values(&net.scaled_bc_grams(|_| bc_factor), net.n_s());
    let mac_vals = mask_values(
        &net.scaled_mac_grams(|i| snr / net.antennas()[i] as f64),
        net.n_d(),
    );
    let antenna_wt: Vec<f64> = net.antennas().iter().map(|&a| a as f64).collect();
    let antennas_in = subset_sums(&antenna_wt);
    let penalty_unit = log2p1(1.0 / m);

    let full = ((1u64 << n) - 1) as u32;
    let mut best = f64::INFINITY;
    for mask in 0..=full {
        let value = bc_vals[(full ^ mask) as usize] + mac_vals[mask as usize]
            - antennas_in[mask as usize] * penalty_unit;
        if value < best {
            best = value;
        }
    }
    Ok(best.max(0.0))
}

/// The two set functions whose polymatroid intersection gives the MIMO
/// partial-decode-and-forward rate: the access-side
/// `f(S) = log₂det(I + Σ_{i∈S} (SNR/nᵢ)·H_id H_id†)` and the broadcast-side
/// `g(S) = log₂det(I + (SNR/M)·Σ_{i∈S} H_is†H_is)`.
///
/// Both are polymatroids (log-det of I plus a sum of PSD matrices is
/// normalized, monotone, and submodular), which
/// [`crate::polymatroid::check_polymatroid`] verifies in the property tests.
pub fn mimo_pdf_set_functions(net: &MimoDiamond) -> Result<(SetFunction, SetFunction)> {
    let n = net.n();
    check_mimo_size("mimo_pdf_set_functions", n)?;
    let snr = net.snr();
    let m = net.total_antennas() as f64;
    let f = SetFunction::new(
        n,
        mask_values(
            &net.scaled_mac_grams(|i| snr / net.antennas()[i] as f64),
            net.n_d(),
        ),
    )?;
    let g = SetFunction::new(n, mask_values(&net.scaled_bc_grams(|_| snr / m), net.n_s()))?;
    Ok((f, g))
}

/// MIMO partial-decode-and-forward achievable rate: the polymatroid
/// intersection max-sum of [`mimo_pdf_set_functions`], i.e.
/// `min_Λ [ g(Λ̄ side) + f(Λ side) ]` over relay subsets. Rejects
/// N > [`MAX_MIMO_RELAYS`].
pub fn mimo_pdf_rate(net: &MimoDiamond) -> Result<f64> {
    let (f, g) = mimo_pdf_set_functions(net)?;
    Ok(edmonds_max_sum(&f, &g)?.value)
}
