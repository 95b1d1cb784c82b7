//! Set-function machinery for rate regions: polymatroid axiom checking, the
//! multiple-access and broadcast-lower set functions, the intersection
//! max-sum value, explicit rate-point recovery, and region membership.
//!
//! A set function f on subsets of {1..n} is a *polymatroid* if it is
//! normalized (f(∅) = 0), non-decreasing, and submodular. The Gaussian MAC
//! capacity region is the polyhedron P(f) = { r ≥ 0 : Σ_{i∈S} rᵢ ≤ f(S) }
//! of such an f, and an inner bound on the broadcast region has the same
//! shape through duality. The intersection theorem turns the maximum sum
//! rate over P(f) ∩ P(g) into a minimum over subsets:
//!
//! ```text
//! max { Σ rᵢ : r ∈ P(f) ∩ P(g) }  =  min over Λ of  f(Λ) + g(Λ̄)
//! ```
//!
//! Both sides are implemented here — the right side by enumeration
//! ([`edmonds_max_sum`]), the left as a dense LP ([`find_max_rate_point`]) —
//! so each serves as an independent oracle for the other.
//!
//! Subsets are bitmasks: bit i−1 of the mask ↔ element i of the ground set.

use crate::simplex::{self, SimplexOptions};
use crate::util::{log2p1, subset_sums};
use crate::{Error, Result};

/// Ground-set cap for [`SetFunction`]: it stores all 2^n values eagerly,
/// and 2^20 doubles (8 MiB) is the agreed ceiling.
pub const MAX_SET_FUNCTION_GROUND: usize = 20;

/// Ground-set cap for [`check_polymatroid`]; the exhaustive axiom check is
/// O(2^n·n²).
pub const MAX_POLYMATROID_CHECK: usize = 12;

/// Ground-set cap for [`find_max_rate_point`]; the LP has 2·(2^n − 1) rows.
pub const MAX_RATE_POINT: usize = 10;

/// Tolerance for the structural axiom checks (pure arithmetic identities).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for region-membership constraint checks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Agreement tolerance between the enumeration and LP sides of the
/// intersection theorem (solver noise).
pub const LP_AGREEMENT_TOL: f64 = 1e-8;

/// A real-valued function on all subsets of {1..n}, stored densely and
/// indexed by bitmask. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    n: usize,
    values: Vec<f64>,
}

impl SetFunction {
    /// Wrap an explicit table of 2^n values. Requires 1 ≤ n ≤
    /// [`MAX_SET_FUNCTION_GROUND`], `values.len() == 2^n`, and finite entries.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "set function needs a nonempty ground set".into(),
            ));
        }
        if n > MAX_SET_FUNCTION_GROUND {
            return Err(Error::SizeLimit {
                what: "SetFunction",
                n,
                max: MAX_SET_FUNCTION_GROUND,
            });
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "set function on {n} elements needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "set function value {v} is not finite"
            )));
        }
        Ok(Self { n, values })
    }

    /// Build from a closure evaluated on every subset bitmask, in ascending
    /// mask order.
    pub fn from_subset_fn(n: usize, mut f: impl FnMut(u32) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "set function needs a nonempty ground set".into(),
            ));
        }
        if n > MAX_SET_FUNCTION_GROUND {
            return Err(Error::SizeLimit {
                what: "SetFunction",
                n,
                max: MAX_SET_FUNCTION_GROUND,
            });
        }
        let values = (0..1u32 << n).map(&mut f).collect();
        Self::new(n, values)
    }

    /// Ground-set size n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Bitmask of the full ground set.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Value on the subset encoded by `mask`.
    pub fn value(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    /// The dense table, indexed by bitmask.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Per-relay nonnegative rates with a sum-rate accessor.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    rates: Vec<f64>,
}

impl RateVector {
    /// Wrap per-element rates; every entry must be finite and ≥ 0.
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidInput("rate vector must be nonempty".into()));
        }
        if let Some(r) = rates.iter().find(|r| !r.is_finite() || **r < 0.0) {
            return Err(Error::InvalidInput(format!(
                "rates must be finite and nonnegative, got {r}"
            )));
        }
        Ok(Self { rates })
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    /// True when the vector is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Per-element rates.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Σᵢ rates[i].
    pub fn sum_rate(&self) -> f64 {
        self.rates.iter().sum()
    }
}

fn validate_gains(gains: &[f64], snr: f64, what: &'static str) -> Result<()> {
    if gains.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{what} needs at least one gain"
        )));
    }
    if gains.len() > MAX_SET_FUNCTION_GROUND {
        return Err(Error::SizeLimit {
            what,
            n: gains.len(),
            max: MAX_SET_FUNCTION_GROUND,
        });
    }
    if let Some(g) = gains.iter().find(|g| !g.is_finite() || **g < 0.0) {
        return Err(Error::InvalidInput(format!(
            "{what}: gains must be finite and nonnegative, got {g}"
        )));
    }
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "{what}: snr must be positive and finite, got {snr}"
        )));
    }
    Ok(())
}

/// The multiple-access-channel set function
/// `f(S) = log₂(1 + SNR·Σ_{i∈S} gains[i])`, with `gains[i] = |h_id|²`.
///
/// This is the standard Gaussian MAC sum-rate constraint family; it is
/// normalized, non-decreasing, and submodular for any nonnegative gains.
pub fn mac_set_function(gains: &[f64], snr: f64) -> Result<SetFunction> {
    validate_gains(gains, snr, "mac_set_function")?;
    let sums = subset_sums(gains);
    SetFunction::new(
        gains.len(),
        sums.into_iter().map(|s| log2p1(snr * s)).collect(),
    )
}

/// The broadcast-hop lower set function
/// `g(S) = log₂(1 + (SNR/n)·Σ_{i∈S} gains[i])`, with `gains[i] = |h_is|²`.
///
/// By MAC–BC duality, the dual MAC region with the source power split
/// equally across the n messages is an inner bound on the broadcast capacity
/// region; this is that region's set function.
pub fn bc_lower_set_function(gains: &[f64], snr: f64) -> Result<SetFunction> {
    validate_gains(gains, snr, "bc_lower_set_function")?;
    let scaled = snr / gains.len() as f64;
    let sums = subset_sums(gains);
    SetFunction::new(
        gains.len(),
        sums.into_iter().map(|s| log2p1(scaled * s)).collect(),
    )
}

/// The first polymatroid axiom a set function was found to violate, with
/// witnessing sets (as bitmasks).
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// f(∅) ≠ 0.
    Normalization {
        /// The offending value of f(∅).
        value: f64,
    },
    /// f decreases when an element is added: f(superset) < f(subset).
    Monotonicity {
        /// Smaller set S.
        subset: u32,
        /// S ∪ {i}.
        superset: u32,
        /// f(subset) − f(superset) > 0.
        decrease: f64,
    },
    /// Marginal gains grow with the set: adding `element` to `larger` helps
    /// more than adding it to `smaller` ⊂ `larger`.
    Submodularity {
        /// Smaller context S.
        smaller: u32,
        /// Larger context T = S ∪ {j}.
        larger: u32,
        /// Element i added to both contexts (0-based).
        element: usize,
        /// (f(T∪{i}) − f(T)) − (f(S∪{i}) − f(S)) > 0.
        deficit: f64,
    },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::Normalization { value } => {
                write!(fm, "not normalized: f(∅) = {value}")
            }
            AxiomViolation::Monotonicity {
                subset,
                superset,
                decrease,
            } => write!(
                fm,
                "not monotone: f({superset:#b}) is {decrease} below f({subset:#b})"
            ),
            AxiomViolation::Submodularity {
                smaller,
                larger,
                element,
                deficit,
            } => write!(
                fm,
                "not submodular: marginal of element {element} on {larger:#b} exceeds its \
                 marginal on {smaller:#b} by {deficit}"
            ),
        }
    }
}

/// Exhaustively check the polymatroid axioms (normalized, non-decreasing,
/// submodular) within [`STRUCTURAL_TOL`].
///
/// Returns `None` when all axioms hold, or the first violation found with
/// its witnessing sets. Submodularity is checked in the diminishing-returns
/// form — marginals f(S∪{i}) − f(S) must not grow when S grows by one
/// element — which is equivalent to the general S ⊆ T statement and makes
/// the scan O(2^n·n²). Rejects n > [`MAX_POLYMATROID_CHECK`].
pub fn check_polymatroid(sf: &SetFunction) -> Result<Option<AxiomViolation>> {
    let n = sf.n();
    if n > MAX_POLYMATROID_CHECK {
        return Err(Error::SizeLimit {
            what: "check_polymatroid",
            n,
            max: MAX_POLYMATROID_CHECK,
        });
    }

    if sf.value(0).abs() > STRUCTURAL_TOL {
        return Ok(Some(AxiomViolation::Normalization { value: sf.value(0) }));
    }

    let full = sf.full_mask();
    for mask in 0..=full {
        for i in 0..n {
            let bit = 1u32 << i;
            if mask & bit != 0 {
                continue;
            }
            let with_i = mask | bit;
            let decrease = sf.value(mask) - sf.value(with_i);
            if decrease > STRUCTURAL_TOL {
                return Ok(Some(AxiomViolation::Monotonicity {
                    subset: mask,
                    superset: with_i,
                    decrease,
                }));
            }
        }
    }

    for mask in 0..=full {
        for i in 0..n {
            let bi = 1u32 << i;
            if mask & bi != 0 {
                continue;
            }
            let gain_small = sf.value(mask | bi) - sf.value(mask);
            for j in 0..n {
                let bj = 1u32 << j;
                if j == i || mask & bj != 0 {
                    continue;
                }
                let larger = mask | bj;
                let gain_large = sf.value(larger | bi) - sf.value(larger);
                if gain_large - gain_small > STRUCTURAL_TOL {
                    return Ok(Some(AxiomViolation::Submodularity {
                        smaller: mask,
                        larger,
                        element: i,
                        deficit: gain_large - gain_small,
                    }));
                }
            }
        }
    }

    Ok(None)
}

/// Result of [`edmonds_max_sum`]: the optimal sum rate and the subset
/// achieving the minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdmondsResult {
    /// min over Λ of f(Λ) + g(Λ̄) — the maximum sum rate over P(f) ∩ P(g).
    pub value: f64,
    /// The minimizing subset Λ as a bitmask; ties broken by smallest mask.
    pub argmin: u32,
}

/// The polymatroid-intersection max-sum value:
/// `min over Λ of f(Λ) + g(complement of Λ)`.
///
/// Callers are responsible for passing genuine polymatroids (the axioms are
/// not re-verified here, for speed); [`check_polymatroid`] exists for that.
/// Ties in the minimum are broken toward the smallest bitmask,
/// deterministically.
pub fn edmonds_max_sum(f: &SetFunction, g: &SetFunction) -> Result<EdmondsResult> {
    if f.n() != g.n() {
        return Err(Error::GroundSetMismatch {
            left: f.n(),
            right: g.n(),
        });
    }
    let full = f.full_mask();
    let mut best = f64::INFINITY;
    let mut argmin = 0u32;
    for mask in 0..=full {
        let value = f.value(mask) + g.value(full ^ mask);
        if value < best {
            best = value;
            argmin = mask;
        }
    }
    Ok(EdmondsResult {
        value: best,
        argmin,
    })
}

/// Does `r` lie in P(sf), i.e. Σ_{i∈S} rᵢ ≤ sf(S) for every nonempty S,
/// within [`MEMBERSHIP_TOL`]? (Nonnegativity of `r` is a [`RateVector`]
/// construction invariant.)
pub fn membership(sf: &SetFunction, r: &RateVector) -> Result<bool> {
    if sf.n() != r.len() {
        return Err(Error::GroundSetMismatch {
            left: sf.n(),
            right: r.len(),
        });
    }
    let sums = subset_sums(r.rates());
    for mask in 1..=sf.full_mask() {
        if sums[mask as usize] > sf.value(mask) + MEMBERSHIP_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recover a rate vector achieving the intersection max-sum: solves
/// `maximize Σ rᵢ` over P(f) ∩ P(g) as a dense LP (2·(2^n − 1) subset
/// constraints plus nonnegativity) and returns the optimal vertex.
///
/// The returned point lies in both polyhedra (membership within
/// [`MEMBERSHIP_TOL`]) and its sum rate equals [`edmonds_max_sum`] within
/// [`LP_AGREEMENT_TOL`]; the exact vertex depends on the solver path and is
/// not otherwise specified. Rejects n > [`MAX_RATE_POINT`]. LP failure
/// cannot occur for valid polymatroids and is surfaced as an internal error.
pub fn find_max_rate_point(f: &SetFunction, g: &SetFunction) -> Result<RateVector> {
    if f.n() != g.n() {
        return Err(Error::GroundSetMismatch {
            left: f.n(),
            right: g.n(),
        });
    }
    let n = f.n();
    if n > MAX_RATE_POINT {
        return Err(Error::SizeLimit {
            what: "find_max_rate_point",
            n,
            max: MAX_RATE_POINT,
        });
    }
    if let Some(v) = f.values().iter().chain(g.values()).find(|v| **v < 0.0) {
        return Err(Error::Internal(format!(
            "rate-point LP needs nonnegative set functions (monotone and normalized); \
             found value {v}"
        )));
    }

    let full = f.full_mask();
    let mut rows = Vec::with_capacity(2 * full as usize);
    let mut b = Vec::with_capacity(2 * full as usize);
    for sf in [f, g] {
        for mask in 1..=full {
            let mut row = vec![0.0f64; n];
            for (i, slot) in row.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *slot = 1.0;
                }
            }
            rows.push(row);
            b.push(sf.value(mask));
        }
    }
    let c = vec![1.0f64; n];
    let solution = simplex::maximize(&c, &rows, &b, SimplexOptions::default())?;
    let coord_sum: f64 = solution.x.iter().sum();
    if (solution.objective - coord_sum).abs() > 1e-6 {
        return Err(Error::Internal(format!(
            "rate-point LP inconsistency: objective {} vs coordinate sum {}",
            solution.objective, coord_sum
        )));
    }
    // Vertex coordinates can come out a hair below zero from pivot
    // arithmetic; clamp before wrapping in the nonnegative RateVector.
    RateVector::new(solution.x.into_iter().map(|r| r.max(0.0)).collect())
}
