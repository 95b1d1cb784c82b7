//! Small numeric helpers shared across modules.

/// log₂(1 + x), accurate for small x and safe for very large x.
///
/// Every rate formula in this crate is of the form log₂(1 + something), so a
/// single shared implementation keeps the scalar and MIMO paths numerically
/// consistent with each other.
#[inline]
pub(crate) fn log2p1(x: f64) -> f64 {
    x.ln_1p() * std::f64::consts::LOG2_E
}

/// All 2^n subset sums of `w`: `out[mask] = Σ_{i : mask bit i set} w[i]`.
///
/// Built lowest-set-bit first (`out[mask] = out[mask \ lsb] + w[lsb]`), which
/// fixes the summation order: ascending bit index. `sum_over_mask` reproduces
/// the same order, so the two paths agree bitwise.
pub(crate) fn subset_sums(w: &[f64]) -> Vec<f64> {
    let n = w.len();
    assert!(n <= 25, "subset-sum table would be too large");
    let mut out = vec![0.0; 1usize << n];
    for mask in 1..out.len() {
        let lsb = mask.trailing_zeros() as usize;
        out[mask] = out[mask & (mask - 1)] + w[lsb];
    }
    out
}

/// Sum of `w[i]` over the set bits of `mask`, ascending bit index.
pub(crate) fn sum_over_mask(w: &[f64], mask: u32) -> f64 {
    let mut rest = mask;
    let mut acc = 0.0;
    while rest != 0 {
        let i = rest.trailing_zeros();
        acc += w[i as usize];
        rest &= rest - 1;
    }
    acc
}

/// Subset-sum accessor that materializes a table for small ground sets and
/// falls back to per-mask accumulation for large ones. Both paths add in
/// ascending bit order, so they return identical values.
pub(crate) enum SubsetSums<'a> {
    Table(Vec<f64>),
    Direct(&'a [f64]),
}

impl<'a> SubsetSums<'a> {
    /// Table for n ≤ 20 (≤ 8 MiB of doubles), direct accumulation beyond.
    pub(crate) fn new(w: &'a [f64]) -> Self {
        if w.len() <= 20 {
            SubsetSums::Table(subset_sums(w))
        } else {
            SubsetSums::Direct(w)
        }
    }

    #[inline]
    pub(crate) fn get(&self, mask: u32) -> f64 {
        match self {
            SubsetSums::Table(t) => t[mask as usize],
            SubsetSums::Direct(w) => sum_over_mask(w, mask),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_sums_match_direct_accumulation() {
        let w = [0.3, 1.7, 0.0, 2.25, 5.5];
        let table = subset_sums(&w);
        for mask in 0..(1u32 << w.len()) {
            assert_eq!(table[mask as usize], sum_over_mask(&w, mask));
        }
    }

    #[test]
    fn log2p1_agrees_with_direct_log() {
        for &x in &[0.0, 1.0, 2.0, 1e-12, 1e12] {
            assert!((log2p1(x) - (1.0 + x).log2()).abs() < 1e-12);
        }
        assert_eq!(log2p1(0.0), 0.0);
    }
}
