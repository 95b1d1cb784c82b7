//! Property tests: structural invariants that must hold for arbitrary
//! channel coefficients, not just the random ensembles the Monte Carlo
//! suites draw from.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use diamond::mimo::{mimo_cutset_proxy, mimo_nnc_rate, mimo_pdf_rate, waterfill, MimoDiamond};
use diamond::polymatroid::{check_polymatroid, edmonds_max_sum};
use diamond::scalar::{
    cutset_proxy, gap_constants_scalar, nnc_rate, pdf_rate, pdf_set_functions, ScalarDiamond,
};
use diamond::strategies::{af_rate, bc_superposition_rates, best_relay_rate, AfMode, PowerSplit};

const TOL: f64 = 1e-9;

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_net(max_relays: usize) -> impl Strategy<Value = ScalarDiamond> {
    (1..=max_relays).prop_flat_map(|n| {
        (
            prop::collection::vec(arb_complex(), n),
            prop::collection::vec(arb_complex(), n),
            0.05..200.0f64,
        )
            .prop_map(|(bc, mac, snr)| ScalarDiamond::new(bc, mac, snr).unwrap())
    })
}

/// Scale every coefficient by a unit phase, one phase per relay and hop.
fn rotate(net: &ScalarDiamond, phases: &[f64]) -> ScalarDiamond {
    let spin =
        |h: &Complex64, i: usize, offset: f64| h * Complex64::from_polar(1.0, phases[i] + offset);
    let bc = net
        .h_bc()
        .iter()
        .enumerate()
        .map(|(i, h)| spin(h, i, 0.0))
        .collect();
    let mac = net
        .h_mac()
        .iter()
        .enumerate()
        .map(|(i, h)| spin(h, i, 1.0))
        .collect();
    ScalarDiamond::new(bc, mac, net.snr()).unwrap()
}

/// Deterministic random MIMO network for a seed, so proptest can shrink
/// over the seed alone.
fn mimo_from_seed(seed: u64) -> MimoDiamond {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut entry = |rows: usize, cols: usize| {
        DMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
    };
    let mut dims = ChaCha12Rng::seed_from_u64(seed.wrapping_add(1));
    let n = dims.random_range(1..=3);
    let antennas: Vec<usize> = (0..n).map(|_| dims.random_range(1..=2)).collect();
    let m: usize = antennas.iter().sum();
    let n_s = dims.random_range(1..=2.min(m));
    let n_d = dims.random_range(1..=2.min(m));
    let snr = if seed.is_multiple_of(2) { 1.0 } else { 500.0 };
    let h_bc: Vec<_> = antennas.iter().map(|&a| entry(a, n_s)).collect();
    let h_mac: Vec<_> = antennas.iter().map(|&a| entry(n_d, a)).collect();
    MimoDiamond::new(n_s, n_d, h_bc, h_mac, snr).unwrap()
}

proptest! {
    #[test]
    fn rates_never_exceed_the_cutset(net in arb_net(6)) {
        let cutset = cutset_proxy(&net).unwrap();
        prop_assert!(pdf_rate(&net).unwrap() <= cutset + TOL);
        prop_assert!(nnc_rate(&net).unwrap() <= cutset + TOL);
        prop_assert!(best_relay_rate(&net) <= cutset + TOL);
        prop_assert!(af_rate(&net, AfMode::Optimized).rate <= cutset + TOL);
        prop_assert!(af_rate(&net, AfMode::Naive).rate <= cutset + TOL);
    }

    #[test]
    fn theorem_gap_bounds_hold_for_arbitrary_gains(net in arb_net(6)) {
        let cutset = cutset_proxy(&net).unwrap();
        let constants = gap_constants_scalar(net.n());
        prop_assert!(cutset - pdf_rate(&net).unwrap() <= constants.g2 + TOL);
        prop_assert!(cutset - nnc_rate(&net).unwrap() <= constants.g1 + TOL);
    }

    #[test]
    fn bounds_are_monotone_in_snr(net in arb_net(6), factor in 1.1..10.0f64) {
        let louder = ScalarDiamond::new(
            net.h_bc().to_vec(),
            net.h_mac().to_vec(),
            net.snr() * factor,
        ).unwrap();
        prop_assert!(cutset_proxy(&louder).unwrap() >= cutset_proxy(&net).unwrap() - TOL);
        prop_assert!(pdf_rate(&louder).unwrap() >= pdf_rate(&net).unwrap() - TOL);
        prop_assert!(nnc_rate(&louder).unwrap() >= nnc_rate(&net).unwrap() - TOL);
        prop_assert!(best_relay_rate(&louder) >= best_relay_rate(&net) - TOL);
    }

    #[test]
    fn phase_rotations_leave_bounds_unchanged(
        net in arb_net(5),
        phases in prop::collection::vec(0.0..std::f64::consts::TAU, 5),
    ) {
        let spun = rotate(&net, &phases);
        prop_assert!((cutset_proxy(&spun).unwrap() - cutset_proxy(&net).unwrap()).abs() < TOL);
        prop_assert!((pdf_rate(&spun).unwrap() - pdf_rate(&net).unwrap()).abs() < TOL);
        prop_assert!((nnc_rate(&spun).unwrap() - nnc_rate(&net).unwrap()).abs() < TOL);
        prop_assert!((best_relay_rate(&spun) - best_relay_rate(&net)).abs() < TOL);
    }

    #[test]
    fn rate_set_functions_are_polymatroids(net in arb_net(6)) {
        let (f, g) = pdf_set_functions(&net).unwrap();
        prop_assert!(check_polymatroid(&f).unwrap().is_none());
        prop_assert!(check_polymatroid(&g).unwrap().is_none());
    }

    #[test]
    fn edmonds_value_is_symmetric_and_dominated(net in arb_net(6)) {
        let (f, g) = pdf_set_functions(&net).unwrap();
        let fg = edmonds_max_sum(&f, &g).unwrap().value;
        let gf = edmonds_max_sum(&g, &f).unwrap().value;
        // Swapping the polymatroids maps each cut to its complement.
        prop_assert!((fg - gf).abs() < 1e-12);
        prop_assert!(fg <= f.value(f.full_mask()) + 1e-12);
        prop_assert!(fg <= g.value(g.full_mask()) + 1e-12);
    }

    #[test]
    fn optimized_af_dominates_naive(net in arb_net(6)) {
        let opt = af_rate(&net, AfMode::Optimized).rate;
        let naive = af_rate(&net, AfMode::Naive).rate;
        prop_assert!(opt >= naive - TOL, "optimized {opt} below naive {naive}");
    }

    #[test]
    fn waterfilling_is_optimal_and_feasible(
        modes in prop::collection::vec(0.0..5.0f64, 1..6),
        budget in 0.1..100.0f64,
    ) {
        prop_assume!(modes.iter().any(|&l| l > 0.0));
        let result = waterfill(&modes, budget).unwrap();
        let spent: f64 = result.allocation.iter().sum();
        prop_assert!((spent - budget).abs() < 1e-9, "budget {budget}, spent {spent}");
        for (&alloc, &lambda) in result.allocation.iter().zip(&modes) {
            prop_assert!(alloc >= 0.0);
            if lambda == 0.0 {
                prop_assert!(alloc == 0.0);
            } else if alloc > 0.0 {
                prop_assert!((alloc + 1.0 / lambda - result.water_level).abs() < 1e-9);
            } else {
                prop_assert!(1.0 / lambda >= result.water_level - 1e-9);
            }
        }
        // Optimality against the equal-split competitor.
        let active = modes.iter().filter(|&&l| l > 0.0).count() as f64;
        let equal: f64 = modes
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| (1.0 + l * budget / active).log2())
            .sum();
        prop_assert!(result.capacity >= equal - 1e-9);
    }

    #[test]
    fn superposition_total_is_bounded_by_the_best_single_user(
        users in (1usize..6).prop_flat_map(|n| {
            (
                prop::collection::vec(0.0..50.0f64, n),
                prop::collection::vec(0.01..1.0f64, n),
            )
        }),
        snr in 0.05..200.0f64,
    ) {
        let (gains, fractions) = users;
        let total: f64 = fractions.iter().sum();
        let split = PowerSplit::new(fractions.iter().map(|p| p / total).collect()).unwrap();
        let rates = bc_superposition_rates(&gains, snr, &split).unwrap();
        let best = gains.iter().fold(0.0f64, |m, &g| m.max(g));
        prop_assert!(rates.sum_rate() <= (1.0 + best * snr).log2() + TOL);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mimo_rates_never_exceed_the_cutset(seed in any::<u64>()) {
        let net = mimo_from_seed(seed);
        let cutset = mimo_cutset_proxy(&net).unwrap();
        prop_assert!(mimo_nnc_rate(&net).unwrap() <= cutset + TOL);
        prop_assert!(mimo_pdf_rate(&net).unwrap() <= cutset + TOL);
        prop_assert!(cutset >= 0.0);
    }
}
