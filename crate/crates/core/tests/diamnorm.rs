use opdiam_core::diamnorm::{
    cb_ladder, diam_estimate, divergence_ratios, map_norm, sdiam_estimate, witness_ratio, Budget, DiamEstimate,
    Quantity,
};
use opdiam_core::superop::{random_superop, RandomKind};
use opdiam_core::{SuperOp, C64};
use proptest::prelude::*;

fn small() -> Budget {
    Budget {
        restarts: 4,
        iters: 40,
        ..Budget::default()
    }
}

fn self_certifies(phi: &SuperOp, est: &DiamEstimate) -> bool {
    match &est.witness {
        Some(w) => {
            let r = witness_ratio(phi, est.quantity, est.level, w, small().final_grid);
            (r - est.lower).abs() <= 1e-6 * est.lower.abs().max(1.0) && est.lower <= est.upper + 1e-9
        }
        None => est.lower == 0.0,
    }
}

fn kind() -> impl Strategy<Value = RandomKind> {
    prop_oneof![
        Just(RandomKind::HermitianChoi),
        Just(RandomKind::GinibreCp),
        Just(RandomKind::UnitalChannel),
        Just(RandomKind::UcpBijection),
    ]
}

/// Adds `-tr(A)/n` times the traceless part of `Phi(I)`, which leaves a
/// scalar unit image.
fn paraunital(phi: SuperOp) -> SuperOp {
    let n = phi.dim_in();
    let unit = phi.unit_image();
    let fix = unit.traceless_part().scale_real(-1.0 / n as f64);
    SuperOp::from_fn(n, phi.dim_out(), |e| {
        let mut out = phi.apply(e).unwrap();
        out += &fix.scale(e.trace());
        out
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimates_self_certify(k in kind(), n in 2usize..=3, seed in any::<u64>()) {
        let phi = paraunital(random_superop(k, n, n, seed).unwrap());
        prop_assert!(phi.flags().paraunital.is_some());
        let b = small();
        for est in [map_norm(&phi, &b), sdiam_estimate(&phi, &b), diam_estimate(&phi, &b)] {
            prop_assert!(self_certifies(&phi, &est), "{:?}", est);
        }
    }

    #[test]
    fn cb_ladder_is_monotone(n in 2usize..=3, seed in any::<u64>(), q in 0usize..3) {
        let q = [Quantity::Cb, Quantity::Cbdiam, Quantity::Cbsdiam][q];
        let phi = paraunital(random_superop(RandomKind::HermitianChoi, n, n, seed).unwrap());
        let ladder = cb_ladder(&phi, 3, q, &small()).unwrap();
        for w in ladder.windows(2) {
            prop_assert!(w[0].lower <= w[1].lower + 1e-9);
        }
        for est in &ladder {
            prop_assert!(self_certifies(&phi, est), "{:?}", est);
        }
    }

    #[test]
    fn sdiam_ignores_trace_translation(n in 2usize..=3, seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let phi = random_superop(RandomKind::UnitalChannel, n, n, seed).unwrap();
        let moved = phi.translate_by_trace(C64::new(re, im));
        let (a, b) = (sdiam_estimate(&phi, &small()), sdiam_estimate(&moved, &small()));
        prop_assert!((a.lower - b.lower).abs() <= 2e-3, "{:?} {:?}", a, b);
    }

    #[test]
    fn estimates_are_seed_deterministic(n in 2usize..=3, seed in any::<u64>(), search_seed in any::<u64>()) {
        let phi = paraunital(random_superop(RandomKind::HermitianChoi, n, n, seed).unwrap());
        let b = Budget { seed: search_seed, ..small() };
        prop_assert_eq!(diam_estimate(&phi, &b), diam_estimate(&phi, &b));
        prop_assert_eq!(cb_ladder(&phi, 2, Quantity::Cbsdiam, &b).unwrap(), cb_ladder(&phi, 2, Quantity::Cbsdiam, &b).unwrap());
    }

    #[test]
    fn non_paraunital_maps_diverge(n in 2usize..=3, seed in any::<u64>()) {
        let phi = random_superop(RandomKind::GinibreCp, n, n, seed).unwrap();
        prop_assume!(opdiam_core::diamnorm::unit_image_diameter(&phi) > 1e-6);
        let est = sdiam_estimate(&phi, &small());
        prop_assert!(est.is_unbounded());
        let ratios = divergence_ratios(&phi, 8);
        prop_assert!(ratios.iter().any(|&(_, r)| r > 1e3));
    }
}
