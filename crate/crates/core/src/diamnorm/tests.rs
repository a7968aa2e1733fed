use super::*;
use crate::superop::{named_example, random_superop, RandomKind};

const SQRT2: f64 = core::f64::consts::SQRT_2;

fn ex(id: &str, n: Option<usize>) -> SuperOp {
    named_example(id, n).unwrap()
}

fn self_certifies(phi: &SuperOp, est: &DiamEstimate, budget: &Budget) {
    let w = est.witness.as_ref().expect("witness");
    let r = witness_ratio(phi, est.quantity, est.level, w, budget.final_grid);
    assert!(
        (r - est.lower).abs() <= 1e-6 * est.lower.abs().max(1.0),
        "{r} vs {}",
        est.lower
    );
    assert!(est.lower <= est.upper + 1e-9, "{est:?}");
}

#[test]
fn diambound_norm_and_diameter() {
    let b = Budget::default();
    let phi = ex("diambound", None);
    let op = map_norm(&phi, &b);
    assert!(op.brackets(1.0, 1e-3), "{op:?}");
    let d = diam_estimate(&phi, &b);
    assert!(d.lower >= SQRT2 - 1e-3, "{d:?}");
    self_certifies(&phi, &d, &b);
    let e12 = ComplexMatrix::unit(2, 0, 1);
    assert!((witness_ratio(&phi, Quantity::Diam, 1, &e12, 256) - SQRT2).abs() < 1e-12);
}

#[test]
fn corner_map_values() {
    let b = Budget::default();
    let phi = ex("corner", None);
    let s = sdiam_estimate(&phi, &b);
    assert!(s.brackets(0.5, 2e-3) && s.upper - s.lower < 4e-3, "{s:?}");
    self_certifies(&phi, &s, &b);
    let op = map_norm(&phi, &b);
    assert!(op.brackets(1.0, 1e-3) && op.upper < 1.0 + 1e-9, "{op:?}");
    let d = diam_estimate(&phi, &b);
    assert!(d.brackets(1.0, 2e-3), "{d:?}");
    let l2 = cb_lower(&phi, 2, Quantity::Cbsdiam, &b).unwrap();
    assert!(l2.brackets(0.5, 2e-3), "{l2:?}");
    self_certifies(&phi, &l2, &b);
}

#[test]
fn transpose_values() {
    let b = Budget::default();
    for n in [2, 3] {
        let phi = SuperOp::transpose_map(n);
        let d = diam_estimate(&phi, &b);
        assert!(d.brackets(1.0, 2e-3), "{d:?}");
        let s = sdiam_estimate(&phi, &b);
        assert!(s.brackets(1.0, 2e-3), "{s:?}");
        let cb = cb_lower(&phi, n, Quantity::Cb, &b).unwrap();
        assert!((cb.lower - n as f64).abs() < 1e-12, "{cb:?}");
        assert!((cb.upper - n as f64).abs() < 1e-9);
    }
}

#[test]
fn transpose_three_cbdiam_reaches_three_at_level_six() {
    let b = Budget {
        restarts: 2,
        iters: 50,
        ..Budget::default()
    };
    let phi = SuperOp::transpose_map(3);
    let ladder = cb_ladder(&phi, 6, Quantity::Cbsdiam, &b).unwrap();
    for w in ladder.windows(2) {
        assert!(w[0].lower <= w[1].lower + 1e-9);
    }
    let top = ladder.last().unwrap();
    assert!((top.lower - 3.0).abs() < 1e-9, "{top:?}");
    self_certifies(&phi, top, &b);
}

#[test]
fn scaled_identity_norm() {
    let phi = SuperOp::identity(3).scale(C64::new(2.0, 0.0));
    let op = map_norm(&phi, &Budget::default());
    assert!((op.lower - 2.0).abs() < 1e-12 && (op.upper - 2.0).abs() < 1e-9);
}

#[test]
fn scalar_functional_is_exact_zero() {
    let phi = ex("trace_unit", Some(3));
    let s = sdiam_estimate(&phi, &Budget::default());
    assert_eq!((s.lower, s.upper), (0.0, 0.0));
    assert!(s.witness.is_none());
    assert_eq!(s.certificate, Certificate::ScalarFunctional);
}

#[test]
fn identity_diameter_is_one() {
    for n in [2, 4] {
        let d = diam_estimate(&SuperOp::identity(n), &Budget::default());
        assert!(d.brackets(1.0, 1e-9) && (d.upper - 1.0).abs() < 1e-9, "{d:?}");
    }
}

#[test]
fn final_example_values() {
    let b = Budget::default();
    let phi = ex("final_phi", Some(2));
    let d = diam_estimate(&phi, &b);
    assert!(d.brackets(4.0, 2e-3), "{d:?}");
    assert_eq!(d.witness, Some(ComplexMatrix::unit(2, 0, 1)));
    let cb = cb_lower(&phi, 2, Quantity::Cb, &b).unwrap();
    assert!((cb.lower - 6.5).abs() < 1e-9 && (cb.upper - 6.5).abs() < 1e-9, "{cb:?}");
}

#[test]
fn id_plus_trace_grows_under_amplification() {
    let b = Budget::default();
    let phi = ex("id_plus_trace", Some(2));
    let l1 = diam_estimate(&phi, &b);
    assert!(l1.brackets(1.0, 2e-3), "{l1:?}");
    let mut flip = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        flip[(i, 2 + i)] = ONE;
        flip[(2 + i, i)] = ONE;
    }
    assert!((witness_ratio(&phi, Quantity::Cbdiam, 2, &flip, 256) - 3.0).abs() < 1e-12);
    let l2 = cb_lower(&phi, 2, Quantity::Cbdiam, &b).unwrap();
    assert!(l2.lower >= 3.0 - 1e-12, "{l2:?}");
}

#[test]
fn non_paraunital_is_infinite() {
    let phi = ex("counterexample", None);
    let s = sdiam_estimate(&phi, &Budget::default());
    assert!(s.lower.is_infinite() && s.upper.is_infinite());
    assert_eq!(s.certificate, Certificate::NonParaunital);
    let ratios = divergence_ratios(&phi, 6);
    assert!(ratios.last().unwrap().1 > 1e3);
    assert!(ratios.windows(2).all(|w| w[1].1 > w[0].1));
    assert!(divergence_ratios(&SuperOp::transpose_map(2), 6)
        .iter()
        .all(|r| r.1 < 1.0 + 1e-9));
}

#[test]
fn seeds_are_deterministic() {
    let b = Budget {
        restarts: 4,
        iters: 30,
        ..Budget::default()
    };
    let phi = random_superop(RandomKind::HermitianChoi, 2, 2, 3).unwrap();
    let phi = phi.translate_by_trace(C64::new(0.0, 0.0));
    assert_eq!(map_norm(&phi, &b), map_norm(&phi, &b));
    let uc = random_superop(RandomKind::UnitalChannel, 3, 3, 1).unwrap();
    assert_eq!(sdiam_estimate(&uc, &b), sdiam_estimate(&uc, &b));
}

#[test]
fn unital_channel_sdiam_at_most_one() {
    let b = Budget::default();
    for seed in 0..5 {
        let phi = random_superop(RandomKind::UnitalChannel, 3, 3, seed).unwrap();
        let s = sdiam_estimate(&phi, &b);
        assert!((s.upper - 1.0).abs() < 1e-12);
        assert!(s.lower <= 1.0 + 1e-9, "{s:?}");
        self_certifies(&phi, &s, &b);
    }
}

#[test]
fn ledger_has_no_violations_on_examples() {
    let b = Budget {
        restarts: 4,
        iters: 60,
        ..Budget::default()
    };
    for id in [
        "corner",
        "transpose",
        "final_phi",
        "diambound",
        "id_plus_trace",
        "counterexample",
    ] {
        let phi = ex(id, None);
        let mut set = EstimateSet::default();
        set.insert(map_norm(&phi, &b));
        set.insert(diam_estimate(&phi, &b));
        set.insert(sdiam_estimate(&phi, &b));
        for q in [Quantity::Cb, Quantity::Cbdiam, Quantity::Cbsdiam] {
            set.insert(cb_lower(&phi, 2, q, &b).unwrap());
        }
        for rel in inequality_ledger(&phi, &set) {
            assert_ne!(rel.status, Status::Violated, "{id}: {rel:?}");
        }
    }
}

#[test]
fn cb_rejects_oversized_levels() {
    let phi = SuperOp::transpose_map(4);
    let err = cb_lower(&phi, 17, Quantity::Cb, &Budget::default()).unwrap_err();
    assert!(matches!(err, Error::ResourceLimit { requested: 68, max: 64 }));
    assert!(cb_lower(&phi, 2, Quantity::Diam, &Budget::default()).is_err());
}
