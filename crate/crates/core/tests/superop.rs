mod common;

use opdiam_core::eig::{eigvalsh, extreme_eigenvalues};
use opdiam_core::numrange::support_function;
use opdiam_core::superop::{
    choi_kraus, compose, matrix_units, named_example, random_superop, random_unitary, section_translate,
    trace_translate_cp, traceless_hermitian_basis, RandomKind,
};
use opdiam_core::{ComplexMatrix, SuperOp, C64};
use proptest::prelude::*;

use common::{complex_matrix, hermitian};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

fn basis_distance(a: &SuperOp, b: &SuperOp) -> f64 {
    matrix_units(a.dim_in())
        .iter()
        .map(|e| a.apply(e).unwrap().max_abs_diff(&b.apply(e).unwrap()))
        .fold(0.0, f64::max)
}

/// Unital, trace-preserving and CP: a convex mix of the identity and unitary
/// conjugations, invertible because the identity weight dominates.
fn mixed_unitary(n: usize, seed: u64) -> SuperOp {
    let kraus: Vec<ComplexMatrix> = (0..3)
        .map(|k| {
            let w = if k == 0 { 0.8f64 } else { 0.1 };
            let u = if k == 0 {
                ComplexMatrix::identity(n)
            } else {
                random_unitary(n, seed + k)
            };
            u.scale_real(w.sqrt())
        })
        .collect();
    SuperOp::from_kraus(n, n, &kraus, &[]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn choi_kraus_round_trip((n, m) in dims(), seed in any::<u64>()) {
        let phi = random_superop(RandomKind::HermitianChoi, n, m, seed).unwrap();
        let k = choi_kraus(&phi).unwrap();
        prop_assert!(basis_distance(&k.to_superop(), &phi) <= 1e-9);
        let (plus, minus) = k.cp_parts();
        prop_assert!(plus.flags().cp && minus.flags().cp);
    }

    #[test]
    fn cp_iff_no_minus_operators((n, m) in dims(), seed in any::<u64>(), cp in any::<bool>()) {
        let kind = if cp { RandomKind::GinibreCp } else { RandomKind::HermitianChoi };
        let phi = random_superop(kind, n, m, seed).unwrap();
        let k = choi_kraus(&phi).unwrap();
        let oracle = eigvalsh(phi.choi())[0] >= -1e-10 * phi.choi().max_abs().max(1.0);
        prop_assert_eq!(k.is_cp(), oracle);
        prop_assert_eq!(phi.flags().cp, oracle);
    }

    #[test]
    fn scaled_tp_matches_trace_zero_criterion(n in 2usize..=4, seed in any::<u64>(), which in 0u8..3) {
        let phi = match which {
            0 => random_superop(RandomKind::HermitianChoi, n, n, seed).unwrap(),
            1 => random_superop(RandomKind::UnitalChannel, n, n, seed).unwrap().adjoint_map(),
            _ => random_superop(RandomKind::UnitalChannel, n, n, seed).unwrap().adjoint_map().scale(C64::new(2.5, 0.0)),
        };
        let kills_trace = traceless_hermitian_basis(n)
            .iter()
            .all(|b| phi.apply(b).unwrap().trace().norm() <= 1e-9);
        prop_assert_eq!(phi.flags().trace_scale.is_some(), kills_trace);
    }

    #[test]
    fn compose_is_sequential_application(n in 1usize..=3, seed in any::<u64>(), a in complex_matrix(3)) {
        let phi = random_superop(RandomKind::GinibreCp, 3, n, seed).unwrap();
        let psi = random_superop(RandomKind::HermitianChoi, n, 2, seed ^ 1).unwrap();
        let both = compose(&psi, &phi).unwrap();
        let seq = psi.apply(&phi.apply(&a).unwrap()).unwrap();
        prop_assert!(both.apply(&a).unwrap().max_abs_diff(&seq) <= 1e-9 * seq.max_abs().max(1.0));
    }

    #[test]
    fn transfer_round_trip((n, m) in dims(), seed in any::<u64>()) {
        let phi = random_superop(RandomKind::HermitianChoi, n, m, seed).unwrap();
        let back = SuperOp::from_transfer(n, m, &phi.transfer()).unwrap();
        prop_assert_eq!(back.choi(), phi.choi());
    }

    #[test]
    fn trace_translation_is_cp((n, m) in dims(), seed in any::<u64>()) {
        let phi = random_superop(RandomKind::HermitianChoi, n, m, seed).unwrap();
        let t = trace_translate_cp(&phi).unwrap();
        let (lo, _) = extreme_eigenvalues(t.translated.choi());
        prop_assert!(lo >= -1e-9 * t.translated.choi().max_abs().max(1.0));
        let expect_beta = (m * m) as f64 * t.negative_norm;
        prop_assert!((t.beta - expect_beta).abs() <= 1e-12 * expect_beta.max(1.0));
    }

    #[test]
    fn section_translation_postcondition(n in 2usize..=3, seed in any::<u64>()) {
        let phi = mixed_unitary(n, seed).inverse().unwrap();
        let s = section_translate(&phi).unwrap();
        let round = compose(&s.psi_cp, &s.phi_sec).unwrap();
        prop_assert!(basis_distance(&round, &SuperOp::identity(n)) <= 1e-8);
        prop_assert!(s.psi_cp.flags().cp);
    }

    #[test]
    fn amplification_preserves_cp(n in 1usize..=3, k in 1usize..=3, seed in any::<u64>()) {
        let phi = random_superop(RandomKind::GinibreCp, n, n, seed).unwrap();
        let amp = phi.amplify(k, 64).unwrap();
        prop_assert!(eigvalsh(amp.choi())[0] >= -1e-9 * amp.choi().max_abs().max(1.0));
    }

    #[test]
    fn unital_channels_shrink_support(n in 2usize..=4, seed in any::<u64>(), e in complex_matrix(4)) {
        let phi = random_superop(RandomKind::UnitalChannel, n, n, seed).unwrap();
        let e = e.block(0, 0, n, n);
        let out = phi.apply(&e).unwrap();
        for k in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            prop_assert!(support_function(&out, theta).unwrap() <= support_function(&e, theta).unwrap() + 1e-8);
        }
    }

    #[test]
    fn final_example_is_expansive(n in 2usize..=4, a in hermitian(4)) {
        let phi = named_example("final_phi", Some(n)).unwrap();
        let a = a.block(0, 0, n, n);
        let (alo, ahi) = extreme_eigenvalues(&a);
        let (plo, phi_hi) = extreme_eigenvalues(&phi.apply(&a).unwrap());
        prop_assert!(plo <= alo + 1e-9 && ahi <= phi_hi + 1e-9);
    }
}

#[test]
fn amplified_id_plus_trace_on_flip() {
    let phi = named_example("id_plus_trace", Some(2)).unwrap();
    let amp = phi.amplify(2, 64).unwrap();
    let mut flip = ComplexMatrix::zeros(4, 4);
    flip.set_block(0, 1, &ComplexMatrix::identity(2));
    flip.set_block(1, 0, &ComplexMatrix::identity(2));
    assert_eq!(amp.apply(&flip).unwrap(), flip.scale_real(3.0));
}

#[test]
fn counterexample_moves_a_non_positive_to_a_positive() {
    let phi = named_example("counterexample", None).unwrap();
    assert_eq!(section_translate(&phi).unwrap_err(), opdiam_core::Error::NotScaledTP);
    let e = ComplexMatrix::diag_real(&[1.0, -1.0]);
    for gamma in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let out = phi.translate_by_trace(C64::new(gamma, 0.0)).apply(&e).unwrap();
        assert_eq!(out, ComplexMatrix::diag_real(&[2.0, 0.0]));
    }
}
