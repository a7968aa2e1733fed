mod common;

use common::{close, complex_matrix, hermitian, sized_matrix};
use opdiam_core::eig::eigvalsh;
use opdiam_core::superop::random_unitary;
use opdiam_core::{hermitian_eig, min_enclosing_circle, operator_norm, ComplexMatrix, C64};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalues_sum_to_trace(n in 1usize..=32, seed in any::<u64>()) {
        let g = random_unitary(n, seed);
        let a = (&g + &g.dagger()).scale_real(0.5);
        let eig = hermitian_eig(&a).unwrap();
        let sum: f64 = eig.values.iter().sum();
        prop_assert!((sum - a.trace().re).abs() <= 1e-9 * operator_norm(&a).max(1.0) * n as f64);
        for w in eig.values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn eigenpairs_have_small_residual(a in (2usize..=8).prop_flat_map(hermitian)) {
        let eig = hermitian_eig(&a).unwrap();
        for (k, &lambda) in eig.values.iter().enumerate() {
            let v = eig.vector(k);
            let av = a.mul_vec(&v);
            let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - y * lambda).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-9 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn operator_norm_is_unitarily_invariant(a in sized_matrix(2, 8), s1 in any::<u64>(), s2 in any::<u64>()) {
        let n = a.rows();
        let (u, v) = (random_unitary(n, s1), random_unitary(n, s2));
        let uav = &(&u * &a) * &v;
        prop_assert!(close(operator_norm(&uav), operator_norm(&a), 1e-9));
    }

    #[test]
    fn operator_norm_matches_gram_spectrum(a in sized_matrix(1, 6)) {
        // ||A||^2 is the top eigenvalue of A*A.
        let top = eigvalsh(&(&a.dagger() * &a)).last().copied().unwrap();
        prop_assert!(close(operator_norm(&a), top.max(0.0).sqrt(), 1e-9));
    }

    #[test]
    fn dagger_is_an_involution(a in sized_matrix(1, 6)) {
        prop_assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn re_and_im_parts_reconstruct(a in sized_matrix(1, 6)) {
        let re = a.re_part().unwrap();
        let im = a.im_part().unwrap();
        prop_assert!(re.hermitian_defect() < 1e-15 && im.hermitian_defect() < 1e-15);
        let back = &re + &im.scale(C64::new(0.0, 1.0));
        prop_assert!(back.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn kron_is_multiplicative(a in complex_matrix(2), b in complex_matrix(3), c in complex_matrix(2), d in complex_matrix(3)) {
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn jung_bound_on_point_sets(pts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..200)) {
        let pts: Vec<C64> = pts.into_iter().map(|(x, y)| C64::new(x, y)).collect();
        let circle = min_enclosing_circle(&pts).unwrap();
        let mut diam = 0.0f64;
        for p in &pts {
            prop_assert!(circle.contains(*p, 1e-9));
            for q in &pts {
                diam = diam.max((p - q).norm());
            }
        }
        prop_assert!(circle.radius <= diam / 3f64.sqrt() + 1e-12);
        prop_assert!(circle.radius >= 0.5 * diam - 1e-12);
    }
}

#[test]
fn kron_of_identities() {
    let i2 = ComplexMatrix::identity(2);
    assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
}
