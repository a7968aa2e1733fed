use opdiam::json::{matrix_value, parse_matrix, parse_superop, superop_value, to_pretty};
use opdiam_core::superop::{random_superop, RandomKind};
use opdiam_core::{ComplexMatrix, C64};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec((any::<f64>(), any::<f64>()), r * c).prop_map(move |v| {
            // JSON has no NaN or infinity.
            let fix = |x: f64| if x.is_finite() { x } else { 0.5 };
            ComplexMatrix::from_fn(r, c, |i, j| {
                let (re, im) = v[i * c + j];
                C64::new(fix(re), fix(im))
            })
        })
    })
}

proptest! {
    #[test]
    fn matrices_round_trip_bitwise(a in matrix()) {
        let text = to_pretty(&matrix_value(&a));
        let b = parse_matrix(&text).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        prop_assert_eq!(to_pretty(&matrix_value(&b)), text);
    }

    #[test]
    fn maps_round_trip(n in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
        let phi = random_superop(RandomKind::HermitianChoi, n, m, seed).unwrap();
        let text = to_pretty(&superop_value(&phi));
        let back = parse_superop(&text).unwrap();
        prop_assert_eq!(back.choi(), phi.choi());
        prop_assert_eq!(to_pretty(&superop_value(&back)), text);
    }
}
