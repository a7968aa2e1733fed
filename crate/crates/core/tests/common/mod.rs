#![allow(dead_code)]

use opdiam_core::{ComplexMatrix, C64};
use proptest::prelude::*;

pub fn complex_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n)
        .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| C64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1])))
}

pub fn sized_matrix(lo: usize, hi: usize) -> impl Strategy<Value = ComplexMatrix> {
    (lo..=hi).prop_flat_map(complex_matrix)
}

pub fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n).prop_map(|a| (&a + &a.dagger()).scale_real(0.5))
}

pub fn unit_vector(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * n)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.chunks(2).map(|c| C64::new(c[0] / norm, c[1] / norm)).collect()
        })
}

pub fn spectrum_spread(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
