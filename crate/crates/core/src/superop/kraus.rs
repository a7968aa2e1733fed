use alloc::vec::Vec;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;

use crate::eig::{eigh, operator_norm};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::superop::SuperOp;
use crate::Tolerances;

/// `Phi(A) = sum K A K* - sum L A L*`, with `K` in `plus` and `L` in
/// `minus`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausDecomposition {
    pub dim_in: usize,
    pub dim_out: usize,
    pub ops_plus: Vec<ComplexMatrix>,
    pub ops_minus: Vec<ComplexMatrix>,
}

impl KrausDecomposition {
    pub fn is_cp(&self) -> bool {
        self.ops_minus.is_empty()
    }

    pub fn to_superop(&self) -> SuperOp {
        SuperOp::from_kraus(self.dim_in, self.dim_out, &self.ops_plus, &self.ops_minus)
            .expect("Kraus operators have consistent shapes")
    }

    /// The completely positive parts `(Phi_+, Phi_-)`.
    pub fn cp_parts(&self) -> (SuperOp, SuperOp) {
        let plus = SuperOp::from_kraus(self.dim_in, self.dim_out, &self.ops_plus, &[]).expect("consistent shapes");
        let minus = SuperOp::from_kraus(self.dim_in, self.dim_out, &self.ops_minus, &[]).expect("consistent shapes");
        (plus, minus)
    }

    /// `sum ||K||^2 + sum ||L||^2`, an upper bound for the (cb) norm.
    pub fn norm_bound(&self) -> f64 {
        self.ops_plus
            .iter()
            .chain(&self.ops_minus)
            .map(|k| operator_norm(k).powi(2))
            .sum()
    }
}

/// Kraus operators from the eigendecomposition of a Hermitian Choi matrix.
/// An eigenpair `(lambda, v)` becomes `sqrt|lambda| K` with `vec(K) = v`,
/// sorted into the plus or minus list by the sign of `lambda`.
pub fn choi_kraus(phi: &SuperOp) -> Result<KrausDecomposition> {
    if !phi.flags().self_adjoint {
        return Err(Error::NonSelfAdjoint);
    }
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let ed = eigh(phi.choi());
    let scale = ed.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = Tolerances::default().scaled_atol(scale);
    let mut out = KrausDecomposition {
        dim_in: n,
        dim_out: m,
        ops_plus: Vec::new(),
        ops_minus: Vec::new(),
    };
    for (k, &lambda) in ed.values.iter().enumerate().rev() {
        if lambda.abs() <= cut {
            continue;
        }
        let v = ed.vector(k);
        let op = ComplexMatrix::from_vec_col(m, n, &v)
            .expect("eigenvector length n*m")
            .scale_real(lambda.abs().sqrt());
        if lambda > 0.0 {
            out.ops_plus.push(op);
        } else {
            out.ops_minus.push(op);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;

    #[test]
    fn identity_has_single_plus_operator() {
        let k = choi_kraus(&SuperOp::identity(2)).unwrap();
        assert_eq!(k.ops_plus.len(), 1);
        assert!(k.ops_minus.is_empty());
        let op = &k.ops_plus[0];
        let ratio = op[(0, 0)];
        assert!(op.max_abs_diff(&ComplexMatrix::scalar(2, ratio)) < 1e-14);
        assert!((ratio.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn negated_identity_has_single_minus_operator() {
        let k = choi_kraus(&SuperOp::identity(2).scale(C64::new(-1.0, 0.0))).unwrap();
        assert!(k.ops_plus.is_empty());
        assert_eq!(k.ops_minus.len(), 1);
    }

    #[test]
    fn transpose_splits_three_to_one() {
        let t = SuperOp::transpose_map(2);
        let k = choi_kraus(&t).unwrap();
        assert_eq!(k.ops_plus.len(), 3);
        assert_eq!(k.ops_minus.len(), 1);
        assert!(k.to_superop().distance(&t).unwrap() < 1e-13);
        let (p, m) = k.cp_parts();
        assert!(p.flags().cp && m.flags().cp);
    }

    #[test]
    fn rejects_non_self_adjoint() {
        let phi = SuperOp::from_fn(2, 2, |a| {
            let mut out = ComplexMatrix::zeros(2, 2);
            out[(0, 1)] = a[(0, 1)];
            out
        })
        .unwrap();
        assert_eq!(choi_kraus(&phi), Err(Error::NonSelfAdjoint));
    }
}
