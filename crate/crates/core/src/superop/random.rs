//! Seeded random ensembles of maps.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::str::FromStr;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{inner, ComplexMatrix, C64};
use crate::superop::{SuperOp, DEFAULT_MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RandomKind {
    /// Hermitian part of a complex Ginibre Choi matrix.
    HermitianChoi,
    /// `G G*` for a square complex Ginibre `G`: completely positive, full
    /// Kraus rank.
    GinibreCp,
    /// `A -> V* (A (x) I_r) V` for a random isometry `V`: unital and CP.
    UnitalChannel,
    /// `(1 - p) id + p Lambda` with `Lambda` a random unital channel,
    /// checked to be invertible.
    UcpBijection,
}

impl RandomKind {
    pub const ALL: [RandomKind; 4] = [
        RandomKind::HermitianChoi,
        RandomKind::GinibreCp,
        RandomKind::UnitalChannel,
        RandomKind::UcpBijection,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RandomKind::HermitianChoi => "hermitian_choi",
            RandomKind::GinibreCp => "ginibre_cp",
            RandomKind::UnitalChannel => "unital_channel",
            RandomKind::UcpBijection => "ucp_bijection",
        }
    }
}

impl FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RandomKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Weight of the random channel in [`RandomKind::UcpBijection`].
pub const UCP_MIX: f64 = 0.25;

/// Deterministic per `(kind, n, m, seed)`. `UcpBijection` needs `n == m`.
pub fn random_superop(kind: RandomKind, n: usize, m: usize, seed: u64) -> Result<SuperOp> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("dimensions must be positive"));
    }
    if n * m > DEFAULT_MAX_DIM {
        return Err(Error::ResourceLimit {
            requested: n * m,
            max: DEFAULT_MAX_DIM,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = n * m;
    match kind {
        RandomKind::HermitianChoi => {
            let g = ginibre(&mut rng, d, d);
            SuperOp::from_choi(n, m, g.re_part()?)
        }
        RandomKind::GinibreCp => {
            let g = ginibre(&mut rng, d, d).scale_real(1.0 / (d as f64).sqrt());
            SuperOp::from_choi(n, m, &g * &g.dagger())
        }
        RandomKind::UnitalChannel => unital_channel(&mut rng, n, m),
        RandomKind::UcpBijection => {
            if n != m {
                return Err(Error::DimensionMismatch {
                    expected: (n, n),
                    found: (n, m),
                });
            }
            for _ in 0..16 {
                let lambda = unital_channel(&mut rng, n, n)?;
                let mix = SuperOp::from_choi(
                    n,
                    n,
                    &SuperOp::identity(n).choi().scale_real(1.0 - UCP_MIX) + &lambda.choi().scale_real(UCP_MIX),
                )?;
                let lu = mix.transfer().lu();
                if lu.is_ok_and(|lu| lu.pivot_ratio() > 1e-8) {
                    return Ok(mix);
                }
            }
            Err(Error::Singular)
        }
    }
}

fn unital_channel(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Result<SuperOp> {
    let r = m.max(2);
    let v = random_isometry(rng, n * r, m);
    let id_r = ComplexMatrix::identity(r);
    SuperOp::from_fn(n, m, |e| &(&v.dagger() * &e.kron(&id_r)) * &v)
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with independent standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniformly random unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = crate::matrix::normalize(&mut v);
        if norm > 1e-12 {
            return v;
        }
    }
}

/// `rows x cols` matrix with orthonormal columns (`rows >= cols`), from
/// Gram-Schmidt on a Ginibre matrix; Haar distributed.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut cols_out: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while cols_out.len() < cols {
        let mut x: Vec<C64> = (0..rows).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols_out {
                let c = inner(q, &x);
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
            }
        }
        if crate::matrix::normalize(&mut x) > 1e-8 {
            cols_out.push(x);
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| cols_out[j][i])
}

/// Haar random unitary in `M_n` for a seed.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_isometry(&mut ChaCha8Rng::seed_from_u64(seed), n, n)
}

/// Ginibre matrix for a seed.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    ginibre(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols)
}

/// Hermitian part of a Ginibre matrix for a seed.
pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let g = random_matrix(n, n, seed);
    (&g + &g.dagger()).scale_real(0.5)
}
