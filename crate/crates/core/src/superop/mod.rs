//! Linear maps `M_n -> M_m`.
//!
//! A [`SuperOp`] is stored as its Choi matrix `C = sum_ij E_ij (x) Phi(E_ij)`:
//! the `m x m` block in block-row `i` and block-column `j` is `Phi(E_ij)`,
//! i.e. `C[i*m + p][j*m + q] = Phi(E_ij)[p][q]`.
//!
//! The transfer matrix acts on column-stacked vectors,
//! `vec(A)[i + j*n] = A[i][j]`, so that `vec(Phi(A)) = T vec(A)` with
//! `T[p + q*m][i + j*n] = C[i*m + p][j*m + q]`.
//!
//! A Kraus operator `K` (`m x n`) corresponds to the Choi vector
//! `kappa[i*m + p] = K[p][i]`, which is `vec(K)` under the same stacking.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eig::{eigvalsh, extreme_eigenvalues};
use crate::error::{Error, Result};
use crate::matrix::{block_apply, ComplexMatrix, C64, ONE, ZERO};
use crate::Tolerances;

mod examples;
mod kraus;
pub(crate) mod random;
mod translate;

pub use examples::{named_example, named_system_map, SystemMap, EXAMPLE_IDS, SYSTEM_MAP_IDS};
pub use kraus::{choi_kraus, KrausDecomposition};
pub use random::{random_hermitian, random_matrix, random_superop, random_unitary, RandomKind};
pub use translate::{section_translate, trace_translate_cp, SectionTranslation, TraceTranslation};

/// Number of rank-one probes behind [`MapFlags::positive_sampled`].
pub const POSITIVITY_PROBES: usize = 500;
const POSITIVITY_SEED: u64 = 0x0b5e_55ed;

/// Default cap on the matrix size produced by amplification.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Classification of a map, computed once at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapFlags {
    /// `Phi(A*) = Phi(A)*`, equivalently a Hermitian Choi matrix.
    pub self_adjoint: bool,
    /// `Phi(I_n) = I_m`.
    pub unital: bool,
    /// `Some(c)` when `Phi(I_n) = c I_m`.
    pub paraunital: Option<C64>,
    /// `Some(k)` when `tr Phi(A) = k tr A` for all `A`.
    pub trace_scale: Option<C64>,
    /// Completely positive: positive semidefinite Choi matrix.
    pub cp: bool,
    /// No sampled rank-one projection was mapped outside the positive cone.
    /// One-sided: `true` does not prove positivity.
    pub positive_sampled: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperOp {
    dim_in: usize,
    dim_out: usize,
    choi: ComplexMatrix,
    flags: MapFlags,
}

impl SuperOp {
    pub fn from_choi(dim_in: usize, dim_out: usize, choi: ComplexMatrix) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidShape("map dimensions must be positive".into()));
        }
        let d = dim_in * dim_out;
        choi.ensure_shape(d, d)?;
        let flags = classify_choi(dim_in, dim_out, &choi, &Tolerances::default());
        Ok(Self {
            dim_in,
            dim_out,
            choi,
            flags,
        })
    }

    /// `Phi(A) = sum K A K* - sum L A L*` with every operator `m x n`.
    pub fn from_kraus(dim_in: usize, dim_out: usize, plus: &[ComplexMatrix], minus: &[ComplexMatrix]) -> Result<Self> {
        let d = dim_in * dim_out;
        let mut choi = ComplexMatrix::zeros(d, d);
        for (ops, sign) in [(plus, 1.0), (minus, -1.0)] {
            for k in ops {
                k.ensure_shape(dim_out, dim_in)?;
                let kappa = k.vec_col();
                for r in 0..d {
                    let x = kappa[r] * sign;
                    for c in 0..d {
                        choi[(r, c)] += x * kappa[c].conj();
                    }
                }
            }
        }
        Self::from_choi(dim_in, dim_out, choi)
    }

    /// From the `m^2 x n^2` matrix acting on column-stacked vectors.
    pub fn from_transfer(dim_in: usize, dim_out: usize, t: &ComplexMatrix) -> Result<Self> {
        let (n, m) = (dim_in, dim_out);
        t.ensure_shape(m * m, n * n)?;
        let choi = ComplexMatrix::from_fn(n * m, n * m, |r, c| {
            let (i, p) = (r / m, r % m);
            let (j, q) = (c / m, c % m);
            t[(p + q * m, i + j * n)]
        });
        Self::from_choi(n, m, choi)
    }

    /// Builds the map from its action on matrix units.
    pub fn from_fn(dim_in: usize, dim_out: usize, mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let (n, m) = (dim_in, dim_out);
        let mut choi = ComplexMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let out = f(&ComplexMatrix::unit(n, i, j));
                out.ensure_shape(m, m)?;
                choi.set_block(i, j, &out);
            }
        }
        Self::from_choi(n, m, choi)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |a| a.clone()).expect("identity map")
    }

    /// `A -> tr(A) I_m`.
    pub fn trace_times_unit(dim_in: usize, dim_out: usize) -> Self {
        Self::from_choi(dim_in, dim_out, ComplexMatrix::identity(dim_in * dim_out)).expect("trace map")
    }

    pub fn transpose_map(n: usize) -> Self {
        Self::from_fn(n, n, |a| a.transpose()).expect("transpose map")
    }

    #[inline]
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    #[inline]
    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn flags(&self) -> &MapFlags {
        &self.flags
    }

    /// `Phi(E_ij)`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        self.choi.block(i, j, self.dim_out, self.dim_out)
    }

    pub fn transfer(&self) -> ComplexMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        ComplexMatrix::from_fn(m * m, n * n, |r, c| {
            let (p, q) = (r % m, r / m);
            let (i, j) = (c % n, c / n);
            self.choi[(i * m + p, j * m + q)]
        })
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        a.ensure_shape(self.dim_in, self.dim_in)?;
        Ok(self.apply_unchecked(a))
    }

    fn apply_unchecked(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        let mut out = ComplexMatrix::zeros(m, m);
        let dst = out.data_mut();
        let d = n * m;
        let src = self.choi.data();
        for i in 0..n {
            for j in 0..n {
                let x = a[(i, j)];
                if x == ZERO {
                    continue;
                }
                for p in 0..m {
                    let row = &src[(i * m + p) * d + j * m..(i * m + p) * d + j * m + m];
                    for (o, c) in dst[p * m..p * m + m].iter_mut().zip(row) {
                        *o += x * c;
                    }
                }
            }
        }
        out
    }

    /// The Hilbert-Schmidt adjoint `Phi*`, `tr(Phi*(B)* A) = tr(B* Phi(A))`.
    pub fn apply_adjoint(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        b.ensure_shape(self.dim_out, self.dim_out)?;
        Ok(self.apply_adjoint_unchecked(b))
    }

    fn apply_adjoint_unchecked(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut s = ZERO;
            for p in 0..m {
                for q in 0..m {
                    s += self.choi[(i * m + p, j * m + q)].conj() * b[(p, q)];
                }
            }
            s
        })
    }

    /// `Phi(I_n)`.
    pub fn unit_image(&self) -> ComplexMatrix {
        let m = self.dim_out;
        let mut out = ComplexMatrix::zeros(m, m);
        for i in 0..self.dim_in {
            out += &self.block(i, i);
        }
        out
    }

    pub fn adjoint_map(&self) -> SuperOp {
        let (n, m) = (self.dim_in, self.dim_out);
        let choi = ComplexMatrix::from_fn(n * m, n * m, |r, c| {
            let (p, i) = (r / n, r % n);
            let (q, j) = (c / n, c % n);
            self.choi[(i * m + p, j * m + q)].conj()
        });
        SuperOp::from_choi(m, n, choi).expect("adjoint dimensions")
    }

    pub fn try_add(&self, other: &SuperOp) -> Result<SuperOp> {
        self.ensure_same_dims(other)?;
        SuperOp::from_choi(self.dim_in, self.dim_out, &self.choi + &other.choi)
    }

    pub fn try_sub(&self, other: &SuperOp) -> Result<SuperOp> {
        self.ensure_same_dims(other)?;
        SuperOp::from_choi(self.dim_in, self.dim_out, &self.choi - &other.choi)
    }

    pub fn scale(&self, c: C64) -> SuperOp {
        SuperOp::from_choi(self.dim_in, self.dim_out, self.choi.scale(c)).expect("same dimensions")
    }

    /// `Phi + gamma tr(.) I_m`; the Choi matrix shifts by `gamma I`.
    pub fn translate_by_trace(&self, gamma: C64) -> SuperOp {
        SuperOp::from_choi(self.dim_in, self.dim_out, self.choi.shifted(gamma)).expect("same dimensions")
    }

    fn ensure_same_dims(&self, other: &SuperOp) -> Result<()> {
        if (self.dim_in, self.dim_out) == (other.dim_in, other.dim_out) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: (self.dim_in, self.dim_out),
                found: (other.dim_in, other.dim_out),
            })
        }
    }

    /// Inverse of a bijective map `M_n -> M_n` through its transfer matrix.
    pub fn inverse(&self) -> Result<SuperOp> {
        if self.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: (self.dim_in, self.dim_in),
                found: (self.dim_in, self.dim_out),
            });
        }
        let t = self.transfer();
        let lu = t.lu()?;
        if lu.pivot_ratio() < 1e-13 {
            return Err(Error::Singular);
        }
        SuperOp::from_transfer(self.dim_in, self.dim_out, &t.inverse()?)
    }

    /// The blockwise map `[A_ab] -> [Phi(A_ab)]` on `M_k(M_n)`.
    pub fn amplify(&self, k: usize, max_dim: usize) -> Result<SuperOp> {
        if k == 0 {
            return Err(Error::InvalidArgument("amplification level must be positive"));
        }
        let big = k * self.dim_in.max(self.dim_out);
        if big > max_dim {
            return Err(Error::ResourceLimit {
                requested: big,
                max: max_dim,
            });
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let (n, m) = (self.dim_in, self.dim_out);
        let (kn, km) = (k * n, k * m);
        let mut choi = ComplexMatrix::zeros(kn * km, kn * km);
        for a in 0..k {
            for b in 0..k {
                for i in 0..n {
                    for j in 0..n {
                        let r0 = (a * n + i) * km + a * m;
                        let c0 = (b * n + j) * km + b * m;
                        for p in 0..m {
                            for q in 0..m {
                                choi[(r0 + p, c0 + q)] = self.choi[(i * m + p, j * m + q)];
                            }
                        }
                    }
                }
            }
        }
        SuperOp::from_choi(kn, km, choi)
    }

    /// A borrowed view of the level-`k` amplification; nothing is
    /// materialized.
    pub fn amplified(&self, k: usize) -> Amplified<'_> {
        Amplified { base: self, k }
    }

    /// Largest entrywise difference between two Choi matrices.
    pub fn distance(&self, other: &SuperOp) -> Result<f64> {
        self.ensure_same_dims(other)?;
        Ok(self.choi.max_abs_diff(&other.choi))
    }

    /// Recomputes the flags under explicit tolerances.
    pub fn classify_with(&self, tol: &Tolerances) -> MapFlags {
        classify_choi(self.dim_in, self.dim_out, &self.choi, tol)
    }

    /// `lambda_min` of the Choi matrix when it is Hermitian.
    pub fn choi_min_eigenvalue(&self) -> Option<f64> {
        self.flags.self_adjoint.then(|| extreme_eigenvalues(&self.choi).0)
    }
}

/// `Psi o Phi`.
pub fn compose(psi: &SuperOp, phi: &SuperOp) -> Result<SuperOp> {
    if psi.dim_in != phi.dim_out {
        return Err(Error::DimensionMismatch {
            expected: (phi.dim_out, phi.dim_out),
            found: (psi.dim_in, psi.dim_in),
        });
    }
    SuperOp::from_fn(phi.dim_in, psi.dim_out, |e| {
        psi.apply_unchecked(&phi.apply_unchecked(e))
    })
}

/// Flags of a map, recomputed from scratch.
pub fn classify(phi: &SuperOp) -> MapFlags {
    phi.classify_with(&Tolerances::default())
}

fn classify_choi(n: usize, m: usize, choi: &ComplexMatrix, tol: &Tolerances) -> MapFlags {
    let scale = choi.max_abs();
    let atol = tol.scaled_atol(scale);
    let self_adjoint = choi.hermitian_defect() <= atol;

    let mut unit = ComplexMatrix::zeros(m, m);
    for i in 0..n {
        unit += &choi.block(i, i, m, m);
    }
    let unit_atol = tol.scaled_atol(unit.max_abs());
    let paraunital = unit.is_scalar(unit_atol).then(|| unit.trace() / m as f64);
    let unital = paraunital.is_some_and(|c| (c - ONE).norm() <= unit_atol);

    let k = choi.block(0, 0, m, m).trace();
    let mut scaled_tp = true;
    'outer: for i in 0..n {
        for j in 0..n {
            let t = choi.block(i, j, m, m).trace();
            let expected = if i == j { k } else { ZERO };
            if (t - expected).norm() > atol {
                scaled_tp = false;
                break 'outer;
            }
        }
    }
    let trace_scale = scaled_tp.then_some(k);

    let cp = self_adjoint && {
        let (lo, hi) = extreme_eigenvalues(choi);
        lo >= -tol.atol * hi.abs().max(lo.abs()).max(1.0)
    };
    let positive_sampled = cp || (self_adjoint && sampled_positive(n, m, choi, atol));

    MapFlags {
        self_adjoint,
        unital,
        paraunital,
        trace_scale,
        cp,
        positive_sampled,
    }
}

fn sampled_positive(n: usize, m: usize, choi: &ComplexMatrix, atol: f64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(POSITIVITY_SEED);
    for _ in 0..POSITIVITY_PROBES {
        let v = random::unit_vector(&mut rng, n);
        let mut out = ComplexMatrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                let w = v[i] * v[j].conj();
                for p in 0..m {
                    for q in 0..m {
                        out[(p, q)] += w * choi[(i * m + p, j * m + q)];
                    }
                }
            }
        }
        if eigvalsh(&out)[0] < -atol {
            return false;
        }
    }
    true
}

/// A linear map between square matrix spaces, possibly never materialized
/// as a Choi matrix.
pub trait LinearMap {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    /// Panics on a shape mismatch.
    fn apply(&self, a: &ComplexMatrix) -> ComplexMatrix;
    /// Hilbert-Schmidt adjoint. Panics on a shape mismatch.
    fn apply_adjoint(&self, b: &ComplexMatrix) -> ComplexMatrix;
    fn is_self_adjoint(&self) -> bool;

    fn unit_image(&self) -> ComplexMatrix {
        self.apply(&ComplexMatrix::identity(self.dim_in()))
    }
}

impl LinearMap for SuperOp {
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn apply(&self, a: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(a.shape(), (self.dim_in, self.dim_in), "input shape");
        self.apply_unchecked(a)
    }

    fn apply_adjoint(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.shape(), (self.dim_out, self.dim_out), "output shape");
        self.apply_adjoint_unchecked(b)
    }

    fn is_self_adjoint(&self) -> bool {
        self.flags.self_adjoint
    }

    fn unit_image(&self) -> ComplexMatrix {
        SuperOp::unit_image(self)
    }
}

/// Level-`k` blockwise amplification of a borrowed map.
#[derive(Clone, Copy, Debug)]
pub struct Amplified<'a> {
    base: &'a SuperOp,
    k: usize,
}

impl Amplified<'_> {
    pub fn level(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &SuperOp {
        self.base
    }
}

impl LinearMap for Amplified<'_> {
    fn dim_in(&self) -> usize {
        self.k * self.base.dim_in
    }

    fn dim_out(&self) -> usize {
        self.k * self.base.dim_out
    }

    fn apply(&self, a: &ComplexMatrix) -> ComplexMatrix {
        if self.k == 1 {
            return LinearMap::apply(self.base, a);
        }
        block_apply(a, self.base.dim_in, |b| self.base.apply_unchecked(b)).expect("block shape")
    }

    fn apply_adjoint(&self, b: &ComplexMatrix) -> ComplexMatrix {
        if self.k == 1 {
            return LinearMap::apply_adjoint(self.base, b);
        }
        block_apply(b, self.base.dim_out, |x| self.base.apply_adjoint_unchecked(x)).expect("block shape")
    }

    fn is_self_adjoint(&self) -> bool {
        self.base.flags.self_adjoint
    }
}

/// Evaluates `Phi(vv*)` style sums without building `vv*`; used by tests and
/// positivity probes.
pub fn apply_rank_one(phi: &SuperOp, v: &[C64]) -> ComplexMatrix {
    let n = phi.dim_in;
    let a = ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
    phi.apply_unchecked(&a)
}

/// Swap operator `sum_ij E_ij (x) E_ji` on `C^n (x) C^n`, as an element of
/// `M_n(M_n)`.
pub fn swap_operator(n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(i * n + j, j * n + i)] = ONE;
        }
    }
    s
}

/// Unnormalized maximally entangled projection `sum_ij E_ij (x) E_ij`.
pub fn omega(n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(i * n + i, j * n + j)] = ONE;
        }
    }
    s
}

/// Matrix units of `M_n` in row-major order of `(i, j)`.
pub fn matrix_units(n: usize) -> Vec<ComplexMatrix> {
    (0..n * n).map(|k| ComplexMatrix::unit(n, k / n, k % n)).collect()
}

/// Orthonormal basis of the Hermitian matrices in `M_n` for the real inner
/// product `Re tr(A* B)`: diagonal units, then `(E_ij + E_ji)/sqrt 2` and
/// `i(E_ij - E_ji)/sqrt 2` for `i < j`. The trace-zero part is spanned by
/// everything orthogonal to `I / sqrt n`.
pub fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(ComplexMatrix::unit(n, i, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut s = ComplexMatrix::zeros(n, n);
            s[(i, j)] = C64::new(r, 0.0);
            s[(j, i)] = C64::new(r, 0.0);
            out.push(s);
            let mut a = ComplexMatrix::zeros(n, n);
            a[(i, j)] = C64::new(0.0, -r);
            a[(j, i)] = C64::new(0.0, r);
            out.push(a);
        }
    }
    out
}

/// Orthonormal basis of the trace-zero Hermitian matrices: off-diagonal
/// symmetric/antisymmetric pairs and normalized generalized Gell-Mann
/// diagonal elements.
pub fn traceless_hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = hermitian_basis(n).into_iter().skip(n).collect();
    for l in 1..n {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut d = ComplexMatrix::zeros(n, n);
        for i in 0..l {
            d[(i, i)] = C64::new(1.0 / norm, 0.0);
        }
        d[(l, l)] = C64::new(-(l as f64) / norm, 0.0);
        out.push(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::eigh;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample_input(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| {
            c(1.0 + i as f64 - 0.5 * j as f64, 0.25 * (i * j) as f64 - 0.3)
        })
    }

    #[test]
    fn identity_choi_spectrum() {
        let id = SuperOp::identity(2);
        let ev = eigh(id.choi()).values;
        let expected = [0.0, 0.0, 0.0, 2.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(id.flags().cp && id.flags().unital);
        assert_eq!(id.choi(), &omega(2));
    }

    #[test]
    fn transpose_choi_is_swap() {
        let t = SuperOp::transpose_map(2);
        assert_eq!(t.choi(), &swap_operator(2));
        let ev = eigh(t.choi()).values;
        assert!((ev[0] + 1.0).abs() < 1e-14);
        for v in &ev[1..] {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let f = t.flags();
        assert!(!f.cp && f.self_adjoint && f.unital && f.positive_sampled);
    }

    #[test]
    fn trace_map_choi_is_identity() {
        let t = SuperOp::trace_times_unit(2, 2);
        let a = sample_input(2);
        let out = t.apply(&a).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::scalar(2, a.trace())) < 1e-15);
        assert_eq!(t.flags().paraunital, Some(c(2.0, 0.0)));
        assert_eq!(t.flags().trace_scale, Some(c(2.0, 0.0)));
    }

    #[test]
    fn apply_on_units_matches_blocks() {
        let phi = SuperOp::from_fn(2, 3, |a| {
            ComplexMatrix::from_fn(3, 3, |p, q| a[(p % 2, q % 2)] * c(p as f64 + 1.0, q as f64))
        })
        .unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(phi.apply(&ComplexMatrix::unit(2, i, j)).unwrap(), phi.block(i, j));
            }
        }
    }

    #[test]
    fn transfer_round_trip_and_action() {
        let phi = SuperOp::from_fn(2, 3, |a| {
            let mut out = ComplexMatrix::zeros(3, 3);
            out[(0, 1)] = a[(1, 0)] * c(2.0, 1.0);
            out[(2, 2)] = a.trace();
            out[(1, 0)] = a[(0, 0)] - a[(1, 1)] * I_UNIT;
            out
        })
        .unwrap();
        let t = phi.transfer();
        let back = SuperOp::from_transfer(2, 3, &t).unwrap();
        assert_eq!(back.choi(), phi.choi());
        let a = sample_input(2);
        let via_t = ComplexMatrix::from_vec_col(3, 3, &t.mul_vec(&a.vec_col())).unwrap();
        assert!(via_t.max_abs_diff(&phi.apply(&a).unwrap()) < 1e-14);
    }

    const I_UNIT: C64 = C64::new(0.0, 1.0);

    #[test]
    fn adjoint_map_satisfies_duality() {
        let phi = SuperOp::from_fn(2, 3, |a| {
            ComplexMatrix::from_fn(3, 3, |p, q| a[(p % 2, (p + q) % 2)] * c(1.0, p as f64 - q as f64))
        })
        .unwrap();
        let adj = phi.adjoint_map();
        let a = sample_input(2);
        let b = sample_input(3);
        let lhs = b.hs_inner(&phi.apply(&a).unwrap());
        let rhs = adj.apply(&b).unwrap().hs_inner(&a);
        assert!((lhs - rhs).norm() < 1e-12);
        let direct = phi.apply_adjoint(&b).unwrap();
        assert!(direct.max_abs_diff(&adj.apply(&b).unwrap()) < 1e-13);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let phi = SuperOp::transpose_map(2);
        let psi = SuperOp::trace_times_unit(2, 3)
            .try_add(
                &SuperOp::from_fn(2, 3, |a| {
                    let mut out = ComplexMatrix::zeros(3, 3);
                    out[(0, 2)] = a[(0, 1)];
                    out
                })
                .unwrap(),
            )
            .unwrap();
        let both = compose(&psi, &phi).unwrap();
        let a = sample_input(2);
        let seq = psi.apply(&phi.apply(&a).unwrap()).unwrap();
        assert!(both.apply(&a).unwrap().max_abs_diff(&seq) < 1e-14);
        assert!(compose(&phi, &psi).is_err());
    }

    #[test]
    fn amplification_matches_view_and_blockwise_definition() {
        let t = SuperOp::transpose_map(2);
        let big = t.amplify(2, 64).unwrap();
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c((i * 4 + j) as f64, i as f64));
        let direct = big.apply(&x).unwrap();
        let view = LinearMap::apply(&t.amplified(2), &x);
        assert_eq!(direct, view);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(direct.block(a, b, 2, 2), x.block(a, b, 2, 2).transpose());
            }
        }
        assert_eq!(t.amplify(1, 64).unwrap(), t);
        assert!(matches!(t.amplify(40, 64), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn amplified_id_plus_trace_on_flip() {
        let phi = SuperOp::identity(2).try_add(&SuperOp::trace_times_unit(2, 2)).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let mut flip = ComplexMatrix::zeros(4, 4);
        flip.set_block(0, 1, &i2);
        flip.set_block(1, 0, &i2);
        let out = phi.amplify(2, 64).unwrap().apply(&flip).unwrap();
        assert!(out.max_abs_diff(&flip.scale_real(3.0)) < 1e-15);
    }

    #[test]
    fn cp_preserved_under_amplification() {
        let phi = SuperOp::identity(2).try_add(&SuperOp::trace_times_unit(2, 2)).unwrap();
        assert!(phi.flags().cp);
        assert!(phi.amplify(2, 64).unwrap().flags().cp);
    }

    #[test]
    fn inverse_of_scaled_identity() {
        let phi = SuperOp::identity(2).scale(c(2.0, 0.0));
        let inv = phi.inverse().unwrap();
        assert!(inv.distance(&SuperOp::identity(2).scale(c(0.5, 0.0))).unwrap() < 1e-15);
        assert!(matches!(
            SuperOp::trace_times_unit(2, 2).inverse(),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn bases_are_orthonormal() {
        for n in 1..5 {
            let h = hermitian_basis(n);
            let t = traceless_hermitian_basis(n);
            assert_eq!(h.len(), n * n);
            assert_eq!(t.len(), n * n - 1);
            for set in [&h, &t] {
                for (a, x) in set.iter().enumerate() {
                    assert!(x.is_hermitian(0.0));
                    for (b, y) in set.iter().enumerate() {
                        let ip = x.hs_inner(y).re;
                        let expected = if a == b { 1.0 } else { 0.0 };
                        assert!((ip - expected).abs() < 1e-14);
                    }
                }
            }
            for x in &t {
                assert!(x.trace().norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SuperOp::from_choi(2, 2, ComplexMatrix::identity(3)).is_err());
        let k = ComplexMatrix::identity(3);
        assert!(SuperOp::from_kraus(2, 2, &[k], &[]).is_err());
        let id = SuperOp::identity(2);
        assert!(matches!(
            id.apply(&ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
