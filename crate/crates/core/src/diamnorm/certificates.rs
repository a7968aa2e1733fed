//! Upper bounds with a named justification.
//!
//! Every bound here is exact arithmetic on the Choi matrix up to rounding;
//! none of them comes from a search.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;

use crate::diamnorm::{Certificate, Quantity};
use crate::eig::{abs_right, operator_norm, svd};
use crate::matrix::{ComplexMatrix, C64};
use crate::superop::{choi_kraus, SuperOp};
use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    pub certificate: Certificate,
}

impl UpperBound {
    pub const UNBOUNDED: UpperBound = UpperBound {
        value: f64::INFINITY,
        certificate: Certificate::Unbounded,
    };

    fn new(value: f64, certificate: Certificate) -> Self {
        UpperBound { value, certificate }
    }
}

/// Smallest bound, first one on ties.
fn tightest(cands: impl IntoIterator<Item = UpperBound>) -> UpperBound {
    cands.into_iter().fold(
        UpperBound::UNBOUNDED,
        |best, c| if c.value < best.value { c } else { best },
    )
}

/// `Phi = alpha J + phi(.) I` with `J` a unital Jordan *-homomorphism.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanAffine {
    pub alpha: C64,
    /// No functional part and `J` multiplicative, so every amplification has
    /// the same form.
    pub pure: bool,
}

/// `Phi = alpha P (.) Q + phi(.) I` with orthogonal projections `P Q = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CornerCompression {
    pub alpha: C64,
    pub pure: bool,
}

/// Structural facts about a map that yield closed-form diameter bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Structure {
    /// Every Choi block is a multiple of the identity: `Phi = phi(.) I`.
    pub scalar_functional: bool,
    pub jordan: Option<JordanAffine>,
    pub corner: Option<CornerCompression>,
}

fn tol_for(phi: &SuperOp) -> f64 {
    1e-9 * phi.choi().max_abs().max(1.0)
}

/// Choi matrix with the trace part `tr(Phi(E_ij))/m I` removed from every
/// block.
fn traceless_blocks(phi: &SuperOp) -> ComplexMatrix {
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let mut c0 = phi.choi().clone();
    for i in 0..n {
        for j in 0..n {
            let t = phi.block(i, j).trace() / m as f64;
            for p in 0..m {
                c0[(i * m + p, j * m + p)] -= t;
            }
        }
    }
    c0
}

pub fn structure(phi: &SuperOp) -> Structure {
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let tol = tol_for(phi);
    let scalar_functional = (0..n).all(|i| (0..n).all(|j| phi.block(i, j).is_scalar(tol)));
    if scalar_functional {
        return Structure {
            scalar_functional,
            jordan: None,
            corner: None,
        };
    }
    let c0 = traceless_blocks(phi);
    let functional_free = phi.choi().max_abs_diff(&c0) <= tol;
    let (jordan, corner) = if n == m && n >= 2 {
        (
            jordan_affine(phi.choi(), &c0, n, tol),
            corner_compression(&c0, n, tol, functional_free),
        )
    } else {
        (None, None)
    };
    Structure {
        scalar_functional,
        jordan,
        corner,
    }
}

fn jordan_affine(choi: &ComplexMatrix, c0: &ComplexMatrix, n: usize, tol: f64) -> Option<JordanAffine> {
    // For a Jordan *-automorphism or anti-automorphism J, the traceless
    // blocks of its Choi matrix C_J satisfy tr((C_J - I/n)^2) = n^2 - 1.
    let sq = (c0 * c0).trace() / (n * n - 1) as f64;
    let alpha0 = sq.sqrt();
    if alpha0.norm() <= tol {
        return None;
    }
    for alpha in [alpha0, -alpha0] {
        let j = c0.scale(alpha.inv()).shifted(C64::new(1.0 / n as f64, 0.0));
        let jtol = tol / alpha.norm().min(1.0);
        if let Some(multiplicative) = jordan_check(&j, n, jtol) {
            let exact = choi.max_abs_diff(&j.scale(alpha)) <= tol;
            return Some(JordanAffine {
                alpha,
                pure: exact && multiplicative,
            });
        }
    }
    None
}

/// Checks that the Choi matrix `j` is a unital Jordan *-homomorphism of
/// `M_n`; returns whether it is also multiplicative.
fn jordan_check(j: &ComplexMatrix, n: usize, tol: f64) -> Option<bool> {
    let blk = |a: usize, b: usize| j.block(a, b, n, n);
    let blocks: Vec<Vec<ComplexMatrix>> = (0..n).map(|a| (0..n).map(|b| blk(a, b)).collect()).collect();
    let mut unit = ComplexMatrix::zeros(n, n);
    for (a, row) in blocks.iter().enumerate() {
        unit += &row[a];
    }
    if unit.max_abs_diff(&ComplexMatrix::identity(n)) > tol {
        return None;
    }
    #[allow(clippy::needless_range_loop)]
    for a in 0..n {
        for b in 0..n {
            if blocks[a][b].max_abs_diff(&blocks[b][a].dagger()) > tol {
                return None;
            }
        }
    }
    let zero = ComplexMatrix::zeros(n, n);
    let mut multiplicative = true;
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let x = &blocks[i][jj];
                    let y = &blocks[k][l];
                    let xy = x * y;
                    let yx = y * x;
                    // J(E_ij E_kl) = delta_jk J(E_il)
                    let prod = if jj == k { &blocks[i][l] } else { &zero };
                    let rev = if l == i { &blocks[k][jj] } else { &zero };
                    if (&xy + &yx).max_abs_diff(&(prod + rev)) > tol {
                        return None;
                    }
                    if multiplicative && xy.max_abs_diff(prod) > tol {
                        multiplicative = false;
                    }
                }
            }
        }
    }
    Some(multiplicative)
}

fn corner_compression(c0: &ComplexMatrix, n: usize, tol: f64, functional_free: bool) -> Option<CornerCompression> {
    let d = svd(c0);
    if d.s.is_empty() || d.s.get(1).is_some_and(|s| *s > tol) {
        return None;
    }
    // c0 = s u w* is the Choi matrix of E -> A E B* with vec(A) = s u,
    // vec(B) = w.
    let a = ComplexMatrix::from_vec_col(n, n, &d.u[0]).ok()?.scale_real(d.s[0]);
    let b = ComplexMatrix::from_vec_col(n, n, &d.v[0]).ok()?;
    let (ca, p) = projection_factor(&a, tol)?;
    let (cb, q) = projection_factor(&b, tol)?;
    if (&p * &q).max_abs() > tol {
        return None;
    }
    Some(CornerCompression {
        alpha: ca * cb.conj(),
        pure: functional_free,
    })
}

/// Writes `a = c P` with `P` an orthogonal projection, if possible.
fn projection_factor(a: &ComplexMatrix, tol: f64) -> Option<(C64, ComplexMatrix)> {
    let g = &a.dagger() * a;
    let scale = operator_norm(&g);
    if scale <= tol * tol {
        return None;
    }
    let p = g.scale_real(1.0 / scale);
    if (&p * &p).max_abs_diff(&p) > tol {
        return None;
    }
    let c = a.trace() / p.trace();
    if a.max_abs_diff(&p.scale(c)) > tol * c.norm().max(1.0) {
        return None;
    }
    Some((c, p))
}

/// Sum of the diagonal Choi blocks, `Tr_in X`.
fn partial_trace_in(x: &ComplexMatrix, n: usize, m: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m, m);
    for i in 0..n {
        out += &x.block(i, i, m, m);
    }
    out
}

/// `sqrt(||Tr_in |C*||| ||Tr_in |C|||)`: the singular value decomposition
/// of the Choi matrix gives `Phi(X) = sum s_k A_k X B_k*`, and Haagerup's
/// factorization bound for that sum reduces to these partial traces. Valid
/// for the completely bounded norm.
pub fn haagerup_bound(phi: &SuperOp) -> f64 {
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let c = phi.choi();
    let left = partial_trace_in(&abs_right(&c.dagger()), n, m);
    let right = partial_trace_in(&abs_right(c), n, m);
    (operator_norm(&left) * operator_norm(&right)).sqrt()
}

/// Upper bound for `||Phi||`; every candidate also bounds `||Phi||_cb`.
pub fn op_norm_upper(phi: &SuperOp) -> UpperBound {
    let mut cands = Vec::new();
    if phi.flags().cp {
        cands.push(UpperBound::new(
            operator_norm(&phi.unit_image()),
            Certificate::CpUnitNorm,
        ));
    }
    cands.push(UpperBound::new(haagerup_bound(phi), Certificate::Haagerup));
    if let Ok(k) = choi_kraus(phi) {
        cands.push(UpperBound::new(k.norm_bound(), Certificate::KrausSum));
    }
    tightest(cands)
}

/// Upper bound for the level-one or completely bounded diameter
/// seminorms. Non-paraunital maps are unbounded.
pub fn diam_upper(phi: &SuperOp, quantity: Quantity, structure: &Structure) -> UpperBound {
    let flags = phi.flags();
    let Some(c) = flags.paraunital else {
        return UpperBound::new(f64::INFINITY, Certificate::NonParaunital);
    };
    let op = op_norm_upper(phi);
    let cb_level = quantity.is_cb();
    let self_adjoint = flags.self_adjoint;
    let mut diam = Vec::new();
    let mut sdiam = Vec::new();

    if structure.scalar_functional && !cb_level {
        return UpperBound::new(0.0, Certificate::ScalarFunctional);
    }
    if let Some(j) = structure.jordan.filter(|j| j.pure || !cb_level) {
        let cert = if j.pure {
            Certificate::JordanPure
        } else {
            Certificate::JordanAffine
        };
        diam.push(UpperBound::new(j.alpha.norm(), cert));
        sdiam.push(UpperBound::new(j.alpha.norm(), cert));
    }
    if let Some(k) = structure.corner.filter(|k| k.pure || !cb_level) {
        diam.push(UpperBound::new(k.alpha.norm(), Certificate::CornerCompression));
        sdiam.push(UpperBound::new(0.5 * k.alpha.norm(), Certificate::CornerCompression));
    }
    if flags.cp && c.re > 0.0 {
        diam.push(UpperBound::new(c.re, Certificate::CpParaunital));
        sdiam.push(UpperBound::new(c.re, Certificate::CpParaunital));
    }
    if cb_level {
        diam.push(UpperBound::new(2.0 * op.value, Certificate::CbSandwich));
        sdiam.push(UpperBound::new(op.value, Certificate::CbSandwich));
    } else {
        diam.push(UpperBound::new(2.0 * op.value, Certificate::TwiceOpNorm));
        sdiam.push(UpperBound::new(op.value, Certificate::SdiamLeOpNorm));
    }
    if self_adjoint {
        let both: Vec<UpperBound> = diam.iter().chain(&sdiam).copied().collect();
        return tightest(both);
    }
    match quantity {
        Quantity::Diam | Quantity::Cbdiam => tightest(diam),
        _ => tightest(sdiam),
    }
}

/// Whether `phi` is certified to be a section of a unital completely
/// positive map: it is invertible and its inverse is unital and CP.
pub fn is_cp_section(phi: &SuperOp) -> bool {
    if phi.dim_in() != phi.dim_out() {
        return false;
    }
    match phi.inverse() {
        Ok(inv) => inv.flags().unital && inv.flags().cp,
        Err(_) => false,
    }
}

/// Default tolerance for comparing bounds.
pub(crate) fn bound_tol(x: f64) -> f64 {
    1e3 * Tolerances::default().rtol * x.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superop::named_example;

    #[test]
    fn transpose_is_jordan_not_pure() {
        let s = structure(&SuperOp::transpose_map(3));
        let j = s.jordan.unwrap();
        assert!((j.alpha - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(!j.pure);
        assert!(s.corner.is_none());
    }

    #[test]
    fn identity_is_pure_jordan() {
        let j = structure(&SuperOp::identity(3)).jordan.unwrap();
        assert!(j.pure && (j.alpha.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn final_phi_has_alpha_n_squared() {
        let phi = named_example("final_phi", Some(3)).unwrap();
        let j = structure(&phi).jordan.unwrap();
        assert!((j.alpha.norm() - 9.0).abs() < 1e-9);
    }

    #[test]
    fn corner_structure() {
        for b in [1, 2] {
            let phi = named_example("corner", Some(b)).unwrap();
            let k = structure(&phi).corner.unwrap();
            assert!(k.pure && (k.alpha.norm() - 1.0).abs() < 1e-12);
            let up = diam_upper(&phi, Quantity::Cbsdiam, &structure(&phi));
            assert!((up.value - 0.5).abs() < 1e-12);
            assert_eq!(up.certificate, Certificate::CornerCompression);
        }
    }

    #[test]
    fn scalar_functional_detected() {
        let phi = named_example("trace_unit", Some(3)).unwrap();
        let s = structure(&phi);
        assert!(s.scalar_functional);
        assert_eq!(diam_upper(&phi, Quantity::Sdiam, &s).value, 0.0);
    }

    #[test]
    fn haagerup_is_tight_on_known_maps() {
        let cases = [
            (SuperOp::transpose_map(2), 2.0),
            (SuperOp::transpose_map(3), 3.0),
            (named_example("corner", None).unwrap(), 1.0),
            (named_example("diambound", None).unwrap(), 1.0),
            (named_example("final_phi", Some(2)).unwrap(), 6.5),
        ];
        for (phi, expected) in cases {
            let h = haagerup_bound(&phi);
            assert!((h - expected).abs() < 1e-9, "{h} vs {expected}");
        }
    }

    #[test]
    fn non_paraunital_is_unbounded() {
        let phi = named_example("counterexample", None).unwrap();
        let up = diam_upper(&phi, Quantity::Diam, &structure(&phi));
        assert!(up.value.is_infinite());
        assert_eq!(up.certificate, Certificate::NonParaunital);
    }

    #[test]
    fn final_phi_is_a_cp_section() {
        assert!(is_cp_section(&named_example("final_phi", Some(2)).unwrap()));
        assert!(!is_cp_section(&SuperOp::transpose_map(2)));
    }
}
