//! Hermitian eigensolver (cyclic complex Jacobi) and what can be built on it:
//! operator norms, singular value decompositions, polar factors and
//! functional calculus of Hermitian matrices.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::matrix::{inner, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::Tolerances;

const MAX_SWEEPS: usize = 100;
const OFF_THRESHOLD: f64 = 1e-12;

/// Eigenvalues in ascending order and orthonormal eigenvectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }

    /// `sum_i f(lambda_i) v_i v_i*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix, validated against the default
/// tolerances.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(a, &Tolerances::default())
}

pub fn hermitian_eig_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    a.ensure_square()?;
    let defect = a.hermitian_defect();
    if defect > tol.scaled_atol(a.max_abs()) {
        return Err(Error::NonHermitian { defect });
    }
    Ok(eigh(a))
}

/// Unchecked eigendecomposition; the input is symmetrized as
/// `(A + A*) / 2` first. Panics on non-square input.
pub fn eigh(a: &ComplexMatrix) -> EigenDecomposition {
    let n = a.rows();
    assert!(a.is_square(), "eigh needs a square matrix");
    let mut work = symmetrized(a);
    let mut v = ComplexMatrix::identity(n);
    jacobi(&mut work, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[i * n + i].re.total_cmp(&work[j * n + j].re));
    let values = order.iter().map(|&i| work[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    EigenDecomposition { values, vectors }
}

/// Ascending eigenvalues of the Hermitian part of `a`, without vectors.
pub fn eigvalsh(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    assert!(a.is_square(), "eigvalsh needs a square matrix");
    match n {
        1 => vec![a[(0, 0)].re],
        2 => {
            let p = a[(0, 0)].re;
            let q = a[(1, 1)].re;
            let b = (a[(0, 1)] + a[(1, 0)].conj()) * 0.5;
            let mid = 0.5 * (p + q);
            let rad = (0.5 * (p - q)).hypot(b.norm());
            vec![mid - rad, mid + rad]
        }
        _ => {
            let mut work = symmetrized(a);
            jacobi(&mut work, n, None);
            let mut vals: Vec<f64> = (0..n).map(|i| work[i * n + i].re).collect();
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}

/// `(lambda_min, lambda_max)` of the Hermitian part of `a`.
pub fn extreme_eigenvalues(a: &ComplexMatrix) -> (f64, f64) {
    let v = eigvalsh(a);
    (v[0], v[v.len() - 1])
}

fn symmetrized(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.rows();
    let mut w = vec![ZERO; n * n];
    for i in 0..n {
        w[i * n + i] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let x = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            w[i * n + j] = x;
            w[j * n + i] = x.conj();
        }
    }
    w
}

/// Cyclic Jacobi on a row-major Hermitian buffer. On return the diagonal
/// holds the eigenvalues and `v`, if given, has been multiplied on the right
/// by the accumulated rotations.
fn jacobi(a: &mut [C64], n: usize, mut v: Option<&mut ComplexMatrix>) {
    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 || n < 2 {
        return;
    }
    let threshold = OFF_THRESHOLD * fro;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE || r < 1e-18 * fro {
                    continue;
                }
                let phase = apq / r;
                let theta = (a[q * n + q].re - a[p * n + p].re) / (2.0 * r);
                let t = if theta >= 0.0 { 1.0 } else { -1.0 } / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let e = phase.conj();
                // J restricted to (p, q): [[c, s], [-s e, c e]]
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = e * -s;
                let jqq = e * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * jpp + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }
}

/// Largest singular value, `sqrt(lambda_max(A* A))`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    let g = if a.rows() < a.cols() {
        a * &a.dagger()
    } else {
        &a.dagger() * a
    };
    extreme_eigenvalues(&g).1.max(0.0).sqrt()
}

/// Compact singular value decomposition `A = sum_i s_i u_i v_i*` over the
/// numerically nonzero singular values, in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub s: Vec<f64>,
    pub u: Vec<Vec<C64>>,
    pub v: Vec<Vec<C64>>,
}

/// Singular value decomposition through the Hermitian dilation
/// `[[0, A], [A*, 0]]`, whose eigenvalues are `+-s_i`. This keeps small
/// singular values accurate, unlike the eigenvalues of `A* A`.
pub fn svd(a: &ComplexMatrix) -> Svd {
    let (p, q) = a.shape();
    let mut dil = ComplexMatrix::zeros(p + q, p + q);
    for i in 0..p {
        for j in 0..q {
            dil[(i, p + j)] = a[(i, j)];
            dil[(p + j, i)] = a[(i, j)].conj();
        }
    }
    let ed = eigh(&dil);
    let smax = ed.max().max(0.0);
    let cutoff = smax * 1e-13;
    let mut out = Svd {
        s: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
    };
    for k in (0..p + q).rev() {
        let s = ed.values[k];
        if s <= cutoff || s <= 0.0 {
            break;
        }
        let col = ed.vector(k);
        let mut u: Vec<C64> = col[..p].to_vec();
        let mut v: Vec<C64> = col[p..].to_vec();
        let (nu, nv) = (vec_norm(&u), vec_norm(&v));
        if nu == 0.0 || nv == 0.0 {
            continue;
        }
        u.iter_mut().for_each(|z| *z /= nu);
        v.iter_mut().for_each(|z| *z /= nv);
        out.s.push(s);
        out.u.push(u);
        out.v.push(v);
    }
    out
}

/// Top singular triple `(s, u, v)` with `A v = s u`. For the zero matrix the
/// first basis vectors are returned with `s = 0`.
pub fn top_singular(a: &ComplexMatrix) -> (f64, Vec<C64>, Vec<C64>) {
    let d = svd(a);
    if d.s.is_empty() {
        let mut u = vec![ZERO; a.rows()];
        let mut v = vec![ZERO; a.cols()];
        u[0] = ONE;
        v[0] = ONE;
        return (0.0, u, v);
    }
    (d.s[0], d.u[0].clone(), d.v[0].clone())
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    svd(a).s.iter().sum()
}

/// Unitary polar factor `W` of a square matrix, `A = W |A|`, completed on
/// the kernel by an arbitrary isometric pairing.
pub fn polar_unitary(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    assert!(a.is_square(), "polar factor needs a square matrix");
    let d = svd(a);
    let us = complete_basis(&d.u, n);
    let vs = complete_basis(&d.v, n);
    let mut w = ComplexMatrix::zeros(n, n);
    for (u, v) in us.iter().zip(&vs) {
        for i in 0..n {
            for j in 0..n {
                w[(i, j)] += u[i] * v[j].conj();
            }
        }
    }
    w
}

/// Extends an orthonormal family in `C^n` to an orthonormal basis by
/// Gram-Schmidt over the standard basis.
pub fn complete_basis(family: &[Vec<C64>], n: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = family.to_vec();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut x = vec![ZERO; n];
        x[e] = ONE;
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &x);
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= c * bi);
            }
        }
        let nx = vec_norm(&x);
        if nx > 1e-8 {
            x.iter_mut().for_each(|z| *z /= nx);
            basis.push(x);
        }
    }
    basis
}

/// `(A* A)^(1/2)`.
pub fn abs_right(a: &ComplexMatrix) -> ComplexMatrix {
    if a.is_hermitian(0.0) {
        return eigh(a).reconstruct_with(f64::abs);
    }
    let q = a.cols();
    let d = svd(a);
    let mut out = ComplexMatrix::zeros(q, q);
    for (s, v) in d.s.iter().zip(&d.v) {
        for i in 0..q {
            let vi = v[i] * *s;
            for j in 0..q {
                out[(i, j)] += vi * v[j].conj();
            }
        }
    }
    out
}

/// Square root of the positive part of a Hermitian matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> ComplexMatrix {
    eigh(a).reconstruct_with(|x| x.max(0.0).sqrt())
}

/// `true` when the Hermitian matrix has `lambda_min >= -atol * max(1, |A|)`.
pub fn is_psd(a: &ComplexMatrix, atol: f64) -> bool {
    let (lo, hi) = extreme_eigenvalues(a);
    lo >= -atol * hi.abs().max(lo.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn residual(a: &ComplexMatrix, ed: &EigenDecomposition) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &l) in ed.values.iter().enumerate() {
            let v = ed.vector(k);
            let av = a.mul_vec(&v);
            let r: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y * l).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        worst
    }

    #[test]
    fn diagonal_values_sorted() {
        let ed = hermitian_eig(&ComplexMatrix::diag_real(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(ed.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let ed = hermitian_eig(&x).unwrap();
        assert!((ed.values[0] + 1.0).abs() < 1e-15);
        assert!((ed.values[1] - 1.0).abs() < 1e-15);
        assert!(residual(&x, &ed) < 1e-14);
    }

    #[test]
    fn complex_hermitian_residual() {
        let a = ComplexMatrix::from_rows(&[
            &[c(2.0, 0.0), c(1.0, 1.0), c(0.0, -0.5)],
            &[c(1.0, -1.0), c(-1.0, 0.0), c(0.25, 0.0)],
            &[c(0.0, 0.5), c(0.25, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let ed = hermitian_eig(&a).unwrap();
        assert!(residual(&a, &ed) < 1e-12);
        let vv = &ed.vectors.dagger() * &ed.vectors;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        let tr: f64 = ed.values.iter().sum();
        assert!((tr - a.trace().re).abs() < 1e-12);
        assert_eq!(eigvalsh(&a).len(), 3);
        for (x, y) in eigvalsh(&a).iter().zip(&ed.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::unit(2, 0, 1);
        assert!(matches!(hermitian_eig(&a), Err(Error::NonHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&r), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn operator_norm_of_units() {
        assert!((operator_norm(&ComplexMatrix::unit(2, 0, 1)) - 1.0).abs() < 1e-15);
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        assert!((operator_norm(&a) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn svd_reconstructs_and_polar_is_unitary() {
        let a = ComplexMatrix::from_rows(&[
            &[c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0)],
            &[c(0.5, 0.0), c(-1.0, 1.0), c(0.0, 0.0)],
            &[c(1.5, 2.0), c(-1.0, 2.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let d = svd(&a);
        let mut back = ComplexMatrix::zeros(3, 3);
        for k in 0..d.s.len() {
            back += &ComplexMatrix::outer(&d.u[k], &d.v[k]).scale_real(d.s[k]);
        }
        assert!(back.max_abs_diff(&a) < 1e-12);
        assert!((d.s[0] - operator_norm(&a)).abs() < 1e-12);
        let w = polar_unitary(&a);
        assert!((&w.dagger() * &w).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        let abs = abs_right(&a);
        assert!((&w * &abs).max_abs_diff(&a) < 1e-12);
        assert!((trace_norm(&a) - abs.trace().re).abs() < 1e-12);
    }

    #[test]
    fn sqrt_of_psd() {
        let a = ComplexMatrix::from_rows(&[&[c(2.0, 0.0), c(0.0, 1.0)], &[c(0.0, -1.0), c(2.0, 0.0)]]).unwrap();
        let r = psd_sqrt(&a);
        assert!((&r * &r).max_abs_diff(&a) < 1e-13);
        assert!(is_psd(&a, 1e-10));
        assert!(!is_psd(&a.scale_real(-1.0), 1e-10));
    }
}
