//! Dense complex matrices.
//!
//! Storage is row-major. Operator impls on references panic on shape
//! mismatch; the `try_*` methods report [`Error::DimensionMismatch`] instead.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape(alloc::format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidShape(alloc::format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major real entries.
    pub fn from_real(rows: usize, cols: usize, re: &[f64]) -> Result<Self> {
        Self::new(rows, cols, re.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidShape("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flat_map(|row| row.iter().copied()).collect())
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// The matrix unit `E_ij` in `M_n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    /// `u v*`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn ensure_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.shape() == (rows, cols) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: (rows, cols),
                found: self.shape(),
            })
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    /// `(A + A*) / 2`.
    pub fn re_part(&self) -> Result<Self> {
        self.ensure_square()?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        }))
    }

    /// `(A - A*) / 2i`.
    pub fn im_part(&self) -> Result<Self> {
        self.ensure_square()?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] - self[(j, i)].conj()) * C64::new(0.0, -0.5)
        }))
    }

    /// `Re(e^{i theta} A)`, the Hermitian part of a rotated copy.
    pub fn rotated_re_part(&self, theta: f64) -> Self {
        let c = C64::from_polar(1.0, theta);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (c * self[(i, j)] + (c * self[(j, i)]).conj()) * 0.5
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |A - B|` entrywise. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `max |A - A*|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn is_hermitian(&self, atol: f64) -> bool {
        self.hermitian_defect() <= atol
    }

    /// Hilbert-Schmidt inner product `tr(A* B)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        other.ensure_shape(self.rows, self.cols)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        other.ensure_shape(self.rows, self.cols)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        Ok(self * other)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v, A v>` for a vector `v`, i.e. `v* A v`.
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        inner(v, &self.mul_vec(v))
    }

    /// Kronecker product `A (x) B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Copy of the `(bi, bj)` block of size `br x bc`.
    pub fn block(&self, bi: usize, bj: usize, br: usize, bc: usize) -> Self {
        Self::from_fn(br, bc, |i, j| self[(bi * br + i, bj * bc + j)])
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, b: &Self) {
        let (br, bc) = b.shape();
        for i in 0..br {
            for j in 0..bc {
                self[(bi * br + i, bj * bc + j)] = b[(i, j)];
            }
        }
    }

    /// Block-diagonal `A (+) B`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    /// Column-stacking vectorization: `vec(A)[i + j * rows] = A[i][j]`.
    pub fn vec_col(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`vec_col`](Self::vec_col).
    pub fn from_vec_col(rows: usize, cols: usize, v: &[C64]) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::InvalidShape(alloc::format!(
                "cannot reshape {} entries into {rows}x{cols}",
                v.len()
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| v[i + j * rows]))
    }

    /// `A - (tr A / n) I`.
    pub fn traceless_part(&self) -> Self {
        let n = self.rows;
        let c = self.trace() / n as f64;
        let mut m = self.clone();
        for i in 0..n {
            m[(i, i)] -= c;
        }
        m
    }

    /// `A + c I`.
    pub fn shifted(&self, c: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += c;
        }
        m
    }

    /// `true` when `A` equals a multiple of the identity within `atol`.
    pub fn is_scalar(&self, atol: f64) -> bool {
        self.is_square() && self.traceless_part().max_abs() <= atol
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        let n = self.ensure_square()?;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, a[(i, k)].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        Ok(Lu { a, perm, sign })
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = ZERO);
            e[j] = ONE;
            let x = lu.solve(&e);
            inv.set_column(j, &x);
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Result<C64> {
        match self.lu() {
            Ok(lu) => Ok(lu.determinant()),
            Err(Error::Singular) => Ok(ZERO),
            Err(e) => Err(e),
        }
    }
}

/// Packed LU factors `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    a: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.a.rows;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let t = self.a[(i, k)] * x[k];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = self.a[(i, k)] * x[k];
                x[i] -= t;
            }
            x[i] /= self.a[(i, i)];
        }
        x
    }

    pub fn determinant(&self) -> C64 {
        (0..self.a.rows).map(|i| self.a[(i, i)]).product::<C64>() * self.sign
    }

    /// Ratio of the smallest to the largest pivot modulus; a cheap
    /// conditioning indicator.
    pub fn pivot_ratio(&self) -> f64 {
        let mags = (0..self.a.rows).map(|i| self.a[(i, i)].norm());
        let (lo, hi) = mags.fold((f64::INFINITY, 0.0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }
}

/// Applies `f` to every `block x block` sub-block of a square block matrix
/// and reassembles the outputs, which must all share one shape.
pub fn block_apply(
    x: &ComplexMatrix,
    block: usize,
    mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix,
) -> Result<ComplexMatrix> {
    if block == 0 || x.rows() % block != 0 || x.cols() % block != 0 {
        return Err(Error::DimensionMismatch {
            expected: (block, block),
            found: x.shape(),
        });
    }
    let (kr, kc) = (x.rows() / block, x.cols() / block);
    let mut out: Option<ComplexMatrix> = None;
    for a in 0..kr {
        for b in 0..kc {
            let y = f(&x.block(a, b, block, block));
            let o = out.get_or_insert_with(|| ComplexMatrix::zeros(kr * y.rows(), kc * y.cols()));
            if o.rows() != kr * y.rows() || o.cols() != kc * y.cols() {
                return Err(Error::DimensionMismatch {
                    expected: (o.rows() / kr, o.cols() / kc),
                    found: y.shape(),
                });
            }
            o.set_block(a, b, &y);
        }
    }
    Ok(out.expect("at least one block"))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn re_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.re_part()
}

pub fn im_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.im_part()
}

/// `<u, v> = sum conj(u_i) v_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalizes in place; returns the original norm.
pub fn normalize(v: &mut [C64]) -> f64 {
    let n = vec_norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// Standard basis vector `e_i` in `C^n`.
pub fn basis_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = ComplexMatrix::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[l * m..(l + 1) * m];
                let dst = &mut out.data[i * m..(i + 1) * m];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn re_part_of_nilpotent_unit() {
        let e12 = ComplexMatrix::unit(2, 0, 1);
        let r = e12.re_part().unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn im_part_of_hermitian_is_zero() {
        let a = ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(2.0, -1.0)], &[c(2.0, 1.0), c(-3.0, 0.0)]]).unwrap();
        assert!(a.im_part().unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn re_and_im_reconstruct() {
        let a = ComplexMatrix::from_rows(&[&[c(1.0, 2.0), c(0.5, -1.0)], &[c(3.0, 0.25), c(-1.0, 4.0)]]).unwrap();
        let back = &a.re_part().unwrap() + &a.im_part().unwrap().scale(I);
        assert!(back.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn vec_col_round_trip() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64));
        let v = a.vec_col();
        assert_eq!(v[1], a[(1, 0)]);
        assert_eq!(v[2], a[(0, 1)]);
        assert_eq!(ComplexMatrix::from_vec_col(2, 3, &v).unwrap(), a);
    }

    #[test]
    fn shape_validation() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.re_part(), Err(Error::NonSquare { .. })));
        assert!(matches!(a.try_mul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = ComplexMatrix::from_rows(&[&[c(2.0, 1.0), c(1.0, 0.0)], &[c(0.0, -1.0), c(3.0, 0.0)]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        let det = a.determinant().unwrap();
        assert!((det - (c(2.0, 1.0) * c(3.0, 0.0) - c(0.0, -1.0))).norm() < 1e-14);
        let singular = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn block_apply_transposes_blocks() {
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c((4 * i + j) as f64, 0.0));
        let y = block_apply(&x, 2, |b| b.transpose()).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(y.block(a, b, 2, 2), x.block(a, b, 2, 2).transpose());
            }
        }
        assert!(block_apply(&x, 3, |b| b.clone()).is_err());
    }
}
