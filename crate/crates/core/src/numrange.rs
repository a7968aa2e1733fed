//! Numerical range geometry.
//!
//! Everything here goes through the support function
//! `h(theta) = lambda_max(Re(e^{i theta} E))`. The width of `W(E)` in
//! direction `theta` is `h(theta) + h(theta + pi)`, which is the spectral
//! diameter of the Hermitian matrix `Re(e^{i theta} E)`; the numerical
//! diameter is the largest width.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;

use crate::circle::{min_enclosing_circle, Circle};
use crate::eig::{eigh, eigvalsh, extreme_eigenvalues, operator_norm};
use crate::error::{Error, Result};
use crate::matrix::{basis_vector, ComplexMatrix, C64};
use crate::Tolerances;

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const REFINE_INTERVAL: f64 = 1e-10;

/// Default number of angles on `[0, pi)` for diameter sweeps.
pub const DEFAULT_GRID: usize = 256;
/// Default cap on golden-section iterations.
pub const DEFAULT_REFINE_ITERS: usize = 64;

/// A sweep of the support function and the boundary points that attain it.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeSample {
    pub thetas: Vec<f64>,
    pub support: Vec<f64>,
    pub boundary: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterResult {
    pub value: f64,
    pub theta_star: f64,
    pub witness_pair: (Vec<C64>, Vec<C64>),
}

impl DiameterResult {
    /// `|<Ev,v> - <Ew,w>|` for the stored witness pair.
    pub fn witness_gap(&self, e: &ComplexMatrix) -> f64 {
        let (v, w) = &self.witness_pair;
        (e.quadratic_form(v) - e.quadratic_form(w)).norm()
    }
}

/// `lambda_max(Re(e^{i theta} E))`.
pub fn support_function(e: &ComplexMatrix, theta: f64) -> Result<f64> {
    e.ensure_square()?;
    Ok(extreme_eigenvalues(&e.rotated_re_part(theta)).1)
}

/// Support value together with the boundary point `<Ev,v>` of a top
/// eigenvector `v` of `Re(e^{i theta} E)`.
pub fn support_point(e: &ComplexMatrix, theta: f64) -> Result<(f64, C64)> {
    e.ensure_square()?;
    let ed = eigh(&e.rotated_re_part(theta));
    let n = e.rows();
    let v = ed.vector(n - 1);
    Ok((ed.max(), e.quadratic_form(&v)))
}

/// Samples the support function and boundary of `W(E)` at `count` equally
/// spaced angles in `[0, 2 pi)`.
pub fn sample_range(e: &ComplexMatrix, count: usize) -> Result<RangeSample> {
    e.ensure_square()?;
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be positive"));
    }
    let mut out = RangeSample {
        thetas: Vec::with_capacity(count),
        support: Vec::with_capacity(count),
        boundary: Vec::with_capacity(count),
    };
    for k in 0..count {
        let theta = 2.0 * PI * k as f64 / count as f64;
        let (h, b) = support_point(e, theta)?;
        out.thetas.push(theta);
        out.support.push(h);
        out.boundary.push(b);
    }
    Ok(out)
}

/// Width of `W(E)` in direction `theta`.
pub fn width(e: &ComplexMatrix, theta: f64) -> f64 {
    let (lo, hi) = extreme_eigenvalues(&e.rotated_re_part(theta));
    hi - lo
}

/// Maximizes `f` over a periodic grid of `grid` points on `[0, period)` and
/// refines the best cell by golden-section search. Returns `(argmax, max)`;
/// ties go to the smallest grid angle.
fn maximize_periodic(f: impl Fn(f64) -> f64, period: f64, grid: usize, refine_iters: usize) -> (f64, f64) {
    let step = period / grid as f64;
    let (mut best_t, mut best_v) = (0.0, f(0.0));
    for k in 1..grid {
        let t = step * k as f64;
        let v = f(t);
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    let (mut a, mut b) = (best_t - step, best_t + step);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iters = 0;
    while b - a > REFINE_INTERVAL && iters < refine_iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
        iters += 1;
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    (best_t - period * (best_t / period).floor(), best_v)
}

/// Numerical diameter `max_theta [lambda_max - lambda_min](Re(e^{i theta} E))`.
///
/// Hermitian input takes the `theta = 0` branch directly. The witness pair
/// consists of extreme eigenvectors of `Re(e^{i theta*} E)`.
pub fn numerical_diameter(e: &ComplexMatrix, grid: usize, refine_iters: usize) -> Result<DiameterResult> {
    let n = e.ensure_square()?;
    if grid < 8 {
        return Err(Error::InvalidArgument("grid must be at least 8"));
    }
    let scale = e.max_abs();
    let atol = Tolerances::default().scaled_atol(scale);
    if e.is_scalar(atol) {
        let e1 = basis_vector(n, 0);
        return Ok(DiameterResult {
            value: 0.0,
            theta_star: 0.0,
            witness_pair: (e1.clone(), e1),
        });
    }
    let theta = if e.hermitian_defect() <= atol {
        0.0
    } else {
        maximize_periodic(|t| width(e, t), PI, grid, refine_iters).0
    };
    let ed = eigh(&e.rotated_re_part(theta));
    Ok(DiameterResult {
        value: ed.max() - ed.min(),
        theta_star: theta,
        witness_pair: (ed.vector(n - 1), ed.vector(0)),
    })
}

/// Numerical diameter value with the default grid.
pub fn diameter(e: &ComplexMatrix) -> Result<f64> {
    Ok(numerical_diameter(e, DEFAULT_GRID, DEFAULT_REFINE_ITERS)?.value)
}

/// Numerical diameter tuned for inner loops: Hermitian matrices use their
/// spectrum, 2x2 matrices the elliptical range formula, and everything else
/// the sweep with the given grid. Panics on non-square input.
pub fn fast_diameter(e: &ComplexMatrix, grid: usize) -> f64 {
    let n = e.rows();
    assert!(e.is_square(), "numerical diameter needs a square matrix");
    if n == 1 {
        return 0.0;
    }
    if e.hermitian_defect() <= 1e-14 * e.max_abs().max(1.0) {
        let (lo, hi) = extreme_eigenvalues(e);
        return hi - lo;
    }
    if n == 2 {
        return ellipse_major_axis(e);
    }
    maximize_periodic(|t| width(e, t), PI, grid.max(8), DEFAULT_REFINE_ITERS).1
}

/// `W(E)` of a 2x2 matrix is the ellipse with foci at the eigenvalues and
/// minor axis `sqrt(tr(E* E) - |l1|^2 - |l2|^2)`.
fn ellipse_major_axis(e: &ComplexMatrix) -> f64 {
    let (a, b, c, d) = (e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]);
    let half_gap = (((a - d) * 0.5).powi(2) + b * c).sqrt();
    let focal = 2.0 * half_gap.norm();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + half_gap, mid - half_gap);
    let frob = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let minor2 = (frob - l1.norm_sqr() - l2.norm_sqr()).max(0.0);
    (focal * focal + minor2).sqrt()
}

/// Numerical radius `max_theta h(theta)` over `[0, 2 pi)`.
pub fn numerical_radius(e: &ComplexMatrix) -> Result<f64> {
    numerical_radius_with(e, 2 * DEFAULT_GRID)
}

pub fn numerical_radius_with(e: &ComplexMatrix, grid: usize) -> Result<f64> {
    e.ensure_square()?;
    if grid < 8 {
        return Err(Error::InvalidArgument("grid must be at least 8"));
    }
    if e.hermitian_defect() <= Tolerances::default().scaled_atol(e.max_abs()) {
        let (lo, hi) = extreme_eigenvalues(e);
        return Ok(lo.abs().max(hi.abs()));
    }
    let h = |t: f64| extreme_eigenvalues(&e.rotated_re_part(t)).1;
    Ok(maximize_periodic(h, 2.0 * PI, grid, DEFAULT_REFINE_ITERS).1.max(0.0))
}

/// Eigenvalues of a normal matrix from the joint diagonalization of its
/// commuting real and imaginary parts.
pub fn normal_eigenvalues(e: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = e.ensure_square()?;
    let norm = operator_norm(e);
    let comm = &(e * &e.dagger()) - &(&e.dagger() * e);
    let defect = operator_norm(&comm);
    if defect > Tolerances::default().atol * (norm * norm).max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NotNormal { defect });
    }
    let re = e.re_part()?;
    let im = e.im_part()?;
    let ed = eigh(&re);
    let cluster_tol = 1e-8 * norm.max(1.0);
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && ed.values[end] - ed.values[end - 1] <= cluster_tol {
            end += 1;
        }
        let k = end - start;
        let lambda = ed.values[start..end].iter().sum::<f64>() / k as f64;
        let block = ComplexMatrix::from_fn(k, k, |i, j| {
            let vi = ed.vector(start + i);
            let vj = ed.vector(start + j);
            crate::matrix::inner(&vi, &im.mul_vec(&vj))
        });
        for mu in eigvalsh(&block) {
            out.push(C64::new(lambda, mu));
        }
        start = end;
    }
    Ok(out)
}

/// Diameter of the spectrum of a normal matrix.
pub fn spectral_diameter(e: &ComplexMatrix) -> Result<f64> {
    e.ensure_square()?;
    if e.hermitian_defect() <= Tolerances::default().scaled_atol(e.max_abs()) {
        let (lo, hi) = extreme_eigenvalues(e);
        return Ok(hi - lo);
    }
    let ev = normal_eigenvalues(e)?;
    let mut d: f64 = 0.0;
    for (i, a) in ev.iter().enumerate() {
        for b in &ev[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    Ok(d)
}

/// Centering constants of `E`: midpoints of the spectra of `Re E` and
/// `Im E`, and the center of the smallest disk containing the sampled
/// boundary of `W(E)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Centering {
    pub k_re: f64,
    pub k_im: f64,
    pub jung: Circle,
}

impl Centering {
    pub fn c_jung(&self) -> C64 {
        self.jung.center
    }

    pub fn k(&self) -> C64 {
        C64::new(self.k_re, self.k_im)
    }
}

/// Boundary samples used for the Jung center.
pub const JUNG_SAMPLES: usize = 720;

pub fn centering_constants(e: &ComplexMatrix) -> Result<Centering> {
    e.ensure_square()?;
    let (rlo, rhi) = extreme_eigenvalues(&e.re_part()?);
    let (ilo, ihi) = extreme_eigenvalues(&e.im_part()?);
    let sample = sample_range(e, JUNG_SAMPLES)?;
    Ok(Centering {
        k_re: 0.5 * (rlo + rhi),
        k_im: 0.5 * (ilo + ihi),
        jung: min_enclosing_circle(&sample.boundary)?,
    })
}
