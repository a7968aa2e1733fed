//! Local ascent over a [`LinearMap`]. Each routine is monotone: it only
//! moves to arguments with a larger ratio and returns the best one seen.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;
use rand::Rng;

use crate::eig::{eigh, operator_norm, polar_unitary, top_singular};
use crate::matrix::{ComplexMatrix, C64};
use crate::numrange::{fast_diameter, numerical_diameter, DEFAULT_REFINE_ITERS};
use crate::superop::random::{complex_gaussian, ginibre, random_isometry};
use crate::superop::LinearMap;

/// Relative gain below which an ascent step counts as stalled.
const STALL: f64 = 1e-13;
const LINE_SEARCH_STEPS: usize = 40;

#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub value: f64,
    pub arg: ComplexMatrix,
}

impl Found {
    /// Keeps `self` unless `other` is better by more than rounding noise, so
    /// earlier candidates win ties.
    pub fn merge(&mut self, other: Found) {
        let margin = if self.value.is_finite() {
            1e-12 * self.value.abs()
        } else {
            0.0
        };
        if other.value > self.value + margin {
            *self = other;
        }
    }
}

pub(crate) fn norm_ratio<M: LinearMap + ?Sized>(map: &M, a: &ComplexMatrix) -> f64 {
    let den = operator_norm(a);
    if den == 0.0 {
        return 0.0;
    }
    operator_norm(&map.apply(a)) / den
}

pub(crate) fn diam_ratio<M: LinearMap + ?Sized>(map: &M, e: &ComplexMatrix, grid: usize) -> f64 {
    let den = fast_diameter(e, grid);
    if den <= 1e-12 * e.max_abs() || den == 0.0 {
        return 0.0;
    }
    fast_diameter(&map.apply(e), grid) / den
}

/// Alternating ascent for `||Phi(A)||` over unitaries: with `(x, y)` the top
/// singular pair of `Phi(A)`, the next iterate is the polar factor of
/// `Phi*(x y*)`, which maximizes `Re <Phi*(x y*), A>`.
pub(crate) fn norm_ascent<M: LinearMap + ?Sized>(map: &M, start: ComplexMatrix, iters: usize) -> Found {
    let mut best = Found {
        value: norm_ratio(map, &start),
        arg: start,
    };
    for _ in 0..iters {
        let (s, x, y) = top_singular(&map.apply(&best.arg));
        if s == 0.0 {
            break;
        }
        let next = polar_unitary(&map.apply_adjoint(&ComplexMatrix::outer(&x, &y)));
        let value = norm_ratio(map, &next);
        if value <= best.value * (1.0 + STALL) {
            break;
        }
        best = Found { value, arg: next };
    }
    best
}

/// Alternating ascent for `diam(Phi(P))` over nontrivial projections, which
/// attain the self-adjoint diameter seminorm. With `theta, v, w` the
/// diameter direction and extreme vectors of `Phi(P)`, the linear minorant
/// `Re(e^{i theta} tr(Phi(P') (vv* - ww*)))` is maximized by the positive
/// spectral projection of `Re(e^{-i theta} Phi*(vv* - ww*))`.
pub(crate) fn projector_ascent<M: LinearMap + ?Sized>(
    map: &M,
    start: ComplexMatrix,
    iters: usize,
    grid: usize,
) -> Found {
    let d = start.rows();
    let mut best = Found {
        value: diam_ratio(map, &start, grid),
        arg: start,
    };
    for _ in 0..iters {
        let f = map.apply(&best.arg);
        let Ok(dr) = numerical_diameter(&f, grid, DEFAULT_REFINE_ITERS) else {
            break;
        };
        if dr.value == 0.0 {
            break;
        }
        let (v, w) = &dr.witness_pair;
        let dir = &ComplexMatrix::outer(v, v) - &ComplexMatrix::outer(w, w);
        let h = map.apply_adjoint(&dir).rotated_re_part(-dr.theta_star);
        let ed = eigh(&h);
        let cut = 1e-12 * ed.values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let keep: Vec<usize> = (0..d).filter(|&k| ed.values[k] > cut).collect();
        if keep.is_empty() || keep.len() == d {
            break;
        }
        let next = projector(&keep.iter().map(|&k| ed.vector(k)).collect::<Vec<_>>(), d);
        let value = diam_ratio(map, &next, grid);
        if value <= best.value * (1.0 + STALL) {
            break;
        }
        best = Found { value, arg: next };
    }
    best
}

/// Ascent for `diam(Phi(E)) / diam(E)` over general `E`, along the
/// supergradient of the ratio with a backtracking step. Iterates are kept
/// traceless with unit diameter.
pub(crate) fn general_ascent<M: LinearMap + ?Sized>(map: &M, start: ComplexMatrix, iters: usize, grid: usize) -> Found {
    let Some(start) = normalize_diameter(&start, grid) else {
        return Found { value: 0.0, arg: start };
    };
    let mut best = Found {
        value: diam_ratio(map, &start, grid),
        arg: start,
    };
    let mut step = 0.25;
    for _ in 0..iters {
        let Some(dir) = ratio_direction(map, &best.arg, grid) else {
            break;
        };
        let mut moved = false;
        for _ in 0..LINE_SEARCH_STEPS {
            let cand = &best.arg + &dir.scale_real(step);
            if let Some(cand) = normalize_diameter(&cand, grid) {
                let value = diam_ratio(map, &cand, grid);
                if value > best.value * (1.0 + STALL) {
                    best = Found { value, arg: cand };
                    step *= 1.5;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    best
}

/// Unit Frobenius-norm ascent direction of the diameter ratio at `e`.
fn ratio_direction<M: LinearMap + ?Sized>(map: &M, e: &ComplexMatrix, grid: usize) -> Option<ComplexMatrix> {
    let num = numerical_diameter(&map.apply(e), grid, DEFAULT_REFINE_ITERS).ok()?;
    let den = numerical_diameter(e, grid, DEFAULT_REFINE_ITERS).ok()?;
    if den.value <= 0.0 {
        return None;
    }
    // d/dE of Re(e^{i theta} tr(X (vv* - ww*))) is e^{-i theta} (vv* - ww*)
    // in the real inner product Re tr(A* B).
    let grad = |theta: f64, pair: &(Vec<C64>, Vec<C64>)| {
        let (v, w) = pair;
        (&ComplexMatrix::outer(v, v) - &ComplexMatrix::outer(w, w)).scale(C64::from_polar(1.0, -theta))
    };
    let g_num = map.apply_adjoint(&grad(num.theta_star, &num.witness_pair));
    let g_den = grad(den.theta_star, &den.witness_pair);
    let ratio = num.value / den.value;
    let dir = (&g_num - &g_den.scale_real(ratio)).traceless_part();
    let norm = dir.frobenius_norm();
    (norm > 1e-14).then(|| dir.scale_real(1.0 / norm))
}

/// `(E - tr(E)/d I) / diam(E)`, or `None` for a (near) scalar matrix.
pub(crate) fn normalize_diameter(e: &ComplexMatrix, grid: usize) -> Option<ComplexMatrix> {
    let t = e.traceless_part();
    let dm = fast_diameter(&t, grid);
    (dm > 1e-12 * t.max_abs().max(1e-300) && dm > 0.0).then(|| t.scale_real(1.0 / dm))
}

/// Orthogonal projection onto the span of orthonormal vectors.
pub(crate) fn projector(vecs: &[Vec<C64>], d: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(d, d);
    for v in vecs {
        p += &ComplexMatrix::outer(v, v);
    }
    p
}

pub(crate) fn random_projector<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> ComplexMatrix {
    let v = random_isometry(rng, d, rank);
    &v * &v.dagger()
}

pub(crate) fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    random_isometry(rng, d, d)
}

pub(crate) fn random_general<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    // Mix in a random rank-one part so that non-normal starts are common.
    let g = ginibre(rng, d, d);
    let u: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let w: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    &g + &ComplexMatrix::outer(&u, &w).scale_real(2.0)
}
