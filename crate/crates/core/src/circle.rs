//! Smallest enclosing circle of a finite planar point set.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: C64, slack: f64) -> bool {
        (p - self.center).norm() <= self.radius + slack
    }
}

const SHUFFLE_SEED: u64 = 0x5eed_c1c1e;

/// Minimum enclosing circle by Welzl's randomized incremental algorithm,
/// in its iterative form. The insertion order is a fixed pseudo-random
/// permutation, so the output is deterministic.
pub fn min_enclosing_circle(points: &[C64]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<C64> = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p.norm())).max(1.0);
    let slack = 1e-12 * scale;

    let mut c = Circle {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if c.contains(pts[i], slack) {
            continue;
        }
        c = Circle {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(pts[j], slack) {
                continue;
            }
            c = diametral(pts[i], pts[j]);
            for k in 0..j {
                if c.contains(pts[k], slack) {
                    continue;
                }
                c = circumcircle(pts[i], pts[j], pts[k]).unwrap_or_else(|| widest_pair(pts[i], pts[j], pts[k]));
            }
        }
    }
    Ok(c)
}

fn diametral(a: C64, b: C64) -> Circle {
    let center = (a + b) * 0.5;
    Circle {
        center,
        radius: (a - center).norm().max((b - center).norm()),
    }
}

/// Circumcircle, or `None` for (nearly) collinear points.
fn circumcircle(a: C64, b: C64, c: C64) -> Option<Circle> {
    let b = b - a;
    let c = c - a;
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    let scale = b.norm_sqr().max(c.norm_sqr());
    if d.abs() <= 1e-14 * scale {
        return None;
    }
    let (nb, nc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * nb - b.im * nc) / d;
    let uy = (b.re * nc - c.re * nb) / d;
    let u = C64::new(ux, uy);
    let r = u.norm().max((u - b).norm()).max((u - c).norm());
    Some(Circle {
        center: u + a,
        radius: r,
    })
}

fn widest_pair(a: C64, b: C64, c: C64) -> Circle {
    let pairs = [(a, b), (a, c), (b, c)];
    let (p, q) = pairs.iter().copied().fold((a, b), |best, cur| {
        if (cur.0 - cur.1).norm() > (best.0 - best.1).norm() {
            cur
        } else {
            best
        }
    });
    diametral(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn single_point() {
        let z = C64::new(1.5, -2.0);
        let c = min_enclosing_circle(&[z]).unwrap();
        assert_eq!(c.center, z);
        assert_eq!(c.radius, 0.0);
    }

    #[test]
    fn segment() {
        let c = min_enclosing_circle(&[C64::new(0.0, 0.0), C64::new(2.0, 0.0)]).unwrap();
        assert!((c.center - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cube_roots_of_unity() {
        let pts: Vec<C64> = (0..3)
            .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0))
            .collect();
        let c = min_enclosing_circle(&pts).unwrap();
        assert!(c.center.norm() < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_longest_side() {
        let pts = [C64::new(-1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.1)];
        let c = min_enclosing_circle(&pts).unwrap();
        assert!(c.center.norm() < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_and_duplicates() {
        let pts = [
            C64::new(0.0, 0.0),
            C64::new(1.0, 1.0),
            C64::new(2.0, 2.0),
            C64::new(1.0, 1.0),
        ];
        let c = min_enclosing_circle(&pts).unwrap();
        assert!((c.center - C64::new(1.0, 1.0)).norm() < 1e-12);
        assert!((c.radius - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty() {
        assert_eq!(min_enclosing_circle(&[]), Err(Error::EmptyInput));
    }
}
