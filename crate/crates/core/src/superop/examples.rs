//! Constructors for the concrete maps used throughout the crate's tests and
//! the replication suite.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eig::{eigvalsh, operator_norm};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE};
use crate::numrange::fast_diameter;
use crate::superop::random::complex_gaussian;
use crate::superop::{SuperOp, DEFAULT_MAX_DIM};

/// Identifiers accepted by [`named_example`].
pub const EXAMPLE_IDS: &[&str] = &[
    "diambound",
    "corner",
    "transpose",
    "paulsen",
    "choi_map",
    "counterexample",
    "final_psi",
    "final_phi",
    "id_plus_trace",
    "identity",
    "trace_unit",
    "neg_identity",
];

/// Identifiers accepted by [`named_system_map`].
pub const SYSTEM_MAP_IDS: &[&str] = &["paulsen", "trig"];

/// Builds a named map. `n` is the matrix size where the family has one
/// (default 2), or the block size for `corner` (default 1, acting on
/// `M_2(M_n)`). `diambound`, `paulsen` and `counterexample` have fixed size.
///
/// * `diambound`: `[[a,b],[c,d]] -> diag((a+b)/sqrt 2, (d-b)/sqrt 2)`
/// * `corner`: `[[A,B],[C,D]] -> [[0,B],[0,0]]`
/// * `transpose`: `A -> A^T`
/// * `paulsen`: the block transpose `[[aI,B],[C,dI]] -> [[aI,B^T],[C^T,dI]]`
///   precomposed with the trace-preserving projection of `M_4` onto its
///   domain `{[[aI,B],[C,dI]]}`
/// * `choi_map`: `A -> n tr(A) I - A`
/// * `counterexample`: `[[a,b],[c,d]] -> [[a-d,b],[c,a+d]]`
/// * `final_psi`: `A -> A^T/n^2 + (n^2-1)/n^3 tr(A) I`
/// * `final_phi`: `A -> n^2 A^T - (n^2-1)/n tr(A) I`, the inverse of `final_psi`
/// * `id_plus_trace`: `A -> A + tr(A) I`
/// * `identity`, `trace_unit` (`A -> tr(A)/n I`), `neg_identity`
pub fn named_example(id: &str, n: Option<usize>) -> Result<SuperOp> {
    let size = |default: usize| -> Result<usize> {
        let n = n.unwrap_or(default);
        if n == 0 {
            return Err(Error::InvalidArgument("example size must be positive"));
        }
        if n > DEFAULT_MAX_DIM {
            return Err(Error::ResourceLimit {
                requested: n,
                max: DEFAULT_MAX_DIM,
            });
        }
        Ok(n)
    };
    let r = |x: f64| C64::new(x, 0.0);
    match id {
        "diambound" => SuperOp::from_fn(2, 2, |e| {
            let (a, b, d) = (e[(0, 0)], e[(0, 1)], e[(1, 1)]);
            ComplexMatrix::diag(&[(a + b) * FRAC_1_SQRT_2, (d - b) * FRAC_1_SQRT_2])
        }),
        "corner" => {
            let b = size(1)?;
            if 2 * b > DEFAULT_MAX_DIM {
                return Err(Error::ResourceLimit {
                    requested: 2 * b,
                    max: DEFAULT_MAX_DIM,
                });
            }
            SuperOp::from_fn(2 * b, 2 * b, |e| {
                ComplexMatrix::from_fn(2 * b, 2 * b, |i, j| {
                    if i < b && j >= b {
                        e[(i, j)]
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
        }
        "transpose" => Ok(SuperOp::transpose_map(size(2)?)),
        "paulsen" => SuperOp::from_fn(4, 4, |e| paulsen_block_transpose(&paulsen_projection(e))),
        "choi_map" => {
            let n = size(2)?;
            SuperOp::from_fn(n, n, |e| &ComplexMatrix::scalar(n, e.trace() * n as f64) - e)
        }
        "counterexample" => SuperOp::from_fn(2, 2, |e| {
            let (a, b, c, d) = (e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]);
            ComplexMatrix::from_rows(&[&[a - d, b], &[c, a + d]]).expect("2x2")
        }),
        "final_psi" => {
            let n = size(2)?;
            let nf = n as f64;
            SuperOp::from_fn(n, n, |e| {
                let t = e.transpose().scale_real(1.0 / (nf * nf));
                t.shifted(e.trace() * ((nf * nf - 1.0) / (nf * nf * nf)))
            })
        }
        "final_phi" => {
            let n = size(2)?;
            let nf = n as f64;
            SuperOp::from_fn(n, n, |e| {
                let t = e.transpose().scale_real(nf * nf);
                t.shifted(e.trace() * (-(nf * nf - 1.0) / nf))
            })
        }
        "id_plus_trace" => {
            let n = size(2)?;
            Ok(SuperOp::identity(n).translate_by_trace(ONE))
        }
        "identity" => Ok(SuperOp::identity(size(2)?)),
        "trace_unit" => {
            let n = size(2)?;
            Ok(SuperOp::trace_times_unit(n, n).scale(r(1.0 / n as f64)))
        }
        "neg_identity" => Ok(SuperOp::identity(size(2)?).scale(r(-1.0))),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

/// Orthogonal projection of `M_4 = M_2(M_2)` onto
/// `{[[aI, B], [C, dI]]}`: diagonal blocks are replaced by their scalar
/// averages.
fn paulsen_projection(e: &ComplexMatrix) -> ComplexMatrix {
    let mut out = e.clone();
    for blk in 0..2 {
        let avg = e.block(blk, blk, 2, 2).trace() * 0.5;
        out.set_block(blk, blk, &ComplexMatrix::scalar(2, avg));
    }
    out
}

fn paulsen_block_transpose(e: &ComplexMatrix) -> ComplexMatrix {
    let mut out = e.clone();
    out.set_block(0, 1, &e.block(0, 1, 2, 2).transpose());
    out.set_block(1, 0, &e.block(1, 0, 2, 2).transpose());
    out
}

/// A linear map defined on an operator system `S`, given by a basis of `S`
/// inside an ambient matrix algebra and the images of that basis.
/// The first basis element is the unit of `S`. Both maps provided here send
/// adjoints to adjoints, which the sampling routines rely on.
#[derive(Clone, Debug)]
pub struct SystemMap {
    pub name: String,
    pub basis: Vec<ComplexMatrix>,
    pub images: Vec<ComplexMatrix>,
    /// Exact smallest spectral value of the real part of an element, from
    /// its coefficients, when the ambient representation is only a sampled
    /// model of `S`.
    pub real_part_min: Option<fn(&[C64]) -> f64>,
}

impl SystemMap {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum_i c_i b_i`.
    pub fn element(&self, coeffs: &[C64]) -> Result<ComplexMatrix> {
        combine(&self.basis, coeffs)
    }

    /// `Phi(sum_i c_i b_i) = sum_i c_i Phi(b_i)`.
    pub fn apply(&self, coeffs: &[C64]) -> Result<ComplexMatrix> {
        combine(&self.images, coeffs)
    }

    pub fn is_unital(&self) -> bool {
        let out = &self.images[0];
        out.max_abs_diff(&ComplexMatrix::identity(out.rows())) < 1e-12
    }

    /// Draws `probes` positive elements of `S` (random Hermitian elements
    /// shifted by their smallest eigenvalue) and checks that their images
    /// are positive semidefinite. One-sided.
    pub fn positive_sampled(&self, probes: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..probes {
            let coeffs: Vec<C64> = (0..self.dim()).map(|_| complex_gaussian(&mut rng)).collect();
            let lmin = match self.real_part_min {
                Some(f) => f(&coeffs),
                None => {
                    let x = self.element(&coeffs).expect("coefficient count");
                    eigvalsh(&x.re_part().expect("square"))[0]
                }
            };
            let image = self.apply(&coeffs).expect("coefficient count");
            let image_h = image.re_part().expect("square");
            let shifted = &image_h - &self.images[0].scale_real(lmin);
            let scale = shifted.max_abs().max(1.0);
            if eigvalsh(&shifted)[0] < -1e-10 * scale {
                return false;
            }
        }
        true
    }

    /// Largest `||Phi(x)|| / ||x||` over the basis and `probes` random
    /// elements: a lower bound for `||Phi||`.
    pub fn norm_lower(&self, probes: usize, seed: u64) -> f64 {
        self.sampled_ratio(probes, seed, operator_norm)
    }

    /// Largest `diam Phi(x) / diam x` over the basis and random elements: a
    /// lower bound for the induced numerical diameter.
    pub fn diam_ratio_lower(&self, probes: usize, seed: u64) -> f64 {
        self.sampled_ratio(probes, seed, |m| fast_diameter(m, 256))
    }

    fn sampled_ratio(&self, probes: usize, seed: u64, f: impl Fn(&ComplexMatrix) -> f64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.dim();
        let mut best: f64 = 0.0;
        let mut consider = |coeffs: &[C64]| {
            let den = f(&self.element(coeffs).expect("coefficient count"));
            if den > 1e-12 {
                let num = f(&self.apply(coeffs).expect("coefficient count"));
                best = best.max(num / den);
            }
        };
        for i in 0..d {
            let mut e = alloc::vec![C64::new(0.0, 0.0); d];
            e[i] = ONE;
            consider(&e);
        }
        for _ in 0..probes {
            let coeffs: Vec<C64> = (0..d).map(|_| complex_gaussian(&mut rng)).collect();
            consider(&coeffs);
        }
        best
    }
}

/// `min_t Re(a + b e^{it} + c e^{-it}) = Re a - |b + conj c|`.
fn trig_real_part_min(coeffs: &[C64]) -> f64 {
    coeffs[0].re - (coeffs[1] + coeffs[2].conj()).norm()
}

fn combine(mats: &[ComplexMatrix], coeffs: &[C64]) -> Result<ComplexMatrix> {
    if coeffs.len() != mats.len() {
        return Err(Error::DimensionMismatch {
            expected: (mats.len(), 1),
            found: (coeffs.len(), 1),
        });
    }
    let (r, c) = mats[0].shape();
    let mut out = ComplexMatrix::zeros(r, c);
    for (m, &w) in mats.iter().zip(coeffs) {
        out += &m.scale(w);
    }
    Ok(out)
}

/// Number of circle points representing `C(T)` for the `trig` map.
pub const TRIG_SAMPLES: usize = 64;

/// Maps defined only on an operator system.
///
/// * `paulsen`: `S = {[[aI,B],[C,dI]]} in M_4` (complex dimension 10) with
///   the block transpose `[[aI,B],[C,dI]] -> [[aI,B^T],[C^T,dI]]`. Basis:
///   `diag(I,0)`, `diag(0,I)`, then `E_{i,2+j}` and `E_{2+j,i}`.
/// * `trig`: `S = span{1, z, zbar}` in `C(T)`, represented on
///   `TRIG_SAMPLES` equally spaced points of the circle, with
///   `a + bz + c zbar -> [[a, 2b], [2c, a]]`. Positivity uses the exact
///   minimum over the circle; norms and ranges use the sampled model.
pub fn named_system_map(id: &str) -> Result<SystemMap> {
    match id {
        "paulsen" => {
            let mut basis = Vec::with_capacity(10);
            let mut top = ComplexMatrix::zeros(4, 4);
            top.set_block(0, 0, &ComplexMatrix::identity(2));
            let mut bottom = ComplexMatrix::zeros(4, 4);
            bottom.set_block(1, 1, &ComplexMatrix::identity(2));
            basis.push(ComplexMatrix::identity(4));
            basis.push(top);
            basis.push(bottom);
            for i in 0..2 {
                for j in 0..2 {
                    basis.push(ComplexMatrix::unit(4, i, 2 + j));
                    basis.push(ComplexMatrix::unit(4, 2 + j, i));
                }
            }
            // The unit is listed first, so one of the two diagonal blocks is
            // redundant; drop it to keep a basis.
            basis.remove(2);
            let images = basis.iter().map(paulsen_block_transpose).collect();
            Ok(SystemMap {
                name: "paulsen".into(),
                basis,
                images,
                real_part_min: None,
            })
        }
        "trig" => {
            let z = ComplexMatrix::diag(
                &(0..TRIG_SAMPLES)
                    .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / TRIG_SAMPLES as f64))
                    .collect::<Vec<_>>(),
            );
            let basis = alloc::vec![ComplexMatrix::identity(TRIG_SAMPLES), z.clone(), z.conj()];
            let images = alloc::vec![
                ComplexMatrix::identity(2),
                ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).expect("2x2"),
                ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 2.0, 0.0]).expect("2x2"),
            ];
            Ok(SystemMap {
                name: "trig".into(),
                basis,
                images,
                real_part_min: Some(trig_real_part_min),
            })
        }
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::extreme_eigenvalues;
    use crate::superop::compose;

    #[test]
    fn every_listed_id_builds() {
        for id in EXAMPLE_IDS {
            assert!(named_example(id, None).is_ok(), "{id}");
        }
        for id in SYSTEM_MAP_IDS {
            assert!(named_system_map(id).is_ok(), "{id}");
        }
        assert!(matches!(named_example("nope", None), Err(Error::UnknownExample(_))));
        assert!(matches!(
            named_example("transpose", Some(1000)),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn diambound_values() {
        let phi = named_example("diambound", None).unwrap();
        let out = phi.apply(&ComplexMatrix::unit(2, 0, 1)).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(out.max_abs_diff(&ComplexMatrix::diag_real(&[h, -h])) < 1e-15);
        assert_eq!(phi.flags().paraunital, Some(C64::new(h, 0.0)));
        assert!(!phi.flags().self_adjoint);
    }

    #[test]
    fn corner_block_map() {
        let phi = named_example("corner", Some(2)).unwrap();
        let x = ComplexMatrix::from_fn(4, 4, |i, j| C64::new((4 * i + j) as f64 + 1.0, 0.0));
        let out = phi.apply(&x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 2 && j >= 2 { x[(i, j)] } else { C64::new(0.0, 0.0) };
                assert_eq!(out[(i, j)], expected);
            }
        }
        assert_eq!(phi.flags().paraunital, Some(C64::new(0.0, 0.0)));
    }

    #[test]
    fn choi_maps_are_cp() {
        for n in 2..=5 {
            let phi = named_example("choi_map", Some(n)).unwrap();
            let f = phi.flags();
            assert!(f.cp, "n = {n}");
            let c = (n * n - 1) as f64;
            assert!((f.paraunital.unwrap() - C64::new(c, 0.0)).norm() < 1e-12);
            assert!((f.trace_scale.unwrap() - C64::new(c, 0.0)).norm() < 1e-12);
            assert!(extreme_eigenvalues(phi.choi()).0 >= -1e-10);
        }
    }

    #[test]
    fn final_pair_are_inverse() {
        for n in 2..=4 {
            let psi = named_example("final_psi", Some(n)).unwrap();
            let phi = named_example("final_phi", Some(n)).unwrap();
            let f = psi.flags();
            assert!(f.unital && f.cp && f.trace_scale == Some(ONE));
            let id = SuperOp::identity(n);
            assert!(compose(&psi, &phi).unwrap().distance(&id).unwrap() < 1e-12);
            assert!(compose(&phi, &psi).unwrap().distance(&id).unwrap() < 1e-12);
            let unit = phi.apply(&ComplexMatrix::identity(n)).unwrap();
            assert!(unit.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn counterexample_structure() {
        let phi = named_example("counterexample", None).unwrap();
        assert!(phi.flags().self_adjoint);
        assert!(phi.flags().trace_scale.is_none());
        assert!(phi.flags().paraunital.is_none());
    }

    #[test]
    fn paulsen_agrees_with_system_map_on_its_domain() {
        let phi = named_example("paulsen", None).unwrap();
        assert!(phi.flags().unital && phi.flags().self_adjoint);
        let sys = named_system_map("paulsen").unwrap();
        assert_eq!(sys.dim(), 10);
        let coeffs: Vec<C64> = (0..10).map(|k| C64::new(k as f64 - 3.0, 0.5 * k as f64)).collect();
        let x = sys.element(&coeffs).unwrap();
        assert!(phi.apply(&x).unwrap().max_abs_diff(&sys.apply(&coeffs).unwrap()) < 1e-13);
        assert!(sys.is_unital());
        assert!(sys.positive_sampled(200, 1));
    }

    #[test]
    fn trig_map_norm_and_diameter() {
        let sys = named_system_map("trig").unwrap();
        assert!(sys.is_unital());
        assert!(sys.positive_sampled(200, 3));
        // Sampling the circle at finitely many points slightly underestimates
        // sup norms and ranges, hence the loose upper checks.
        let norm = sys.norm_lower(50, 3);
        assert!((2.0 - 1e-12..=2.01).contains(&norm));
        assert!(sys.diam_ratio_lower(200, 3) <= 1.01);
    }
}
