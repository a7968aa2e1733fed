//! Trace translations: adding a multiple of `tr(.) I` to make a map
//! completely positive, or to make it a section of a completely positive
//! map.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;

use crate::eig::{eigh, operator_norm};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::superop::{compose, hermitian_basis, traceless_hermitian_basis, SuperOp};
use crate::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceTranslation {
    /// `m^2 ||Phi_-(I_n)||`, zero when the input is already CP.
    pub beta: f64,
    /// `Phi + beta tr(.) I_m`.
    pub translated: SuperOp,
    /// `||Phi_-(I_n)||`, the norm of the negative part.
    pub negative_norm: f64,
}

/// Splits the Choi matrix by eigenvalue sign, `Phi = Phi_+ - Phi_-`, and
/// translates by `beta = m^2 ||Phi_-(I_n)||`, which makes the Choi matrix
/// positive semidefinite.
pub fn trace_translate_cp(phi: &SuperOp) -> Result<TraceTranslation> {
    if !phi.flags().self_adjoint {
        return Err(Error::NonSelfAdjoint);
    }
    if phi.flags().cp {
        return Ok(TraceTranslation {
            beta: 0.0,
            translated: phi.clone(),
            negative_norm: 0.0,
        });
    }
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let minus_choi = eigh(phi.choi()).reconstruct_with(|x| if x < 0.0 { -x } else { 0.0 });
    let mut minus_unit = ComplexMatrix::zeros(m, m);
    for i in 0..n {
        minus_unit += &minus_choi.block(i, i, m, m);
    }
    let negative_norm = operator_norm(&minus_unit);
    let beta = (m * m) as f64 * negative_norm;
    Ok(TraceTranslation {
        beta,
        translated: phi.translate_by_trace(C64::new(beta, 0.0)),
        negative_norm,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionTranslation {
    /// Total translation applied to the input: `Phi_sec = Phi + gamma tr(.) I_m`.
    pub gamma: f64,
    /// Part of `gamma` spent on making the unit image positive before the
    /// construction; zero unless the paraunital constant was not positive.
    pub pre_shift: f64,
    pub phi_sec: SuperOp,
    /// Completely positive left inverse of `phi_sec`.
    pub psi_cp: SuperOp,
    /// Translation that made the inverse completely positive.
    pub beta: f64,
    /// Paraunital constant and trace scale of the (pre-shifted) input.
    pub c: f64,
    pub k: f64,
    /// `max |(Psi_cp o Phi_sec)(E_ij) - E_ij|` over matrix units.
    pub residual: f64,
}

/// Translates a self-adjoint, paraunital, scaled trace-preserving injective
/// map into a section of a completely positive map.
///
/// The inverse on the image is built from Gram-Schmidt pairs `(Q_j, P_j)`
/// with `Q_j` orthonormal in the image and `Phi(P_j) = Q_j`; it sends the
/// orthogonal complement of the image to zero. A trace translation of that
/// inverse makes it CP, and `gamma = -beta k (1/c + beta m)^-1` restores the
/// left-inverse relation.
pub fn section_translate(phi: &SuperOp) -> Result<SectionTranslation> {
    let flags = *phi.flags();
    if !flags.self_adjoint {
        return Err(Error::NonSelfAdjoint);
    }
    let k0 = flags.trace_scale.ok_or(Error::NotScaledTP)?;
    let c0 = flags.paraunital.ok_or(Error::NotParaunital)?;
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let atol = Tolerances::default().scaled_atol(phi.choi().max_abs());
    let (mut c, mut k) = (c0.re, k0.re);

    let mut pre_shift = 0.0;
    let mut base = phi.clone();
    if c <= atol {
        pre_shift = c.abs() + 1.0;
        base = phi.translate_by_trace(C64::new(pre_shift, 0.0));
        c += pre_shift * n as f64;
        k += pre_shift * m as f64;
    }

    let rank = image_rank(&base, &traceless_hermitian_basis(n));
    if rank < n * n - 1 {
        return Err(Error::NullSpaceTooLarge {
            rank,
            required: n * n - 1,
        });
    }

    let pairs = gram_schmidt_pairs(&base, &hermitian_basis(n));
    let psi = SuperOp::from_fn(m, n, |e| {
        let (p, q) = unit_position(e);
        let mut out = ComplexMatrix::zeros(n, n);
        for (qj, pj) in &pairs {
            let w = qj[(q, p)];
            if w != C64::new(0.0, 0.0) {
                out += &pj.scale(w);
            }
        }
        out
    })?;

    let tt = trace_translate_cp(&psi)?;
    let beta = tt.beta;
    let gamma = -beta * k / (1.0 / c + beta * m as f64);
    let phi_sec = base.translate_by_trace(C64::new(gamma, 0.0));
    let psi_cp = tt.translated;

    let round_trip = compose(&psi_cp, &phi_sec)?;
    let residual = round_trip.distance(&SuperOp::identity(n))?;

    Ok(SectionTranslation {
        gamma: pre_shift + gamma,
        pre_shift,
        phi_sec,
        psi_cp,
        beta,
        c,
        k,
        residual,
    })
}

fn unit_position(e: &ComplexMatrix) -> (usize, usize) {
    let idx = e
        .data()
        .iter()
        .position(|z| *z != C64::new(0.0, 0.0))
        .expect("matrix unit");
    (idx / e.cols(), idx % e.cols())
}

/// Real vector of a Hermitian matrix for the inner product `Re tr(A* B)`.
fn real_coords(a: &ComplexMatrix) -> Vec<f64> {
    a.data().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn image_rank(phi: &SuperOp, basis: &[ComplexMatrix]) -> usize {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let scale = basis
        .iter()
        .map(|b| phi.apply(b).expect("basis shape").frobenius_norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for b in basis {
        let mut x = real_coords(&phi.apply(b).expect("basis shape"));
        for _ in 0..2 {
            for q in &kept {
                let c: f64 = q.iter().zip(&x).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
            }
        }
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx > 1e-9 * scale {
            x.iter_mut().for_each(|v| *v /= nx);
            kept.push(x);
        }
    }
    kept.len()
}

/// Orthonormalizes the images `Phi(B_a)` and applies the same elimination to
/// the preimages, yielding pairs with `Phi(P_j) = Q_j`.
fn gram_schmidt_pairs(phi: &SuperOp, basis: &[ComplexMatrix]) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let mut pairs: Vec<(ComplexMatrix, ComplexMatrix)> = Vec::new();
    let scale = basis
        .iter()
        .map(|b| phi.apply(b).expect("basis shape").frobenius_norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for b in basis {
        let mut q = phi.apply(b).expect("basis shape");
        let mut p = b.clone();
        for _ in 0..2 {
            for (qj, pj) in &pairs {
                let coef = qj.hs_inner(&q).re;
                q -= &qj.scale_real(coef);
                p -= &pj.scale_real(coef);
            }
        }
        let nq = q.frobenius_norm();
        if nq > 1e-9 * scale {
            pairs.push((q.scale_real(1.0 / nq), p.scale_real(1.0 / nq)));
        }
    }
    pairs
}
