//! Relations between the seminorms, checked soundly: a lower bound is only
//! ever compared with an upper bound or an exact constant, so a reported
//! violation means an estimate or certificate is wrong.

use alloc::vec::Vec;

use crate::diamnorm::certificates::{bound_tol, is_cp_section, op_norm_upper};
use crate::diamnorm::{DiamEstimate, Quantity};
use crate::matrix::ComplexMatrix;
use crate::superop::SuperOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkipReason {
    /// A needed upper bound is missing or infinite.
    InsufficientCertificates,
    /// The hypotheses of the relation do not hold for this map.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Violated,
    Skipped(SkipReason),
    /// A one-sided check did not confirm the relation.
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::Skipped(SkipReason::InsufficientCertificates) => "skipped (insufficient certificates)",
            Status::Skipped(SkipReason::NotApplicable) => "skipped (not applicable)",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One checked relation `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub status: Status,
}

/// Best known estimate per quantity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EstimateSet {
    pub op_norm: Option<DiamEstimate>,
    pub diam: Option<DiamEstimate>,
    pub sdiam: Option<DiamEstimate>,
    pub cb: Option<DiamEstimate>,
    pub cbdiam: Option<DiamEstimate>,
    pub cbsdiam: Option<DiamEstimate>,
}

impl EstimateSet {
    fn slot(&mut self, q: Quantity) -> &mut Option<DiamEstimate> {
        match q {
            Quantity::OpNorm => &mut self.op_norm,
            Quantity::Diam => &mut self.diam,
            Quantity::Sdiam => &mut self.sdiam,
            Quantity::Cb => &mut self.cb,
            Quantity::Cbdiam => &mut self.cbdiam,
            Quantity::Cbsdiam => &mut self.cbsdiam,
        }
    }

    pub fn get(&self, q: Quantity) -> Option<&DiamEstimate> {
        match q {
            Quantity::OpNorm => self.op_norm.as_ref(),
            Quantity::Diam => self.diam.as_ref(),
            Quantity::Sdiam => self.sdiam.as_ref(),
            Quantity::Cb => self.cb.as_ref(),
            Quantity::Cbdiam => self.cbdiam.as_ref(),
            Quantity::Cbsdiam => self.cbsdiam.as_ref(),
        }
    }

    /// Keeps the estimate with the larger lower bound.
    pub fn insert(&mut self, e: DiamEstimate) {
        let slot = self.slot(e.quantity);
        if slot.as_ref().map_or(true, |old| e.lower > old.lower) {
            *slot = Some(e);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &DiamEstimate> {
        Quantity::ALL.into_iter().filter_map(|q| self.get(q))
    }
}

fn lower(set: &EstimateSet, q: Quantity) -> Option<f64> {
    set.get(q).map(|e| e.lower)
}

fn upper(set: &EstimateSet, q: Quantity) -> Option<f64> {
    set.get(q).map(|e| e.upper)
}

/// `lhs <= factor * rhs + offset`, with `lhs` a lower bound (or exact) and
/// `rhs` an upper bound (or exact).
fn check(
    name: &'static str,
    applicable: bool,
    lhs: Option<f64>,
    rhs: Option<f64>,
    factor: f64,
    offset: f64,
) -> Relation {
    let skipped = |reason, lhs: f64, rhs: f64| Relation {
        name,
        lhs,
        rhs,
        status: Status::Skipped(reason),
    };
    if !applicable {
        return skipped(
            SkipReason::NotApplicable,
            lhs.unwrap_or(f64::NAN),
            rhs.unwrap_or(f64::NAN),
        );
    }
    let (Some(l), Some(r)) = (lhs, rhs) else {
        return skipped(SkipReason::InsufficientCertificates, lhs.unwrap_or(f64::NAN), f64::NAN);
    };
    if !r.is_finite() || !l.is_finite() {
        return skipped(SkipReason::InsufficientCertificates, l, r);
    }
    let rhs = factor * r + offset;
    let status = if l <= rhs + bound_tol(rhs) {
        Status::Holds
    } else {
        Status::Violated
    };
    Relation {
        name,
        lhs: l,
        rhs,
        status,
    }
}

/// Checks every relation between the estimates that the hypotheses on
/// `phi` allow.
pub fn inequality_ledger(phi: &SuperOp, est: &EstimateSet) -> Vec<Relation> {
    use Quantity::*;
    let flags = phi.flags();
    let para = flags.paraunital.is_some() && phi.dim_in() > 1;
    let sa = flags.self_adjoint;
    let ucp = flags.unital && flags.cp;
    let section = flags.unital && is_cp_section(phi);
    let lo = |q| lower(est, q);
    let up = |q| upper(est, q);
    let one = Some(1.0);
    Vec::from([
        check("diam ≤ 2·op_norm", para, lo(Diam), up(OpNorm), 2.0, 0.0),
        check("sdiam ≤ op_norm", para, lo(Sdiam), up(OpNorm), 1.0, 0.0),
        check("sdiam ≤ diam", para, lo(Sdiam), up(Diam), 1.0, 0.0),
        check("self-adjoint ⇒ diam ≤ sdiam", para && sa, lo(Diam), up(Sdiam), 1.0, 0.0),
        check("ucp ⇒ diam ≤ 1", ucp && para, lo(Diam), one, 1.0, 0.0),
        check("ucp ⇒ cbdiam ≤ 1", ucp && para, lo(Cbdiam), one, 1.0, 0.0),
        check("cp section ⇒ sdiam ≥ 1", section && para, one, up(Sdiam), 1.0, 0.0),
        check("cp section ⇒ cbsdiam ≥ 1", section && para, one, up(Cbsdiam), 1.0, 0.0),
        check(
            "self-adjoint section ⇒ op_norm ≤ 4·sdiam − 2",
            section && sa && para,
            lo(OpNorm),
            up(Sdiam),
            4.0,
            -2.0,
        ),
        check("op_norm ≤ cb", true, lo(OpNorm), up(Cb), 1.0, 0.0),
        check("diam ≤ cbdiam", para, lo(Diam), up(Cbdiam), 1.0, 0.0),
        check("sdiam ≤ cbsdiam", para, lo(Sdiam), up(Cbsdiam), 1.0, 0.0),
        check("cbsdiam ≤ cbdiam", para, lo(Cbsdiam), up(Cbdiam), 1.0, 0.0),
        check("½cb ≤ cbsdiam", para, lo(Cb), up(Cbsdiam), 2.0, 0.0),
        check("cbsdiam ≤ cb", para, lo(Cbsdiam), up(Cb), 1.0, 0.0),
        check("½cb ≤ cbdiam", para, lo(Cb), up(Cbdiam), 2.0, 0.0),
        check("cbdiam ≤ 2·cb", para, lo(Cbdiam), up(Cb), 2.0, 0.0),
        check("self-adjoint ⇒ cb ≤ cbsdiam", para && sa, lo(Cb), up(Cbsdiam), 1.0, 0.0),
        check("self-adjoint ⇒ cbdiam ≤ cb", para && sa, lo(Cbdiam), up(Cb), 1.0, 0.0),
    ])
}

/// `lower(outer ∘ inner) <= upper(outer) upper(inner)` for paraunital maps.
pub fn submultiplicativity(composite: &DiamEstimate, outer: &DiamEstimate, inner: &DiamEstimate) -> Relation {
    let applicable =
        !composite.is_unbounded() && composite.quantity == outer.quantity && outer.quantity == inner.quantity;
    let product = outer.upper * inner.upper;
    check(
        "diam(Ψ∘Φ) ≤ diam(Ψ)·diam(Φ)",
        applicable,
        Some(composite.lower),
        Some(product),
        1.0,
        0.0,
    )
}

/// For a unital CP bijection `psi` with inverse of self-adjoint diameter at
/// least `1 + eps`, every unitary conjugation `U` satisfies
/// `||psi - U||_cb >= 2 eps / (1 + eps)`. Tested against the given
/// unitaries through an upper bound on `||psi - U||_cb`; a failure is
/// reported as inconclusive.
pub fn separation_check(psi: &SuperOp, inverse_sdiam: &DiamEstimate, unitaries: &[ComplexMatrix]) -> Relation {
    const NAME: &str = "‖Ψ−U‖_cb ≥ 2ε/(1+ε)";
    let flags = psi.flags();
    let n = psi.dim_in();
    let applicable = flags.unital && flags.cp && psi.dim_out() == n && psi.inverse().is_ok();
    if !applicable || inverse_sdiam.quantity != Quantity::Sdiam || unitaries.is_empty() {
        return check(NAME, false, None, None, 1.0, 0.0);
    }
    let eps = (inverse_sdiam.lower - 1.0).max(0.0);
    let bound = 2.0 * eps / (1.0 + eps);
    let distance = unitaries
        .iter()
        .filter_map(|u| {
            let ad = SuperOp::from_kraus(n, n, core::slice::from_ref(u), &[]).ok()?;
            Some(op_norm_upper(&psi.try_sub(&ad).ok()?).value)
        })
        .fold(f64::INFINITY, f64::min);
    let status = if !distance.is_finite() {
        Status::Skipped(SkipReason::InsufficientCertificates)
    } else if bound <= distance + bound_tol(distance) {
        Status::Holds
    } else {
        Status::Inconclusive
    };
    Relation {
        name: NAME,
        lhs: bound,
        rhs: distance,
        status,
    }
}
