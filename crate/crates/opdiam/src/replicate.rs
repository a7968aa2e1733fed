//! Reproduction table: every concrete value about numerical diameters and
//! the example maps, recomputed and compared with its expected value.
//!
//! Rows are independent. An error or a panic inside one row marks that row
//! as failed and the suite carries on. Values depend only on the seed and
//! the budget; `runtime_ms` is the only field that varies between runs.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use glob::Pattern;
use opdiam_core::diamnorm::{
    cb_lower, diam_estimate, divergence_ratios, inequality_ledger, map_norm, sdiam_estimate, separation_check,
    submultiplicativity, witness_ratio, Budget, DiamEstimate, EstimateSet, Quantity, Status,
};
use opdiam_core::eig::extreme_eigenvalues;
use opdiam_core::numrange::{centering_constants, diameter, numerical_diameter, support_function};
use opdiam_core::superop::{
    compose, matrix_units, named_example, named_system_map, random_hermitian, random_matrix, random_superop,
    random_unitary, section_translate, swap_operator, trace_translate_cp, RandomKind,
};
use opdiam_core::{operator_norm, ComplexMatrix, Error, SuperOp, C64};
use serde_json::{json, Value};

use crate::json::real;

/// Tolerance for search-based equalities.
pub const SEARCH_TOL: f64 = 2e-3;
/// Tolerance for values computed from a sampled model.
pub const SAMPLED_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub budget: Budget,
    /// Tolerance for closed-form values.
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            budget: Budget::default(),
            tol: 1e-8,
        }
    }
}

impl SuiteConfig {
    /// Reduced budget for rows that run a search on many maps.
    fn bulk(&self) -> Budget {
        Budget {
            restarts: self.budget.restarts.min(4),
            iters: self.budget.iters.min(60),
            ..self.budget
        }
    }

    fn seed(&self, salt: u64) -> u64 {
        self.budget.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// A value stated in the literature on numerical diameters.
    Literature,
    /// Worked out by hand for this table.
    Derived,
    Trivial,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Literature => "literature",
            Origin::Derived => "derived",
            Origin::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    ClosedForm,
    Sampled,
    Search,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ClosedForm => "closed_form",
            Regime::Sampled => "sampled",
            Regime::Search => "search",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Claim {
    /// The value lies in `[lower - tol, upper + tol]`.
    Equals(f64),
    /// Certified from below: `lower >= v - tol`.
    AtLeast(f64),
    /// Certified from above: `upper <= v + tol`.
    AtMost(f64),
    /// Consistency only: `lower <= v + tol`.
    LowerAtMost(f64),
    /// The seminorm is infinite.
    Unbounded,
    /// `lower <= upper`, checked one-sidedly; failure is inconclusive.
    Soft,
}

impl Claim {
    pub fn describe(self) -> String {
        match self {
            Claim::Equals(v) => format!("= {v}"),
            Claim::AtLeast(v) => format!(">= {v}"),
            Claim::AtMost(v) => format!("<= {v}"),
            Claim::LowerAtMost(v) => format!("lower <= {v}"),
            Claim::Unbounded => "= inf".into(),
            Claim::Soft => "lower <= upper (soft)".into(),
        }
    }

    fn judge(self, lower: f64, upper: f64, tol: f64) -> RowStatus {
        let ok = match self {
            Claim::Equals(v) => lower - tol <= v && v <= upper + tol,
            Claim::AtLeast(v) => lower >= v - tol,
            Claim::AtMost(v) => upper <= v + tol,
            Claim::LowerAtMost(v) => lower <= v + tol,
            Claim::Unbounded => lower == f64::INFINITY,
            Claim::Soft => lower <= upper + tol,
        };
        match (ok, self) {
            (true, _) => RowStatus::Pass,
            (false, Claim::Soft) => RowStatus::Inconclusive,
            (false, _) => RowStatus::Fail,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Inconclusive => "inconclusive",
        }
    }
}

/// One reproduced fact.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub fact_id: String,
    /// What is being reproduced.
    pub statement: String,
    pub claim: Claim,
    pub origin: Origin,
    pub regime: Regime,
    pub tol: f64,
    pub lower: f64,
    pub upper: f64,
    pub status: RowStatus,
    /// Certificate, witness or error detail.
    pub note: String,
    pub runtime_ms: u64,
}

struct Outcome {
    lower: f64,
    upper: f64,
    note: String,
}

impl Outcome {
    fn exact(v: f64) -> Self {
        Outcome {
            lower: v,
            upper: v,
            note: String::new(),
        }
    }

    fn flag(b: bool) -> Self {
        Outcome::exact(if b { 1.0 } else { 0.0 })
    }

    fn with(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn estimate(e: &DiamEstimate) -> Self {
        let mut note = format!("{} at level {}", e.certificate, e.level);
        if let Some(w) = &e.witness {
            let _ = write!(note, ", {}x{} witness", w.rows(), w.cols());
        }
        Outcome {
            lower: e.lower,
            upper: e.upper,
            note,
        }
    }
}

type Run = fn(&SuiteConfig) -> Result<Outcome, Error>;

struct Fact {
    id: &'static str,
    statement: &'static str,
    claim: Claim,
    origin: Origin,
    regime: Regime,
    tol: Option<f64>,
    run: Run,
}

const fn fact(
    id: &'static str,
    statement: &'static str,
    claim: Claim,
    origin: Origin,
    regime: Regime,
    run: Run,
) -> Fact {
    Fact {
        id,
        statement,
        claim,
        origin,
        regime,
        tol: None,
        run,
    }
}

fn ex(id: &str, n: Option<usize>) -> Result<SuperOp, Error> {
    named_example(id, n)
}

fn omega_diag() -> ComplexMatrix {
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    ComplexMatrix::diag(&[C64::new(1.0, 0.0), w, w * w])
}

fn flip(n: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(2 * n, 2 * n);
    f.set_block(0, 1, &ComplexMatrix::identity(n));
    f.set_block(1, 0, &ComplexMatrix::identity(n));
    f
}

fn basis_distance(a: &SuperOp, b: &SuperOp) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for e in matrix_units(a.dim_in()) {
        worst = worst.max(a.apply(&e)?.max_abs_diff(&b.apply(&e)?));
    }
    Ok(worst)
}

fn estimates(phi: &SuperOp, level: usize, budget: &Budget) -> Result<EstimateSet, Error> {
    let mut set = EstimateSet::default();
    set.insert(map_norm(phi, budget));
    set.insert(diam_estimate(phi, budget));
    set.insert(sdiam_estimate(phi, budget));
    for q in [Quantity::Cb, Quantity::Cbdiam, Quantity::Cbsdiam] {
        set.insert(cb_lower(phi, level, q, budget)?);
    }
    Ok(set)
}

fn ledger_row(id: &str, n: Option<usize>, cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let phi = ex(id, n)?;
    let rels = inequality_ledger(&phi, &estimates(&phi, 2, &cfg.bulk())?);
    let count = |f: fn(&Status) -> bool| rels.iter().filter(|r| f(&r.status)).count();
    let violated: Vec<&str> = rels
        .iter()
        .filter(|r| r.status == Status::Violated)
        .map(|r| r.name)
        .collect();
    let mut note = format!(
        "{} hold, {} skipped",
        count(|s| *s == Status::Holds),
        count(|s| matches!(s, Status::Skipped(_)))
    );
    if !violated.is_empty() {
        let _ = write!(note, "; violated: {}", violated.join(", "));
    }
    Ok(Outcome::exact(violated.len() as f64).with(note))
}

macro_rules! ledger_fact {
    ($id:literal, $ex:literal, $n:expr) => {
        fact(
            $id,
            "sound inequality ledger has no violations",
            Claim::Equals(0.0),
            Origin::Literature,
            Regime::ClosedForm,
            |c| ledger_row($ex, $n, c),
        )
    };
}

/// Diameter of `Psi(E)` before and after a unital channel, for an
/// observable `E` with spectrum in `{-1, +1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distinguishability {
    pub diam_before: f64,
    pub diam_after: f64,
    /// `diam_after / 2`, in `[0, 1]`.
    pub ratio: f64,
}

pub fn distinguishability_report(psi: &SuperOp, e: &ComplexMatrix) -> Result<Distinguishability, Error> {
    let n = e.ensure_square()?;
    if n != psi.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: (psi.dim_in(), psi.dim_in()),
            found: e.shape(),
        });
    }
    if e.hermitian_defect() > 1e-6 {
        return Err(Error::NotAnObservable);
    }
    let h = (e + &e.dagger()).scale_real(0.5);
    let spectrum = opdiam_core::eig::eigvalsh(&h);
    if spectrum.iter().any(|x| (x.abs() - 1.0).abs() > 1e-6) {
        return Err(Error::NotAnObservable);
    }
    let flags = psi.flags();
    if !(flags.unital && flags.cp) {
        return Err(Error::NotUcp);
    }
    let diam_before = diameter(&h)?;
    let diam_after = diameter(&psi.apply(&h)?)?;
    Ok(Distinguishability {
        diam_before,
        diam_after,
        ratio: diam_after / 2.0,
    })
}

fn facts() -> Vec<Fact> {
    use Claim::*;
    use Origin::*;
    use Regime::*;
    let mut list = vec![
        // Numerical ranges of single matrices.
        fact(
            "range.rank_one",
            "max |diam(uv*) - 1| over 100 unit-vector pairs, n = 2..8",
            Equals(0.0),
            Literature,
            ClosedForm,
            |c| {
                let mut worst = 0.0f64;
                for i in 0..100u64 {
                    let n = 2 + (i % 7) as usize;
                    let u = random_unitary(n, c.seed(2 * i)).column(0);
                    let v = random_unitary(n, c.seed(2 * i + 1)).column(0);
                    worst = worst.max((diameter(&ComplexMatrix::outer(&u, &v))? - 1.0).abs());
                }
                Ok(Outcome::exact(worst))
            },
        ),
        fact(
            "range.jung.diameter",
            "diam(diag(1, w, w^2)) for a primitive cube root of unity w",
            Equals(3f64.sqrt()),
            Literature,
            ClosedForm,
            |_| Ok(Outcome::exact(numerical_diameter(&omega_diag(), 256, 64)?.value)),
        ),
        fact(
            "range.jung.radius",
            "smallest disk around the sampled range of diag(1, w, w^2)",
            Equals(1.0),
            Literature,
            Sampled,
            |_| Ok(Outcome::exact(centering_constants(&omega_diag())?.jung.radius)),
        ),
        fact(
            "range.jung.ratio",
            "disk radius over diameter saturates the Jung bound",
            Equals(1.0 / 3f64.sqrt()),
            Literature,
            Sampled,
            |_| {
                let e = omega_diag();
                Ok(Outcome::exact(centering_constants(&e)?.jung.radius / diameter(&e)?))
            },
        ),
        fact(
            "range.centering",
            "max | ||E - k_E I|| - diam(E)/2 | over 100 Hermitian E",
            Equals(0.0),
            Literature,
            ClosedForm,
            |c| {
                let mut worst = 0.0f64;
                for i in 0..100u64 {
                    let e = random_hermitian(2 + (i % 11) as usize, c.seed(1000 + i));
                    let k = centering_constants(&e)?.k_re;
                    let dev = operator_norm(&e.shifted(C64::new(-k, 0.0))) - 0.5 * diameter(&e)?;
                    worst = worst.max(dev.abs());
                }
                Ok(Outcome::exact(worst))
            },
        ),
        // The diameter-versus-norm example on M_2.
        fact("maps.diambound.op_norm", "operator norm", Equals(1.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&map_norm(&ex("diambound", None)?, &c.budget)))
        }),
        fact("maps.diambound.diam", "induced diameter exceeds sqrt 2 - tol", AtLeast(SQRT_2), Literature, Search, |c| {
            Ok(Outcome::estimate(&diam_estimate(&ex("diambound", None)?, &c.budget)))
        }),
        fact("maps.diambound.diam_e12", "diameter ratio of the witness E_12", Equals(SQRT_2), Derived, ClosedForm, |c| {
            let e12 = ComplexMatrix::unit(2, 0, 1);
            Ok(Outcome::exact(witness_ratio(&ex("diambound", None)?, Quantity::Diam, 1, &e12, c.budget.final_grid)))
        }),
        // The corner compression.
        fact("maps.corner.op_norm", "operator norm", Equals(1.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&map_norm(&ex("corner", None)?, &c.budget)))
        }),
        fact("maps.corner.cb", "cb norm at level 2", Equals(1.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&cb_lower(&ex("corner", None)?, 2, Quantity::Cb, &c.budget)?))
        }),
        fact("maps.corner.sdiam", "self-adjoint diameter seminorm", Equals(0.5), Literature, Search, |c| {
            Ok(Outcome::estimate(&sdiam_estimate(&ex("corner", None)?, &c.budget)))
        }),
        fact("maps.corner.cbsdiam", "self-adjoint diameter seminorm at level 2", Equals(0.5), Literature, Search, |c| {
            Ok(Outcome::estimate(&cb_lower(&ex("corner", None)?, 2, Quantity::Cbsdiam, &c.budget)?))
        }),
        fact("maps.corner.diam", "diameter seminorm over all arguments (map is not self-adjoint)", Equals(1.0), Derived, Search, |c| {
            Ok(Outcome::estimate(&diam_estimate(&ex("corner", None)?, &c.budget)))
        }),
        // Transposition.
        fact("maps.transpose.n2.diam", "diameter seminorm of transposition on M_2", Equals(1.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&diam_estimate(&SuperOp::transpose_map(2), &c.budget)))
        }),
        fact("maps.transpose.n3.diam", "diameter seminorm of transposition on M_3", Equals(1.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&diam_estimate(&SuperOp::transpose_map(3), &c.budget)))
        }),
        fact("maps.transpose.n2.cb", "cb norm of transposition on M_2 (swap witness)", Equals(2.0), Literature, ClosedForm, |c| {
            Ok(Outcome::estimate(&cb_lower(&SuperOp::transpose_map(2), 2, Quantity::Cb, &c.budget)?))
        }),
        fact("maps.transpose.n3.cb", "cb norm of transposition on M_3 (swap witness)", Equals(3.0), Literature, ClosedForm, |c| {
            Ok(Outcome::estimate(&cb_lower(&SuperOp::transpose_map(3), 3, Quantity::Cb, &c.budget)?))
        }),
        fact("maps.transpose.n2.swap_ratio", "||T(SWAP)|| / ||SWAP|| at level 2", Equals(2.0), Derived, ClosedForm, |c| {
            let r = witness_ratio(&SuperOp::transpose_map(2), Quantity::Cb, 2, &swap_operator(2), c.budget.final_grid);
            Ok(Outcome::exact(r))
        }),
        fact("maps.transpose.n3.cbdiam", "cb diameter of transposition on M_3 at level 6", AtLeast(3.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&cb_lower(&SuperOp::transpose_map(3), 6, Quantity::Cbdiam, &c.bulk())?))
        }),
        // Degenerate and trivial maps.
        fact("maps.trace_unit.sdiam", "A -> tr(A)/n I has zero diameter seminorm", Equals(0.0), Literature, ClosedForm, |c| {
            Ok(Outcome::estimate(&sdiam_estimate(&ex("trace_unit", Some(3))?, &c.budget)))
        }),
        fact("maps.identity.diam", "identity map", Equals(1.0), Trivial, Search, |c| {
            Ok(Outcome::estimate(&diam_estimate(&SuperOp::identity(3), &c.budget)))
        }),
        // The non-scaled-trace-preserving counterexample.
        fact("maps.counterexample.sdiam", "non-paraunital map has infinite diameter seminorm", Unbounded, Literature, ClosedForm, |c| {
            Ok(Outcome::estimate(&sdiam_estimate(&ex("counterexample", None)?, &c.budget)))
        }),
        fact("maps.counterexample.divergence", "ratio along I + t E_11 at t = 1e-8", AtLeast(1e3), Derived, ClosedForm, |_| {
            let r = divergence_ratios(&ex("counterexample", None)?, 8);
            Ok(Outcome::exact(r.last().map_or(0.0, |x| x.1)))
        }),
        fact("maps.counterexample.not_scaled_tp", "section translation rejects the map", Equals(1.0), Literature, ClosedForm, |_| {
            let e = section_translate(&ex("counterexample", None)?).err();
            Ok(Outcome::flag(e == Some(Error::NotScaledTP)))
        }),
        fact(
            "maps.counterexample.positive_image",
            "max |(Phi + g tr I)(diag(1,-1)) - diag(2,0)| for g = -2..2",
            Equals(0.0),
            Literature,
            ClosedForm,
            |_| {
                let phi = ex("counterexample", None)?;
                let e = ComplexMatrix::diag_real(&[1.0, -1.0]);
                let target = ComplexMatrix::diag_real(&[2.0, 0.0]);
                let mut worst = 0.0f64;
                for g in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                    worst = worst.max(phi.translate_by_trace(C64::new(g, 0.0)).apply(&e)?.max_abs_diff(&target));
                }
                Ok(Outcome::exact(worst))
            },
        ),
        // Trace translations.
        fact("maps.choi_map.cp", "min over n = 2..5 of lambda_min(Choi(n tr(.) I - id))", AtLeast(0.0), Literature, ClosedForm, |_| {
            let mut lo = f64::INFINITY;
            for n in 2..=5 {
                lo = lo.min(extreme_eigenvalues(ex("choi_map", Some(n))?.choi()).0);
            }
            Ok(Outcome::exact(lo))
        }),
        fact("maps.choi_map.unit_scalar", "Psi_2(I) = c I with c = n^2 - 1", Equals(3.0), Derived, ClosedForm, |_| {
            let c = ex("choi_map", Some(2))?.flags().paraunital.map_or(f64::NAN, |c| c.re);
            Ok(Outcome::exact(c))
        }),
        fact("maps.choi_map.trace_scale", "tr Psi_2(A) = k tr A with k = n^2 - 1", Equals(3.0), Derived, ClosedForm, |_| {
            let k = ex("choi_map", Some(2))?.flags().trace_scale.map_or(f64::NAN, |k| k.re);
            Ok(Outcome::exact(k))
        }),
        fact(
            "maps.trace_translation",
            "min lambda_min of Choi(Phi + beta tr I) over 100 Hermitian-Choi maps, n, m <= 4",
            AtLeast(0.0),
            Literature,
            ClosedForm,
            |c| {
                let mut lo = f64::INFINITY;
                for i in 0..100u64 {
                    let (n, m) = (1 + (i % 4) as usize, 1 + ((i / 4) % 4) as usize);
                    let t = trace_translate_cp(&random_superop(RandomKind::HermitianChoi, n, m, c.seed(2000 + i))?)?;
                    let choi = t.translated.choi();
                    lo = lo.min(extreme_eigenvalues(choi).0 / choi.max_abs().max(1.0));
                }
                Ok(Outcome::exact(lo))
            },
        ),
        // The final example pair on M_2.
        fact("maps.final.psi_ucp_tp", "Psi is unital, trace-preserving and CP", Equals(1.0), Literature, ClosedForm, |_| {
            let f = *ex("final_psi", Some(2))?.flags();
            let tp = f.trace_scale.is_some_and(|k| (k - C64::new(1.0, 0.0)).norm() < 1e-12);
            Ok(Outcome::flag(f.unital && f.cp && tp))
        }),
        fact("maps.final.phi_unit", "max |Phi(I) - I|", Equals(0.0), Derived, ClosedForm, |_| {
            let phi = ex("final_phi", Some(2))?;
            Ok(Outcome::exact(phi.unit_image().max_abs_diff(&ComplexMatrix::identity(2))))
        }),
        fact("maps.final.round_trip", "max |(Psi o Phi)(E_ij) - E_ij|", Equals(0.0), Literature, ClosedForm, |_| {
            let both = compose(&ex("final_psi", Some(2))?, &ex("final_phi", Some(2))?)?;
            Ok(Outcome::exact(basis_distance(&both, &SuperOp::identity(2))?))
        }),
        fact("maps.final.section_gamma", "section translation of Phi needs no shift", Equals(0.0), Derived, ClosedForm, |_| {
            let s = section_translate(&ex("final_phi", Some(2))?)?;
            Ok(Outcome::exact(s.gamma).with(format!("beta = {}, residual = {:e}", s.beta, s.residual)))
        }),
        fact("maps.final.diam", "diameter seminorm of Phi equals n^2", Equals(4.0), Literature, Search, |c| {
            let est = diam_estimate(&ex("final_phi", Some(2))?, &c.budget);
            let e12 = est.witness.as_ref() == Some(&ComplexMatrix::unit(2, 0, 1));
            Ok(Outcome::estimate(&est).with(format!("witness E_12: {e12}")))
        }),
        fact("maps.final.cb", "cb norm of Phi at level 2 (swap witness)", Equals(6.5), Derived, ClosedForm, |c| {
            Ok(Outcome::estimate(&cb_lower(&ex("final_phi", Some(2))?, 2, Quantity::Cb, &c.budget)?))
        }),
        fact("maps.final.cb_exceeds", "cb norm of Phi exceeds n^3 - n^2 + 1", AtLeast(5.0), Literature, ClosedForm, |c| {
            Ok(Outcome::estimate(&cb_lower(&ex("final_phi", Some(2))?, 2, Quantity::Cb, &c.budget)?))
        }),
        fact(
            "maps.final.expansive",
            "largest breach of lambda_min(Phi(A)) <= lambda_min(A) <= lambda_max(A) <= lambda_max(Phi(A)), 100 Hermitian A",
            AtMost(0.0),
            Literature,
            ClosedForm,
            |c| {
                let phi = ex("final_phi", Some(2))?;
                let mut worst = f64::NEG_INFINITY;
                for i in 0..100u64 {
                    let a = random_hermitian(2, c.seed(3000 + i));
                    let (alo, ahi) = extreme_eigenvalues(&a);
                    let (plo, phi_hi) = extreme_eigenvalues(&phi.apply(&a)?);
                    worst = worst.max(plo - alo).max(ahi - phi_hi);
                }
                Ok(Outcome::exact(worst))
            },
        ),
        // Amplification of id + tr(.) I.
        fact("maps.id_plus_trace.diam", "diameter seminorm at level 1", Equals(1.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&diam_estimate(&ex("id_plus_trace", Some(2))?, &c.budget)))
        }),
        fact("maps.id_plus_trace.flip_ratio", "ratio of [[0,I],[I,0]] at level 2", Equals(3.0), Literature, ClosedForm, |c| {
            let phi = ex("id_plus_trace", Some(2))?;
            Ok(Outcome::exact(witness_ratio(&phi, Quantity::Cbdiam, 2, &flip(2), c.budget.final_grid)))
        }),
        fact("maps.id_plus_trace.cbdiam", "cb diameter at level 2", AtLeast(3.0), Literature, Search, |c| {
            Ok(Outcome::estimate(&cb_lower(&ex("id_plus_trace", Some(2))?, 2, Quantity::Cbdiam, &c.budget)?))
        }),
        // Unital channels.
        fact(
            "ucp.support_dominance",
            "max of h_Phi(E)(t) - h_E(t) over 100 unital channels, 64 angles",
            AtMost(0.0),
            Literature,
            ClosedForm,
            |c| {
                let mut worst = f64::NEG_INFINITY;
                for i in 0..100u64 {
                    let n = 2 + (i % 3) as usize;
                    let phi = random_superop(RandomKind::UnitalChannel, n, n, c.seed(4000 + i))?;
                    let e = random_matrix(n, n, c.seed(5000 + i));
                    let out = phi.apply(&e)?;
                    for k in 0..64 {
                        let t = 2.0 * PI * k as f64 / 64.0;
                        worst = worst.max(support_function(&out, t)? - support_function(&e, t)?);
                    }
                }
                Ok(Outcome::exact(worst))
            },
        ),
        fact("ucp.sdiam_upper", "largest certified sdiam upper bound over 100 unital channels", AtMost(1.0), Literature, ClosedForm, |c| {
            let mut hi = f64::NEG_INFINITY;
            for i in 0..100u64 {
                let n = 2 + (i % 3) as usize;
                let phi = random_superop(RandomKind::UnitalChannel, n, n, c.seed(4000 + i))?;
                hi = hi.max(sdiam_estimate(&phi, &c.bulk()).upper);
            }
            Ok(Outcome { lower: hi, upper: hi, note: "cp_paraunital".into() })
        }),
        fact("ucp.sdiam_lower", "largest sdiam lower bound over 100 unital channels", LowerAtMost(1.0), Literature, Search, |c| {
            let mut lo = f64::NEG_INFINITY;
            for i in 0..100u64 {
                let n = 2 + (i % 3) as usize;
                let phi = random_superop(RandomKind::UnitalChannel, n, n, c.seed(4000 + i))?;
                lo = lo.max(sdiam_estimate(&phi, &c.bulk()).lower);
            }
            Ok(Outcome { lower: lo, upper: f64::INFINITY, note: String::new() })
        }),
        fact("ucp.distinguish.identity", "observable degradation under the identity", Equals(1.0), Trivial, ClosedForm, |_| {
            let d = distinguishability_report(&SuperOp::identity(2), &ComplexMatrix::diag_real(&[1.0, -1.0]))?;
            Ok(Outcome::exact(d.ratio))
        }),
        fact("ucp.distinguish.depolarizing", "observable degradation under A -> tr(A)/n I", Equals(0.0), Trivial, ClosedForm, |_| {
            let d = distinguishability_report(&ex("trace_unit", Some(2))?, &ComplexMatrix::diag_real(&[1.0, -1.0]))?;
            Ok(Outcome::exact(d.ratio))
        }),
        fact("ucp.distinguish.final_psi", "observable degradation under Psi, n = 2", Equals(0.25), Derived, ClosedForm, |_| {
            let d = distinguishability_report(&ex("final_psi", Some(2))?, &ComplexMatrix::diag_real(&[1.0, -1.0]))?;
            Ok(Outcome::exact(d.ratio).with(format!("diam after = {}", d.diam_after)))
        }),
        // Maps defined on operator systems only.
        fact("systems.paulsen.unital", "block transpose on the Paulsen system is unital", Equals(1.0), Literature, ClosedForm, |_| {
            Ok(Outcome::flag(named_system_map("paulsen")?.is_unital()))
        }),
        fact("systems.paulsen.positive", "no sampled positive element maps outside the cone", Equals(1.0), Literature, Sampled, |c| {
            Ok(Outcome::flag(named_system_map("paulsen")?.positive_sampled(500, c.seed(6000))).with("one-sided, 500 probes"))
        }),
        fact("systems.trig.positive", "no sampled positive element maps outside the cone", Equals(1.0), Literature, Sampled, |c| {
            Ok(Outcome::flag(named_system_map("trig")?.positive_sampled(500, c.seed(6001))).with("one-sided, 500 probes"))
        }),
        fact("systems.trig.norm", "the unital positive map has norm 2", AtLeast(2.0), Literature, ClosedForm, |c| {
            let lo = named_system_map("trig")?.norm_lower(200, c.seed(6002));
            Ok(Outcome { lower: lo, upper: f64::INFINITY, note: "sampled lower bound".into() })
        }),
        Fact {
            tol: Some(SEARCH_TOL),
            ..fact("systems.trig.diam", "the unital positive map does not expand diameters", LowerAtMost(1.0), Literature, Sampled, |c| {
                let lo = named_system_map("trig")?.diam_ratio_lower(200, c.seed(6003));
                Ok(Outcome { lower: lo, upper: f64::INFINITY, note: "64-point circle model".into() })
            })
        },
        // Relations between the seminorms.
        ledger_fact!("ledger.corner", "corner", None),
        ledger_fact!("ledger.diambound", "diambound", None),
        ledger_fact!("ledger.transpose", "transpose", Some(2)),
        ledger_fact!("ledger.final_phi", "final_phi", Some(2)),
        ledger_fact!("ledger.final_psi", "final_psi", Some(2)),
        ledger_fact!("ledger.id_plus_trace", "id_plus_trace", Some(2)),
        ledger_fact!("ledger.counterexample", "counterexample", None),
        ledger_fact!("ledger.choi_map", "choi_map", Some(2)),
        ledger_fact!("ledger.identity", "identity", Some(2)),
        ledger_fact!("ledger.trace_unit", "trace_unit", Some(2)),
        ledger_fact!("ledger.paulsen", "paulsen", None),
        fact(
            "ledger.submultiplicativity",
            "violations of diam(Psi o Phi) <= diam(Psi) diam(Phi) for diambound o transpose",
            Equals(0.0),
            Literature,
            ClosedForm,
            |c| {
                let (outer, inner) = (ex("diambound", None)?, SuperOp::transpose_map(2));
                let both = compose(&outer, &inner)?;
                let b = c.bulk();
                let mut bad = 0;
                for f in [diam_estimate, sdiam_estimate] {
                    let rel = submultiplicativity(&f(&both, &b), &f(&outer, &b), &f(&inner, &b));
                    bad += usize::from(rel.status == Status::Violated);
                }
                Ok(Outcome::exact(bad as f64))
            },
        ),
        fact(
            "ledger.separation",
            "2e/(1+e) against a certified upper bound on ||Psi - Ad U||_cb, UCP bijection on M_2",
            Soft,
            Literature,
            ClosedForm,
            |c| {
                let psi = random_superop(RandomKind::UcpBijection, 2, 2, c.seed(7000))?;
                let inv = sdiam_estimate(&psi.inverse()?, &c.bulk());
                let mut unitaries = vec![ComplexMatrix::identity(2)];
                unitaries.extend((0..20).map(|i| random_unitary(2, c.seed(7100 + i))));
                let rel = separation_check(&psi, &inv, &unitaries);
                Ok(Outcome {
                    lower: rel.lhs,
                    upper: rel.rhs,
                    note: rel.status.as_str().into(),
                })
            },
        ),
    ];
    list.sort_by(|a, b| a.id.cmp(b.id));
    list
}

/// Identifiers of every row, in report order.
pub fn fact_ids() -> Vec<&'static str> {
    facts().iter().map(|f| f.id).collect()
}

/// Runs every row whose id matches `filter` (a glob such as `maps.*`).
pub fn run_suite(filter: Option<&str>, config: &SuiteConfig) -> Result<Vec<ReportRow>, glob::PatternError> {
    let pattern = filter.map(Pattern::new).transpose()?;
    Ok(facts()
        .into_iter()
        .filter(|f| pattern.as_ref().is_none_or(|p| p.matches(f.id)))
        .map(|f| run_fact(&f, config))
        .collect())
}

fn run_fact(f: &Fact, config: &SuiteConfig) -> ReportRow {
    let tol = f.tol.unwrap_or(match f.regime {
        Regime::ClosedForm => config.tol,
        Regime::Sampled => SAMPLED_TOL,
        Regime::Search => SEARCH_TOL,
    });
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| (f.run)(config)));
    let runtime_ms = start.elapsed().as_millis() as u64;
    let (lower, upper, status, note) = match result {
        Ok(Ok(o)) => (o.lower, o.upper, f.claim.judge(o.lower, o.upper, tol), o.note),
        Ok(Err(e)) => (f64::NAN, f64::NAN, RowStatus::Fail, format!("error: {e}")),
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_default();
            (f64::NAN, f64::NAN, RowStatus::Fail, format!("panic: {msg}"))
        }
    };
    ReportRow {
        fact_id: f.id.to_string(),
        statement: f.statement.to_string(),
        claim: f.claim,
        origin: f.origin,
        regime: f.regime,
        tol,
        lower,
        upper,
        status,
        note,
        runtime_ms,
    }
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}

impl ReportRow {
    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = json!({
            "fact_id": self.fact_id,
            "statement": self.statement,
            "expected": {
                "claim": self.claim.describe(),
                "origin": self.origin.as_str(),
                "regime": self.regime.as_str(),
                "tol": self.tol,
            },
            "computed": {"lower": real(self.lower), "upper": real(self.upper)},
            "status": self.status.as_str(),
            "note": self.note,
        });
        if timings {
            v["runtime_ms"] = json!(self.runtime_ms);
        }
        v
    }

    fn cells(&self, timings: bool) -> Vec<String> {
        let mut c = vec![
            self.fact_id.clone(),
            self.statement.clone(),
            self.claim.describe(),
            self.origin.as_str().into(),
            self.regime.as_str().into(),
            num(self.tol),
            num(self.lower),
            num(self.upper),
            self.status.as_str().into(),
            self.note.clone(),
        ];
        if timings {
            c.push(self.runtime_ms.to_string());
        }
        c
    }
}

fn header(timings: bool) -> Vec<&'static str> {
    let mut h = vec![
        "fact_id",
        "statement",
        "expected",
        "origin",
        "regime",
        "tol",
        "lower",
        "upper",
        "status",
        "note",
    ];
    if timings {
        h.push("runtime_ms");
    }
    h
}

pub fn to_json(rows: &[ReportRow], timings: bool) -> Value {
    Value::Array(rows.iter().map(|r| r.to_json(timings)).collect())
}

pub fn to_csv(rows: &[ReportRow], timings: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(timings)).expect("in-memory write");
    for r in rows {
        w.write_record(r.cells(timings)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn to_markdown(rows: &[ReportRow], timings: bool) -> String {
    let h = header(timings);
    let mut s = format!("| {} |\n|{}\n", h.join(" | "), "---|".repeat(h.len()));
    for r in rows {
        let cells: Vec<String> = r.cells(timings).into_iter().map(|c| c.replace('|', "\\|")).collect();
        let _ = writeln!(s, "| {} |", cells.join(" | "));
    }
    s
}
