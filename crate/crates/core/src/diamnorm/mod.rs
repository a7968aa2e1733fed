//! Certified intervals for the induced seminorms of a map: the operator
//! norm, the numerical diameter seminorms `diam` and `sdiam` (the latter
//! restricted to Hermitian arguments), and their completely bounded
//! versions via blockwise amplification.
//!
//! Lower bounds come from seeded local searches and always carry the
//! argument that attains them; upper bounds come from the closed-form
//! certificates in [`certificates`].

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // unused only when std is linked (test builds)
use num_traits::Float as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE};
use crate::numrange::fast_diameter;
use crate::superop::{swap_operator, LinearMap, SuperOp, DEFAULT_MAX_DIM};

pub mod certificates;
mod ledger;
mod search;

pub use certificates::{diam_upper, haagerup_bound, op_norm_upper, structure, Structure, UpperBound};
pub use ledger::{inequality_ledger, separation_check, submultiplicativity, EstimateSet, Relation, SkipReason, Status};

use search::{
    diam_ratio, general_ascent, norm_ascent, norm_ratio, projector, projector_ascent, random_general, random_projector,
    random_unitary, Found,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    OpNorm,
    Diam,
    Sdiam,
    Cb,
    Cbdiam,
    Cbsdiam,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::OpNorm,
        Quantity::Diam,
        Quantity::Sdiam,
        Quantity::Cb,
        Quantity::Cbdiam,
        Quantity::Cbsdiam,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::OpNorm => "op_norm",
            Quantity::Diam => "diam",
            Quantity::Sdiam => "sdiam",
            Quantity::Cb => "cb",
            Quantity::Cbdiam => "cbdiam",
            Quantity::Cbsdiam => "cbsdiam",
        }
    }

    pub fn is_cb(self) -> bool {
        matches!(self, Quantity::Cb | Quantity::Cbdiam | Quantity::Cbsdiam)
    }

    /// The seminorm evaluated at a single level.
    pub fn at_level(self) -> Quantity {
        match self {
            Quantity::Cb => Quantity::OpNorm,
            Quantity::Cbdiam => Quantity::Diam,
            Quantity::Cbsdiam => Quantity::Sdiam,
            q => q,
        }
    }

    fn is_norm(self) -> bool {
        self.at_level() == Quantity::OpNorm
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::InvalidShape(s.to_string()))
    }
}

/// Rule justifying an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// No finite bound available.
    Unbounded,
    /// `Phi(I)` is not scalar, so the diameter seminorms are infinite.
    NonParaunital,
    /// The domain is `M_1`; there is no non-scalar argument.
    TrivialDomain,
    /// `Phi = phi(.) I`, so every output has zero diameter.
    ScalarFunctional,
    /// `Phi = alpha J + phi(.) I` with `J` a Jordan *-homomorphism, which
    /// preserves numerical ranges: both seminorms equal `|alpha|`.
    JordanAffine,
    /// `Phi = alpha Ad_U`; the same holds at every level.
    JordanPure,
    /// `Phi = alpha P (.) Q + phi(.) I` with `PQ = 0`: `diam <= |alpha|`,
    /// `sdiam <= |alpha| / 2`.
    CornerCompression,
    /// Completely positive with `Phi(I) = c I`: `W(Phi(E)) ⊆ c W(E)` at
    /// every level.
    CpParaunital,
    /// Completely positive: `||Phi||_cb = ||Phi(I)||`.
    CpUnitNorm,
    /// Factorization bound from the Choi singular value decomposition,
    /// valid at every level.
    Haagerup,
    /// `sum ||K_i||^2` over the Choi-Kraus operators.
    KrausSum,
    /// `diam <= 2 ||Phi||` for paraunital maps.
    TwiceOpNorm,
    /// `sdiam <= ||Phi||` for paraunital maps.
    SdiamLeOpNorm,
    /// `cbsdiam <= ||Phi||_cb`, `cbdiam <= 2 ||Phi||_cb`, with equality to
    /// `||Phi||_cb` for self-adjoint maps.
    CbSandwich,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Unbounded => "none",
            Certificate::NonParaunital => "non_paraunital",
            Certificate::TrivialDomain => "trivial_domain",
            Certificate::ScalarFunctional => "Φ=φ·1",
            Certificate::JordanAffine => "jordan_affine",
            Certificate::JordanPure => "jordan_automorphism",
            Certificate::CornerCompression => "corner_compression",
            Certificate::CpParaunital => "cp_paraunital⇒≤c",
            Certificate::CpUnitNorm => "cp⇒‖Φ(I)‖",
            Certificate::Haagerup => "haagerup_factorization",
            Certificate::KrausSum => "kraus_sum",
            Certificate::TwiceOpNorm => "2·op_norm_upper",
            Certificate::SdiamLeOpNorm => "sdiam≤op_norm",
            Certificate::CbSandwich => "cb-sandwich",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A certified interval `[lower, upper]` for one seminorm of a map.
#[derive(Clone, Debug, PartialEq)]
pub struct DiamEstimate {
    pub quantity: Quantity,
    pub lower: f64,
    /// `+inf` when no certificate applies or the seminorm is infinite.
    pub upper: f64,
    /// Argument attaining `lower` at `level`; for non-paraunital maps, a
    /// late element of the diverging sequence `I + t E_11`.
    pub witness: Option<ComplexMatrix>,
    pub certificate: Certificate,
    pub level: usize,
}

impl DiamEstimate {
    /// Whether `value` lies in `[lower - tol, upper + tol]`.
    pub fn brackets(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }

    pub fn is_unbounded(&self) -> bool {
        self.lower.is_infinite()
    }
}

/// Search effort. Estimates are deterministic per budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Random starting points per search.
    pub restarts: usize,
    /// Ascent steps per start.
    pub iters: usize,
    pub seed: u64,
    /// Angle grid for diameters inside the search.
    pub search_grid: usize,
    /// Angle grid for the reported ratio of the witness.
    pub final_grid: usize,
    /// Cap on the amplified matrix size.
    pub max_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            restarts: 32,
            iters: 400,
            seed: 7,
            search_grid: 64,
            final_grid: 256,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

/// Ratio of a witness through the seminorm of `quantity` for the level-`level`
/// amplification: `||Phi(W)|| / ||W||` or `diam(Phi(W)) / diam(W)`.
pub fn witness_ratio(phi: &SuperOp, quantity: Quantity, level: usize, witness: &ComplexMatrix, grid: usize) -> f64 {
    let map = phi.amplified(level);
    if quantity.is_norm() {
        norm_ratio(&map, witness)
    } else {
        diam_ratio(&map, witness, grid)
    }
}

/// Level-one operator norm.
pub fn map_norm(phi: &SuperOp, budget: &Budget) -> DiamEstimate {
    let up = op_norm_upper(phi);
    let found = search_level(phi, 1, Quantity::OpNorm, budget, Vec::new(), up.value);
    finish(phi, Quantity::OpNorm, 1, found, up, budget)
}

/// Level-one diameter seminorm over Hermitian arguments.
pub fn sdiam_estimate(phi: &SuperOp, budget: &Budget) -> DiamEstimate {
    level_one_diam(phi, Quantity::Sdiam, budget)
}

/// Level-one diameter seminorm over all arguments.
pub fn diam_estimate(phi: &SuperOp, budget: &Budget) -> DiamEstimate {
    level_one_diam(phi, Quantity::Diam, budget)
}

fn level_one_diam(phi: &SuperOp, quantity: Quantity, budget: &Budget) -> DiamEstimate {
    if let Some(est) = degenerate(phi, quantity, 1) {
        return est;
    }
    let st = structure(phi);
    let up = diam_upper(phi, quantity, &st);
    if st.scalar_functional {
        return DiamEstimate {
            quantity,
            lower: 0.0,
            upper: up.value,
            witness: None,
            certificate: up.certificate,
            level: 1,
        };
    }
    let found = search_level(phi, 1, quantity, budget, Vec::new(), up.value);
    finish(phi, quantity, 1, found, up, budget)
}

/// Estimate of a completely bounded quantity from amplification level
/// `level`. Runs the whole ladder `1..=level`, warm-starting each level
/// from the previous witness, so lower bounds grow with the level.
pub fn cb_lower(phi: &SuperOp, level: usize, quantity: Quantity, budget: &Budget) -> Result<DiamEstimate> {
    Ok(cb_ladder(phi, level, quantity, budget)?.pop().expect("level >= 1"))
}

/// Estimates at every level `1..=max_level`.
pub fn cb_ladder(phi: &SuperOp, max_level: usize, quantity: Quantity, budget: &Budget) -> Result<Vec<DiamEstimate>> {
    if !quantity.is_cb() {
        return Err(Error::InvalidArgument("cb estimates need cb, cbdiam or cbsdiam"));
    }
    if max_level == 0 {
        return Err(Error::InvalidArgument("level must be positive"));
    }
    let d = max_level * phi.dim_in().max(phi.dim_out());
    if d > budget.max_dim {
        return Err(Error::ResourceLimit {
            requested: d,
            max: budget.max_dim,
        });
    }
    if !quantity.is_norm() {
        if let Some(est) = degenerate(phi, quantity, 1) {
            return Ok((1..=max_level)
                .map(|level| DiamEstimate { level, ..est.clone() })
                .collect());
        }
    }
    let up = if quantity.is_norm() {
        op_norm_upper(phi)
    } else {
        diam_upper(phi, quantity, &structure(phi))
    };
    let mut out: Vec<DiamEstimate> = Vec::with_capacity(max_level);
    let mut prev: Option<ComplexMatrix> = None;
    for level in 1..=max_level {
        let mut starts = Vec::new();
        if let Some(w) = prev.take() {
            starts.push(pad(&w, phi.dim_in(), quantity));
        }
        starts.extend(library_witnesses(phi, level, quantity, budget));
        let found = search_level(phi, level, quantity.at_level(), budget, starts, up.value);
        let est = finish(phi, quantity, level, found, up, budget);
        prev = est.witness.clone();
        out.push(est);
    }
    Ok(out)
}

/// Known good arguments at a level: `SWAP` at level `n`, the flip
/// `[[0, I], [I, 0]]` at even levels, and for the diameters the Hermitian
/// dilation `[[0, S], [S*, 0]]` of a norm witness `S` from half the level.
pub fn library_witnesses(phi: &SuperOp, level: usize, quantity: Quantity, budget: &Budget) -> Vec<ComplexMatrix> {
    let n = phi.dim_in();
    let d = level * n;
    let mut out = Vec::new();
    if level == n && n > 1 {
        out.push(swap_operator(n));
    }
    if level % 2 == 0 {
        let half = d / 2;
        let mut flip = ComplexMatrix::zeros(d, d);
        for i in 0..half {
            flip[(i, half + i)] = ONE;
            flip[(half + i, i)] = ONE;
        }
        out.push(flip);
        if !quantity.is_norm() {
            let up = op_norm_upper(phi);
            let starts = library_witnesses(phi, level / 2, Quantity::Cb, budget);
            let s = search_level(phi, level / 2, Quantity::OpNorm, budget, starts, up.value).arg;
            let mut dil = ComplexMatrix::zeros(d, d);
            dil.set_block(0, 1, &s);
            dil.set_block(1, 0, &s.dagger());
            out.push(dil);
        }
    }
    out
}

/// `W (+) c I_n`: a level-`k` witness as a level-`k+1` argument with the
/// same norm (`c = 0`) or the same numerical range (`c = W_00`).
fn pad(w: &ComplexMatrix, n: usize, quantity: Quantity) -> ComplexMatrix {
    let c = if quantity.is_norm() {
        C64::new(0.0, 0.0)
    } else {
        w[(0, 0)]
    };
    w.direct_sum(&ComplexMatrix::scalar(n, c))
}

/// Ratios `diam(Phi(I + t E_11)) / diam(t E_11)` for `t = 10^-1, ...,
/// 10^-steps`; they grow without bound exactly when `Phi(I)` is not
/// scalar.
pub fn divergence_ratios(phi: &SuperOp, steps: usize) -> Vec<(f64, f64)> {
    let n = phi.dim_in();
    if n < 2 {
        return Vec::new();
    }
    (1..=steps)
        .map(|j| {
            let t = 10f64.powi(-(j as i32));
            (t, diam_ratio(phi, &divergence_argument(n, t), 256))
        })
        .collect()
}

fn divergence_argument(n: usize, t: f64) -> ComplexMatrix {
    let mut e = ComplexMatrix::identity(n);
    e[(0, 0)] += t;
    e
}

/// Infinite or empty cases that need no search.
fn degenerate(phi: &SuperOp, quantity: Quantity, level: usize) -> Option<DiamEstimate> {
    if phi.dim_in() < 2 {
        return Some(DiamEstimate {
            quantity,
            lower: 0.0,
            upper: 0.0,
            witness: None,
            certificate: Certificate::TrivialDomain,
            level,
        });
    }
    if phi.flags().paraunital.is_none() {
        return Some(DiamEstimate {
            quantity,
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            witness: Some(divergence_argument(phi.dim_in(), 1e-8)),
            certificate: Certificate::NonParaunital,
            level,
        });
    }
    None
}

fn finish(
    phi: &SuperOp,
    quantity: Quantity,
    level: usize,
    found: Found,
    up: UpperBound,
    budget: &Budget,
) -> DiamEstimate {
    let lower = witness_ratio(phi, quantity, level, &found.arg, budget.final_grid);
    DiamEstimate {
        quantity,
        lower,
        upper: up.value,
        witness: Some(found.arg),
        certificate: up.certificate,
        level,
    }
}

fn restart_rng(budget: &Budget, level: usize, quantity: Quantity, index: usize) -> ChaCha8Rng {
    let tag = (level as u64) << 40 ^ (quantity as u64) << 32 ^ index as u64;
    ChaCha8Rng::seed_from_u64(budget.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag)
}

/// Number of best structured candidates that get a full ascent.
const STRUCTURED_ASCENTS: usize = 4;

/// Searches one level. `quantity` is a level quantity (op_norm, diam or
/// sdiam); `starts` are tried first, in order. Stops early once the
/// certified `upper` is reached.
fn search_level(
    phi: &SuperOp,
    level: usize,
    quantity: Quantity,
    budget: &Budget,
    starts: Vec<ComplexMatrix>,
    upper: f64,
) -> Found {
    let map = phi.amplified(level);
    let d = map.dim_in();
    let grid = budget.search_grid;
    let done = |f: &Found| f.value >= upper - 1e-12 * upper.abs().max(1.0);
    let mut best = Found {
        value: f64::NEG_INFINITY,
        arg: ComplexMatrix::identity(d),
    };

    match quantity {
        Quantity::OpNorm => {
            let mut starts = starts;
            starts.insert(0, ComplexMatrix::identity(d));
            for s in starts {
                best.merge(norm_ascent(&map, s, budget.iters));
                if done(&best) {
                    return best;
                }
            }
            for r in 0..budget.restarts {
                let start = random_unitary(&mut restart_rng(budget, level, quantity, r), d);
                best.merge(norm_ascent(&map, start, budget.iters));
                if done(&best) {
                    break;
                }
            }
        }
        Quantity::Sdiam => {
            best = projector_search(&map, level, budget, starts, &done);
        }
        _ => {
            let mut units = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        units.push(ComplexMatrix::unit(d, i, j));
                    }
                }
            }
            for s in starts.iter() {
                best.merge(general_ascent(&map, s.clone(), budget.iters, grid));
                if done(&best) {
                    return best;
                }
            }
            let ranked = rank_candidates(&map, units, grid);
            for f in ranked.iter() {
                best.merge(f.clone());
            }
            if done(&best) {
                return best;
            }
            let hermitian: Vec<ComplexMatrix> = starts.into_iter().filter(|s| s.is_hermitian(1e-12)).collect();
            best.merge(projector_search(&map, level, budget, hermitian, &done));
            if done(&best) || phi.flags().self_adjoint {
                return best;
            }
            for f in ranked.into_iter().take(STRUCTURED_ASCENTS) {
                best.merge(general_ascent(&map, f.arg, budget.iters, grid));
                if done(&best) {
                    return best;
                }
            }
            for r in 0..budget.restarts {
                let start = random_general(&mut restart_rng(budget, level, quantity, r), d);
                best.merge(general_ascent(&map, start, budget.iters, grid));
                if done(&best) {
                    break;
                }
            }
        }
    }
    best
}

fn projector_search<M: LinearMap>(
    map: &M,
    level: usize,
    budget: &Budget,
    starts: Vec<ComplexMatrix>,
    done: &dyn Fn(&Found) -> bool,
) -> Found {
    let d = map.dim_in();
    let grid = budget.search_grid;
    let mut best = Found {
        value: f64::NEG_INFINITY,
        arg: ComplexMatrix::identity(d),
    };
    for s in starts {
        best.merge(projector_ascent(map, s, budget.iters, grid));
        if done(&best) {
            return best;
        }
    }
    let ranked = rank_candidates(map, structured_projectors(d), grid);
    for f in ranked.iter() {
        best.merge(f.clone());
    }
    if done(&best) {
        return best;
    }
    for f in ranked.into_iter().take(STRUCTURED_ASCENTS) {
        best.merge(projector_ascent(map, f.arg, budget.iters, grid));
        if done(&best) {
            return best;
        }
    }
    if d < 2 {
        return best;
    }
    for r in 0..budget.restarts {
        let mut rng = restart_rng(budget, level, Quantity::Sdiam, r);
        let start = random_projector(&mut rng, d, 1 + r % (d - 1));
        best.merge(projector_ascent(map, start, budget.iters, grid));
        if done(&best) {
            break;
        }
    }
    best
}

/// Diagonal units and the rank-one projections onto `(e_i + e_j)/sqrt 2`
/// and `(e_i + i e_j)/sqrt 2`.
fn structured_projectors(d: usize) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = (0..d).map(|i| ComplexMatrix::unit(d, i, i)).collect();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            for phase in [C64::new(h, 0.0), C64::new(0.0, h)] {
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[i] = C64::new(h, 0.0);
                v[j] = phase;
                out.push(projector(&[v], d));
            }
        }
    }
    out
}

/// Candidates with their ratios, best first, original order on ties.
fn rank_candidates<M: LinearMap>(map: &M, cands: Vec<ComplexMatrix>, grid: usize) -> Vec<Found> {
    let mut scored: Vec<Found> = cands
        .into_iter()
        .map(|arg| Found {
            value: diam_ratio(map, &arg, grid),
            arg,
        })
        .collect();
    scored.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(core::cmp::Ordering::Equal));
    scored
}

/// Diameter of `Phi(I)`; zero exactly for paraunital maps.
pub fn unit_image_diameter(phi: &SuperOp) -> f64 {
    fast_diameter(&phi.unit_image(), 256)
}

#[cfg(test)]
mod tests;
