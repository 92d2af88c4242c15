//! Boundary data for SO(3) periodic monopoles with Dirac singularities:
//! charge arithmetic, the reducible locus, the index ledger and the abelian
//! pieces of the background pair used in the index computation.
//!
//! Canonical JSON input:
//! `{"points": [{"x", "y", "t"}], "k_inf", "v", "b", "q": {"x", "y", "t"}, "lambda"}`.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{higgs, AbelianError, AbelianMonopole, DiracTerm};
use crate::exec::Exec;
use crate::geometry::{wrap_signed, CirclePoint3};
use crate::green::{green_eval, GreenError};
use crate::specfn::a_constant;

/// Default tolerance for the reducibility equation on exact data.
pub const REDUCIBLE_TOL: f64 = 1e-9;
/// Inner and outer radius of the annulus where the patches are glued.
pub const PATCH_INNER: f64 = 0.5;
pub const PATCH_OUTER: f64 = 1.0;
/// Singular points must stay this far from the center.
pub const PATCH_CLEARANCE: f64 = 2.0;
/// Enumerating more subsets than this is refused.
const MAX_SUBSETS: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    #[serde(rename = "points")]
    pub singular_points: Vec<CirclePoint3>,
    pub k_inf: i64,
    pub v: f64,
    /// Flat parameter, a representative of `R/Z`; normalized into `[0, 1)` by
    /// [`BoundaryData::normalized`].
    #[serde(default)]
    pub b: f64,
    #[serde(rename = "q")]
    pub center_q: CirclePoint3,
    /// Mass of the Euclidean piece, used by [`background_recipe`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Decay rate metadata; carried but never enforced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid boundary data: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("a mass lambda > 0 is required")]
    MissingLambda,
    #[error("singular point {index} is at distance {distance} from q (needs {PATCH_CLEARANCE})")]
    Clearance { index: usize, distance: f64 },
    #[error("lambda too small: min |Phi| on the patch annulus is {min_abs_higgs}, needs {required}")]
    LambdaTooSmall { min_abs_higgs: f64, required: f64 },
    #[error("charge k = 0: only the abelian vacuum, no moduli dimension")]
    ZeroCharge,
    #[error("too many subsets to enumerate: C({n}, {k})")]
    TooManySubsets { n: usize, k: usize },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Green(#[from] GreenError),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    Parity { n: usize, k_inf: i64 },
    NonPositiveMass { v: f64 },
    NegativeCharge { k_inf: i64 },
    NotFinite { field: String },
    CoincidentPoints { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Parity { n, k_inf } => write!(f, "k_inf = {k_inf} and n = {n} have different parity"),
            Violation::NonPositiveMass { v } => write!(f, "k_inf = 0 requires v > 0, got v = {v}"),
            Violation::NegativeCharge { k_inf } => write!(f, "k_inf = {k_inf} is negative"),
            Violation::NotFinite { field } => write!(f, "{field} is not finite"),
            Violation::CoincidentPoints { i, j } => write!(f, "points {i} and {j} coincide"),
        }
    }
}

impl BoundaryData {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str::<Self>(text)?.normalized())
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    /// Reduces `b` into `[0, 1)`.
    pub fn normalized(mut self) -> Self {
        self.b = self.b.rem_euclid(1.0);
        if self.b >= 1.0 {
            self.b = 0.0;
        }
        self
    }

    pub fn n(&self) -> usize {
        self.singular_points.len()
    }

    /// `k = (k_inf + n)/2`, if integral and nonnegative.
    pub fn charge(&self) -> Option<i64> {
        let twice = self.k_inf + self.n() as i64;
        (twice >= 0 && twice % 2 == 0).then_some(twice / 2)
    }

    fn checked_charge(&self) -> Result<i64, ConfigError> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(self.charge().expect("validated"))
        } else {
            Err(ConfigError::Invalid(violations))
        }
    }
}

/// Every violated condition on the boundary data; empty when valid.
pub fn validate(bd: &BoundaryData) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = bd.n();
    if bd.k_inf < 0 {
        out.push(Violation::NegativeCharge { k_inf: bd.k_inf });
    }
    if (bd.k_inf - n as i64).rem_euclid(2) != 0 {
        out.push(Violation::Parity { n, k_inf: bd.k_inf });
    }
    if bd.k_inf == 0 && !(bd.v > 0.0) {
        out.push(Violation::NonPositiveMass { v: bd.v });
    }
    for (field, value) in [("v", bd.v), ("b", bd.b)] {
        if !value.is_finite() {
            out.push(Violation::NotFinite { field: field.into() });
        }
    }
    let all = bd.singular_points.iter().chain(std::iter::once(&bd.center_q));
    for (i, p) in all.enumerate() {
        if !(p.x().is_finite() && p.y().is_finite() && p.t().is_finite()) {
            let field = if i < n { format!("points[{i}]") } else { "q".into() };
            out.push(Violation::NotFinite { field });
        }
    }
    for i in 0..n {
        for j in 0..i {
            if bd.singular_points[i].distance(&bd.singular_points[j]) == 0.0 {
                out.push(Violation::CoincidentPoints { i: j, j: i });
            }
        }
    }
    out
}

/// `4k − 4`, for `k ≥ 1`.
pub fn moduli_dimension(bd: &BoundaryData) -> Result<i64, ConfigError> {
    Ok(index_ledger(bd)?.total)
}

/// Index contributions from excision: the Euclidean charge-`k` piece, the
/// cokernel of the diagonal part on the punctured side and the off-diagonal
/// difference (zero for large mass).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexLedger {
    pub ind_y: i64,
    pub diag_coker_xstar: i64,
    pub offdiag_difference: i64,
    pub total: i64,
}

pub fn index_ledger(bd: &BoundaryData) -> Result<IndexLedger, ConfigError> {
    let k = bd.checked_charge()?;
    if k == 0 {
        return Err(ConfigError::ZeroCharge);
    }
    let (ind_y, diag_coker_xstar, offdiag_difference) = (4 * k, -4, 0);
    Ok(IndexLedger { ind_y, diag_coker_xstar, offdiag_difference, total: ind_y + diag_coker_xstar + offdiag_difference })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducibleSolution {
    /// Indices (ascending) of the points carrying charge `+1`.
    pub subset: Vec<usize>,
    /// `c_{v,b} + Σ_{subset} c_{p_i} − Σ_{rest} c_{p_i}`.
    pub abelian_model: AbelianMonopole,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducibleReport {
    pub solutions: Vec<ReducibleSolution>,
    /// Why the list is empty without enumeration, e.g. `"n<k"`.
    pub reason: Option<String>,
}

/// Residual of the doubled center equation `2 Σ_S p ≡ Σ_all p + k_inf q`:
/// `(|Δx|, |Δy|, |Δt mod 2π|)`.
pub fn doubled_residual(bd: &BoundaryData, subset: &[usize]) -> [f64; 3] {
    let kq = bd.k_inf as f64;
    let mut lhs = (Complex64::new(0.0, 0.0), 0.0);
    for &i in subset {
        let p = &bd.singular_points[i];
        lhs.0 += 2.0 * p.z();
        lhs.1 += 2.0 * p.t();
    }
    let mut rhs = (kq * bd.center_q.z(), kq * bd.center_q.t());
    for p in &bd.singular_points {
        rhs.0 += p.z();
        rhs.1 += p.t();
    }
    let dz = lhs.0 - rhs.0;
    [dz.re.abs(), dz.im.abs(), wrap_signed(lhs.1 - rhs.1).abs()]
}

/// All `k`-subsets of the singular points that satisfy the doubled center
/// equation within `tol` in each component; sorted lexicographically.
pub fn reducible_configs(bd: &BoundaryData, tol: f64, exec: Exec) -> Result<ReducibleReport, ConfigError> {
    let k = bd.checked_charge()? as usize;
    let n = bd.n();
    if n < k {
        return Ok(ReducibleReport { solutions: Vec::new(), reason: Some("n<k".into()) });
    }
    if binomial(n, k) > MAX_SUBSETS {
        return Err(ConfigError::TooManySubsets { n, k });
    }
    let subsets = combinations(n, k);
    let hits = exec.map(&subsets, |s| doubled_residual(bd, s).iter().all(|&d| d <= tol));
    let mut solutions = Vec::new();
    for (subset, hit) in subsets.into_iter().zip(hits) {
        if hit {
            let abelian_model = reducible_model(bd, &subset)?;
            solutions.push(ReducibleSolution { subset, abelian_model });
        }
    }
    Ok(ReducibleReport { solutions, reason: None })
}

fn reducible_model(bd: &BoundaryData, subset: &[usize]) -> Result<AbelianMonopole, AbelianError> {
    let terms = bd
        .singular_points
        .iter()
        .enumerate()
        .map(|(i, &p)| DiracTerm::periodic(p, if subset.contains(&i) { 1 } else { -1 }))
        .collect();
    AbelianMonopole::new(terms, bd.v, bd.b)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Abelian pieces of the background pair and the matched mass.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundPlan {
    pub k: i64,
    pub lambda: f64,
    /// Vacuum mass chosen so that the exterior Higgs field near `q` matches
    /// `λ − k/ρ`: `v = λ − k a₀ + Σ G_{p_i}(q)`.
    pub v: f64,
    /// `G_{p_i}(q)` for each singular point.
    pub green_terms: Vec<f64>,
    /// `c_{v,b}` with charge `2k` at `q` and `−1` at each `p_i`.
    pub exterior: AbelianMonopole,
    /// Euclidean Dirac monopole of charge `2k` and mass `λ` at `q`.
    pub euclidean: AbelianMonopole,
    pub annulus: (f64, f64),
    /// Smallest `|Φ|` of either piece on the annulus sample grid.
    pub min_abs_higgs: f64,
    /// Largest difference of the two Higgs fields on the annulus.
    pub max_piece_difference: f64,
    /// For `k = 1`: largest gap between the smooth charge-1 profile
    /// `λ coth(λρ) − 1/ρ` and the Dirac profile `λ − 1/ρ` on the annulus.
    pub smooth_core_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackgroundSummary {
    pub k: i64,
    pub lambda: f64,
    pub v: f64,
    pub green_terms: Vec<f64>,
    pub annulus: [f64; 2],
    pub min_abs_higgs: f64,
    pub max_piece_difference: f64,
    pub smooth_core_gap: Option<f64>,
}

impl BackgroundPlan {
    pub fn summary(&self) -> BackgroundSummary {
        BackgroundSummary {
            k: self.k,
            lambda: self.lambda,
            v: self.v,
            green_terms: self.green_terms.clone(),
            annulus: [self.annulus.0, self.annulus.1],
            min_abs_higgs: self.min_abs_higgs,
            max_piece_difference: self.max_piece_difference,
            smooth_core_gap: self.smooth_core_gap,
        }
    }
}

/// Higgs field of the spherically symmetric charge-1 Euclidean monopole of
/// mass `λ` (classical closed form, not derived here).
pub fn bps_profile(lambda: f64, rho: f64) -> f64 {
    lambda / (lambda * rho).tanh() - 1.0 / rho
}

/// Points on the patch annulus around `q`: five radii times a Fibonacci
/// sphere of 64 directions.
pub fn annulus_samples(q: &CirclePoint3) -> Vec<CirclePoint3> {
    let dirs = 64;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(5 * dirs);
    for i in 0..5 {
        let rho = PATCH_INNER + (PATCH_OUTER - PATCH_INNER) * i as f64 / 4.0;
        for j in 0..dirs {
            let z = 1.0 - (2.0 * j as f64 + 1.0) / dirs as f64;
            let s = (1.0 - z * z).sqrt();
            let phi = golden * j as f64;
            out.push(q.translated(Complex64::new(rho * s * phi.cos(), rho * s * phi.sin()), rho * z));
        }
    }
    out
}

/// Assembles the abelian pieces of the background pair with mass `lambda`.
pub fn background_recipe(bd: &BoundaryData, lambda: f64) -> Result<BackgroundPlan, ConfigError> {
    let k = bd.checked_charge()?;
    if !(lambda > 0.0) {
        return Err(ConfigError::MissingLambda);
    }
    let q = bd.center_q;
    for (index, p) in bd.singular_points.iter().enumerate() {
        let distance = p.distance(&q);
        if distance < PATCH_CLEARANCE {
            return Err(ConfigError::Clearance { index, distance });
        }
    }
    let green_terms = bd
        .singular_points
        .iter()
        .map(|p| green_eval(&q, p, 1e-13).map(|e| e.value))
        .collect::<Result<Vec<_>, _>>()?;
    let v = lambda - k as f64 * a_constant(0) + green_terms.iter().sum::<f64>();

    let mut terms = Vec::with_capacity(bd.n() + 1);
    if k > 0 {
        terms.push(DiracTerm::periodic(q, 2 * k));
    }
    terms.extend(bd.singular_points.iter().map(|&p| DiracTerm::periodic(p, -1)));
    let exterior = AbelianMonopole::new(terms, v, bd.b)?;
    let euclidean_terms = if k > 0 { vec![DiracTerm::euclidean(q, 2 * k)] } else { Vec::new() };
    let euclidean = AbelianMonopole::new(euclidean_terms, lambda, 0.0)?;

    let samples = annulus_samples(&q);
    let mut min_abs_higgs = f64::INFINITY;
    let mut max_piece_difference: f64 = 0.0;
    for p in &samples {
        let a = higgs(&exterior, p, 1e-10)?;
        let b = higgs(&euclidean, p, 1e-10)?;
        min_abs_higgs = min_abs_higgs.min(a.abs()).min(b.abs());
        max_piece_difference = max_piece_difference.max((a - b).abs());
    }
    let smooth_core_gap = (k == 1).then(|| {
        samples
            .iter()
            .map(|p| {
                let rho = p.distance(&q);
                (bps_profile(lambda, rho) - (lambda - 1.0 / rho)).abs()
            })
            .fold(0.0, f64::max)
    });
    let required = lambda / 2.0;
    if min_abs_higgs < required {
        return Err(ConfigError::LambdaTooSmall { min_abs_higgs, required });
    }
    Ok(BackgroundPlan {
        k,
        lambda,
        v,
        green_terms,
        exterior,
        euclidean,
        annulus: (PATCH_INNER, PATCH_OUTER),
        min_abs_higgs,
        max_piece_difference,
        smooth_core_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn bd(points: &[(f64, f64, f64)], k_inf: i64, v: f64, q: (f64, f64, f64)) -> BoundaryData {
        BoundaryData {
            singular_points: points.iter().map(|&(x, y, t)| CirclePoint3::new(x, y, t)).collect(),
            k_inf,
            v,
            b: 0.0,
            center_q: CirclePoint3::new(q.0, q.1, q.2),
            lambda: None,
            tau: None,
        }
    }

    #[test]
    fn validation_examples() {
        let ok = bd(&[(0.0, 0.0, 0.0), (3.0, 0.0, 0.0)], 0, 1.0, (0.0, 0.0, 0.0));
        assert!(validate(&ok).is_empty());
        assert_eq!(ok.charge(), Some(1));
        let parity = bd(&[(0.0, 0.0, 0.0)], 2, 1.0, (0.0, 0.0, 0.0));
        assert_eq!(validate(&parity), vec![Violation::Parity { n: 1, k_inf: 2 }]);
        let massless = bd(&[], 0, 0.0, (0.0, 0.0, 0.0));
        assert_eq!(validate(&massless), vec![Violation::NonPositiveMass { v: 0.0 }]);
        let dup = bd(&[(1.0, 0.0, 0.0), (1.0, 0.0, TAU)], 0, 1.0, (0.0, 0.0, 0.0));
        assert!(matches!(validate(&dup)[..], [Violation::CoincidentPoints { i: 0, j: 1 }]));
        assert!(matches!(moduli_dimension(&parity), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(moduli_dimension(&bd(&[], 4, 1.0, (0.0, 0.0, 0.0))).unwrap(), 4);
        assert_eq!(moduli_dimension(&bd(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)], 0, 1.0, (0.0, 0.0, 0.0))).unwrap(), 0);
        let three = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (2.0, 0.0, 0.0)];
        assert_eq!(moduli_dimension(&bd(&three, 1, 1.0, (0.0, 0.0, 0.0))).unwrap(), 4);
        let ledger = index_ledger(&bd(&[], 4, 1.0, (0.0, 0.0, 0.0))).unwrap();
        assert_eq!(ledger, IndexLedger { ind_y: 8, diag_coker_xstar: -4, offdiag_difference: 0, total: 4 });
        assert!(matches!(moduli_dimension(&bd(&[], 0, 1.0, (0.0, 0.0, 0.0))), Err(ConfigError::ZeroCharge)));
    }

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"points":[{"x":1.0,"y":0.0,"t":7.0}],"k_inf":1,"v":2.0,"b":1.25,"q":{"x":0,"y":0,"t":0},"lambda":10}"#;
        let data = BoundaryData::from_json(text).unwrap();
        assert!((data.b - 0.25).abs() < 1e-15);
        assert!((data.singular_points[0].t() - (7.0 - TAU)).abs() < 1e-15);
        assert_eq!(data.lambda, Some(10.0));
        let again = BoundaryData::from_json(&serde_json::to_string(&data).unwrap()).unwrap();
        assert_eq!(again, data);
        assert!(BoundaryData::from_json(r#"{"points":[]}"#).is_err());
    }

    #[test]
    fn combinations_are_complete_and_sorted() {
        for n in 0..8 {
            for k in 0..=n {
                let c = combinations(n, k);
                assert_eq!(c.len() as u128, binomial(n, k));
                assert!(c.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn reducible_examples() {
        let exec = Exec::default();
        let two = bd(&[(0.0, 0.0, 0.0), (1.0, 2.0, 0.5)], 0, 1.0, (0.0, 0.0, 0.0));
        assert!(reducible_configs(&two, REDUCIBLE_TOL, exec).unwrap().solutions.is_empty());

        let mid = bd(&[(0.0, 0.0, 0.0), (2.0, 0.0, 0.0)], 2, 1.0, (1.0, 0.0, 0.0));
        let rep = reducible_configs(&mid, REDUCIBLE_TOL, exec).unwrap();
        assert_eq!(rep.solutions.len(), 1);
        assert_eq!(rep.solutions[0].subset, vec![0, 1]);
        let charges: Vec<i64> = rep.solutions[0].abelian_model.terms().iter().map(|t| t.charge).collect();
        assert_eq!(charges, vec![1, 1]);

        let same = bd(&[(0.5, -1.0, 2.0)], 1, 1.0, (0.5, -1.0, 2.0));
        assert_eq!(reducible_configs(&same, REDUCIBLE_TOL, exec).unwrap().solutions.len(), 1);
        let generic = bd(&[(0.5, -1.0, 2.0)], 1, 1.0, (0.3, -1.0, 2.0));
        assert!(reducible_configs(&generic, REDUCIBLE_TOL, exec).unwrap().solutions.is_empty());

        let few = bd(&[(0.0, 0.0, 0.0)], 3, 1.0, (0.0, 0.0, 0.0));
        let rep = reducible_configs(&few, REDUCIBLE_TOL, exec).unwrap();
        assert!(rep.solutions.is_empty());
        assert_eq!(rep.reason.as_deref(), Some("n<k"));
    }

    #[test]
    fn circle_component_uses_the_doubled_equation() {
        // n = k = 1: 2t_p ≡ t_p + t_q forces t_p ≡ t_q, so a fibre offset of π fails.
        let off = bd(&[(0.0, 0.0, PI)], 1, 1.0, (0.0, 0.0, 0.0));
        assert!(reducible_configs(&off, REDUCIBLE_TOL, Exec::Sequential).unwrap().solutions.is_empty());
        // two points, k = 2: 2(t1 + t2) ≡ (t1 + t2) + 2 t_q, so t1 + t2 ≡ 2 t_q;
        // t_q = π and t1 + t2 = 0 satisfy it mod 2π.
        let wrap = bd(&[(1.0, 0.0, 0.5), (-1.0, 0.0, TAU - 0.5)], 2, 1.0, (0.0, 0.0, PI));
        assert_eq!(reducible_configs(&wrap, REDUCIBLE_TOL, Exec::Sequential).unwrap().solutions.len(), 1);
    }

    #[test]
    fn background_matches_the_mass() {
        let a0 = 0.621_916_587_382_901_5;
        let mut data = bd(&[], 2, 1.0, (0.0, 0.0, 0.0));
        let plan = background_recipe(&data, 10.0).unwrap();
        assert!((plan.v - (10.0 - a0)).abs() < 1e-12);
        assert!(plan.min_abs_higgs >= 5.0);
        assert!(plan.max_piece_difference <= 0.5, "{}", plan.max_piece_difference);
        assert!(plan.smooth_core_gap.unwrap() < 1e-3);

        data.singular_points = vec![CirclePoint3::new(5.0, 0.0, 0.0), CirclePoint3::new(0.0, -5.0, 1.0)];
        data.k_inf = 0;
        let plan = background_recipe(&data, 10.0).unwrap();
        for g in &plan.green_terms {
            assert!((g - 5f64.ln() / TAU).abs() < (-5f64).exp());
        }
        assert!((plan.v - (10.0 - a0 + plan.green_terms.iter().sum::<f64>())).abs() < 1e-12);
        assert!(plan.max_piece_difference <= 0.5);

        assert!(matches!(background_recipe(&data, 1.0), Err(ConfigError::LambdaTooSmall { .. })));
        data.singular_points[0] = CirclePoint3::new(1.5, 0.0, 0.0);
        assert!(matches!(background_recipe(&data, 10.0), Err(ConfigError::Clearance { index: 0, .. })));
    }

    #[test]
    fn smooth_core_profile() {
        // λ coth(λρ) − 1/ρ → 0 at the core and → λ − 1/ρ outside it.
        assert!(bps_profile(10.0, 1e-4).abs() < 1e-2);
        assert!((bps_profile(10.0, 2.0) - 9.5).abs() < 1e-12);
    }

    fn arb_data() -> impl Strategy<Value = BoundaryData> {
        (prop::collection::vec((-3i32..=3, -3i32..=3, 0i32..4), 0..7), 0i64..4, (-2i32..=2, -2i32..=2, 0i32..4)).prop_map(
            |(pts, k_inf, q)| {
                let mut points: Vec<(f64, f64, f64)> = Vec::new();
                for (x, y, t) in pts {
                    let p = (x as f64, y as f64, t as f64 * PI / 2.0);
                    if !points.contains(&p) {
                        points.push(p);
                    }
                }
                let k_inf = k_inf * 2 + (points.len() as i64 % 2);
                bd(&points, k_inf, 1.0, (q.0 as f64, q.1 as f64, q.2 as f64 * PI / 2.0))
            },
        )
    }

    proptest! {
        #[test]
        fn dimension_is_nonnegative_and_matches_ledger(data in arb_data()) {
            prop_assume!(data.charge() != Some(0));
            let dim = moduli_dimension(&data).unwrap();
            prop_assert!(dim >= 0);
            prop_assert_eq!(dim == 0, data.charge() == Some(1));
            prop_assert_eq!(index_ledger(&data).unwrap().total, dim);
        }

        #[test]
        fn parity_is_always_caught(n in 0usize..8, k_inf in -3i64..8, v in -1.0f64..1.0) {
            let points: Vec<(f64, f64, f64)> = (0..n).map(|i| (i as f64, 0.0, 0.0)).collect();
            let data = bd(&points, k_inf, v, (0.0, 0.0, 0.0));
            let bad = (k_inf - n as i64).rem_euclid(2) != 0 || k_inf < 0 || (k_inf == 0 && v <= 0.0);
            prop_assert_eq!(validate(&data).is_empty(), !bad);
        }

        #[test]
        fn reducibles_are_relabeling_invariant(data in arb_data(), seed in 0u64..1000) {
            let base = reducible_configs(&data, REDUCIBLE_TOL, Exec::Sequential).unwrap();
            let n = data.n();
            let mut perm: Vec<usize> = (0..n).collect();
            // deterministic shuffle
            for i in (1..n).rev() {
                perm.swap(i, (seed as usize * 31 + i * 17) % (i + 1));
            }
            let mut shuffled = data.clone();
            shuffled.singular_points = perm.iter().map(|&i| data.singular_points[i]).collect();
            let other = reducible_configs(&shuffled, REDUCIBLE_TOL, Exec::Sequential).unwrap();
            let mut mapped: Vec<Vec<usize>> = other
                .solutions
                .iter()
                .map(|s| {
                    let mut v: Vec<usize> = s.subset.iter().map(|&i| perm[i]).collect();
                    v.sort();
                    v
                })
                .collect();
            mapped.sort();
            let original: Vec<Vec<usize>> = base.solutions.iter().map(|s| s.subset.clone()).collect();
            prop_assert_eq!(mapped, original);
        }

        #[test]
        fn reducibles_are_translation_equivariant(data in arb_data(), dx in -3i32..=3, dy in -3i32..=3, dt in 0i32..4) {
            let shift = |p: &CirclePoint3| p.translated(Complex64::new(dx as f64, dy as f64), dt as f64 * PI / 2.0);
            let mut moved = data.clone();
            moved.singular_points = data.singular_points.iter().map(shift).collect();
            moved.center_q = shift(&data.center_q);
            let a: Vec<Vec<usize>> = reducible_configs(&data, REDUCIBLE_TOL, Exec::Sequential).unwrap().solutions.into_iter().map(|s| s.subset).collect();
            let b: Vec<Vec<usize>> = reducible_configs(&moved, REDUCIBLE_TOL, Exec::Sequential).unwrap().solutions.into_iter().map(|s| s.subset).collect();
            prop_assert_eq!(a, b);
        }
    }
}
