//! Abelian monopoles on `R² × S¹`: signed sums of periodic and Euclidean
//! Dirac monopoles twisted by a flat connection.
//!
//! Fields are real: `higgs` is `−iΦ` and connection coefficients are the
//! imaginary parts of `A`. A periodic term of charge `k` at `q` has
//! `higgs = k G_q`; its connection is written in the radial gauge about `q`,
//!
//! ```text
//! a = k [ −s/2π + 1/2 − (1/π) Σ_{m≥1} r K1(m r) sin(m s) ] dθ + b dt,
//! ```
//!
//! where `(r, θ)` are polar coordinates about `q` and `s = t − t_q` is taken
//! in `(−π, π]`. The jump of `a` across `s = π` is the gauge transformation
//! `e^{ikθ}` that makes the bundle nontrivial. The gauge is used only for
//! `r ≥ 2`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::exec::Exec;
use crate::geometry::{wrap_signed, CirclePoint3};
use crate::green::{green_eval, GreenError};
use crate::quad::Composite;
use crate::specfn::k0_k1;

/// Radial-gauge connections are only evaluated at this distance from the
/// center or further.
pub const RADIAL_GAUGE_MIN_R: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AbelianError {
    #[error("invalid monopole: {0}")]
    InvalidMonopole(String),
    #[error("point coincides with center {index}")]
    Singular { index: usize },
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("grid comes within {distance:e} of a center (needs {required:e})")]
    TooClose { distance: f64, required: f64 },
    #[error(transparent)]
    Green(#[from] GreenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DiracKind {
    Periodic,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracTerm {
    pub center: CirclePoint3,
    pub charge: i64,
    pub kind: DiracKind,
}

impl DiracTerm {
    pub fn periodic(center: CirclePoint3, charge: i64) -> Self {
        Self { center, charge, kind: DiracKind::Periodic }
    }

    pub fn euclidean(center: CirclePoint3, charge: i64) -> Self {
        Self { center, charge, kind: DiracKind::Euclidean }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbelianMonopole {
    terms: Vec<DiracTerm>,
    v: f64,
    b: f64,
}

impl AbelianMonopole {
    pub fn new(terms: Vec<DiracTerm>, v: f64, b: f64) -> Result<Self, AbelianError> {
        if !v.is_finite() {
            return Err(AbelianError::InvalidMonopole(format!("mass v = {v} is not finite")));
        }
        if !(0.0..1.0).contains(&b) {
            return Err(AbelianError::InvalidMonopole(format!("flat parameter b = {b} outside [0, 1)")));
        }
        for (i, term) in terms.iter().enumerate() {
            if term.charge == 0 {
                return Err(AbelianError::InvalidMonopole(format!("term {i} has zero charge")));
            }
            for (j, other) in terms[..i].iter().enumerate() {
                if term.center.distance(&other.center) < 1e-12 {
                    return Err(AbelianError::InvalidMonopole(format!("terms {j} and {i} share a center")));
                }
            }
        }
        Ok(Self { terms, v, b })
    }

    pub fn vacuum(v: f64, b: f64) -> Result<Self, AbelianError> {
        Self::new(Vec::new(), v, b)
    }

    /// Single periodic Dirac monopole.
    pub fn periodic(center: CirclePoint3, charge: i64, v: f64, b: f64) -> Result<Self, AbelianError> {
        Self::new(vec![DiracTerm::periodic(center, charge)], v, b)
    }

    pub fn terms(&self) -> &[DiracTerm] {
        &self.terms
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Total periodic charge: the degree of the line bundle on the torus at
    /// infinity.
    pub fn k_total(&self) -> i64 {
        self.periodic_terms().map(|t| t.charge).sum()
    }

    fn periodic_terms(&self) -> impl Iterator<Item = &DiracTerm> {
        self.terms.iter().filter(|t| t.kind == DiracKind::Periodic)
    }

    fn require_periodic(&self, what: &str) -> Result<(), AbelianError> {
        if self.terms.iter().any(|t| t.kind == DiracKind::Euclidean) {
            Err(AbelianError::Unsupported(format!("{what} for Euclidean terms")))
        } else {
            Ok(())
        }
    }

    /// Per-term tolerance so that the sum meets `tol`.
    fn term_tol(&self, tol: f64) -> f64 {
        let weight: i64 = self.periodic_terms().map(|t| t.charge.abs()).sum();
        tol / weight.max(1) as f64
    }
}

/// Which gauge a connection sample is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeChart {
    Exterior,
    NearSingularity(usize),
}

/// Higgs field and connection in cylindrical components `(r, θ, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub higgs: f64,
    pub a_theta: f64,
    pub a_t: f64,
    pub gauge_chart: GaugeChart,
}

/// `v + Σ k_j G_{q_j}(p)` for periodic terms and `−k_j/(2ρ_j)` for
/// Euclidean ones.
pub fn higgs(m: &AbelianMonopole, p: &CirclePoint3, tol: f64) -> Result<f64, AbelianError> {
    higgs_with_gradient(m, p, tol).map(|(h, _)| h)
}

/// Higgs field and its Cartesian gradient `(∂x, ∂y, ∂t)`.
pub fn higgs_with_gradient(m: &AbelianMonopole, p: &CirclePoint3, tol: f64) -> Result<(f64, [f64; 3]), AbelianError> {
    let term_tol = m.term_tol(tol);
    let mut value = m.v;
    let mut grad = [0.0; 3];
    for (index, term) in m.terms.iter().enumerate() {
        let k = term.charge as f64;
        let (g, dg) = match term.kind {
            DiracKind::Periodic => {
                let e = green_eval(p, &term.center, term_tol).map_err(|e| match e {
                    GreenError::Singular => AbelianError::Singular { index },
                    other => other.into(),
                })?;
                (e.value, e.grad)
            }
            DiracKind::Euclidean => {
                let (dz, dt) = p.offset_from(&term.center);
                let rho = (dz.norm_sqr() + dt * dt).sqrt();
                if rho == 0.0 {
                    return Err(AbelianError::Singular { index });
                }
                let c = 0.5 / rho.powi(3);
                (-0.5 / rho, [c * dz.re, c * dz.im, c * dt])
            }
        };
        value += k * g;
        for i in 0..3 {
            grad[i] += k * dg[i];
        }
    }
    Ok((value, grad))
}

/// `a_θ` of a charge-`k` periodic term at distance `r` and signed fibre
/// offset `s ∈ (−π, π]` from its center, truncated so that the error is at
/// most `tol`.
pub fn radial_gauge_a_theta(k: i64, r: f64, s: f64, tol: f64) -> Result<f64, AbelianError> {
    // slack for radii rebuilt from polar coordinates
    if r < RADIAL_GAUGE_MIN_R * (1.0 - 1e-12) {
        return Err(AbelianError::OutOfRegime(format!("radial gauge needs r >= 2, got r = {r}")));
    }
    let kf = k as f64;
    // Tail: (r/π) Σ_{m>M} K1(m r) ≤ (r/π) K1((M+1) r) / (1 − e^{−r}).
    let geom = 1.0 / (1.0 - (-r).exp());
    let target = tol / kf.abs().max(1.0);
    let mut m_max = 1usize;
    while r / PI * k0_k1((m_max + 1) as f64 * r).1 * geom > target {
        m_max += 1;
        if m_max > 10_000 {
            return Err(AbelianError::OutOfRegime("radial gauge series did not reach tolerance".into()));
        }
    }
    let mut series = 0.0;
    for mi in (1..=m_max).rev() {
        let mf = mi as f64;
        series += r * k0_k1(mf * r).1 * (mf * s).sin();
    }
    Ok(kf * (-s / TAU + 0.5 - series / PI))
}

/// Radial-gauge field sample of a single periodic term, in cylindrical
/// components about its center. Valid for `r ≥ 2`.
pub fn connection_radial_gauge(m: &AbelianMonopole, p: &CirclePoint3, tol: f64) -> Result<FieldSample, AbelianError> {
    let term = match m.terms.as_slice() {
        [t] if t.kind == DiracKind::Periodic => t,
        _ => return Err(AbelianError::Unsupported("radial gauge needs exactly one periodic term".into())),
    };
    let (dz, s) = p.offset_from(&term.center);
    let a_theta = radial_gauge_a_theta(term.charge, dz.norm(), s, 0.5 * tol)?;
    Ok(FieldSample { higgs: higgs(m, p, 0.5 * tol)?, a_theta, a_t: m.b, gauge_chart: GaugeChart::Exterior })
}

/// Cartesian connection `(a_x, a_y, a_t)` of a sum of periodic terms, each in
/// its own radial gauge. Every center must be at planar distance `≥ 2`.
pub fn connection_cartesian(m: &AbelianMonopole, p: &CirclePoint3, tol: f64) -> Result<[f64; 3], AbelianError> {
    m.require_periodic("connection")?;
    let term_tol = m.term_tol(tol);
    let mut a = [0.0, 0.0, m.b];
    for term in &m.terms {
        let (dz, s) = p.offset_from(&term.center);
        let r2 = dz.norm_sqr();
        let a_theta = radial_gauge_a_theta(term.charge, r2.sqrt(), s, term_tol)?;
        // dθ = (−dy_rel dx + dx_rel dy) / r²
        a[0] -= a_theta * dz.im / r2;
        a[1] += a_theta * dz.re / r2;
    }
    Ok(a)
}

/// Field sample in cylindrical components about the origin of the plane.
pub fn field_sample(m: &AbelianMonopole, p: &CirclePoint3, tol: f64) -> Result<FieldSample, AbelianError> {
    let h = higgs(m, p, 0.5 * tol)?;
    let a = connection_cartesian(m, p, 0.5 * tol)?;
    let th = p.z().arg();
    let r = p.z().norm();
    Ok(FieldSample {
        higgs: h,
        a_theta: r * (-a[0] * th.sin() + a[1] * th.cos()),
        a_t: a[2],
        gauge_chart: GaugeChart::Exterior,
    })
}

/// Holonomy around the fibre over `z`: `exp(−i Σ k_j θ_j(z) − 2πi b)` with
/// `θ_j` the principal argument of `z − z_j`.
pub fn holonomy(m: &AbelianMonopole, z: Complex64) -> Result<Complex64, AbelianError> {
    m.require_periodic("holonomy")?;
    let mut phase = -TAU * m.b;
    for (index, term) in m.terms.iter().enumerate() {
        let w = z - term.center.z();
        if w.norm() == 0.0 {
            return Err(AbelianError::Singular { index });
        }
        phase -= term.charge as f64 * w.arg();
    }
    Ok(Complex64::from_polar(1.0, phase))
}

/// Holonomy over `z` obtained by integrating the field instead of using
/// angles: starting from a reference fibre on the positive real axis beyond
/// all centers, the change of phase is the flux of `*dΦ` through the tube
/// swept by a path to `z`, `η = ∫_path ∫_0^{2π} (∂xφ dy − ∂yφ dx) dt`, and
/// the flat part contributes `∮ a_t dt`.
pub fn holonomy_by_integration(m: &AbelianMonopole, z: Complex64, tol: f64) -> Result<Complex64, AbelianError> {
    m.require_periodic("holonomy")?;
    let reach = m.terms.iter().map(|t| t.center.z().norm()).fold(0.0, f64::max);
    let z_ref = Complex64::new(reach + 2.0 + z.norm(), 0.0);
    let ref_phase: f64 = m.terms.iter().map(|t| t.charge as f64 * (z_ref - t.center.z()).arg()).sum();

    let path = choose_path(m, z_ref, z);
    let dmin = path_clearance(m, &path);
    if dmin == 0.0 {
        let index = m.terms.iter().position(|t| t.center.z() == z).unwrap_or(0);
        return Err(AbelianError::Singular { index });
    }
    let n_t = ((40.0 / dmin).ceil() as usize).clamp(64, 4096);
    let eval_tol = tol.min(1e-9);
    let mut eta = 0.0;
    for leg in path.windows(2) {
        let (a, b) = (leg[0], leg[1]);
        let d = b - a;
        let len = d.norm();
        let panels = ((len / dmin).ceil() as usize).max(4);
        let rule = Composite::new(0.0, 1.0, panels, 10);
        for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
            let zs = a + d * s;
            let mut flux = 0.0;
            for j in 0..n_t {
                let t = TAU * j as f64 / n_t as f64;
                let (_, g) = higgs_with_gradient(m, &CirclePoint3::from_complex(zs, t), eval_tol)?;
                flux += g[0] * d.im - g[1] * d.re;
            }
            eta += w * flux * TAU / n_t as f64;
        }
    }
    let flat = TAU * m.b;
    Ok(Complex64::from_polar(1.0, -(ref_phase + eta) - flat))
}

fn choose_path(m: &AbelianMonopole, from: Complex64, to: Complex64) -> Vec<Complex64> {
    let straight = vec![from, to];
    if path_clearance(m, &straight) >= 0.5 || m.terms.is_empty() {
        return straight;
    }
    let d = to - from;
    let perp = Complex64::new(-d.im, d.re) / d.norm();
    let mid = from + 0.5 * d;
    let scale = (d.norm() / 4.0).max(1.0);
    let mut best = (path_clearance(m, &straight), straight);
    for f in [1.0, -1.0, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0] {
        let cand = vec![from, mid + perp * (f * scale), to];
        let c = path_clearance(m, &cand);
        if c > best.0 {
            best = (c, cand);
        }
        if best.0 >= 0.5 {
            break;
        }
    }
    best.1
}

/// Smallest planar distance from a polyline to any center.
fn path_clearance(m: &AbelianMonopole, path: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for leg in path.windows(2) {
        let (a, b) = (leg[0], leg[1]);
        let d = b - a;
        for term in &m.terms {
            let c = term.center.z();
            let s = (((c - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
            best = best.min((a + d * s - c).norm());
        }
    }
    best
}

/// Winding number of the holonomy as `z` runs once around the circle of the
/// given radius (about the origin), from `samples` points.
pub fn holonomy_winding(m: &AbelianMonopole, radius: f64, samples: usize) -> Result<i64, AbelianError> {
    let samples = samples.max(8);
    let at = |j: usize| holonomy(m, Complex64::from_polar(radius, TAU * j as f64 / samples as f64));
    let mut total = 0.0;
    let mut prev = at(0)?;
    for j in 1..=samples {
        let cur = at(j % samples)?;
        total += (cur / prev).arg();
        prev = cur;
    }
    let turns = total / TAU;
    if (turns - turns.round()).abs() > 1e-6 {
        return Err(AbelianError::OutOfRegime(format!("sampling too coarse: {turns} turns")));
    }
    Ok(turns.round() as i64)
}

/// Two-term far-field model of a single periodic term at `q = (z₀, t₀)`,
/// valid for `|z| ≥ 2|z₀|` (polar coordinates about the origin):
///
/// ```text
/// higgs ≈ v + k [ (1/2π) ln r − (1/2π) Re(z₀/z) ]
/// a     ≈ k (−(t − t₀) + π)/2π dθ + (b − (k/2π) Im(z₀/z)) dt
/// ```
///
/// with `t − t₀` taken in `(−π, π]`. Corrections are `O(r⁻²)` plus
/// exponentially small terms.
pub fn translated_asymptotics(m: &AbelianMonopole, p: &CirclePoint3) -> Result<FieldSample, AbelianError> {
    let term = match m.terms.as_slice() {
        [t] if t.kind == DiracKind::Periodic => t,
        _ => return Err(AbelianError::Unsupported("asymptotic model needs exactly one periodic term".into())),
    };
    let z0 = term.center.z();
    let z = p.z();
    if z.norm() == 0.0 || z.norm() < 2.0 * z0.norm() {
        return Err(AbelianError::OutOfRegime(format!("|z| = {} < 2|z0| = {}", z.norm(), 2.0 * z0.norm())));
    }
    let k = term.charge as f64;
    let ratio = z0 / z;
    let s = wrap_signed(p.t() - term.center.t());
    Ok(FieldSample {
        higgs: m.v + k * (z.norm().ln() - ratio.re) / TAU,
        a_theta: k * (-s + PI) / TAU,
        a_t: m.b - k * ratio.im / TAU,
        gauge_chart: GaugeChart::Exterior,
    })
}

/// Pull-back of a monopole to the circle of length `2πλ`: at rescaled
/// coordinates `y`, `higgs_λ(y) = λ⁻¹ higgs(y/λ)` and
/// `a_λ(y) = λ⁻¹ a(y/λ)`. This preserves the Bogomolny equation.
#[derive(Debug, Clone)]
pub struct Rescaled<'a> {
    monopole: &'a AbelianMonopole,
    lambda: f64,
}

pub fn rescale(m: &AbelianMonopole, lambda: f64) -> Result<Rescaled<'_>, AbelianError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(AbelianError::InvalidMonopole(format!("scale {lambda} must be positive")));
    }
    Ok(Rescaled { monopole: m, lambda })
}

impl Rescaled<'_> {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn base_point(&self, y: [f64; 3]) -> CirclePoint3 {
        CirclePoint3::new(y[0] / self.lambda, y[1] / self.lambda, y[2] / self.lambda)
    }

    pub fn higgs(&self, y: [f64; 3], tol: f64) -> Result<f64, AbelianError> {
        Ok(higgs(self.monopole, &self.base_point(y), tol * self.lambda)? / self.lambda)
    }

    pub fn connection(&self, y: [f64; 3], tol: f64) -> Result<[f64; 3], AbelianError> {
        let a = connection_cartesian(self.monopole, &self.base_point(y), tol * self.lambda)?;
        Ok(a.map(|c| c / self.lambda))
    }
}

/// Axis-aligned region in cylindrical coordinates `(r, θ, t)` about the
/// origin of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylBox {
    pub r: [f64; 2],
    pub theta: [f64; 2],
    pub t: [f64; 2],
}

struct Axis {
    start: f64,
    step: f64,
    n: usize,
}

impl Axis {
    fn new(range: [f64; 2], h: f64) -> Self {
        let len = range[1] - range[0];
        let n = ((len / h).round() as usize).max(2);
        Self { start: range[0], step: len / n as f64, n: n + 1 }
    }

    fn at(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }
}

/// Largest pointwise violation of `da = *dφ` over the interior nodes of the
/// box, using second-order central differences in `(r, θ, t)`. The three
/// equations are compared in an orthonormal frame.
pub fn bogomolny_residual(m: &AbelianMonopole, bx: &CylBox, h: f64, tol: f64, exec: Exec) -> Result<f64, AbelianError> {
    m.require_periodic("Bogomolny residual")?;
    if !(h > 0.0) || bx.r[0] <= 0.0 || bx.r[1] <= bx.r[0] || bx.theta[1] <= bx.theta[0] || bx.t[1] <= bx.t[0] {
        return Err(AbelianError::OutOfRegime("degenerate box or mesh".into()));
    }
    let (ar, ath, at) = (Axis::new(bx.r, h), Axis::new(bx.theta, h), Axis::new(bx.t, h));
    let idx = |i: usize, j: usize, k: usize| (i * ath.n + j) * at.n + k;
    let total = ar.n * ath.n * at.n;
    let point = |n: usize| {
        let (i, rest) = (n / (ath.n * at.n), n % (ath.n * at.n));
        let (j, k) = (rest / at.n, rest % at.n);
        let (r, th, t) = (ar.at(i), ath.at(j), at.at(k));
        (r, th, CirclePoint3::new(r * th.cos(), r * th.sin(), t))
    };

    let required = 4.0 * h.max(ar.step).max(at.step).max(ath.step * bx.r[1]);
    let clearance = exec.map_range(total, |n| {
        let (_, _, p) = point(n);
        m.terms.iter().map(|term| p.distance(&term.center)).fold(f64::INFINITY, f64::min)
    });
    let closest = clearance.into_iter().fold(f64::INFINITY, f64::min);
    if closest < required {
        return Err(AbelianError::TooClose { distance: closest, required });
    }
    for term in &m.terms {
        let cut = wrap_signed(term.center.t() + PI);
        let crosses = (0..at.n).any(|k| wrap_signed(at.at(k) - cut).abs() < 2.0 * at.step);
        if crosses {
            return Err(AbelianError::OutOfRegime("box crosses the gauge cut t = t_q + π".into()));
        }
    }

    // (φ, a_r, a_θ, a_t) at every node
    let fields = exec.map_range(total, |n| -> Result<[f64; 4], AbelianError> {
        let (_, th, p) = point(n);
        let r = p.z().norm();
        let phi = higgs(m, &p, tol)?;
        let a = connection_cartesian(m, &p, tol)?;
        let (s, c) = th.sin_cos();
        Ok([phi, a[0] * c + a[1] * s, r * (-a[0] * s + a[1] * c), a[2]])
    });
    let fields: Vec<[f64; 4]> = fields.into_iter().collect::<Result<_, _>>()?;

    let interior = (ar.n - 2) * (ath.n - 2) * (at.n - 2);
    let worst = exec.max_range(interior, |n| {
        let (i, rest) = (n / ((ath.n - 2) * (at.n - 2)) + 1, n % ((ath.n - 2) * (at.n - 2)));
        let (j, k) = (rest / (at.n - 2) + 1, rest % (at.n - 2) + 1);
        let r = ar.at(i);
        let d = |c: usize, axis: usize| -> f64 {
            let (plus, minus, step) = match axis {
                0 => (idx(i + 1, j, k), idx(i - 1, j, k), ar.step),
                1 => (idx(i, j + 1, k), idx(i, j - 1, k), ath.step),
                _ => (idx(i, j, k + 1), idx(i, j, k - 1), at.step),
            };
            (fields[plus][c] - fields[minus][c]) / (2.0 * step)
        };
        let e1 = (d(2, 0) - d(1, 1)) / r - d(0, 2);
        let e2 = (d(3, 1) - d(2, 2)) / r - d(0, 0);
        let e3 = (d(1, 2) - d(3, 0)) - d(0, 1) / r;
        (e1 * e1 + e2 * e2 + e3 * e3).sqrt()
    });
    Ok(worst.max(0.0))
}
