//! Separated-variable model problems near a singular point (half-cylinder)
//! and near infinity (exterior of a disc), plus the weighted Poincaré
//! inequality and the identity satisfied by the weight `ω = √(1 + r²)`.
//!
//! Sign convention: `Δ` is the geometer's Laplacian `d*d`, nonnegative, so
//! on radial functions of the plane `Δu = −(u'' + u'/r)`.
//!
//! The constant-coefficient problems use exponentially fitted three-point
//! schemes: for `−u'' + p u' + q u = f` with characteristic roots `r1, r2`
//! the stencil `N (z1 z2, −(z1 + z2), 1)`, `z_j = e^{r_j h}`,
//! `N = −2/(h²(1 + z1 z2))`, reproduces both homogeneous exponentials
//! exactly and is second-order accurate for the source.

use std::f64::consts::LN_10;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::quad::Composite;
use crate::specfn::k0_k1;

/// `|δ − γ|` below this makes the discrete problem numerically singular.
pub const EXCEPTIONAL_GUARD: f64 = 1e-9;
const MAX_NODES: usize = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("weight delta = {delta} is within {EXCEPTIONAL_GUARD:e} of the exceptional weight {gamma}")]
    ExceptionalWeight { delta: f64, gamma: f64 },
    #[error("mesh {mesh} does not resolve the decay rate {rate}")]
    UnderResolved { mesh: f64, rate: f64 },
    #[error("weight delta = {0} outside the admissible range (-1, 0)")]
    WeightOutOfRange(f64),
    #[error("coercivity constant must be positive, got {0}")]
    NonPositiveCoercivity(f64),
    #[error("invalid problem: {0}")]
    Invalid(String),
}

/// Source terms available to the model solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Zero,
    /// `e^{−rate·x}`
    Exponential { rate: f64 },
    /// `amplitude · exp(−1/(1 − y²))`, `y = (x − center)/width`, zero for `|y| ≥ 1`.
    Bump { center: f64, width: f64, amplitude: f64 },
    /// `x^{−power}`
    Power { power: f64 },
    Sum(Vec<Source>),
}

impl Source {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Source::Zero => 0.0,
            Source::Exponential { rate } => (-rate * x).exp(),
            Source::Bump { center, width, amplitude } => amplitude * bump((x - center) / width),
            Source::Power { power } => x.powf(-power),
            Source::Sum(parts) => parts.iter().map(|s| s.eval(x)).sum(),
        }
    }

    /// Right end of the support, if bounded.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Source::Zero => Some(f64::NEG_INFINITY),
            Source::Bump { center, width, .. } => Some(center + width.abs()),
            Source::Sum(parts) => parts.iter().map(Source::support_end).try_fold(f64::NEG_INFINITY, |a, b| b.map(|b| a.max(b))),
            _ => None,
        }
    }
}

fn bump(y: f64) -> f64 {
    if y.abs() < 1.0 {
        (-1.0 / (1.0 - y * y)).exp()
    } else {
        0.0
    }
}

/// Smooth transition: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// Solves a tridiagonal system; `sub[0]` and `sup[n-1]` are ignored.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Least-squares slope of `y` against `x`.
fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `γ⁺(λ) = −1/2 + √(1/4 + λ)` and `γ⁻(λ) = −1/2 − √(1/4 + λ)`.
pub fn indicial_roots(lambda: f64) -> (f64, f64) {
    let root = (0.25 + lambda).sqrt();
    (-0.5 + root, -0.5 - root)
}

/// `−ü + u̇ + λu = f` on `τ ≥ T`, `u(T) = φ`, decaying as `τ → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderProblem {
    pub lambda: f64,
    #[serde(rename = "T", default)]
    pub t0: f64,
    pub phi: f64,
    pub delta: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderSolution {
    pub tau: Vec<f64>,
    pub u: Vec<f64>,
    pub gamma_plus: f64,
    /// Minus the log-slope of `|u|` over the last decade of decay.
    pub decay_rate: f64,
    /// Largest residual of the plain central-difference operator.
    pub residual: f64,
}

impl CylinderSolution {
    /// `e^{δτ} u` is square integrable iff the solution decays faster than
    /// `e^{−δτ}`.
    pub fn in_weighted_space(&self, delta: f64) -> bool {
        self.decay_rate > delta
    }
}

/// Solves the half-cylinder problem on `[T, T + 20/γ⁺]` (`T + 20` when
/// `λ = 0`) with the discrete decaying-branch condition at the far end.
pub fn cylinder_solve(p: &CylinderProblem, mesh: f64) -> Result<CylinderSolution, ModelError> {
    if !(p.lambda >= 0.0) || !(mesh > 0.0) {
        return Err(ModelError::Invalid("need lambda >= 0 and mesh > 0".into()));
    }
    let (gp, gm) = indicial_roots(p.lambda);
    for gamma in [gp, gm] {
        if (p.delta - gamma).abs() < EXCEPTIONAL_GUARD {
            return Err(ModelError::ExceptionalWeight { delta: p.delta, gamma });
        }
    }
    if mesh * (1.0 + gp) > 0.5 {
        return Err(ModelError::UnderResolved { mesh, rate: gp });
    }
    let length = if gp > 0.0 { 20.0 / gp } else { 20.0 };
    let n = (length / mesh).ceil() as usize;
    if n > MAX_NODES {
        return Err(ModelError::UnderResolved { mesh, rate: gp });
    }
    let h = length / n as f64;
    let tau: Vec<f64> = (0..=n).map(|i| p.t0 + h * i as f64).collect();
    let f: Vec<f64> = tau.iter().map(|&t| p.source.eval(t)).collect();

    // characteristic roots of −r² + r + λ = 0: −γ⁺ (decaying) and 1 + γ⁺
    let z1 = (-gp * h).exp();
    let z2 = ((1.0 + gp) * h).exp();
    let norm = -2.0 / (h * h * (1.0 + z1 * z2));
    let (a, b, c) = (norm * z1 * z2, -norm * (z1 + z2), norm);

    // unknowns u_1..u_n; ghost u_{n+1} = z1 u_n
    let mut sub = vec![a; n];
    let mut diag = vec![b; n];
    let sup = vec![c; n];
    let mut rhs: Vec<f64> = f[1..].to_vec();
    sub[0] = 0.0;
    rhs[0] -= a * p.phi;
    diag[n - 1] = b + c * z1;
    let sol = thomas(&sub, &diag, &sup, &rhs);
    let mut u = Vec::with_capacity(n + 1);
    u.push(p.phi);
    u.extend(sol);

    let mut residual: f64 = 0.0;
    for i in 1..n {
        let r = -(u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h) + (u[i + 1] - u[i - 1]) / (2.0 * h) + p.lambda * u[i] - f[i];
        residual = residual.max(r.abs());
    }

    let window = if gp > 0.0 { LN_10 / gp } else { 0.1 * length };
    let start = tau.partition_point(|&t| t < tau[n] - window);
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        (start..=n).filter(|&i| u[i] != 0.0).map(|i| (tau[i], u[i].abs().ln())).unzip();
    let decay_rate = if xs.len() >= 2 { -fit_slope(&xs, &ys) } else { f64::INFINITY };

    Ok(CylinderSolution { tau, u, gamma_plus: gp, decay_rate, residual })
}

/// Sector of an exterior mode problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sector {
    /// Circle-invariant diagonal part, planar angular mode `mode`.
    DiagonalInvariant { mode: u32 },
    /// Diagonal part with circle Fourier mode `m ≠ 0`, mass `μ = |m|`.
    Oscillatory { m: i64 },
    /// Off-diagonal part with `|[Φ, u]|² ≥ c |u|²`, mass `μ = √c`.
    OffDiagonal { c: f64 },
}

/// Model problem on `r ≥ R` with Dirichlet datum `φ` at `r = R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorModeProblem {
    pub sector: Sector,
    #[serde(rename = "R")]
    pub r_in: f64,
    pub delta: f64,
    pub phi: f64,
    pub source: Source,
}

/// Behaviour of the computed solution beyond the truncation radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FarBranch {
    /// Tends to a constant (admitted for the invariant mode 0).
    Constant,
    /// Decays like `r^{−n}`.
    InversePower(u32),
    /// Contains a `log r` or `r^{n}` component.
    Growing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalSolution {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub branch: FarBranch,
    /// Coefficient of the excluded growing branch measured at the far end.
    pub growth_coefficient: f64,
    /// Largest residual of the plain central-difference operator in `ln r`.
    pub residual: f64,
}

/// `∫_a^∞ x^{1−n} f(x) dx` by Gauss–Legendre after `x = a/y`.
fn tail_moment(source: &Source, a: f64, n: u32) -> f64 {
    if let Source::Power { power } = source {
        let e = power + n as f64 - 2.0;
        if e > 0.0 {
            return a.powf(-e) / e;
        }
    }
    let rule = Composite::new(0.0, 1.0, 40, 10);
    rule.integrate(|y| {
        let x = a / y;
        source.eval(x) * x.powi(1 - n as i32) * a / (y * y)
    })
}

/// Planar mode problem `−(1/r)(r u')' + n²u/r² = f` on `[R, 10R]` (a
/// Poisson problem for the geometer's Laplacian), in the variable
/// `s = ln r`, where it reads `−U'' + n²U = r² f`. The far end carries the
/// exact condition `U' + nU = r^n ∫_r^∞ x^{1−n} f dx` that excludes the
/// `log r` and `r^n` branches.
pub fn exterior_diagonal_solve(p: &ExteriorModeProblem, mesh: f64) -> Result<DiagonalSolution, ModelError> {
    let n_mode = match p.sector {
        Sector::DiagonalInvariant { mode } => mode,
        _ => return Err(ModelError::Invalid("exterior_diagonal_solve needs the diagonal invariant sector".into())),
    };
    if !(p.delta > -1.0 && p.delta < 0.0) {
        return Err(ModelError::WeightOutOfRange(p.delta));
    }
    if !(p.r_in > 0.0) || !(mesh > 0.0) {
        return Err(ModelError::Invalid("need R > 0 and mesh > 0".into()));
    }
    let nf = n_mode as f64;
    if mesh * nf > 0.5 {
        return Err(ModelError::UnderResolved { mesh, rate: nf });
    }
    let length = 10f64.ln();
    let cells = (length / mesh).ceil() as usize;
    if cells > MAX_NODES {
        return Err(ModelError::UnderResolved { mesh, rate: nf });
    }
    let h = length / cells as f64;
    let s0 = p.r_in.ln();
    let r: Vec<f64> = (0..=cells).map(|i| (s0 + h * i as f64).exp()).collect();
    let rhs_full: Vec<f64> = r.iter().map(|&x| x * x * p.source.eval(x)).collect();

    // −U'' + n²U: fitted stencil with z = e^{∓nh}, z1 z2 = 1
    let ch = (nf * h).cosh();
    let inv = 1.0 / (h * h);
    let (a, b, c) = (-inv, 2.0 * ch * inv, -inv);
    // fitted first derivative (U_{N+1} − U_{N−1}) / (2 σ), σ = sinh(nh)/n
    let sigma = if n_mode == 0 { h } else { (nf * h).sinh() / nf };
    let r_end = r[cells];
    let w_end = r_end.powi(n_mode as i32) * tail_moment(&p.source, r_end, n_mode);

    let m = cells;
    let mut sub = vec![a; m];
    let mut diag = vec![b; m];
    let mut sup = vec![c; m];
    let mut rhs: Vec<f64> = rhs_full[1..].to_vec();
    sub[0] = 0.0;
    rhs[0] -= a * p.phi;
    // ghost: U_{N+1} = U_{N−1} + 2σ (W − n U_N)
    sub[m - 1] = a + c;
    diag[m - 1] = b - c * 2.0 * sigma * nf;
    rhs[m - 1] -= c * 2.0 * sigma * w_end;
    sup[m - 1] = 0.0;
    let sol = thomas(&sub, &diag, &sup, &rhs);
    let mut u = Vec::with_capacity(cells + 1);
    u.push(p.phi);
    u.extend(sol);

    let mut residual: f64 = 0.0;
    for i in 1..cells {
        let res = -(u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv + nf * nf * u[i] - rhs_full[i];
        residual = residual.max(res.abs());
    }

    // U' + nU − W vanishes for the admitted branches and equals 2n A r^n
    // (or the log coefficient when n = 0) otherwise.
    let k = cells;
    let du = (3.0 * u[k] - 4.0 * u[k - 1] + u[k - 2]) / (2.0 * h);
    let growth_coefficient = du + nf * u[k] - w_end;
    let scale = u.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1e-300);
    let branch = if growth_coefficient.abs() > 1e-3 * scale.max(w_end.abs()) {
        FarBranch::Growing
    } else if n_mode == 0 {
        FarBranch::Constant
    } else {
        FarBranch::InversePower(n_mode)
    };
    Ok(DiagonalSolution { r, u, branch, growth_coefficient, residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoerciveSolution {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub mu: f64,
    /// `(∫ |u'|² + μ²u²) / ∫ f²` with the planar measure `r dr`; `None` for `f = 0`.
    pub energy_ratio: Option<f64>,
    pub l2_u: f64,
    pub l2_f: f64,
    /// Minus the log-slope of `√r |u|` beyond the support of the source.
    pub decay_rate: f64,
    pub residual: f64,
}

/// `−(1/r)(r u')' + μ²u = f` on `[R, r_max]`, `u(R) = φ`, with the exact
/// Robin condition `u' = −μ K1(μr)/K0(μr) u` at `r_max`; `μ² = c` in the
/// off-diagonal sector and `μ = |m|` for circle mode `m`.
pub fn exterior_coercive_solve(p: &ExteriorModeProblem, mesh: f64) -> Result<CoerciveSolution, ModelError> {
    let mu = match p.sector {
        Sector::OffDiagonal { c } if c > 0.0 => c.sqrt(),
        Sector::OffDiagonal { c } => return Err(ModelError::NonPositiveCoercivity(c)),
        Sector::Oscillatory { m } if m != 0 => m.unsigned_abs() as f64,
        Sector::Oscillatory { .. } => return Err(ModelError::NonPositiveCoercivity(0.0)),
        Sector::DiagonalInvariant { .. } => {
            return Err(ModelError::Invalid("exterior_coercive_solve needs a coercive sector".into()))
        }
    };
    if !(p.r_in > 0.0) || !(mesh > 0.0) {
        return Err(ModelError::Invalid("need R > 0 and mesh > 0".into()));
    }
    if mesh * mu > 0.5 {
        return Err(ModelError::UnderResolved { mesh, rate: mu });
    }
    let support = p.source.support_end().unwrap_or(p.r_in);
    let r_max = (10.0 * p.r_in).max(support + 20.0 / mu).max(p.r_in + 20.0 / mu);
    let cells = ((r_max - p.r_in) / mesh).ceil() as usize;
    if cells > MAX_NODES {
        return Err(ModelError::UnderResolved { mesh, rate: mu });
    }
    let h = (r_max - p.r_in) / cells as f64;
    let r: Vec<f64> = (0..=cells).map(|i| p.r_in + h * i as f64).collect();
    let f: Vec<f64> = r.iter().map(|&x| p.source.eval(x)).collect();
    let inv = 1.0 / (h * h);
    let m = cells;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for row in 0..m {
        let i = row + 1;
        let (rl, rr) = (r[i] - 0.5 * h, r[i] + 0.5 * h);
        sub[row] = -rl * inv / r[i];
        sup[row] = -rr * inv / r[i];
        diag[row] = (rl + rr) * inv / r[i] + mu * mu;
        rhs[row] = f[i];
    }
    rhs[0] -= sub[0] * p.phi;
    sub[0] = 0.0;
    // ghost u_{N+1} = u_{N−1} − 2hκ u_N
    let (k0, k1) = k0_k1(mu * r_max);
    let kappa = if k0 > 0.0 { mu * k1 / k0 } else { mu };
    sub[m - 1] += sup[m - 1];
    diag[m - 1] -= sup[m - 1] * 2.0 * h * kappa;
    sup[m - 1] = 0.0;
    let sol = thomas(&sub, &diag, &sup, &rhs);
    let mut u = Vec::with_capacity(cells + 1);
    u.push(p.phi);
    u.extend(sol);

    let mut residual: f64 = 0.0;
    for i in 1..cells {
        let lap = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv + (u[i + 1] - u[i - 1]) / (2.0 * h * r[i]);
        residual = residual.max((-lap + mu * mu * u[i] - f[i]).abs());
    }

    // trapezoid with r dr; derivative by central differences (one-sided at ends)
    let du = |i: usize| {
        if i == 0 {
            (u[1] - u[0]) / h
        } else if i == cells {
            -kappa * u[cells]
        } else {
            (u[i + 1] - u[i - 1]) / (2.0 * h)
        }
    };
    let trap = |g: &dyn Fn(usize) -> f64| {
        (0..=cells).map(|i| g(i) * r[i] * if i == 0 || i == cells { 0.5 } else { 1.0 }).sum::<f64>() * h
    };
    let l2_u = trap(&|i| u[i] * u[i]).sqrt();
    let l2_f = trap(&|i| f[i] * f[i]).sqrt();
    let energy = trap(&|i| du(i).powi(2) + mu * mu * u[i] * u[i]);
    let energy_ratio = if l2_f > 0.0 { Some(energy / (l2_f * l2_f)) } else { None };

    let lo = support.max(p.r_in) + 2.0;
    let hi = r_max - 2.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..=cells)
        .filter(|&i| r[i] >= lo && r[i] <= hi && u[i] != 0.0)
        .map(|i| (r[i], (r[i].sqrt() * u[i].abs()).ln()))
        .unzip();
    let decay_rate = if xs.len() >= 2 { -fit_slope(&xs, &ys) } else { f64::NAN };

    Ok(CoerciveSolution { r, u, mu, energy_ratio, l2_u, l2_f, decay_rate, residual })
}

/// `C = √(2 + R²)/R`.
pub fn poincare_constant(r_in: f64) -> f64 {
    (2.0 + r_in * r_in).sqrt() / r_in
}

/// Radial trial profile on `r ≥ R`, described in `s = ln r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// `(center, width, amplitude)` of smooth bumps in `s`.
    pub bumps: Vec<(f64, f64, f64)>,
    /// `amplitude · (1 − step((s − s_R − start)/width))`: nonzero at `r = R`.
    pub plateau: Option<(f64, f64, f64)>,
    /// `ω^{power}` times a smooth window on `[s_R + rise, s_R + rise + length]`
    /// with transition widths `rise`, `fall`.
    pub power: Option<PowerPiece>,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPiece {
    pub power: f64,
    pub rise: f64,
    pub length: f64,
    pub fall: f64,
}

impl Profile {
    fn value(&self, r_in: f64, s: f64) -> f64 {
        let s_r = r_in.ln();
        let mut v = 0.0;
        for &(c, w, a) in &self.bumps {
            v += a * bump((s - c) / w);
        }
        if let Some((start, width, a)) = self.plateau {
            v += a * (1.0 - smooth_step((s - s_r - start) / width));
        }
        if let Some(pp) = self.power {
            let r = s.exp();
            let omega = (1.0 + r * r).sqrt();
            let rise = if pp.rise > 0.0 { smooth_step((s - s_r) / pp.rise) } else { 1.0 };
            let fall = 1.0 - smooth_step((s - s_r - pp.rise - pp.length) / pp.fall);
            v += omega.powf(pp.power) * rise * fall;
        }
        self.scale * v
    }

    fn support_end(&self, r_in: f64) -> f64 {
        let s_r = r_in.ln();
        let mut end = s_r;
        for &(c, w, _) in &self.bumps {
            end = end.max(c + w);
        }
        if let Some((start, width, _)) = self.plateau {
            end = end.max(s_r + start + width);
        }
        if let Some(pp) = self.power {
            end = end.max(s_r + pp.rise + pp.length + pp.fall);
        }
        end
    }

    /// Whether `u(R) = 0`, as required for positive weights.
    pub fn vanishes_at_boundary(&self, r_in: f64) -> bool {
        self.value(r_in, r_in.ln()).abs() < 1e-14
    }
}

/// `‖ω^{−(δ+1)} u‖ / ((C/|δ|) ‖ω^{−δ} u'‖)` with `C = √(2+R²)/R`, in
/// `L²(r dr)` on `[R, ∞)`.
pub fn poincare_ratio(r_in: f64, delta: f64, profile: &Profile) -> f64 {
    let s_r = r_in.ln();
    let s_end = profile.support_end(r_in);
    let panels = (((s_end - s_r) / 0.02).ceil() as usize).max(8);
    let rule = Composite::new(s_r, s_end, panels, 8);
    let dh = 1e-6;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
        let r = s.exp();
        let omega2 = 1.0 + r * r;
        let u = profile.value(r_in, s);
        let us = (profile.value(r_in, s + dh) - profile.value(r_in, s - dh)) / (2.0 * dh);
        // r dr = r² ds and u' = u_s / r
        lhs += w * omega2.powf(-(delta + 1.0)) * u * u * r * r;
        rhs += w * omega2.powf(-delta) * us * us;
    }
    lhs.sqrt() / (poincare_constant(r_in) / delta.abs() * rhs.sqrt())
}

/// Random admissible profile; vanishes at `R` when `delta > 0`.
pub fn random_profile(rng: &mut ChaCha8Rng, r_in: f64, delta: f64) -> Profile {
    let s_r = r_in.ln();
    let count = rng.gen_range(1..=4);
    let bumps = (0..count)
        .map(|_| {
            let w = rng.gen_range(0.1..1.5);
            let lo = if delta > 0.0 { s_r + w } else { s_r - 0.5 * w };
            (rng.gen_range(lo..lo + 4.0), w, rng.gen_range(-1.0..1.0))
        })
        .collect();
    let plateau = if delta < 0.0 && rng.gen_bool(0.5) {
        Some((rng.gen_range(0.0..2.0), rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0)))
    } else {
        None
    };
    let power = if rng.gen_bool(0.3) {
        Some(PowerPiece {
            power: delta + rng.gen_range(-0.5..0.5),
            rise: if delta > 0.0 { rng.gen_range(0.1..1.0) } else { 0.0 },
            length: rng.gen_range(0.5..8.0),
            fall: rng.gen_range(0.1..2.0),
        })
    } else {
        None
    };
    Profile { bumps, plateau, power, scale: 1.0 }
}

/// `ω^δ` on a window of about `2/δ²` e-folds in `r` with a slow cutoff,
/// close to extremal for the inequality; rises from zero at `R` when
/// `delta > 0`.
pub fn near_extremal_profile(delta: f64) -> Profile {
    let length = (2.0 / (delta * delta)).min(90.0);
    let fall = (0.5 * length).clamp(2.0, 40.0);
    Profile {
        bumps: Vec::new(),
        plateau: None,
        power: Some(PowerPiece { power: delta, rise: if delta > 0.0 { fall } else { 0.0 }, length, fall }),
        scale: 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareReport {
    pub r_in: f64,
    pub delta: f64,
    pub constant: f64,
    pub trials: usize,
    /// Largest ratio over all trials, including the near-extremal profile.
    pub max_ratio: f64,
    pub near_extremal_ratio: f64,
}

/// Evaluates the weighted Poincaré ratio on `trials` random profiles (seeded)
/// plus one near-extremal profile.
pub fn poincare_constant_check(r_in: f64, delta: f64, trials: usize, seed: u64, exec: Exec) -> Result<PoincareReport, ModelError> {
    if delta == 0.0 || !(r_in > 0.0) {
        return Err(ModelError::Invalid("need delta != 0 and R > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profiles: Vec<Profile> = (0..trials).map(|_| random_profile(&mut rng, r_in, delta)).collect();
    let ratios = exec.map(&profiles, |p| poincare_ratio(r_in, delta, p));
    let near = poincare_ratio(r_in, delta, &near_extremal_profile(delta));
    let max_ratio = ratios.into_iter().fold(near, f64::max);
    Ok(PoincareReport { r_in, delta, constant: poincare_constant(r_in), trials: trials + 1, max_ratio, near_extremal_ratio: near })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightIdentityReport {
    pub max_residual: f64,
    pub max_gradient: f64,
}

/// For `ω = √(1 + r²)` on the plane: `|−ωΔω + |∇ω|² − 2|` and `|∇ω|` from
/// the closed forms `|∇ω| = r/ω`, `Δω = −(ω⁻³ + ω⁻¹)`.
pub fn weight_identity_check(samples: &[f64]) -> WeightIdentityReport {
    let mut report = WeightIdentityReport { max_residual: 0.0, max_gradient: 0.0 };
    for &r in samples {
        let omega = (1.0 + r * r).sqrt();
        let grad = r / omega;
        let lap = -(omega.powi(-3) + 1.0 / omega);
        let residual = (-omega * lap + grad * grad - 2.0).abs();
        report.max_residual = report.max_residual.max(residual);
        report.max_gradient = report.max_gradient.max(grad);
    }
    report
}

/// Largest residual of `−ωΔω + |∇ω|² = 2` with `Δω` from a five-point
/// central stencil on the plane at step `h`; an independent check of the
/// closed forms.
pub fn weight_identity_fd(samples: &[f64], h: f64) -> f64 {
    let omega = |x: f64, y: f64| (1.0 + x * x + y * y).sqrt();
    samples
        .iter()
        .map(|&r| {
            let (x, y) = (r / 2f64.sqrt(), r / 2f64.sqrt());
            let w = omega(x, y);
            let lap = -(omega(x + h, y) + omega(x - h, y) + omega(x, y + h) + omega(x, y - h) - 4.0 * w) / (h * h);
            let gx = (omega(x + h, y) - omega(x - h, y)) / (2.0 * h);
            let gy = (omega(x, y + h) - omega(x, y - h)) / (2.0 * h);
            (-w * lap + gx * gx + gy * gy - 2.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Mean of the energy-to-source ratio is bounded by `1/μ²`; exposed for
/// reports.
pub fn coercive_energy_bound(mu: f64) -> f64 {
    1.0 / (mu * mu)
}

/// Samples `(r, K0(μr))`, the decaying radial kernel of `−Δ + μ²`.
pub fn screened_kernel(mu: f64, r: f64) -> f64 {
    k0_k1(mu * r).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyl(lambda: f64, phi: f64, source: Source) -> CylinderProblem {
        CylinderProblem { lambda, t0: 0.0, phi, delta: -0.3, source }
    }

    #[test]
    fn cylinder_constant_solution() {
        let s = cylinder_solve(&cyl(0.0, 1.0, Source::Zero), 1e-2).unwrap();
        assert!(s.u.iter().all(|u| (u - 1.0).abs() < 1e-12));
        assert!(s.decay_rate.abs() < 1e-9);
    }

    #[test]
    fn cylinder_homogeneous_decay_is_exact() {
        let s = cylinder_solve(&cyl(0.75, 1.0, Source::Zero), 1e-3).unwrap();
        let err = s.tau.iter().zip(&s.u).map(|(t, u)| (u - (-0.5 * t).exp()).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
        assert!((s.decay_rate - 0.5).abs() < 1e-3);
    }

    #[test]
    fn cylinder_decay_rates_match_indicial_roots() {
        for m in 0..=2i64 {
            for e in crate::spectral::operator_l_spectrum(m, 3).entries {
                let p = CylinderProblem { lambda: e.lambda, t0: 1.0, phi: 1.0, delta: e.gamma_plus - 0.25, source: Source::Zero };
                let s = cylinder_solve(&p, 1e-3).unwrap();
                assert!((s.decay_rate - e.gamma_plus).abs() < 1e-3, "m = {m}, lambda = {}", e.lambda);
            }
        }
    }

    fn manufactured_error(lambda: f64, mesh: f64) -> f64 {
        let s = cylinder_solve(&cyl(lambda, 0.0, Source::Exponential { rate: 3.0 }), mesh).unwrap();
        let (gp, _) = indicial_roots(lambda);
        let c = 1.0 / (lambda - 12.0);
        s.tau
            .iter()
            .zip(&s.u)
            .map(|(&t, &u)| (u - c * ((-3.0 * t).exp() - (-gp * t).exp())).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn cylinder_manufactured_solution_converges_at_second_order() {
        for lambda in [2.0, 0.75, 6.0] {
            let e1 = manufactured_error(lambda, 0.02);
            let e2 = manufactured_error(lambda, 0.01);
            let e3 = manufactured_error(lambda, 0.005);
            let (s1, s2) = ((e1 / e2).log2(), (e2 / e3).log2());
            assert!((1.8..=2.2).contains(&s1) && (1.8..=2.2).contains(&s2), "lambda {lambda}: {s1} {s2}");
        }
        let s = cylinder_solve(&cyl(2.0, 0.0, Source::Exponential { rate: 3.0 }), 0.01).unwrap();
        let s2 = cylinder_solve(&cyl(2.0, 0.0, Source::Exponential { rate: 3.0 }), 0.005).unwrap();
        assert!(s.residual < 0.01 && (s.residual / s2.residual - 4.0).abs() < 0.5);
        for delta in [-1.5, -0.5, 0.0, 0.5, 0.9] {
            assert!(s.in_weighted_space(delta));
        }
        assert!(!s.in_weighted_space(1.1));
    }

    #[test]
    fn cylinder_linearity() {
        let f1 = Source::Exponential { rate: 3.0 };
        let f2 = Source::Bump { center: 2.0, width: 1.0, amplitude: 0.7 };
        let a = cylinder_solve(&cyl(2.0, 0.0, f1.clone()), 0.01).unwrap();
        let b = cylinder_solve(&cyl(2.0, 0.0, f2.clone()), 0.01).unwrap();
        let ab = cylinder_solve(&cyl(2.0, 0.0, Source::Sum(vec![f1, f2])), 0.01).unwrap();
        for i in 0..ab.u.len() {
            assert!((ab.u[i] - a.u[i] - b.u[i]).abs() < 1e-12);
        }
        let zero = cylinder_solve(&cyl(2.0, 0.0, Source::Zero), 0.01).unwrap();
        assert!(zero.u.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn cylinder_guards() {
        let (gp, gm) = indicial_roots(2.0);
        for gamma in [gp, gm] {
            let p = CylinderProblem { lambda: 2.0, t0: 0.0, phi: 1.0, delta: gamma, source: Source::Zero };
            assert!(matches!(cylinder_solve(&p, 0.01), Err(ModelError::ExceptionalWeight { .. })));
        }
        assert!(matches!(cylinder_solve(&cyl(6.0, 1.0, Source::Zero), 0.3), Err(ModelError::UnderResolved { .. })));
    }

    fn diag(mode: u32, phi: f64, source: Source) -> ExteriorModeProblem {
        ExteriorModeProblem { sector: Sector::DiagonalInvariant { mode }, r_in: 1.0, delta: -0.5, phi, source }
    }

    #[test]
    fn exterior_harmonic_extensions() {
        let s = exterior_diagonal_solve(&diag(0, 1.0, Source::Zero), 1e-3).unwrap();
        let err = s.u.iter().map(|u| (u - 1.0).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert_eq!(s.branch, FarBranch::Constant);
        let s = exterior_diagonal_solve(&diag(1, 1.0, Source::Zero), 1e-3).unwrap();
        let err = s.r.iter().zip(&s.u).map(|(r, u)| (u - 1.0 / r).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
        assert_eq!(s.branch, FarBranch::InversePower(1));
        let s = exterior_diagonal_solve(&diag(3, 2.0, Source::Zero), 1e-3).unwrap();
        assert!(s.r.iter().zip(&s.u).all(|(r, u)| (u - 2.0 * r.powi(-3)).abs() < 1e-8));
    }

    /// u(r) = ∫_R^r (1/s) ∫_s^∞ x f(x) dx ds by nested Gauss–Legendre.
    fn nested_quadrature(f: impl Fn(f64) -> f64 + Copy, r_in: f64, r: f64) -> f64 {
        let inner = |s: f64| {
            let rule = Composite::new(0.0, 1.0, 20, 10);
            rule.integrate(|y| {
                let x = s / y;
                x * f(x) * s / (y * y)
            })
        };
        Composite::new(r_in, r, 20, 10).integrate(|s| inner(s) / s)
    }

    #[test]
    fn exterior_poisson_mode_zero_matches_quadrature() {
        let f = |x: f64| x.powi(-4);
        for &r in &[1.5f64, 3.0, 7.0] {
            let closed = (1.0 - r.powi(-2)) / 4.0;
            assert!((nested_quadrature(f, 1.0, r) - closed).abs() < 1e-12);
        }
        let err = |mesh: f64| {
            let s = exterior_diagonal_solve(&diag(0, 0.0, Source::Power { power: 4.0 }), mesh).unwrap();
            assert_eq!(s.branch, FarBranch::Constant);
            s.r.iter().zip(&s.u).map(|(&r, &u)| (u - nested_quadrature(f, 1.0, r)).abs()).fold(0.0, f64::max)
        };
        let (e1, e2, e3) = (err(0.04), err(0.02), err(0.01));
        let (s1, s2) = ((e1 / e2).log2(), (e2 / e3).log2());
        assert!((1.8..=2.2).contains(&s1) && (1.8..=2.2).contains(&s2), "{e1} {e2} {e3}");
    }

    #[test]
    fn exterior_poisson_higher_mode_with_source() {
        // n = 2, f = r^{-5}: particular solution −r^{-3}/5, plus the r^{-2} branch.
        let exact = |r: f64| (r.powi(-2) - r.powi(-3)) / 5.0;
        let err = |mesh: f64| {
            let s = exterior_diagonal_solve(&diag(2, 0.0, Source::Power { power: 5.0 }), mesh).unwrap();
            s.r.iter().zip(&s.u).map(|(&r, &u)| (u - exact(r)).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.02), err(0.01));
        assert!(((e1 / e2).log2() - 2.0).abs() < 0.2);
    }

    #[test]
    fn exterior_weight_range() {
        let mut p = diag(0, 1.0, Source::Zero);
        p.delta = 0.2;
        assert!(matches!(exterior_diagonal_solve(&p, 0.01), Err(ModelError::WeightOutOfRange(_))));
    }

    fn coercive(sector: Sector, source: Source) -> ExteriorModeProblem {
        ExteriorModeProblem { sector, r_in: 1.0, delta: -0.5, phi: 0.0, source }
    }

    #[test]
    fn coercive_zero_data() {
        let s = exterior_coercive_solve(&coercive(Sector::Oscillatory { m: 1 }, Source::Zero), 0.01).unwrap();
        assert!(s.u.iter().all(|&u| u == 0.0));
        assert_eq!(s.energy_ratio, None);
    }

    #[test]
    fn coercive_decay_matches_screened_kernel() {
        let bump = Source::Bump { center: 3.0, width: 1.0, amplitude: 1.0 };
        let s = exterior_coercive_solve(&coercive(Sector::Oscillatory { m: 1 }, bump), 0.005).unwrap();
        assert!((s.decay_rate - 1.0).abs() <= 0.05, "{}", s.decay_rate);
        // beyond the bump u is a multiple of K0(r)
        let ratios: Vec<f64> = s
            .r
            .iter()
            .zip(&s.u)
            .filter(|(r, _)| **r > 5.0 && **r < 15.0)
            .map(|(&r, &u)| u / screened_kernel(1.0, r))
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        assert!((hi - lo) / hi < 1e-3, "{lo} {hi}");
    }

    #[test]
    fn coercive_mass_controls_the_norm() {
        let bump = Source::Bump { center: 3.0, width: 1.0, amplitude: 1.0 };
        let a = exterior_coercive_solve(&coercive(Sector::OffDiagonal { c: 1.0 }, bump.clone()), 0.005).unwrap();
        let b = exterior_coercive_solve(&coercive(Sector::OffDiagonal { c: 4.0 }, bump), 0.005).unwrap();
        assert!(b.l2_u <= 0.5 * a.l2_u);
        for s in [&a, &b] {
            assert!(s.l2_u <= s.l2_f / (s.mu * s.mu));
            assert!(s.energy_ratio.unwrap() <= coercive_energy_bound(s.mu));
        }
        assert!(matches!(
            exterior_coercive_solve(&coercive(Sector::OffDiagonal { c: 0.0 }, Source::Zero), 0.01),
            Err(ModelError::NonPositiveCoercivity(_))
        ));
    }

    #[test]
    fn coercive_converges_at_second_order() {
        let bump = Source::Bump { center: 2.5, width: 1.0, amplitude: 1.0 };
        let at = |mesh: f64| {
            let s = exterior_coercive_solve(&coercive(Sector::Oscillatory { m: 2 }, bump.clone()), mesh).unwrap();
            let i = s.r.iter().position(|&r| (r - 3.0).abs() < 1e-9).unwrap();
            s.u[i]
        };
        let (u1, u2, u3) = (at(0.02), at(0.01), at(0.005));
        let slope = ((u1 - u2) / (u2 - u3)).abs().log2();
        assert!((1.8..=2.2).contains(&slope), "{slope}");
    }

    #[test]
    fn poincare_examples() {
        let bump = Profile { bumps: vec![((2.5f64).ln(), 0.2, 1.0)], plateau: None, power: None, scale: 1.0 };
        let r = poincare_ratio(1.0, -0.5, &bump);
        assert!(r <= 1.0);
        let doubled = Profile { scale: 2.0, ..bump.clone() };
        assert!((poincare_ratio(1.0, -0.5, &doubled) - r).abs() < 1e-12);
        for delta in [-0.45, -0.1, 0.1, 0.45] {
            for r_in in [0.5, 1.0, 2.0] {
                let near = poincare_ratio(r_in, delta, &near_extremal_profile(delta));
                assert!((0.2..=1.0).contains(&near), "R {r_in} delta {delta}: {near}");
            }
        }
    }

    #[test]
    fn poincare_random_trials() {
        for r_in in [0.5, 1.0, 2.0] {
            for delta in [-0.45, -0.1, 0.1, 0.45] {
                let rep = poincare_constant_check(r_in, delta, 100, 7, Exec::default()).unwrap();
                assert!(rep.max_ratio <= 1.0, "R {r_in} delta {delta}: {}", rep.max_ratio);
                assert!(rep.max_ratio >= 0.2);
            }
        }
    }

    #[test]
    fn random_profiles_respect_the_boundary_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            assert!(random_profile(&mut rng, 1.0, 0.3).vanishes_at_boundary(1.0));
        }
    }

    #[test]
    fn weight_identity() {
        let rep = weight_identity_check(&[0.0, 1.0, 100.0]);
        assert!(rep.max_residual <= 1e-15);
        assert!(rep.max_gradient < 1.0);
        assert!((weight_identity_check(&[100.0]).max_gradient - 100.0 / 10001f64.sqrt()).abs() < 1e-15);
        assert!(weight_identity_fd(&[0.0, 0.5, 2.0, 10.0], 1e-3) < 1e-5);
    }
}
