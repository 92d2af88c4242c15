//! The Green's function `G` of `R² × S¹` (circle of length `2π`) with a
//! `-1/(2ρ)` pole, normalised by
//!
//! ```text
//! G(z, t) = -1/2 Σ_{m∈Z} [ (r² + (t − 2πm)²)^{-1/2} − a_|m| ]
//! ```
//!
//! Three evaluation routes are provided, each with a certified bound on its
//! truncation (or model) error:
//!
//! * [`Regime::ImageSum`]: the symmetric partial sum over `|m| ≤ M`;
//! * [`Regime::FourierBessel`]: `(1/2π) ln r − (1/π) Σ_{m=1}^{M} K0(m r) cos(m t)`;
//! * [`Regime::Multipole`]: the two-term model `a_0/2 − 1/(2ρ)` near the pole.
//!
//! [`green_eval`] dispatches between them.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::geometry::CirclePoint3;
use crate::specfn::{a_constant, k0, k0_k1};

/// Below this distance to the pole the multipole model is used (if it meets
/// the requested tolerance).
pub const RHO_SWITCH: f64 = 0.1;
/// Above this planar distance the Fourier–Bessel expansion is used.
pub const R_SWITCH: f64 = 0.5;
/// Validity radius of the multipole model.
pub const MULTIPOLE_RADIUS: f64 = PI / 2.0;
/// Calibrated constant: `|G − a_0/2 + 1/(2ρ)| ≤ C2_VALUE ρ²` for `ρ < π/2`.
pub const C2_VALUE: f64 = 0.006;
/// Calibrated constant: `|∇(G − a_0/2 + 1/(2ρ))| ≤ C2_GRAD ρ` for `ρ < π/2`.
pub const C2_GRAD: f64 = 0.016;
/// Smallest tolerance accepted near the pole.
pub const MIN_MULTIPOLE_TOL: f64 = 1e-12;

const MAX_IMAGE_TERMS: usize = 50_000_000;
const MAX_BESSEL_TERMS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreenError {
    #[error("evaluation point coincides with the singularity")]
    Singular,
    #[error("point outside the {regime:?} validity region ({detail})")]
    OutOfRegime { regime: Regime, detail: String },
    #[error("tolerance {tol:e} unreachable ({detail})")]
    ToleranceUnreachable { tol: f64, detail: String },
    #[error("truncation order must be at least 1")]
    ZeroOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    ImageSum,
    FourierBessel,
    Multipole,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::ImageSum => "image_sum",
            Regime::FourierBessel => "fourier_bessel",
            Regime::Multipole => "multipole",
        }
    }
}

/// Value, gradient `(∂x, ∂y, ∂t)` and certified error bound of `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEval {
    pub value: f64,
    pub grad: [f64; 3],
    /// Bound on `|value − G_exact|`.
    pub trunc_bound: f64,
    /// Bound on the Euclidean norm of the gradient error, where available
    /// (`f64::INFINITY` when no bound is certified).
    pub grad_bound: f64,
    pub regime: Regime,
}

/// Offsets of `p` relative to the pole `q`: `(dx, dy, dt)` with `dt ∈ (−π, π]`.
fn offsets(p: &CirclePoint3, q: &CirclePoint3) -> (f64, f64, f64) {
    let (dz, dt) = p.offset_from(q);
    (dz.re, dz.im, dt)
}

/// Symmetric image sum over `m = −M..M`, recentred at `q`.
///
/// Pairing `m` with `−m`, the bracket `d_m⁻¹ + d_{−m}⁻¹ − 1/(mπ)` is bounded
/// by `(4 c t² + r²)/(8π³ m³)` (second-order Taylor remainder of
/// `(1 + s)^{-1/2}`), which gives a tail bound `(4 c t² + r²)/(32 π³ M²)`.
pub fn green_image_sum(p: &CirclePoint3, q: &CirclePoint3, m_max: usize) -> Result<GreenEval, GreenError> {
    if m_max == 0 {
        return Err(GreenError::ZeroOrder);
    }
    let (x, y, t) = offsets(p, q);
    let r2 = x * x + y * y;
    if r2 == 0.0 && t == 0.0 {
        return Err(GreenError::Singular);
    }
    // Accumulate from the smallest terms up.
    let mut pair_sum = 0.0;
    let mut gr_over_r = 0.0; // Σ d⁻³ over all images, multiplies (x, y)
    let mut gt = 0.0; // Σ (t − 2πm) d⁻³
    let mut abs_sum = 0.0;
    for m in (1..=m_max).rev() {
        let shift = 2.0 * PI * m as f64;
        let tm = t - shift;
        let tp = t + shift;
        let dm2 = r2 + tm * tm;
        let dp2 = r2 + tp * tp;
        let inv_m = 1.0 / dm2.sqrt();
        let inv_p = 1.0 / dp2.sqrt();
        let pair = inv_m + inv_p - 1.0 / (PI * m as f64);
        pair_sum += pair;
        abs_sum += pair.abs();
        let cm = inv_m / dm2;
        let cp = inv_p / dp2;
        gr_over_r += cm + cp;
        gt += tm * cm + tp * cp;
    }
    let d02 = r2 + t * t;
    let inv0 = 1.0 / d02.sqrt();
    let c0 = inv0 / d02;
    gr_over_r += c0;
    gt += t * c0;

    let a0 = a_constant(0);
    let value = -0.5 * (inv0 - a0 + pair_sum);
    // ∂(−½ d⁻¹) = ½ (x, y, t − 2πm) d⁻³
    let grad = [0.5 * x * gr_over_r, 0.5 * y * gr_over_r, 0.5 * gt];

    let mf = m_max as f64;
    let u_max = 1.0 / (2.0 * (mf + 1.0));
    let c = (1.0 - u_max).powi(-3);
    let tail = (4.0 * c * t * t + r2) / (32.0 * PI.powi(3) * mf * mf);
    let rounding = 4.0 * f64::EPSILON * (inv0 + a0 + abs_sum + mf * f64::EPSILON);
    // Gradient tail: each image contributes at most ½ d⁻² with d ≥ 2π m − π.
    let grad_tail = 0.5 / (PI * PI * (2.0 * mf - 1.0));
    Ok(GreenEval {
        value,
        grad,
        trunc_bound: tail + rounding,
        grad_bound: grad_tail,
        regime: Regime::ImageSum,
    })
}

/// Number of image pairs needed for a tail bound `≤ tol` at offset `(r, t)`.
pub(crate) fn image_terms_for(r2: f64, t: f64, tol: f64) -> Option<usize> {
    // c ≤ (1 − 1/4)^{-3} for M ≥ 1; refine once with the resulting M.
    let bound_coeff = |c: f64| (4.0 * c * t * t + r2) / (32.0 * PI.powi(3));
    let mut m = (bound_coeff(64.0 / 27.0) / tol).sqrt().ceil().max(1.0);
    let c = (1.0 - 1.0 / (2.0 * (m + 1.0))).powi(-3);
    m = (bound_coeff(c) / tol).sqrt().ceil().max(1.0);
    if m > MAX_IMAGE_TERMS as f64 {
        None
    } else {
        Some(m as usize)
    }
}

/// Fourier–Bessel expansion truncated at `M` modes. Requires `r > 0`.
///
/// `K0(x) e^x` is decreasing, so `K0((m+1) r) ≤ e^{−r} K0(m r)` and the tail
/// is bounded by the geometric series `K0((M+1) r) / (π (1 − e^{−r}))`.
pub fn green_fourier_bessel(p: &CirclePoint3, q: &CirclePoint3, m_max: usize) -> Result<GreenEval, GreenError> {
    if m_max == 0 {
        return Err(GreenError::ZeroOrder);
    }
    let (x, y, t) = offsets(p, q);
    let r = x.hypot(y);
    if r == 0.0 {
        return Err(GreenError::Singular);
    }
    let mut sum_k0 = 0.0;
    let mut sum_dr = 0.0; // Σ m K1(m r) cos(m t)
    let mut sum_dt = 0.0; // Σ m K0(m r) sin(m t)
    for m in (1..=m_max).rev() {
        let mf = m as f64;
        let (kv0, kv1) = k0_k1(mf * r);
        let (s, c) = (mf * t).sin_cos();
        sum_k0 += kv0 * c;
        sum_dr += mf * kv1 * c;
        sum_dt += mf * kv0 * s;
    }
    let value = r.ln() / (2.0 * PI) - sum_k0 / PI;
    let d_r = 1.0 / (2.0 * PI * r) + sum_dr / PI;
    let grad = [d_r * x / r, d_r * y / r, sum_dt / PI];

    let next = (m_max + 1) as f64;
    let geom = 1.0 / (1.0 - (-r).exp());
    let (k0_next, k1_next) = k0_k1(next * r);
    let tail = k0_next * geom / PI;
    // m K_ν(m r) also decreases geometrically once m r ≥ 1/(1 − e^{−r}) ...
    // use the cruder ratio bound (1 + 1/M) e^{−r} for the gradient tail.
    let ratio = (1.0 + 1.0 / next) * (-r).exp();
    let grad_tail = if ratio < 1.0 {
        next * (k0_next + k1_next) / (PI * (1.0 - ratio))
    } else {
        f64::INFINITY
    };
    let rounding = 4.0 * f64::EPSILON * (r.ln().abs() / (2.0 * PI) + (m_max as f64) * k0(r).min(1e300) / PI);
    Ok(GreenEval { value, grad, trunc_bound: tail + rounding, grad_bound: grad_tail, regime: Regime::FourierBessel })
}

fn bessel_terms_for(r: f64, tol: f64) -> Option<usize> {
    let geom = 1.0 / (1.0 - (-r).exp());
    let mut m = 1usize;
    while m <= MAX_BESSEL_TERMS {
        let next = (m + 1) as f64;
        let (k0n, k1n) = k0_k1(next * r);
        let ratio = (1.0 + 1.0 / next) * (-r).exp();
        let value_tail = k0n * geom / PI;
        let grad_tail = if ratio < 1.0 { next * (k0n + k1n) / (PI * (1.0 - ratio)) } else { f64::INFINITY };
        if value_tail <= 0.5 * tol && grad_tail <= 1e3 * tol.max(1e-13) {
            return Some(m);
        }
        m = if m < 64 { m + 1 } else { m + m / 4 };
    }
    None
}

/// Two-term multipole model `a_0/2 − 1/(2ρ)`, valid for `ρ < π/2`, with the
/// calibrated model-error bound `C2_VALUE ρ²`.
pub fn green_multipole(p: &CirclePoint3, q: &CirclePoint3) -> Result<GreenEval, GreenError> {
    let (x, y, t) = offsets(p, q);
    let rho = (x * x + y * y + t * t).sqrt();
    if rho == 0.0 {
        return Err(GreenError::Singular);
    }
    if rho >= MULTIPOLE_RADIUS {
        return Err(GreenError::OutOfRegime {
            regime: Regime::Multipole,
            detail: format!("rho = {rho} >= pi/2"),
        });
    }
    let value = 0.5 * a_constant(0) - 0.5 / rho;
    let c = 0.5 / rho.powi(3);
    Ok(GreenEval {
        value,
        grad: [c * x, c * y, c * t],
        trunc_bound: C2_VALUE * rho * rho,
        grad_bound: C2_GRAD * rho,
        regime: Regime::Multipole,
    })
}

/// Regime dispatcher: returns an evaluation with `trunc_bound ≤ tol`.
///
/// Multipole is used for `ρ < RHO_SWITCH` when `C2_VALUE ρ² ≤ tol`; near the
/// pole tighter tolerances fall back to the image sum, and below
/// `MIN_MULTIPOLE_TOL` they are rejected. Fourier–Bessel is used for
/// `r > R_SWITCH` and the image sum everywhere else.
pub fn green_eval(p: &CirclePoint3, q: &CirclePoint3, tol: f64) -> Result<GreenEval, GreenError> {
    if !(tol > 0.0) {
        return Err(GreenError::ToleranceUnreachable { tol, detail: "tolerance must be positive".into() });
    }
    let (x, y, t) = offsets(p, q);
    let r2 = x * x + y * y;
    let rho = (r2 + t * t).sqrt();
    if rho == 0.0 {
        return Err(GreenError::Singular);
    }
    if rho < RHO_SWITCH {
        if C2_VALUE * rho * rho <= tol {
            return green_multipole(p, q);
        }
        if tol < MIN_MULTIPOLE_TOL {
            return Err(GreenError::ToleranceUnreachable {
                tol,
                detail: format!("multipole regime at rho = {rho:e}: model error C2 rho^2 = {:e}", C2_VALUE * rho * rho),
            });
        }
    }
    if r2.sqrt() > R_SWITCH {
        let m = bessel_terms_for(r2.sqrt(), tol).ok_or_else(|| GreenError::ToleranceUnreachable {
            tol,
            detail: "Fourier-Bessel series".into(),
        })?;
        let e = green_fourier_bessel(p, q, m)?;
        if e.trunc_bound <= tol {
            return Ok(e);
        }
        return Err(GreenError::ToleranceUnreachable { tol, detail: format!("rounding floor {:e}", e.trunc_bound) });
    }
    let m = image_terms_for(r2, t, 0.5 * tol).ok_or_else(|| GreenError::ToleranceUnreachable {
        tol,
        detail: "image sum would need too many terms".into(),
    })?;
    let e = green_image_sum(p, q, m)?;
    if e.trunc_bound <= tol {
        Ok(e)
    } else {
        Err(GreenError::ToleranceUnreachable { tol, detail: format!("rounding floor {:e}", e.trunc_bound) })
    }
}

/// `max(|∂t G(r, 0)|, |∂t G(r, π)|)` from the Fourier–Bessel gradient.
pub fn green_dt_zero_check(r: f64) -> f64 {
    assert!(r > 0.0, "radius must be positive");
    let q = CirclePoint3::origin();
    let m = bessel_terms_for(r, 1e-15).unwrap_or(MAX_BESSEL_TERMS);
    [0.0, PI]
        .iter()
        .map(|&t| {
            let p = CirclePoint3::new(r, 0.0, t);
            green_fourier_bessel(&p, &q, m).map(|e| e.grad[2].abs()).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

/// Evaluates `G_q` at many points; output order matches input order.
pub fn green_batch(points: &[CirclePoint3], q: &CirclePoint3, tol: f64, exec: Exec) -> Vec<Result<GreenEval, GreenError>> {
    exec.map(points, |p| green_eval(p, q, tol))
}

#[derive(Debug, Error)]
pub enum BatchIoError {
    #[error("line {line}: expected three numbers \"x y t\", got {content:?}")]
    Parse { line: usize, content: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads newline-delimited `x y t` records. Blank lines and `#` comments are
/// skipped.
pub fn read_points<R: BufRead>(reader: R) -> Result<Vec<CirclePoint3>, BatchIoError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let nums: Vec<f64> = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| BatchIoError::Parse { line: i + 1, content: line.clone() })?;
        if nums.len() != 3 {
            return Err(BatchIoError::Parse { line: i + 1, content: line.clone() });
        }
        out.push(CirclePoint3::new(nums[0], nums[1], nums[2]));
    }
    Ok(out)
}

/// Writes `x y t value gx gy gt bound regime` as CSV. The `x y t` columns
/// echo the input coordinates (with `t` reduced to `[0, 2π)`). Failed points
/// are written with `nan` values and the error in the regime column.
pub fn write_green_csv<W: Write>(
    mut out: W,
    points: &[CirclePoint3],
    evals: &[Result<GreenEval, GreenError>],
) -> std::io::Result<()> {
    writeln!(out, "x,y,t,value,gx,gy,gt,bound,regime")?;
    for (p, e) in points.iter().zip(evals) {
        match e {
            Ok(e) => writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.3e},{}",
                p.x(),
                p.y(),
                p.t(),
                e.value,
                e.grad[0],
                e.grad[1],
                e.grad[2],
                e.trunc_bound,
                e.regime.name()
            )?,
            Err(err) => writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},nan,nan,nan,nan,nan,error: {}",
                p.x(),
                p.y(),
                p.t(),
                err.to_string().replace(',', ";")
            )?,
        }
    }
    Ok(())
}
