//! The Hopf fibration `R⁴ \ {0} → R³ \ {0}` and the Gibbons–Hawking lift
//! of abelian monopoles to circle-invariant connections on `R⁴`.
//!
//! Coordinates: `z1 = x1 + i x2`, `z2 = x3 + i x4`, with
//! `π(z1, z2) = (|z1|² − |z2|², Re 2 z1 z2, Im 2 z1 z2)` and
//! `ρ = |π| = |z1|² + |z2|²`. The circle acts by `(e^{is} z1, e^{−is} z2)`.
//! The connection form
//!
//! ```text
//! θ0 = Im(z̄1 dz1 − z̄2 dz2) / ρ
//! ```
//!
//! takes the value 1 on the generator `(i z1, −i z2)` (fibre period `2π`) and
//! satisfies `π*(∗dh) = dθ0` for `h = 1/(2ρ)`. With these normalisations
//! `h π*g₃ + h⁻¹ θ0²` equals `2(|dz1|² + |dz2|²)`; all norms on `R⁴` below
//! are taken in that metric, written `g_GH`. Components are always
//! Cartesian in `(x1, x2, x3, x4)`, and `R⁴` is oriented by `dx1∧dx2∧dx3∧dx4`.

use num_complex::Complex64;
use thiserror::Error;

/// Points with both `|z1|` and `|z2|` below this are rejected.
pub const ORIGIN_EPS: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("point too close to the origin of R^4")]
    Origin,
    #[error("point on the axis z{0} = 0 where this chart is singular")]
    ChartAxis(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat4Point {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Quat4Point {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn from_real(x: [f64; 4]) -> Self {
        Self { z1: Complex64::new(x[0], x[1]), z2: Complex64::new(x[2], x[3]) }
    }

    pub fn to_real(&self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    /// `|z1|² + |z2|²`, which equals `|π(p)|`.
    pub fn rho(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    /// Circle action `(e^{is} z1, e^{−is} z2)`.
    pub fn rotated(&self, s: f64) -> Self {
        let w = Complex64::from_polar(1.0, s);
        Self { z1: self.z1 * w, z2: self.z2 * w.conj() }
    }

    fn check(&self) -> Result<(), HopfError> {
        if self.z1.norm() < ORIGIN_EPS && self.z2.norm() < ORIGIN_EPS {
            Err(HopfError::Origin)
        } else {
            Ok(())
        }
    }
}

/// A 1-form on `R⁴` at a point, in Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedForm {
    pub components: [f64; 4],
    pub base: Quat4Point,
}

impl LiftedForm {
    /// Squared norm in `g_GH = 2 δ`.
    pub fn norm_sq(&self) -> f64 {
        0.5 * self.components.iter().map(|c| c * c).sum::<f64>()
    }

    pub fn pair(&self, u: [f64; 4]) -> f64 {
        (0..4).map(|i| self.components[i] * u[i]).sum()
    }
}

pub fn hopf_project(p: &Quat4Point) -> [f64; 3] {
    let w = 2.0 * p.z1 * p.z2;
    [p.z1.norm_sqr() - p.z2.norm_sqr(), w.re, w.im]
}

/// Rows are the differentials `dX1, dX2, dX3` of the projection.
pub fn hopf_jacobian(p: &Quat4Point) -> [[f64; 4]; 3] {
    let [x1, x2, x3, x4] = p.to_real();
    [
        [2.0 * x1, 2.0 * x2, -2.0 * x3, -2.0 * x4],
        [2.0 * x3, -2.0 * x4, 2.0 * x1, -2.0 * x2],
        [2.0 * x4, 2.0 * x3, 2.0 * x2, 2.0 * x1],
    ]
}

/// `π_* u`.
pub fn hopf_pushforward(p: &Quat4Point, u: [f64; 4]) -> [f64; 3] {
    hopf_jacobian(p).map(|row| (0..4).map(|i| row[i] * u[i]).sum())
}

/// `h = 1/(2ρ)`.
pub fn gh_potential(p: &Quat4Point) -> f64 {
    0.5 / p.rho()
}

/// The connection form `θ0` at `p`.
pub fn gibbons_hawking_connection(p: &Quat4Point) -> Result<LiftedForm, HopfError> {
    p.check()?;
    let [x1, x2, x3, x4] = p.to_real();
    let r = p.rho();
    Ok(LiftedForm { components: [-x2 / r, x1 / r, x4 / r, -x3 / r], base: *p })
}

/// `ξ̂ = π*a − π*(h⁻¹ ψ) θ0` for a 1-form `a` (components in `X`
/// coordinates) and a scalar `ψ` sampled at `π(p)`.
pub fn lift_form(a: [f64; 3], psi: f64, p: &Quat4Point) -> Result<LiftedForm, HopfError> {
    let theta = gibbons_hawking_connection(p)?;
    let jac = hopf_jacobian(p);
    let hinv_psi = psi / gh_potential(p);
    let mut c = [0.0; 4];
    for (i, ci) in c.iter_mut().enumerate() {
        *ci = (0..3).map(|k| a[k] * jac[k][i]).sum::<f64>() - hinv_psi * theta.components[i];
    }
    Ok(LiftedForm { components: c, base: *p })
}

/// Complex version of [`lift_form`], returned in the singular gauge of a
/// charge-`k` section: the chart-`z1 ≠ 0` lift multiplied by `e^{ikθ1}`,
/// `θ1 = arg z1`. Satisfies `R_s^* ξ̂ = e^{iks} ξ̂` under the circle action.
pub fn lift_section(k: i64, a: [Complex64; 3], psi: Complex64, p: &Quat4Point) -> Result<[Complex64; 4], HopfError> {
    p.check()?;
    if p.z1.norm() < ORIGIN_EPS {
        return Err(HopfError::ChartAxis(1));
    }
    let re = lift_form(a.map(|c| c.re), psi.re, p)?;
    let im = lift_form(a.map(|c| c.im), psi.im, p)?;
    let phase = Complex64::from_polar(1.0, k as f64 * p.z1.arg());
    Ok(std::array::from_fn(|i| phase * Complex64::new(re.components[i], im.components[i])))
}

/// Trivialisations of the charge-`k` Dirac monopole on `R³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracChart {
    /// Regular away from the negative `X1` axis (`z1 ≠ 0` upstairs).
    North,
    /// Regular away from the positive `X1` axis (`z2 ≠ 0` upstairs).
    South,
}

/// Euclidean Dirac monopole of charge `k` and mass `v` on `R³`: returns
/// `(a, φ)` with `φ = v − k/(2|X|)` and
/// `a = (k/2)(±1 − cos ϕ) dϑ` in polar coordinates about the `X1` axis
/// (`cos ϕ = X1/|X|`, `ϑ = arg(X2 + i X3)`), so that `da = ∗dφ`.
pub fn dirac_monopole(k: i64, mass: f64, chart: DiracChart, x: [f64; 3]) -> ([f64; 3], f64) {
    let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let kf = k as f64;
    let sign = match chart {
        DiracChart::North => 1.0,
        DiracChart::South => -1.0,
    };
    let coeff = 0.5 * kf * (sign - x[0] / rho);
    // dϑ = (X2 dX3 − X3 dX2) / (X2² + X3²)
    let s2 = x[1] * x[1] + x[2] * x[2];
    let a = [0.0, -coeff * x[2] / s2, coeff * x[1] / s2];
    (a, mass - 0.5 * kf / rho)
}

/// Real part of `−i Â` for the lift of the charge-`k`, mass-`v` Dirac
/// monopole, `π*a − π*(h⁻¹φ) θ0`, in the given chart.
pub fn lift_dirac_connection_in(k: i64, mass: f64, chart: DiracChart, p: &Quat4Point) -> Result<LiftedForm, HopfError> {
    p.check()?;
    match chart {
        DiracChart::North if p.z1.norm() < ORIGIN_EPS => return Err(HopfError::ChartAxis(1)),
        DiracChart::South if p.z2.norm() < ORIGIN_EPS => return Err(HopfError::ChartAxis(2)),
        _ => {}
    }
    let (a, phi) = dirac_monopole(k, mass, chart, hopf_project(p));
    lift_form(a, phi, p)
}

/// Lift in whichever chart is better conditioned at `p`.
pub fn lift_dirac_connection(k: i64, mass: f64, p: &Quat4Point) -> Result<LiftedForm, HopfError> {
    let chart = if p.z1.norm() >= p.z2.norm() { DiracChart::North } else { DiracChart::South };
    lift_dirac_connection_in(k, mass, chart, p)
}

/// The flat part removed by the singular gauge: `k dθ1` in the north chart
/// and `−k dθ2` in the south chart.
pub fn singular_gauge_term(k: i64, chart: DiracChart, p: &Quat4Point) -> Result<[f64; 4], HopfError> {
    let [x1, x2, x3, x4] = p.to_real();
    let kf = k as f64;
    match chart {
        DiracChart::North => {
            let r = x1 * x1 + x2 * x2;
            if r.sqrt() < ORIGIN_EPS {
                return Err(HopfError::ChartAxis(1));
            }
            Ok([-kf * x2 / r, kf * x1 / r, 0.0, 0.0])
        }
        DiracChart::South => {
            let r = x3 * x3 + x4 * x4;
            if r.sqrt() < ORIGIN_EPS {
                return Err(HopfError::ChartAxis(2));
            }
            Ok([0.0, 0.0, kf * x4 / r, -kf * x3 / r])
        }
    }
}

/// Lifted Dirac connection after the singular gauge transformation. It
/// extends smoothly over the origin.
pub fn lift_dirac_singular_gauge(k: i64, mass: f64, chart: DiracChart, p: &Quat4Point) -> Result<LiftedForm, HopfError> {
    let lifted = lift_dirac_connection_in(k, mass, chart, p)?;
    let g = singular_gauge_term(k, chart, p)?;
    Ok(LiftedForm { components: std::array::from_fn(|i| lifted.components[i] - g[i]), base: *p })
}

/// Antisymmetric component matrix `F_ij` of a 2-form on `R⁴`.
pub type TwoForm = [[f64; 4]; 4];

/// `dA` by second-order central differences of the components of `a`.
pub fn curvature_fd<F>(a: F, x: [f64; 4], h: f64) -> Result<TwoForm, HopfError>
where
    F: Fn(&Quat4Point) -> Result<LiftedForm, HopfError>,
{
    let mut grad = [[0.0; 4]; 4]; // grad[i][j] = ∂_i A_j
    for i in 0..4 {
        let mut xp = x;
        let mut xm = x;
        xp[i] += h;
        xm[i] -= h;
        let ap = a(&Quat4Point::from_real(xp))?;
        let am = a(&Quat4Point::from_real(xm))?;
        for j in 0..4 {
            grad[i][j] = (ap.components[j] - am.components[j]) / (2.0 * h);
        }
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| grad[i][j] - grad[j][i])))
}

/// Euclidean Hodge star of a 2-form (a conformal invariant in dimension 4).
pub fn hodge4(f: &TwoForm) -> TwoForm {
    let mut s = [[0.0; 4]; 4];
    // ∗(dx1∧dx2) = dx3∧dx4, ∗(dx1∧dx3) = dx4∧dx2, ∗(dx1∧dx4) = dx2∧dx3
    let pairs = [((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))];
    for ((a, b), (c, d)) in pairs {
        s[c][d] = f[a][b];
        s[d][c] = -f[a][b];
        s[a][b] = f[c][d];
        s[b][a] = -f[c][d];
    }
    s
}

/// `|F + ∗F|` in Euclidean components.
pub fn self_dual_part_norm(f: &TwoForm) -> f64 {
    let s = hodge4(f);
    let mut sum = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            sum += (f[i][j] + s[i][j]).powi(2);
        }
    }
    sum.sqrt()
}

/// `|F|²` in `g_GH = 2δ`.
pub fn two_form_norm_sq(f: &TwoForm) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            sum += f[i][j] * f[i][j];
        }
    }
    0.25 * sum
}

/// Largest `|F + ∗F|` of the lifted Dirac connection over `points`, with the
/// curvature taken by central differences of step `h`. Uses the north chart.
pub fn dirac_lift_asd_residual(k: i64, mass: f64, points: &[[f64; 4]], h: f64) -> Result<f64, HopfError> {
    let mut worst: f64 = 0.0;
    for &x in points {
        let f = curvature_fd(|p| lift_dirac_connection_in(k, mass, DiracChart::North, p), x, h)?;
        worst = worst.max(self_dual_part_norm(&f));
    }
    Ok(worst)
}

/// Largest curvature component of the massless lifted Dirac connection over
/// `points` (north chart, central differences of step `h`).
pub fn dirac_lift_flatness_residual(k: i64, points: &[[f64; 4]], h: f64) -> Result<f64, HopfError> {
    let mut worst: f64 = 0.0;
    for &x in points {
        let f = curvature_fd(|p| lift_dirac_connection_in(k, 0.0, DiracChart::North, p), x, h)?;
        worst = f.iter().flatten().fold(worst, |w, c| w.max(c.abs()));
    }
    Ok(worst)
}

/// Sample points used by the curvature checks: away from both axes and the
/// origin, deterministic.
pub fn curvature_sample_points() -> Vec<[f64; 4]> {
    let mut pts = Vec::new();
    for (i, &r1) in [0.5, 0.8].iter().enumerate() {
        for (j, &r2) in [0.4, 0.9].iter().enumerate() {
            let (a1, a2) = (0.3 + 1.1 * i as f64, -0.7 + 0.9 * j as f64);
            pts.push([r1 * f64::cos(a1), r1 * f64::sin(a1), r2 * f64::cos(a2), r2 * f64::sin(a2)]);
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> Quat4Point {
        Quat4Point::from_real(std::array::from_fn(|_| rng.gen_range(-1.5..1.5)))
    }

    fn dot<const N: usize>(a: [f64; N], b: [f64; N]) -> f64 {
        (0..N).map(|i| a[i] * b[i]).sum()
    }

    #[test]
    fn projection_examples_and_norm() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(hopf_project(&Quat4Point::new(one, zero)), [1.0, 0.0, 0.0]);
        assert_eq!(hopf_project(&Quat4Point::new(zero, one)), [-1.0, 0.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let x = hopf_project(&p);
            assert!((dot(x, x).sqrt() - p.rho()).abs() <= 4.0 * f64::EPSILON * p.rho());
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let p = Quat4Point::from_real([0.3, -0.7, 0.5, 0.2]);
        let jac = hopf_jacobian(&p);
        let x = p.to_real();
        for i in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += 1e-6;
            xm[i] -= 1e-6;
            let (fp, fm) = (hopf_project(&Quat4Point::from_real(xp)), hopf_project(&Quat4Point::from_real(xm)));
            for k in 0..3 {
                assert!(((fp[k] - fm[k]) / 2e-6 - jac[k][i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn fibre_normalisation_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p = random_point(&mut rng);
            let th = gibbons_hawking_connection(&p).unwrap();
            let gen = Quat4Point::new(Complex64::i() * p.z1, -Complex64::i() * p.z2).to_real();
            assert!((th.pair(gen) - 1.0).abs() < 1e-14);
            // the generator is vertical
            assert!(hopf_pushforward(&p, gen).iter().all(|c| c.abs() < 1e-14));
            let q = p.rotated(0.8);
            let x = hopf_project(&p);
            let y = hopf_project(&q);
            assert!((0..3).all(|i| (x[i] - y[i]).abs() < 1e-14));
            // θ0 is invariant: R_s^* θ0 = θ0
            let thq = gibbons_hawking_connection(&q).unwrap();
            let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let ru = Quat4Point::from_real(u).rotated(0.8).to_real();
            assert!((thq.pair(ru) - th.pair(u)).abs() < 1e-13);
        }
        assert_eq!(gibbons_hawking_connection(&Quat4Point::from_real([0.0; 4])), Err(HopfError::Origin));
    }

    #[test]
    fn star_dh_equals_dtheta0() {
        // π*(∗₃ dh) against the finite-difference exterior derivative of θ0.
        let converge = |h: f64| {
            let mut worst: f64 = 0.0;
            for x in curvature_sample_points() {
                let p = Quat4Point::from_real(x);
                let xs = hopf_project(&p);
                let rho = p.rho();
                let dh = xs.map(|c| -0.5 * c / rho.powi(3));
                // ∗dh = dh_1 dX2∧dX3 + dh_2 dX3∧dX1 + dh_3 dX1∧dX2
                let jac = hopf_jacobian(&p);
                let wedge = |a: usize, b: usize, i: usize, j: usize| jac[a][i] * jac[b][j] - jac[a][j] * jac[b][i];
                let f = curvature_fd(gibbons_hawking_connection, x, h).unwrap();
                for i in 0..4 {
                    for j in 0..4 {
                        let star = dh[0] * wedge(1, 2, i, j) + dh[1] * wedge(2, 0, i, j) + dh[2] * wedge(0, 1, i, j);
                        worst = worst.max((star - f[i][j]).abs());
                    }
                }
            }
            worst
        };
        let (e1, e2) = (converge(0.02), converge(0.01));
        assert!(e1 < 1e-2 && (3.5..=4.5).contains(&(e1 / e2)), "{e1} {e2}");
    }

    #[test]
    fn metric_correspondence() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            let h = gh_potential(&p);
            let th = gibbons_hawking_connection(&p).unwrap();
            let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let gh = h * dot(hopf_pushforward(&p, u), hopf_pushforward(&p, v)) + th.pair(u) * th.pair(v) / h;
            assert!((gh - 2.0 * dot(u, v)).abs() < 1e-10 * (1.0 + gh.abs()));
        }
    }

    #[test]
    fn lift_norm_identity_examples() {
        let half = Quat4Point::from_real([0.5f64.sqrt(), 0.0, 0.0, 0.0]);
        assert!((lift_form([1.0, 0.0, 0.0], 0.0, &half).unwrap().norm_sq() - 1.0).abs() < 1e-15);
        let two = Quat4Point::from_real([1.0, 0.0, 1.0, 0.0]);
        assert!((lift_form([0.0; 3], 1.0, &two).unwrap().norm_sq() - 4.0).abs() < 1e-14);
        assert_eq!(lift_form([0.0; 3], 0.0, &two).unwrap().components, [0.0; 4]);
    }

    #[test]
    fn lift_norm_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let a: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let psi = rng.gen_range(-2.0..2.0);
            let n = lift_form(a, psi, &p).unwrap().norm_sq();
            let expected = (dot(a, a) + psi * psi) / gh_potential(&p);
            assert!((n - expected).abs() <= 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn dirac_monopole_solves_bogomolny() {
        let x = [0.3, -0.4, 0.8];
        let h = 1e-5;
        let curl_err = |chart| {
            let a = |y: [f64; 3]| dirac_monopole(1, 2.0, chart, y).0;
            let d = |i: usize, j: usize| {
                let mut p = x;
                let mut m = x;
                p[i] += h;
                m[i] -= h;
                (a(p)[j] - a(m)[j]) / (2.0 * h)
            };
            let curl = [d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)];
            let rho = dot(x, x).sqrt();
            let grad = x.map(|c| 0.5 * c / rho.powi(3));
            (0..3).map(|i| (curl[i] - grad[i]).abs()).fold(0.0, f64::max)
        };
        assert!(curl_err(DiracChart::North) < 1e-8);
        assert!(curl_err(DiracChart::South) < 1e-8);
    }

    #[test]
    fn singular_gauge_removes_the_flat_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            for chart in [DiracChart::North, DiracChart::South] {
                for k in [1, -2, 3] {
                    let sg = lift_dirac_singular_gauge(k, 0.0, chart, &p).unwrap();
                    assert!(sg.components.iter().all(|c| c.abs() < 1e-12), "{sg:?}");
                    // with mass the remainder is −2vρθ0, smooth at the origin
                    let sg = lift_dirac_singular_gauge(k, 1.5, chart, &p).unwrap();
                    let th = gibbons_hawking_connection(&p).unwrap();
                    for i in 0..4 {
                        assert!((sg.components[i] + 3.0 * p.rho() * th.components[i]).abs() < 1e-11);
                    }
                }
            }
            // chart transition: north − south = k π*dϑ = k (dθ1 + dθ2)
            let n = lift_dirac_connection_in(2, 0.7, DiracChart::North, &p).unwrap();
            let s = lift_dirac_connection_in(2, 0.7, DiracChart::South, &p).unwrap();
            let g1 = singular_gauge_term(2, DiracChart::North, &p).unwrap();
            let g2 = singular_gauge_term(2, DiracChart::South, &p).unwrap();
            for i in 0..4 {
                assert!((n.components[i] - s.components[i] - (g1[i] - g2[i])).abs() < 1e-11);
            }
        }
    }

    fn slopes(residual: impl Fn(f64) -> f64) -> (f64, f64) {
        let (r1, r2, r3) = (residual(0.04), residual(0.02), residual(0.01));
        ((r1 / r2).log2(), (r2 / r3).log2())
    }

    #[test]
    fn lifted_dirac_connection_is_anti_self_dual() {
        let pts = curvature_sample_points();
        for mass in [0.0, 1.0] {
            let (s1, s2) = slopes(|h| dirac_lift_asd_residual(1, mass, &pts, h).unwrap());
            assert!(s1 >= 1.8 && s2 >= 1.8, "mass {mass}: {s1} {s2}");
        }
        let (s1, s2) = slopes(|h| dirac_lift_flatness_residual(1, &pts, h).unwrap());
        assert!(s1 >= 1.8 && s2 >= 1.8);
        // with the opposite orientation the massive lift is far from ASD
        let f = curvature_fd(|p| lift_dirac_connection_in(1, 1.0, DiracChart::North, p), pts[0], 0.01).unwrap();
        let mut flipped = f;
        for row in flipped.iter_mut() {
            row.swap(2, 3);
        }
        flipped.swap(2, 3);
        assert!(self_dual_part_norm(&flipped) > 1.0);
    }

    #[test]
    fn lifted_curvature_norm() {
        // |F̂|² = 2 |d(h⁻¹φ)|² and h⁻¹φ = 2vρ − k, so |F̂|² = 8v².
        for x in curvature_sample_points() {
            for (k, v) in [(1, 1.0), (2, 0.5), (-1, 3.0)] {
                let f = curvature_fd(|p| lift_dirac_connection_in(k, v, DiracChart::North, p), x, 1e-4).unwrap();
                let n = two_form_norm_sq(&f);
                assert!((n - 8.0 * v * v).abs() < 1e-6 * 8.0 * v * v, "{n}");
            }
        }
    }

    #[test]
    fn section_lift_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in [-2i64, 1, 3] {
            let p = random_point(&mut rng);
            let a: [Complex64; 3] = std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let psi = Complex64::new(0.3, -0.9);
            let s = 1.1;
            let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let ru = Quat4Point::from_real(u).rotated(s).to_real();
            let before = lift_section(k, a, psi, &p).unwrap();
            let after = lift_section(k, a, psi, &p.rotated(s)).unwrap();
            let pair = |f: [Complex64; 4], u: [f64; 4]| (0..4).map(|i| f[i] * u[i]).sum::<Complex64>();
            let expected = Complex64::from_polar(1.0, k as f64 * s) * pair(before, u);
            assert!((pair(after, ru) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn chart_axes_are_rejected() {
        let on_axis = Quat4Point::from_real([0.0, 0.0, 1.0, 0.0]);
        assert_eq!(lift_dirac_connection_in(1, 0.0, DiracChart::North, &on_axis), Err(HopfError::ChartAxis(1)));
        assert!(lift_dirac_connection(1, 0.0, &on_axis).is_ok());
    }
}
