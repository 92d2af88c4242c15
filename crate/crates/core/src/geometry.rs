//! Base geometry: points of `R² × S¹` with the circle of length `2π`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point `(z, t)` of `C × R/2πZ`. `t` is stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawPoint", into = "RawPoint")]
pub struct CirclePoint3 {
    z: Complex64,
    t: f64,
}

impl CirclePoint3 {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { z: Complex64::new(x, y), t: reduce_angle(t) }
    }

    pub fn from_complex(z: Complex64, t: f64) -> Self {
        Self { z, t: reduce_angle(t) }
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn x(&self) -> f64 {
        self.z.re
    }

    pub fn y(&self) -> f64 {
        self.z.im
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Displacement from `origin` to `self`: planar offset and the circle
    /// offset in `(-π, π]`.
    pub fn offset_from(&self, origin: &CirclePoint3) -> (Complex64, f64) {
        (self.z - origin.z, wrap_signed(self.t - origin.t))
    }

    /// Product-metric distance with circle distance `min(|Δt|, 2π − |Δt|)`.
    pub fn distance(&self, other: &CirclePoint3) -> f64 {
        let (dz, dt) = self.offset_from(other);
        dz.norm().hypot(dt)
    }

    /// Translate by a planar vector and a circle shift.
    pub fn translated(&self, dz: Complex64, dt: f64) -> Self {
        Self::from_complex(self.z + dz, self.t + dt)
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_signed(t: f64) -> f64 {
    let r = reduce_angle(t);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
    t: f64,
}

impl From<RawPoint> for CirclePoint3 {
    fn from(p: RawPoint) -> Self {
        CirclePoint3::new(p.x, p.y, p.t)
    }
}

impl From<CirclePoint3> for RawPoint {
    fn from(p: CirclePoint3) -> Self {
        RawPoint { x: p.x(), y: p.y(), t: p.t() }
    }
}
