//! Planar vectors, angle wrapping and field bounds.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Error, Result};

/// A point or velocity on the field plane (m or m/s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Checked constructor for values crossing an API boundary.
    pub fn finite(x: f64, y: f64) -> Result<Self> {
        Ok(Self {
            x: ensure_finite(x, "x")?,
            y: ensure_finite(y, "y")?,
        })
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Unit vector, or zero for the zero vector.
    pub fn unit_or_zero(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            Vec2::ZERO
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into (-π, π].
///
/// Values already inside the interval are returned untouched, which makes the
/// function exactly idempotent.
pub fn normalize_angle(theta: f64) -> Result<f64> {
    ensure_finite(theta, "angle")?;
    Ok(wrap(theta))
}

pub(crate) fn wrap(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Unsigned angle between two vectors, in [0, π].
pub fn angle_between(a: Vec2, b: Vec2) -> Result<f64> {
    let (na, nb) = (a.norm(), b.norm());
    if !(na > 0.0 && nb > 0.0) {
        return Err(Error::DegenerateVector);
    }
    let c = (a.dot(b) / (na * nb)).clamp(-1.0, 1.0);
    Ok(c.acos())
}

/// Axis-aligned playing area centred on the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBounds {
    pub half_length: f64,
    pub half_width: f64,
}

impl Default for FieldBounds {
    /// 12 m x 9 m division A field.
    fn default() -> Self {
        Self {
            half_length: 6.0,
            half_width: 4.5,
        }
    }
}

impl FieldBounds {
    pub fn new(half_length: f64, half_width: f64) -> Result<Self> {
        let bounds = Self {
            half_length,
            half_width,
        };
        bounds.validate()?;
        Ok(bounds)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            return Err(invalid("half_length", "must be positive"));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(invalid("half_width", "must be positive"));
        }
        Ok(())
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x.abs() <= self.half_length && p.y.abs() <= self.half_width
    }
}
