//! Straight-line rolling ball under constant deceleration.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BallState {
    pub position: Vec2,
    pub velocity: Vec2,
}

impl BallState {
    pub fn new(position: Vec2, velocity: Vec2) -> Self {
        Self { position, velocity }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.position.is_finite() {
            return Err(Error::NonFinite("ball position"));
        }
        if !self.velocity.is_finite() {
            return Err(Error::NonFinite("ball velocity"));
        }
        Ok(())
    }
}

/// Rolling friction as a constant deceleration magnitude (m/s²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallMotionModel {
    pub deceleration: f64,
}

impl Default for BallMotionModel {
    fn default() -> Self {
        Self { deceleration: 0.5 }
    }
}

impl BallMotionModel {
    pub fn new(deceleration: f64) -> Result<Self> {
        let model = Self { deceleration };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.deceleration > 0.0 && self.deceleration.is_finite() {
            Ok(())
        } else {
            Err(invalid("deceleration", "must be positive and finite"))
        }
    }

    /// Time until the ball comes to rest.
    pub fn stop_time(&self, v0: Vec2) -> f64 {
        v0.norm() / self.deceleration
    }

    /// Distance rolled after `t` seconds, saturating at the stop distance.
    fn travelled(&self, speed: f64, t: f64) -> f64 {
        let t_stop = speed / self.deceleration;
        if t >= t_stop {
            speed * speed / (2.0 * self.deceleration)
        } else {
            speed * t - 0.5 * self.deceleration * t * t
        }
    }

    pub fn predict_velocity(&self, v0: Vec2, t: f64) -> Result<Vec2> {
        check_time(t)?;
        let speed = v0.norm();
        if t >= speed / self.deceleration {
            return Ok(Vec2::ZERO);
        }
        Ok(v0 * ((speed - self.deceleration * t) / speed))
    }

    pub fn predict_position(&self, p0: Vec2, v0: Vec2, t: f64) -> Result<Vec2> {
        check_time(t)?;
        let speed = v0.norm();
        if speed == 0.0 {
            return Ok(p0);
        }
        Ok(p0 + v0 * (self.travelled(speed, t) / speed))
    }

    pub fn stop_position(&self, p0: Vec2, v0: Vec2) -> Vec2 {
        let speed = v0.norm();
        if speed == 0.0 {
            return p0;
        }
        p0 + v0 * (self.travelled(speed, f64::INFINITY) / speed)
    }

    /// Ball state after `t` seconds.
    pub fn advance(&self, ball: &BallState, t: f64) -> Result<BallState> {
        Ok(BallState {
            position: self.predict_position(ball.position, ball.velocity, t)?,
            velocity: self.predict_velocity(ball.velocity, t)?,
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(invalid("t", "prediction time must be non-negative"))
    }
}
