//! Trapezoidal arrival-time model for a robot driving straight at a target.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{wrap, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RobotState {
    pub position: Vec2,
    pub velocity: Vec2,
    /// Heading in (-π, π]; carried for reporting only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yaw: Option<f64>,
}

impl RobotState {
    pub fn new(position: Vec2, velocity: Vec2) -> Self {
        Self {
            position,
            velocity,
            yaw: None,
        }
    }

    pub fn at_rest(position: Vec2) -> Self {
        Self::new(position, Vec2::ZERO)
    }

    pub fn with_yaw(mut self, yaw: f64) -> Self {
        self.yaw = Some(wrap(yaw));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.position.is_finite() {
            return Err(Error::NonFinite("robot position"));
        }
        if !self.velocity.is_finite() {
            return Err(Error::NonFinite("robot velocity"));
        }
        match self.yaw {
            Some(y) if !y.is_finite() => Err(Error::NonFinite("robot yaw")),
            _ => Ok(()),
        }
    }
}

/// Speed and acceleration limits of the trapezoidal profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotKinematics {
    pub v_max: f64,
    pub a_max: f64,
}

impl Default for RobotKinematics {
    fn default() -> Self {
        Self { v_max: 3.0, a_max: 3.0 }
    }
}

impl RobotKinematics {
    pub fn new(v_max: f64, a_max: f64) -> Result<Self> {
        let kin = Self { v_max, a_max };
        kin.validate()?;
        Ok(kin)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return Err(invalid("v_max", "must be positive and finite"));
        }
        if !(self.a_max > 0.0 && self.a_max.is_finite()) {
            return Err(invalid("a_max", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Minimum time to cover `distance` starting at `v_start` and finishing at
/// `v_end`, with |acceleration| <= a_max and speed in [0, v_max].
///
/// When the distance is too short to change speed from `v_start` to `v_end`,
/// the kinematic floor |v_end - v_start| / a_max is returned.
pub fn travel_time_1d(distance: f64, v_start: f64, v_end: f64, kin: &RobotKinematics) -> Result<f64> {
    let RobotKinematics { v_max, a_max } = *kin;
    if !(distance >= 0.0 && distance.is_finite()) {
        return Err(invalid("distance", "must be finite and non-negative"));
    }
    if !(0.0..=v_max).contains(&v_start) {
        return Err(invalid("v_start", format!("{v_start} outside [0, {v_max}]")));
    }
    if !(0.0..=v_max).contains(&v_end) {
        return Err(invalid("v_end", format!("{v_end} outside [0, {v_max}]")));
    }

    let (u, w) = (v_start, v_end);
    let ramp_distance = (w * w - u * u).abs() / (2.0 * a_max);
    if distance < ramp_distance {
        return Ok((w - u).abs() / a_max);
    }

    // Peak speed of the triangular profile.
    let peak_sq = a_max * distance + 0.5 * (u * u + w * w);
    if peak_sq <= v_max * v_max {
        let peak = peak_sq.sqrt();
        return Ok((2.0 * peak - u - w) / a_max);
    }

    let ramps = (2.0 * v_max - u - w) / a_max;
    let ramp_len = (2.0 * v_max * v_max - u * u - w * w) / (2.0 * a_max);
    Ok(ramps + (distance - ramp_len) / v_max)
}

/// Time for the robot to reach `target` moving at `target_speed`.
///
/// Motion is reduced to the straight chase line. The start speed is the
/// robot's velocity component toward the target, floored at zero. A
/// `target_speed` above `v_max` can never be matched and yields +inf.
pub fn predict_robot_arrival_time(
    robot: &RobotState,
    target: Vec2,
    target_speed: f64,
    kin: &RobotKinematics,
) -> Result<f64> {
    if target_speed.is_nan() || target_speed < 0.0 {
        return Err(invalid("target_speed", "must be non-negative"));
    }
    if target_speed > kin.v_max {
        return Ok(f64::INFINITY);
    }
    let offset = target - robot.position;
    let distance = offset.norm();
    let v_start = if distance > 0.0 {
        (robot.velocity.dot(offset) / distance).clamp(0.0, kin.v_max)
    } else {
        0.0
    };
    travel_time_1d(distance, v_start, target_speed, kin)
}
