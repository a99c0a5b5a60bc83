//! Search-based ball pursuit prediction.
//!
//! The ball trajectory is sampled every `dt` seconds. At each sample the robot's
//! arrival time (with terminal speed matched to the ball) plus a detour penalty
//! is compared against the ball's own time to reach that sample; the first
//! sample where the robot is not later than the ball by more than `t_thres`
//! is the pursuit point.

use serde::{Deserialize, Serialize};

use crate::ball::{BallMotionModel, BallState};
use crate::error::{invalid, Result};
use crate::geometry::{angle_between, FieldBounds, Vec2};
use crate::robot::{predict_robot_arrival_time, RobotKinematics, RobotState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PursuitConfig {
    /// Search step along the ball trajectory (s).
    pub dt: f64,
    /// Accepted lateness of the robot relative to the ball (s).
    pub t_thres: f64,
    /// Detour cost scale (s).
    pub omega1: f64,
    /// Detour cost decay length (m).
    pub omega2: f64,
    pub field: FieldBounds,
    pub ball_model: BallMotionModel,
    pub kin: RobotKinematics,
}

impl Default for PursuitConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            t_thres: 0.02,
            omega1: 2.0,
            omega2: 5.0,
            field: FieldBounds::default(),
            ball_model: BallMotionModel::default(),
            kin: RobotKinematics::default(),
        }
    }
}

impl PursuitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", "must be positive"));
        }
        if !(self.t_thres > 0.0 && self.t_thres.is_finite()) {
            return Err(invalid("t_thres", "must be positive"));
        }
        if !(self.omega1 >= 0.0 && self.omega1.is_finite()) {
            return Err(invalid("omega1", "must be non-negative"));
        }
        if !(self.omega2 > 0.0 && self.omega2.is_finite()) {
            return Err(invalid("omega2", "must be positive"));
        }
        self.field.validate()?;
        self.ball_model.validate()?;
        self.kin.validate()
    }

    /// Same configuration with a different search step.
    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Converged,
    BallStopped,
    OutOfField,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PursuitResult {
    pub point: Vec2,
    pub time: f64,
    pub termination: Termination,
}

/// Penalty for encounters that require driving around the ball.
///
/// `theta` is 0 when the robot sits behind the ball's motion and π when it is
/// directly ahead; the penalty decays with the robot-ball distance `r`.
pub fn detour_cost(r: f64, theta: f64, omega1: f64, omega2: f64) -> f64 {
    omega1 * (-r / omega2).exp() * (1.0 - theta.cos())
}

/// Encounter geometry (r, θ) evaluated once from the initial states.
fn encounter_cost(ball: &BallState, robot: &RobotState, cfg: &PursuitConfig) -> f64 {
    let to_ball = ball.position - robot.position;
    let r = to_ball.norm();
    match angle_between(to_ball, ball.velocity) {
        Ok(theta) => detour_cost(r, theta, cfg.omega1, cfg.omega2),
        // Ball at rest, or robot exactly on the ball.
        Err(_) => 0.0,
    }
}

pub fn predict_pursuit(ball: &BallState, robot: &RobotState, cfg: &PursuitConfig) -> Result<PursuitResult> {
    ball.validate()?;
    robot.validate()?;
    cfg.validate()?;

    let model = &cfg.ball_model;
    let cost = encounter_cost(ball, robot, cfg);
    let stop_time = model.stop_time(ball.velocity);

    let mut last_in_field: Option<(Vec2, f64)> = None;
    let mut k: u64 = 0;
    loop {
        let t = k as f64 * cfg.dt;
        if t > stop_time {
            let point = model.stop_position(ball.position, ball.velocity);
            let time = predict_robot_arrival_time(robot, point, 0.0, &cfg.kin)? + cost;
            return Ok(PursuitResult {
                point,
                time,
                termination: Termination::BallStopped,
            });
        }

        let point = model.predict_position(ball.position, ball.velocity, t)?;
        let speed = model.predict_velocity(ball.velocity, t)?.norm();
        let arrival = predict_robot_arrival_time(robot, point, speed, &cfg.kin)? + cost;

        if !cfg.field.contains(point) {
            // A ball that starts outside has no earlier in-field sample.
            let (point, time) = last_in_field.unwrap_or((point, arrival));
            return Ok(PursuitResult {
                point,
                time,
                termination: Termination::OutOfField,
            });
        }

        // Covers both the ±t_thres band and early arrival (T_k <= kΔt).
        if arrival - t <= cfg.t_thres {
            return Ok(PursuitResult {
                point,
                time: arrival,
                termination: Termination::Converged,
            });
        }

        last_in_field = Some((point, arrival));
        k += 1;
    }
}
