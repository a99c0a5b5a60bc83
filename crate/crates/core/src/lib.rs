//! Motion prediction and simulation for small-size robot soccer.
//!
//! - [`pursuit`]: search for the point where a robot catches a rolling ball
//!   with matched speed, plus [`heatmap`] fields of that time.
//! - [`possession`]: which team reaches a free ball first.
//! - [`imu_yaw`]: yaw offset between vision and IMU frames.
//! - [`dribbler`]: ball / dribbler impact simulation.
//! - [`scheduler`]: slow candidate selection with timed holding and fast
//!   direct-action checks.

pub mod ball;
pub mod config;
pub mod dribbler;
pub mod error;
pub mod format;
pub mod geometry;
pub mod heatmap;
pub mod imu_yaw;
pub mod possession;
pub mod pursuit;
pub mod robot;
pub mod scheduler;

pub use ball::{BallMotionModel, BallState};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use geometry::{angle_between, normalize_angle, FieldBounds, Vec2};
pub use heatmap::{pursuit_heatmap, GridSpec, HeatmapGrid};
pub use possession::{predict_possession, EstimatorRegistry, GainEstimator, PossessionReport, TeamSnapshot, Verdict};
pub use pursuit::{detour_cost, predict_pursuit, PursuitConfig, PursuitResult, Termination};
pub use robot::{predict_robot_arrival_time, travel_time_1d, RobotKinematics, RobotState};
