//! Yaw alignment between the vision frame and the on-board IMU frame.
//!
//! The IMU is mounted flat, so the two frames differ only by a rotation about
//! the vertical axis. The offset is re-estimated on every vision update.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Result};
use crate::geometry::wrap;

/// Rotation from the vision frame to the IMU frame, in (-π, π].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct YawOffset {
    pub delta_theta: f64,
}

/// Offset from simultaneous IMU and vision readings of the current yaw.
pub fn yaw_offset(current_imu: f64, current_ssl: f64) -> Result<YawOffset> {
    ensure_finite(current_imu, "imu yaw")?;
    ensure_finite(current_ssl, "vision yaw")?;
    Ok(YawOffset {
        delta_theta: wrap(current_imu - current_ssl),
    })
}

/// Vision-frame target yaw expressed in the IMU frame.
pub fn to_imu_frame(target_ssl: f64, offset: YawOffset) -> Result<f64> {
    ensure_finite(target_ssl, "vision yaw")?;
    Ok(wrap(target_ssl + offset.delta_theta))
}

/// IMU-frame yaw expressed in the vision frame.
pub fn to_ssl_frame(theta_imu: f64, offset: YawOffset) -> Result<f64> {
    ensure_finite(theta_imu, "imu yaw")?;
    Ok(wrap(theta_imu - offset.delta_theta))
}
