//! Single JSON document carrying every tunable. Missing keys take defaults,
//! unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ball::BallMotionModel;
use crate::dribbler::{DribblerParams, DEFAULT_BAND_FRACTION};
use crate::error::{invalid, Result};
use crate::geometry::FieldBounds;
use crate::possession::PossessionConfig;
use crate::pursuit::PursuitConfig;
use crate::robot::RobotKinematics;
use crate::scheduler::SchedulerConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchSettings {
    pub dt: f64,
    pub t_thres: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        let d = PursuitConfig::default();
        Self {
            dt: d.dt,
            t_thres: d.t_thres,
            omega1: d.omega1,
            omega2: d.omega2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DribblerSettings {
    #[serde(flatten)]
    pub params: DribblerParams,
    pub band_fraction: f64,
}

impl Default for DribblerSettings {
    fn default() -> Self {
        Self {
            params: DribblerParams::default(),
            band_fraction: DEFAULT_BAND_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub pursuit: SearchSettings,
    pub field: FieldBounds,
    pub ball: BallMotionModel,
    pub robot: RobotKinematics,
    pub possession: PossessionConfig,
    pub dribbler: DribblerSettings,
    pub scheduler: SchedulerConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn pursuit_config(&self) -> PursuitConfig {
        PursuitConfig {
            dt: self.pursuit.dt,
            t_thres: self.pursuit.t_thres,
            omega1: self.pursuit.omega1,
            omega2: self.pursuit.omega2,
            field: self.field,
            ball_model: self.ball,
            kin: self.robot,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.pursuit_config().validate()?;
        self.possession.validate()?;
        self.dribbler.params.validate()?;
        let bf = self.dribbler.band_fraction;
        if !(bf > 0.0 && bf < 1.0) {
            return Err(invalid("band_fraction", "must lie in (0, 1)"));
        }
        self.scheduler.validate()
    }
}
