//! Team-level ball possession prediction.
//!
//! Each non-goalie robot gets a "gain time" from a named [`GainEstimator`];
//! the fastest robot of each team is compared, with an optional pessimism
//! factor on the opponent.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ball::BallState;
use crate::error::{invalid, Error, Result};
use crate::format::sig6;
use crate::pursuit::{predict_pursuit, PursuitConfig};
use crate::robot::{travel_time_1d, RobotKinematics, RobotState};

/// Earliest trajectory sample the robot can reach (at rest) no later than the
/// ball. +inf if the ball stops or leaves the field first.
pub fn interception_time(
    robot: &RobotState,
    ball: &BallState,
    kin: &RobotKinematics,
    cfg: &PursuitConfig,
) -> Result<f64> {
    ball.validate()?;
    robot.validate()?;
    cfg.validate()?;
    kin.validate()?;
    let model = &cfg.ball_model;
    let stop_time = model.stop_time(ball.velocity);
    let mut k: u64 = 0;
    loop {
        let t = k as f64 * cfg.dt;
        if t > stop_time {
            return Ok(f64::INFINITY);
        }
        let point = model.predict_position(ball.position, ball.velocity, t)?;
        if !cfg.field.contains(point) {
            return Ok(f64::INFINITY);
        }
        let offset = point - robot.position;
        let distance = offset.norm();
        let v_start = if distance > 0.0 {
            (robot.velocity.dot(offset) / distance).clamp(0.0, kin.v_max)
        } else {
            0.0
        };
        if travel_time_1d(distance, v_start, 0.0, kin)? <= t {
            return Ok(t);
        }
        k += 1;
    }
}

/// Pursuit time from the search-based pursuit predictor, using `kin`.
pub fn pursuit_time(robot: &RobotState, ball: &BallState, kin: &RobotKinematics, cfg: &PursuitConfig) -> Result<f64> {
    let cfg = PursuitConfig { kin: *kin, ..*cfg };
    Ok(predict_pursuit(ball, robot, &cfg)?.time)
}

/// min(interception, pursuit).
pub fn gain_time(robot: &RobotState, ball: &BallState, kin: &RobotKinematics, cfg: &PursuitConfig) -> Result<f64> {
    let intercept = interception_time(robot, ball, kin, cfg)?;
    let pursue = pursuit_time(robot, ball, kin, cfg)?;
    Ok(intercept.min(pursue))
}

/// A way of estimating how long a robot needs to gain the ball.
pub trait GainEstimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn estimate(&self, robot: &RobotState, ball: &BallState, kin: &RobotKinematics, cfg: &PursuitConfig)
        -> Result<f64>;
}

pub struct PursuitEstimator;
pub struct InterceptionEstimator;
/// Faster of interception and pursuit.
pub struct MinEstimator;

impl GainEstimator for PursuitEstimator {
    fn name(&self) -> &'static str {
        "pursuit"
    }
    fn estimate(
        &self,
        robot: &RobotState,
        ball: &BallState,
        kin: &RobotKinematics,
        cfg: &PursuitConfig,
    ) -> Result<f64> {
        pursuit_time(robot, ball, kin, cfg)
    }
}

impl GainEstimator for InterceptionEstimator {
    fn name(&self) -> &'static str {
        "interception"
    }
    fn estimate(
        &self,
        robot: &RobotState,
        ball: &BallState,
        kin: &RobotKinematics,
        cfg: &PursuitConfig,
    ) -> Result<f64> {
        interception_time(robot, ball, kin, cfg)
    }
}

impl GainEstimator for MinEstimator {
    fn name(&self) -> &'static str {
        "min"
    }
    fn estimate(
        &self,
        robot: &RobotState,
        ball: &BallState,
        kin: &RobotKinematics,
        cfg: &PursuitConfig,
    ) -> Result<f64> {
        gain_time(robot, ball, kin, cfg)
    }
}

pub type BoxedEstimator = Box<dyn GainEstimator>;

/// Gain estimators looked up by name.
pub struct EstimatorRegistry {
    entries: BTreeMap<&'static str, BoxedEstimator>,
}

impl Default for EstimatorRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(MinEstimator));
        reg.register(Box::new(PursuitEstimator));
        reg.register(Box::new(InterceptionEstimator));
        reg
    }
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Adds an estimator, replacing any previous one with the same name.
    pub fn register(&mut self, estimator: BoxedEstimator) {
        self.entries.insert(estimator.name(), estimator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn GainEstimator> {
        self.entries
            .get(name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEstimator(name.to_owned()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub id: u32,
    #[serde(flatten)]
    pub state: RobotState,
    #[serde(default)]
    pub is_goalie: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamSnapshot {
    pub robots: Vec<RosterEntry>,
    pub kin: RobotKinematics,
}

impl TeamSnapshot {
    pub fn new(robots: Vec<RosterEntry>, kin: RobotKinematics) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &robots {
            if !seen.insert(r.id) {
                return Err(invalid("robots", format!("duplicate robot id {}", r.id)));
            }
            r.state.validate()?;
        }
        kin.validate()?;
        Ok(Self { robots, kin })
    }

    fn field_players(&self) -> impl Iterator<Item = &RosterEntry> {
        self.robots.iter().filter(|r| !r.is_goalie)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PossessionConfig {
    /// Margin (s) below which neither team is credited.
    pub tie_epsilon: f64,
    /// Multiplier applied to every opponent gain time.
    pub opponent_factor: f64,
    pub our_estimator: String,
    pub their_estimator: String,
}

impl Default for PossessionConfig {
    fn default() -> Self {
        Self {
            tie_epsilon: 0.05,
            opponent_factor: 1.0,
            our_estimator: "min".to_owned(),
            their_estimator: "min".to_owned(),
        }
    }
}

impl PossessionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tie_epsilon >= 0.0 && self.tie_epsilon.is_finite()) {
            return Err(invalid("tie_epsilon", "must be non-negative"));
        }
        if !(self.opponent_factor > 0.0 && self.opponent_factor.is_finite()) {
            return Err(invalid("opponent_factor", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Ours,
    Theirs,
    Contested,
}

impl Verdict {
    pub fn swapped(self) -> Self {
        match self {
            Verdict::Ours => Verdict::Theirs,
            Verdict::Theirs => Verdict::Ours,
            Verdict::Contested => Verdict::Contested,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestRobot {
    pub id: u32,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PossessionReport {
    pub verdict: Verdict,
    pub our_best: BestRobot,
    pub their_best: BestRobot,
    /// their_best.time - our_best.time (0 when equal, including both infinite).
    pub margin: f64,
}

/// Wire form of [`PossessionReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PossessionReportJson {
    pub verdict: Verdict,
    pub our_best_id: u32,
    pub our_best_time_s: Option<f64>,
    pub their_best_id: u32,
    pub their_best_time_s: Option<f64>,
    pub margin_s: Option<f64>,
}

fn finite_sig6(x: f64) -> Option<f64> {
    x.is_finite().then(|| sig6(x))
}

impl PossessionReport {
    pub fn to_json(&self) -> PossessionReportJson {
        PossessionReportJson {
            verdict: self.verdict,
            our_best_id: self.our_best.id,
            our_best_time_s: finite_sig6(self.our_best.time),
            their_best_id: self.their_best.id,
            their_best_time_s: finite_sig6(self.their_best.time),
            margin_s: finite_sig6(self.margin),
        }
    }
}

/// Argmin over (id, time) pairs; ties keep the earliest entry.
fn fastest(times: impl IntoIterator<Item = (u32, f64)>) -> Option<BestRobot> {
    times
        .into_iter()
        .fold(None, |best: Option<BestRobot>, (id, time)| match best {
            Some(b) if b.time <= time => Some(b),
            _ => Some(BestRobot { id, time }),
        })
}

/// Verdict from already-computed per-robot times (opponent factor applied).
pub fn decide(our_times: &[(u32, f64)], their_times: &[(u32, f64)], tie_epsilon: f64) -> Result<PossessionReport> {
    let our_best =
        fastest(our_times.iter().copied()).ok_or_else(|| Error::IllPosed("our team has no field players".into()))?;
    let their_best = fastest(their_times.iter().copied())
        .ok_or_else(|| Error::IllPosed("their team has no field players".into()))?;
    let margin = if our_best.time == their_best.time {
        0.0
    } else {
        their_best.time - our_best.time
    };
    let verdict = if margin > tie_epsilon {
        Verdict::Ours
    } else if margin < -tie_epsilon {
        Verdict::Theirs
    } else {
        Verdict::Contested
    };
    Ok(PossessionReport {
        verdict,
        our_best,
        their_best,
        margin,
    })
}

fn team_times(
    team: &TeamSnapshot,
    estimator: &dyn GainEstimator,
    ball: &BallState,
    cfg: &PursuitConfig,
    factor: f64,
) -> Result<Vec<(u32, f64)>> {
    team.field_players()
        .map(|r| Ok((r.id, estimator.estimate(&r.state, ball, &team.kin, cfg)? * factor)))
        .collect()
}

pub fn predict_possession(
    ours: &TeamSnapshot,
    theirs: &TeamSnapshot,
    ball: &BallState,
    cfg: &PursuitConfig,
    possession: &PossessionConfig,
    registry: &EstimatorRegistry,
) -> Result<PossessionReport> {
    possession.validate()?;
    let our_est = registry.get(&possession.our_estimator)?;
    let their_est = registry.get(&possession.their_estimator)?;
    let our_times = team_times(ours, our_est, ball, cfg, 1.0)?;
    let their_times = team_times(theirs, their_est, ball, cfg, possession.opponent_factor)?;
    decide(&our_times, &their_times, possession.tie_epsilon)
}
