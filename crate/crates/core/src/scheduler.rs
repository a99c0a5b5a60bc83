//! Two-rate decision scheduling.
//!
//! A slow evaluation picks a candidate (pass point, dribble target, ...) and
//! the choice is held for `hold_duration`. Every tick also runs a fast check for
//! an immediately executable direct pass or shot; a direct action is returned
//! for that tick only and leaves the held decision untouched.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchedulerConfig {
    pub slow_period: f64,
    pub hold_duration: f64,
    pub fast_period: f64,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            slow_period: 0.5,
            hold_duration: 5.0,
            // Vision frame rate, 74 Hz.
            fast_period: 1.0 / 74.0,
        }
    }
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("slow_period", self.slow_period),
            ("hold_duration", self.hold_duration),
            ("fast_period", self.fast_period),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        if self.fast_period > self.slow_period {
            return Err(invalid("fast_period", "must not exceed slow_period"));
        }
        Ok(())
    }
}

/// Output of a slow evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub decision_id: u64,
    pub payload: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeldDecision {
    pub decision_id: u64,
    pub payload: Vec2,
    pub chosen_at: f64,
    pub hold_duration: f64,
}

impl HeldDecision {
    pub fn is_active(&self, t: f64) -> bool {
        self.chosen_at <= t && t < self.chosen_at + self.hold_duration
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirectKind {
    Pass,
    Shot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectAction {
    pub kind: DirectKind,
    pub target: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TickOutput {
    Held(HeldDecision),
    Direct(DirectAction),
    /// Nothing held yet and no direct action.
    Idle,
}

#[derive(Debug, Clone)]
pub struct Scheduler {
    cfg: SchedulerConfig,
    held: Option<HeldDecision>,
    last_slow_eval: Option<f64>,
    last_tick: Option<f64>,
    slow_evals: usize,
}

impl Scheduler {
    pub fn new(cfg: SchedulerConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            held: None,
            last_slow_eval: None,
            last_tick: None,
            slow_evals: 0,
        })
    }

    pub fn config(&self) -> &SchedulerConfig {
        &self.cfg
    }

    pub fn held(&self) -> Option<&HeldDecision> {
        self.held.as_ref()
    }

    /// Number of slow evaluations run so far.
    pub fn slow_evals(&self) -> usize {
        self.slow_evals
    }

    /// Drops the held decision; the next tick re-evaluates.
    pub fn reset(&mut self) {
        self.held = None;
        self.last_slow_eval = None;
    }

    pub fn tick<W, S, F>(&mut self, now: f64, world: &W, slow_eval: S, fast_check: F) -> Result<TickOutput>
    where
        S: FnOnce(&W) -> Option<Candidate>,
        F: FnOnce(&W) -> Option<DirectAction>,
    {
        if !now.is_finite() {
            return Err(Error::NonFinite("tick time"));
        }
        if let Some(last) = self.last_tick {
            if now < last {
                return Err(Error::ClockRegression { now, last });
            }
        }
        self.last_tick = Some(now);

        let holding = self.held.is_some_and(|h| h.is_active(now));
        let slow_due = self
            .last_slow_eval
            .is_none_or(|last| now - last >= self.cfg.slow_period);
        if !holding && slow_due {
            self.last_slow_eval = Some(now);
            self.slow_evals += 1;
            self.held = slow_eval(world).map(|c| HeldDecision {
                decision_id: c.decision_id,
                payload: c.payload,
                chosen_at: now,
                hold_duration: self.cfg.hold_duration,
            });
        }

        if let Some(direct) = fast_check(world) {
            return Ok(TickOutput::Direct(direct));
        }
        Ok(match self.held {
            Some(h) => TickOutput::Held(h),
            None => TickOutput::Idle,
        })
    }
}
