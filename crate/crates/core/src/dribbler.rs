//! One-dimensional ball / dribbler impact model.
//!
//! The ball (mass m, position x1) hits a dribbler (mass M, position x2) that
//! hangs on a spring-damper mount (k2, c2). While `x1 - x2 >= 0` the two are
//! coupled by a contact spring-damper (k1, c1); otherwise they move freely. A
//! constant force `f` pushes the ball in both regimes.
//!
//! Integration is classical RK4 at a fixed step. When the contact regime flips
//! inside a step, the crossing is located by bisection and the rest of the
//! step is integrated in the new regime.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::format::fmt_num;

pub const DEFAULT_BAND_FRACTION: f64 = 0.02;

/// Masses swept in the reference study.
pub const REFERENCE_MASSES: [f64; 3] = [0.05, 0.15, 0.25];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DribblerParams {
    /// Dribbler mass M (kg).
    #[serde(rename = "M")]
    pub dribbler_mass: f64,
    /// Ball mass m (kg).
    #[serde(rename = "m")]
    pub ball_mass: f64,
    /// Ball / dribble-bar contact stiffness k1 (N/m).
    #[serde(rename = "k1")]
    pub contact_stiffness: f64,
    /// Dribbler mount stiffness k2 (N/m).
    #[serde(rename = "k2")]
    pub mount_stiffness: f64,
    /// Contact damping c1 (N·s/m).
    #[serde(rename = "c1")]
    pub contact_damping: f64,
    /// Mount damping c2 (N·s/m).
    #[serde(rename = "c2")]
    pub mount_damping: f64,
    /// Initial ball speed (m/s).
    #[serde(rename = "v0")]
    pub ball_speed: f64,
    /// Constant force on the ball (N).
    #[serde(rename = "f")]
    pub force: f64,
    pub dt: f64,
    pub t_end: f64,
}

impl Default for DribblerParams {
    fn default() -> Self {
        Self {
            dribbler_mass: 0.15,
            ball_mass: 0.046,
            contact_stiffness: 4000.0,
            mount_stiffness: 100.0,
            contact_damping: 5.0,
            mount_damping: 20.0,
            ball_speed: 2.0,
            force: 0.13524,
            dt: 1e-4,
            t_end: 1.0,
        }
    }
}

impl DribblerParams {
    pub fn with_mass(mut self, dribbler_mass: f64) -> Self {
        self.dribbler_mass = dribbler_mass;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("M", self.dribbler_mass),
            ("m", self.ball_mass),
            ("k1", self.contact_stiffness),
            ("k2", self.mount_stiffness),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        for (name, v) in [("c1", self.contact_damping), ("c2", self.mount_damping)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be non-negative and finite"));
            }
        }
        for (name, v) in [("v0", self.ball_speed), ("f", self.force)] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if !(self.t_end > self.dt && self.t_end.is_finite()) {
            return Err(invalid("t_end", "must exceed dt"));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// (x1, v1, x2, v2)
type State = [f64; 4];

fn in_contact(s: &State) -> bool {
    s[0] - s[2] >= 0.0
}

fn derivative(p: &DribblerParams, s: &State, contact: bool) -> State {
    let [x1, v1, x2, v2] = *s;
    let mut a1 = p.force / p.ball_mass;
    let mut a2 = (-p.mount_stiffness * x2 - p.mount_damping * v2) / p.dribbler_mass;
    if contact {
        let coupling = p.contact_stiffness * (x1 - x2) + p.contact_damping * (v1 - v2);
        a1 -= coupling / p.ball_mass;
        a2 += coupling / p.dribbler_mass;
    }
    [v1, a1, v2, a2]
}

fn axpy(s: &State, h: f64, d: &State) -> State {
    [s[0] + h * d[0], s[1] + h * d[1], s[2] + h * d[2], s[3] + h * d[3]]
}

fn rk4(p: &DribblerParams, s: &State, h: f64, contact: bool) -> State {
    let k1 = derivative(p, s, contact);
    let k2 = derivative(p, &axpy(s, h / 2.0, &k1), contact);
    let k3 = derivative(p, &axpy(s, h / 2.0, &k2), contact);
    let k4 = derivative(p, &axpy(s, h, &k3), contact);
    let mut out = *s;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

const MAX_SWITCHES_PER_STEP: usize = 8;
const BISECTION_ITERS: usize = 60;

fn step(p: &DribblerParams, s: &State, h: f64) -> State {
    let mut state = *s;
    let mut remaining = h;
    for _ in 0..MAX_SWITCHES_PER_STEP {
        let contact = in_contact(&state);
        let end = rk4(p, &state, remaining, contact);
        if in_contact(&end) == contact {
            return end;
        }
        // Smallest sub-step whose end lies in the other regime.
        let (mut lo, mut hi) = (0.0, remaining);
        for _ in 0..BISECTION_ITERS {
            let mid = 0.5 * (lo + hi);
            if in_contact(&rk4(p, &state, mid, contact)) == contact {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        state = rk4(p, &state, hi, contact);
        remaining -= hi;
        if remaining <= 0.0 {
            return state;
        }
    }
    rk4(p, &state, remaining, in_contact(&state))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DribblerTrace {
    pub times: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub in_contact: Vec<bool>,
}

impl DribblerTrace {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            x1: Vec::with_capacity(n),
            x2: Vec::with_capacity(n),
            v1: Vec::with_capacity(n),
            v2: Vec::with_capacity(n),
            in_contact: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, t: f64, s: &State) {
        self.times.push(t);
        self.x1.push(s[0]);
        self.v1.push(s[1]);
        self.x2.push(s[2]);
        self.v2.push(s[3]);
        self.in_contact.push(in_contact(s));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Kinetic energy plus mount and (when compressed) contact spring energy.
    pub fn mechanical_energy(&self, p: &DribblerParams) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let gap = (self.x1[i] - self.x2[i]).max(0.0);
                0.5 * p.ball_mass * self.v1[i] * self.v1[i]
                    + 0.5 * p.dribbler_mass * self.v2[i] * self.v2[i]
                    + 0.5 * p.mount_stiffness * self.x2[i] * self.x2[i]
                    + 0.5 * p.contact_stiffness * gap * gap
            })
            .collect()
    }

    /// `t,x1,x2,v1,v2,contact` rows, contact as 1/0.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,x1,x2,v1,v2,contact")?;
        for i in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_num(self.times[i]),
                fmt_num(self.x1[i]),
                fmt_num(self.x2[i]),
                fmt_num(self.v1[i]),
                fmt_num(self.v2[i]),
                u8::from(self.in_contact[i])
            )?;
        }
        Ok(())
    }
}

/// Integrates from x1 = x2 = 0, ẋ1 = v0, ẋ2 = 0 until `t_end`.
pub fn simulate(p: &DribblerParams) -> Result<DribblerTrace> {
    p.validate()?;
    let n = p.steps();
    let mut trace = DribblerTrace::with_capacity(n + 1);
    let mut state: State = [0.0, p.ball_speed, 0.0, 0.0];
    trace.push(0.0, &state);
    for i in 1..=n {
        state = step(p, &state, p.dt);
        let t = i as f64 * p.dt;
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step: i, time: t });
        }
        trace.push(t, &state);
    }
    Ok(trace)
}

/// Largest excursion of the ball from its start, max |x1|. Covers both the
/// forward compression and the rebound.
pub fn peak_displacement(trace: &DribblerTrace) -> Result<f64> {
    if trace.is_empty() {
        return Err(invalid("trace", "empty"));
    }
    Ok(trace.x1.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Earliest time after which x1 stays within `band_fraction * |x1(t_end)|`
/// of its final value.
pub fn settling_time(trace: &DribblerTrace, band_fraction: f64) -> Result<f64> {
    if !(band_fraction > 0.0 && band_fraction < 1.0) {
        return Err(invalid("band_fraction", "must lie in (0, 1)"));
    }
    if trace.is_empty() {
        return Err(invalid("trace", "empty"));
    }
    if peak_displacement(trace)? == 0.0 {
        return Ok(0.0);
    }
    let last = trace.len() - 1;
    let rest = trace.x1[last];
    let band = band_fraction * rest.abs();
    let settled_from = trace
        .x1
        .iter()
        .rposition(|x| (x - rest).abs() > band)
        .map_or(0, |i| i + 1);
    Ok(trace.times[settled_from.min(last)])
}

/// Number of separated stretches after the first contact sample.
pub fn separation_count(trace: &DribblerTrace) -> usize {
    let Some(first) = trace.in_contact.iter().position(|&c| c) else {
        return 0;
    };
    let mut count = 0;
    let mut prev = true;
    for &c in &trace.in_contact[first..] {
        if !c && prev {
            count += 1;
        }
        prev = c;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub dribbler_mass: f64,
    pub peak_m: f64,
    pub settling_s: f64,
    pub separations: usize,
}

/// Runs one simulation per dribbler mass (in parallel, output in input order).
pub fn sweep(base: &DribblerParams, masses: &[f64], band_fraction: f64) -> Result<Vec<SweepRow>> {
    masses
        .par_iter()
        .map(|&mass| {
            let trace = simulate(&base.with_mass(mass))?;
            Ok(SweepRow {
                dribbler_mass: mass,
                peak_m: peak_displacement(&trace)?,
                settling_s: settling_time(&trace, band_fraction)?,
                separations: separation_count(&trace),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "M,peak_m,settling_s,separations")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_num(r.dribbler_mass),
            fmt_num(r.peak_m),
            fmt_num(r.settling_s),
            r.separations
        )?;
    }
    Ok(())
}
