//! Pursuit-time fields over a grid of robot start positions.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::BallState;
use crate::error::{invalid, Result};
use crate::format::fmt_num;
use crate::geometry::Vec2;
use crate::pursuit::{predict_pursuit, PursuitConfig};
use crate::robot::RobotState;

/// Lattice of sample points: cell (i, j) sits at `origin + (i, j) * cell_size`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec2,
    pub cell_size: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Grid of `nx` x `ny` points centred on `center`.
    pub fn centered(center: Vec2, cell_size: f64, nx: usize, ny: usize) -> Self {
        let half = Vec2::new(
            (nx.saturating_sub(1)) as f64 * cell_size / 2.0,
            (ny.saturating_sub(1)) as f64 * cell_size / 2.0,
        );
        Self {
            origin: center - half,
            cell_size,
            nx,
            ny,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(invalid("grid", "dimensions must be at least 1"));
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return Err(invalid("cell_size", "must be positive"));
        }
        if !self.origin.is_finite() {
            return Err(invalid("origin", "must be finite"));
        }
        Ok(())
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new(i as f64 * self.cell_size, j as f64 * self.cell_size)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    pub origin: Vec2,
    pub cell_size: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major (`j * nx + i`) pursuit times in seconds; +inf allowed.
    pub values: Vec<f64>,
}

/// Affine gray-level mapping used for PGM output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrayMapping {
    pub min_s: f64,
    pub max_s: f64,
}

impl GrayMapping {
    pub const INF_LEVEL: u8 = 255;
    pub const MAX_FINITE_LEVEL: u8 = 254;

    pub fn level(&self, t: f64) -> u8 {
        if !t.is_finite() {
            return Self::INF_LEVEL;
        }
        let span = self.max_s - self.min_s;
        if span <= 0.0 {
            return 0;
        }
        let scaled = (t - self.min_s) / span * f64::from(Self::MAX_FINITE_LEVEL);
        scaled.round().clamp(0.0, f64::from(Self::MAX_FINITE_LEVEL)) as u8
    }

    pub fn describe(&self) -> String {
        format!(
            "format: P5 8-bit, top row = largest y\n\
             gray = round({max} * (time_s - min_s) / (max_s - min_s))\n\
             min_s = {min}\nmax_s = {maxs}\ninf -> {inf}\n",
            max = Self::MAX_FINITE_LEVEL,
            min = fmt_num(self.min_s),
            maxs = fmt_num(self.max_s),
            inf = Self::INF_LEVEL,
        )
    }
}

impl HeatmapGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            origin: self.origin,
            cell_size: self.cell_size,
            nx: self.nx,
            ny: self.ny,
        }
    }

    /// `x,y,time_s` rows in row-major order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,time_s")?;
        let spec = self.spec();
        for j in 0..self.ny {
            for i in 0..self.nx {
                let p = spec.cell_center(i, j);
                writeln!(out, "{},{},{}", fmt_num(p.x), fmt_num(p.y), fmt_num(self.get(i, j)))?;
            }
        }
        Ok(())
    }

    pub fn gray_mapping(&self) -> GrayMapping {
        let finite = self.values.iter().copied().filter(|v| v.is_finite());
        let (min_s, max_s) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if min_s > max_s {
            GrayMapping { min_s: 0.0, max_s: 0.0 }
        } else {
            GrayMapping { min_s, max_s }
        }
    }

    /// Binary P5 image; returns the mapping so callers can record it.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<GrayMapping> {
        let mapping = self.gray_mapping();
        write!(out, "P5\n{} {}\n255\n", self.nx, self.ny)?;
        let mut row = Vec::with_capacity(self.nx);
        for j in (0..self.ny).rev() {
            row.clear();
            row.extend((0..self.nx).map(|i| mapping.level(self.get(i, j))));
            out.write_all(&row)?;
        }
        Ok(mapping)
    }
}

/// Pursuit time for a robot starting at rest on every grid point.
///
/// Cells are independent and collected in index order, so the output does not
/// depend on the thread count.
pub fn pursuit_heatmap(ball: &BallState, grid: &GridSpec, cfg: &PursuitConfig) -> Result<HeatmapGrid> {
    grid.validate()?;
    ball.validate()?;
    cfg.validate()?;
    let values = (0..grid.nx * grid.ny)
        .into_par_iter()
        .map(|idx| {
            let robot = RobotState::at_rest(grid.cell_center(idx % grid.nx, idx / grid.nx));
            predict_pursuit(ball, &robot, cfg).map(|r| r.time)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(HeatmapGrid {
        origin: grid.origin,
        cell_size: grid.cell_size,
        nx: grid.nx,
        ny: grid.ny,
        values,
    })
}
