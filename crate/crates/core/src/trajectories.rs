//! Averaged (Bohm-type) trajectories through a velocity field.

use rayon::prelude::*;

use crate::analytic::total_velocity;
use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::interference::DoubleSlitSystem;
use crate::params::{PhysicalParams, SlitSource};

/// A velocity field `v(x, t)`. `None` marks points where the velocity is
/// undefined (vanishing density).
pub trait VelocityField: Sync {
    fn velocity(&self, x: f64, t: f64) -> Option<f64>;

    /// Spatial extent; trajectories leaving it are truncated.
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Velocity field of one spreading Gaussian.
#[derive(Debug, Clone, Copy)]
pub struct SingleSlitField {
    pub source: SlitSource,
    pub params: PhysicalParams,
}

impl VelocityField for SingleSlitField {
    fn velocity(&self, x: f64, t: f64) -> Option<f64> {
        Some(total_velocity(&self.source, &self.params, x, t))
    }
}

impl VelocityField for DoubleSlitSystem {
    fn velocity(&self, x: f64, t: f64) -> Option<f64> {
        self.field_velocity(x, t)
    }
}

/// Velocity sampled on a lattice, read back by bilinear interpolation.
/// Non-finite lattice values count as undefined.
#[derive(Debug, Clone)]
pub struct GriddedField {
    pub values: ScalarField,
}

impl VelocityField for GriddedField {
    fn velocity(&self, x: f64, t: f64) -> Option<f64> {
        self.values.sample_bilinear(x, t).filter(|v| v.is_finite())
    }

    fn domain(&self) -> (f64, f64) {
        let g = self.values.grid();
        (g.x_min(), g.x_max())
    }
}

/// Restricts another field to `[x_min, x_max]`.
#[derive(Debug, Clone, Copy)]
pub struct Bounded<F> {
    pub inner: F,
    pub x_min: f64,
    pub x_max: f64,
}

impl<F: VelocityField> VelocityField for Bounded<F> {
    fn velocity(&self, x: f64, t: f64) -> Option<f64> {
        self.inner.velocity(x, t)
    }

    fn domain(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seed {
    /// 1-based slit the trajectory starts from.
    pub slit: usize,
    /// Initial offset from the slit center.
    pub xi0: f64,
    /// Initial position, `center + xi0`.
    pub x0: f64,
}

/// `count` seeds spread uniformly over `[-span sigma0, span sigma0]` around
/// the slit center; a single seed sits on the center.
pub fn seed_positions(
    slit: usize,
    source: &SlitSource,
    count: usize,
    span: f64,
) -> Result<Vec<Seed>> {
    if count == 0 {
        return Err(Error::InvalidParameter("need at least one seed".into()));
    }
    if !(span > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "seed span must be positive, got {span}"
        )));
    }
    let half = span * source.sigma0();
    Ok((0..count)
        .map(|k| {
            let xi0 = if count == 1 {
                0.0
            } else {
                -half + 2.0 * half * k as f64 / (count - 1) as f64
            };
            Seed {
                slit,
                xi0,
                x0: source.center() + xi0,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    pub seeds: Vec<Seed>,
    pub times: Vec<f64>,
    /// `positions[s][k]` is seed `s` at `times[k]`. Truncated paths are
    /// shorter than `times`.
    pub positions: Vec<Vec<f64>>,
    pub truncated: Vec<bool>,
}

impl TrajectorySet {
    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    /// True when every pair of paths keeps its initial order at every time
    /// both are alive.
    pub fn preserves_order(&self) -> bool {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.seeds[a].x0.total_cmp(&self.seeds[b].x0));
        for k in 0..self.times.len() {
            let alive: Vec<f64> = order
                .iter()
                .filter_map(|&s| self.positions[s].get(k).copied())
                .collect();
            if alive.windows(2).any(|w| w[1] <= w[0]) {
                return false;
            }
        }
        true
    }
}

/// Classical fourth-order Runge-Kutta for `dx/dt = v(x, t)` from `t = 0` to
/// `t_max`, with step close to `dt` (adjusted so that it divides `t_max`).
/// Where the field is undefined the last finite velocity is reused.
pub fn integrate<F: VelocityField + ?Sized>(
    field: &F,
    seeds: &[Seed],
    t_max: f64,
    dt: f64,
) -> Result<TrajectorySet> {
    if !(dt > 0.0) || !(t_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need positive t_max and dt, got {t_max} and {dt}"
        )));
    }
    let ratio = t_max / dt;
    let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio {
        ratio.round()
    } else {
        ratio.ceil()
    } as usize;
    let h = t_max / steps as f64;
    let times: Vec<f64> = (0..=steps)
        .map(|k| if k == steps { t_max } else { k as f64 * h })
        .collect();
    let (lo, hi) = field.domain();

    let paths: Vec<(Vec<f64>, bool)> = seeds
        .par_iter()
        .map(|seed| {
            let mut x = seed.x0;
            let mut path = Vec::with_capacity(times.len());
            if !(x >= lo && x <= hi) {
                return (path, true);
            }
            path.push(x);
            let mut last = field.velocity(x, 0.0).unwrap_or(0.0);
            let eval = |x: f64, t: f64, last: &mut f64| match field.velocity(x, t) {
                Some(v) if v.is_finite() => {
                    *last = v;
                    v
                }
                _ => *last,
            };
            for &t in &times[..steps] {
                let k1 = eval(x, t, &mut last);
                let k2 = eval(x + 0.5 * h * k1, t + 0.5 * h, &mut last);
                let k3 = eval(x + 0.5 * h * k2, t + 0.5 * h, &mut last);
                let k4 = eval(x + h * k3, t + h, &mut last);
                x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if !(x.is_finite() && x >= lo && x <= hi) {
                    return (path, true);
                }
                path.push(x);
            }
            (path, false)
        })
        .collect();

    let (positions, truncated) = paths.into_iter().unzip();
    Ok(TrajectorySet {
        seeds: seeds.to_vec(),
        times,
        positions,
        truncated,
    })
}
