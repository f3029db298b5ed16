//! Frozen-coefficient stability bound for the explicit diffusion step.
//!
//! The explicit forward scheme is stable while `D_t * dt / dx^2 <= 1/2` at
//! every cell. With the closed-form diffusivity `D_t = D^2 t / sigma0^2` this
//! becomes `dt <= dx^2 sigma0^2 / (2 D^2 t)`, which is tightest at the last
//! time level.

use std::fmt;

use crate::analytic::diffusivity_closed;
use crate::grid::Grid;
use crate::params::{PhysicalParams, SlitSource};

/// Largest admissible diffusion number `D_t dt / dx^2`.
pub const MAX_DIFFUSION_NUMBER: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub max_allowed_dt: f64,
    pub requested_dt: f64,
    pub ok: bool,
    /// Time level at which the bound is tightest.
    pub binding_time: f64,
}

impl StabilityReport {
    /// Bound for a step whose largest cell diffusivity is `max_diffusivity`.
    pub fn for_diffusivity(max_diffusivity: f64, dx: f64, requested_dt: f64, time: f64) -> Self {
        let max_allowed_dt = if max_diffusivity > 0.0 {
            MAX_DIFFUSION_NUMBER * dx * dx / max_diffusivity
        } else {
            f64::INFINITY
        };
        Self {
            max_allowed_dt,
            requested_dt,
            ok: requested_dt <= max_allowed_dt,
            binding_time: time,
        }
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dt = {:e} {} max allowed {:e} (bound binds at t = {})",
            self.requested_dt,
            if self.ok { "within" } else { "exceeds" },
            self.max_allowed_dt,
            self.binding_time
        )
    }
}

/// Stability of the explicit scheme on `grid` for the closed-form
/// diffusivity of `source`.
pub fn check_stability(
    grid: &Grid,
    source: &SlitSource,
    params: &PhysicalParams,
) -> StabilityReport {
    let t = grid.t_max();
    StabilityReport::for_diffusivity(
        diffusivity_closed(source, params, t),
        grid.dx(),
        grid.dt(),
        t,
    )
}

/// Smallest number of time steps for which [`check_stability`] passes.
pub fn stable_step_count(grid: &Grid, source: &SlitSource, params: &PhysicalParams) -> usize {
    let bound = check_stability(grid, source, params).max_allowed_dt;
    if !bound.is_finite() {
        return 1;
    }
    let mut nt = ((grid.t_max() / bound).ceil() as usize).max(1);
    // t_max / nt can round just above the bound
    while grid.t_max() / (nt as f64) > bound {
        nt += 1;
    }
    nt
}
