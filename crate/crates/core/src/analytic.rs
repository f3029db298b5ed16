//! Closed-form kinematics of a single spreading Gaussian.
//!
//! Every quantity is expressed through the distance from the moving center,
//! `xi(t) = x - x0 - v t`, so that the same code serves any slit position and
//! drift. Times are expected to be non-negative; only [`sigma_at`] checks.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{PhysicalParams, SlitSource};

/// Everything the analytic model knows at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicSample {
    pub x: f64,
    pub t: f64,
    pub density: f64,
    pub u: f64,
    pub v_tot: f64,
    pub a_tot: f64,
    pub phase: f64,
}

/// Time at which `D t = sigma0^2`: the packet has widened to `sqrt(2) sigma0`
/// and the diffusion coefficient has grown to `D`.
pub fn kink_time(source: &SlitSource, params: &PhysicalParams) -> f64 {
    source.sigma0() * source.sigma0() / params.diffusivity()
}

/// Ballistic diffusion coefficient `D_t = D^2 t / sigma0^2 = u0^2 t`.
pub fn diffusivity_closed(source: &SlitSource, params: &PhysicalParams, t: f64) -> f64 {
    params.diffusivity() * (t / kink_time(source, params))
}

/// Width `sigma0 sqrt(1 + (t / t_k)^2)` without the sign check.
pub(crate) fn spread(source: &SlitSource, params: &PhysicalParams, t: f64) -> f64 {
    let r = t / kink_time(source, params);
    source.sigma0() * (1.0 + r * r).sqrt()
}

pub fn sigma_at(source: &SlitSource, params: &PhysicalParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(spread(source, params, t))
}

/// Offset of `x` from the packet center at time `t`.
pub fn offset(source: &SlitSource, x: f64, t: f64) -> f64 {
    x - source.center() - source.drift() * t
}

pub fn gaussian_density(source: &SlitSource, params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let sigma = spread(source, params, t);
    let xi = offset(source, x, t);
    (-xi * xi / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
}

/// Phase-space distribution `f(x, p, t)` of free streaming from an
/// uncorrelated product of Gaussians. `p` is the momentum fluctuation about
/// the drift; integrating over `p` gives [`gaussian_density`].
pub fn phase_space_density(
    source: &SlitSource,
    params: &PhysicalParams,
    x: f64,
    p: f64,
    t: f64,
) -> f64 {
    let m = params.mass();
    let s0 = source.sigma0();
    let pi0 = m * source.u0();
    let streamed = offset(source, x, t) - p * t / m;
    let norm = 1.0 / (2.0 * PI * s0 * pi0);
    norm * (-streamed * streamed / (2.0 * s0 * s0)).exp() * (-p * p / (2.0 * pi0 * pi0)).exp()
}

/// `u = -D (dP/dx) / P = xi D / sigma^2`.
pub fn osmotic_velocity(source: &SlitSource, params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let sigma = spread(source, params, t);
    offset(source, x, t) * params.diffusivity() / (sigma * sigma)
}

/// Velocity field `v + xi u0^2 t / sigma^2`.
pub fn total_velocity(source: &SlitSource, params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let sigma = spread(source, params, t);
    let u0 = source.u0();
    source.drift() + offset(source, x, t) * u0 * u0 * t / (sigma * sigma)
}

/// Acceleration field `xi u0^2 sigma0^2 / sigma^4`.
pub fn total_acceleration(source: &SlitSource, params: &PhysicalParams, x: f64, t: f64) -> f64 {
    let sigma2 = {
        let s = spread(source, params, t);
        s * s
    };
    let u0 = source.u0();
    let s0 = source.sigma0();
    offset(source, x, t) * u0 * u0 * s0 * s0 / (sigma2 * sigma2)
}

/// Position at time `t` of the averaged trajectory that started `xi0` from
/// the center. The ratio `xi(t) / sigma(t)` is conserved along it.
pub fn trajectory_position(source: &SlitSource, params: &PhysicalParams, xi0: f64, t: f64) -> f64 {
    source.center() + source.drift() * t + xi0 * spread(source, params, t) / source.sigma0()
}

/// Kinetic energy of the drift, `m v^2 / 2`.
pub fn drift_energy(source: &SlitSource, params: &PhysicalParams) -> f64 {
    0.5 * params.mass() * source.drift() * source.drift()
}

/// Local phase `S / hbar` plus an additive shift:
///
/// `[m v (x - x0) + (m u0^2 t / 2) (xi / sigma)^2 - E t] / hbar + shift`
pub fn phase(
    source: &SlitSource,
    params: &PhysicalParams,
    x: f64,
    t: f64,
    extra_shift: f64,
    energy: f64,
) -> f64 {
    let m = params.mass();
    let u0 = source.u0();
    let ratio = offset(source, x, t) / spread(source, params, t);
    let action = m * source.drift() * (x - source.center()) + 0.5 * m * u0 * u0 * t * ratio * ratio
        - energy * t;
    action / params.hbar() + extra_shift
}

pub fn sample(source: &SlitSource, params: &PhysicalParams, x: f64, t: f64) -> KinematicSample {
    KinematicSample {
        x,
        t,
        density: gaussian_density(source, params, x, t),
        u: osmotic_velocity(source, params, x, t),
        v_tot: total_velocity(source, params, x, t),
        a_tot: total_acceleration(source, params, x, t),
        phase: phase(source, params, x, t, 0.0, drift_energy(source, params)),
    }
}
