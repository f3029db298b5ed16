//! Gaussian dispersion and double-slit interference modeled as ballistic
//! diffusion.
//!
//! * [`params`], [`grid`], [`stability`]: physical constants, lattice and
//!   field storage, explicit-scheme bound.
//! * [`analytic`]: closed-form single-Gaussian kinematics.
//! * [`interference`]: two-slit superposition, currents and phase shifters.
//! * [`fdm`]: finite-difference solver with time-dependent diffusivity.
//! * [`trajectories`]: RK4 integration of averaged particle paths.
//! * [`scenario`]: configuration files, presets and output writers.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod fdm;
pub mod grid;
pub mod interference;
pub mod params;
pub mod scenario;
pub mod stability;
pub mod trajectories;

pub use error::{ConfigError, Error, Result};
pub use grid::{Grid, ScalarField};
pub use interference::{DoubleSlitSystem, PhaseShifterSchedule};
pub use params::{make_params, uncertainty_norm, PhysicalParams, SlitSource};
pub use stability::{check_stability, StabilityReport};
