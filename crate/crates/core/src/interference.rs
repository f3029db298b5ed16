//! Two-slit superposition of spreading Gaussians.
//!
//! Each slit carries its own local phase; the pattern follows from the phase
//! difference
//!
//! ```text
//! phi12 = (m/hbar) [v2 (x - x02) - v1 (x - x01)]
//!       + (m t / 2 hbar) [u02^2 xi2^2 / sigma2^2 - u01^2 xi1^2 / sigma1^2] - dphi(t)
//! ```
//!
//! where `dphi(t)` is the phase shifter acting on slit 1. The current is the
//! density-weighted mix of the slit velocity fields plus the entangling term
//! `sqrt(P1 P2) (u1 - u2) sin(phi12)`.

use crate::analytic::{
    drift_energy, gaussian_density, offset, osmotic_velocity, spread, total_velocity,
};
use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::params::{PhysicalParams, SlitSource};

/// Densities at or below this are treated as nodes with no defined velocity.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Phase shift applied to slit 1, ramped linearly from 0 at `t1` to
/// `total_shift` at `t2`. `t1 == t2` is a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifterSchedule {
    total_shift: f64,
    t1: f64,
    t2: f64,
}

impl PhaseShifterSchedule {
    pub fn new(total_shift: f64, t1: f64, t2: f64) -> Result<Self> {
        if !total_shift.is_finite() {
            return Err(Error::InvalidParameter("shift must be finite".into()));
        }
        if !(t1 >= 0.0 && t2 >= t1 && t2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shifter needs 0 <= t1 <= t2, got t1 = {t1}, t2 = {t2}"
            )));
        }
        Ok(Self {
            total_shift,
            t1,
            t2,
        })
    }

    pub fn none() -> Self {
        Self {
            total_shift: 0.0,
            t1: 0.0,
            t2: 0.0,
        }
    }

    pub fn total_shift(&self) -> f64 {
        self.total_shift
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn is_none(&self) -> bool {
        self.total_shift == 0.0
    }

    /// Accumulated shift at time `t`.
    pub fn at(&self, t: f64) -> f64 {
        if t <= self.t1 {
            0.0
        } else if t >= self.t2 {
            self.total_shift
        } else {
            self.total_shift * (t - self.t1) / (self.t2 - self.t1)
        }
    }
}

impl Default for PhaseShifterSchedule {
    fn default() -> Self {
        Self::none()
    }
}

/// Density, total velocity and osmotic velocity of one slit at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SlitTerms {
    density: f64,
    velocity: f64,
    osmotic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleSlitSystem {
    slit1: SlitSource,
    slit2: SlitSource,
    params: PhysicalParams,
    shifter: PhaseShifterSchedule,
    open: [bool; 2],
    energy_term: bool,
}

impl DoubleSlitSystem {
    pub fn new(
        params: PhysicalParams,
        slit1: SlitSource,
        slit2: SlitSource,
        shifter: PhaseShifterSchedule,
    ) -> Result<Self> {
        if slit1.center() == slit2.center() {
            return Err(Error::InvalidParameter(format!(
                "slit centers must differ, both at {}",
                slit1.center()
            )));
        }
        let d = params.diffusivity();
        for (k, s) in [(1, &slit1), (2, &slit2)] {
            if s.u0() != d / s.sigma0() {
                return Err(Error::InvalidParameter(format!(
                    "slit {k} was built for a different diffusivity"
                )));
            }
        }
        Ok(Self {
            slit1,
            slit2,
            params,
            shifter,
            open: [true, true],
            energy_term: false,
        })
    }

    /// Adds `-(E2 - E1) t / hbar` with `E_i = m v_i^2 / 2` to the phase
    /// difference. Off by default; it vanishes when both drifts are equal.
    pub fn with_energy_term(mut self, on: bool) -> Self {
        self.energy_term = on;
        self
    }

    /// Closes slit `index` (1 or 2): its density and currents drop out.
    pub fn with_slit_blocked(mut self, index: usize) -> Self {
        assert!(index == 1 || index == 2, "slit index must be 1 or 2");
        self.open[index - 1] = false;
        self
    }

    pub fn slit1(&self) -> &SlitSource {
        &self.slit1
    }

    pub fn slit2(&self) -> &SlitSource {
        &self.slit2
    }

    pub fn slit(&self, index: usize) -> &SlitSource {
        match index {
            1 => &self.slit1,
            2 => &self.slit2,
            _ => panic!("slit index must be 1 or 2"),
        }
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn shifter(&self) -> &PhaseShifterSchedule {
        &self.shifter
    }

    pub fn energy_term(&self) -> bool {
        self.energy_term
    }

    fn terms(&self, index: usize, x: f64, t: f64) -> SlitTerms {
        if !self.open[index - 1] {
            return SlitTerms {
                density: 0.0,
                velocity: 0.0,
                osmotic: 0.0,
            };
        }
        let s = self.slit(index);
        let p = &self.params;
        SlitTerms {
            density: gaussian_density(s, p, x, t),
            velocity: total_velocity(s, p, x, t),
            osmotic: osmotic_velocity(s, p, x, t),
        }
    }

    pub fn phase_difference(&self, x: f64, t: f64) -> f64 {
        let m = self.params.mass();
        let hbar = self.params.hbar();
        let (s1, s2) = (&self.slit1, &self.slit2);

        let drift = m / hbar * (s2.drift() * (x - s2.center()) - s1.drift() * (x - s1.center()));
        let quad = |s: &SlitSource| {
            let xi = offset(s, x, t);
            let sigma = spread(s, &self.params, t);
            s.u0() * s.u0() * xi * xi / (sigma * sigma)
        };
        let spreading = m * t / (2.0 * hbar) * (quad(s2) - quad(s1));
        let mut phi = drift + spreading - self.shifter.at(t);
        if self.energy_term {
            let de = drift_energy(s2, &self.params) - drift_energy(s1, &self.params);
            phi -= de * t / hbar;
        }
        phi
    }

    fn density_from(&self, a: SlitTerms, b: SlitTerms, phi: f64) -> f64 {
        let cross = a.density.sqrt() * b.density.sqrt();
        (a.density + b.density + 2.0 * cross * phi.cos()).max(0.0)
    }

    fn current_from(&self, a: SlitTerms, b: SlitTerms, phi: f64) -> f64 {
        let cross = a.density.sqrt() * b.density.sqrt();
        a.density * a.velocity
            + b.density * b.velocity
            + cross * (a.velocity + b.velocity) * phi.cos()
            + cross * (a.osmotic - b.osmotic) * phi.sin()
    }

    pub fn total_density(&self, x: f64, t: f64) -> f64 {
        let phi = self.phase_difference(x, t);
        self.density_from(self.terms(1, x, t), self.terms(2, x, t), phi)
    }

    pub fn total_current(&self, x: f64, t: f64) -> f64 {
        let phi = self.phase_difference(x, t);
        self.current_from(self.terms(1, x, t), self.terms(2, x, t), phi)
    }

    pub fn entangling_current(&self, x: f64, t: f64) -> f64 {
        let (a, b) = (self.terms(1, x, t), self.terms(2, x, t));
        a.density.sqrt()
            * b.density.sqrt()
            * (a.osmotic - b.osmotic)
            * self.phase_difference(x, t).sin()
    }

    /// `J_tot / P_tot`, or `None` where the density vanishes.
    pub fn field_velocity(&self, x: f64, t: f64) -> Option<f64> {
        let phi = self.phase_difference(x, t);
        let (a, b) = (self.terms(1, x, t), self.terms(2, x, t));
        let density = self.density_from(a, b, phi);
        if density <= DENSITY_FLOOR {
            return None;
        }
        Some(self.current_from(a, b, phi) / density)
    }

    /// Combines separately computed single-slit densities (e.g. from the
    /// finite-difference solver) with the analytic phase difference.
    pub fn superpose(&self, p1: &ScalarField, p2: &ScalarField) -> Result<ScalarField> {
        if p1.grid() != p2.grid() {
            return Err(Error::InvalidParameter(
                "slit densities live on different grids".into(),
            ));
        }
        let grid = *p1.grid();
        let nx = grid.nx();
        let values = p1
            .values()
            .iter()
            .zip(p2.values())
            .enumerate()
            .map(|(k, (&d1, &d2))| {
                let (n, i) = (k / nx, k % nx);
                let phi = self.phase_difference(grid.x(i), grid.t(n));
                let d1 = if self.open[0] { d1.max(0.0) } else { 0.0 };
                let d2 = if self.open[1] { d2.max(0.0) } else { 0.0 };
                (d1 + d2 + 2.0 * d1.sqrt() * d2.sqrt() * phi.cos()).max(0.0)
            })
            .collect();
        ScalarField::from_values(grid, values)
    }
}

/// Total density with its companion fields over a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceFields {
    pub density: ScalarField,
    pub phase_difference: ScalarField,
    pub entangling_current: ScalarField,
}

pub fn intensity_grid(system: &DoubleSlitSystem, grid: &Grid) -> InterferenceFields {
    InterferenceFields {
        density: ScalarField::from_fn(*grid, |x, t| system.total_density(x, t)),
        phase_difference: ScalarField::from_fn(*grid, |x, t| system.phase_difference(x, t)),
        entangling_current: ScalarField::from_fn(*grid, |x, t| system.entangling_current(x, t)),
    }
}

/// Indices of strict-left local maxima (`v[i-1] < v[i] >= v[i+1]`) in a row.
pub fn local_maxima(row: &[f64]) -> Vec<usize> {
    (1..row.len().saturating_sub(1))
        .filter(|&i| row[i] > row[i - 1] && row[i] >= row[i + 1])
        .collect()
}

/// Indices of local minima, mirror of [`local_maxima`].
pub fn local_minima(row: &[f64]) -> Vec<usize> {
    (1..row.len().saturating_sub(1))
        .filter(|&i| row[i] < row[i - 1] && row[i] <= row[i + 1])
        .collect()
}

/// Positions where `phase - offset` crosses a multiple of `2 pi`, located by
/// linear interpolation between lattice nodes.
pub fn phase_crossings(xs: &[f64], phase: &[f64], offset: f64) -> Vec<f64> {
    use std::f64::consts::TAU;
    let mut out = Vec::new();
    let segments = xs.len().saturating_sub(1);
    for k in 0..segments {
        let a = (phase[k] - offset) / TAU;
        let b = (phase[k + 1] - offset) / TAU;
        let last = k + 1 == segments;
        if a == b {
            if a.fract() == 0.0 {
                out.push(xs[k]);
            }
            continue;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut n = lo.ceil();
        while n <= hi {
            // each node belongs to the segment on its right
            let s = (n - a) / (b - a);
            if s < 1.0 || last {
                out.push(xs[k] + s * (xs[k + 1] - xs[k]));
            }
            n += 1.0;
        }
    }
    out
}
