//! Uniform space-time lattice and fields stored on it.

use crate::error::{Error, Result};

/// Uniform x-t lattice. Holds `nx` spatial nodes (both ends included) and
/// `nt + 1` time rows, row 0 being the initial condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    nx: usize,
    t_max: f64,
    nt: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_max: f64, nt: usize) -> Result<Self> {
        let mut problems = Vec::new();
        if nx < 3 {
            problems.push(format!("nx must be at least 3, got {nx}"));
        }
        if nt < 1 {
            problems.push(format!("nt must be at least 1, got {nt}"));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            problems.push(format!("need finite x_max > x_min, got [{x_min}, {x_max}]"));
        }
        if !(t_max.is_finite() && t_max > 0.0) {
            problems.push(format!("t_max must be positive, got {t_max}"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidParameter(problems.join("; ")));
        }
        Ok(Self {
            x_min,
            x_max,
            nx,
            t_max,
            nt,
        })
    }

    /// Same extents, different number of time steps.
    pub fn with_nt(&self, nt: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, self.nx, self.t_max, nt)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    /// Number of stored time rows, `nt + 1`.
    pub fn rows(&self) -> usize {
        self.nt + 1
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.nt as f64
    }

    /// Node position. Written as a weighted mean of the ends so that a
    /// domain symmetric about zero yields exactly mirrored nodes.
    pub fn x(&self, i: usize) -> f64 {
        let n = (self.nx - 1) as f64;
        let i = i as f64;
        ((n - i) * self.x_min + i * self.x_max) / n
    }

    pub fn t(&self, n: usize) -> f64 {
        if n == self.nt {
            self.t_max
        } else {
            n as f64 * self.dt()
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.rows()).map(|n| self.t(n)).collect()
    }

    /// Index of the node closest to `x`, clamped to the lattice.
    pub fn nearest_index(&self, x: f64) -> usize {
        let f = ((x - self.x_min) / self.dx()).round();
        f.clamp(0.0, (self.nx - 1) as f64) as usize
    }
}

/// Real values over a [`Grid`], row-major by time: `values[n * nx + i]`
/// belongs to `(t(n), x(i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            values: vec![0.0; grid.nx() * grid.rows()],
            grid,
        }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let expected = grid.nx() * grid.rows();
        if values.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "field needs {expected} values for the grid, got {}",
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Evaluates `f(x, t)` at every lattice point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        use rayon::prelude::*;
        let nx = grid.nx();
        let mut values = vec![0.0; nx * grid.rows()];
        values.par_chunks_mut(nx).enumerate().for_each(|(n, row)| {
            let t = grid.t(n);
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(grid.x(i), t);
            }
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, n: usize, i: usize) -> f64 {
        self.values[n * self.grid.nx() + i]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[n * nx..(n + 1) * nx]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [f64] {
        let nx = self.grid.nx();
        &mut self.values[n * nx..(n + 1) * nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.grid.nx())
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_non_negative(&self) -> bool {
        self.values.iter().all(|v| *v >= 0.0)
    }

    /// Linear interpolation in both x and t. Outside the lattice returns `None`.
    pub fn sample_bilinear(&self, x: f64, t: f64) -> Option<f64> {
        let g = &self.grid;
        if !(x >= g.x_min() && x <= g.x_max() && t >= 0.0 && t <= g.t_max()) {
            return None;
        }
        let fx = (x - g.x_min()) / g.dx();
        let ft = t / g.dt();
        let i = (fx.floor() as usize).min(g.nx() - 2);
        let n = (ft.floor() as usize).min(g.nt() - 1);
        let ax = fx - i as f64;
        let at = ft - n as f64;
        let lo = self.get(n, i) * (1.0 - ax) + self.get(n, i + 1) * ax;
        let hi = self.get(n + 1, i) * (1.0 - ax) + self.get(n + 1, i + 1) * ax;
        Some(lo * (1.0 - at) + hi * at)
    }
}
