use crate::analytic::gaussian_density;
use crate::error::Result;
use crate::fdm::{solve, SolveOutput, SolverConfig};
use crate::grid::{Grid, ScalarField};
use crate::interference::DoubleSlitSystem;
use crate::trajectories::{
    integrate, seed_positions, Bounded, SingleSlitField, TrajectorySet, VelocityField,
};

use super::config::{OutputKind, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedField {
    pub name: String,
    pub field: ScalarField,
    /// Takes both signs (rendered with an optional sign map).
    pub signed: bool,
}

/// Everything a scenario run produces, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputBundle {
    pub scenario_name: String,
    pub grid: Grid,
    pub fields: Vec<NamedField>,
    pub trajectories: Option<TrajectorySet>,
    /// `(name, mass per stored row)`.
    pub norm_traces: Vec<(String, Vec<f64>)>,
    /// Cells where the local diffusivity rule met a non-positive density.
    pub nonpositive_cells: usize,
    pub gamma: f64,
    pub sign_maps: bool,
}

impl OutputBundle {
    pub fn field(&self, name: &str) -> Option<&ScalarField> {
        self.fields
            .iter()
            .find(|f| f.name == name)
            .map(|f| &f.field)
    }
}

pub fn double_slit_system(scenario: &Scenario) -> Result<Option<DoubleSlitSystem>> {
    if !scenario.is_double_slit() {
        return Ok(None);
    }
    let system = DoubleSlitSystem::new(
        scenario.params,
        scenario.sources[0],
        scenario.sources[1],
        scenario.shifter.unwrap_or_default(),
    )?
    .with_energy_term(scenario.energy_term);
    Ok(Some(system))
}

/// Runs a scenario. The result depends only on the scenario.
pub fn run_scenario(scenario: &Scenario) -> Result<OutputBundle> {
    let grid = scenario.grid;
    let params = scenario.params;
    let system = double_slit_system(scenario)?;
    let wants = |k: OutputKind| scenario.outputs.contains(&k);

    let solved: Vec<SolveOutput> = match &scenario.solver {
        Some(s) => scenario
            .sources
            .iter()
            .map(|src| {
                solve(
                    &SolverConfig::new(grid, params, *src, s.mode, s.scheme)
                        .with_norm_tolerance(s.norm_tolerance)
                        .with_clamp(s.clamp),
                )
            })
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let suffix = |k: usize| {
        if scenario.sources.len() > 1 {
            format!("_slit{}", k + 1)
        } else {
            String::new()
        }
    };

    let mut fields = Vec::new();
    if wants(OutputKind::Density) {
        let density = match (&system, solved.as_slice()) {
            (Some(sys), [a, b]) => sys.superpose(&a.density, &b.density)?,
            (Some(sys), _) => ScalarField::from_fn(grid, |x, t| sys.total_density(x, t)),
            (None, [a]) => a.density.clone(),
            (None, _) => {
                let src = scenario.sources[0];
                ScalarField::from_fn(grid, move |x, t| gaussian_density(&src, &params, x, t))
            }
        };
        fields.push(NamedField {
            name: "density".into(),
            field: density,
            signed: false,
        });
    }
    if let Some(sys) = &system {
        if wants(OutputKind::PhaseDifference) {
            fields.push(NamedField {
                name: "phase_difference".into(),
                field: ScalarField::from_fn(grid, |x, t| sys.phase_difference(x, t)),
                signed: true,
            });
        }
        if wants(OutputKind::EntanglingCurrent) {
            fields.push(NamedField {
                name: "entangling_current".into(),
                field: ScalarField::from_fn(grid, |x, t| sys.entangling_current(x, t)),
                signed: true,
            });
        }
    }
    if wants(OutputKind::Diffusivity) {
        for (k, out) in solved.iter().enumerate() {
            fields.push(NamedField {
                name: format!("diffusivity{}", suffix(k)),
                field: out.diffusivity.field().clone(),
                signed: false,
            });
        }
    }
    let norm_traces = if wants(OutputKind::NormTrace) {
        solved
            .iter()
            .enumerate()
            .map(|(k, out)| (format!("norm_trace{}", suffix(k)), out.norm_trace.clone()))
            .collect()
    } else {
        Vec::new()
    };

    let trajectories = match (&scenario.trajectories, wants(OutputKind::Trajectories)) {
        (Some(req), true) => {
            let mut seeds = Vec::new();
            for (k, src) in scenario.sources.iter().enumerate() {
                seeds.extend(seed_positions(k + 1, src, req.seeds_per_slit, req.span)?);
            }
            let dt = req.dt.unwrap_or(grid.dt() / 4.0);
            let bound = |inner| Bounded {
                inner,
                x_min: grid.x_min(),
                x_max: grid.x_max(),
            };
            let field = match system {
                Some(sys) => Field::Double(sys),
                None => Field::Single(SingleSlitField {
                    source: scenario.sources[0],
                    params,
                }),
            };
            Some(integrate(&bound(field), &seeds, grid.t_max(), dt)?)
        }
        _ => None,
    };

    Ok(OutputBundle {
        scenario_name: scenario.name.clone(),
        grid,
        fields,
        trajectories,
        norm_traces,
        nonpositive_cells: solved.iter().map(|s| s.nonpositive_cells).sum(),
        gamma: scenario.gamma,
        sign_maps: scenario.sign_maps,
    })
}

enum Field {
    Single(SingleSlitField),
    Double(DoubleSlitSystem),
}

impl VelocityField for Field {
    fn velocity(&self, x: f64, t: f64) -> Option<f64> {
        match self {
            Field::Single(f) => f.velocity(x, t),
            Field::Double(f) => f.velocity(x, t),
        }
    }
}
