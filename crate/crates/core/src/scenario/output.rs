//! CSV and binary PGM writers.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::trajectories::TrajectorySet;

use super::run::OutputBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Pgm,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "pgm" => Ok(Format::Pgm),
            other => Err(Error::InvalidParameter(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// `t,x,value` rows in time-major order, 17 significant digits.
pub fn write_field_csv(field: &ScalarField, path: &Path) -> Result<()> {
    let grid = field.grid();
    let mut w = create(path)?;
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "t,x,value")?;
        for n in 0..grid.rows() {
            let t = grid.t(n);
            for (i, v) in field.row(n).iter().enumerate() {
                writeln!(w, "{:.16e},{:.16e},{:.16e}", t, grid.x(i), v)?;
            }
        }
        w.flush()
    };
    body().map_err(io_err(path))
}

/// Reads back a file written by [`write_field_csv`].
pub fn read_field_csv(path: &Path) -> Result<Vec<[f64; 3]>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rows = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if k == 0 {
            continue;
        }
        let mut row = [0.0; 3];
        let mut parts = line.split(',');
        for slot in &mut row {
            *slot = parts.next().and_then(|p| p.parse().ok()).ok_or_else(|| {
                Error::InvalidParameter(format!("{}: bad row {}", path.display(), k + 1))
            })?;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `seed_id,t,x` rows; truncated paths simply stop.
pub fn write_trajectories_csv(set: &TrajectorySet, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "seed_id,t,x")?;
        for (s, path) in set.positions.iter().enumerate() {
            for (t, x) in set.times.iter().zip(path) {
                writeln!(w, "{s},{t:.16e},{x:.16e}")?;
            }
        }
        w.flush()
    };
    body().map_err(io_err(path))
}

pub fn write_norm_trace_csv(grid: &Grid, trace: &[f64], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "t,mass")?;
        for (n, m) in trace.iter().enumerate() {
            writeln!(w, "{:.16e},{m:.16e}", grid.t(n))?;
        }
        w.flush()
    };
    body().map_err(io_err(path))
}

/// Binary PGM, one row per stored time with `t = 0` on top. Pixels are
/// `round(255 (|v| / max|v|)^gamma)`; an all-zero field renders black.
pub fn render_pgm(field: &ScalarField, gamma: f64, label: &str) -> Vec<u8> {
    let grid = field.grid();
    let vmax = field.max_abs();
    let mut out = format!(
        "P5\n# {label} max={vmax:e}\n{} {}\n255\n",
        grid.nx(),
        grid.rows()
    )
    .into_bytes();
    out.extend(field.values().iter().map(|v| {
        if vmax > 0.0 && v.is_finite() {
            (255.0 * (v.abs() / vmax).powf(gamma))
                .round()
                .clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    out
}

/// Companion map for signed fields: 255 positive, 0 negative, 128 zero.
pub fn render_sign_pgm(field: &ScalarField, label: &str) -> Vec<u8> {
    let grid = field.grid();
    let mut out = format!("P5\n# {label} sign\n{} {}\n255\n", grid.nx(), grid.rows()).into_bytes();
    out.extend(field.values().iter().map(|&v| {
        if v > 0.0 {
            255
        } else if v < 0.0 {
            0
        } else {
            128
        }
    }));
    out
}

fn write_bytes(bytes: &[u8], path: &Path) -> Result<()> {
    std::fs::write(path, bytes).map_err(io_err(path))
}

/// Writes every artifact of `bundle` into `dir` (created if missing) and
/// returns the written paths in order.
pub fn write_bundle(bundle: &OutputBundle, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    for f in &bundle.fields {
        if formats.contains(&Format::Csv) {
            let p = dir.join(format!("{}.csv", f.name));
            write_field_csv(&f.field, &p)?;
            written.push(p);
        }
        if formats.contains(&Format::Pgm) {
            let label = format!("{} {}", bundle.scenario_name, f.name);
            let p = dir.join(format!("{}.pgm", f.name));
            write_bytes(&render_pgm(&f.field, bundle.gamma, &label), &p)?;
            written.push(p);
            if f.signed && bundle.sign_maps {
                let p = dir.join(format!("{}_sign.pgm", f.name));
                write_bytes(&render_sign_pgm(&f.field, &label), &p)?;
                written.push(p);
            }
        }
    }
    // trajectories and norm traces have no image form
    if let Some(t) = &bundle.trajectories {
        let p = dir.join("trajectories.csv");
        write_trajectories_csv(t, &p)?;
        written.push(p);
    }
    for (name, trace) in &bundle.norm_traces {
        let p = dir.join(format!("{name}.csv"));
        write_norm_trace_csv(&bundle.grid, trace, &p)?;
        written.push(p);
    }
    Ok(written)
}
