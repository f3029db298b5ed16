//! C ABI over `ballistic-core`.
//!
//! Every fallible function returns a [`BallisticStatus`] and writes results
//! through out-pointers. On failure a message is kept per thread and can be
//! read with [`ballistic_last_error`]. Handles are opaque and must be
//! released with their `_free` function; `_free(NULL)` is a no-op.

#![allow(clippy::missing_safety_doc, clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ballistic_core::analytic;
use ballistic_core::scenario::{
    parse_config_with_overrides, run_scenario, write_bundle, Format, OutputBundle, Scenario,
};
use ballistic_core::{DoubleSlitSystem, Error, PhaseShifterSchedule, PhysicalParams, SlitSource};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallisticStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Stability = 4,
    NormDrift = 5,
    Solver = 6,
    Config = 7,
    Io = 8,
    InvalidUtf8 = 9,
    NotFound = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Physical constants; `{1, 1}` gives natural units.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BallisticParams {
    pub hbar: f64,
    pub mass: f64,
}

/// One Gaussian slit source.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BallisticSlit {
    pub center: f64,
    pub sigma0: f64,
    pub drift: f64,
}

/// Lattice description. Fields have `nt + 1` rows of `nx` values.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BallisticGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_max: f64,
    pub nt: usize,
}

/// Two-slit system.
pub struct BallisticSystem(DoubleSlitSystem);

/// Parsed scenario.
pub struct BallisticScenario(Scenario);

/// Outputs of a scenario run.
pub struct BallisticRun(OutputBundle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(BallisticStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidParameter(_) => BallisticStatus::InvalidParameter,
            Error::Domain(_) => BallisticStatus::Domain,
            Error::Stability(_) => BallisticStatus::Stability,
            Error::NormDrift { .. } => BallisticStatus::NormDrift,
            Error::Solver(_) => BallisticStatus::Solver,
            Error::Config(_) => BallisticStatus::Config,
            Error::Io { .. } => BallisticStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: BallisticStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BallisticStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BallisticStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            BallisticStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(BallisticStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(BallisticStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(
            BallisticStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(BallisticStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn params_of(p: BallisticParams) -> Result<PhysicalParams, Failure> {
    Ok(PhysicalParams::new(p.hbar, p.mass)?)
}

fn source_of(p: &PhysicalParams, s: BallisticSlit) -> Result<SlitSource, Failure> {
    Ok(SlitSource::new(p, s.center, s.sigma0, s.drift)?)
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ballistic_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ballistic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- single-slit analytics ----

#[no_mangle]
pub unsafe extern "C" fn ballistic_kink_time(
    params: BallisticParams,
    slit: BallisticSlit,
    out_value: *mut f64,
) -> BallisticStatus {
    guard(|| {
        let p = params_of(params)?;
        let s = source_of(&p, slit)?;
        *out(out_value, "out_value")? = analytic::kink_time(&s, &p);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_sigma_at(
    params: BallisticParams,
    slit: BallisticSlit,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    guard(|| {
        let p = params_of(params)?;
        let s = source_of(&p, slit)?;
        *out(out_value, "out_value")? = analytic::sigma_at(&s, &p, t)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_uncertainty_norm(
    params: BallisticParams,
    slit: BallisticSlit,
    out_value: *mut f64,
) -> BallisticStatus {
    guard(|| {
        let p = params_of(params)?;
        let s = source_of(&p, slit)?;
        *out(out_value, "out_value")? = ballistic_core::uncertainty_norm(&p, &s);
        Ok(())
    })
}

/// Single-slit density `P(x, t)`.
#[no_mangle]
pub unsafe extern "C" fn ballistic_density(
    params: BallisticParams,
    slit: BallisticSlit,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    guard(|| {
        let p = params_of(params)?;
        let s = source_of(&p, slit)?;
        analytic::sigma_at(&s, &p, t)?;
        *out(out_value, "out_value")? = analytic::gaussian_density(&s, &p, x, t);
        Ok(())
    })
}

/// Single-slit total velocity `v + u0^2 t xi / sigma^2`.
#[no_mangle]
pub unsafe extern "C" fn ballistic_total_velocity(
    params: BallisticParams,
    slit: BallisticSlit,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    guard(|| {
        let p = params_of(params)?;
        let s = source_of(&p, slit)?;
        analytic::sigma_at(&s, &p, t)?;
        *out(out_value, "out_value")? = analytic::total_velocity(&s, &p, x, t);
        Ok(())
    })
}

// ---- two-slit system ----

/// Builds a two-slit system. `total_shift` is ramped linearly over
/// `[t1, t2]`; pass `0, 0, 0` for no shifter.
#[no_mangle]
pub unsafe extern "C" fn ballistic_system_new(
    params: BallisticParams,
    slit1: BallisticSlit,
    slit2: BallisticSlit,
    total_shift: f64,
    t1: f64,
    t2: f64,
    out_system: *mut *mut BallisticSystem,
) -> BallisticStatus {
    guard(|| {
        let slot = out(out_system, "out_system")?;
        let p = params_of(params)?;
        let shifter = PhaseShifterSchedule::new(total_shift, t1, t2)?;
        let sys = DoubleSlitSystem::new(p, source_of(&p, slit1)?, source_of(&p, slit2)?, shifter)?;
        *slot = Box::into_raw(Box::new(BallisticSystem(sys)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_system_free(system: *mut BallisticSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Closes slit 1 or 2.
#[no_mangle]
pub unsafe extern "C" fn ballistic_system_block_slit(
    system: *mut BallisticSystem,
    slit: u32,
) -> BallisticStatus {
    guard(|| {
        let sys = out(system, "system")?;
        if slit != 1 && slit != 2 {
            return Err(fail(
                BallisticStatus::InvalidParameter,
                format!("slit must be 1 or 2, got {slit}"),
            ));
        }
        sys.0 = sys.0.with_slit_blocked(slit as usize);
        Ok(())
    })
}

/// Toggles the drift-energy contribution to the phase difference.
#[no_mangle]
pub unsafe extern "C" fn ballistic_system_set_energy_term(
    system: *mut BallisticSystem,
    on: bool,
) -> BallisticStatus {
    guard(|| {
        let sys = out(system, "system")?;
        sys.0 = sys.0.with_energy_term(on);
        Ok(())
    })
}

unsafe fn system_eval(
    system: *const BallisticSystem,
    x: f64,
    t: f64,
    out_value: *mut f64,
    f: impl FnOnce(&DoubleSlitSystem, f64, f64) -> f64,
) -> BallisticStatus {
    guard(|| {
        let sys = handle(system, "system")?;
        let slot = out(out_value, "out_value")?;
        if !(t >= 0.0) {
            return Err(fail(
                BallisticStatus::Domain,
                format!("time must be non-negative, got {t}"),
            ));
        }
        *slot = f(&sys.0, x, t);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_system_density(
    system: *const BallisticSystem,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    system_eval(system, x, t, out_value, |s, x, t| s.total_density(x, t))
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_system_current(
    system: *const BallisticSystem,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    system_eval(system, x, t, out_value, |s, x, t| s.total_current(x, t))
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_system_entangling_current(
    system: *const BallisticSystem,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    system_eval(system, x, t, out_value, |s, x, t| {
        s.entangling_current(x, t)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_system_phase_difference(
    system: *const BallisticSystem,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    system_eval(system, x, t, out_value, |s, x, t| s.phase_difference(x, t))
}

/// `J / P`; fails with `DOMAIN` where the density vanishes.
#[no_mangle]
pub unsafe extern "C" fn ballistic_system_field_velocity(
    system: *const BallisticSystem,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> BallisticStatus {
    guard(|| {
        let sys = handle(system, "system")?;
        let slot = out(out_value, "out_value")?;
        *slot = sys.0.field_velocity(x, t).ok_or_else(|| {
            fail(
                BallisticStatus::Domain,
                format!("velocity undefined at x = {x}, t = {t}"),
            )
        })?;
        Ok(())
    })
}

// ---- scenarios ----

/// Parses scenario text or a preset name, then applies `count` overrides of
/// the form `section.key=value` (`overrides` may be NULL when `count` is 0).
#[no_mangle]
pub unsafe extern "C" fn ballistic_scenario_parse(
    config: *const c_char,
    overrides: *const *const c_char,
    count: usize,
    out_scenario: *mut *mut BallisticScenario,
) -> BallisticStatus {
    guard(|| {
        let slot = out(out_scenario, "out_scenario")?;
        let config = text(config, "config")?;
        let mut list = Vec::with_capacity(count);
        if count > 0 {
            if overrides.is_null() {
                return Err(fail(BallisticStatus::NullPointer, "overrides is null"));
            }
            for k in 0..count {
                list.push(text(*overrides.add(k), "override")?.to_string());
            }
        }
        let scenario = parse_config_with_overrides(config, &list)?;
        *slot = Box::into_raw(Box::new(BallisticScenario(scenario)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_scenario_free(scenario: *mut BallisticScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Serialized scenario; release with [`ballistic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ballistic_scenario_to_text(
    scenario: *const BallisticScenario,
    out_text: *mut *mut c_char,
) -> BallisticStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        let slot = out(out_text, "out_text")?;
        let c = CString::new(s.0.to_config_string()).map_err(|_| {
            fail(
                BallisticStatus::InvalidParameter,
                "scenario text contains NUL",
            )
        })?;
        *slot = c.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_scenario_grid(
    scenario: *const BallisticScenario,
    out_grid: *mut BallisticGrid,
) -> BallisticStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        *out(out_grid, "out_grid")? = grid_of(&s.0.grid);
        Ok(())
    })
}

fn grid_of(g: &ballistic_core::Grid) -> BallisticGrid {
    BallisticGrid {
        x_min: g.x_min(),
        x_max: g.x_max(),
        nx: g.nx(),
        t_max: g.t_max(),
        nt: g.nt(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_scenario_run(
    scenario: *const BallisticScenario,
    out_run: *mut *mut BallisticRun,
) -> BallisticStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        let slot = out(out_run, "out_run")?;
        let bundle = run_scenario(&s.0)?;
        *slot = Box::into_raw(Box::new(BallisticRun(bundle)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_run_free(run: *mut BallisticRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ballistic_run_grid(
    run: *const BallisticRun,
    out_grid: *mut BallisticGrid,
) -> BallisticStatus {
    guard(|| {
        let r = handle(run, "run")?;
        *out(out_grid, "out_grid")? = grid_of(&r.0.grid);
        Ok(())
    })
}

/// Copies field `name` (e.g. "density") into `buffer` in row-major order,
/// `t` outermost. `length` must be at least `nx * (nt + 1)`.
#[no_mangle]
pub unsafe extern "C" fn ballistic_run_copy_field(
    run: *const BallisticRun,
    name: *const c_char,
    buffer: *mut f64,
    length: usize,
) -> BallisticStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let name = text(name, "name")?;
        let field = r.0.field(name).ok_or_else(|| {
            fail(
                BallisticStatus::NotFound,
                format!("no field named `{name}` in this run"),
            )
        })?;
        let values = field.values();
        if length < values.len() {
            return Err(fail(
                BallisticStatus::BufferTooSmall,
                format!(
                    "field `{name}` needs {} values, buffer holds {length}",
                    values.len()
                ),
            ));
        }
        if buffer.is_null() {
            return Err(fail(BallisticStatus::NullPointer, "buffer is null"));
        }
        std::slice::from_raw_parts_mut(buffer, values.len()).copy_from_slice(values);
        Ok(())
    })
}

/// Number of trajectories (0 when none were requested) and of output times.
#[no_mangle]
pub unsafe extern "C" fn ballistic_run_trajectory_shape(
    run: *const BallisticRun,
    out_count: *mut usize,
    out_times: *mut usize,
) -> BallisticStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let (count, times) =
            r.0.trajectories
                .as_ref()
                .map_or((0, 0), |t| (t.len(), t.times.len()));
        *out(out_count, "out_count")? = count;
        *out(out_times, "out_times")? = times;
        Ok(())
    })
}

/// Copies trajectory `index` into `buffer` and reports how many samples were
/// written; a truncated path has fewer samples than output times.
#[no_mangle]
pub unsafe extern "C" fn ballistic_run_copy_trajectory(
    run: *const BallisticRun,
    index: usize,
    buffer: *mut f64,
    length: usize,
    out_written: *mut usize,
) -> BallisticStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let written = out(out_written, "out_written")?;
        let set =
            r.0.trajectories
                .as_ref()
                .ok_or_else(|| fail(BallisticStatus::NotFound, "run has no trajectories"))?;
        let path = set.positions.get(index).ok_or_else(|| {
            fail(
                BallisticStatus::NotFound,
                format!("trajectory {index} out of range"),
            )
        })?;
        if length < path.len() {
            return Err(fail(
                BallisticStatus::BufferTooSmall,
                format!(
                    "trajectory needs {} values, buffer holds {length}",
                    path.len()
                ),
            ));
        }
        if buffer.is_null() {
            return Err(fail(BallisticStatus::NullPointer, "buffer is null"));
        }
        std::slice::from_raw_parts_mut(buffer, path.len()).copy_from_slice(path);
        *written = path.len();
        Ok(())
    })
}

/// Writes the run's CSV and/or PGM files into `directory`.
#[no_mangle]
pub unsafe extern "C" fn ballistic_run_write(
    run: *const BallisticRun,
    directory: *const c_char,
    csv: bool,
    pgm: bool,
) -> BallisticStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let dir = text(directory, "directory")?;
        let mut formats = Vec::new();
        if csv {
            formats.push(Format::Csv);
        }
        if pgm {
            formats.push(Format::Pgm);
        }
        write_bundle(&r.0, Path::new(dir), &formats)?;
        Ok(())
    })
}
