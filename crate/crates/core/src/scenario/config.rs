//! Flat sectioned `key = value` scenario files.
//!
//! ```text
//! # comment
//! [section]
//! key = value   # trailing comment
//! ```
//!
//! Numbers accept a `pi` suffix (`3pi`, `-0.5pi`, `pi`). Every problem in a
//! file is reported, each with its line number.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{ConfigError, Error, Result};
use crate::fdm::{DiffusivityMode, Scheme, DEFAULT_NORM_TOLERANCE};
use crate::grid::Grid;
use crate::interference::PhaseShifterSchedule;
use crate::params::{PhysicalParams, SlitSource};
use crate::stability::stable_step_count;

use super::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputKind {
    Density,
    PhaseDifference,
    EntanglingCurrent,
    Diffusivity,
    Trajectories,
    NormTrace,
}

impl OutputKind {
    pub const ALL: [OutputKind; 6] = [
        OutputKind::Density,
        OutputKind::PhaseDifference,
        OutputKind::EntanglingCurrent,
        OutputKind::Diffusivity,
        OutputKind::Trajectories,
        OutputKind::NormTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Density => "density",
            OutputKind::PhaseDifference => "phase_difference",
            OutputKind::EntanglingCurrent => "entangling_current",
            OutputKind::Diffusivity => "diffusivity",
            OutputKind::Trajectories => "trajectories",
            OutputKind::NormTrace => "norm_trace",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub mode: DiffusivityMode,
    pub scheme: Scheme,
    pub norm_tolerance: f64,
    pub clamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRequest {
    pub seeds_per_slit: usize,
    /// Half-width of the seed fan in units of the slit's sigma0.
    pub span: f64,
    /// Integration step; `None` means a quarter of the grid step.
    pub dt: Option<f64>,
}

impl Default for TrajectoryRequest {
    fn default() -> Self {
        Self {
            seeds_per_slit: 21,
            span: 3.0,
            dt: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: PhysicalParams,
    pub grid: Grid,
    /// One or two slits.
    pub sources: Vec<SlitSource>,
    pub shifter: Option<PhaseShifterSchedule>,
    pub energy_term: bool,
    pub solver: Option<SolverSettings>,
    pub trajectories: Option<TrajectoryRequest>,
    pub outputs: BTreeSet<OutputKind>,
    /// Gamma applied to PGM renderings.
    pub gamma: f64,
    /// Write a companion sign map for signed fields.
    pub sign_maps: bool,
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
    used: Vec<bool>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        let idx = self.entries.iter().position(|e| e.key == key)?;
        self.used[idx] = true;
        Some(self.entries[idx].clone())
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("scenario", &["name"]),
    ("params", &["hbar", "mass"]),
    ("grid", &["x_min", "x_max", "nx", "t_max", "nt"]),
    ("slit1", &["center", "sigma0", "drift"]),
    ("slit2", &["center", "sigma0", "drift"]),
    ("shifter", &["total_shift", "t1", "t2"]),
    ("interference", &["energy_term"]),
    ("solver", &["mode", "scheme", "norm_tolerance", "clamp"]),
    ("trajectories", &["seeds_per_slit", "span", "dt"]),
    ("output", &["fields", "gamma", "sign_maps"]),
];

fn lex(text: &str, errors: &mut Vec<ConfigError>) -> Vec<Section> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                errors.push(ConfigError::new(
                    line,
                    format!("malformed section header `{content}`"),
                ));
                continue;
            };
            let name = name.trim().to_string();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                errors.push(ConfigError::new(
                    line,
                    format!("unknown section `[{name}]`"),
                ));
            } else if let Some(prev) = sections.iter().find(|s| s.name == name) {
                errors.push(ConfigError::new(
                    line,
                    format!("section `[{name}]` repeated (first on line {})", prev.line),
                ));
            }
            sections.push(Section {
                name,
                line,
                entries: Vec::new(),
                used: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(ConfigError::new(
                line,
                format!("expected `key = value`, got `{content}`"),
            ));
            continue;
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        let Some(section) = sections.last_mut() else {
            errors.push(ConfigError::new(
                line,
                format!("key `{key}` outside of any section"),
            ));
            continue;
        };
        if section.entries.iter().any(|e| e.key == key) {
            errors.push(ConfigError::new(
                line,
                format!("key `{key}` repeated in [{}]", section.name),
            ));
            continue;
        }
        section.entries.push(Entry { key, value, line });
        section.used.push(false);
    }
    sections
}

/// Applies `section.key=value` overrides, creating sections as needed.
fn apply_overrides(
    sections: &mut Vec<Section>,
    overrides: &[String],
    errors: &mut Vec<ConfigError>,
) {
    for o in overrides {
        let parsed = o
            .split_once('=')
            .and_then(|(path, value)| path.trim().split_once('.').map(|(s, k)| (s, k, value)));
        let Some((section, key, value)) = parsed else {
            errors.push(ConfigError::new(
                0,
                format!("override `{o}` is not of the form section.key=value"),
            ));
            continue;
        };
        let (section, key, value) = (section.trim(), key.trim(), value.trim());
        if !SECTIONS.iter().any(|(s, _)| *s == section) {
            errors.push(ConfigError::new(
                0,
                format!("override `{o}`: unknown section `[{section}]`"),
            ));
            continue;
        }
        let idx = match sections.iter().position(|s| s.name == section) {
            Some(i) => i,
            None => {
                sections.push(Section {
                    name: section.to_string(),
                    line: 0,
                    entries: Vec::new(),
                    used: Vec::new(),
                });
                sections.len() - 1
            }
        };
        let s = &mut sections[idx];
        match s.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => {
                e.value = value.to_string();
                e.line = 0;
            }
            None => {
                s.entries.push(Entry {
                    key: key.to_string(),
                    value: value.to_string(),
                    line: 0,
                });
                s.used.push(false);
            }
        }
    }
}

/// Parses a number with an optional `pi` factor suffix.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(coeff) = t.strip_suffix("pi") {
        let coeff = coeff.trim().trim_end_matches('*').trim();
        let c = match coeff {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().ok()?,
        };
        return Some(c * std::f64::consts::PI);
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

struct Reader<'a> {
    sections: &'a mut Vec<Section>,
    errors: &'a mut Vec<ConfigError>,
}

impl Reader<'_> {
    fn section(&mut self, name: &str) -> Option<&mut Section> {
        self.sections.iter_mut().find(|s| s.name == name)
    }

    fn has(&self, name: &str) -> bool {
        self.sections.iter().any(|s| s.name == name)
    }

    fn header_line(&self, name: &str) -> usize {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .map_or(0, |s| s.line)
    }

    fn raw(&mut self, section: &str, key: &str, required: bool) -> Option<Entry> {
        let header = self.header_line(section);
        let found = self.section(section).and_then(|s| s.take(key));
        if found.is_none() && required {
            self.errors.push(ConfigError::new(
                header,
                format!("missing required key `{key}` in [{section}]"),
            ));
        }
        found
    }

    fn number(&mut self, section: &str, key: &str, required: bool) -> Option<f64> {
        let e = self.raw(section, key, required)?;
        let v = parse_number(&e.value);
        if v.is_none() {
            self.errors.push(ConfigError::new(
                e.line,
                format!("[{section}] {key}: `{}` is not a finite number", e.value),
            ));
        }
        v
    }

    fn count(&mut self, section: &str, key: &str, required: bool) -> Option<usize> {
        let e = self.raw(section, key, required)?;
        let v = e.value.parse::<usize>().ok();
        if v.is_none() {
            self.errors.push(ConfigError::new(
                e.line,
                format!(
                    "[{section}] {key}: `{}` is not a non-negative integer",
                    e.value
                ),
            ));
        }
        v
    }

    fn flag(&mut self, section: &str, key: &str) -> Option<bool> {
        let e = self.raw(section, key, false)?;
        match e.value.as_str() {
            "true" | "yes" | "on" => Some(true),
            "false" | "no" | "off" => Some(false),
            other => {
                self.errors.push(ConfigError::new(
                    e.line,
                    format!("[{section}] {key}: expected true or false, got `{other}`"),
                ));
                None
            }
        }
    }

    fn fail(&mut self, line: usize, message: impl Into<String>) {
        self.errors.push(ConfigError::new(line, message));
    }
}

/// Parses scenario text, or a bare preset name, into a validated
/// [`Scenario`].
pub fn parse_config(text: &str) -> Result<Scenario> {
    parse_config_with_overrides(text, &[])
}

pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<Scenario> {
    let trimmed = text.trim();
    let preset = presets::preset_text(trimmed);
    let text = match &preset {
        Some(preset) => preset.as_str(),
        None => text,
    };

    let mut errors = Vec::new();
    let mut sections = lex(text, &mut errors);
    apply_overrides(&mut sections, overrides, &mut errors);
    let scenario = build(&mut sections, &mut errors);

    for s in &sections {
        if let Some((_, keys)) = SECTIONS.iter().find(|(n, _)| *n == s.name) {
            for (e, used) in s.entries.iter().zip(&s.used) {
                if !used && !keys.contains(&e.key.as_str()) {
                    errors.push(ConfigError::new(
                        e.line,
                        format!("unknown key `{}` in [{}]", e.key, s.name),
                    ));
                }
            }
        }
    }

    match scenario {
        Some(s) if errors.is_empty() => Ok(s),
        _ => {
            if errors.is_empty() {
                errors.push(ConfigError::new(0, "invalid scenario"));
            }
            errors.sort_by_key(|e| e.line);
            Err(Error::Config(errors))
        }
    }
}

fn build(sections: &mut Vec<Section>, errors: &mut Vec<ConfigError>) -> Option<Scenario> {
    let mut r = Reader { sections, errors };

    let name = r
        .raw("scenario", "name", false)
        .map(|e| e.value)
        .unwrap_or_else(|| "custom".to_string());

    // params: optional, natural units by default
    let hbar = r.number("params", "hbar", false).unwrap_or(1.0);
    let mass = r.number("params", "mass", false).unwrap_or(1.0);
    let params = match PhysicalParams::new(hbar, mass) {
        Ok(p) => Some(p),
        Err(e) => {
            let line = r.header_line("params");
            r.fail(line, e.to_string());
            None
        }
    };

    for required in ["grid", "slit1", "output"] {
        if !r.has(required) {
            r.fail(0, format!("missing required section [{required}]"));
        }
    }

    let x_min = r.number("grid", "x_min", true);
    let x_max = r.number("grid", "x_max", true);
    let nx = r.count("grid", "nx", true);
    let t_max = r.number("grid", "t_max", true);
    let nt_entry = r.raw("grid", "nt", true);

    let mut sources = Vec::new();
    for slit in ["slit1", "slit2"] {
        if !r.has(slit) {
            continue;
        }
        let center = r.number(slit, "center", true);
        let sigma0 = r.number(slit, "sigma0", true);
        let drift = r.number(slit, "drift", false).unwrap_or(0.0);
        if let (Some(p), Some(c), Some(s)) = (params.as_ref(), center, sigma0) {
            match SlitSource::new(p, c, s, drift) {
                Ok(src) => sources.push(src),
                Err(e) => {
                    let line = r.header_line(slit);
                    r.fail(line, format!("[{slit}] {e}"));
                }
            }
        }
    }
    if sources.len() == 2 && sources[0].center() == sources[1].center() {
        let line = r.header_line("slit2");
        r.fail(line, "slit centers must differ");
    }

    let shifter = if r.has("shifter") {
        let line = r.header_line("shifter");
        let total = r.number("shifter", "total_shift", true);
        let t1 = r.number("shifter", "t1", false).unwrap_or(0.0);
        let t2 = r.number("shifter", "t2", false).unwrap_or(t1);
        if !r.has("slit2") {
            r.fail(
                line,
                "a phase shifter requires two sources ([slit2] missing)",
            );
        }
        total.and_then(|total| match PhaseShifterSchedule::new(total, t1, t2) {
            Ok(s) => Some(s),
            Err(e) => {
                r.fail(line, format!("[shifter] {e}"));
                None
            }
        })
    } else {
        None
    };

    let energy_term = r.flag("interference", "energy_term").unwrap_or(false);
    if energy_term && !r.has("slit2") {
        let line = r.header_line("interference");
        r.fail(line, "the energy term needs two sources");
    }

    let solver = if r.has("solver") {
        let mode = match r.raw("solver", "mode", false).map(|e| (e.value, e.line)) {
            None => Some(DiffusivityMode::ClosedForm),
            Some((v, line)) => {
                match v.as_str() {
                    "closed_form" => Some(DiffusivityMode::ClosedForm),
                    "local_recursion" => Some(DiffusivityMode::LocalRecursion),
                    other => {
                        r.fail(line, format!("[solver] mode: expected closed_form or local_recursion, got `{other}`"));
                        None
                    }
                }
            }
        };
        let scheme = match r.raw("solver", "scheme", false).map(|e| (e.value, e.line)) {
            None => Some(Scheme::Explicit),
            Some((v, line)) => match v.as_str() {
                "explicit" => Some(Scheme::Explicit),
                "implicit" => Some(Scheme::Implicit),
                other => {
                    r.fail(
                        line,
                        format!("[solver] scheme: expected explicit or implicit, got `{other}`"),
                    );
                    None
                }
            },
        };
        let norm_tolerance = r
            .number("solver", "norm_tolerance", false)
            .unwrap_or(DEFAULT_NORM_TOLERANCE);
        if !(norm_tolerance > 0.0) {
            let line = r.header_line("solver");
            r.fail(line, "[solver] norm_tolerance must be positive");
        }
        let clamp = r.flag("solver", "clamp").unwrap_or(true);
        match (mode, scheme) {
            (Some(mode), Some(scheme)) => Some(SolverSettings {
                mode,
                scheme,
                norm_tolerance,
                clamp,
            }),
            _ => None,
        }
    } else {
        None
    };

    let mut trajectories = if r.has("trajectories") {
        let line = r.header_line("trajectories");
        let defaults = TrajectoryRequest::default();
        let seeds_per_slit = r
            .count("trajectories", "seeds_per_slit", false)
            .unwrap_or(defaults.seeds_per_slit);
        let span = r
            .number("trajectories", "span", false)
            .unwrap_or(defaults.span);
        let dt = r.number("trajectories", "dt", false);
        if seeds_per_slit == 0 {
            r.fail(line, "[trajectories] seeds_per_slit must be at least 1");
        }
        if !(span > 0.0) {
            r.fail(line, "[trajectories] span must be positive");
        }
        if dt.is_some_and(|d| !(d > 0.0)) {
            r.fail(line, "[trajectories] dt must be positive");
        }
        Some(TrajectoryRequest {
            seeds_per_slit,
            span,
            dt,
        })
    } else {
        None
    };

    let mut outputs = BTreeSet::new();
    let output_line = r.header_line("output");
    if let Some(e) = r.raw("output", "fields", true) {
        for item in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match OutputKind::from_name(item) {
                Some(k) => {
                    outputs.insert(k);
                }
                None => r.fail(e.line, format!("[output] unknown field `{item}`")),
            }
        }
        if outputs.is_empty() {
            r.fail(e.line, "at least one output must be selected");
        }
    }
    let gamma = r.number("output", "gamma", false).unwrap_or(1.0);
    if !(gamma > 0.0) {
        r.fail(output_line, "[output] gamma must be positive");
    }
    let sign_maps = r.flag("output", "sign_maps").unwrap_or(false);

    for kind in [OutputKind::PhaseDifference, OutputKind::EntanglingCurrent] {
        if outputs.contains(&kind) && r.has("slit1") && !r.has("slit2") {
            r.fail(
                output_line,
                format!("output `{}` needs two sources", kind.name()),
            );
        }
    }
    for kind in [OutputKind::Diffusivity, OutputKind::NormTrace] {
        if outputs.contains(&kind) && !r.has("solver") {
            r.fail(
                output_line,
                format!("output `{}` needs a [solver] section", kind.name()),
            );
        }
    }
    if outputs.contains(&OutputKind::Trajectories) && trajectories.is_none() {
        trajectories = Some(TrajectoryRequest::default());
    }

    // grid last: `nt = auto` needs the solver and sources
    let grid = match (x_min, x_max, nx, t_max, nt_entry) {
        (Some(a), Some(b), Some(n), Some(t), Some(nt_e)) => {
            let nt = if nt_e.value == "auto" {
                match (&solver, params.as_ref()) {
                    (Some(s), Some(p)) if s.scheme == Scheme::Explicit && !sources.is_empty() => {
                        Grid::new(a, b, n, t, 1).ok().map(|g| {
                            sources
                                .iter()
                                .map(|src| stable_step_count(&g, src, p))
                                .max()
                                .unwrap_or(1)
                        })
                    }
                    _ => {
                        r.fail(nt_e.line, "[grid] nt = auto needs an explicit [solver]");
                        None
                    }
                }
            } else {
                match nt_e.value.parse::<usize>() {
                    Ok(v) => Some(v),
                    Err(_) => {
                        r.fail(
                            nt_e.line,
                            format!("[grid] nt: `{}` is not an integer or `auto`", nt_e.value),
                        );
                        None
                    }
                }
            };
            nt.and_then(|nt| match Grid::new(a, b, n, t, nt) {
                Ok(g) => Some(g),
                Err(e) => {
                    let line = r.header_line("grid");
                    r.fail(line, format!("[grid] {e}"));
                    None
                }
            })
        }
        _ => None,
    };

    if sources.is_empty() {
        return None;
    }
    Some(Scenario {
        name,
        params: params?,
        grid: grid?,
        sources,
        shifter,
        energy_term,
        solver,
        trajectories,
        outputs,
        gamma,
        sign_maps,
    })
}

impl Scenario {
    pub fn is_double_slit(&self) -> bool {
        self.sources.len() == 2
    }

    /// Renders the scenario in the file format; parsing the result yields
    /// an equal scenario.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[scenario]\nname = {}\n", self.name);
        let _ = writeln!(
            out,
            "[params]\nhbar = {:?}\nmass = {:?}\n",
            self.params.hbar(),
            self.params.mass()
        );
        let g = &self.grid;
        let _ = writeln!(
            out,
            "[grid]\nx_min = {:?}\nx_max = {:?}\nnx = {}\nt_max = {:?}\nnt = {}\n",
            g.x_min(),
            g.x_max(),
            g.nx(),
            g.t_max(),
            g.nt()
        );
        for (k, s) in self.sources.iter().enumerate() {
            let _ = writeln!(
                out,
                "[slit{}]\ncenter = {:?}\nsigma0 = {:?}\ndrift = {:?}\n",
                k + 1,
                s.center(),
                s.sigma0(),
                s.drift()
            );
        }
        if let Some(s) = &self.shifter {
            let _ = writeln!(
                out,
                "[shifter]\ntotal_shift = {:?}\nt1 = {:?}\nt2 = {:?}\n",
                s.total_shift(),
                s.t1(),
                s.t2()
            );
        }
        if self.energy_term {
            let _ = writeln!(out, "[interference]\nenergy_term = true\n");
        }
        if let Some(s) = &self.solver {
            let mode = match s.mode {
                DiffusivityMode::ClosedForm => "closed_form",
                DiffusivityMode::LocalRecursion => "local_recursion",
            };
            let scheme = match s.scheme {
                Scheme::Explicit => "explicit",
                Scheme::Implicit => "implicit",
            };
            let _ = writeln!(
                out,
                "[solver]\nmode = {mode}\nscheme = {scheme}\nnorm_tolerance = {:?}\nclamp = {}\n",
                s.norm_tolerance, s.clamp
            );
        }
        if let Some(t) = &self.trajectories {
            let _ = write!(
                out,
                "[trajectories]\nseeds_per_slit = {}\nspan = {:?}\n",
                t.seeds_per_slit, t.span
            );
            if let Some(dt) = t.dt {
                let _ = writeln!(out, "dt = {dt:?}");
            }
            out.push('\n');
        }
        let fields: Vec<&str> = self.outputs.iter().map(|k| k.name()).collect();
        let _ = writeln!(
            out,
            "[output]\nfields = {}\ngamma = {:?}\nsign_maps = {}",
            fields.join(", "),
            self.gamma,
            self.sign_maps
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[grid]
x_min = -10
x_max = 10
nx = 201
t_max = 2
nt = 100

[slit1]
center = 0
sigma0 = 1

[output]
fields = density
";

    fn errors_of(text: &str) -> Vec<ConfigError> {
        match parse_config(text) {
            Err(Error::Config(e)) => e,
            other => panic!("expected config errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_single_slit() {
        let s = parse_config(MINIMAL).unwrap();
        assert_eq!(s.sources.len(), 1);
        assert_eq!(s.params, PhysicalParams::natural());
        assert_eq!(s.grid.nx(), 201);
        assert_eq!(s.outputs.len(), 1);
        assert!(s.solver.is_none() && s.shifter.is_none());
        assert_eq!(s.name, "custom");
    }

    #[test]
    fn shifter_requires_two_sources() {
        let text = format!("{MINIMAL}\n[shifter]\ntotal_shift = 3pi\nt1 = 1\nt2 = 2\n");
        let errs = errors_of(&text);
        assert!(errs
            .iter()
            .any(|e| e.message.contains("requires two sources")
                && e.line == MINIMAL.lines().count() + 2));
    }

    #[test]
    fn reports_every_problem_with_lines() {
        let text = "\
[grid]
x_min = -10
x_max = ten
nx = 201
t_max = 2
nt = 100
colour = blue

[slit1]
center = 0

[output]
fields = density, sparkles
";
        let errs = errors_of(text);
        let lines: Vec<usize> = errs.iter().map(|e| e.line).collect();
        assert!(errs
            .iter()
            .any(|e| e.line == 3 && e.message.contains("ten")));
        assert!(errs
            .iter()
            .any(|e| e.line == 7 && e.message.contains("unknown key `colour`")));
        assert!(errs
            .iter()
            .any(|e| e.line == 9 && e.message.contains("sigma0")));
        assert!(errs
            .iter()
            .any(|e| e.line == 13 && e.message.contains("sparkles")));
        assert!(lines.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn structural_errors() {
        let errs = errors_of("key = 1\n[nowhere]\n[grid]\n[grid]\nnot a pair\n");
        let text: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        let all = text.join("\n");
        assert!(all.contains("line 1: key `key` outside"));
        assert!(all.contains("line 2: unknown section `[nowhere]`"));
        assert!(all.contains("line 4: section `[grid]` repeated"));
        assert!(all.contains("line 5: expected `key = value`"));
        assert!(all.contains("missing required section [slit1]"));
    }

    #[test]
    fn pi_suffix() {
        use std::f64::consts::PI;
        assert_eq!(parse_number("3pi"), Some(3.0 * PI));
        assert_eq!(parse_number("pi"), Some(PI));
        assert_eq!(parse_number("-pi"), Some(-PI));
        assert_eq!(parse_number("2.5 * pi"), Some(2.5 * PI));
        assert_eq!(parse_number("1e-3"), Some(1e-3));
        assert_eq!(parse_number("inf"), None);
        assert_eq!(parse_number("x"), None);
    }

    #[test]
    fn preset_name_is_accepted() {
        let s = parse_config("fig3a").unwrap();
        assert!(s.is_double_slit());
        assert_eq!(s.sources[0].drift(), 0.0);
        assert_eq!(s.sources[1].drift(), 0.0);
        assert_eq!(s.sources[0].center(), -s.sources[1].center());
        assert_eq!(s.sources[0].sigma0(), s.sources[1].sigma0());
        assert_eq!(s.name, "fig3a");
    }

    #[test]
    fn overrides_replace_and_add() {
        let s = parse_config_with_overrides(
            "fig1",
            &[
                "grid.nt=auto".into(),
                "solver.scheme=explicit".into(),
                "output.fields=density,norm_trace".into(),
            ],
        )
        .unwrap();
        assert!(s.solver.is_some());
        let p = s.params;
        assert!(crate::check_stability(&s.grid, &s.sources[0], &p).ok);
        let bad = parse_config_with_overrides("fig1", &["gridnt".into(), "nope.x=1".into()]);
        match bad {
            Err(Error::Config(e)) => assert_eq!(e.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solver_outputs_need_solver() {
        let text = MINIMAL.replace("fields = density", "fields = density, diffusivity");
        assert!(errors_of(&text)
            .iter()
            .any(|e| e.message.contains("needs a [solver]")));
        let text = MINIMAL.replace("fields = density", "fields = entangling_current");
        assert!(errors_of(&text)
            .iter()
            .any(|e| e.message.contains("needs two sources")));
        let text = MINIMAL.replace("fields = density", "fields = ");
        assert!(errors_of(&text)
            .iter()
            .any(|e| e.message.contains("at least one output")));
    }

    #[test]
    fn round_trip_presets() {
        for name in presets::PRESET_NAMES {
            let s = parse_config(name).unwrap();
            let again = parse_config(&s.to_config_string()).unwrap();
            assert_eq!(s, again, "{name}");
        }
    }

    proptest::proptest! {
        #[test]
        fn round_trip_arbitrary(
            x_max in 1.0f64..100.0,
            nx in 3usize..2000,
            t_max in 0.01f64..50.0,
            nt in 1usize..5000,
            sigma0 in 0.01f64..5.0,
            drift in -3.0f64..3.0,
            shift in 0.0f64..30.0,
            hbar in 0.1f64..10.0,
            with_solver in proptest::bool::ANY,
            seeds in 1usize..50,
        ) {
            let mut text = format!(
                "[params]\nhbar = {hbar:?}\n[grid]\nx_min = {:?}\nx_max = {x_max:?}\nnx = {nx}\nt_max = {t_max:?}\nnt = {nt}\n\
                 [slit1]\ncenter = -1.5\nsigma0 = {sigma0:?}\ndrift = {drift:?}\n\
                 [slit2]\ncenter = 2.25\nsigma0 = {:?}\n\
                 [shifter]\ntotal_shift = {shift:?}\nt1 = 0.5\nt2 = 1.5\n\
                 [trajectories]\nseeds_per_slit = {seeds}\nspan = 2.5\n\
                 [output]\nfields = density, trajectories, entangling_current\ngamma = 0.5\n",
                -x_max, sigma0 * 0.5
            );
            if with_solver {
                text.push_str("[solver]\nmode = local_recursion\nscheme = implicit\nclamp = false\n");
            }
            let s = parse_config(&text).unwrap();
            let again = parse_config(&s.to_config_string()).unwrap();
            proptest::prop_assert_eq!(s, again);
        }
    }
}
