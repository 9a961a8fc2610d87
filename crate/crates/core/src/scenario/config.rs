//! Scenario files: `[section]` headers with `key = value` lines (a TOML
//! subset). A top-level `preset = "name"` expands first; keys that follow
//! override it.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use toml::de::{DeTable, DeValue};

use crate::eit::{ControlSchedule, MediumParams, MediumPreset, ProbeSpec, ScheduleKind, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::nlse::{Grid1D, Mode, Perturbation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub points: usize,
    pub domain_len: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid1D> {
        Grid1D::new(self.points, self.domain_len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Bright,
    Dark,
    PaperEq13,
    Gaussian,
    Zero,
    /// A snapshot file (xi, re_psi, im_psi) in physical units.
    File,
}

impl InitKind {
    const ALL: [InitKind; 6] = [
        InitKind::Bright,
        InitKind::Dark,
        InitKind::PaperEq13,
        InitKind::Gaussian,
        InitKind::Zero,
        InitKind::File,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitKind::Bright => "bright",
            InitKind::Dark => "dark",
            InitKind::PaperEq13 => "paper-eq13",
            InitKind::Gaussian => "gaussian",
            InitKind::Zero => "zero",
            InitKind::File => "file",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitConfig {
    pub profile: InitKind,
    /// Soliton or Gaussian center ξ (m).
    pub center: f64,
    /// Gaussian peak amplitude.
    pub amplitude: Option<f64>,
    /// Gaussian 1/e half-width of the amplitude (m).
    pub width: Option<f64>,
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub t_start: f64,
    pub t_final: f64,
    pub dt: f64,
    pub snapshot_every: u64,
    pub mode: Mode,
    pub perturbation: Perturbation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub preset: Option<String>,
    pub medium: MediumParams,
    pub probe: ProbeSpec,
    pub control: ControlSchedule,
    pub grid: GridConfig,
    pub init: InitConfig,
    pub run: RunConfig,
    pub output_dir: Option<PathBuf>,
}

const REQUIRED_SECTIONS: [&str; 4] = ["medium", "probe", "control", "run"];

const REQUIRED_KEYS: [&str; 8] = [
    "medium.g",
    "medium.atoms_N",
    "medium.omega0",
    "probe.detuning",
    "probe.a0cos0",
    "control.omega_start",
    "run.t_final",
    "run.dt",
];

const SECTIONS: [&str; 7] = ["medium", "probe", "control", "grid", "init", "run", "output"];

/// A scalar taken from the file or from a sweep override.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigValue {
    Num(f64),
    Text(String),
}

fn mode_from_name(name: &str) -> Option<Mode> {
    [Mode::Physical, Mode::Normalized].into_iter().find(|m| m.name() == name)
}

fn perturbation_from_name(name: &str) -> Option<Perturbation> {
    [Perturbation::Exact, Perturbation::TanTheta].into_iter().find(|p| p.name() == name)
}

fn num(v: &ConfigValue) -> std::result::Result<f64, String> {
    match v {
        ConfigValue::Num(x) => Ok(*x),
        ConfigValue::Text(_) => Err("expected a number".into()),
    }
}

fn count(v: &ConfigValue) -> std::result::Result<u64, String> {
    let x = num(v)?;
    if x >= 0.0 && x.fract() == 0.0 && x < 9.0e15 {
        Ok(x as u64)
    } else {
        Err(format!("expected a non-negative integer, got {x}"))
    }
}

fn text(v: &ConfigValue) -> std::result::Result<&str, String> {
    match v {
        ConfigValue::Text(s) => Ok(s),
        ConfigValue::Num(_) => Err("expected a quoted string".into()),
    }
}

fn choice<T>(found: Option<T>, value: &str, options: &[&str]) -> std::result::Result<T, String> {
    found.ok_or_else(|| format!("unknown value \"{value}\", expected one of {}", options.join(", ")))
}

impl Scenario {
    /// Scenario built from a named parameter preset.
    pub fn from_preset(name: &str) -> Option<Scenario> {
        let preset = MediumPreset::by_name(name)?;
        let dark = name == "paper-dark";
        Some(Scenario {
            preset: Some(name.to_string()),
            medium: preset.medium,
            probe: preset.probe,
            control: ControlSchedule::constant(preset.omega_rabi),
            grid: GridConfig {
                points: 4096,
                domain_len: if dark { 2.4e-4 } else { 8.0e-3 },
            },
            init: InitConfig {
                profile: if dark { InitKind::Dark } else { InitKind::Bright },
                center: 0.0,
                amplitude: None,
                width: None,
                file: None,
            },
            run: RunConfig {
                t_start: 0.0,
                t_final: 1.0e-2,
                dt: 1.0e-6,
                snapshot_every: 1000,
                mode: Mode::Physical,
                perturbation: Perturbation::Exact,
            },
            output_dir: None,
        })
    }

    /// Defaults for optional keys; required ones are NaN until set.
    fn blank() -> Scenario {
        Scenario {
            preset: None,
            medium: MediumParams {
                g: f64::NAN,
                atoms_n: f64::NAN,
                gamma_ab: 0.0,
                gamma_cb: 0.0,
                gamma_ca: 0.0,
                omega0: f64::NAN,
                light_speed: SPEED_OF_LIGHT,
            },
            probe: ProbeSpec {
                detuning: f64::NAN,
                a0cos0: f64::NAN,
                k_c: None,
            },
            control: ControlSchedule::constant(f64::NAN),
            grid: GridConfig {
                points: 4096,
                domain_len: 8.0e-3,
            },
            init: InitConfig {
                profile: InitKind::Bright,
                center: 0.0,
                amplitude: None,
                width: None,
                file: None,
            },
            run: RunConfig {
                t_start: 0.0,
                t_final: f64::NAN,
                dt: f64::NAN,
                snapshot_every: 1000,
                mode: Mode::Physical,
                perturbation: Perturbation::Exact,
            },
            output_dir: None,
        }
    }

    /// Set one `section.key`. This match is the whitelist of accepted keys.
    fn assign(&mut self, section: &str, key: &str, v: &ConfigValue) -> std::result::Result<(), String> {
        match (section, key) {
            ("medium", "g") => self.medium.g = num(v)?,
            ("medium", "atoms_N") => self.medium.atoms_n = num(v)?,
            ("medium", "gamma_ab") => self.medium.gamma_ab = num(v)?,
            ("medium", "gamma_cb") => self.medium.gamma_cb = num(v)?,
            ("medium", "gamma_ca") => self.medium.gamma_ca = num(v)?,
            ("medium", "omega0") => self.medium.omega0 = num(v)?,
            ("medium", "light_speed") => self.medium.light_speed = num(v)?,
            ("probe", "detuning") => self.probe.detuning = num(v)?,
            ("probe", "a0cos0") => self.probe.a0cos0 = num(v)?,
            ("probe", "k_c") => self.probe.k_c = Some(num(v)?),
            ("control", "kind") => {
                let s = text(v)?;
                self.control.kind = choice(ScheduleKind::from_name(s), s, &["constant", "linear", "tanh"])?;
            }
            ("control", "omega_start") => self.control.omega_start = num(v)?,
            ("control", "omega_end") => self.control.omega_end = num(v)?,
            ("control", "t_center") => self.control.t_center = num(v)?,
            ("control", "t_ramp") => self.control.t_ramp = num(v)?,
            ("grid", "points") => self.grid.points = count(v)? as usize,
            ("grid", "domain_len") => self.grid.domain_len = num(v)?,
            ("init", "profile") => {
                let s = text(v)?;
                let names: Vec<&str> = InitKind::ALL.iter().map(|k| k.name()).collect();
                self.init.profile = choice(InitKind::from_name(s), s, &names)?;
            }
            ("init", "center") => self.init.center = num(v)?,
            ("init", "amplitude") => self.init.amplitude = Some(num(v)?),
            ("init", "width") => self.init.width = Some(num(v)?),
            ("init", "file") => self.init.file = Some(PathBuf::from(text(v)?)),
            ("run", "t_start") => self.run.t_start = num(v)?,
            ("run", "t_final") => self.run.t_final = num(v)?,
            ("run", "dt") => self.run.dt = num(v)?,
            ("run", "snapshot_every") => self.run.snapshot_every = count(v)?,
            ("run", "mode") => {
                let s = text(v)?;
                self.run.mode = choice(mode_from_name(s), s, &["physical", "normalized"])?;
            }
            ("run", "perturbation") => {
                let s = text(v)?;
                self.run.perturbation = choice(perturbation_from_name(s), s, &["exact", "tan-theta"])?;
            }
            ("output", "dir") => self.output_dir = Some(PathBuf::from(text(v)?)),
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Replace one numeric or text value by its dotted path and revalidate.
    pub fn with_override(&self, path: &str, value: ConfigValue) -> Result<Scenario> {
        let (section, key) = path.split_once('.').ok_or_else(|| Error::config(path, None, "expected section.key"))?;
        let mut next = self.clone();
        next.assign(section, key, &value).map_err(|m| Error::config(path, None, m))?;
        if section == "control" && key == "omega_start" && next.control.kind == ScheduleKind::Constant {
            next.control.omega_end = next.control.omega_start;
        }
        next.validate()?;
        Ok(next)
    }

    /// Check every component invariant.
    pub fn validate(&self) -> Result<()> {
        let wrap = |section: &str| {
            let section = section.to_string();
            move |e: Error| match e {
                Error::Config(c) => Error::Config(c),
                other => Error::config(section.clone(), None, other.to_string()),
            }
        };
        self.medium.validate().map_err(wrap("medium"))?;
        self.probe.validate().map_err(wrap("probe"))?;
        self.control.validate().map_err(wrap("control"))?;
        self.grid.build().map_err(wrap("grid.points"))?;
        let run = &self.run;
        if !(run.t_start.is_finite() && run.t_final.is_finite() && run.t_final > run.t_start) {
            return Err(Error::config(
                "run.t_final",
                None,
                format!("t_final ({:e}) must exceed t_start ({:e})", run.t_final, run.t_start),
            ));
        }
        if !(run.dt.is_finite() && run.dt > 0.0) {
            return Err(Error::config("run.dt", None, format!("dt must be > 0, got {}", run.dt)));
        }
        if !self.init.center.is_finite() {
            return Err(Error::config("init.center", None, "center must be finite"));
        }
        match self.init.profile {
            InitKind::Gaussian => {
                let (a, w) = (self.init.amplitude, self.init.width);
                if !a.is_some_and(|a| a.is_finite() && a >= 0.0) {
                    return Err(Error::config("init.amplitude", None, "gaussian init needs amplitude >= 0"));
                }
                if !w.is_some_and(|w| w.is_finite() && w > 0.0) {
                    return Err(Error::config("init.width", None, "gaussian init needs width > 0"));
                }
            }
            InitKind::File if self.init.file.is_none() => {
                return Err(Error::config("init.file", None, "file init needs a file path"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Fully resolved scenario text; parsing it gives back `self`.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let quote = |t: &str| toml::Value::String(t.to_string()).to_string();
        let _ = writeln!(s, "# resolved scenario");
        if let Some(p) = &self.preset {
            let _ = writeln!(s, "preset = {}", quote(p));
        }
        let m = &self.medium;
        let _ = writeln!(s, "\n[medium]");
        let _ = writeln!(s, "g = {:e}", m.g);
        let _ = writeln!(s, "atoms_N = {:e}", m.atoms_n);
        let _ = writeln!(s, "gamma_ab = {:e}", m.gamma_ab);
        let _ = writeln!(s, "gamma_cb = {:e}", m.gamma_cb);
        let _ = writeln!(s, "gamma_ca = {:e}", m.gamma_ca);
        let _ = writeln!(s, "omega0 = {:e}", m.omega0);
        let _ = writeln!(s, "light_speed = {:e}", m.light_speed);
        let _ = writeln!(s, "\n[probe]");
        let _ = writeln!(s, "# detuning < 0 with omega^2 > detuning^2 is the focusing (bright) case");
        let _ = writeln!(s, "detuning = {:e}", self.probe.detuning);
        let _ = writeln!(s, "a0cos0 = {:e}", self.probe.a0cos0);
        if let Some(k) = self.probe.k_c {
            let _ = writeln!(s, "k_c = {k:e}");
        }
        let c = &self.control;
        let _ = writeln!(s, "\n[control]");
        let _ = writeln!(s, "kind = {}", quote(c.kind.name()));
        let _ = writeln!(s, "omega_start = {:e}", c.omega_start);
        let _ = writeln!(s, "omega_end = {:e}", c.omega_end);
        let _ = writeln!(s, "t_center = {:e}", c.t_center);
        let _ = writeln!(s, "t_ramp = {:e}", c.t_ramp);
        let _ = writeln!(s, "\n[grid]");
        let _ = writeln!(s, "points = {}", self.grid.points);
        let _ = writeln!(s, "domain_len = {:e}", self.grid.domain_len);
        let i = &self.init;
        let _ = writeln!(s, "\n[init]");
        let _ = writeln!(s, "profile = {}", quote(i.profile.name()));
        let _ = writeln!(s, "center = {:e}", i.center);
        if let Some(a) = i.amplitude {
            let _ = writeln!(s, "amplitude = {a:e}");
        }
        if let Some(w) = i.width {
            let _ = writeln!(s, "width = {w:e}");
        }
        if let Some(f) = &i.file {
            let _ = writeln!(s, "file = {}", quote(&f.to_string_lossy()));
        }
        let r = &self.run;
        let _ = writeln!(s, "\n[run]");
        let _ = writeln!(s, "t_start = {:e}", r.t_start);
        let _ = writeln!(s, "t_final = {:e}", r.t_final);
        let _ = writeln!(s, "dt = {:e}", r.dt);
        let _ = writeln!(s, "snapshot_every = {}", r.snapshot_every);
        let _ = writeln!(s, "mode = {}", quote(r.mode.name()));
        let _ = writeln!(s, "perturbation = {}", quote(r.perturbation.name()));
        if let Some(d) = &self.output_dir {
            let _ = writeln!(s, "\n[output]");
            let _ = writeln!(s, "dir = {}", quote(&d.to_string_lossy()));
        }
        s
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn scalar(v: &DeValue<'_>) -> std::result::Result<ConfigValue, String> {
    match v {
        DeValue::Float(f) => f.as_str().parse::<f64>().map(ConfigValue::Num).map_err(|e| format!("bad float: {e}")),
        DeValue::Integer(i) => i64::from_str_radix(i.as_str(), i.radix())
            .map(|x| ConfigValue::Num(x as f64))
            .map_err(|e| format!("bad integer: {e}")),
        DeValue::String(s) => Ok(ConfigValue::Text(s.to_string())),
        other => Err(format!("expected a number or string, found {}", other.type_str())),
    }
}

/// Parse and validate a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let root = DeTable::parse(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start));
        Error::config("", line, e.message().trim().to_string())
    })?;
    let root = root.get_ref();
    if root.is_empty() {
        return Err(Error::config(
            "",
            None,
            format!(
                "empty scenario; required sections: {} (or a top-level preset = \"paper-ultraslow\")",
                REQUIRED_SECTIONS.map(|s| format!("[{s}]")).join(", ")
            ),
        ));
    }

    let mut scenario = Scenario::blank();
    if let Some((key, value)) = root.iter().find(|(k, _)| k.get_ref() == "preset") {
        let line = Some(line_of(text, key.span().start));
        let name = match value.get_ref() {
            DeValue::String(s) => s.to_string(),
            _ => return Err(Error::config("preset", line, "expected a quoted preset name")),
        };
        scenario = Scenario::from_preset(&name)
            .ok_or_else(|| Error::config("preset", line, format!("unknown preset \"{name}\"; known: paper-ultraslow, paper-dark")))?;
    }

    let mut seen = BTreeSet::new();
    let mut omega_end_set = false;
    for (section, body) in root.iter() {
        let section_name = section.get_ref().as_ref();
        let line = Some(line_of(text, section.span().start));
        if section_name == "preset" {
            continue;
        }
        if !SECTIONS.contains(&section_name) {
            return Err(Error::config(section_name, line, "unknown key"));
        }
        let table = match body.get_ref() {
            DeValue::Table(t) => t,
            _ => return Err(Error::config(section_name, line, "expected a [section]")),
        };
        for (key, value) in table.iter() {
            let path = format!("{section_name}.{}", key.get_ref());
            let line = Some(line_of(text, key.span().start));
            let v = scalar(value.get_ref()).map_err(|m| Error::config(path.clone(), line, m))?;
            scenario
                .assign(section_name, key.get_ref(), &v)
                .map_err(|m| Error::config(path.clone(), line, m))?;
            omega_end_set |= path == "control.omega_end";
            seen.insert(path);
        }
    }

    if scenario.preset.is_none() {
        let missing: Vec<&str> = REQUIRED_KEYS.iter().copied().filter(|k| !seen.contains(*k)).collect();
        if !missing.is_empty() {
            return Err(Error::config(
                missing[0],
                None,
                format!("missing required key(s): {}", missing.join(", ")),
            ));
        }
    }
    if scenario.control.kind == ScheduleKind::Constant && !omega_end_set {
        scenario.control.omega_end = scenario.control.omega_start;
    }
    if scenario.control.kind != ScheduleKind::Constant && scenario.preset.is_none() {
        for key in ["control.omega_end", "control.t_ramp"] {
            if !seen.contains(key) {
                return Err(Error::config(
                    key,
                    None,
                    format!("missing required key for a {} ramp", scenario.control.kind.name()),
                ));
            }
        }
    }
    scenario.validate()?;
    Ok(scenario)
}
