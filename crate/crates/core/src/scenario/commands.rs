use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;

use super::config::{ConfigValue, Scenario};
use super::output::{scenario_hash, Summary, Table};
use super::run::{execute, execute_endpoints, execute_partial, initial_soliton, log_log_slope, RunOutcome, SeriesRow, SnapshotSink};
use crate::eit::{coefficients_at, RegimeKind};
use crate::error::{Error, Result};
use crate::nlse::{lab_frame_position, Grid1D, Snapshot};
use crate::soliton::SolitonKind;

/// Coefficient table at time `t`.
pub fn cmd_coeffs(scenario: &Scenario, t: f64) -> Result<String> {
    let c = coefficients_at(&scenario.medium, &scenario.probe, &scenario.control, t)?;
    let rows: [(&str, String, &str); 16] = [
        ("t", format!("{t:.6e}"), "s"),
        ("omega", format!("{:.6e}", c.omega_rabi), "s^-1"),
        ("theta", format!("{:.12e}", c.theta), "rad"),
        ("cos_theta", format!("{:.6e}", c.cos_t), "1"),
        ("v_g", format!("{:.6e}", c.v_g), "m/s"),
        ("beta1", format!("{:.6e}", c.beta1), "s/m"),
        ("beta2", format!("{:.6e}", c.beta2), "s^2/m"),
        ("k0", format!("{:.6e}", c.k0), "m^-1"),
        ("chi1", format!("{:.6e}", c.chi1), "1"),
        ("chi3", format!("{:.6e} {:+.6e}i", c.chi3.re, c.chi3.im), "1"),
        ("eta", format!("{:.6e} {:+.6e}i", c.eta.re, c.eta.im), "m^-2"),
        ("c_n", format!("{:.6e} {:+.6e}i", c.c_n.re, c.c_n.im), "m^-2"),
        ("big_k", format!("{:.6e}", c.big_k), "s m^-2"),
        ("delta_loss", format!("{:.6e}", c.delta_loss), "1"),
        ("theta_dot", format!("{:.6e}", c.theta_dot), "rad/s"),
        ("regime", c.regime().name().to_string(), "-"),
    ];
    let mut s = String::new();
    for (name, value, unit) in rows {
        let _ = writeln!(s, "{name:<11} {value:<32} {unit}");
    }
    Ok(s)
}

const DIAG_COLUMNS: [(&str, &str); 11] = [
    ("step", "1"),
    ("t", "s"),
    ("t_prime", "m^2"),
    ("omega", "s^-1"),
    ("cos_theta", "1"),
    ("norm", "m"),
    ("hamiltonian", "m^-1"),
    ("peak_amp", "1"),
    ("peak_pos", "m"),
    ("fwhm", "m"),
    ("shape_err", "1"),
];

fn diagnostics_table(hash: &str, rows: &[SeriesRow]) -> Result<Table> {
    let mut t = Table::new(hash, &DIAG_COLUMNS);
    for r in rows {
        let d = &r.diag;
        t.row(&[
            r.step as f64,
            r.t,
            r.t_prime,
            r.omega,
            r.cos_theta,
            d.norm,
            d.hamiltonian,
            d.peak_amp,
            d.peak_pos,
            d.fwhm,
            d.shape_err,
        ])?;
    }
    Ok(t)
}

/// Writes each snapshot as it arrives.
struct SnapshotWriter {
    dir: PathBuf,
    hash: String,
    grid: Grid1D,
}

impl SnapshotSink for SnapshotWriter {
    fn snapshot(&mut self, snap: &Snapshot) -> Result<()> {
        let mut t = Table::new(&self.hash, &[("xi", "m"), ("re_psi", "1"), ("im_psi", "1")]);
        t.meta_num("step", snap.step as f64)?;
        t.meta_num("t", snap.t)?;
        t.meta_num("t_prime", snap.t_prime)?;
        for (x, v) in self.grid.xi_values().iter().zip(&snap.psi) {
            t.row(&[*x, v.re, v.im])?;
        }
        t.write(&self.dir.join(format!("snap_{:06}.csv", snap.step)))
    }
}

fn prepare_dir(out: &Path, scenario: &Scenario) -> Result<String> {
    fs::create_dir_all(out)?;
    let echo = scenario.echo();
    fs::write(out.join("scenario.toml"), &echo)?;
    Ok(scenario_hash(&echo))
}

fn summary_file(hash: &str, outcome: &RunOutcome) -> Result<Summary> {
    let s = &outcome.summary;
    let mut f = Summary::new(hash);
    f.text("regime", s.regime.name());
    f.num("steps", s.steps as f64)?;
    f.num("t_final", outcome.state.t)?;
    f.opt("soliton_amplitude_m", s.soliton.map(|x| x.amp_m))?;
    f.num("final_norm", s.last.norm)?;
    f.num("final_hamiltonian", s.last.hamiltonian)?;
    f.num("final_peak_amp", s.last.peak_amp)?;
    f.num("final_peak_pos", s.last.peak_pos)?;
    f.num("final_fwhm", s.last.fwhm)?;
    f.num("final_shape_err", s.last.shape_err)?;
    f.num("norm_drift", if s.initial.norm > 0.0 { s.last.norm / s.initial.norm - 1.0 } else { 0.0 })?;
    f.opt("stationarity_error_over_m", s.stationarity_error)?;
    f.num("peak_oscillation", s.peak_oscillation)?;
    f.num("initial_peak_amp", s.initial.peak_amp)?;
    f.opt("fwhm_ratio", s.fwhm_ratio)?;
    f.num("predicted_width_ratio", s.predicted_width_ratio)?;
    f.opt("amplitude_exponent_normalized", s.exponent_normalized)?;
    f.opt("amplitude_exponent_physical", s.exponent_physical)?;
    f.num("hwhm_measured", s.hwhm_measured)?;
    f.num("tau_measured", s.tau_measured)?;
    f.opt("hwhm_analytic", s.analytic_final.map(|w| w.hwhm_xi))?;
    f.opt("tau_analytic", s.analytic_final.map(|w| w.tau))?;
    f.opt("paper_dxi", s.analytic_final.map(|w| w.paper_dxi))?;
    f.opt("paper_tau", s.analytic_final.map(|w| w.paper_tau))?;
    f.num("v_g_final", s.coeffs_final.v_g)?;
    f.num("delta_loss", s.coeffs_start.delta_loss)?;
    Ok(f)
}

/// Run a propagation, writing diagnostics.csv, snap_NNNNNN.csv,
/// summary.txt and scenario.toml into `out`. On an integration failure the
/// diagnostics measured so far are still written.
pub fn cmd_propagate(scenario: &Scenario, out: &Path) -> Result<RunOutcome> {
    let hash = prepare_dir(out, scenario)?;
    let mut writer = SnapshotWriter {
        dir: out.to_path_buf(),
        hash: hash.clone(),
        grid: scenario.grid.build()?,
    };
    match execute_partial(scenario, &mut writer, 1) {
        Ok(outcome) => {
            diagnostics_table(&hash, &outcome.series)?.write(&out.join("diagnostics.csv"))?;
            summary_file(&hash, &outcome)?.write(&out.join("summary.txt"))?;
            info!("{} steps written to {}", outcome.summary.steps, out.display());
            Ok(outcome)
        }
        Err((e, rows)) => {
            let mut t = diagnostics_table(&hash, &rows)?;
            t.comment(&format!("run aborted: {e}"));
            t.write(&out.join("diagnostics.csv"))?;
            Err(e)
        }
    }
}

/// Normalization constants of the figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Units {
    /// E₀ = M(0).
    pub e0: f64,
    /// L = 1/A₀ (m).
    pub length: f64,
    /// τ = g²N/(Ω²(0)A₀c) (s).
    pub time: f64,
}

pub fn fig1_units(scenario: &Scenario) -> Result<Fig1Units> {
    let c = coefficients_at(&scenario.medium, &scenario.probe, &scenario.control, scenario.run.t_start)?;
    if c.regime() != RegimeKind::Bright {
        return Err(Error::Regime(format!(
            "the figure needs the bright regime at t_start, found {}",
            c.regime()
        )));
    }
    let spec = initial_soliton(scenario)?
        .filter(|s| s.kind == SolitonKind::Bright)
        .ok_or_else(|| Error::config("init.profile", None, "the figure needs profile = \"bright\""))?;
    let a0 = scenario.probe.a0cos0 / c.cos_t;
    let m = &scenario.medium;
    Ok(Fig1Units {
        e0: spec.amp_m,
        length: 1.0 / a0,
        time: m.g * m.g * m.atoms_n / (c.omega_rabi * c.omega_rabi * a0 * m.light_speed),
    })
}

#[derive(Debug, Clone)]
pub struct Fig1Data {
    pub units: Fig1Units,
    /// One slice per snapshot: (t/τ, z/L values, |Ψ|/E₀ values).
    pub slices: Vec<(f64, Vec<f64>, Vec<f64>)>,
}

impl Fig1Data {
    /// Ridge height of every slice.
    pub fn ridge(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.2.iter().copied().fold(0.0, f64::max)).collect()
    }
}

/// |Ψ(z/L, t/τ)|/E₀ over the run window, with z the lab-frame position.
pub fn fig1_data(scenario: &Scenario) -> Result<Fig1Data> {
    let units = fig1_units(scenario)?;
    let mut snaps: Vec<Snapshot> = Vec::new();
    execute(scenario, &mut snaps)?;
    let xi = scenario.grid.build()?.xi_values();
    let t0 = scenario.run.t_start;
    let mut slices = Vec::with_capacity(snaps.len());
    for snap in &snaps {
        let shift = lab_frame_position(&scenario.control, &scenario.medium, &scenario.probe, t0, snap.t, 0.0)?;
        let z: Vec<f64> = xi.iter().map(|x| (x + shift) / units.length).collect();
        let amp: Vec<f64> = snap.psi.iter().map(|v| v.norm() / units.e0).collect();
        slices.push(((snap.t - t0) / units.time, z, amp));
    }
    Ok(Fig1Data { units, slices })
}

pub fn cmd_fig1(scenario: &Scenario, out: &Path) -> Result<Fig1Data> {
    let data = fig1_data(scenario)?;
    let hash = prepare_dir(out, scenario)?;
    let mut t = Table::new(&hash, &[("t_over_tau", "1"), ("z_over_l", "1"), ("amplitude_over_e0", "1")]);
    t.meta_num("e0", data.units.e0)?;
    t.meta_num("length_unit", data.units.length)?;
    t.meta_num("time_unit", data.units.time)?;
    t.meta("window", "run window t_start..t_final, one slice per snapshot, full grid in z");
    for (tau, z, amp) in &data.slices {
        for (zz, a) in z.iter().zip(amp) {
            t.row(&[*tau, *zz, *a])?;
        }
    }
    t.write(&out.join("fig1.csv"))?;
    Ok(data)
}

/// One sweep point. `Err` holds the failure message.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: std::result::Result<SweepPoint, String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub hwhm: f64,
    pub tau: f64,
    pub peak: f64,
    pub regime: RegimeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub param: String,
    pub rows: Vec<SweepRow>,
    /// d ln(hwhm)/d ln(value).
    pub slope_hwhm: Option<f64>,
    /// d ln(tau)/d ln(value).
    pub slope_tau: Option<f64>,
}

/// Worker count for sweeps: DSP_SOLITON_THREADS caps the default.
pub fn sweep_threads() -> usize {
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var("DSP_SOLITON_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(n) if n > 0 => n.min(default.max(1)),
        _ => default,
    }
}

/// One propagation per value of `param`; failures are kept per row. Only
/// the end points are measured, which is all the table needs.
pub fn sweep(scenario: &Scenario, param: &str, values: &[f64]) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::config(param, None, "sweep needs at least one value"));
    }
    // check the path once so a typo fails the whole sweep
    scenario
        .with_override(param, ConfigValue::Num(values[0]))
        .map(|_| ())
        .or_else(|e| match e {
            Error::Config(ref c) if c.message.contains("unknown key") || c.message.contains("section.key") => Err(e),
            _ => Ok(()),
        })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep_threads())
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        values
            .par_iter()
            .map(|&value| {
                let outcome = scenario
                    .with_override(param, ConfigValue::Num(value))
                    .and_then(|s| execute_endpoints(&s))
                    .map(|o| SweepPoint {
                        hwhm: o.summary.hwhm_measured,
                        tau: o.summary.tau_measured,
                        peak: o.summary.last.peak_amp,
                        regime: o.summary.regime,
                    })
                    .map_err(|e| e.to_string());
                info!("sweep {param} = {value:e}: {}", if outcome.is_ok() { "done" } else { "failed" });
                SweepRow { value, outcome }
            })
            .collect()
    });
    let ok: Vec<(f64, SweepPoint)> = rows.iter().filter_map(|r| r.outcome.as_ref().ok().map(|p| (r.value, *p))).collect();
    let slope = |f: fn(&SweepPoint) -> f64| {
        let pts: Vec<(f64, f64)> = ok.iter().map(|(v, p)| (*v, f(p))).collect();
        log_log_slope(&pts)
    };
    Ok(SweepTable {
        param: param.to_string(),
        slope_hwhm: slope(|p| p.hwhm),
        slope_tau: slope(|p| p.tau),
        rows,
    })
}

pub fn cmd_sweep(scenario: &Scenario, param: &str, values: &[f64], out: &Path) -> Result<SweepTable> {
    let table = sweep(scenario, param, values)?;
    let hash = prepare_dir(out, scenario)?;
    let mut t = Table::new(
        &hash,
        &[("value", "param"), ("hwhm", "m"), ("tau", "s"), ("peak", "1"), ("regime", "code")],
    );
    t.meta("param", param);
    t.meta("regime_codes", "1=bright,-1=dark,0=linear,2=singular");
    match table.slope_hwhm {
        Some(s) => t.meta_num("slope_hwhm", s)?,
        None => t.meta("slope_hwhm", "n/a"),
    };
    match table.slope_tau {
        Some(s) => t.meta_num("slope_tau", s)?,
        None => t.meta("slope_tau", "n/a"),
    };
    for row in &table.rows {
        match &row.outcome {
            Ok(p) => t.row(&[row.value, p.hwhm, p.tau, p.peak, p.regime.code() as f64])?,
            Err(msg) => t.comment(&format!("value = {:e} failed: {msg}", row.value)),
        }
    }
    t.write(&out.join("sweep.csv"))?;
    Ok(table)
}
