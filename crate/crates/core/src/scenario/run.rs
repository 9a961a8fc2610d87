use log::info;

use super::config::{InitKind, Scenario};
use super::output::read_snapshot;
use crate::eit::{coefficients_at, Coefficients, RegimeKind, ScheduleKind};
use crate::error::{Error, Result};
use crate::nlse::{init_state, CoefficientModel, Diagnostics, InitProfile, MediumModel, Propagator, RunObserver, Snapshot, State};
use crate::soliton::{bright_profile, widths, SolitonKind, SolitonSpec, WidthReport};

/// One diagnostics row with the control state at that time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub step: u64,
    pub t: f64,
    pub t_prime: f64,
    pub omega: f64,
    pub cos_theta: f64,
    pub c_n_re: f64,
    pub diag: Diagnostics,
}

impl SeriesRow {
    /// Peak of the normalized field √(|Re Cₙ|/2)·|Ψ|.
    pub fn normalized_peak(&self) -> f64 {
        (0.5 * self.c_n_re.abs()).sqrt() * self.diag.peak_amp
    }
}

/// Where snapshots go during a run.
pub trait SnapshotSink {
    fn snapshot(&mut self, snapshot: &Snapshot) -> Result<()>;
}

/// Drops snapshots.
pub struct Discard;

impl SnapshotSink for Discard {
    fn snapshot(&mut self, _snapshot: &Snapshot) -> Result<()> {
        Ok(())
    }
}

impl SnapshotSink for Vec<Snapshot> {
    fn snapshot(&mut self, snapshot: &Snapshot) -> Result<()> {
        self.push(snapshot.clone());
        Ok(())
    }
}

struct SeriesObserver<'a, S> {
    scenario: &'a Scenario,
    rows: Vec<SeriesRow>,
    sink: &'a mut S,
    every: u64,
}

impl<S: SnapshotSink> RunObserver for SeriesObserver<'_, S> {
    fn wants_diagnostics(&self, step: u64, is_last: bool) -> bool {
        is_last || step.is_multiple_of(self.every)
    }

    fn on_diagnostics(&mut self, step: u64, state: &State, diag: &Diagnostics) -> Result<()> {
        let c = coefficients_at(&self.scenario.medium, &self.scenario.probe, &self.scenario.control, state.t)?;
        self.rows.push(SeriesRow {
            step,
            t: state.t,
            t_prime: state.t_prime,
            omega: c.omega_rabi,
            cos_theta: c.cos_t,
            c_n_re: c.c_n.re,
            diag: *diag,
        });
        Ok(())
    }

    fn on_snapshot(&mut self, snapshot: &Snapshot) -> Result<()> {
        self.sink.snapshot(snapshot)
    }
}

/// Everything the summary file reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps: u64,
    pub regime: RegimeKind,
    /// Soliton used for the initial condition, if any.
    pub soliton: Option<SolitonSpec>,
    pub initial: Diagnostics,
    pub last: Diagnostics,
    /// max|Ψ − Ψ_analytic| / M at the final time (constant-Ω soliton runs).
    pub stationarity_error: Option<f64>,
    /// (max − min)/first of the peak amplitude over the run.
    pub peak_oscillation: f64,
    pub fwhm_ratio: Option<f64>,
    /// Ω(t_final)/Ω(t_start), the width ratio the scaling law predicts.
    pub predicted_width_ratio: f64,
    /// p in peak ∝ cosθ^(−p) for the normalized amplitude.
    pub exponent_normalized: Option<f64>,
    /// Same fit for the physical amplitude |Ψ|.
    pub exponent_physical: Option<f64>,
    pub hwhm_measured: f64,
    pub tau_measured: f64,
    pub analytic_final: Option<WidthReport>,
    pub coeffs_start: Coefficients,
    pub coeffs_final: Coefficients,
}

/// Output of a run: the diagnostics series, final state and summary.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: Vec<SeriesRow>,
    pub state: State,
    pub summary: RunSummary,
}

pub fn model_for(scenario: &Scenario) -> MediumModel {
    MediumModel {
        medium: scenario.medium,
        probe: scenario.probe,
        schedule: scenario.control,
    }
}

/// Soliton the scenario's init section asks for, built from the amplitude
/// law at `run.t_start`.
pub fn initial_soliton(scenario: &Scenario) -> Result<Option<SolitonSpec>> {
    let kind = match scenario.init.profile {
        InitKind::Bright => SolitonKind::Bright,
        InitKind::Dark => SolitonKind::Dark,
        InitKind::PaperEq13 => SolitonKind::PaperEq13,
        _ => return Ok(None),
    };
    let c = coefficients_at(&scenario.medium, &scenario.probe, &scenario.control, scenario.run.t_start)?;
    SolitonSpec::from_amplitude_law(kind, scenario.probe.a0cos0, c.cos_t, &c, scenario.run.t_start, scenario.init.center).map(Some)
}

pub fn initial_state(scenario: &Scenario) -> Result<(State, Option<SolitonSpec>)> {
    let grid = scenario.grid.build()?;
    let model = model_for(scenario);
    let sample = model.sample(scenario.run.t_start)?;
    let soliton = initial_soliton(scenario)?;
    let profile = match (scenario.init.profile, soliton) {
        (_, Some(spec)) => InitProfile::Soliton(spec),
        (InitKind::Zero, _) => InitProfile::Zero,
        (InitKind::Gaussian, _) => InitProfile::Gaussian {
            amplitude: scenario.init.amplitude.unwrap_or(0.0),
            width: scenario.init.width.unwrap_or(f64::NAN),
            center: scenario.init.center,
        },
        (InitKind::File, _) => {
            let path = scenario.init.file.as_ref().ok_or_else(|| Error::config("init.file", None, "missing"))?;
            let (xi, psi) = read_snapshot(path)?;
            let expect = grid.xi_values();
            let dx = grid.dxi();
            if xi.len() != expect.len() || xi.iter().zip(&expect).any(|(a, b)| (a - b).abs() > 1e-6 * dx) {
                return Err(Error::Shape(format!("{} does not match the scenario grid", path.display())));
            }
            InitProfile::Samples(psi)
        }
        _ => unreachable!("soliton kinds handled above"),
    };
    let state = init_state(grid, &profile, &sample, scenario.run.t_start, scenario.run.mode)?;
    Ok((state, soliton))
}

/// Least-squares p in y ∝ x^(−p); None when x does not vary.
fn power_exponent(points: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx < 1e-12 * n {
        return None;
    }
    Some(-sxy / sxx)
}

/// Slope of ln y against ln x.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    power_exponent(points.iter().copied()).map(|p| -p)
}

/// Propagate the scenario, measuring diagnostics after every step.
pub fn execute<S: SnapshotSink>(scenario: &Scenario, sink: &mut S) -> Result<RunOutcome> {
    execute_partial(scenario, sink, 1).map_err(|(e, _)| e)
}

/// Propagate measuring diagnostics only at the first and last step.
pub fn execute_endpoints(scenario: &Scenario) -> Result<RunOutcome> {
    execute_partial(scenario, &mut Discard, u64::MAX).map_err(|(e, _)| e)
}

/// Like [`execute`] with diagnostics every `every` steps (and at the end);
/// on failure also hands back the rows measured so far.
pub fn execute_partial<S: SnapshotSink>(scenario: &Scenario, sink: &mut S, every: u64) -> std::result::Result<RunOutcome, (Error, Vec<SeriesRow>)> {
    let every = every.max(1);
    let (mut state, soliton) = initial_state(scenario).map_err(|e| (e, Vec::new()))?;
    let model = model_for(scenario);
    let mut propagator = Propagator::new(model, state.grid, scenario.run.perturbation);
    let mut observer = SeriesObserver {
        scenario,
        rows: Vec::new(),
        sink,
        every,
    };
    let run = &scenario.run;
    info!(
        "propagating {:e} s to {:e} s with dt = {:e} s on {} points",
        run.t_start,
        run.t_final,
        run.dt,
        state.grid.n_points()
    );
    let steps = match propagator.propagate(&mut state, run.t_final, run.dt, run.snapshot_every, &mut observer) {
        Ok(n) => n,
        Err(e) => return Err((e, observer.rows)),
    };
    info!("{steps} steps done");
    let rows = observer.rows;
    let summary = summarize(scenario, &model, &state, soliton, &rows, steps).map_err(|e| (e, rows.clone()))?;
    Ok(RunOutcome {
        series: rows,
        state,
        summary,
    })
}

fn summarize(
    scenario: &Scenario,
    model: &MediumModel,
    state: &State,
    soliton: Option<SolitonSpec>,
    rows: &[SeriesRow],
    steps: u64,
) -> Result<RunSummary> {
    let first = rows.first().ok_or_else(|| Error::domain("run produced no diagnostics"))?;
    let last = rows.last().ok_or_else(|| Error::domain("run produced no diagnostics"))?;
    let coeffs_start = coefficients_at(&scenario.medium, &scenario.probe, &scenario.control, scenario.run.t_start)?;
    let coeffs_final = coefficients_at(&scenario.medium, &scenario.probe, &scenario.control, state.t)?;

    let stationarity_error = match soliton {
        Some(spec) if spec.kind != SolitonKind::Dark && scenario.control.kind == ScheduleKind::Constant => {
            let psi = state.physical_psi(&model.sample(state.t)?)?;
            let exact = bright_profile(&spec, &state.grid.xi_values(), state.t_prime)?;
            let err = psi.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            Some(err / spec.amp_m)
        }
        _ => None,
    };

    let (lo, hi) = rows
        .iter()
        .map(|r| r.diag.peak_amp)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let peak_oscillation = if first.diag.peak_amp > 0.0 {
        (hi - lo) / first.diag.peak_amp
    } else {
        0.0
    };
    let fwhm_ratio = (first.diag.fwhm > 0.0).then(|| last.diag.fwhm / first.diag.fwhm);

    let exponent_normalized = power_exponent(rows.iter().map(|r| (r.cos_theta, r.normalized_peak())));
    let exponent_physical = power_exponent(rows.iter().map(|r| (r.cos_theta, r.diag.peak_amp)));

    let hwhm_measured = 0.5 * last.diag.fwhm;
    let analytic_final = match soliton {
        Some(spec) => {
            let now = SolitonSpec::from_amplitude_law(
                spec.kind,
                scenario.probe.a0cos0,
                coeffs_start.cos_t,
                &coeffs_final,
                state.t,
                spec.center_xi,
            )
            .ok();
            now.map(|s| widths(&s, &coeffs_final, scenario.medium.atoms_n, scenario.medium.light_speed))
        }
        None => None,
    };

    Ok(RunSummary {
        steps,
        regime: coeffs_start.regime(),
        soliton,
        initial: first.diag,
        last: last.diag,
        stationarity_error,
        peak_oscillation,
        fwhm_ratio,
        predicted_width_ratio: coeffs_final.omega_rabi / coeffs_start.omega_rabi,
        exponent_normalized,
        exponent_physical,
        hwhm_measured,
        tau_measured: hwhm_measured / coeffs_final.v_g,
        analytic_final,
        coeffs_start,
        coeffs_final,
    })
}
