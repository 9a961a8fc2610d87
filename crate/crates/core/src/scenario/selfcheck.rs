//! Release gate: every acceptance check at desk scale, with margins.

use std::fmt;

use num_complex::Complex64;

use super::commands::{fig1_data, sweep};
use super::config::{InitKind, Scenario};
use super::run::{execute, Discard};
use crate::eit::{classify_regime, coefficients_for, ControlSchedule, MediumParams, ProbeSpec, RegimeKind, PAPER_ULTRASLOW};
use crate::error::Result;
use crate::polariton::{adiabaticity, bsp_residual, to_polaritons, FieldPair};
use crate::soliton::{widths, SolitonKind, SolitonSpec};

/// Deliberate defects for testing the gate itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Report β₂ with the wrong sign.
    FlipBeta2Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub name: String,
    pub measured: f64,
    /// Human-readable target, e.g. "2.082e-4 ± 0.5%".
    pub target: String,
    /// Signed distance to the nearest bound, as a fraction of the tolerance
    /// (≥ 0 passes). Informational checks carry NaN.
    pub margin: f64,
    /// None for informational lines.
    pub passed: Option<bool>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        write!(
            f,
            "{tag} [{}] {}: measured {:.6e}, target {}",
            self.id, self.name, self.measured, self.target
        )?;
        if self.margin.is_finite() {
            write!(f, ", margin {:+.3}", self.margin)?;
        }
        Ok(())
    }
}

fn rel(id: &'static str, name: &str, measured: f64, expected: f64, tol: f64) -> Check {
    let dev = (measured / expected - 1.0).abs();
    Check {
        id,
        name: name.into(),
        measured,
        target: format!("{expected:.6e} ± {:.3}%", tol * 100.0),
        margin: 1.0 - dev / tol,
        passed: Some(dev <= tol),
    }
}

fn at_most(id: &'static str, name: &str, measured: f64, bound: f64) -> Check {
    Check {
        id,
        name: name.into(),
        measured,
        target: format!("<= {bound:.3e}"),
        margin: 1.0 - measured / bound,
        passed: Some(measured <= bound),
    }
}

fn at_least(id: &'static str, name: &str, measured: f64, bound: f64) -> Check {
    Check {
        id,
        name: name.into(),
        measured,
        target: format!(">= {bound:.3e}"),
        margin: measured / bound - 1.0,
        passed: Some(measured >= bound),
    }
}

fn within(id: &'static str, name: &str, measured: f64, lo: f64, hi: f64) -> Check {
    let half = 0.5 * (hi - lo);
    Check {
        id,
        name: name.into(),
        measured,
        target: format!("in [{lo:.4e}, {hi:.4e}]"),
        margin: 1.0 - (measured - 0.5 * (lo + hi)).abs() / half,
        passed: Some((lo..=hi).contains(&measured)),
    }
}

fn flag(id: &'static str, name: &str, ok: bool, measured: f64) -> Check {
    Check {
        id,
        name: name.into(),
        measured,
        target: "exact".into(),
        margin: f64::NAN,
        passed: Some(ok),
    }
}

fn info(id: &'static str, name: &str, measured: f64) -> Check {
    Check {
        id,
        name: name.into(),
        measured,
        target: "informational".into(),
        margin: f64::NAN,
        passed: None,
    }
}

fn c3(medium: MediumParams) -> MediumParams {
    MediumParams {
        light_speed: 3.0e8,
        ..medium
    }
}

fn preset(name: &str) -> Scenario {
    Scenario::from_preset(name).expect("built-in preset")
}

fn lossless(mut s: Scenario) -> Scenario {
    s.medium.gamma_ab = 0.0;
    s
}

fn widths_and_velocity(fault: Option<Fault>, out: &mut Vec<Check>) -> Result<()> {
    let p = PAPER_ULTRASLOW;
    let medium = c3(p.medium);
    let mut c = coefficients_for(&medium, &p.probe, p.omega_rabi, 0.0)?;
    if fault == Some(Fault::FlipBeta2Sign) {
        c.beta2 = -c.beta2;
    }
    let spec = SolitonSpec::from_amplitude_law(SolitonKind::Bright, p.probe.a0cos0, c.cos_t, &c, 0.0, 0.0)?;
    let w = widths(&spec, &c, medium.atoms_n, medium.light_speed);
    out.push(rel("1", "spatial hwhm (m)", w.hwhm_xi, 2.082e-4, 5e-3));
    out.push(within("1", "printed width formula (m)", w.paper_dxi, 1.8e-4, 3.0e-4));

    let exact = coefficients_for(&p.medium, &p.probe, p.omega_rabi, 0.0)?;
    out.push(rel("2", "group velocity (m/s)", exact.v_g, 7.5e-2, 2e-3));
    out.push(rel("2", "cos theta", c.cos_t, 1.5811e-5, 1e-4));
    let k_from_beta2 = -1.0 / (c.beta2 * c.v_g.powi(3));
    out.push(flag(
        "2",
        "dispersion: beta2 <= 0 and K = -1/(beta2 V_g^3)",
        c.beta2 <= 0.0 && (k_from_beta2 / c.big_k - 1.0).abs() < 1e-9,
        c.beta2,
    ));
    Ok(())
}

fn regime_table(out: &mut Vec<Check>) -> Result<()> {
    let cells = [
        (-1e7, 1e8, RegimeKind::Bright),
        (-1e7, 3e6, RegimeKind::Dark),
        (1e7, 1e8, RegimeKind::Dark),
        (1e7, 3e6, RegimeKind::Bright),
    ];
    let table_ok = cells.iter().all(|&(d, o, want)| classify_regime(d, o) == want);
    out.push(flag("3", "regime truth table (4 cells)", table_ok, cells.len() as f64));

    let medium = MediumParams {
        gamma_ab: 0.0,
        ..PAPER_ULTRASLOW.medium
    };
    let mut mismatches = 0u32;
    for i in 0..100 {
        let omega = 10f64.powf(6.0 + 3.0 * (i as f64 + 0.5) / 100.0);
        for j in 0..100 {
            let detuning = -1e8 + 2e8 * (j as f64 + 0.5) / 100.0;
            let probe = ProbeSpec {
                detuning,
                ..PAPER_ULTRASLOW.probe
            };
            let c = coefficients_for(&medium, &probe, omega, 0.0)?;
            if (c.c_n.re > 0.0) != (classify_regime(detuning, omega) == RegimeKind::Bright) {
                mismatches += 1;
            }
        }
    }
    out.push(flag("3", "classifier vs sign(Re Cn), 100x100 grid", mismatches == 0, mismatches as f64));
    Ok(())
}

/// Groups 4 and 5 share the lossless constant-Ω run.
fn soliton_runs(out: &mut Vec<Check>) -> Result<()> {
    let s = lossless(preset("paper-ultraslow"));
    let run = execute(&s, &mut Discard)?;
    out.push(at_most(
        "4",
        "bright soliton L-inf error / M over 10 ms",
        run.summary.stationarity_error.unwrap_or(f64::INFINITY),
        1e-6,
    ));
    let mut eq13 = s.clone();
    eq13.init.profile = InitKind::PaperEq13;
    let printed = execute(&eq13, &mut Discard)?;
    out.push(at_least(
        "4",
        "printed-profile peak oscillation over 10 ms",
        printed.summary.peak_oscillation,
        0.05,
    ));

    let (first, last) = (run.series[0].diag, run.series[run.series.len() - 1].diag);
    out.push(at_most("5", "norm drift over 1e4 steps", (last.norm / first.norm - 1.0).abs(), 1e-10));
    out.push(at_most(
        "5",
        "Hamiltonian drift over 1e4 steps",
        (last.hamiltonian / first.hamiltonian - 1.0).abs(),
        1e-8,
    ));
    let lossy = execute(&preset("paper-ultraslow"), &mut Discard)?;
    let increases = lossy.series.windows(2).filter(|w| w[1].diag.norm >= w[0].diag.norm).count();
    out.push(flag(
        "5",
        "norm strictly decreasing with gamma_ab = 1e6",
        increases == 0,
        increases as f64,
    ));
    out.push(rel(
        "5",
        "nonlinear loss delta",
        lossy.summary.coeffs_start.delta_loss,
        1.0101e-3,
        1e-6 / 1.0101e-3,
    ));
    Ok(())
}

fn scaling(out: &mut Vec<Check>) -> Result<()> {
    let s = preset("paper-ultraslow");
    let table = sweep(&s, "control.omega_start", &[1.0e8, 0.5e8, 0.25e8])?;
    let slope_w = table.slope_hwhm.unwrap_or(f64::NAN);
    let slope_t = table.slope_tau.unwrap_or(f64::NAN);
    out.push(within("6", "log-log slope of width vs omega", slope_w, 0.98, 1.02));
    out.push(within("6", "log-log slope of tau vs omega", slope_t, -1.02, -0.98));
    Ok(())
}

/// The 5 ms tanh ramp from 1.0e8 to 0.8e8.
pub fn ramp_scenario() -> Scenario {
    let mut s = preset("paper-ultraslow");
    s.control = ControlSchedule::tanh(1.0e8, 0.8e8, 2.5e-3, 1.0e-3);
    s.run.t_final = 5.0e-3;
    s
}

fn ramp(out: &mut Vec<Check>) -> Result<()> {
    let run = execute(&ramp_scenario(), &mut Discard)?;
    let worst_shape = run.series.iter().map(|r| r.diag.shape_err).fold(0.0, f64::max);
    out.push(at_most("7", "shape error during the ramp", worst_shape, 0.05));
    out.push(rel(
        "7",
        "fwhm ratio after the ramp",
        run.summary.fwhm_ratio.unwrap_or(f64::NAN),
        0.8,
        0.05,
    ));
    out.push(within(
        "7",
        "normalized amplitude exponent p",
        run.summary.exponent_normalized.unwrap_or(f64::NAN),
        0.5,
        2.5,
    ));
    out.push(info(
        "7",
        "physical amplitude exponent p",
        run.summary.exponent_physical.unwrap_or(f64::NAN),
    ));
    Ok(())
}

fn dark(out: &mut Vec<Check>) -> Result<()> {
    let s = preset("paper-dark");
    let run = execute(&s, &mut Discard)?;
    let worst = run.series.iter().map(|r| r.diag.shape_err).fold(0.0, f64::max);
    out.push(at_most("8", "dark pair shape error over 10 ms", worst, 1e-3));

    // phase across each notch, ±5 widths either side
    let spec = run.summary.soliton.expect("dark preset installs a soliton");
    let grid = s.grid.build()?;
    let psi = &run.state.psi;
    let offset = 5.0 / spec.kappa();
    let at = |x: f64| {
        let j = ((x + 0.5 * grid.domain_len()) / grid.dxi()).round() as usize % grid.n_points();
        psi[j]
    };
    let quarter = 0.25 * grid.domain_len();
    let mut worst_jump = 0.0f64;
    for center in [-quarter, quarter] {
        let jump = (at(center + offset) / at(center - offset)).arg().abs();
        worst_jump = worst_jump.max((jump - std::f64::consts::PI).abs());
    }
    out.push(at_most("8", "|phase jump - pi| per notch (rad)", worst_jump, 1e-6));
    Ok(())
}

fn polariton_limits(out: &mut Vec<Check>) -> Result<()> {
    let p = PAPER_ULTRASLOW;
    let medium = c3(p.medium);
    let n = 64;
    let z: Vec<f64> = (0..n).map(|j| j as f64 * 1e-5).collect();
    let eps: Vec<Complex64> = (0..n).map(|j| Complex64::new((j as f64 * 0.3).sin(), (j as f64 * 0.7).cos())).collect();
    let rho: Vec<Complex64> = (0..n).map(|j| Complex64::new(0.2 * (j as f64 * 0.1).cos(), -0.1)).collect();
    let k0 = medium.k0();
    let fields = FieldPair::new(eps.clone(), rho.clone(), z.clone(), k0, k0)?;
    let theta = crate::eit::mixing_angle(&medium, p.omega_rabi)?.theta;
    let pol = to_polaritons(&fields, theta, medium.atoms_n)?;
    let sqrt_n = medium.atoms_n.sqrt();
    let before: f64 = eps.iter().zip(&rho).map(|(e, r)| e.norm_sqr() + (sqrt_n * r).norm_sqr()).sum();
    let after: f64 = pol.psi.iter().zip(&pol.phi).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).sum();
    out.push(at_most("9", "rotation unitarity defect", (after / before - 1.0).abs(), 1e-12));

    let c = coefficients_for(&medium, &p.probe, p.omega_rabi, 0.0)?;
    let spec = SolitonSpec::from_amplitude_law(SolitonKind::Bright, p.probe.a0cos0, c.cos_t, &c, 0.0, 0.0)?;
    let eps_peak = spec.amp_m * c.cos_t;
    out.push(rel(
        "9",
        "bright-polariton residual",
        bsp_residual(&medium, &p.probe, p.omega_rabi, eps_peak)?,
        1.98e-11,
        1e-2,
    ));
    let w = widths(&spec, &c, medium.atoms_n, medium.light_speed);
    let a = adiabaticity(&medium, w.tau)?;
    let mut check = rel("9", "adiabaticity parameter", a, 5.695e-11, 1e-2);
    check.target.push_str(" (stated elsewhere as 5.70e-17)");
    out.push(check);
    Ok(())
}

fn figure(out: &mut Vec<Check>) -> Result<()> {
    let mut s = preset("paper-ultraslow");
    s.medium.light_speed = 3.0e8;
    let data = fig1_data(&s)?;
    out.push(rel("10", "E0", data.units.e0, 314.64, 5e-3));
    out.push(rel("10", "L (m)", data.units.length, 1.58114e-4, 5e-3));
    out.push(rel("10", "tau unit (s)", data.units.time, 2.1082e-3, 5e-3));
    let ridge_dev = data.ridge().iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    out.push(at_most("10", "ridge |peak - 1| over all slices", ridge_dev, 1e-3));
    Ok(())
}

/// Run every check. Errors inside a group become failed lines.
pub fn run_selfcheck(fault: Option<Fault>) -> Vec<Check> {
    let mut out = Vec::new();
    type Group = Box<dyn Fn(&mut Vec<Check>) -> Result<()>>;
    let groups: Vec<(&'static str, Group)> = vec![
        ("1-2", Box::new(move |o: &mut Vec<Check>| widths_and_velocity(fault, o))),
        ("3", Box::new(regime_table)),
        ("4-5", Box::new(soliton_runs)),
        ("6", Box::new(scaling)),
        ("7", Box::new(ramp)),
        ("8", Box::new(dark)),
        ("9", Box::new(polariton_limits)),
        ("10", Box::new(figure)),
    ];
    for (id, group) in groups {
        log::info!("check group {id}");
        if let Err(e) = group(&mut out) {
            out.push(Check {
                id: "error",
                name: format!("check group {id} aborted: {e}"),
                measured: f64::NAN,
                target: "no error".into(),
                margin: f64::NAN,
                passed: Some(false),
            });
        }
    }
    out
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed != Some(false))
}

/// Fault-sensitive part only; used by tests that cannot afford full runs.
pub fn quick_checks(fault: Option<Fault>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    widths_and_velocity(fault, &mut out)?;
    regime_table(&mut out)?;
    polariton_limits(&mut out)?;
    Ok(out)
}
