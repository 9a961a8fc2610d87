//! The acceptance criteria, one function each. Every check prints a line
//! and each criterion ends with a verdict line; the process fails if any
//! criterion does. An optional argument filters criteria by name.
//!
//! Expected values marked "oracle" were computed once with 40-digit
//! arithmetic (mpmath) from the preset parameters and frozen here; they do
//! not come from this code base.

use std::f64::consts::PI;

use dsp_soliton::eit::{classify_regime, coefficients_at, coefficients_for, ControlSchedule, MediumParams, ProbeSpec, RegimeKind, PAPER_ULTRASLOW};
use dsp_soliton::polariton::{adiabaticity, bsp_residual, to_polaritons, FieldPair};
use dsp_soliton::scenario::{execute, fig1_data, sweep, Discard, InitKind, Scenario};
use dsp_soliton::soliton::{widths, SolitonKind, SolitonSpec};
use dsp_soliton::Complex64;
use validation::{log_log_slope, Report};

// oracle, exact c = 299792458 m/s
const COS_THETA: f64 = 1.581_138_829_886_55e-5;
const V_G: f64 = 7.494_811_448_126_3e-2;
const HWHM_XI: f64 = 2.082_293_268_153_55e-4;
const PAPER_DXI: f64 = 1.803_317_948_384_23e-4;
const DELTA_LOSS: f64 = 1.010_100_494_796_33e-3;
const AMP_M: f64 = 314.425_142_969_579;
const BIG_K: f64 = 8.901_200_455_104_85e7;
const A0: f64 = 6_324.555_321_127_328;
const L_UNIT: f64 = 1.581_138_829_886_547_3e-4;
const TAU_UNIT: f64 = 2.109_644_572_695_08e-3;
// oracle, c = 3e8 (the value the printed estimates assume)
const BSP_C3: f64 = 1.980_002_019_707_02e-11;
const ADIABATIC_C3: f64 = 5.694_942_880_539_68e-11;

fn preset(name: &str) -> Scenario {
    Scenario::from_preset(name).expect("built-in preset")
}

fn c3(medium: MediumParams) -> MediumParams {
    MediumParams {
        light_speed: 3.0e8,
        ..medium
    }
}

fn spatial_width() -> Report {
    let mut r = Report::new("1");
    let p = PAPER_ULTRASLOW;
    let c = coefficients_for(&p.medium, &p.probe, p.omega_rabi, 0.0).unwrap();
    let spec = SolitonSpec::from_amplitude_law(SolitonKind::Bright, p.probe.a0cos0, c.cos_t, &c, 0.0, 0.0).unwrap();
    let w = widths(&spec, &c, p.medium.atoms_n, p.medium.light_speed);
    r.rel("hwhm_xi (m)", w.hwhm_xi, 2.082e-4, 5e-3);
    r.rel("hwhm_xi against oracle (m)", w.hwhm_xi, HWHM_XI, 1e-12);
    r.within("printed width formula (m)", w.paper_dxi, 1.8e-4, 3.0e-4);
    r.rel("printed width formula against oracle (m)", w.paper_dxi, PAPER_DXI, 1e-12);
    r
}

fn group_velocity() -> Report {
    let mut r = Report::new("2");
    let p = PAPER_ULTRASLOW;
    let c = coefficients_for(&p.medium, &p.probe, p.omega_rabi, 0.0).unwrap();
    r.rel("v_g (m/s)", c.v_g, 7.50e-2, 2e-3);
    r.rel("v_g against oracle (m/s)", c.v_g, V_G, 1e-12);
    r.rel("cos theta", c.cos_t, 1.5811e-5, 1e-4);
    r.rel("cos theta against oracle", c.cos_t, COS_THETA, 1e-12);
    r.holds("beta2 <= 0", c.beta2 <= 0.0, format!("beta2 = {:e}", c.beta2));
    r
}

fn regime_truth_table() -> Report {
    let mut r = Report::new("3");
    let cells = [
        (-1e7, 1e8, RegimeKind::Bright),
        (-1e7, 3e6, RegimeKind::Dark),
        (1e7, 1e8, RegimeKind::Dark),
        (1e7, 3e6, RegimeKind::Bright),
    ];
    for (detuning, omega, want) in cells {
        let got = classify_regime(detuning, omega);
        r.holds(
            &format!("Δ = {detuning:e}, Ω = {omega:e}"),
            got == want,
            format!("got {got}, want {want}"),
        );
    }

    let medium = MediumParams {
        gamma_ab: 0.0,
        ..PAPER_ULTRASLOW.medium
    };
    let mut compared = 0;
    let mut mismatches = 0;
    for i in 0..100 {
        let omega = 10f64.powf(6.0 + 3.0 * i as f64 / 99.0);
        for j in 0..100 {
            let detuning = -1e8 + 2e8 * j as f64 / 99.0;
            if detuning == 0.0 || omega == detuning.abs() {
                continue;
            }
            let probe = ProbeSpec {
                detuning,
                ..PAPER_ULTRASLOW.probe
            };
            let c = coefficients_for(&medium, &probe, omega, 0.0).unwrap();
            compared += 1;
            if (c.c_n.re > 0.0) != (classify_regime(detuning, omega) == RegimeKind::Bright) {
                mismatches += 1;
            }
        }
    }
    r.holds(
        "classifier vs sign(Re Cn) on 100x100 grid, gamma_ab = 0",
        mismatches == 0,
        format!("{mismatches} mismatches in {compared} cells"),
    );
    r
}

/// Bright run with the loss switched off: the analytic solution is exact.
fn lossless_bright() -> Scenario {
    let mut s = preset("paper-ultraslow");
    s.medium.gamma_ab = 0.0;
    s
}

fn soliton_stationarity() -> Report {
    let mut r = Report::new("4");
    let s = lossless_bright();
    assert_eq!((s.grid.points, s.run.dt, s.run.t_final), (4096, 1e-6, 1e-2));
    let run = execute(&s, &mut Discard).unwrap();
    r.holds("step count", run.summary.steps == 10_000, format!("{} steps", run.summary.steps));

    // M sech(A₀ξ) e^{iA₀²t/K}; with γ_ab = 0 Re Cn differs from the lossy
    // oracle, so M is rebuilt from the run's own coefficient.
    let c = run.summary.coeffs_start;
    r.rel("K against oracle (s/m^2)", c.big_k, BIG_K, 1e-12);
    let amp = (PAPER_ULTRASLOW.probe.a0cos0 / c.cos_t) / (c.c_n.re / 2.0).sqrt();
    r.rel("amplitude M against the lossy oracle", amp, AMP_M, 2e-6);
    let xi = s.grid.build().unwrap().xi_values();
    let phase = A0 * A0 * run.state.t / c.big_k;
    let worst = xi
        .iter()
        .zip(&run.state.psi)
        .map(|(&x, v)| (v - Complex64::from_polar(amp / (A0 * x).cosh(), phase)).norm())
        .fold(0.0, f64::max);
    r.at_most("L-inf |psi - analytic| / M after 10 ms", worst / amp, 1e-6);

    let mut printed = s.clone();
    printed.init.profile = InitKind::PaperEq13;
    let run = execute(&printed, &mut Discard).unwrap();
    let peaks: Vec<f64> = run.series.iter().map(|row| row.diag.peak_amp).collect();
    let (lo, hi) = peaks.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    r.at_least("printed-profile peak oscillation (max - min)/first", (hi - lo) / peaks[0], 0.05);
    r
}

fn conservation() -> Report {
    let mut r = Report::new("5");
    let run = execute(&lossless_bright(), &mut Discard).unwrap();
    let (first, last) = (run.series[0].diag, run.series[run.series.len() - 1].diag);
    r.holds("10^4 steps", run.series.len() == 10_001, format!("{} rows", run.series.len()));
    r.at_most("relative norm drift", (last.norm / first.norm - 1.0).abs(), 1e-10);
    r.at_most("relative Hamiltonian drift", (last.hamiltonian / first.hamiltonian - 1.0).abs(), 1e-8);

    let lossy = preset("paper-ultraslow");
    assert_eq!(lossy.medium.gamma_ab, 1e6);
    let run = execute(&lossy, &mut Discard).unwrap();
    let rises = run.series.windows(2).filter(|w| w[1].diag.norm >= w[0].diag.norm).count();
    r.holds(
        "norm strictly decreasing, gamma_ab = 1e6",
        rises == 0,
        format!("{rises} non-decreasing steps"),
    );
    let c = coefficients_at(&lossy.medium, &lossy.probe, &lossy.control, 0.0).unwrap();
    r.abs("delta", c.delta_loss, 1.0101e-3, 1e-6);
    r.rel("delta against oracle", c.delta_loss, DELTA_LOSS, 1e-12);
    r
}

fn scaling_laws() -> Report {
    let mut r = Report::new("6");
    let omegas = [1.0e8, 0.5e8, 0.25e8];
    let table = sweep(&preset("paper-ultraslow"), "control.omega_start", &omegas).unwrap();
    let points: Vec<_> = table.rows.iter().map(|row| row.outcome.clone().expect("sweep run")).collect();
    let hwhm: Vec<f64> = points.iter().map(|p| p.hwhm).collect();
    let tau: Vec<f64> = points.iter().map(|p| p.tau).collect();
    r.abs("slope of ln width vs ln omega", log_log_slope(&omegas, &hwhm), 1.0, 0.02);
    r.abs("slope of ln tau vs ln omega", log_log_slope(&omegas, &tau), -1.0, 0.02);
    r
}

fn adiabatic_ramp() -> Report {
    let mut r = Report::new("7");
    let mut s = preset("paper-ultraslow");
    s.control = ControlSchedule::tanh(1.0e8, 0.8e8, 2.5e-3, 1.0e-3);
    s.run.t_final = 5.0e-3;
    let run = execute(&s, &mut Discard).unwrap();
    let series = &run.series;
    let worst = series.iter().map(|row| row.diag.shape_err).fold(0.0, f64::max);
    r.at_most("max shape error during the ramp", worst, 0.05);
    let (first, last) = (&series[0], &series[series.len() - 1]);
    r.rel("final omega", last.omega, 0.8e8, 0.01);
    r.rel("fwhm ratio", last.diag.fwhm / first.diag.fwhm, 0.8, 0.05);

    let cos: Vec<f64> = series.iter().map(|row| row.cos_theta).collect();
    let normalized: Vec<f64> = series.iter().map(|row| (row.c_n_re.abs() / 2.0).sqrt() * row.diag.peak_amp).collect();
    let physical: Vec<f64> = series.iter().map(|row| row.diag.peak_amp).collect();
    r.within("exponent p of normalized peak vs cos theta", -log_log_slope(&cos, &normalized), 0.5, 2.5);
    r.info("exponent p of physical peak vs cos theta", -log_log_slope(&cos, &physical));
    r
}

fn dark_regime() -> Report {
    let mut r = Report::new("8");
    let s = preset("paper-dark");
    assert_eq!((s.probe.detuning, s.control.omega(0.0)), (-1e7, 3e6));
    let run = execute(&s, &mut Discard).unwrap();
    r.holds("regime", run.summary.regime == RegimeKind::Dark, format!("{}", run.summary.regime));
    let worst = run.series.iter().map(|row| row.diag.shape_err).fold(0.0, f64::max);
    r.at_most("max shape error over 10 ms", worst, 1e-3);

    let grid = s.grid.build().unwrap();
    let kappa = run.summary.soliton.expect("dark soliton").kappa();
    let len = grid.domain_len();
    let at = |x: f64| {
        let j = ((x + 0.5 * len) / grid.dxi()).round() as usize % grid.n_points();
        run.state.psi[j]
    };
    for (label, center) in [("left", -0.25 * len), ("right", 0.25 * len)] {
        let jump = (at(center + 5.0 / kappa) / at(center - 5.0 / kappa)).arg().abs();
        r.abs(&format!("phase jump across the {label} notch (rad)"), jump, PI, 1e-6);
    }
    r
}

fn polariton_limits() -> Report {
    let mut r = Report::new("9");
    let p = PAPER_ULTRASLOW;
    let medium = c3(p.medium);
    let n = 128;
    let z: Vec<f64> = (0..n).map(|j| j as f64 * 1e-5).collect();
    let eps: Vec<Complex64> = (0..n).map(|j| Complex64::new((0.37 * j as f64).cos(), (0.11 * j as f64).sin())).collect();
    let rho: Vec<Complex64> = (0..n).map(|j| Complex64::new(-0.3, 0.05 * (j as f64).sqrt())).collect();
    let k0 = medium.omega0 / medium.light_speed;
    let fields = FieldPair::new(eps.clone(), rho.clone(), z, k0, k0).unwrap();
    let c = coefficients_for(&medium, &p.probe, p.omega_rabi, 0.0).unwrap();
    let pol = to_polaritons(&fields, c.theta, medium.atoms_n).unwrap();
    let sqrt_n = medium.atoms_n.sqrt();
    let before: f64 = eps.iter().zip(&rho).map(|(e, q)| e.norm_sqr() + (sqrt_n * q).norm_sqr()).sum();
    let after: f64 = pol.psi.iter().zip(&pol.phi).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).sum();
    r.at_most("rotation unitarity defect", (after / before - 1.0).abs(), 1e-12);

    let spec = SolitonSpec::from_amplitude_law(SolitonKind::Bright, p.probe.a0cos0, c.cos_t, &c, 0.0, 0.0).unwrap();
    let bsp = bsp_residual(&medium, &p.probe, p.omega_rabi, spec.amp_m * c.cos_t).unwrap();
    r.rel("BSP residual |Phi|/|cos theta Psi|", bsp, 1.98e-11, 1e-2);
    r.rel("BSP residual against oracle", bsp, BSP_C3, 1e-9);
    let tau = widths(&spec, &c, medium.atoms_n, medium.light_speed).tau;
    // the stated 5.70e-17 is six decades off 1/(g√N τ); checked against the oracle
    r.rel("adiabaticity 1/(g sqrt(N) tau)", adiabaticity(&medium, tau).unwrap(), ADIABATIC_C3, 1e-2);
    r
}

fn figure_reproduction() -> Report {
    let mut r = Report::new("10");
    let s = preset("paper-ultraslow");
    let data = fig1_data(&s).unwrap();
    let u = data.units;
    r.rel("E0", u.e0, 314.64, 5e-3);
    r.rel("L (m)", u.length, 1.58114e-4, 5e-3);
    r.rel("tau unit (s)", u.time, 2.1082e-3, 5e-3);
    r.rel("E0 against oracle", u.e0, AMP_M, 1e-12);
    r.rel("L against oracle (m)", u.length, L_UNIT, 1e-12);
    r.rel("tau unit against oracle (s)", u.time, TAU_UNIT, 1e-12);

    // each slice should be sech(z/L − V_g t/L) with unit peak (κL = 1)
    let mut worst_peak = 0.0f64;
    let mut worst_shape = 0.0f64;
    for (t_over_tau, z, amp) in &data.slices {
        let center = V_G * t_over_tau * u.time / u.length;
        let peak = amp.iter().copied().fold(0.0, f64::max);
        worst_peak = worst_peak.max((peak - 1.0).abs());
        for (zz, a) in z.iter().zip(amp) {
            worst_shape = worst_shape.max((a - 1.0 / (zz - center).cosh()).abs());
        }
    }
    r.holds("slices", data.slices.len() == 11, format!("{} slices", data.slices.len()));
    r.at_most("max |ridge peak - 1|", worst_peak, 1e-3);
    r.at_most("max |slice - sech(z/L - V_g t/L)|", worst_shape, 1e-3);
    r
}

type Criterion = (&'static str, fn() -> Report);

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 10] = [
        ("spatial_width", spatial_width),
        ("group_velocity", group_velocity),
        ("regime_truth_table", regime_truth_table),
        ("soliton_stationarity", soliton_stationarity),
        ("conservation", conservation),
        ("scaling_laws", scaling_laws),
        ("adiabatic_ramp", adiabatic_ramp),
        ("dark_regime", dark_regime),
        ("polariton_limits", polariton_limits),
        ("figure_reproduction", figure_reproduction),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = Vec::new();
    let mut ran = 0;
    for (name, criterion) in criteria {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        ran += 1;
        let report = criterion();
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {} {name}\n", report.id());
        if !report.passed() {
            failed.push(name);
        }
    }
    println!("acceptance: {ran} criteria, {} failed {failed:?}", failed.len());
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
