//! Medium coefficients of a Λ-type EIT medium driven by a control field.
//!
//! Everything here is a pure function of [`MediumParams`], [`ProbeSpec`] and
//! the control Rabi frequency. The mixing angle sits within 10⁻⁵ of π/2 in
//! the ultraslow regime, so its trigonometric values are always formed from
//! Ω and g√N directly and never by composing `atan` with `cos`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exact SI vacuum light speed (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Lowest Rabi frequency a schedule may request, relative to its start value.
pub const OMEGA_FLOOR_FRACTION: f64 = 1e-6;

/// Atomic constants of the medium. ℘_ab, V, ħ and ε₀ are folded into `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Single-atom coupling rate g (s⁻¹).
    pub g: f64,
    /// Effective atom number N in the quantization volume.
    pub atoms_n: f64,
    /// Transverse decay rates (s⁻¹).
    pub gamma_ab: f64,
    pub gamma_cb: f64,
    pub gamma_ca: f64,
    /// Probe carrier angular frequency ω₀ (s⁻¹).
    pub omega0: f64,
    /// Vacuum light speed (m/s).
    pub light_speed: f64,
}

impl MediumParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g", self.g),
            ("atoms_N", self.atoms_n),
            ("omega0", self.omega0),
            ("light_speed", self.light_speed),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::domain(format!("{name} must be finite and > 0, got {value}")));
            }
        }
        let rates = [("gamma_ab", self.gamma_ab), ("gamma_cb", self.gamma_cb), ("gamma_ca", self.gamma_ca)];
        for (name, value) in rates {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::domain(format!("{name} must be finite and >= 0, got {value}")));
            }
        }
        let big_g = self.collective_coupling();
        if !(big_g.is_finite() && big_g > 0.0) {
            return Err(Error::domain(format!("collective coupling g·√N = {big_g} is not finite and positive")));
        }
        Ok(())
    }

    /// Collective coupling G = g·√N (s⁻¹).
    pub fn collective_coupling(&self) -> f64 {
        self.g * self.atoms_n.sqrt()
    }

    /// Probe central wave vector k₀ = ω₀/c (m⁻¹).
    pub fn k0(&self) -> f64 {
        self.omega0 / self.light_speed
    }
}

/// Probe-side parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSpec {
    /// One-photon detuning Δ = ω_ab − ω (s⁻¹, signed).
    pub detuning: f64,
    /// Initial normalized amplitude product A₀·cosθ(0).
    pub a0cos0: f64,
    /// Coupling-field wave vector along z (m⁻¹). `None` means k_c = k₀.
    pub k_c: Option<f64>,
}

impl ProbeSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.detuning.is_finite() {
            return Err(Error::domain("detuning must be finite"));
        }
        if !(self.a0cos0.is_finite() && self.a0cos0 > 0.0) {
            return Err(Error::domain(format!("a0cos0 must be > 0, got {}", self.a0cos0)));
        }
        if let Some(k_c) = self.k_c {
            if !k_c.is_finite() {
                return Err(Error::domain("k_c must be finite"));
            }
        }
        Ok(())
    }

    pub fn k_c_or(&self, k0: f64) -> f64 {
        self.k_c.unwrap_or(k0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Linear,
    Tanh,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Linear => "linear",
            ScheduleKind::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "constant" => Some(ScheduleKind::Constant),
            "linear" => Some(ScheduleKind::Linear),
            "tanh" => Some(ScheduleKind::Tanh),
            _ => None,
        }
    }
}

/// Time-dependent control Rabi frequency Ω(t) with its analytic derivative.
///
/// * `Constant`: Ω = `omega_start`.
/// * `Linear`: Ω goes linearly from `omega_start` to `omega_end` over
///   `[t_center − t_ramp/2, t_center + t_ramp/2]` and is flat outside.
/// * `Tanh`: Ω = ½(Ω_s + Ω_e) + ½(Ω_e − Ω_s)·tanh((t − t_center)/t_ramp).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSchedule {
    pub kind: ScheduleKind,
    pub omega_start: f64,
    pub omega_end: f64,
    pub t_center: f64,
    pub t_ramp: f64,
}

impl ControlSchedule {
    pub fn constant(omega: f64) -> Self {
        ControlSchedule {
            kind: ScheduleKind::Constant,
            omega_start: omega,
            omega_end: omega,
            t_center: 0.0,
            t_ramp: 0.0,
        }
    }

    pub fn tanh(omega_start: f64, omega_end: f64, t_center: f64, t_ramp: f64) -> Self {
        ControlSchedule {
            kind: ScheduleKind::Tanh,
            omega_start,
            omega_end,
            t_center,
            t_ramp,
        }
    }

    pub fn linear(omega_start: f64, omega_end: f64, t_center: f64, t_ramp: f64) -> Self {
        ControlSchedule {
            kind: ScheduleKind::Linear,
            omega_start,
            omega_end,
            t_center,
            t_ramp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_start.is_finite() && self.omega_start > 0.0) {
            return Err(Error::domain(format!("omega_start must be > 0, got {}", self.omega_start)));
        }
        if self.kind == ScheduleKind::Constant {
            return Ok(());
        }
        let floor = OMEGA_FLOOR_FRACTION * self.omega_start;
        if !(self.omega_end.is_finite() && self.omega_end >= floor) {
            return Err(Error::domain(format!(
                "omega_end = {} is below the schedule floor {floor:e} (1e-6·omega_start)",
                self.omega_end
            )));
        }
        if !(self.t_ramp.is_finite() && self.t_ramp > 0.0) {
            return Err(Error::domain(format!("t_ramp must be > 0 for a {} ramp", self.kind.name())));
        }
        if !self.t_center.is_finite() {
            return Err(Error::domain("t_center must be finite"));
        }
        Ok(())
    }

    /// Ω(t) in s⁻¹.
    pub fn omega(&self, t: f64) -> f64 {
        let raw = match self.kind {
            ScheduleKind::Constant => self.omega_start,
            ScheduleKind::Linear => {
                let s = ((t - self.t_center) / self.t_ramp + 0.5).clamp(0.0, 1.0);
                self.omega_start + (self.omega_end - self.omega_start) * s
            }
            ScheduleKind::Tanh => {
                let mid = 0.5 * (self.omega_start + self.omega_end);
                let half = 0.5 * (self.omega_end - self.omega_start);
                mid + half * ((t - self.t_center) / self.t_ramp).tanh()
            }
        };
        raw.max(OMEGA_FLOOR_FRACTION * self.omega_start)
    }

    /// dΩ/dt in s⁻².
    pub fn omega_dot(&self, t: f64) -> f64 {
        match self.kind {
            ScheduleKind::Constant => 0.0,
            ScheduleKind::Linear => {
                let s = (t - self.t_center) / self.t_ramp + 0.5;
                if (0.0..=1.0).contains(&s) {
                    (self.omega_end - self.omega_start) / self.t_ramp
                } else {
                    0.0
                }
            }
            ScheduleKind::Tanh => {
                let half = 0.5 * (self.omega_end - self.omega_start);
                let x = (t - self.t_center) / self.t_ramp;
                let sech = 1.0 / x.cosh();
                half * sech * sech / self.t_ramp
            }
        }
    }
}

/// Mixing angle tanθ = g√N/Ω with its trigonometric values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngle {
    pub theta: f64,
    pub cos: f64,
    pub sin: f64,
    pub tan: f64,
}

impl MixingAngle {
    pub fn from_rates(collective: f64, omega: f64) -> Self {
        let h = collective.hypot(omega);
        MixingAngle {
            theta: collective.atan2(omega),
            cos: omega / h,
            sin: collective / h,
            tan: collective / omega,
        }
    }
}

pub fn mixing_angle(medium: &MediumParams, omega_rabi: f64) -> Result<MixingAngle> {
    if !(omega_rabi.is_finite() && omega_rabi > 0.0) {
        return Err(Error::domain(format!("Rabi frequency must be > 0, got {omega_rabi}")));
    }
    Ok(MixingAngle::from_rates(medium.collective_coupling(), omega_rabi))
}

/// Linear and third-order susceptibilities, evaluated at the carrier ω₀.
///
/// Returns `(χ⁽¹⁾, χ⁽³⁾)`. χ⁽¹⁾ is real; χ⁽³⁾ picks up an imaginary part
/// from γ_ab. Both vanish at Δ = 0.
pub fn susceptibility(medium: &MediumParams, probe: &ProbeSpec, omega_rabi: f64) -> Result<(f64, Complex64)> {
    if !(omega_rabi.is_finite() && omega_rabi > 0.0) {
        return Err(Error::domain(format!("Rabi frequency must be > 0, got {omega_rabi}")));
    }
    let delta = probe.detuning;
    if delta == 0.0 {
        return Ok((0.0, Complex64::new(0.0, 0.0)));
    }
    let om2 = omega_rabi * omega_rabi;
    let g2n = medium.g * medium.g * medium.atoms_n;
    let chi1 = -2.0 * g2n * delta / (om2 * medium.omega0);

    // 1 + (−Δ² + iγΔ)/Ω², with the real part factored to avoid cancellation.
    let den_re = (omega_rabi - delta) * (omega_rabi + delta) / om2;
    let den_im = medium.gamma_ab * delta / om2;
    if den_im == 0.0 && den_re.abs() <= 4.0 * f64::EPSILON {
        return Err(Error::NonlinearResonance);
    }
    let den = Complex64::new(den_re, den_im);
    let numer = -6.0 * g2n * medium.g * medium.g * delta / (om2 * om2 * medium.omega0);
    Ok((chi1, Complex64::new(numer, 0.0) / den))
}

/// Nonlinear regime of the DSP NLSE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    /// Focusing, Re Cₙ > 0: bright (sech) solitons.
    Bright,
    /// Defocusing, Re Cₙ < 0: dark (tanh) solitons.
    Dark,
    /// Δ = 0: χ⁽³⁾ vanishes.
    Linear,
    /// Ω² = Δ²: nonlinear resonance.
    Singular,
}

impl RegimeKind {
    pub fn name(self) -> &'static str {
        match self {
            RegimeKind::Bright => "Bright",
            RegimeKind::Dark => "Dark",
            RegimeKind::Linear => "Linear",
            RegimeKind::Singular => "Singular",
        }
    }

    /// Numeric code used in CSV outputs.
    pub fn code(self) -> i32 {
        match self {
            RegimeKind::Bright => 1,
            RegimeKind::Dark => -1,
            RegimeKind::Linear => 0,
            RegimeKind::Singular => 2,
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bright iff −Δ·(Ω² − Δ²) > 0.
pub fn classify_regime(detuning: f64, omega_rabi: f64) -> RegimeKind {
    if detuning == 0.0 {
        return RegimeKind::Linear;
    }
    let gap = (omega_rabi - detuning.abs()) * (omega_rabi + detuning.abs());
    if gap == 0.0 {
        return RegimeKind::Singular;
    }
    if -detuning * gap > 0.0 {
        RegimeKind::Bright
    } else {
        RegimeKind::Dark
    }
}

/// All medium-derived coefficients at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub omega_rabi: f64,
    pub omega_dot: f64,
    pub detuning: f64,
    pub theta: f64,
    pub cos_t: f64,
    pub sin_t: f64,
    pub tan_t: f64,
    /// Group index g²N/Ω².
    pub alpha: f64,
    pub v_g: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub k0: f64,
    pub chi1: f64,
    pub chi3: Complex64,
    pub eta: Complex64,
    pub c_n: Complex64,
    /// K = k₀/(V_g sin⁴θ), the time coefficient of the DSP NLSE.
    pub big_k: f64,
    /// δ = Im Cₙ/|Cₙ| (0 when Cₙ = 0).
    pub delta_loss: f64,
    pub theta_dot: f64,
}

impl Coefficients {
    pub fn regime(&self) -> RegimeKind {
        classify_regime(self.detuning, self.omega_rabi)
    }

    /// ∂ln|Cₙ|/∂θ at fixed Δ, ω₀ and medium.
    ///
    /// Cₙ ∝ Ω⁻²(G² + Ω²)/D with D = 1 + (−Δ² + iγΔ)/Ω², and dθ/dΩ = −G/(Ω² + G²).
    pub fn dln_cn_dtheta(&self, medium: &MediumParams) -> f64 {
        let om = self.omega_rabi;
        let big_g = medium.collective_coupling();
        let a = (self.detuning / om).powi(2);
        let b = medium.gamma_ab * self.detuning / (om * om);
        let d2 = (1.0 - a).powi(2) + b * b;
        let dln_domega = -2.0 / om + 2.0 * om / (big_g * big_g + om * om) - (2.0 / om) * (a * (1.0 - a) - b * b) / d2;
        dln_domega * -(om * om + big_g * big_g) / big_g
    }
}

/// Coefficients for an explicit Ω and Ω̇.
pub fn coefficients_for(medium: &MediumParams, probe: &ProbeSpec, omega_rabi: f64, omega_dot: f64) -> Result<Coefficients> {
    let angle = mixing_angle(medium, omega_rabi)?;
    let (chi1, chi3) = susceptibility(medium, probe, omega_rabi)?;
    let c = medium.light_speed;
    let big_g = medium.collective_coupling();
    let k0 = medium.k0();

    let v_g = c * angle.cos * angle.cos;
    let tan2 = angle.tan * angle.tan;
    let eta = chi3 * (1.5 * medium.omega0 * medium.omega0 / (c * c));
    let sin2 = angle.sin * angle.sin;
    let c_n = eta * (angle.cos * angle.cos / (sin2 * sin2));
    let c_n_abs = c_n.norm();
    Ok(Coefficients {
        omega_rabi,
        omega_dot,
        detuning: probe.detuning,
        theta: angle.theta,
        cos_t: angle.cos,
        sin_t: angle.sin,
        tan_t: angle.tan,
        alpha: medium.g * medium.g * medium.atoms_n / (omega_rabi * omega_rabi),
        v_g,
        beta1: 1.0 / v_g,
        beta2: -(tan2 * tan2) / (medium.omega0 * c),
        k0,
        chi1,
        chi3,
        eta,
        c_n,
        big_k: k0 / (v_g * sin2 * sin2),
        delta_loss: if c_n_abs > 0.0 { c_n.im / c_n_abs } else { 0.0 },
        theta_dot: -big_g * omega_dot / (omega_rabi * omega_rabi + big_g * big_g),
    })
}

pub fn coefficients_at(medium: &MediumParams, probe: &ProbeSpec, schedule: &ControlSchedule, t: f64) -> Result<Coefficients> {
    schedule.validate()?;
    coefficients_for(medium, probe, schedule.omega(t), schedule.omega_dot(t))
}

/// Default pass threshold for [`validate_assumptions`].
pub const ASSUMPTION_THRESHOLD: f64 = 0.1;

/// One named ordering assumption with its measured margin.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub margin: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Margins for the orderings the model relies on. Failures are reported,
/// never raised.
pub fn validate_assumptions(
    medium: &MediumParams,
    probe: &ProbeSpec,
    schedule: &ControlSchedule,
    t: f64,
    peak_field: f64,
    threshold: f64,
) -> Vec<AssumptionCheck> {
    let omega = schedule.omega(t);
    let delta = probe.detuning;
    let gap = ((omega - delta) * (omega + delta)).abs();
    let loss = (medium.gamma_ab * delta).abs();
    let loss_margin = if loss == 0.0 { 0.0 } else { loss / gap };
    let margins = [
        ("gamma_cb/omega", medium.gamma_cb / omega),
        ("gamma_ca/omega", medium.gamma_ca / omega),
        ("nonlinear_loss", loss_margin),
        ("weak_probe", (medium.g * peak_field.abs() / omega).powi(2)),
    ];
    margins
        .into_iter()
        .map(|(name, margin)| AssumptionCheck {
            name,
            margin,
            threshold,
            passed: margin < threshold,
        })
        .collect()
}

/// A named parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumPreset {
    pub name: &'static str,
    pub medium: MediumParams,
    pub probe: ProbeSpec,
    pub omega_rabi: f64,
}

/// Ultraslow-light parameters with Δ < 0 (bright regime).
///
/// (g, N) are stored and g√N = 6.3246e12 s⁻¹ is derived from them; the
/// commonly quoted g√N = 5.0e12 s⁻¹ is not consistent with this pair.
/// Decay rates are chosen to respect γ_cb, γ_ca ≪ Ω and |Ω² − Δ²| ≫ |γ_ab Δ|.
pub const PAPER_ULTRASLOW: MediumPreset = MediumPreset {
    name: "paper-ultraslow",
    medium: MediumParams {
        g: 2.0e6,
        atoms_n: 1.0e13,
        gamma_ab: 1.0e6,
        gamma_cb: 1.0e3,
        gamma_ca: 1.0e3,
        omega0: 2.0e15,
        light_speed: SPEED_OF_LIGHT,
    },
    probe: ProbeSpec {
        detuning: -1.0e7,
        a0cos0: 0.1,
        k_c: None,
    },
    omega_rabi: 1.0e8,
};

/// Same medium with the control reduced below |Δ|: defocusing regime.
pub const PAPER_DARK: MediumPreset = MediumPreset {
    name: "paper-dark",
    omega_rabi: 3.0e6,
    ..PAPER_ULTRASLOW
};

impl MediumPreset {
    pub fn by_name(name: &str) -> Option<MediumPreset> {
        [PAPER_ULTRASLOW, PAPER_DARK].into_iter().find(|p| p.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p0_c3() -> (MediumParams, ProbeSpec) {
        let mut medium = PAPER_ULTRASLOW.medium;
        medium.light_speed = 3.0e8;
        (medium, PAPER_ULTRASLOW.probe)
    }

    #[test]
    fn mixing_angle_at_unit_ratio_is_quarter_turn() {
        let mut medium = PAPER_ULTRASLOW.medium;
        medium.atoms_n = 1.0;
        let angle = mixing_angle(&medium, medium.g).unwrap();
        assert_relative_eq!(angle.theta, std::f64::consts::FRAC_PI_4, max_relative = 1e-15);
    }

    #[test]
    fn mixing_angle_preset_cos() {
        let angle = mixing_angle(&PAPER_ULTRASLOW.medium, 1.0e8).unwrap();
        // 1/sqrt(1 + 4e9) from the high-precision oracle
        assert_relative_eq!(angle.cos, 1.581_138_829_89e-5, max_relative = 1e-10);
        assert!(angle.theta > 0.0 && angle.theta < std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn mixing_angle_large_omega_is_photonic() {
        let angle = mixing_angle(&PAPER_ULTRASLOW.medium, 1e30).unwrap();
        assert!(angle.theta < 1e-17);
        assert_relative_eq!(angle.cos, 1.0);
    }

    #[test]
    fn mixing_angle_rejects_non_positive() {
        assert!(matches!(mixing_angle(&PAPER_ULTRASLOW.medium, 0.0), Err(Error::Domain(_))));
        assert!(matches!(mixing_angle(&PAPER_ULTRASLOW.medium, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn susceptibility_vanishes_on_resonance() {
        let mut probe = PAPER_ULTRASLOW.probe;
        probe.detuning = 0.0;
        let (chi1, chi3) = susceptibility(&PAPER_ULTRASLOW.medium, &probe, 1e8).unwrap();
        assert_eq!(chi1, 0.0);
        assert_eq!(chi3, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn susceptibility_preset_values() {
        let (medium, probe) = p0_c3();
        let (chi1, chi3) = susceptibility(&medium, &probe, 1e8).unwrap();
        assert_relative_eq!(chi1, 40.0, max_relative = 1e-12);
        assert_relative_eq!(chi3.re, 4.848_479_901_56e-2, max_relative = 1e-6);
        assert_relative_eq!(chi3.im, 4.897_454_446_02e-5, max_relative = 1e-6);

        let flipped = ProbeSpec { detuning: 1.0e7, ..probe };
        let (_, chi3) = susceptibility(&medium, &flipped, 1e8).unwrap();
        assert_relative_eq!(chi3.re, -4.848_479_901_56e-2, max_relative = 1e-6);
    }

    #[test]
    fn susceptibility_resonance_is_an_error() {
        let mut medium = PAPER_ULTRASLOW.medium;
        medium.gamma_ab = 0.0;
        let probe = ProbeSpec {
            detuning: -1e7,
            ..PAPER_ULTRASLOW.probe
        };
        assert!(matches!(susceptibility(&medium, &probe, 1e7), Err(Error::NonlinearResonance)));
        // finite γ_ab regularizes the denominator
        assert!(susceptibility(&PAPER_ULTRASLOW.medium, &probe, 1e7).is_ok());
    }

    #[test]
    fn coefficients_preset_values() {
        let (medium, probe) = p0_c3();
        let c = coefficients_at(&medium, &probe, &ControlSchedule::constant(1e8), 0.0).unwrap();
        assert_relative_eq!(c.v_g, 7.5e-2, max_relative = 1e-4);
        assert_relative_eq!(c.beta2, -2.666_666_666_67e-5, max_relative = 1e-4);
        assert_relative_eq!(c.eta.re, 3.232_319_934_37e12, max_relative = 1e-4);
        assert_relative_eq!(c.c_n.re, 808.079_983_796, max_relative = 1e-4);
        assert_relative_eq!(c.c_n.im, 0.816_242_407_874, max_relative = 1e-4);
        assert_relative_eq!(c.big_k, 8.888_888_895_56e7, max_relative = 1e-4);
        assert_relative_eq!(c.delta_loss, 1.010_100_494_8e-3, max_relative = 1e-4);
        assert_eq!(c.theta_dot, 0.0);
        assert_eq!(c.regime(), RegimeKind::Bright);
    }

    #[test]
    fn halving_omega_quarters_group_velocity() {
        let (medium, probe) = p0_c3();
        let a = coefficients_for(&medium, &probe, 1e8, 0.0).unwrap();
        let b = coefficients_for(&medium, &probe, 0.5e8, 0.0).unwrap();
        assert_relative_eq!(b.v_g / a.v_g, 0.25, max_relative = 1e-8);
        assert_relative_eq!(b.cos_t / a.cos_t, 0.5, max_relative = 1e-8);
    }

    #[test]
    fn theta_dot_from_ramp() {
        let medium = PAPER_ULTRASLOW.medium;
        let schedule = ControlSchedule::tanh(1e8, 0.8e8, 2.5e-3, 1e-3);
        let t = 2.3e-3;
        let c = coefficients_at(&medium, &PAPER_ULTRASLOW.probe, &schedule, t).unwrap();
        // finite difference of θ(Ω(t))
        let h = 1e-7;
        let theta = |t: f64| mixing_angle(&medium, schedule.omega(t)).unwrap().theta;
        let fd = (theta(t + h) - theta(t - h)) / (2.0 * h);
        assert_relative_eq!(c.theta_dot, fd, max_relative = 1e-5);
        assert!(c.theta_dot > 0.0);
    }

    #[test]
    fn dln_cn_matches_finite_difference() {
        let medium = PAPER_ULTRASLOW.medium;
        let probe = PAPER_ULTRASLOW.probe;
        for omega in [1e8, 3e7, 5e6, 3e6] {
            let c = coefficients_for(&medium, &probe, omega, 0.0).unwrap();
            let h = omega * 1e-6;
            let ln_cn = |om: f64| coefficients_for(&medium, &probe, om, 0.0).unwrap().c_n.norm().ln();
            // θ = π/2 − atan(Ω/G); differencing θ itself loses digits near π/2
            let big_g = medium.collective_coupling();
            let dtheta = -((omega + h) / big_g).atan() + ((omega - h) / big_g).atan();
            let fd = (ln_cn(omega + h) - ln_cn(omega - h)) / dtheta;
            assert_relative_eq!(c.dln_cn_dtheta(&medium), fd, max_relative = 1e-5);
            // leading order is 2 tanθ well above the detuning
            if omega > 10.0 * probe.detuning.abs() {
                assert_relative_eq!(c.dln_cn_dtheta(&medium), 2.0 * c.tan_t, max_relative = 0.05);
            }
        }
    }

    #[test]
    fn regime_truth_table() {
        assert_eq!(classify_regime(-1e7, 1e8), RegimeKind::Bright);
        assert_eq!(classify_regime(-1e7, 3e6), RegimeKind::Dark);
        assert_eq!(classify_regime(1e7, 1e8), RegimeKind::Dark);
        assert_eq!(classify_regime(1e7, 3e6), RegimeKind::Bright);
        assert_eq!(classify_regime(0.0, 1e8), RegimeKind::Linear);
        assert_eq!(classify_regime(-1e7, 1e7), RegimeKind::Singular);
    }

    #[test]
    fn assumption_margins_on_preset() {
        let p = PAPER_ULTRASLOW;
        let checks = validate_assumptions(
            &p.medium,
            &p.probe,
            &ControlSchedule::constant(p.omega_rabi),
            0.0,
            4.975e-3,
            ASSUMPTION_THRESHOLD,
        );
        let loss = checks.iter().find(|c| c.name == "nonlinear_loss").unwrap();
        assert_relative_eq!(loss.margin, 1.010_101_010_1e-3, max_relative = 1e-9);
        assert!(loss.passed);
        let weak = checks.iter().find(|c| c.name == "weak_probe").unwrap();
        assert_relative_eq!(weak.margin, 9.9e-9, max_relative = 1e-3);
        assert!(checks.iter().all(|c| c.passed));

        let mut medium = p.medium;
        medium.gamma_cb = p.omega_rabi;
        let checks = validate_assumptions(
            &medium,
            &p.probe,
            &ControlSchedule::constant(p.omega_rabi),
            0.0,
            0.0,
            ASSUMPTION_THRESHOLD,
        );
        assert_eq!(checks[0].margin, 1.0);
        assert!(!checks[0].passed);
    }

    #[test]
    fn schedule_floor_is_enforced() {
        let bad = ControlSchedule::tanh(1e8, 1e1, 0.0, 1e-3);
        assert!(bad.validate().is_err());
        let ok = ControlSchedule::tanh(1e8, 1e2, 0.0, 1e-3);
        assert!(ok.validate().is_ok());
        assert!(ControlSchedule::constant(0.0).validate().is_err());
    }

    #[test]
    fn linear_schedule_is_continuous() {
        let s = ControlSchedule::linear(1e8, 0.5e8, 1e-3, 2e-3);
        assert_eq!(s.omega(-1.0), 1e8);
        assert_eq!(s.omega(0.0), 1e8);
        assert_relative_eq!(s.omega(1e-3), 0.75e8);
        assert_eq!(s.omega(2e-3), 0.5e8);
        assert_relative_eq!(s.omega_dot(1e-3), -0.25e8 / 1e-3);
    }

    fn omega_strategy() -> impl Strategy<Value = f64> {
        (6.0f64..9.0).prop_map(|e| 10f64.powf(e))
    }

    proptest! {
        #[test]
        fn coefficient_identities(omega in omega_strategy(), delta in -1e8f64..1e8, gamma in 0.0f64..1e7) {
            let medium = MediumParams { gamma_ab: gamma, ..PAPER_ULTRASLOW.medium };
            let probe = ProbeSpec { detuning: delta, ..PAPER_ULTRASLOW.probe };
            prop_assume!(((omega - delta.abs()) / omega).abs() > 1e-6);
            let c = coefficients_for(&medium, &probe, omega, 0.0).unwrap();
            prop_assert!((c.cos_t * c.cos_t + c.sin_t * c.sin_t - 1.0).abs() <= 1e-14);
            prop_assert!((c.v_g * c.beta1 - 1.0).abs() <= 1e-12);
            prop_assert!((c.alpha / (c.tan_t * c.tan_t) - 1.0).abs() <= 1e-12);
            prop_assert!(c.beta2 <= 0.0);
            prop_assert!((0.0..=1.0).contains(&c.delta_loss));
            // dispersion relation K = −1/(β₂ V_g³)
            prop_assert!((c.big_k * -c.beta2 * c.v_g.powi(3) - 1.0).abs() <= 1e-12);
            if delta != 0.0 {
                let expected = -(delta * (omega * omega - delta * delta)).signum();
                prop_assert_eq!(c.c_n.re.signum(), expected);
            }
        }

        #[test]
        fn chi_odd_in_detuning(omega in omega_strategy(), delta in 1e3f64..1e8) {
            let medium = MediumParams { gamma_ab: 0.0, ..PAPER_ULTRASLOW.medium };
            prop_assume!(((omega - delta) / omega).abs() > 1e-6);
            let plus = susceptibility(&medium, &ProbeSpec { detuning: delta, ..PAPER_ULTRASLOW.probe }, omega).unwrap();
            let minus = susceptibility(&medium, &ProbeSpec { detuning: -delta, ..PAPER_ULTRASLOW.probe }, omega).unwrap();
            prop_assert!((plus.0 + minus.0).abs() <= 1e-12 * plus.0.abs());
            prop_assert!((plus.1.re + minus.1.re).abs() <= 1e-12 * plus.1.re.abs());
        }

        #[test]
        fn mirrored_detuning_flips_regime(omega in omega_strategy(), delta in 1e3f64..1e8) {
            prop_assume!(omega != delta);
            let a = classify_regime(delta, omega);
            let b = classify_regime(-delta, omega);
            prop_assert!(matches!((a, b), (RegimeKind::Bright, RegimeKind::Dark) | (RegimeKind::Dark, RegimeKind::Bright)));
        }

        #[test]
        fn loss_vanishes_without_gamma(omega in omega_strategy(), delta in -1e8f64..1e8) {
            prop_assume!(((omega - delta.abs()) / omega).abs() > 1e-6);
            let medium = MediumParams { gamma_ab: 0.0, ..PAPER_ULTRASLOW.medium };
            let c = coefficients_for(&medium, &ProbeSpec { detuning: delta, ..PAPER_ULTRASLOW.probe }, omega, 0.0).unwrap();
            prop_assert_eq!(c.delta_loss, 0.0);
        }
    }
}
