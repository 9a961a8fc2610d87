//! Closed-form soliton families of the DSP NLSE
//! `iK ∂ₜΨ + ∂²_ξ Ψ + Cₙ|Ψ|²Ψ = 0`.
//!
//! With κ = √(|Re Cₙ|/2)·M the bright soliton is M·sech(κξ)·e^{iκ²t′} and the
//! black soliton is M·tanh(κξ)·e^{−2iκ²t′}, where t′ = ∫dt/K. The
//! `PaperEq13` variant, M·sech(√(Re Cₙ)·Mξ)·e^{2iκ²t′}, has a √2 wider
//! wavenumber and twice the phase rate; it does not solve the equation and is
//! kept only as a comparison input.

use num_complex::Complex64;

use crate::eit::Coefficients;
use crate::error::{Error, Result};
use crate::SECH_HALF_ARG;

/// atanh(1/2): half-depth argument of the tanh notch.
pub const TANH_HALF_ARG: f64 = 0.549_306_144_334_054_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolitonKind {
    Bright,
    Dark,
    PaperEq13,
}

impl SolitonKind {
    pub fn name(self) -> &'static str {
        match self {
            SolitonKind::Bright => "bright",
            SolitonKind::Dark => "dark",
            SolitonKind::PaperEq13 => "paper-eq13",
        }
    }
}

/// One member of an analytic soliton family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec {
    pub kind: SolitonKind,
    /// Peak (bright) or background (dark) amplitude M.
    pub amp_m: f64,
    pub center_xi: f64,
    pub t_ref: f64,
    /// Re Cₙ at `t_ref` (m⁻²).
    pub c_n: f64,
    /// K at `t_ref` (s·m⁻²).
    pub big_k: f64,
}

impl SolitonSpec {
    pub fn new(kind: SolitonKind, amp_m: f64, center_xi: f64, t_ref: f64, c_n: f64, big_k: f64) -> Result<Self> {
        if !(amp_m.is_finite() && amp_m > 0.0) {
            return Err(Error::domain(format!("soliton amplitude must be > 0, got {amp_m}")));
        }
        if !(big_k.is_finite() && big_k > 0.0) {
            return Err(Error::domain(format!("K must be > 0, got {big_k}")));
        }
        match kind {
            SolitonKind::Bright | SolitonKind::PaperEq13 if !(c_n > 0.0) => {
                Err(Error::Regime(format!("bright soliton needs Re Cn > 0, got {c_n:e}")))
            }
            SolitonKind::Dark if !(c_n < 0.0) => Err(Error::Regime(format!("dark soliton needs Re Cn < 0, got {c_n:e}"))),
            _ => Ok(SolitonSpec {
                kind,
                amp_m,
                center_xi,
                t_ref,
                c_n,
                big_k,
            }),
        }
    }

    /// Soliton of the given kind whose amplitude follows [`amplitude_law`]
    /// at the instant described by `coeffs`.
    pub fn from_amplitude_law(kind: SolitonKind, a0cos0: f64, cos_theta_0: f64, coeffs: &Coefficients, t_ref: f64, center_xi: f64) -> Result<Self> {
        let law = amplitude_law(a0cos0, cos_theta_0, coeffs.cos_t, coeffs.c_n.re)?;
        SolitonSpec::new(kind, law.amp_m, center_xi, t_ref, coeffs.c_n.re, coeffs.big_k)
    }

    /// κ = √(|Re Cₙ|/2)·M, the inverse width of the self-consistent profile.
    pub fn kappa(&self) -> f64 {
        (self.c_n.abs() / 2.0).sqrt() * self.amp_m
    }

    /// Normalized time elapsed since `t_ref` for constant K.
    pub fn elapsed_normalized(&self, t: f64) -> f64 {
        (t - self.t_ref) / self.big_k
    }

    /// HWHM of |Ψ| for this kind (half-depth half-width for dark).
    pub fn hwhm(&self) -> f64 {
        match self.kind {
            SolitonKind::Bright => SECH_HALF_ARG / self.kappa(),
            SolitonKind::PaperEq13 => SECH_HALF_ARG / (std::f64::consts::SQRT_2 * self.kappa()),
            SolitonKind::Dark => TANH_HALF_ARG / self.kappa(),
        }
    }
}

pub(crate) fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// Bright profile at normalized time `t_prime` (elapsed since `t_ref`).
pub fn bright_profile(spec: &SolitonSpec, xi: &[f64], t_prime: f64) -> Result<Vec<Complex64>> {
    let kappa = spec.kappa();
    let (wavenumber, rate) = match spec.kind {
        SolitonKind::Bright => (kappa, kappa * kappa),
        SolitonKind::PaperEq13 => (std::f64::consts::SQRT_2 * kappa, 2.0 * kappa * kappa),
        SolitonKind::Dark => return Err(Error::Regime("bright_profile called with a dark spec".into())),
    };
    let carrier = Complex64::from_polar(1.0, rate * t_prime);
    Ok(xi
        .iter()
        .map(|&x| carrier * (spec.amp_m * sech(wavenumber * (x - spec.center_xi))))
        .collect())
}

/// Single black soliton at normalized time `t_prime`.
pub fn dark_profile(spec: &SolitonSpec, xi: &[f64], t_prime: f64) -> Result<Vec<Complex64>> {
    if spec.kind != SolitonKind::Dark {
        return Err(Error::Regime("dark_profile needs a dark spec".into()));
    }
    let kappa = spec.kappa();
    let carrier = Complex64::from_polar(1.0, -2.0 * kappa * kappa * t_prime);
    Ok(xi
        .iter()
        .map(|&x| carrier * (spec.amp_m * (kappa * (x - spec.center_xi)).tanh()))
        .collect())
}

/// Wrap `x` into [−L/2, L/2).
pub(crate) fn wrap(x: f64, domain_len: f64) -> f64 {
    x - domain_len * (x / domain_len + 0.5).floor()
}

/// Black-soliton pair at `center ± L/4` on a periodic domain, so the total
/// phase winding around the domain is zero.
pub fn dark_pair_profile(spec: &SolitonSpec, xi: &[f64], domain_len: f64, t_prime: f64) -> Result<Vec<Complex64>> {
    if spec.kind != SolitonKind::Dark {
        return Err(Error::Regime("dark_pair_profile needs a dark spec".into()));
    }
    let kappa = spec.kappa();
    let quarter = 0.25 * domain_len;
    let carrier = Complex64::from_polar(1.0, -2.0 * kappa * kappa * t_prime);
    Ok(xi
        .iter()
        .map(|&x| {
            let d = wrap(x - spec.center_xi, domain_len);
            let shape = -(kappa * (d + quarter)).tanh() * (kappa * (d - quarter)).tanh();
            carrier * (spec.amp_m * shape)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeLaw {
    /// Physical peak amplitude M(t).
    pub amp_m: f64,
    /// Normalized initial amplitude A₀.
    pub a0: f64,
    /// Normalized amplitude A(t) = A₀cosθ(0)/cosθ(t).
    pub a_t: f64,
}

/// M(t) = A₀cosθ(0) / (|Cₙ(t)/2|^{1/2}·cosθ(t)).
pub fn amplitude_law(a0cos0: f64, cos_theta_0: f64, cos_theta_t: f64, c_n_t: f64) -> Result<AmplitudeLaw> {
    if !(a0cos0 > 0.0) {
        return Err(Error::domain(format!("A0·cosθ(0) must be > 0, got {a0cos0}")));
    }
    if !(cos_theta_0 > 0.0) || !(cos_theta_t > 0.0) {
        return Err(Error::Singular(format!("cosθ must be > 0 (got {cos_theta_0}, {cos_theta_t})")));
    }
    if !(c_n_t.abs() > 0.0) || !c_n_t.is_finite() {
        return Err(Error::Singular(format!("Cn must be finite and nonzero, got {c_n_t}")));
    }
    let a_t = a0cos0 / cos_theta_t;
    Ok(AmplitudeLaw {
        amp_m: a_t / (c_n_t.abs() / 2.0).sqrt(),
        a0: a0cos0 / cos_theta_0,
        a_t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthReport {
    pub hwhm_xi: f64,
    pub fwhm_xi: f64,
    /// hwhm_xi / V_g (s).
    pub tau: f64,
    /// ln(2+√3)·|N c(Ω²−Δ²)/(6k₀Ω²M²Δ)|^{1/2}·cosθ (m).
    pub paper_dxi: f64,
    /// ln(2+√3)·|N(Ω²−Δ²)/(6k₀Ω²M²Δ)·cos²θ|^{1/2}, units as printed.
    pub paper_tau: f64,
}

/// Widths of `spec` under the medium state `coeffs`.
pub fn widths(spec: &SolitonSpec, coeffs: &Coefficients, atoms_n: f64, light_speed: f64) -> WidthReport {
    let hwhm = spec.hwhm();
    let om2 = coeffs.omega_rabi * coeffs.omega_rabi;
    let d = coeffs.detuning;
    let m2 = spec.amp_m * spec.amp_m;
    let core = (atoms_n * (om2 - d * d) / (6.0 * coeffs.k0 * om2 * m2 * d)).abs();
    WidthReport {
        hwhm_xi: hwhm,
        fwhm_xi: 2.0 * hwhm,
        tau: hwhm / coeffs.v_g,
        paper_dxi: SECH_HALF_ARG * (core * light_speed).sqrt() * coeffs.cos_t,
        paper_tau: SECH_HALF_ARG * (core * coeffs.cos_t * coeffs.cos_t).sqrt(),
    }
}

/// Width ratios predicted when Ω(0) → Ω(t): (Δξ(t)/Δξ(0), τ(t)/τ(0)).
pub fn scaling_laws(omega_0: f64, omega_t: f64) -> Result<(f64, f64)> {
    if !(omega_0 > 0.0 && omega_t > 0.0) {
        return Err(Error::domain("Rabi frequencies must be > 0"));
    }
    Ok((omega_t / omega_0, omega_0 / omega_t))
}
