use log::warn;
use num_complex::Complex64;

use super::grid::Grid1D;
use super::model::NlseSample;
use crate::error::{Error, Result};
use crate::soliton::{bright_profile, dark_pair_profile, SolitonKind, SolitonSpec};

/// Which field the state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Ψ in physical units, evolved in t.
    Physical,
    /// Ψ′ = Ψ·√(|Cₙ|/2), evolved in t′ with the θ̇·P(Ψ′) perturbation.
    Normalized,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Physical => "physical",
            Mode::Normalized => "normalized",
        }
    }
}

/// Sampled DSP field on the periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub grid: Grid1D,
    pub psi: Vec<Complex64>,
    /// Physical time (s).
    pub t: f64,
    /// Accumulated ∫dt/K.
    pub t_prime: f64,
    pub mode: Mode,
}

/// √(|Cₙ|/2): the factor between Ψ and Ψ′.
pub(crate) fn normalization_scale(c_n: Complex64) -> Result<f64> {
    let s = (c_n.norm() / 2.0).sqrt();
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Singular("normalized mode needs a nonzero Cn".into()));
    }
    Ok(s)
}

impl State {
    /// The physical field Ψ, given the coefficients at `self.t`.
    pub fn physical_psi(&self, sample: &NlseSample) -> Result<Vec<Complex64>> {
        match self.mode {
            Mode::Physical => Ok(self.psi.clone()),
            Mode::Normalized => {
                let s = normalization_scale(sample.c_n)?;
                Ok(self.psi.iter().map(|&v| v / s).collect())
            }
        }
    }

    /// Re-express the state in `mode`, using the coefficients at `self.t`.
    pub fn into_mode(mut self, mode: Mode, sample: &NlseSample) -> Result<State> {
        if mode == self.mode {
            return Ok(self);
        }
        let s = normalization_scale(sample.c_n)?;
        let factor = if mode == Mode::Normalized { s } else { 1.0 / s };
        self.psi.iter_mut().for_each(|v| *v *= factor);
        self.mode = mode;
        Ok(self)
    }
}

/// Initial condition choices.
#[derive(Debug, Clone, PartialEq)]
pub enum InitProfile {
    /// Analytic soliton. Dark kinds are installed as a black-soliton pair at
    /// `center ± L/4` so the periodic phase winding totals zero.
    Soliton(SolitonSpec),
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    Zero,
    /// Physical-unit samples, one per grid point.
    Samples(Vec<Complex64>),
}

pub fn init_state(grid: Grid1D, profile: &InitProfile, sample: &NlseSample, t0: f64, mode: Mode) -> Result<State> {
    let xi = grid.xi_values();
    let psi = match profile {
        InitProfile::Zero => vec![Complex64::new(0.0, 0.0); grid.n_points()],
        InitProfile::Gaussian { amplitude, width, center } => {
            if !(*width > 0.0) {
                return Err(Error::domain(format!("gaussian width must be > 0, got {width}")));
            }
            xi.iter()
                .map(|&x| {
                    let d = crate::soliton::wrap(x - center, grid.domain_len());
                    Complex64::new(amplitude * (-0.5 * (d / width).powi(2)).exp(), 0.0)
                })
                .collect()
        }
        InitProfile::Samples(values) => {
            if values.len() != grid.n_points() {
                return Err(Error::Shape(format!("{} samples for a {}-point grid", values.len(), grid.n_points())));
            }
            values.clone()
        }
        InitProfile::Soliton(spec) => {
            let re = sample.c_n.re;
            match spec.kind {
                SolitonKind::Bright | SolitonKind::PaperEq13 if !(re > 0.0) => {
                    return Err(Error::Regime(format!("bright profile requires Re Cn > 0 at t0, got {re:e}")));
                }
                SolitonKind::Dark if !(re < 0.0) => {
                    return Err(Error::Regime(format!("dark profile requires Re Cn < 0 at t0, got {re:e}")));
                }
                _ => {}
            }
            let clearance = 0.5 * grid.domain_len() / spec.hwhm();
            if spec.kind != SolitonKind::Dark && clearance < 15.0 {
                warn!("soliton has only {clearance:.1} HWHM of clearance to the periodic boundary (want >= 15)");
            }
            match spec.kind {
                SolitonKind::Dark => dark_pair_profile(spec, &xi, grid.domain_len(), 0.0)?,
                _ => bright_profile(spec, &xi, 0.0)?,
            }
        }
    };
    let state = State {
        grid,
        psi,
        t: t0,
        t_prime: 0.0,
        mode: Mode::Physical,
    };
    state.into_mode(mode, sample)
}
