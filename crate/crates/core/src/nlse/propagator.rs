use num_complex::Complex64;

use super::diagnostics::{measure, Diagnostics, ShapeFit};
use super::grid::Grid1D;
use super::model::{CoefficientModel, NlseSample};
use super::spectral::Spectral;
use super::state::{normalization_scale, Mode, State};
use crate::eit::{mixing_angle, ControlSchedule, MediumParams, ProbeSpec};
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Perturbation function p(θ) used in normalized mode, P(Ψ′) = p(θ)·Ψ′.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// ½·∂ln|Cₙ|/∂θ, which makes normalized mode equivalent to physical mode.
    Exact,
    /// tanθ, the ultraslow-light approximation.
    TanTheta,
}

impl Perturbation {
    pub fn name(self) -> &'static str {
        match self {
            Perturbation::Exact => "exact",
            Perturbation::TanTheta => "tan-theta",
        }
    }

    fn rate(self, sample: &NlseSample) -> f64 {
        let p = match self {
            Perturbation::Exact => 0.5 * sample.dln_cn_dtheta,
            Perturbation::TanTheta => sample.tan_theta,
        };
        sample.theta_dot * p
    }
}

/// Field samples at one instant, always in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub t: f64,
    pub t_prime: f64,
    pub psi: Vec<Complex64>,
}

/// Receives diagnostics and snapshots as a run progresses.
pub trait RunObserver {
    /// Whether diagnostics should be measured after `step`.
    fn wants_diagnostics(&self, _step: u64, _is_last: bool) -> bool {
        true
    }

    fn on_diagnostics(&mut self, step: u64, state: &State, diag: &Diagnostics) -> Result<()>;

    fn on_snapshot(&mut self, snapshot: &Snapshot) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub step: u64,
    pub t: f64,
    pub t_prime: f64,
    pub diag: Diagnostics,
}

/// In-memory observer.
#[derive(Debug, Clone, Default)]
pub struct RunRecord {
    pub diagnostics: Vec<DiagnosticsRow>,
    pub snapshots: Vec<Snapshot>,
}

impl RunObserver for RunRecord {
    fn on_diagnostics(&mut self, step: u64, state: &State, diag: &Diagnostics) -> Result<()> {
        self.diagnostics.push(DiagnosticsRow {
            step,
            t: state.t,
            t_prime: state.t_prime,
            diag: *diag,
        });
        Ok(())
    }

    fn on_snapshot(&mut self, snapshot: &Snapshot) -> Result<()> {
        self.snapshots.push(snapshot.clone());
        Ok(())
    }
}

/// Strang split-step integrator bound to one coefficient model and grid.
pub struct Propagator<M> {
    model: M,
    spectral: Spectral,
    perturbation: Perturbation,
    steps_taken: u64,
    fit_hint: Option<ShapeFit>,
}

impl<M: CoefficientModel> Propagator<M> {
    pub fn new(model: M, grid: Grid1D, perturbation: Perturbation) -> Self {
        Propagator {
            model,
            spectral: Spectral::new(grid),
            perturbation,
            steps_taken: 0,
            fit_hint: None,
        }
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    fn sample(&self, t: f64) -> Result<NlseSample> {
        self.model.sample(t).map_err(|e| Error::Integration {
            step: self.steps_taken,
            t,
            reason: e.to_string(),
        })
    }

    /// Advance `state` by `dt`: half nonlinear, full linear, half nonlinear,
    /// with coefficients taken at each substep's midpoint. A negative `dt`
    /// runs the exact inverse map.
    pub fn step(&mut self, state: &mut State, dt: f64) -> Result<()> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::domain(format!("time step must be finite and nonzero, got {dt}")));
        }
        if state.grid != *self.spectral.grid() {
            return Err(Error::Shape("state grid differs from the propagator grid".into()));
        }
        let t = state.t;
        let first = self.sample(t + 0.25 * dt)?;
        let mid = self.sample(t + 0.5 * dt)?;
        let last = self.sample(t + 0.75 * dt)?;

        self.nonlinear(state.mode, &mut state.psi, &first, 0.5 * dt, t)?;
        let delta_tau = dt / mid.big_k;
        self.spectral.linear_step(&mut state.psi, delta_tau);
        self.nonlinear(state.mode, &mut state.psi, &last, 0.5 * dt, t)?;

        state.t = t + dt;
        state.t_prime += delta_tau;
        self.steps_taken += 1;
        if let Some(j) = state.psi.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Integration {
                step: self.steps_taken,
                t: state.t,
                reason: format!("non-finite field at sample {j}"),
            });
        }
        Ok(())
    }

    /// Exact solution of ∂ₜψ = i·g|ψ|²ψ over `h` with complex g: |ψ|² obeys
    /// u′ = −2 Im(g) u², the phase advances by Re(g)∫u dt.
    fn nonlinear(&self, mode: Mode, psi: &mut [Complex64], sample: &NlseSample, h: f64, t: f64) -> Result<()> {
        let (g, growth) = match mode {
            Mode::Physical => (sample.c_n / sample.big_k, 0.0),
            Mode::Normalized => {
                let s = normalization_scale(sample.c_n).map_err(|e| Error::Integration {
                    step: self.steps_taken,
                    t,
                    reason: e.to_string(),
                })?;
                (sample.c_n / (s * s * sample.big_k), self.perturbation.rate(sample))
            }
        };
        let half_growth = (0.5 * growth * h).exp();
        for v in psi.iter_mut() {
            *v *= half_growth;
            let u0 = v.norm_sqr();
            if u0 == 0.0 {
                continue;
            }
            let x = 2.0 * g.im * u0 * h;
            if x <= -1.0 {
                return Err(Error::Integration {
                    step: self.steps_taken,
                    t,
                    reason: "nonlinear loss substep run backwards past its singularity".into(),
                });
            }
            let log_ratio = if x.abs() < 1e-8 { 1.0 - 0.5 * x + x * x / 3.0 } else { x.ln_1p() / x };
            let phase = g.re * u0 * h * log_ratio;
            *v *= Complex64::from_polar((1.0 + x).sqrt().recip(), phase) * half_growth;
        }
        Ok(())
    }

    /// Diagnostics for `state`, warm-starting the shape fit from the last call.
    pub fn measure(&mut self, state: &State) -> Result<Diagnostics> {
        let sample = self.sample(state.t)?;
        let psi = state.physical_psi(&sample)?;
        let diag = measure(&psi, sample.c_n.re, &mut self.spectral, self.fit_hint);
        self.fit_hint = Some(diag.fit);
        Ok(diag)
    }

    fn snapshot(&self, step: u64, state: &State) -> Result<Snapshot> {
        let sample = self.sample(state.t)?;
        Ok(Snapshot {
            step,
            t: state.t,
            t_prime: state.t_prime,
            psi: state.physical_psi(&sample)?,
        })
    }

    /// Step with fixed `dt` from `state.t` to `t_final` (the last step is
    /// shortened if the span is not a multiple of `dt`). Diagnostics go to
    /// the observer after every step it asks for; snapshots at step 0, every
    /// `snapshot_every` steps and at the end.
    pub fn propagate<O: RunObserver>(&mut self, state: &mut State, t_final: f64, dt: f64, snapshot_every: u64, observer: &mut O) -> Result<u64> {
        if !(t_final > state.t) {
            return Err(Error::domain(format!("t_final = {t_final:e} must exceed the start time {:e}", state.t)));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("dt must be > 0, got {dt}")));
        }
        let t0 = state.t;
        let n_steps = (((t_final - t0) / dt) - 1e-9).ceil().max(1.0) as u64;

        if observer.wants_diagnostics(0, false) {
            let d = self.measure(state)?;
            observer.on_diagnostics(0, state, &d)?;
        }
        observer.on_snapshot(&self.snapshot(0, state)?)?;

        for k in 1..=n_steps {
            let target = if k == n_steps { t_final } else { t0 + k as f64 * dt };
            self.step(state, target - state.t)?;
            state.t = target;
            let last = k == n_steps;
            if observer.wants_diagnostics(k, last) {
                let d = self.measure(state)?;
                observer.on_diagnostics(k, state, &d)?;
            }
            if (snapshot_every > 0 && k % snapshot_every == 0) || last {
                observer.on_snapshot(&self.snapshot(k, state)?)?;
            }
        }
        Ok(n_steps)
    }
}

/// z = ξ_peak + ∫_{t0}^{t} V_g(τ) dτ.
pub fn lab_frame_position(schedule: &ControlSchedule, medium: &MediumParams, _probe: &ProbeSpec, t0: f64, t: f64, xi_peak: f64) -> Result<f64> {
    if t < t0 {
        return Err(Error::domain(format!("t = {t:e} precedes t0 = {t0:e}")));
    }
    schedule.validate()?;
    mixing_angle(medium, schedule.omega(t0))?;
    let c = medium.light_speed;
    let big_g = medium.collective_coupling();
    let v_g = |tau: f64| {
        let om = schedule.omega(tau);
        let cos = om / om.hypot(big_g);
        c * cos * cos
    };
    Ok(xi_peak + adaptive_simpson(v_g, t0, t, 1e-10))
}
