use num_complex::Complex64;

use crate::eit::{coefficients_at, Coefficients, ControlSchedule, MediumParams, ProbeSpec};
use crate::error::Result;

/// The time-dependent coefficients the integrator needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlseSample {
    pub big_k: f64,
    pub c_n: Complex64,
    pub theta_dot: f64,
    pub tan_theta: f64,
    /// ∂ln|Cₙ|/∂θ.
    pub dln_cn_dtheta: f64,
}

/// Source of NLSE coefficients as a function of time.
pub trait CoefficientModel {
    fn sample(&self, t: f64) -> Result<NlseSample>;

    /// Full medium coefficients, when the model has a medium behind it.
    fn coefficients(&self, _t: f64) -> Option<Result<Coefficients>> {
        None
    }
}

/// Coefficients derived from a medium, probe and control schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumModel {
    pub medium: MediumParams,
    pub probe: ProbeSpec,
    pub schedule: ControlSchedule,
}

impl CoefficientModel for MediumModel {
    fn sample(&self, t: f64) -> Result<NlseSample> {
        let c = coefficients_at(&self.medium, &self.probe, &self.schedule, t)?;
        Ok(NlseSample {
            big_k: c.big_k,
            c_n: c.c_n,
            theta_dot: c.theta_dot,
            tan_theta: c.tan_t,
            dln_cn_dtheta: c.dln_cn_dtheta(&self.medium),
        })
    }

    fn coefficients(&self, t: f64) -> Option<Result<Coefficients>> {
        Some(coefficients_at(&self.medium, &self.probe, &self.schedule, t))
    }
}

/// Fixed K and Cₙ, for tests and dimensionless studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantModel {
    pub big_k: f64,
    pub c_n: Complex64,
}

impl CoefficientModel for ConstantModel {
    fn sample(&self, _t: f64) -> Result<NlseSample> {
        Ok(NlseSample {
            big_k: self.big_k,
            c_n: self.c_n,
            theta_dot: 0.0,
            tan_theta: 0.0,
            dln_cn_dtheta: 0.0,
        })
    }
}

impl<M: CoefficientModel + ?Sized> CoefficientModel for &M {
    fn sample(&self, t: f64) -> Result<NlseSample> {
        (**self).sample(t)
    }

    fn coefficients(&self, t: f64) -> Option<Result<Coefficients>> {
        (**self).coefficients(t)
    }
}
