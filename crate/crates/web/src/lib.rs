//! Browser demo: the coefficient table, a regime map over (Ω, Δ) and a
//! Fig. 1 style amplitude surface, all on the paper-ultraslow preset.
//!
//! The exported functions are thin wrappers; the work happens in the plain
//! functions below so it can be tested natively.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use dsp_soliton::eit::{coefficients_for, ControlSchedule, ProbeSpec, PAPER_ULTRASLOW};
use dsp_soliton::scenario::{cmd_coeffs, fig1_data, Scenario};
use dsp_soliton::{Error, Result};
use wasm_bindgen::prelude::*;

/// Points on the ξ grid for the surface; coarse keeps it interactive.
const SURFACE_POINTS: usize = 512;
const SURFACE_STEPS: f64 = 2000.0;

fn preset() -> Scenario {
    Scenario::from_preset("paper-ultraslow").expect("built-in preset")
}

/// Coefficient table for the preset with Ω, Δ and γ_ab replaced.
pub fn coefficients_text(omega: f64, detuning: f64, gamma_ab: f64) -> Result<String> {
    let mut s = preset();
    s.control = ControlSchedule::constant(omega);
    s.probe.detuning = detuning;
    s.medium.gamma_ab = gamma_ab;
    s.validate()?;
    cmd_coeffs(&s, 0.0)
}

/// sign(Re Cₙ)·log10(1 + |Re Cₙ|) on an `n_omega` × `n_detuning` grid,
/// row-major with Ω (log-spaced) along rows and Δ (linear, symmetric)
/// along columns. Cells where the coefficients are undefined are NaN.
pub fn regime_grid(n_omega: usize, n_detuning: usize, log_omega_min: f64, log_omega_max: f64, detuning_max: f64, gamma_ab: f64) -> Result<Vec<f64>> {
    if n_omega < 2 || n_detuning < 2 || !(log_omega_max > log_omega_min) || !(detuning_max > 0.0) {
        return Err(Error::Domain("need at least a 2x2 grid over a non-empty range".into()));
    }
    let medium = dsp_soliton::eit::MediumParams {
        gamma_ab,
        ..PAPER_ULTRASLOW.medium
    };
    let mut cells = Vec::with_capacity(n_omega * n_detuning);
    for i in 0..n_omega {
        let omega = 10f64.powf(log_omega_min + (log_omega_max - log_omega_min) * i as f64 / (n_omega - 1) as f64);
        for j in 0..n_detuning {
            let detuning = detuning_max * (2.0 * j as f64 / (n_detuning - 1) as f64 - 1.0);
            let probe = ProbeSpec {
                detuning,
                ..PAPER_ULTRASLOW.probe
            };
            let value = match coefficients_for(&medium, &probe, omega, 0.0) {
                Ok(c) => c.c_n.re.signum() * c.c_n.re.abs().ln_1p() / std::f64::consts::LN_10,
                Err(_) => f64::NAN,
            };
            cells.push(value);
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceData {
    /// t/τ per slice.
    pub times: Vec<f64>,
    /// z/L per slice, `points` values each, row-major.
    pub z: Vec<f64>,
    /// |Ψ|/E₀, same layout as `z`.
    pub amplitude: Vec<f64>,
    pub points: usize,
}

/// Bright soliton propagated under a tanh ramp Ω_start → Ω_end centred at
/// half the window, sampled at `slices` + 1 times.
pub fn surface(omega_start: f64, omega_end: f64, t_final: f64, slices: u32) -> Result<SurfaceData> {
    if slices == 0 || !(t_final > 0.0) {
        return Err(Error::Domain("need at least one slice and t_final > 0".into()));
    }
    let mut s = preset();
    s.control = if omega_end == omega_start {
        ControlSchedule::constant(omega_start)
    } else {
        ControlSchedule::tanh(omega_start, omega_end, 0.5 * t_final, 0.2 * t_final)
    };
    s.grid.points = SURFACE_POINTS;
    s.run.t_final = t_final;
    s.run.dt = t_final / SURFACE_STEPS;
    s.run.snapshot_every = (SURFACE_STEPS as u64 / slices as u64).max(1);
    s.validate()?;
    let data = fig1_data(&s)?;
    let mut out = SurfaceData {
        times: Vec::with_capacity(data.slices.len()),
        z: Vec::new(),
        amplitude: Vec::new(),
        points: SURFACE_POINTS,
    };
    for (t, z, amp) in data.slices {
        out.times.push(t);
        out.z.extend(z);
        out.amplitude.extend(amp);
    }
    Ok(out)
}

fn js(err: Error) -> JsError {
    JsError::new(&err.to_string())
}

#[wasm_bindgen]
pub fn coefficients(omega: f64, detuning: f64, gamma_ab: f64) -> std::result::Result<String, JsError> {
    coefficients_text(omega, detuning, gamma_ab).map_err(js)
}

#[wasm_bindgen]
pub fn regime_map(
    n_omega: usize,
    n_detuning: usize,
    log_omega_min: f64,
    log_omega_max: f64,
    detuning_max: f64,
    gamma_ab: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    regime_grid(n_omega, n_detuning, log_omega_min, log_omega_max, detuning_max, gamma_ab).map_err(js)
}

#[wasm_bindgen]
pub struct Surface {
    data: SurfaceData,
}

#[wasm_bindgen]
impl Surface {
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.data.times.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn z(&self) -> Vec<f64> {
        self.data.z.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn amplitude(&self) -> Vec<f64> {
        self.data.amplitude.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn points(&self) -> usize {
        self.data.points
    }
}

#[wasm_bindgen]
pub fn soliton_surface(omega_start: f64, omega_end: f64, t_final: f64, slices: u32) -> std::result::Result<Surface, JsError> {
    surface(omega_start, omega_end, t_final, slices).map(|data| Surface { data }).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_for_preset_values() {
        let text = coefficients_text(1e8, -1e7, 1e6).unwrap();
        assert!(text.lines().last().unwrap().contains("Bright"));
        let dark = coefficients_text(1e8, 1e7, 1e6).unwrap();
        assert!(dark.lines().last().unwrap().contains("Dark"));
        assert!(coefficients_text(-1.0, -1e7, 1e6).is_err());
    }

    #[test]
    fn regime_grid_signs() {
        let n = 21;
        let grid = regime_grid(n, n, 6.0, 9.0, 1e8, 0.0).unwrap();
        assert_eq!(grid.len(), n * n);
        // top row is Ω = 1e9 > |Δ|: Δ < 0 focusing, Δ > 0 defocusing
        let top = &grid[(n - 1) * n..];
        assert!(top[0] > 0.0 && top[n - 1] < 0.0);
        // the Δ = 0 column is linear
        assert!(grid.chunks(n).all(|row| row[n / 2] == 0.0));
        // bottom row is Ω = 1e6 < |Δ| at the edges: the signs swap
        assert!(grid[0] < 0.0 && grid[n - 1] > 0.0);
        assert!(regime_grid(1, 5, 6.0, 9.0, 1e8, 0.0).is_err());
    }

    #[test]
    fn surface_ridge_is_unit() {
        let s = surface(1e8, 1e8, 1e-3, 4).unwrap();
        assert_eq!(s.times.len(), 5);
        assert_eq!(s.z.len(), 5 * SURFACE_POINTS);
        for row in s.amplitude.chunks(SURFACE_POINTS) {
            let peak = row.iter().copied().fold(0.0, f64::max);
            assert!((peak - 1.0).abs() < 1e-3, "{peak}");
        }
        // the ridge drifts forward at V_g
        let first = &s.z[..SURFACE_POINTS];
        let last = &s.z[4 * SURFACE_POINTS..];
        assert!(last[0] > first[0]);
        assert!(surface(1e8, 0.8e8, 1e-3, 0).is_err());
    }
}
