use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid1D;

/// FFT plans and scratch for one grid. Owned per run.
pub struct Spectral {
    grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    q2: Vec<f64>,
    buffer: Vec<Complex64>,
    // phase factors for the last Δτ, reused while the step is unchanged
    phases: Vec<Complex64>,
    phases_tau: f64,
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let n = grid.n_points();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Spectral {
            grid,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            q2: grid.wavenumbers().into_iter().map(|q| q * q).collect(),
            buffer: vec![Complex64::new(0.0, 0.0); n],
            phases: Vec::new(),
            phases_tau: f64::NAN,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Exact free evolution ψ̂ → ψ̂·exp(−i q² Δτ).
    pub fn linear_step(&mut self, psi: &mut [Complex64], delta_tau: f64) {
        self.forward.process_with_scratch(psi, &mut self.scratch);
        if self.phases_tau != delta_tau {
            let scale = 1.0 / psi.len() as f64;
            self.phases = self.q2.iter().map(|&q2| Complex64::from_polar(scale, -q2 * delta_tau)).collect();
            self.phases_tau = delta_tau;
        }
        for (v, f) in psi.iter_mut().zip(&self.phases) {
            *v *= f;
        }
        self.inverse.process_with_scratch(psi, &mut self.scratch);
    }

    /// ∫|∂_ξ ψ|² dξ via Parseval.
    pub fn kinetic_energy(&mut self, psi: &[Complex64]) -> f64 {
        self.buffer.copy_from_slice(psi);
        self.forward.process_with_scratch(&mut self.buffer, &mut self.scratch);
        let n = psi.len() as f64;
        let sum: f64 = self.buffer.iter().zip(&self.q2).map(|(v, &q2)| q2 * v.norm_sqr()).sum();
        sum * self.grid.dxi() / n
    }
}
