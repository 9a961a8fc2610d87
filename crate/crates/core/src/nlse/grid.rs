use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic ξ grid: ξ_j = −L/2 + j·dξ for j ∈ [0, n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    domain_len: f64,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 256;

    pub fn new(n_points: usize, domain_len: f64) -> Result<Self> {
        if !n_points.is_power_of_two() {
            return Err(Error::domain(format!("points must be a power of two, got {n_points}")));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::domain(format!("points must be >= {}, got {n_points}", Self::MIN_POINTS)));
        }
        if !(domain_len.is_finite() && domain_len > 0.0) {
            return Err(Error::domain(format!("domain_len must be > 0, got {domain_len}")));
        }
        Ok(Grid1D { n_points, domain_len })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn domain_len(&self) -> f64 {
        self.domain_len
    }

    pub fn dxi(&self) -> f64 {
        self.domain_len / self.n_points as f64
    }

    pub fn xi(&self, j: usize) -> f64 {
        -0.5 * self.domain_len + j as f64 * self.dxi()
    }

    pub fn xi_values(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.xi(j)).collect()
    }

    /// Angular wavenumbers in FFT order: 0, 1, …, n/2−1, −n/2, …, −1 (×2π/L).
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let base = 2.0 * PI / self.domain_len;
        (0..n).map(|m| if m < n / 2 { m } else { m - n }).map(|m| base * m as f64).collect()
    }
}
