//! Dark- and bright-state polariton fields.
//!
//! Ψ = cosθ·ε − sinθ·√N·ρ̃_cb and Φ = sinθ·ε + cosθ·√N·ρ̃_cb with
//! ρ̃_cb = ρ_cb·exp(i(k₀ − k_c)z). The map is a rotation, so it is unitary in
//! the (ε, √N ρ̃_cb) coordinates.

use log::warn;
use num_complex::Complex64;

use crate::eit::{MediumParams, ProbeSpec};
use crate::error::{Error, Result};

/// Probe envelope and spin coherence on a shared z grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub epsilon: Vec<Complex64>,
    pub rho_cb: Vec<Complex64>,
    pub z_grid: Vec<f64>,
    pub k0: f64,
    pub k_c: f64,
}

/// Dark (Ψ) and bright (Φ) polaritons on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonPair {
    pub psi: Vec<Complex64>,
    pub phi: Vec<Complex64>,
    pub z_grid: Vec<f64>,
    pub k0: f64,
    pub k_c: f64,
}

impl FieldPair {
    pub fn new(epsilon: Vec<Complex64>, rho_cb: Vec<Complex64>, z_grid: Vec<f64>, k0: f64, k_c: f64) -> Result<Self> {
        check_lengths(epsilon.len(), rho_cb.len(), z_grid.len())?;
        if let Some(over) = rho_cb.iter().map(|r| r.norm()).find(|&r| r > 1.0) {
            warn!("|rho_cb| = {over} exceeds the density-matrix bound 1");
        }
        Ok(FieldPair {
            epsilon,
            rho_cb,
            z_grid,
            k0,
            k_c,
        })
    }
}

fn check_lengths(a: usize, b: usize, grid: usize) -> Result<()> {
    if a != grid || b != grid {
        return Err(Error::Shape(format!("field lengths {a} and {b} do not match grid length {grid}")));
    }
    Ok(())
}

fn check_angle(theta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::domain(format!("mixing angle {theta} outside [0, π/2]")));
    }
    Ok(())
}

fn phase(k0: f64, k_c: f64, z: f64) -> Complex64 {
    Complex64::from_polar(1.0, (k0 - k_c) * z)
}

pub fn to_polaritons(fields: &FieldPair, theta: f64, atoms_n: f64) -> Result<PolaritonPair> {
    check_angle(theta)?;
    check_lengths(fields.epsilon.len(), fields.rho_cb.len(), fields.z_grid.len())?;
    let (s, c) = theta.sin_cos();
    let root_n = atoms_n.sqrt();
    let (psi, phi) = fields
        .epsilon
        .iter()
        .zip(&fields.rho_cb)
        .zip(&fields.z_grid)
        .map(|((&eps, &rho), &z)| {
            let spin = rho * phase(fields.k0, fields.k_c, z) * root_n;
            (eps * c - spin * s, eps * s + spin * c)
        })
        .unzip();
    Ok(PolaritonPair {
        psi,
        phi,
        z_grid: fields.z_grid.clone(),
        k0: fields.k0,
        k_c: fields.k_c,
    })
}

pub fn from_polaritons(pol: &PolaritonPair, theta: f64, atoms_n: f64) -> Result<FieldPair> {
    check_angle(theta)?;
    check_lengths(pol.psi.len(), pol.phi.len(), pol.z_grid.len())?;
    let (s, c) = theta.sin_cos();
    let root_n = atoms_n.sqrt();
    let (epsilon, rho_cb) = pol
        .psi
        .iter()
        .zip(&pol.phi)
        .zip(&pol.z_grid)
        .map(|((&psi, &phi), &z)| {
            let eps = psi * c + phi * s;
            let spin = phi * c - psi * s;
            (eps, spin / root_n * phase(pol.k0, pol.k_c, z).conj())
        })
        .unzip();
    Ok(FieldPair {
        epsilon,
        rho_cb,
        z_grid: pol.z_grid.clone(),
        k0: pol.k0,
        k_c: pol.k_c,
    })
}

/// Lowest-order adiabatic fields for a given DSP: ε = cosθ·Ψ,
/// √N·ρ̃_cb = −sinθ·Ψ, Φ = 0.
pub fn adiabatic_project(psi: &[Complex64], theta: f64, atoms_n: f64, k0: f64, k_c: f64, z_grid: &[f64]) -> Result<FieldPair> {
    check_angle(theta)?;
    check_lengths(psi.len(), psi.len(), z_grid.len())?;
    let (s, c) = theta.sin_cos();
    let root_n = atoms_n.sqrt();
    let epsilon = psi.iter().map(|&p| p * c).collect();
    let rho_cb = psi
        .iter()
        .zip(z_grid)
        .map(|(&p, &z)| -p * s / root_n * phase(k0, k_c, z).conj())
        .collect();
    Ok(FieldPair {
        epsilon,
        rho_cb,
        z_grid: z_grid.to_vec(),
        k0,
        k_c,
    })
}

/// Estimated |Φ|/|cosθ·Ψ| = (|gΔ|/Ω²)·(g|ε_peak|/Ω)².
pub fn bsp_residual(medium: &MediumParams, probe: &ProbeSpec, omega_rabi: f64, eps_peak: f64) -> Result<f64> {
    if !(omega_rabi > 0.0) {
        return Err(Error::domain(format!("Rabi frequency must be > 0, got {omega_rabi}")));
    }
    let om2 = omega_rabi * omega_rabi;
    let ratio = medium.g * eps_peak.abs() / omega_rabi;
    Ok((medium.g * probe.detuning).abs() / om2 * ratio * ratio)
}

/// Adiabatic parameter ε_ad = 1/(g√N·T).
pub fn adiabaticity(medium: &MediumParams, characteristic_time: f64) -> Result<f64> {
    if !(characteristic_time > 0.0) {
        return Err(Error::domain(format!("characteristic time must be > 0, got {characteristic_time}")));
    }
    Ok(1.0 / (medium.collective_coupling() * characteristic_time))
}
