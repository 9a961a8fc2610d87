//! Dark-state-polariton solitons in an EIT medium of Λ-type atoms.
//!
//! The crate is organised bottom-up:
//!
//! * [`eit`] evaluates the medium coefficients (mixing angle, group velocity,
//!   dispersion, χ⁽¹⁾/χ⁽³⁾, the Kerr coefficient and the NLSE coefficients)
//!   from atomic parameters, the control field and the probe detuning.
//! * [`polariton`] rotates probe/coherence fields into dark and bright
//!   polaritons and back, and carries the adiabatic-validity estimates.
//! * [`soliton`] holds the closed-form bright/dark profiles, amplitude law
//!   and width formulas.
//! * [`nlse`] integrates the variable-coefficient NLSE with a Strang
//!   split-step spectral scheme and measures diagnostics.
//! * [`scenario`] parses scenario files, drives runs and writes datasets.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eit;
pub mod error;
pub mod nlse;
pub mod polariton;
pub mod quad;
pub mod scenario;
pub mod soliton;

pub use error::{ConfigError, Error, Result};
pub use num_complex::Complex64;

/// ln(2 + √3): the argument at which sech reaches one half.
pub const SECH_HALF_ARG: f64 = 1.316_957_896_924_816_6;
