//! Split-step spectral integrator for the comoving-frame DSP NLSE
//!
//! ```text
//! iK(t) ∂ₜΨ + ∂²_ξ Ψ + Cₙ(t)|Ψ|²Ψ = 0
//! ```
//!
//! on a periodic ξ grid. The default [`Mode::Physical`] evolves Ψ directly;
//! [`Mode::Normalized`] evolves Ψ′ = Ψ·√(|Cₙ|/2) in t′ = ∫dt/K with the
//! explicit θ̇·P(Ψ′) perturbation, as a cross-check.

mod diagnostics;
mod grid;
mod model;
mod propagator;
mod spectral;
mod state;

pub use diagnostics::{diagnostics, Diagnostics, FitFamily, ShapeFit};
pub use grid::Grid1D;
pub use model::{CoefficientModel, ConstantModel, MediumModel, NlseSample};
pub use propagator::{lab_frame_position, Perturbation, Propagator, RunObserver, RunRecord, Snapshot};
pub use spectral::Spectral;
pub use state::{init_state, InitProfile, Mode, State};
