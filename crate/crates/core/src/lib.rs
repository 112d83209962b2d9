//! Cross sections for antihydrogen positive-ion formation in
//! positronium–antihydrogen charge exchange inside a Debye plasma,
//! Ps(nl) + H̄(1s) → H̄⁺(1s²) + e⁻, in the Coulomb-modified eikonal
//! approximation using the prior-form transition amplitude.
//!
//! All internal quantities are in Hartree atomic units. Energies cross
//! the public boundary in eV where noted.

pub mod amplitude;
pub mod error;
pub mod qmc;
pub mod quad;
pub mod sampler;
pub mod specfun;
pub mod states;
pub mod xsec;

pub use error::{Error, Result};

/// Hartree energy in eV.
pub const HARTREE_EV: f64 = 27.2114;
