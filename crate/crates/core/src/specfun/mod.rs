//! Complex special functions needed by the Coulomb-distorted final state.

mod coulomb;
mod dd;
mod gamma;
mod hyp1f1;

pub use coulomb::{coulomb_distortion, eikonal_phase, CoulombTable, DistortionParams, EPS_GEOM};
pub use gamma::{cgamma, ln_cgamma, rgamma};
pub use hyp1f1::{hyp1f1_b1, hyp1f1_b1_asymptotic, hyp1f1_b1_asymptotic_estimate, hyp1f1_b1_series, CROSSOVER};

/// Complex number used for every intermediate of the amplitude.
pub type Cplx = num_complex::Complex64;
