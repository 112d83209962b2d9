use thiserror::Error;

use crate::specfun::Cplx;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error("1F1(a; 1; z) did not converge for a = {a}, z = {z}")]
    Hyp1f1NonConvergence { a: Cplx, z: Cplx },

    #[error("degenerate eikonal geometry: r + z = {0:e} is below the rejection threshold")]
    DegenerateGeometry(f64),

    #[error("invalid positronium state (n={n}, l={l}, m={m})")]
    InvalidState { n: u32, l: u32, m: i32 },

    #[error("incident energy {e_i_ev} eV is below the reaction threshold {threshold_ev:.4} eV")]
    BelowThreshold { e_i_ev: f64, threshold_ev: f64 },

    #[error("incident energy {0} eV is outside the supported range (0, 250] eV")]
    EnergyOutOfRange(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid integration spec: {0}")]
    InvalidSpec(String),

    #[error("relative error {rel_err:.3e} exceeds target {target:.3e}")]
    AccuracyNotReached { rel_err: f64, target: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
