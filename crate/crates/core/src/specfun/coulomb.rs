use std::f64::consts::PI;

use super::{cgamma, hyp1f1_b1, Cplx};
use crate::error::{Error, Result};

/// Points with r + z below this (a.u.) sit on the negative z-axis, where the
/// eikonal logarithm is singular; they are rejected.
pub const EPS_GEOM: f64 = 1e-12;

/// Coulomb and eikonal couplings of the ejected electron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionParams {
    /// Sommerfeld parameter α₁.
    pub alpha1: f64,
    /// Eikonal strength η₁.
    pub eta1: f64,
    /// Ejected-electron momentum (a.u.).
    pub k1: f64,
    // e^{-πα₁/2} Γ(1 - iα₁)
    norm: Cplx,
}

impl DistortionParams {
    /// α₁ = η₁ = 1/k₁.
    pub fn new(k1: f64) -> Result<Self> {
        Self::with_couplings(k1, 1.0 / k1, 1.0 / k1)
    }

    /// Arbitrary couplings; α₁ = η₁ = 0 gives the undistorted plane wave.
    pub fn with_couplings(k1: f64, alpha1: f64, eta1: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite()) {
            return Err(Error::Domain(format!("ejected momentum k1 = {k1} must be positive")));
        }
        let norm = (-PI * alpha1 / 2.0).exp() * cgamma(Cplx::new(1.0, -alpha1))?;
        Ok(DistortionParams { alpha1, eta1, k1, norm })
    }

    /// e^{-πα₁/2} Γ(1 ∓ iα₁); the lower sign when `conjugated`.
    pub fn normalization(&self, conjugated: bool) -> Cplx {
        if conjugated {
            self.norm.conj()
        } else {
            self.norm
        }
    }
}

/// Coulomb factor of the ejected electron without its plane wave:
/// e^{-πα₁/2} Γ(1 - iα₁) ₁F₁(-iα₁; 1; -i(k₁r₁ + k̄₁·r̄₁)), or its complex
/// conjugate when `conjugated` is set (the bra form of the prior amplitude).
pub fn coulomb_distortion(
    p: &DistortionParams,
    r1: [f64; 3],
    k1_vec: [f64; 3],
    conjugated: bool,
) -> Result<Cplx> {
    value_at(p, argument(p, r1, k1_vec), conjugated)
}

const STENCIL: usize = 8;

/// The Coulomb factor tabulated in s = k₁r₁ + k̄₁·r̄₁ on a uniform grid and
/// read back by 8-point Lagrange interpolation. Arguments beyond the table
/// fall through to [`coulomb_distortion`].
#[derive(Debug, Clone)]
pub struct CoulombTable {
    params: DistortionParams,
    conjugated: bool,
    inv_h: f64,
    values: Vec<Cplx>,
    // 1 / Π_{k≠j} (j − k)
    denom: [f64; STENCIL],
}

impl CoulombTable {
    /// Covers 0 ≤ s ≤ `s_max`; the step shrinks as 1/α₁ to follow the
    /// faster oscillation near the origin at strong coupling.
    pub fn new(p: &DistortionParams, conjugated: bool, s_max: f64) -> Result<Self> {
        let h = 1.0 / (16.0 * p.alpha1.abs().max(1.0));
        let n = (s_max / h).ceil() as usize + STENCIL;
        let values = (0..n)
            .map(|i| value_at(p, i as f64 * h, conjugated))
            .collect::<Result<Vec<_>>>()?;
        let mut denom = [0.0; STENCIL];
        for (j, d) in denom.iter_mut().enumerate() {
            let prod: f64 = (0..STENCIL).filter(|&k| k != j).map(|k| j as f64 - k as f64).product();
            *d = 1.0 / prod;
        }
        Ok(CoulombTable { params: *p, conjugated, inv_h: 1.0 / h, values, denom })
    }

    pub fn eval(&self, r1: [f64; 3], k1_vec: [f64; 3]) -> Result<Cplx> {
        let s = argument(&self.params, r1, k1_vec);
        let t = s * self.inv_h;
        let last = self.values.len() - STENCIL;
        let i0 = (t.floor() as usize).saturating_sub(STENCIL / 2 - 1);
        if i0 > last {
            return value_at(&self.params, s, self.conjugated);
        }
        let x = t - i0 as f64;
        let mut full = 1.0;
        for k in 0..STENCIL {
            let d = x - k as f64;
            if d == 0.0 {
                return Ok(self.values[i0 + k]);
            }
            full *= d;
        }
        let mut acc = Cplx::new(0.0, 0.0);
        for j in 0..STENCIL {
            acc += self.values[i0 + j] * (full * self.denom[j] / (x - j as f64));
        }
        Ok(acc)
    }
}

fn argument(p: &DistortionParams, r1: [f64; 3], k1_vec: [f64; 3]) -> f64 {
    let r = norm3(r1);
    let kdotr = k1_vec[0] * r1[0] + k1_vec[1] * r1[1] + k1_vec[2] * r1[2];
    (p.k1 * r + kdotr).max(0.0)
}

fn value_at(p: &DistortionParams, s: f64, conjugated: bool) -> Result<Cplx> {
    let (a, z) = if conjugated {
        (Cplx::new(0.0, p.alpha1), Cplx::new(0.0, s))
    } else {
        (Cplx::new(0.0, -p.alpha1), Cplx::new(0.0, -s))
    };
    Ok(p.normalization(conjugated) * hyp1f1_b1(a, z)?)
}

/// r + z evaluated without cancellation near the negative z-axis.
pub(crate) fn r_plus_z(v: [f64; 3]) -> f64 {
    let rho2 = v[0] * v[0] + v[1] * v[1];
    let r = (rho2 + v[2] * v[2]).sqrt();
    if v[2] >= 0.0 {
        r + v[2]
    } else {
        rho2 / (r - v[2])
    }
}

/// (r₁ + z₁)^{iη₁} (r₁₂ + z₁₂)^{-iη₁}, the eikonal phase with the polar axis
/// along k̄₁. Callers wanting the bra form take the conjugate.
pub fn eikonal_phase(r1: [f64; 3], r12: [f64; 3], eta1: f64) -> Result<Cplx> {
    let b1 = r_plus_z(r1);
    let b12 = r_plus_z(r12);
    if b1 < EPS_GEOM {
        return Err(Error::DegenerateGeometry(b1));
    }
    if b12 < EPS_GEOM {
        return Err(Error::DegenerateGeometry(b12));
    }
    Ok(Cplx::from_polar(1.0, eta1 * (b1.ln() - b12.ln())))
}

#[inline]
pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
