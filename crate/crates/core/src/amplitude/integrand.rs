use std::f64::consts::PI;

use super::yukawa::convolution;
use super::PhaseConvention;
use crate::error::{Error, Result};
use crate::specfun::{coulomb_distortion, eikonal_phase, CoulombTable, Cplx, DistortionParams};
use crate::states::{ps_wavefunction, ChandrasekharParams, Kinematics, PsState, ScreeningConfig};

/// Analytic r̄₃ integral of Φ*_H̄⁺(r̄₂, r̄₃) V_i φ_H̄(r̄₃).
///
/// Each orbital product e^{-a r₂} e^{-(b+1) r₃} turns the r̄₃-dependent part
/// of V_i into the static potential U_c(r) = (8π/c³) e^{-μr}/r − J(c, μ, r)
/// of a neutral-ish exponential cloud, so the result depends only on |r̄₁|
/// and |r̄₂|: Σ e^{-a r₂} [U_c(r₁) − U_c(r₂)] times the normalization.
#[derive(Debug, Clone, Copy)]
pub struct InnerReduction {
    mu: f64,
    // (a, c, 8π/c³) for the two orbital orderings
    terms: [(f64, f64, f64); 2],
    prefactor: f64,
}

impl InnerReduction {
    pub fn new(screen: &ScreeningConfig, chand: &ChandrasekharParams) -> Self {
        let term = |a: f64, b: f64| {
            let c = b + 1.0;
            (a, c, 8.0 * PI / (c * c * c))
        };
        InnerReduction {
            mu: screen.mu,
            terms: [term(chand.alpha, chand.beta), term(chand.beta, chand.alpha)],
            prefactor: chand.norm / (4.0 * PI * PI.sqrt()),
        }
    }

    /// U_c(r): screened potential of the normalized-to-8π/c³ cloud e^{-c r'}
    /// subtracted from a point charge of the same weight.
    #[inline]
    fn cloud_potential(&self, c: f64, weight: f64, r: f64) -> f64 {
        weight * (-self.mu * r).exp() / r - convolution(c, self.mu, r)
    }

    #[inline]
    pub fn eval(&self, r1: f64, r2: f64) -> f64 {
        let mut acc = 0.0;
        for &(a, c, w) in &self.terms {
            acc += (-a * r2).exp() * (self.cloud_potential(c, w, r1) - self.cloud_potential(c, w, r2));
        }
        self.prefactor * acc
    }

    /// Magnitude envelope in r₂ of the orbital-weighted cloud potentials,
    /// Σ e^{-a r} |U_c(r)|, used to shape importance densities.
    pub(crate) fn envelope_r2(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(a, c, w)| (-a * r).exp() * self.cloud_potential(c, w, r).abs())
            .sum()
    }

    /// Σ |U_c(r)|, the r₁ envelope.
    pub(crate) fn envelope_r1(&self, r: f64) -> f64 {
        self.terms.iter().map(|&(_, c, w)| self.cloud_potential(c, w, r).abs()).sum()
    }
}

/// Exact r̄₃ integral of the prior-form perturbation against the H̄⁺ and H̄
/// orbitals at fixed electron (r̄₁) and Ps-positron (r̄₂) positions.
pub fn inner_r3_reduction(
    r1: [f64; 3],
    r2: [f64; 3],
    screen: &ScreeningConfig,
    chand: &ChandrasekharParams,
) -> Result<f64> {
    if !(chand.alpha > 0.0 && chand.beta > 0.0) {
        return Err(Error::Domain("orbital exponents must be positive".into()));
    }
    Ok(InnerReduction::new(screen, chand).eval(norm(r1), norm(r2)))
}

/// Everything the six-dimensional integrand needs for one collision geometry.
#[derive(Debug, Clone)]
pub struct IntegrandContext {
    pub kin: Kinematics,
    pub distortion: DistortionParams,
    pub convention: PhaseConvention,
    ki: [f64; 3],
    k1: [f64; 3],
    pub(crate) inner: InnerReduction,
    table: Option<CoulombTable>,
}

impl IntegrandContext {
    pub fn new(
        kin: &Kinematics,
        screen: &ScreeningConfig,
        chand: &ChandrasekharParams,
        convention: PhaseConvention,
    ) -> Result<Self> {
        Ok(IntegrandContext {
            kin: *kin,
            distortion: DistortionParams::new(kin.k1)?,
            convention,
            ki: kin.ki_vec(),
            k1: kin.k1_vec(),
            inner: InnerReduction::new(screen, chand),
            table: None,
        })
    }

    /// Tabulates the Coulomb factor for electron radii up to `r_max`, for
    /// callers that evaluate many points at one geometry.
    pub fn with_coulomb_table(mut self, r_max: f64) -> Result<Self> {
        self.table = Some(CoulombTable::new(&self.distortion, true, 2.0 * self.kin.k1 * r_max)?);
        Ok(self)
    }

    /// Replaces the Coulomb and eikonal couplings; zero couplings give the
    /// plane-wave Born integrand.
    pub fn with_couplings(mut self, alpha1: f64, eta1: f64) -> Result<Self> {
        self.distortion = DistortionParams::with_couplings(self.kin.k1, alpha1, eta1)?;
        self.table = None;
        Ok(self)
    }

    /// Integrand without the Ps orbital. `Ok(None)` marks a rejected point on
    /// the negative z-axis.
    pub fn common(&self, r1: [f64; 3], r2: [f64; 3]) -> Result<Option<Cplx>> {
        match self.common_checked(r1, r2) {
            Ok(v) => Ok(Some(v)),
            Err(Error::DegenerateGeometry(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn common_checked(&self, r1: [f64; 3], r2: [f64; 3]) -> Result<Cplx> {
        let r12 = [r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]];
        let eik = eikonal_phase(r1, r12, self.distortion.eta1)?.conj();
        let inner = self.inner.eval(norm(r1), norm(r2));
        if inner == 0.0 {
            return Ok(Cplx::new(0.0, 0.0));
        }
        let coulomb = match &self.table {
            Some(t) => t.eval(r1, self.k1)?,
            None => coulomb_distortion(&self.distortion, r1, self.k1, true)?,
        };
        // e^{i(k̄_i·R̄ − k̄₁·r̄₁)}, R̄ = (r̄₁ + r̄₂)/2
        let phase = 0.5 * dot(self.ki, [r1[0] + r2[0], r1[1] + r2[1], r1[2] + r2[2]]) - dot(self.k1, r1);
        let value = coulomb * eik * Cplx::from_polar(inner, phase);
        Ok(match self.convention {
            PhaseConvention::Prior => value,
            PhaseConvention::Conjugate => value.conj(),
        })
    }

    /// Full integrand for one Ps substate.
    pub fn eval(&self, r1: [f64; 3], r2: [f64; 3], state: PsState) -> Result<Cplx> {
        let rho = [r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]];
        Ok(match self.common(r1, r2)? {
            Some(c) => c * self.ps_factor(state, rho),
            None => Cplx::new(0.0, 0.0),
        })
    }

    #[inline]
    pub(crate) fn ps_factor(&self, state: PsState, rho: [f64; 3]) -> Cplx {
        let phi = ps_wavefunction(state, rho);
        match self.convention {
            PhaseConvention::Prior => phi,
            PhaseConvention::Conjugate => phi.conj(),
        }
    }
}

/// Electron position r̄₁ and Ps-positron position r̄₂ (a.u.); r̄₃ is carried
/// only by the nine-dimensional oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandPoint {
    pub r1: [f64; 3],
    pub r2: [f64; 3],
    pub r3: [f64; 3],
}

/// Prior-form integrand after the analytic r̄₃ integration: conjugated Coulomb
/// factor × plane waves × conjugated eikonal phase × inner reduction × φ_Ps.
pub fn reduced_integrand(
    p: &IntegrandPoint,
    kin: &Kinematics,
    screen: &ScreeningConfig,
    state: PsState,
    convention: PhaseConvention,
) -> Result<Cplx> {
    let ctx = IntegrandContext::new(kin, screen, &ChandrasekharParams::default(), convention)?;
    let rho = [p.r1[0] - p.r2[0], p.r1[1] - p.r2[1], p.r1[2] - p.r2[2]];
    Ok(ctx.common_checked(p.r1, p.r2)? * ctx.ps_factor(state, rho))
}

#[inline]
pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(v: [f64; 3]) -> f64 {
    dot(v, v).sqrt()
}
