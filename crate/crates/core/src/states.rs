//! Bound states, screening configuration and collision kinematics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quad::{geometric_panels, GaussLegendre};
use crate::specfun::Cplx;
use crate::HARTREE_EV;

/// Reduced mass of positronium (a.u.).
pub const MU_PS: f64 = 0.5;
/// Bohr radius of positronium (a₀).
pub const A_PS: f64 = 2.0;
/// Initial-channel reduced mass, Ps against an infinitely heavy H̄.
pub const MU_I: f64 = 2.0;
/// Final-channel reduced mass, electron against the heavy H̄⁺.
pub const MU_F: f64 = 1.0;
/// Ground-state antihydrogen energy (a.u.).
pub const EPS_HBAR: f64 = -0.5;
/// Positron affinity of H̄ used for the default H̄⁺ energy (eV).
pub const HPLUS_AFFINITY_EV: f64 = 0.75;
/// Highest supported incident energy (eV).
pub const MAX_ENERGY_EV: f64 = 250.0;

/// Positronium level (n, l) without the magnetic label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PsLevel {
    S1,
    S2,
    P2,
    S3,
}

impl PsLevel {
    pub const ALL: [PsLevel; 4] = [PsLevel::S1, PsLevel::S2, PsLevel::P2, PsLevel::S3];

    pub fn n(self) -> u32 {
        match self {
            PsLevel::S1 => 1,
            PsLevel::S2 | PsLevel::P2 => 2,
            PsLevel::S3 => 3,
        }
    }

    pub fn l(self) -> u32 {
        match self {
            PsLevel::P2 => 1,
            _ => 0,
        }
    }

    /// All magnetic substates of the level.
    pub fn substates(self) -> Vec<PsState> {
        let l = self.l() as i32;
        (-l..=l).map(|m| PsState { level: self, m }).collect()
    }

    pub fn label(self) -> &'static str {
        match self {
            PsLevel::S1 => "1s",
            PsLevel::S2 => "2s",
            PsLevel::P2 => "2p",
            PsLevel::S3 => "3s",
        }
    }
}

impl fmt::Display for PsLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PsLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1s" => Ok(PsLevel::S1),
            "2s" => Ok(PsLevel::S2),
            "2p" => Ok(PsLevel::P2),
            "3s" => Ok(PsLevel::S3),
            other => Err(Error::Domain(format!("unknown positronium state '{other}'"))),
        }
    }
}

/// Incident positronium state with quantum labels (n, l, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PsState {
    pub level: PsLevel,
    pub m: i32,
}

impl PsState {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        let level = match (n, l) {
            (1, 0) => PsLevel::S1,
            (2, 0) => PsLevel::S2,
            (2, 1) => PsLevel::P2,
            (3, 0) => PsLevel::S3,
            _ => return Err(Error::InvalidState { n, l, m }),
        };
        if m.unsigned_abs() > l {
            return Err(Error::InvalidState { n, l, m });
        }
        Ok(PsState { level, m })
    }

    pub fn n(&self) -> u32 {
        self.level.n()
    }

    pub fn l(&self) -> u32 {
        self.level.l()
    }
}

impl From<PsLevel> for PsState {
    fn from(level: PsLevel) -> Self {
        PsState { level, m: 0 }
    }
}

/// Ps binding energy −1/(4n²) in hartree.
pub fn ps_energy(state: PsState) -> f64 {
    let n = state.n() as f64;
    -1.0 / (4.0 * n * n)
}

/// Radial function R_nl(ρ) of positronium (Bohr radius 2 a₀).
pub fn ps_radial(level: PsLevel, rho: f64) -> f64 {
    let a = A_PS;
    let x = rho / a;
    let a32 = a.powf(-1.5);
    match level {
        PsLevel::S1 => 2.0 * a32 * (-x).exp(),
        PsLevel::S2 => a32 / (2.0 * 2f64.sqrt()) * (2.0 - x) * (-x / 2.0).exp(),
        PsLevel::P2 => a32 / (2.0 * 6f64.sqrt()) * x * (-x / 2.0).exp(),
        PsLevel::S3 => 2.0 * a32 / (81.0 * 3f64.sqrt()) * (27.0 - 18.0 * x + 2.0 * x * x) * (-x / 3.0).exp(),
    }
}

/// φ_nlm(ρ̄) with complex spherical harmonics (Condon–Shortley phase).
pub fn ps_wavefunction(state: PsState, rho: [f64; 3]) -> Cplx {
    let r = (rho[0] * rho[0] + rho[1] * rho[1] + rho[2] * rho[2]).sqrt();
    match state.level {
        PsLevel::P2 => {
            // R_21(r) Y_1m = (R_21 / r) · r Y_1m, with r Y_1m polynomial.
            let a = A_PS;
            let radial_over_r = a.powf(-2.5) / (2.0 * 6f64.sqrt()) * (-r / (2.0 * a)).exp();
            let c0 = (3.0 / (4.0 * PI)).sqrt();
            let c1 = (3.0 / (8.0 * PI)).sqrt();
            let ry = match state.m {
                0 => Cplx::new(c0 * rho[2], 0.0),
                1 => Cplx::new(-c1 * rho[0], -c1 * rho[1]),
                -1 => Cplx::new(c1 * rho[0], -c1 * rho[1]),
                _ => unreachable!("PsState enforces |m| <= l"),
            };
            ry * radial_over_r
        }
        level => Cplx::new(ps_radial(level, r) / (2.0 * PI.sqrt()), 0.0),
    }
}

/// Ground-state antihydrogen orbital e^{-r}/√π.
pub fn hbar_wavefunction(r3: [f64; 3]) -> f64 {
    let r = (r3[0] * r3[0] + r3[1] * r3[1] + r3[2] * r3[2]).sqrt();
    (-r).exp() / PI.sqrt()
}

/// Debye screening of the plasma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreeningConfig {
    /// Inverse Debye length (1/a₀).
    pub mu: f64,
}

impl ScreeningConfig {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!("screening parameter mu = {mu} must be finite and >= 0")));
        }
        Ok(ScreeningConfig { mu })
    }

    pub fn unscreened() -> Self {
        ScreeningConfig { mu: 0.0 }
    }

    /// Debye length λ = 1/μ (a₀), infinite without screening.
    pub fn lambda(&self) -> f64 {
        if self.mu == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.mu
        }
    }
}

/// Two-exponent open-shell wavefunction parameters for the H̄⁺ ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChandrasekharParams {
    pub norm: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for ChandrasekharParams {
    fn default() -> Self {
        ChandrasekharParams { norm: 0.3948, alpha: 1.03925, beta: 0.28309 }
    }
}

/// Φ(r₂, r₃) = (N/4π)(e^{-αr₂-βr₃} + e^{-βr₂-αr₃}).
pub fn hplus_wavefunction(p: &ChandrasekharParams, r2: f64, r3: f64) -> f64 {
    p.norm / (4.0 * PI) * ((-p.alpha * r2 - p.beta * r3).exp() + (-p.beta * r2 - p.alpha * r3).exp())
}

/// ⟨Φ|Φ⟩ in closed form from ∫e^{-cr} d³r = 8π/c³.
pub fn hplus_norm(p: &ChandrasekharParams) -> f64 {
    let s = |c: f64| 8.0 * PI / (c * c * c);
    let pre = p.norm / (4.0 * PI);
    2.0 * pre * pre * (s(2.0 * p.alpha) * s(2.0 * p.beta) + s(p.alpha + p.beta).powi(2))
}

/// Variational energy ⟨Φ|H|Φ⟩/⟨Φ|Φ⟩ of the unscreened two-positron ion
/// with a unit central charge, by two-dimensional radial quadrature.
///
/// Both orbitals are s-waves, so only the monopole 1/max(r₂, r₃) of the
/// interparticle repulsion survives the angular integration.
pub fn hplus_variational_energy(p: &ChandrasekharParams) -> Result<f64> {
    if !(p.alpha > 0.0 && p.beta > 0.0) {
        return Err(Error::Domain("orbital exponents must be positive".into()));
    }
    let coarse = radial_energy(p, 32);
    let fine = radial_energy(p, 48);
    if (coarse - fine).abs() > 1e-10 * fine.abs() {
        return Err(Error::Quadrature(format!(
            "H̄⁺ energy unstable between orders: {coarse} vs {fine}"
        )));
    }
    Ok(fine)
}

fn radial_energy(p: &ChandrasekharParams, order: usize) -> f64 {
    let gl = GaussLegendre::new(order);
    let (a, b) = (p.alpha, p.beta);
    let slow = a.min(b);
    let span = 80.0 / slow;
    let first = 0.25 / a.max(b);

    // Φ and its radial derivatives, without normalization.
    let phi = |r2: f64, r3: f64| (-a * r2 - b * r3).exp() + (-b * r2 - a * r3).exp();
    let d2 = |r2: f64, r3: f64| -a * (-a * r2 - b * r3).exp() - b * (-b * r2 - a * r3).exp();
    let d3 = |r2: f64, r3: f64| -b * (-a * r2 - b * r3).exp() - a * (-b * r2 - a * r3).exp();

    let mut num = 0.0;
    let mut den = 0.0;
    let outer = geometric_panels(0.0, first, span);
    for w in outer.windows(2) {
        let (n_part, d_part) = {
            let mut n_acc = 0.0;
            let mut d_acc = 0.0;
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            for (&x, &wt) in gl.nodes.iter().zip(&gl.weights) {
                let r2 = mid + half * x;
                let inner = |r3: f64| {
                    let f = phi(r2, r3);
                    let kinetic = 0.5 * (d2(r2, r3).powi(2) + d3(r2, r3).powi(2));
                    let potential = f * f * (-1.0 / r2 - 1.0 / r3 + 1.0 / r2.max(r3));
                    let jac = r2 * r2 * r3 * r3;
                    ((kinetic + potential) * jac, f * f * jac)
                };
                // the repulsion has a kink at r3 = r2
                let mut n_in = 0.0;
                let mut d_in = 0.0;
                let mut edges = geometric_panels(0.0, first.min(r2), r2);
                edges.extend(geometric_panels(r2, first, span).into_iter().skip(1));
                for e in edges.windows(2) {
                    let h = 0.5 * (e[1] - e[0]);
                    let m = 0.5 * (e[1] + e[0]);
                    for (&y, &wy) in gl.nodes.iter().zip(&gl.weights) {
                        let (nv, dv) = inner(m + h * y);
                        n_in += wy * h * nv;
                        d_in += wy * h * dv;
                    }
                }
                n_acc += wt * half * n_in;
                d_acc += wt * half * d_in;
            }
            (n_acc, d_acc)
        };
        num += n_part;
        den += d_part;
    }
    num / den
}

/// Collision kinematics for one configuration, internal values in a.u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    /// Incident Ps kinetic energy (eV).
    pub e_i_ev: f64,
    pub k_i: f64,
    pub k1: f64,
    /// Angle between k̄₁ and k̄_i (radians).
    pub theta_e: f64,
    /// Azimuth of k̄_i about k̄₁ (radians); zero puts k̄_i in the x–z plane.
    pub phi_i: f64,
    pub mu_i: f64,
    pub mu_f: f64,
    pub eps_ps: f64,
    pub eps_hbar: f64,
    pub eps_hplus: f64,
}

/// Default H̄⁺ total energy: H̄(1s) plus the 0.75 eV affinity.
pub fn default_eps_hplus() -> f64 {
    EPS_HBAR - HPLUS_AFFINITY_EV / HARTREE_EV
}

/// H̄⁺ total energy (a.u.) for a given positron affinity in eV.
pub fn eps_hplus_from_affinity(affinity_ev: f64) -> f64 {
    EPS_HBAR - affinity_ev / HARTREE_EV
}

/// Reaction threshold in eV: |ε_Ps| + |ε_H̄| − |ε_H̄⁺|, floored at zero.
pub fn threshold_ev(level: PsLevel, eps_hplus: Option<f64>) -> f64 {
    let eps_hplus = eps_hplus.unwrap_or_else(default_eps_hplus);
    let eps_ps = ps_energy(level.into());
    ((eps_hplus - eps_ps - EPS_HBAR) * HARTREE_EV).max(0.0)
}

impl Kinematics {
    /// Energy conservation E₁ = E_i + ε_Ps + ε_H̄ − ε_H̄⁺ fixes the ejected
    /// momentum; `eps_hplus` overrides the default H̄⁺ energy (a.u.).
    pub fn new(e_i_ev: f64, level: PsLevel, theta_e: f64, eps_hplus: Option<f64>) -> Result<Self> {
        if !(e_i_ev > 0.0 && e_i_ev <= MAX_ENERGY_EV) {
            return Err(Error::EnergyOutOfRange(e_i_ev));
        }
        let eps_hplus = eps_hplus.unwrap_or_else(default_eps_hplus);
        let eps_ps = ps_energy(level.into());
        let e_au = e_i_ev / HARTREE_EV;
        let e1 = e_au + eps_ps + EPS_HBAR - eps_hplus;
        if e1 <= 0.0 {
            return Err(Error::BelowThreshold {
                e_i_ev,
                threshold_ev: threshold_ev(level, Some(eps_hplus)),
            });
        }
        Ok(Kinematics {
            e_i_ev,
            k_i: (2.0 * MU_I * e_au).sqrt(),
            k1: (2.0 * MU_F * e1).sqrt(),
            theta_e,
            phi_i: 0.0,
            mu_i: MU_I,
            mu_f: MU_F,
            eps_ps,
            eps_hbar: EPS_HBAR,
            eps_hplus,
        })
    }

    /// Ejected-electron kinetic energy (a.u.).
    pub fn e1(&self) -> f64 {
        self.k1 * self.k1 / (2.0 * self.mu_f)
    }

    /// k̄₁ along +z.
    pub fn k1_vec(&self) -> [f64; 3] {
        [0.0, 0.0, self.k1]
    }

    /// Rotates the collision plane about k̄₁.
    pub fn with_azimuth(self, phi_i: f64) -> Self {
        Kinematics { phi_i, ..self }
    }

    /// k̄_i at angle θ_e from k̄₁.
    pub fn ki_vec(&self) -> [f64; 3] {
        let s = self.k_i * self.theta_e.sin();
        [s * self.phi_i.cos(), s * self.phi_i.sin(), self.k_i * self.theta_e.cos()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_validation() {
        assert!(PsState::new(1, 0, 0).is_ok());
        assert!(PsState::new(2, 1, -1).is_ok());
        assert!(PsState::new(2, 1, 2).is_err());
        assert!(PsState::new(3, 1, 0).is_err());
        assert!(PsState::new(1, 0, 1).is_err());
        assert_eq!("2P".parse::<PsLevel>().unwrap(), PsLevel::P2);
        assert!("4f".parse::<PsLevel>().is_err());
    }

    #[test]
    fn energies() {
        assert_eq!(ps_energy(PsLevel::S1.into()), -0.25);
        assert_eq!(ps_energy(PsLevel::S2.into()), -0.0625);
        let e3 = ps_energy(PsLevel::S3.into());
        assert!((e3 + 1.0 / 36.0).abs() < 1e-15);
        assert!((e3 * HARTREE_EV + 0.7558).abs() < 1e-4);
    }

    #[test]
    fn wavefunction_values() {
        let v = ps_wavefunction(PsLevel::S1.into(), [0.0; 3]);
        assert!((v.re - 0.199_471_14).abs() < 1e-8);
        assert!((hbar_wavefunction([0.0; 3]) - 0.564_189_58).abs() < 1e-8);
        assert!((hbar_wavefunction([0.0, 1.0, 0.0]) - 0.207_553_75).abs() < 1e-8);
        let p = ChandrasekharParams::default();
        assert!((hplus_wavefunction(&p, 0.0, 0.0) - 0.062_834).abs() < 1e-6);
        assert!((hplus_wavefunction(&p, 0.3, 2.1) - hplus_wavefunction(&p, 2.1, 0.3)).abs() < 1e-16);
    }

    #[test]
    fn s_states_are_isotropic() {
        for level in [PsLevel::S1, PsLevel::S2, PsLevel::S3] {
            let a = ps_wavefunction(level.into(), [3.0, 0.0, 0.0]);
            let b = ps_wavefunction(level.into(), [0.0, -1.8, 2.4]);
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn p_state_angular_structure() {
        let s = |m| PsState::new(2, 1, m).unwrap();
        // m = 0 vanishes in the x-y plane, m = ±1 on the z-axis
        assert_eq!(ps_wavefunction(s(0), [1.0, 2.0, 0.0]).norm(), 0.0);
        assert_eq!(ps_wavefunction(s(1), [0.0, 0.0, 2.0]).norm(), 0.0);
        // Y_{1,-1} = -conj(Y_{1,1})
        let p = [0.3, -1.2, 0.8];
        let d = ps_wavefunction(s(-1), p) + ps_wavefunction(s(1), p).conj();
        assert!(d.norm() < 1e-16);
    }

    #[test]
    fn screening_length() {
        assert_eq!(ScreeningConfig::new(0.0).unwrap().lambda(), f64::INFINITY);
        assert!((ScreeningConfig::new(0.05).unwrap().lambda() * 0.05 - 1.0).abs() < 1e-15);
        assert!(ScreeningConfig::new(-0.1).is_err());
        assert!(ScreeningConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn thresholds() {
        assert!((threshold_ev(PsLevel::S1, None) - 6.05).abs() < 0.01);
        assert!((threshold_ev(PsLevel::S2, None) - 0.9507).abs() < 1e-3);
        assert_eq!(threshold_ev(PsLevel::S2, None), threshold_ev(PsLevel::P2, None));
        assert!(threshold_ev(PsLevel::S3, None) < 0.05);
        assert!(matches!(
            Kinematics::new(6.0, PsLevel::S1, 0.0, None),
            Err(Error::BelowThreshold { .. })
        ));
        assert!(Kinematics::new(0.01, PsLevel::S3, 0.0, None).is_ok());
    }

    #[test]
    fn incident_momentum() {
        let k = Kinematics::new(10.0, PsLevel::S1, 0.0, None).unwrap();
        assert!((k.k_i - 1.2124).abs() < 1e-4);
        assert!((k.k_i - 2.0 * (10.0 / HARTREE_EV).sqrt()).abs() < 1e-14);
        let e1 = 10.0 / HARTREE_EV - 0.25 + HPLUS_AFFINITY_EV / HARTREE_EV;
        assert!((k.e1() - e1).abs() < 1e-14);
    }

    #[test]
    fn affinity_override_shifts_e1_linearly() {
        let base = Kinematics::new(20.0, PsLevel::S2, 0.0, None).unwrap();
        for shift in [-0.01, 0.003, 0.02] {
            let k = Kinematics::new(20.0, PsLevel::S2, 0.0, Some(base.eps_hplus + shift)).unwrap();
            assert!((k.e1() - (base.e1() - shift)).abs() < 1e-13);
        }
    }

    #[test]
    fn out_of_range_energies() {
        assert!(matches!(Kinematics::new(0.0, PsLevel::S3, 0.0, None), Err(Error::EnergyOutOfRange(_))));
        assert!(matches!(Kinematics::new(251.0, PsLevel::S1, 0.0, None), Err(Error::EnergyOutOfRange(_))));
    }

    #[test]
    fn variational_energy_symmetric_in_exponents() {
        let p = ChandrasekharParams::default();
        let q = ChandrasekharParams { alpha: p.beta, beta: p.alpha, ..p };
        let (ep, eq) = (hplus_variational_energy(&p).unwrap(), hplus_variational_energy(&q).unwrap());
        assert!((ep - eq).abs() < 1e-12);
    }
}
