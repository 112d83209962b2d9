//! Single-differential and total cross sections.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::amplitude::{amplitude_substates, AmplitudeValue, IntegrationSpec};
use crate::error::{Error, Result};
use crate::qmc::derive_seed;
use crate::quad::GaussLegendre;
use crate::states::{Kinematics, PsLevel, ScreeningConfig};

pub const MIN_THETA_ORDER: usize = 8;

/// One cross-section result in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionRecord {
    pub level: PsLevel,
    /// Magnetic substate for m-resolved rows; `None` means m-averaged.
    pub m: Option<i32>,
    pub e_i_ev: f64,
    pub mu: f64,
    /// Ejection angle for SDCS rows, `None` for TCS rows.
    pub theta_deg: Option<f64>,
    pub value: f64,
    pub std_err: f64,
}

impl CrossSectionRecord {
    pub fn rel_err(&self) -> f64 {
        self.std_err / self.value
    }
}

/// (k₁/k_i)|T|² and its first-order 1σ error.
fn flux_weighted(kin: &Kinematics, amp: &AmplitudeValue) -> (f64, f64) {
    let flux = kin.k1 / kin.k_i;
    let m = amp.t.norm();
    (flux * m * m, flux * 2.0 * m * amp.modulus_std_err())
}

/// SDCS for every magnetic substate of `level`, evaluated on shared points.
pub fn sdcs_resolved(
    kin: &Kinematics,
    level: PsLevel,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
) -> Result<Vec<CrossSectionRecord>> {
    let states = level.substates();
    let amps = amplitude_substates(kin, &states, screen, spec)?;
    Ok(states
        .iter()
        .zip(&amps)
        .map(|(s, a)| {
            let (value, std_err) = flux_weighted(kin, a);
            CrossSectionRecord {
                level,
                m: Some(s.m),
                e_i_ev: kin.e_i_ev,
                mu: screen.mu,
                theta_deg: Some(kin.theta_e.to_degrees()),
                value,
                std_err,
            }
        })
        .collect())
}

/// dσ/dΩ = (k₁/k_i)|T_if|², averaged over m for the 2p level.
pub fn sdcs(
    kin: &Kinematics,
    level: PsLevel,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
) -> Result<CrossSectionRecord> {
    let resolved = sdcs_resolved(kin, level, screen, spec)?;
    Ok(average_substates(&resolved))
}

fn average_substates(resolved: &[CrossSectionRecord]) -> CrossSectionRecord {
    let n = resolved.len() as f64;
    let value = resolved.iter().map(|r| r.value).sum::<f64>() / n;
    let var = resolved.iter().map(|r| r.std_err * r.std_err).sum::<f64>() / (n * n);
    CrossSectionRecord { m: None, value, std_err: var.sqrt(), ..resolved[0] }
}

/// 2π ∫ f(θ) sinθ dθ by Gauss–Legendre in cosθ.
pub fn solid_angle_integral<F: FnMut(f64) -> f64>(order: usize, mut f: F) -> f64 {
    let gl = GaussLegendre::new(order);
    2.0 * PI * gl.integrate(-1.0, 1.0, |x| f(x.clamp(-1.0, 1.0).acos()))
}

/// Total cross section with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcsResult {
    /// `std_err` combines `stat_err` and `quad_err` in quadrature.
    pub record: CrossSectionRecord,
    pub stat_err: f64,
    /// Difference from the half-order rule.
    pub quad_err: f64,
    /// The half-order rule's value.
    pub coarse: f64,
}

/// σ = 2π ∫₀^π (dσ/dΩ) sinθ dθ.
pub fn tcs(
    e_i_ev: f64,
    level: PsLevel,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
    n_theta: usize,
    eps_hplus: Option<f64>,
) -> Result<CrossSectionRecord> {
    Ok(tcs_detailed(e_i_ev, level, screen, spec, n_theta, eps_hplus)?.record)
}

pub fn tcs_detailed(
    e_i_ev: f64,
    level: PsLevel,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
    n_theta: usize,
    eps_hplus: Option<f64>,
) -> Result<TcsResult> {
    if n_theta < MIN_THETA_ORDER {
        return Err(Error::InvalidSpec(format!("n_theta = {n_theta} < {MIN_THETA_ORDER}")));
    }
    // surfaces the threshold error before any integration
    Kinematics::new(e_i_ev, level, 0.0, eps_hplus)?;

    let (fine, fine_var) = angular_rule(e_i_ev, level, screen, spec, n_theta, 0, eps_hplus)?;
    let (coarse, _) = angular_rule(e_i_ev, level, screen, spec, n_theta / 2, n_theta as u64, eps_hplus)?;
    let stat_err = fine_var.sqrt();
    let quad_err = (fine - coarse).abs();
    Ok(TcsResult {
        record: CrossSectionRecord {
            level,
            m: None,
            e_i_ev,
            mu: screen.mu,
            theta_deg: None,
            value: fine,
            std_err: stat_err.hypot(quad_err),
        },
        stat_err,
        quad_err,
        coarse,
    })
}

fn angular_rule(
    e_i_ev: f64,
    level: PsLevel,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
    order: usize,
    seed_offset: u64,
    eps_hplus: Option<f64>,
) -> Result<(f64, f64)> {
    let gl = GaussLegendre::new(order);
    let nodes: Vec<(f64, f64)> = gl.nodes.iter().copied().zip(gl.weights.iter().copied()).collect();
    let values: Vec<Result<(f64, f64)>> = nodes
        .par_iter()
        .enumerate()
        .map(|(j, &(x, w))| {
            let kin = Kinematics::new(e_i_ev, level, x.acos(), eps_hplus)?;
            let node_spec = spec.with_seed(derive_seed(spec.seed, seed_offset + j as u64));
            let r = sdcs(&kin, level, screen, &node_spec)?;
            Ok((2.0 * PI * w * r.value, (2.0 * PI * w * r.std_err).powi(2)))
        })
        .collect();
    let mut total = 0.0;
    let mut var = 0.0;
    for v in values {
        let (t, e) = v?;
        total += t;
        var += e;
    }
    Ok((total, var))
}
