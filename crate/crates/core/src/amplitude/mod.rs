//! Prior-form transition amplitude.
//!
//! The r̄₃ integral is done analytically ([`inner_r3_reduction`]); the
//! remaining six dimensions (r̄₂ and ρ̄ = r̄₁ − r̄₂) are integrated by randomized
//! quasi–Monte Carlo. Each Sobol point is mapped through two importance
//! densities, one concentrated where the electron sits near the antiproton and
//! one where the Ps positron does, and the two are combined with the balance
//! heuristic. [`amplitude_oracle_9d`] integrates the unreduced nine-dimensional
//! form by plain Monte Carlo for validation.

mod integrand;
mod oracle;
mod yukawa;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qmc::Sobol;
use crate::sampler::{direction, RadialSampler};
use crate::specfun::Cplx;
use crate::states::{ps_radial, ChandrasekharParams, Kinematics, PsLevel, PsState, ScreeningConfig};

pub use integrand::{inner_r3_reduction, reduced_integrand, InnerReduction, IntegrandContext, IntegrandPoint};
pub use oracle::{amplitude_oracle_9d, amplitude_oracle_9d_with, PerturbationTerms};
pub use yukawa::yukawa_exp_convolution;

/// Which estimator an [`IntegrationSpec`] drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    QuasiMonteCarlo,
    PlainMonteCarloOracle,
}

/// Phase convention of the amplitude. `Prior` uses the conjugated final state
/// as written in the prior-form matrix element; `Conjugate` evaluates the
/// complex conjugate integrand, which flips the phase of T and nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    #[default]
    Prior,
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSpec {
    pub method: Method,
    /// Total number of points over all replicates.
    pub samples: u64,
    pub seed: u64,
    pub target_rel_err: f64,
    /// Independent random shifts (quasi–Monte Carlo only).
    pub replicates: usize,
    pub convention: PhaseConvention,
}

pub const MIN_SAMPLES: u64 = 1000;
pub const MIN_REPLICATES: usize = 8;
const CHUNK: u32 = 2048;
// electron radii past this use the direct Coulomb factor
const COULOMB_TABLE_RADIUS: f64 = 120.0;

impl IntegrationSpec {
    pub fn quasi(samples: u64, seed: u64) -> Self {
        IntegrationSpec {
            method: Method::QuasiMonteCarlo,
            samples,
            seed,
            target_rel_err: 0.5,
            replicates: 16,
            convention: PhaseConvention::Prior,
        }
    }

    pub fn oracle(samples: u64, seed: u64) -> Self {
        IntegrationSpec { method: Method::PlainMonteCarloOracle, ..Self::quasi(samples, seed) }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        IntegrationSpec { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidSpec(format!("samples = {} < {MIN_SAMPLES}", self.samples)));
        }
        if self.samples > u32::MAX as u64 {
            return Err(Error::InvalidSpec(format!("samples = {} exceeds 2^32 - 1", self.samples)));
        }
        if !(self.target_rel_err > 0.0 && self.target_rel_err < 1.0) {
            return Err(Error::InvalidSpec(format!("target_rel_err = {} not in (0, 1)", self.target_rel_err)));
        }
        if self.method == Method::QuasiMonteCarlo && self.replicates < MIN_REPLICATES {
            return Err(Error::InvalidSpec(format!("replicates = {} < {MIN_REPLICATES}", self.replicates)));
        }
        Ok(())
    }
}

/// Transition amplitude with 1σ statistical errors on its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeValue {
    pub t: Cplx,
    pub std_err_re: f64,
    pub std_err_im: f64,
}

impl AmplitudeValue {
    /// Radius of the complex 1σ error.
    pub fn std_err(&self) -> f64 {
        self.std_err_re.hypot(self.std_err_im)
    }

    /// 1σ error of |t| by first-order propagation.
    pub fn modulus_std_err(&self) -> f64 {
        let m = self.t.norm();
        if m == 0.0 {
            return self.std_err();
        }
        ((self.t.re * self.std_err_re).powi(2) + (self.t.im * self.std_err_im).powi(2)).sqrt() / m
    }

    pub fn rel_err(&self) -> f64 {
        self.std_err() / self.t.norm()
    }

    fn from_estimates(estimates: &[Cplx], scale: f64) -> Self {
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<Cplx>() / n;
        let (mut vr, mut vi) = (0.0, 0.0);
        for e in estimates {
            vr += (e.re - mean.re).powi(2);
            vi += (e.im - mean.im).powi(2);
        }
        let denom = (n - 1.0) * n;
        AmplitudeValue {
            t: mean * scale,
            std_err_re: (vr / denom).sqrt() * scale.abs(),
            std_err_im: (vi / denom).sqrt() * scale.abs(),
        }
    }
}

/// −μ_f / 2π
fn prefactor(kin: &Kinematics) -> f64 {
    -kin.mu_f / (2.0 * std::f64::consts::PI)
}

/// The two importance densities over (r̄₂, ρ̄).
struct Proposals {
    rho: RadialSampler,
    // Ps positron near the antiproton
    positron: RadialSampler,
    // electron near the antiproton
    electron: RadialSampler,
}

impl Proposals {
    fn new(level: PsLevel, inner: &InnerReduction, chand: &ChandrasekharParams) -> Self {
        let n = level.n() as f64;
        let ps_decay = 1.0 / (2.0 * n);
        let rho = RadialSampler::new(move |r| r * r * ps_radial(level, r).abs(), 100.0 * n, 4096);
        let slow = chand.alpha.min(chand.beta);
        let positron = RadialSampler::new(|r| r * r * inner.envelope_r2(r), 45.0 / slow, 4096);
        // the Ps positron must stay bound to both the electron and H̄⁺, which
        // caps how far out the electron usefully goes
        let kappa = 0.5 * slow.min(ps_decay);
        let electron = RadialSampler::new(|r| r * r * inner.envelope_r1(r) * (-kappa * r).exp(), 45.0 / kappa, 4096);
        Proposals { rho, positron, electron }
    }

    #[inline]
    fn mixture_pdf(&self, r1: f64, r2: f64) -> f64 {
        self.positron.pdf3(r2) + self.electron.pdf3(r1)
    }
}

/// Amplitudes for several substates of one Ps level, sharing sample points.
/// No accuracy target is enforced.
pub fn amplitude_substates(
    kin: &Kinematics,
    states: &[PsState],
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
) -> Result<Vec<AmplitudeValue>> {
    spec.validate()?;
    if spec.method != Method::QuasiMonteCarlo {
        return Err(Error::InvalidSpec("production amplitude needs the quasi-Monte Carlo method".into()));
    }
    let Some(first) = states.first() else {
        return Ok(Vec::new());
    };
    if states.iter().any(|s| s.level != first.level) {
        return Err(Error::InvalidSpec("substates must share one Ps level".into()));
    }
    let chand = ChandrasekharParams::default();
    let ctx = IntegrandContext::new(kin, screen, &chand, spec.convention)?.with_coulomb_table(COULOMB_TABLE_RADIUS)?;
    let props = Proposals::new(first.level, &ctx.inner, &chand);
    let sobol = Sobol::new(6);

    let reps = spec.replicates;
    let per_rep = spec.samples.div_ceil(reps as u64) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let shifts: Vec<[u32; 6]> = (0..reps)
        .map(|_| {
            let mut s = [0u32; 6];
            s.iter_mut().for_each(|x| *x = rng.next_u32());
            s
        })
        .collect();

    let chunks_per_rep = per_rep.div_ceil(CHUNK);
    let tasks: Vec<(usize, u32)> = (0..reps).flat_map(|r| (0..chunks_per_rep).map(move |c| (r, c))).collect();
    let partial: Vec<Result<Vec<Cplx>>> = tasks
        .par_iter()
        .map(|&(rep, chunk)| {
            let start = chunk * CHUNK;
            let count = CHUNK.min(per_rep - start);
            eval_chunk(&ctx, &props, &sobol, states, start, count, &shifts[rep])
        })
        .collect();

    let mut sums = vec![vec![Cplx::new(0.0, 0.0); reps]; states.len()];
    for (&(rep, _), part) in tasks.iter().zip(partial) {
        for (k, v) in part?.into_iter().enumerate() {
            sums[k][rep] += v;
        }
    }
    let scale = prefactor(kin) / per_rep as f64;
    Ok(sums.iter().map(|s| AmplitudeValue::from_estimates(s, scale)).collect())
}

fn eval_chunk(
    ctx: &IntegrandContext,
    props: &Proposals,
    sobol: &Sobol,
    states: &[PsState],
    start: u32,
    count: u32,
    shift: &[u32; 6],
) -> Result<Vec<Cplx>> {
    let mut acc = vec![Cplx::new(0.0, 0.0); states.len()];
    let mut failure = None;
    sobol.for_each_shifted(start, count, shift, |u| {
        if failure.is_some() {
            return;
        }
        let (rr, _) = props.rho.sample(u[3]);
        let dr = direction(u[4], u[5]);
        let rho = [rr * dr[0], rr * dr[1], rr * dr[2]];
        let rho_pdf = props.rho.pdf3(rr);
        let d = direction(u[1], u[2]);

        // positron-centred proposal
        let (ra, _) = props.positron.sample(u[0]);
        let r2 = [ra * d[0], ra * d[1], ra * d[2]];
        let r1 = [r2[0] + rho[0], r2[1] + rho[1], r2[2] + rho[2]];
        // electron-centred proposal
        let (rb, _) = props.electron.sample(u[0]);
        let s1 = [rb * d[0], rb * d[1], rb * d[2]];
        let s2 = [s1[0] - rho[0], s1[1] - rho[1], s1[2] - rho[2]];

        for (p1, p2) in [(r1, r2), (s1, s2)] {
            let w = props.mixture_pdf(integrand::norm(p1), integrand::norm(p2)) * rho_pdf;
            match ctx.common(p1, p2) {
                Ok(Some(c)) => {
                    let c = c / w;
                    for (a, s) in acc.iter_mut().zip(states) {
                        *a += c * ctx.ps_factor(*s, rho);
                    }
                }
                Ok(None) => {}
                Err(e) => failure = Some(e),
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Prior-form amplitude T_if = −(μ_f/2π)⟨ψ_f⁻|V_i|ψ_i⟩ for one Ps substate.
pub fn amplitude(
    kin: &Kinematics,
    state: PsState,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
) -> Result<AmplitudeValue> {
    let value = amplitude_substates(kin, &[state], screen, spec)?[0];
    check_accuracy(&value, spec)?;
    Ok(value)
}

pub(crate) fn check_accuracy(value: &AmplitudeValue, spec: &IntegrationSpec) -> Result<()> {
    let rel = value.rel_err();
    if !(rel <= spec.target_rel_err) {
        return Err(Error::AccuracyNotReached { rel_err: rel, target: spec.target_rel_err });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
