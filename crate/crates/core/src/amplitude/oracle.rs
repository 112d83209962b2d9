use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::integrand::{dot, norm};
use super::{check_accuracy, prefactor, AmplitudeValue, IntegrationSpec, Method, PhaseConvention};
use crate::error::{Error, Result};
use crate::qmc::derive_seed;
use crate::sampler::direction;
use crate::specfun::{coulomb_distortion, eikonal_phase, Cplx, DistortionParams};
use crate::states::{
    hbar_wavefunction, hplus_wavefunction, ps_wavefunction, ChandrasekharParams, Kinematics, PsState,
    ScreeningConfig,
};

/// Coefficients of the four screened interactions in the prior perturbation
/// V_i = e^{-μr₁}/r₁ − e^{-μr₂}/r₂ − e^{-μr₁₃}/r₁₃ + e^{-μr₂₃}/r₂₃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationTerms {
    pub antiproton_electron: f64,
    pub antiproton_positron: f64,
    pub electron_positron: f64,
    pub positron_positron: f64,
}

impl Default for PerturbationTerms {
    fn default() -> Self {
        PerturbationTerms {
            antiproton_electron: 1.0,
            antiproton_positron: -1.0,
            electron_positron: -1.0,
            positron_positron: 1.0,
        }
    }
}

impl PerturbationTerms {
    pub fn none() -> Self {
        PerturbationTerms {
            antiproton_electron: 0.0,
            antiproton_positron: 0.0,
            electron_positron: 0.0,
            positron_positron: 0.0,
        }
    }
}

const CHUNK: u64 = 8192;

/// Gamma(k, rate) radius with integer k, and its 3-D density.
struct GammaRadial {
    k: u32,
    rate: f64,
    norm: f64,
}

impl GammaRadial {
    fn new(k: u32, rate: f64) -> Self {
        let fact: f64 = (1..k).map(|i| i as f64).product();
        GammaRadial { k, rate, norm: rate.powi(k as i32) / fact }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let mut p = 1.0;
        for _ in 0..self.k {
            p *= 1.0 - rng.gen::<f64>();
        }
        -p.ln() / self.rate
    }

    fn pdf3(&self, r: f64) -> f64 {
        self.norm * r.powi(self.k as i32 - 1) * (-self.rate * r).exp() / (4.0 * PI * r * r)
    }
}

/// Plain Monte Carlo over r̄₁, r̄₂, r̄₃ of the unreduced prior-form integrand.
pub fn amplitude_oracle_9d(
    kin: &Kinematics,
    state: PsState,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
) -> Result<AmplitudeValue> {
    let value = amplitude_oracle_9d_with(kin, state, screen, spec, &PerturbationTerms::default())?;
    check_accuracy(&value, spec)?;
    Ok(value)
}

/// As [`amplitude_oracle_9d`] with adjustable perturbation terms and no
/// accuracy target.
pub fn amplitude_oracle_9d_with(
    kin: &Kinematics,
    state: PsState,
    screen: &ScreeningConfig,
    spec: &IntegrationSpec,
    terms: &PerturbationTerms,
) -> Result<AmplitudeValue> {
    spec.validate()?;
    if spec.method != Method::PlainMonteCarloOracle {
        return Err(Error::InvalidSpec("oracle needs the plain Monte Carlo method".into()));
    }
    let chand = ChandrasekharParams::default();
    let dist = DistortionParams::new(kin.k1)?;
    let n = state.n() as f64;
    // exponential proposals: loosely bound positron, Ps relative motion, H̄ positron
    let r2_law = GammaRadial::new(2, chand.alpha.min(chand.beta));
    let rho_law = GammaRadial::new(3, 1.0 / (2.0 * n));
    let r3_law = GammaRadial::new(2, 1.0 + chand.alpha.min(chand.beta));
    let ki = kin.ki_vec();
    let k1 = kin.k1_vec();
    let mu = screen.mu;
    let yukawa = |r: f64| (-mu * r).exp() / r;

    let chunks = spec.samples.div_ceil(CHUNK);
    let partial: Vec<Result<(Cplx, f64, f64, u64)>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, chunk));
            let count = CHUNK.min(spec.samples - chunk * CHUNK);
            let mut sum = Cplx::new(0.0, 0.0);
            let (mut sq_re, mut sq_im) = (0.0, 0.0);
            for _ in 0..count {
                let ra = r2_law.sample(&mut rng);
                let da = direction(rng.gen(), rng.gen());
                let rr = rho_law.sample(&mut rng);
                let dr = direction(rng.gen(), rng.gen());
                let rc = r3_law.sample(&mut rng);
                let dc = direction(rng.gen(), rng.gen());
                let r2 = scale(da, ra);
                let rho = scale(dr, rr);
                let r3 = scale(dc, rc);
                let r1 = add(r2, rho);
                let pdf = r2_law.pdf3(ra) * rho_law.pdf3(rr) * r3_law.pdf3(rc);

                let v = terms.antiproton_electron * yukawa(norm(r1))
                    + terms.antiproton_positron * yukawa(ra)
                    + terms.electron_positron * yukawa(norm(sub(r1, r3)))
                    + terms.positron_positron * yukawa(norm(sub(r2, r3)));
                if v == 0.0 {
                    continue;
                }
                let eik = match eikonal_phase(r1, rho, dist.eta1) {
                    Ok(e) => e.conj(),
                    Err(Error::DegenerateGeometry(_)) => continue,
                    Err(e) => return Err(e),
                };
                let bound = hplus_wavefunction(&chand, ra, rc) * hbar_wavefunction(r3);
                let coulomb = coulomb_distortion(&dist, r1, k1, true)?;
                let phase = 0.5 * dot(ki, add(r1, r2)) - dot(k1, r1);
                let mut f = coulomb * eik * Cplx::from_polar(bound * v, phase) * ps_wavefunction(state, rho) / pdf;
                if spec.convention == PhaseConvention::Conjugate {
                    f = f.conj();
                }
                sum += f;
                sq_re += f.re * f.re;
                sq_im += f.im * f.im;
            }
            Ok((sum, sq_re, sq_im, count))
        })
        .collect();

    let mut sum = Cplx::new(0.0, 0.0);
    let (mut sq_re, mut sq_im) = (0.0, 0.0);
    let mut total = 0u64;
    for p in partial {
        let (s, qr, qi, c) = p?;
        sum += s;
        sq_re += qr;
        sq_im += qi;
        total += c;
    }
    let nf = total as f64;
    let mean = sum / nf;
    let var_re = (sq_re / nf - mean.re * mean.re).max(0.0) * nf / (nf - 1.0);
    let var_im = (sq_im / nf - mean.im * mean.im).max(0.0) * nf / (nf - 1.0);
    let s = prefactor(kin);
    Ok(AmplitudeValue {
        t: mean * s,
        std_err_re: (var_re / nf).sqrt() * s.abs(),
        std_err_im: (var_im / nf).sqrt() * s.abs(),
    })
}

#[inline]
fn scale(d: [f64; 3], r: f64) -> [f64; 3] {
    [d[0] * r, d[1] * r, d[2] * r]
}

#[inline]
fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
