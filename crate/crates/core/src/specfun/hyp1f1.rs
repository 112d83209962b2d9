//! Kummer's function ₁F₁(a; 1; z) for complex a and z.
//!
//! Small |z| uses the Maclaurin series (summed in double-double once the
//! terms start to cancel), large |z| the two-term asymptotic expansion.
//! The asymptotic branch needs |z| well beyond |a|²; when it cannot reach
//! tolerance the extended-precision series is used up to `SERIES_LIMIT`.

use std::f64::consts::PI;

use super::dd::CDd;
use super::gamma::rgamma;
use super::Cplx;
use crate::error::{Error, Result};

/// |z| at which evaluation switches from the series to the asymptotic form.
pub const CROSSOVER: f64 = 30.0;

// Largest |z| for which the double-double series still holds ~1e-10.
const SERIES_LIMIT: f64 = 60.0;
// Below this |z| the plain f64 series loses at most ~3 digits.
const PLAIN_LIMIT: f64 = 8.0;
const ASYMPTOTIC_TOL: f64 = 1e-11;
const MAX_TERMS: usize = 4000;

/// Maclaurin series Σ (a)ₙ zⁿ / (n!)².
pub fn hyp1f1_b1_series(a: Cplx, z: Cplx) -> Result<Cplx> {
    if z.norm() < PLAIN_LIMIT {
        series_f64(a, z)
    } else {
        series_dd(a, z)
    }
}

fn series_f64(a: Cplx, z: Cplx) -> Result<Cplx> {
    let mut term = Cplx::new(1.0, 0.0);
    let mut sum = term;
    let zn = z.norm();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * z / ((nf + 1.0) * (nf + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && nf > zn {
            return Ok(sum);
        }
        if term.re == 0.0 && term.im == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Hyp1f1NonConvergence { a, z })
}

fn series_dd(a: Cplx, z: Cplx) -> Result<Cplx> {
    let mut term = CDd::from_c(Cplx::new(1.0, 0.0));
    let mut sum = term;
    let zn = z.norm();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term = term.mul_c(a + nf).mul_c(z).div_f64((nf + 1.0) * (nf + 1.0));
        sum = sum + term;
        let t = term.norm_f64();
        if t == 0.0 || (nf > zn && t <= 1e-20 * sum.norm_f64()) {
            return Ok(sum.to_c());
        }
    }
    Err(Error::Hyp1f1NonConvergence { a, z })
}

/// Sums Σ (p)ₛ (p)ₛ / s! wˢ until the terms drop below tolerance, or stops
/// at the smallest term once the term ratio exceeds one and keeps growing.
/// Returns the sum and the magnitude of the last term kept.
fn asymptotic_sum(p: Cplx, w: Cplx) -> (Cplx, f64) {
    let mut term = Cplx::new(1.0, 0.0);
    let mut sum = term;
    let mut last = 1.0;
    let mut prev_ratio = f64::INFINITY;
    for s in 0..MAX_TERMS {
        let sf = s as f64;
        let factor = (p + sf) * (p + sf) * w / (sf + 1.0);
        let ratio = factor.norm();
        if ratio == 0.0 {
            return (sum, 0.0);
        }
        if ratio > 1.0 && ratio > prev_ratio {
            return (sum, last);
        }
        prev_ratio = ratio;
        term *= factor;
        sum += term;
        last = term.norm();
        if last <= 1e-17 * sum.norm() {
            return (sum, last);
        }
    }
    (sum, last)
}

/// Large-|z| expansion
/// e^z z^{a-1}/Γ(a) Σ ((1-a)ₛ)²/s! z^{-s} + e^{±iπa} z^{-a}/Γ(1-a) Σ ((a)ₛ)²/s! (-z)^{-s},
/// with the upper sign for Im z ≥ 0. Fails unless the truncation error is
/// below 1e-11 relative.
pub fn hyp1f1_b1_asymptotic(a: Cplx, z: Cplx) -> Result<Cplx> {
    let (value, err) = hyp1f1_b1_asymptotic_estimate(a, z);
    if !(value.re.is_finite() && value.im.is_finite()) || err > ASYMPTOTIC_TOL * value.norm() {
        return Err(Error::Hyp1f1NonConvergence { a, z });
    }
    Ok(value)
}

/// The optimally truncated expansion and a bound on its truncation error.
pub fn hyp1f1_b1_asymptotic_estimate(a: Cplx, z: Cplx) -> (Cplx, f64) {
    let ln_z = z.ln();
    let one = Cplx::new(1.0, 0.0);
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };

    let pref1 = (z + (a - 1.0) * ln_z).exp() * rgamma(a);
    let pref2 = (Cplx::new(0.0, sign * PI) * a - a * ln_z).exp() * rgamma(one - a);

    let (s1, last1) = asymptotic_sum(one - a, one / z);
    let (s2, last2) = asymptotic_sum(a, -one / z);

    let value = pref1 * s1 + pref2 * s2;
    (value, pref1.norm() * last1 + pref2.norm() * last2)
}

/// ₁F₁(a; 1; z).
pub fn hyp1f1_b1(a: Cplx, z: Cplx) -> Result<Cplx> {
    let zn = z.norm();
    if zn == 0.0 {
        return Ok(Cplx::new(1.0, 0.0));
    }
    if zn < CROSSOVER {
        return hyp1f1_b1_series(a, z);
    }
    match hyp1f1_b1_asymptotic(a, z) {
        Ok(v) => Ok(v),
        Err(_) if zn <= SERIES_LIMIT => series_dd(a, z),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Cplx, b: Cplx) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn trivial_arguments() {
        let one = Cplx::new(1.0, 0.0);
        assert_eq!(hyp1f1_b1(Cplx::new(0.0, 0.0), Cplx::new(3.0, -2.0)).unwrap(), one);
        assert_eq!(hyp1f1_b1(Cplx::new(0.0, 0.5), Cplx::new(0.0, 0.0)).unwrap(), one);
        // a = 0 also terminates the asymptotic form
        let v = hyp1f1_b1(Cplx::new(0.0, 0.0), Cplx::new(0.0, 80.0)).unwrap();
        assert!(rel(v, one) < 1e-14);
    }

    #[test]
    fn a_equal_one_is_exponential() {
        // ₁F₁(1; 1; z) = e^z
        for z in [Cplx::new(0.0, 5.0), Cplx::new(0.0, 20.0), Cplx::new(0.0, 45.0), Cplx::new(-3.0, 1.0)] {
            let v = hyp1f1_b1(Cplx::new(1.0, 0.0), z).unwrap();
            assert!(rel(v, z.exp()) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn a_equal_minus_one_is_laguerre() {
        // ₁F₁(-1; 1; z) = 1 - z
        for z in [Cplx::new(0.0, 12.0), Cplx::new(0.0, 55.0), Cplx::new(0.0, -300.0)] {
            let v = hyp1f1_b1(Cplx::new(-1.0, 0.0), z).unwrap();
            assert!(rel(v, 1.0 - z) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn double_double_series_beats_plain_series() {
        let a = Cplx::new(0.0, 1.0);
        let z = Cplx::new(0.0, 28.0);
        let accurate = series_dd(a, z).unwrap();
        let asym = hyp1f1_b1_asymptotic(a, z).unwrap();
        assert!(rel(accurate, asym) < 1e-9);
    }

    #[test]
    fn large_sommerfeld_parameter_falls_back_to_series() {
        let a = Cplx::new(0.0, 10.0);
        let z = Cplx::new(0.0, 32.0);
        assert!(hyp1f1_b1_asymptotic(a, z).is_err());
        let v = hyp1f1_b1(a, z).unwrap();
        let k = z.exp() * hyp1f1_b1(1.0 - a, -z).unwrap();
        assert!(rel(v, k) < 1e-8);
    }
}
