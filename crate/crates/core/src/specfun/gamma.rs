use std::f64::consts::PI;

use super::Cplx;
use crate::error::{Error, Result};

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_pole(z: Cplx) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// ln Γ(z) for Re z >= 1/2 (Lanczos).
fn ln_gamma_right(z: Cplx) -> Cplx {
    let z = z - 1.0;
    let mut series = Cplx::new(LANCZOS_P[0], 0.0);
    for (k, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        series += p / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// Principal-branch-free log gamma: the imaginary part is continuous along
/// paths in the right half-plane but is not reduced to (-pi, pi].
pub fn ln_cgamma(z: Cplx) -> Result<Cplx> {
    if is_pole(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let s = (PI * z).sin();
        Ok(Cplx::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// Complex gamma function.
pub fn cgamma(z: Cplx) -> Result<Cplx> {
    if is_pole(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// Reciprocal gamma function; entire, zero at the non-positive integers.
pub fn rgamma(z: Cplx) -> Cplx {
    if is_pole(z) {
        return Cplx::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}
