use std::f64::consts::PI;

use crate::error::{Error, Result};

/// J(c, μ, x) = ∫ e^{-c r'} e^{-μ|x̄ - r̄'|} / |x̄ - r̄'| d³r'.
///
/// With δ = c − μ and u = δx the closed form is
/// J = −4π/(c+μ) · [x e^{-μx} ψ(u) − e^{-μx} φ(u)/(c+μ)],
/// φ(u) = (1 − e^{-u})/u, ψ(u) = (e^{-u} − φ(u))/u, which stays finite for
/// c → μ and x → 0.
pub fn yukawa_exp_convolution(c: f64, mu: f64, x: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("decay constant c = {c} must be positive")));
    }
    if !(mu >= 0.0) || !(x >= 0.0) {
        return Err(Error::Domain(format!("need mu >= 0 and x >= 0, got mu = {mu}, x = {x}")));
    }
    Ok(convolution(c, mu, x))
}

#[inline]
pub(crate) fn convolution(c: f64, mu: f64, x: f64) -> f64 {
    let s = c + mu;
    let u = (c - mu) * x;
    let (p, q) = if u.abs() < 0.5 {
        let e_mu = (-mu * x).exp();
        let (phi, psi) = phi_psi_series(u);
        (e_mu * phi, e_mu * psi)
    } else {
        let e_mu = (-mu * x).exp();
        let e_c = (-c * x).exp();
        let p = (e_mu - e_c) / u;
        (p, (e_c - p) / u)
    };
    -4.0 * PI / s * (x * q - p / s)
}

// φ(u) = Σ (−u)ⁿ/(n+1)!,  ψ(u) = Σ_{n≥1} (−1)ⁿ n u^{n−1}/(n+1)!
fn phi_psi_series(u: f64) -> (f64, f64) {
    let mut phi = 0.0;
    let mut psi = 0.0;
    // (−u)^n / (n+1)!
    let mut t = 1.0;
    for n in 0..24 {
        phi += t;
        let nf = n as f64;
        // ψ term n+1: (−1)^{n+1} (n+1) u^n/(n+2)!  =  −t (n+1)/(n+2)
        psi -= t * (nf + 1.0) / (nf + 2.0);
        t *= -u / (nf + 2.0);
    }
    (phi, psi)
}
