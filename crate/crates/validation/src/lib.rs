//! Brute-force quadrature oracles. Each one integrates the defining
//! expression numerically and shares no closed form with `psbar-core`.

use std::f64::consts::PI;

use psbar_core::quad::{geometric_panels, GaussLegendre};
use psbar_core::states::{hbar_wavefunction, ps_wavefunction, ChandrasekharParams, PsState};

/// ∫₀^∞ f(r) r² dr on geometric panels starting at width `first`.
pub fn radial_integral<F: Fn(f64) -> f64>(f: F, first: f64, span: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    gl.integrate_panels(&geometric_panels(0.0, first, span), |r| r * r * f(r))
}

/// ⟨a|b⟩ by radial Gauss–Legendre × polar Gauss–Legendre × azimuthal trapezoid.
pub fn ps_overlap(a: PsState, b: PsState) -> f64 {
    let gl = GaussLegendre::new(24);
    let n_phi = 16;
    radial_integral(
        |r| {
            gl.integrate(-1.0, 1.0, |c| {
                let s = (1.0 - c * c).sqrt();
                let ring: f64 = (0..n_phi)
                    .map(|j| {
                        let phi = 2.0 * PI * j as f64 / n_phi as f64;
                        let v = [r * s * phi.cos(), r * s * phi.sin(), r * c];
                        (ps_wavefunction(a, v).conj() * ps_wavefunction(b, v)).re
                    })
                    .sum();
                ring * 2.0 * PI / n_phi as f64
            })
        },
        0.05,
        400.0,
    )
}

pub fn hbar_norm() -> f64 {
    radial_integral(|r| 4.0 * PI * hbar_wavefunction([r, 0.0, 0.0]).powi(2), 0.02, 80.0)
}

// Φ(r₂, r₃) and its radial derivatives, written out from the parameters
fn hplus_parts(p: &ChandrasekharParams, r2: f64, r3: f64) -> (f64, f64, f64) {
    let c = p.norm / (4.0 * PI);
    let u = (-p.alpha * r2 - p.beta * r3).exp();
    let v = (-p.beta * r2 - p.alpha * r3).exp();
    (c * (u + v), -c * (p.alpha * u + p.beta * v), -c * (p.beta * u + p.alpha * v))
}

// ∫∫ g(r₂, r₃) (4π)² r₂² r₃² dr₂ dr₃, inner panels split at r₃ = r₂
fn pair_integral<F: Fn(f64, f64) -> f64>(g: F) -> f64 {
    let gl = GaussLegendre::new(32);
    let outer = geometric_panels(0.0, 0.01, 120.0);
    gl.integrate_panels(&outer, |r2| {
        let mut inner = geometric_panels(0.0, 0.01, r2);
        inner.extend(geometric_panels(r2, 0.01, 120.0).into_iter().skip(1));
        let s = gl.integrate_panels(&inner, |r3| r3 * r3 * g(r2, r3));
        (4.0 * PI).powi(2) * r2 * r2 * s
    })
}

/// ⟨Φ|Φ⟩ of the two-positron ion by two-dimensional radial quadrature.
pub fn hplus_norm_quadrature(p: &ChandrasekharParams) -> f64 {
    pair_integral(|r2, r3| hplus_parts(p, r2, r3).0.powi(2))
}

/// ⟨Φ|H|Φ⟩/⟨Φ|Φ⟩ for two positrons about a fixed antiproton. Kinetic energy
/// enters as ½|∇Φ|²; for s-wave pairs the angular average of 1/r₂₃ is
/// 1/max(r₂, r₃).
pub fn two_positron_energy(p: &ChandrasekharParams) -> f64 {
    let h = pair_integral(|r2, r3| {
        let (f, d2, d3) = hplus_parts(p, r2, r3);
        0.5 * (d2 * d2 + d3 * d3) + (1.0 / r2.max(r3) - 1.0 / r2 - 1.0 / r3) * f * f
    });
    h / hplus_norm_quadrature(p)
}

fn adaptive<F: Fn(f64) -> f64>(gl: &GaussLegendre, f: &F, a: f64, b: f64, rel: f64, depth: u32) -> f64 {
    let whole = gl.integrate(a, b, f);
    let m = 0.5 * (a + b);
    let halves = gl.integrate(a, m, f) + gl.integrate(m, b, f);
    if (whole - halves).abs() <= rel * halves.abs() || depth == 0 {
        halves
    } else {
        adaptive(gl, f, a, m, rel, depth - 1) + adaptive(gl, f, m, b, rel, depth - 1)
    }
}

/// ∫ d³r₃ Φ(r₂, r₃) φ_H̄(r₃) V(r̄₁, r̄₂, r̄₃) with
/// V = e^{-μr₁}/r₁ − e^{-μr₂}/r₂ − e^{-μr₁₃}/r₁₃ + e^{-μr₂₃}/r₂₃,
/// integrating each pair term over |r̄₃| and the polar angle about the
/// fixed particle.
pub fn direct_r3_integral(r1: [f64; 3], r2: [f64; 3], mu: f64) -> f64 {
    let chand = ChandrasekharParams::default();
    let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (a1, a2) = (norm(r1), norm(r2));
    let gl = GaussLegendre::new(10);
    let y = |x: f64| (-mu * x).exp() / x;
    let g = |r: f64| hplus_parts(&chand, a2, r).0 * hbar_wavefunction([r, 0.0, 0.0]);
    // cosθ = 1 − 2u² opens up the peak at θ = 0
    let shell = |a: f64, r: f64| {
        let f = |u: f64| {
            let d2 = 4.0 * r * a * u * u + (r - a) * (r - a);
            4.0 * u * y(d2.sqrt())
        };
        0.5 * adaptive(&gl, &f, 0.0, 1.0, 1e-12, 30)
    };
    let radial = |h: &dyn Fn(f64) -> f64, split: f64| {
        let f = |r: f64| 4.0 * PI * r * r * g(r) * h(r);
        adaptive(&gl, &f, 0.0, split, 1e-11, 30) + adaptive(&gl, &f, split, 80.0, 1e-11, 30)
    };
    let overlap = radial(&|_| 1.0, 1.0);
    (y(a1) - y(a2)) * overlap - radial(&|r| shell(a1, r), a1) + radial(&|r| shell(a2, r), a2)
}
