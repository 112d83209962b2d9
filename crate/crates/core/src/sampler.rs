//! Importance densities for three-dimensional vectors whose radial profile is
//! tabulated from an arbitrary non-negative shape.

use std::f64::consts::PI;

/// Radial density proportional to a tabulated shape h(r) on [0, r_max],
/// piecewise constant between knots r_j = r_max (j/K)². The inverse CDF is
/// exact for that piecewise density, so `pdf` is the true density of `sample`.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    knots: Vec<f64>,
    cdf: Vec<f64>,
    r_max: f64,
}

impl RadialSampler {
    pub fn new<F: Fn(f64) -> f64>(shape: F, r_max: f64, intervals: usize) -> Self {
        assert!(r_max > 0.0 && intervals >= 2);
        let knots: Vec<f64> = (0..=intervals)
            .map(|j| {
                let t = j as f64 / intervals as f64;
                r_max * t * t
            })
            .collect();
        let mut cdf = Vec::with_capacity(intervals + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for w in knots.windows(2) {
            // three-point Gauss on each interval
            let h = 0.5 * (w[1] - w[0]);
            let m = 0.5 * (w[1] + w[0]);
            let g = (0.6f64).sqrt();
            let mass = h * (5.0 * shape(m - g * h).abs() + 8.0 * shape(m).abs() + 5.0 * shape(m + g * h).abs()) / 9.0;
            acc += if mass.is_finite() { mass } else { 0.0 };
            cdf.push(acc);
        }
        assert!(acc > 0.0, "radial shape has no mass");
        for c in cdf.iter_mut() {
            *c /= acc;
        }
        RadialSampler { knots, cdf, r_max }
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Maps u ∈ (0, 1) to a radius and its radial density.
    pub fn sample(&self, u: f64) -> (f64, f64) {
        let j = match self.cdf.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
            Ok(j) => j.min(self.cdf.len() - 2),
            Err(j) => j - 1,
        };
        let (c0, c1) = (self.cdf[j], self.cdf[j + 1]);
        let (r0, r1) = (self.knots[j], self.knots[j + 1]);
        let dens = (c1 - c0) / (r1 - r0);
        let r = r0 + (u - c0) / dens;
        (r.clamp(r0, r1), dens)
    }

    /// Radial density at r.
    pub fn pdf(&self, r: f64) -> f64 {
        if !(0.0..self.r_max).contains(&r) {
            return 0.0;
        }
        let k = self.knots.len() - 1;
        let mut j = ((r / self.r_max).sqrt() * k as f64) as usize;
        j = j.min(k - 1);
        // guard against rounding at knot boundaries
        while j > 0 && r < self.knots[j] {
            j -= 1;
        }
        while j + 1 < k && r >= self.knots[j + 1] {
            j += 1;
        }
        (self.cdf[j + 1] - self.cdf[j]) / (self.knots[j + 1] - self.knots[j])
    }

    /// Density of the vector with this radial law and isotropic direction.
    pub fn pdf3(&self, r: f64) -> f64 {
        self.pdf(r) / (4.0 * PI * r * r)
    }
}

/// Unit vector from two uniforms.
#[inline]
pub fn direction(u_cos: f64, u_phi: f64) -> [f64; 3] {
    let c = 1.0 - 2.0 * u_cos;
    let s = (1.0 - c * c).max(0.0).sqrt();
    let (sp, cp) = (2.0 * PI * u_phi).sin_cos();
    [s * cp, s * sp, c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn density_integrates_to_one() {
        let s = RadialSampler::new(|r| r * r * (-r).exp() * (2.0 - r).abs(), 60.0, 2048);
        let gl = GaussLegendre::new(16);
        // pdf is piecewise constant; integrate over its knots directly
        let total: f64 = s.knots.windows(2).map(|w| gl.integrate(w[0], w[1], |r| s.pdf(r))).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sample_and_pdf_agree() {
        let s = RadialSampler::new(|r| r * (-0.3 * r).exp(), 150.0, 4096);
        for i in 1..200 {
            let u = i as f64 / 200.0;
            let (r, d) = s.sample(u);
            assert!(r > 0.0 && r < 150.0);
            assert!((s.pdf(r) - d).abs() <= 1e-12 * d, "u = {u}");
        }
        // monotone
        let rs: Vec<f64> = (1..1000).map(|i| s.sample(i as f64 / 1000.0).0).collect();
        assert!(rs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn shape_is_reproduced() {
        // mean of Gamma(3, 1) is 3
        let s = RadialSampler::new(|r| r * r * (-r).exp(), 50.0, 8192);
        let n = 20000;
        let mean: f64 = (0..n).map(|i| s.sample((i as f64 + 0.5) / n as f64).0).sum::<f64>() / n as f64;
        assert!((mean - 3.0).abs() < 1e-3);
    }

    #[test]
    fn directions_are_unit() {
        for i in 0..50 {
            let d = direction(i as f64 / 49.0, (i * 7 % 50) as f64 / 50.0);
            let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            assert!((n - 1.0).abs() < 1e-15);
        }
    }
}
