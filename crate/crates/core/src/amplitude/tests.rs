use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::quad::GaussLegendre;
use crate::states::{hbar_wavefunction, hplus_wavefunction};

fn kin(e: f64, level: PsLevel, theta_deg: f64) -> Kinematics {
    Kinematics::new(e, level, theta_deg.to_radians(), None).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    let r = scale * rng.gen::<f64>();
    let d = direction(rng.gen(), rng.gen());
    [r * d[0], r * d[1], r * d[2]]
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

/// ∫ d³r₃ Φ_H̄⁺ φ_H̄ V_i by direct quadrature: each interaction term is
/// integrated over |r̄₃| and the polar angle about the fixed particle.
fn direct_r3_integral(r1: [f64; 3], r2: [f64; 3], mu: f64) -> f64 {
    let chand = ChandrasekharParams::default();
    let (a1, a2) = (integrand::norm(r1), integrand::norm(r2));
    let gl = GaussLegendre::new(10);
    let y = |x: f64| (-mu * x).exp() / x;
    let g = |r: f64| hplus_wavefunction(&chand, a2, r) * hbar_wavefunction([r, 0.0, 0.0]);
    // shell average of Y(|r̄ − ā|); cosθ = 1 − 2u² opens up the peak at θ = 0
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

#[test]
fn inner_reduction_matches_direct_quadrature() {
    let chand = ChandrasekharParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &mu in &[0.0, 0.2] {
        let screen = ScreeningConfig::new(mu).unwrap();
        for _ in 0..3 {
            let r1 = random_point(&mut rng, 6.0);
            let r2 = random_point(&mut rng, 6.0);
            let fast = inner_r3_reduction(r1, r2, &screen, &chand).unwrap();
            let slow = direct_r3_integral(r1, r2, mu);
            assert!((fast - slow).abs() <= 1e-6 * slow.abs(), "mu={mu}: {fast} vs {slow}");
        }
    }
}

#[test]
fn inner_reduction_vanishes_at_equal_radii() {
    let chand = ChandrasekharParams::default();
    let screen = ScreeningConfig::new(0.3).unwrap();
    let r1 = [1.0, 2.0, -0.5];
    let r2 = [-2.0, 0.5, 1.0];
    assert_eq!(inner_r3_reduction(r1, r2, &screen, &chand).unwrap(), 0.0);
}

#[test]
fn inner_reduction_is_continuous_in_screening() {
    let chand = ChandrasekharParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let r1 = random_point(&mut rng, 8.0);
        let r2 = random_point(&mut rng, 8.0);
        let a = inner_r3_reduction(r1, r2, &ScreeningConfig::unscreened(), &chand).unwrap();
        let b = inner_r3_reduction(r1, r2, &ScreeningConfig::new(1e-6).unwrap(), &chand).unwrap();
        assert!((a - b).abs() <= 1e-5 * a.abs().max(1e-12), "{a} vs {b}");
    }
}

// Plane-wave Born integrand coded from the unscreened cloud potential
// U_c(r) = (8π/c³) e^{-cr}(1/r + c/2).
fn born_integrand(r1: [f64; 3], r2: [f64; 3], kin: &Kinematics) -> Cplx {
    let ch = ChandrasekharParams::default();
    let u = |c: f64, r: f64| 8.0 * PI / c.powi(3) * (-c * r).exp() * (1.0 / r + c / 2.0);
    let (a1, a2) = (integrand::norm(r1), integrand::norm(r2));
    let mut inner = 0.0;
    for (a, b) in [(ch.alpha, ch.beta), (ch.beta, ch.alpha)] {
        inner += (-a * a2).exp() * (u(b + 1.0, a1) - u(b + 1.0, a2));
    }
    inner *= ch.norm / (4.0 * PI * PI.sqrt());
    let rho = integrand::norm([r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]]);
    let phi = (-rho / 2.0).exp() / (8.0 * PI).sqrt();
    let (ki, k1) = (kin.ki_vec(), kin.k1_vec());
    let phase = (0..3).map(|j| 0.5 * ki[j] * (r1[j] + r2[j]) - k1[j] * r1[j]).sum::<f64>();
    Cplx::from_polar(inner * phi, phase)
}

#[test]
fn zero_couplings_reduce_to_born() {
    let k = kin(25.0, PsLevel::S1, 40.0);
    let chand = ChandrasekharParams::default();
    let ctx = IntegrandContext::new(&k, &ScreeningConfig::unscreened(), &chand, PhaseConvention::Prior)
        .unwrap()
        .with_couplings(0.0, 0.0)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let r1 = random_point(&mut rng, 5.0);
        let r2 = random_point(&mut rng, 5.0);
        let got = ctx.eval(r1, r2, PsLevel::S1.into()).unwrap();
        let want = born_integrand(r1, r2, &k);
        assert!((got - want).norm() <= 1e-11 * want.norm().max(1e-14), "{got} vs {want}");
    }
}

#[test]
fn only_unit_modulus_phases_separate_the_factors() {
    use crate::specfun::{coulomb_distortion, DistortionParams};
    use crate::states::ps_wavefunction;
    let k = kin(10.0, PsLevel::P2, 70.0);
    let screen = ScreeningConfig::new(0.1).unwrap();
    let chand = ChandrasekharParams::default();
    let dist = DistortionParams::new(k.k1).unwrap();
    let state = PsState::new(2, 1, 1).unwrap();
    let tiny = 1e-9;
    let points = [
        ([tiny, 0.0, 0.3], [0.2, 0.1, 0.0]),
        ([0.4, 0.1, 0.2], [0.4 + tiny, 0.1, 0.2]),
        ([0.3, -0.2, 0.1], [tiny, tiny, 0.0]),
        ([3.0, 2.0, 1.0], [-1.0, 0.5, 2.0]),
        ([-7.0, 1.0, -4.0], [2.0, -3.0, 0.5]),
    ];
    for (r1, r2) in points {
        let p = IntegrandPoint { r1, r2, r3: [0.0; 3] };
        let v = reduced_integrand(&p, &k, &screen, state, PhaseConvention::Prior).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        let rho = [r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]];
        let bound = coulomb_distortion(&dist, r1, k.k1_vec(), true).unwrap().norm()
            * inner_r3_reduction(r1, r2, &screen, &chand).unwrap().abs()
            * ps_wavefunction(state, rho).norm();
        assert!((v.norm() - bound).abs() <= 1e-12 * bound, "{} vs {bound}", v.norm());
    }
}

#[test]
fn negative_axis_is_degenerate() {
    let k = kin(10.0, PsLevel::S1, 30.0);
    let p = IntegrandPoint { r1: [0.0, 0.0, -1.0], r2: [0.5, 0.0, 0.0], r3: [0.0; 3] };
    let r = reduced_integrand(&p, &k, &ScreeningConfig::unscreened(), PsLevel::S1.into(), PhaseConvention::Prior);
    assert!(matches!(r, Err(Error::DegenerateGeometry(_))));
}

#[test]
fn integrand_decays_with_positron_distance() {
    let k = kin(10.0, PsLevel::S1, 60.0);
    let ctx = IntegrandContext::new(
        &k,
        &ScreeningConfig::unscreened(),
        &ChandrasekharParams::default(),
        PhaseConvention::Prior,
    )
    .unwrap();
    let at = |r: f64| {
        let r2 = [r * 0.6, r * 0.0, r * 0.8];
        let r1 = [r2[0] + 0.5, r2[1] + 0.3, r2[2]];
        ctx.eval(r1, r2, PsLevel::S1.into()).unwrap().norm()
    };
    assert!(at(30.0) < 1e-8 * at(2.0));
}

fn small_spec(seed: u64) -> IntegrationSpec {
    IntegrationSpec::quasi(1 << 14, seed)
}

#[test]
fn result_is_independent_of_thread_count() {
    let k = kin(15.0, PsLevel::P2, 50.0);
    let screen = ScreeningConfig::new(0.05).unwrap();
    let states = PsLevel::P2.substates();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| amplitude_substates(&k, &states, &screen, &small_spec(5)).unwrap())
    };
    assert_eq!(run(1), run(8));
}

#[test]
fn conjugate_convention_changes_only_the_phase() {
    let k = kin(20.0, PsLevel::S1, 30.0);
    let screen = ScreeningConfig::unscreened();
    let prior = amplitude_substates(&k, &[PsLevel::S1.into()], &screen, &small_spec(9)).unwrap()[0];
    let spec = IntegrationSpec { convention: PhaseConvention::Conjugate, ..small_spec(9) };
    let conj = amplitude_substates(&k, &[PsLevel::S1.into()], &screen, &spec).unwrap()[0];
    assert_eq!(prior.t.conj(), conj.t);
    assert_eq!(prior.t.norm(), conj.t.norm());
    assert_eq!(prior.std_err(), conj.std_err());
}

#[test]
fn oracle_without_perturbation_is_zero() {
    let k = kin(10.0, PsLevel::S1, 60.0);
    let spec = IntegrationSpec::oracle(20_000, 1);
    let v = amplitude_oracle_9d_with(&k, PsLevel::S1.into(), &ScreeningConfig::unscreened(), &spec, &PerturbationTerms::none())
        .unwrap();
    assert_eq!(v.t, Cplx::new(0.0, 0.0));
}

#[test]
fn oracle_depends_on_positron_positron_sign() {
    let k = kin(10.0, PsLevel::S1, 60.0);
    let spec = IntegrationSpec::oracle(1_000_000, 1);
    let screen = ScreeningConfig::unscreened();
    let base = amplitude_oracle_9d_with(&k, PsLevel::S1.into(), &screen, &spec, &PerturbationTerms::default()).unwrap();
    let flipped = PerturbationTerms { positron_positron: -1.0, ..PerturbationTerms::default() };
    let other = amplitude_oracle_9d_with(&k, PsLevel::S1.into(), &screen, &spec, &flipped).unwrap();
    assert!((base.t - other.t).norm() > 3.0 * base.std_err().hypot(other.std_err()));
}

#[test]
fn spec_validation() {
    let k = kin(10.0, PsLevel::S1, 60.0);
    let screen = ScreeningConfig::unscreened();
    let s: PsState = PsLevel::S1.into();
    let bad = [
        IntegrationSpec::quasi(999, 1),
        IntegrationSpec { replicates: 4, ..IntegrationSpec::quasi(10_000, 1) },
        IntegrationSpec { target_rel_err: 0.0, ..IntegrationSpec::quasi(10_000, 1) },
        IntegrationSpec { target_rel_err: 1.0, ..IntegrationSpec::quasi(10_000, 1) },
        IntegrationSpec::oracle(10_000, 1),
    ];
    for spec in bad {
        assert!(matches!(amplitude(&k, s, &screen, &spec), Err(Error::InvalidSpec(_))), "{spec:?}");
    }
    assert!(matches!(
        amplitude_oracle_9d(&k, s, &screen, &IntegrationSpec::quasi(10_000, 1)),
        Err(Error::InvalidSpec(_))
    ));
    let mixed = [PsState::new(1, 0, 0).unwrap(), PsState::new(2, 0, 0).unwrap()];
    assert!(amplitude_substates(&k, &mixed, &screen, &small_spec(1)).is_err());
}

#[test]
fn unreachable_target_is_reported() {
    let k = kin(10.0, PsLevel::S1, 60.0);
    let spec = IntegrationSpec { target_rel_err: 1e-6, ..IntegrationSpec::quasi(4096, 2) };
    let r = amplitude(&k, PsLevel::S1.into(), &ScreeningConfig::unscreened(), &spec);
    assert!(matches!(r, Err(Error::AccuracyNotReached { .. })));
}
