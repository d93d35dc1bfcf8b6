use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use sigmalab_core::decay_fit::fit_power_law;
use sigmalab_core::oracle::*;
use sigmalab_core::profile::RadialProfile;
use sigmalab_core::quadrature::Options;
use sigmalab_core::special::sphere_measure;

fn g(a: f64, w: f64) -> RadialProfile {
    RadialProfile::gaussian(a, w)
}

/// Brute-force reference: complex-root multipliers and composite Simpson
/// on a uniform grid, no branch handling and no adaptivity.
fn reference(w0: &RadialProfile, w1: &RadialProfile, t: f64, sigma: f64, n: u32, kind: NormKind) -> f64 {
    let rho_max = 12.0 / w0.width.min(w1.width);
    let m = 400_000;
    let h = rho_max / m as f64;
    let f = |rho: f64| {
        let a = rho.powf(2.0 * sigma);
        let d = Complex64::new(1.0 - 4.0 * a, 0.0).sqrt();
        let (l1, l2) = ((-1.0 + d) / 2.0, (-1.0 - d) / 2.0);
        let (e1, e2) = ((l1 * t).exp(), (l2 * t).exp());
        let den = l1 - l2;
        let k0 = (l1 * e2 - l2 * e1) / den;
        let k1 = (e1 - e2) / den;
        let (dk0, dk1) = (-a * k1, (l1 * e1 - l2 * e2) / den);
        let (h0, h1) = (w0.hat(rho, n), w1.hat(rho, n));
        let v = match kind {
            NormKind::SolutionL2 => k0 * h0 + k1 * h1,
            NormKind::HomogeneousSigma => (k0 * h0 + k1 * h1) * rho.powf(sigma),
            NormKind::TimeDerivative => dk0 * h0 + dk1 * h1,
        };
        v.norm_sqr() * rho.powi(n as i32 - 1)
    };
    let mut s = f(0.0) + f(rho_max);
    for i in 1..m {
        // Nudge off the exact double root, where the formula is 0/0.
        let x = i as f64 * h * (1.0 + 1e-13);
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    (sphere_measure(n) * s * h / 3.0).sqrt()
}

#[test]
fn initial_norm_examples() {
    let zero = RadialProfile::zero();
    let v = linear_norm(&g(1.0, 1.0), &zero, 0.0, 1.0, 1, NormKind::SolutionL2).unwrap();
    assert!((v - PI.powf(0.25)).abs() < 1e-12);
    assert!((v - 1.33133).abs() < 1e-5);
    let v = linear_norm(&zero, &g(1.0, 1.0), 0.0, 1.0, 1, NormKind::TimeDerivative).unwrap();
    assert!((v - PI.powf(0.25)).abs() < 1e-12);
}

#[test]
fn plancherel_consistency_at_time_zero() {
    for n in 1..=3 {
        for &(a, w) in &[(1.0, 1.0), (0.3, 2.5), (2.0, 0.4)] {
            let v = linear_norm(&g(a, w), &RadialProfile::zero(), 0.0, 1.5, n, NormKind::SolutionL2).unwrap();
            // ‖A e^{−|x|²/(2w²)}‖² = A²(πw²)^{n/2}
            let exact = a * (PI * w * w).powf(n as f64 / 4.0);
            assert!((v - exact).abs() <= 1e-10 * exact, "n={n}: {v} vs {exact}");
        }
    }
}

#[test]
fn gradient_norm_at_time_zero() {
    // ‖u₀'‖² = √π/2 for u₀ = e^{−x²/2}
    let v = linear_norm(&g(1.0, 1.0), &RadialProfile::zero(), 0.0, 1.0, 1, NormKind::HomogeneousSigma).unwrap();
    assert!((v - (PI.sqrt() / 2.0).sqrt()).abs() < 1e-12);
}

#[test]
fn matches_brute_force_reference() {
    let (u0, u1) = (g(1.0, 1.0), g(0.5, 1.5));
    for &(sigma, n) in &[(1.0, 1), (1.5, 2), (2.0, 3)] {
        for kind in NormKind::ALL {
            for &t in &[0.5, 3.0, 20.0] {
                let v = linear_norm(&u0, &u1, t, sigma, n, kind).unwrap();
                let r = reference(&u0, &u1, t, sigma, n, kind);
                assert!((v - r).abs() <= 1e-7 * r, "sigma={sigma} n={n} {kind:?} t={t}: {v} vs {r}");
            }
        }
    }
}

#[test]
fn l2_slope_example() {
    let s = decay_series(&g(1.0, 1.0), &RadialProfile::zero(), 1.0, 1, NormKind::SolutionL2, &[1e2, 1e3, 1e4]).unwrap();
    let e = &s.entries;
    for w in e.windows(2) {
        let slope = (w[1].1 / w[0].1).ln() / ((1.0 + w[1].0) / (1.0 + w[0].0)).ln();
        assert!((slope + 0.25).abs() <= 0.03, "slope {slope}");
    }
}

#[test]
fn decay_series_examples() {
    let zero = RadialProfile::zero();
    let grid = log_grid(10.0, 1e5, 40);
    let s = decay_series(&g(1.0, 1.0), &zero, 1.5, 2, NormKind::HomogeneousSigma, &grid).unwrap();
    let f = fit_power_law(&s, (10.0, 1e5)).unwrap();
    assert!((f.exponent + 5.0 / 6.0).abs() <= 0.05, "{}", f.exponent);
    let s = decay_series(&g(1.0, 1.0), &zero, 2.0, 1, NormKind::TimeDerivative, &grid).unwrap();
    let f = fit_power_law(&s, (10.0, 1e5)).unwrap();
    assert!((f.exponent + 1.125).abs() <= 0.05, "{}", f.exponent);
    let s = decay_series(&g(1.0, 1.0), &zero, 1.0, 1, NormKind::SolutionL2, &[42.0]).unwrap();
    assert_eq!(s.len(), 1);
}

#[test]
fn rejects_bad_input() {
    let zero = RadialProfile::zero();
    assert!(linear_norm(&g(1.0, 1.0), &zero, 1.0, 1.0, 4, NormKind::SolutionL2).is_err());
    assert!(linear_norm(&g(1.0, 1.0), &zero, -1.0, 1.0, 1, NormKind::SolutionL2).is_err());
    assert!(decay_series(&g(1.0, 1.0), &zero, 1.0, 1, NormKind::SolutionL2, &[2.0, 1.0]).is_err());
    assert_eq!(linear_norm(&zero, &zero, 5.0, 1.0, 2, NormKind::TimeDerivative).unwrap(), 0.0);
}

#[test]
fn solution_norm_is_eventually_decreasing() {
    for &(sigma, n) in &[(1.0, 1), (1.5, 2), (2.0, 3)] {
        let grid = log_grid(1e2, 1e5, 30);
        let s = decay_series(&g(1.0, 1.0), &g(1.0, 1.0), sigma, n, NormKind::SolutionL2, &grid).unwrap();
        assert!(s.entries.windows(2).all(|w| w[1].1 < w[0].1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn refinement_is_stable(t in 0.0f64..1e4, sigma in 1.0f64..2.0, n in 1u32..=3, k in 0usize..3) {
        let kind = NormKind::ALL[k];
        let (u0, u1) = (g(1.0, 1.0), g(0.7, 2.0));
        let base = linear_norm_with(&u0, &u1, t, sigma, n, kind, &default_options()).unwrap();
        let fine_opts: Options = default_options().with_panels(2 * default_options().initial_panels);
        let fine = linear_norm_with(&u0, &u1, t, sigma, n, kind, &fine_opts).unwrap();
        prop_assert!((base - fine).abs() <= 1e-8 * base.abs().max(1e-300));
    }
}
