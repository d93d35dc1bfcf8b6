use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use sigmalab_core::decay_fit::*;
use sigmalab_core::Error;

fn synthetic(c: f64, a: f64, lo: f64, hi: f64, m: usize) -> NormSeries {
    let mut s = NormSeries::new("synthetic", SeriesMeta::default());
    for i in 0..m {
        let t = lo * (hi / lo).powf(i as f64 / (m - 1) as f64);
        s.push(t, c * (1.0 + t).powf(a)).unwrap();
    }
    s
}

#[test]
fn exact_power_law() {
    let s = synthetic(5.0, -0.25, 1.0, 1e4, 30);
    let f = fit_power_law(&s, (0.0, 1e5)).unwrap();
    assert!((f.exponent + 0.25).abs() < 1e-10);
    assert!((f.r_squared - 1.0).abs() < 1e-12);
    assert!((f.intercept - f64::ln(5.0)).abs() < 1e-9);
}

#[test]
fn noisy_power_law_over_seeds() {
    for seed in 0..20u64 {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut s = synthetic(5.0, -0.25, 10.0, 1e4, 40);
        for e in &mut s.entries {
            e.1 *= 1.0 + 0.01 * (2.0 * rng.gen::<f64>() - 1.0);
        }
        let f = fit_power_law(&s, (0.0, 1e5)).unwrap();
        assert!((f.exponent + 0.25).abs() < 0.01);
    }
}

#[test]
fn constant_series_and_errors() {
    let s = synthetic(2.0, 0.0, 1.0, 100.0, 10);
    let f = fit_power_law(&s, (0.0, 1e3)).unwrap();
    assert!(f.exponent.abs() < 1e-14);
    assert!(matches!(fit_power_law(&s, (50.0, 100.0)), Err(Error::InsufficientData { .. })));
    let mut z = synthetic(2.0, 0.0, 1.0, 100.0, 10);
    z.entries[3].1 = 0.0;
    assert!(matches!(fit_power_law(&z, (0.0, 1e3)), Err(Error::NonPositiveValue { .. })));
    let mut bad = NormSeries::default();
    bad.push(1.0, 1.0).unwrap();
    assert!(bad.push(1.0, 2.0).is_err());
}

#[test]
fn compare_rate_examples() {
    let mk = |e| DecayFit { exponent: e, intercept: 0.0, r_squared: 1.0, window: (0.0, 1.0), points: 8 };
    assert!(compare_rates(&mk(-0.26), -0.25, 0.05, Band::TwoSided).pass);
    assert!(!compare_rates(&mk(-0.10), -0.25, 0.05, Band::TwoSided).pass);
    assert!(compare_rates(&mk(-0.9), -0.24, 0.05, Band::OneSided).pass);
    assert!(compare_rates(&mk(-0.19), -0.24, 0.05, Band::OneSided).pass);
    assert!(!compare_rates(&mk(-0.18), -0.24, 0.05, Band::OneSided).pass);
}

proptest! {
    #[test]
    fn scale_equivariance(c in 1e-6f64..1e6, a in -3.0f64..0.0) {
        let s1 = synthetic(1.0, a, 1.0, 1e3, 12);
        let mut s2 = s1.clone();
        for e in &mut s2.entries { e.1 *= c; }
        let (f1, f2) = (fit_power_law(&s1, (0.0, 1e4)).unwrap(), fit_power_law(&s2, (0.0, 1e4)).unwrap());
        prop_assert!((f1.exponent - f2.exponent).abs() < 1e-12);
        prop_assert!((f2.intercept - f1.intercept - f64::ln(c)).abs() < 1e-9);
    }

    #[test]
    fn exact_exponent_any_subwindow(a in -3.0f64..0.0, lo in 0.5f64..100.0, ratio in 10.0f64..100.0) {
        let s = synthetic(3.0, a, 0.5, 2e4, 64);
        let f = fit_power_law(&s, (lo, lo * ratio)).unwrap();
        prop_assert!((f.exponent - a).abs() < 1e-9);
    }
}
