use proptest::prelude::*;
use sigmalab_core::grid::GridSpec;
use sigmalab_core::params::SystemParams;
use sigmalab_core::profile::RadialProfile;
use sigmalab_core::testfn::cutoff::{eta, eta_power, eta_ratio_sup};
use sigmalab_core::testfn::fourier::fractional_laplacian_fourier;
use sigmalab_core::testfn::functionals::{FunctionalOptions, SpatialWeight, TimeWeight};
use sigmalab_core::testfn::*;

fn bracket(l: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| (1.0 + x * x).powf(-0.5 * l)
}

/// Fourth-order centred second difference.
fn d2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

#[test]
fn neg_laplacian_examples() {
    let c = neg_laplacian_bracket(2.0, 1);
    assert_eq!(c.terms, vec![(-6.0, 4.0), (8.0, 6.0)]);
    assert_eq!(c.eval(0.0), 2.0);
    let f = bracket(2.0);
    assert!((-d2(&f, 0.0, 1e-3) - 2.0).abs() < 1e-8);
    for n in 1..=3 {
        for &l in &[0.5, 1.0, 2.5, 7.0] {
            assert!((neg_laplacian_bracket(l, n).eval(0.0) - l * n as f64).abs() < 1e-12);
        }
    }
    for n in 3..=6 {
        let c = neg_laplacian_bracket(n as f64 - 2.0, n);
        assert_eq!(c.terms.len(), 1);
        assert_eq!(c.terms[0].1, n as f64 + 2.0);
    }
}

#[test]
fn integer_laplacian_examples() {
    for n in 1..=3 {
        assert_eq!(integer_laplacian_bracket(1.7, 1, n), neg_laplacian_bracket(1.7, n));
    }
    let c = integer_laplacian_bracket(1.0, 2, 1);
    // −Δ⟨x⟩^{−1} = ⟨x⟩^{−3} − 3x²⟨x⟩^{−5} by hand, then one difference
    let lap = |x: f64| {
        let b = 1.0 + x * x;
        b.powf(-1.5) - 3.0 * x * x * b.powf(-2.5)
    };
    let fd = -d2(&lap, 1.0, 1e-3);
    assert!((c.eval(1.0) - fd).abs() <= 1e-6, "{} vs {fd}", c.eval(1.0));
    for &r in &[0.5, 1.3, 4.0] {
        assert_eq!(integer_laplacian_bracket(r, 2, 2).exponents(), vec![r + 4.0, r + 6.0, r + 8.0]);
    }
}

#[test]
fn fractional_examples() {
    let c = BracketCombo::single(2.0);
    for &x in &[0.0, 0.7, 3.0] {
        let v = fractional_laplacian_bracket(&c, 1e-4, x, 1).unwrap();
        let f = c.eval(x);
        assert!((v - f).abs() <= 0.01 * f, "x={x}: {v} vs {f}");
    }
    let hyper = fractional_laplacian_bracket(&c, 0.5, 0.0, 1).unwrap();
    let fourier = fractional_laplacian_fourier(&c, 0.5, 0.0, 1, 1e-10).unwrap();
    assert!((hyper - fourier).abs() <= 1e-5 * fourier.abs());
    let pair = BracketCombo::new([(0.7, 1.5), (-1.2, 3.0)]);
    let doubled = pair.scaled(2.0);
    for &x in &[0.0, 1.0, 5.0] {
        let a = fractional_laplacian_bracket(&pair, 0.3, x, 2).unwrap();
        let b = fractional_laplacian_bracket(&doubled, 0.3, x, 2).unwrap();
        assert!((b - 2.0 * a).abs() <= 1e-14 * a.abs().max(1e-300));
    }
}

#[test]
fn gamma_integer_case_matches_finite_differences() {
    let spec = TestFunctionSpec::new(1.0, 2.0, 3.0).unwrap();
    let psi = |x: f64| bracket(2.0)(x / 3.0);
    for &x in &[0.0, 1.0, 2.5, 6.0] {
        let fd = -d2(&psi, x, 1e-3);
        let v = fractional_laplacian_gamma(&spec, x, 1).unwrap();
        assert!((v - fd).abs() <= 1e-6, "x={x}: {v} vs {fd}");
    }
}

#[test]
fn integer_path_equals_vanishing_fractional_composition() {
    let spec = TestFunctionSpec::new(1.0, 3.0, 1.0).unwrap();
    let combo = integer_laplacian_bracket(3.0, 1, 1);
    for &x in &[0.0, 0.5, 2.0] {
        let exact = fractional_laplacian_gamma(&spec, x, 1).unwrap();
        let near = fractional_laplacian_bracket(&combo, 1e-5, x, 1).unwrap();
        assert!((exact - near).abs() <= 1e-4, "x={x}: {exact} vs {near}");
    }
}

#[test]
fn scaling_example() {
    for &gamma in &[1.5, 2.25] {
        let big = TestFunctionSpec::new(gamma, 2.0, 4.0).unwrap();
        let unit = TestFunctionSpec::new(gamma, 2.0, 1.0).unwrap();
        for &x in &[0.0, 1.0, 4.0, 13.0, 80.0] {
            let direct = fractional_laplacian_gamma_direct(&big, x, 1).unwrap();
            let scaled = 4f64.powf(-2.0 * gamma) * fractional_laplacian_gamma(&unit, x / 4.0, 1).unwrap();
            assert!((direct - scaled).abs() <= 1e-8 * direct.abs(), "gamma={gamma} x={x}: {direct} vs {scaled}");
        }
    }
}

fn radii() -> Vec<f64> {
    std::iter::once(0.0).chain((0..=50).map(|i| 10f64.powf(-2.0 + 5.0 * i as f64 / 50.0))).collect()
}

#[test]
fn envelope_ratios_are_bounded_in_each_case() {
    let cases = [
        (TestFunctionSpec::new(1.5, 2.0, 1.0).unwrap(), 1, EnvelopeCase::Above),
        (TestFunctionSpec::new(1.5, 1.0, 1.0).unwrap(), 3, EnvelopeCase::Critical),
        (TestFunctionSpec::new(1.25, 0.5, 1.0).unwrap(), 3, EnvelopeCase::Below),
    ];
    for (spec, n, case) in cases {
        assert_eq!(envelope_case(&spec, n), case);
        let sup = envelope_ratio_sup(&spec, n, &radii()).unwrap();
        assert!(sup.is_finite() && sup > 0.0 && sup < 1e3, "{case:?}: {sup}");
        // the far-field ratio settles rather than growing
        let far = envelope_ratio_sup(&spec, n, &[5e2, 1e3]).unwrap();
        assert!(far <= sup);
    }
}

#[test]
fn pairing_residual_is_small() {
    for &(gamma, r, big_r, n) in &[(1.5, 2.0, 8.0, 1), (1.5, 2.0, 1.0, 1), (1.25, 3.5, 2.0, 2), (1.0, 4.0, 3.0, 3)] {
        let spec = TestFunctionSpec::new(gamma, r, big_r).unwrap();
        let p = plancherel_pairing(&spec, &RadialProfile::gaussian(1.0, 1.0), n).unwrap();
        assert!(p.residual() <= 1e-6, "{gamma} {r} {big_r} {n}: {p:?}");
    }
}

#[test]
fn invalid_specs() {
    assert!(TestFunctionSpec::new(0.5, 2.0, 1.0).is_err());
    assert!(TestFunctionSpec::new(1.5, 0.0, 1.0).is_err());
    assert!(TestFunctionSpec::new(1.5, 2.0, -1.0).is_err());
    let s = TestFunctionSpec::for_sigma(1.5, 1, 4.0).unwrap();
    assert_eq!((s.r, s.theta), (2.0, Some(0.5)));
}

#[test]
fn eta_examples() {
    let lam = eta_power(2.0, 2.0);
    assert_eq!(eta(0.3, lam), 1.0);
    assert_eq!(eta(1.2, lam), 0.0);
    let mut prev = 1.0;
    for i in 0..=2000 {
        let v = eta(i as f64 / 2000.0, lam);
        assert!(v <= prev);
        prev = v;
    }
    let sup = eta_ratio_sup(2.0, lam, 4000);
    assert!(sup.is_finite() && sup > 0.0);
}

fn frozen(grid: &GridSpec, times: &[f64], v: f64) -> Vec<functionals::Snapshot> {
    let len = grid.total_points();
    times.iter().map(|&t| functionals::Snapshot { t, u: vec![v; len], v: vec![v; len] }).collect()
}

#[test]
fn frozen_unit_field_is_separable() {
    let grid = GridSpec::new(1, 1024, 100.0).unwrap();
    let params = SystemParams::symmetric(1, 1.0, 2.0, 2.0).unwrap();
    let spec = TestFunctionSpec::new(1.5, 2.0, 4.0).unwrap();
    let times: Vec<f64> = (0..=64).map(|i| 8.0 * i as f64 / 64.0).collect();
    let opts = FunctionalOptions { time: TimeWeight::Plateau, space: SpatialWeight::Bracket };
    let f = functionals(&frozen(&grid, &times, 1.0), &grid, &spec, &params, &opts).unwrap();
    // ∫_{−L}^{L} (1 + x²/R²)^{−1} dx = 2R·atan(L/R)
    let space = 2.0 * 4.0 * (100.0f64 / 4.0).atan();
    let expected = 8.0 * space;
    assert!((f.i_r - expected).abs() <= 1e-6 * expected, "{} vs {expected}", f.i_r);
    assert_eq!(f.i_r, f.j_r);
    let z = functionals(&frozen(&grid, &times, 0.0), &grid, &spec, &params, &opts).unwrap();
    assert_eq!((z.i_r, z.j_r, z.i_r_late, z.j_r_late), (0.0, 0.0, 0.0, 0.0));
}

#[test]
fn sparse_snapshots_are_rejected() {
    let grid = GridSpec::new(1, 64, 50.0).unwrap();
    let params = SystemParams::symmetric(1, 1.0, 2.0, 2.0).unwrap();
    let spec = TestFunctionSpec::new(1.0, 3.0, 4.0).unwrap();
    let r = functionals(&frozen(&grid, &[0.0, 16.0], 1.0), &grid, &spec, &params, &FunctionalOptions::default());
    assert!(matches!(r, Err(sigmalab_core::Error::InsufficientSnapshots { .. })));
}

#[test]
fn functional_is_nondecreasing_in_r() {
    let grid = GridSpec::new(1, 512, 200.0).unwrap();
    let params = SystemParams::symmetric(1, 1.0, 2.0, 3.0).unwrap();
    let times: Vec<f64> = (0..=1024).map(|i| 64.0 * i as f64 / 1024.0).collect();
    let radii = grid.radii();
    let snaps: Vec<_> = times
        .iter()
        .map(|&t| {
            let field: Vec<f64> = radii.iter().map(|&r| (-(r * r) / 50.0).exp() / (1.0 + t)).collect();
            functionals::Snapshot { t, u: field.clone(), v: field }
        })
        .collect();
    let mut prev = 0.0;
    for &big_r in &[1.0, 2.0, 4.0, 8.0] {
        let spec = TestFunctionSpec::for_sigma(1.0, 1, big_r).unwrap();
        let f = functionals(&snaps, &grid, &spec, &params, &FunctionalOptions::default()).unwrap();
        assert!(f.i_r >= prev && f.i_r > 0.0, "R={big_r}");
        prev = f.i_r;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn scaling_identity(gamma in 1.0f64..3.0, r in 0.5f64..5.0, big_r in 0.5f64..20.0, t in 0.0f64..5.0, n in 1u32..=3) {
        let spec = TestFunctionSpec::new(gamma, r, big_r).unwrap();
        let x = t * big_r;
        let law = fractional_laplacian_gamma(&spec, x, n).unwrap();
        let direct = fractional_laplacian_gamma_direct(&spec, x, n).unwrap();
        prop_assert!((law - direct).abs() <= 1e-8 * law.abs().max(direct.abs()).max(1e-300), "{law} vs {direct}");
    }

    #[test]
    fn pairing_identity(gamma in 1.0f64..2.0, r in 1.0f64..4.0, big_r in 0.5f64..10.0) {
        let spec = TestFunctionSpec::new(gamma, r, big_r).unwrap();
        let p = plancherel_pairing(&spec, &RadialProfile::gaussian(1.0, 1.0), 1).unwrap();
        prop_assert!(p.residual() <= 1e-6, "{p:?}");
    }
}
