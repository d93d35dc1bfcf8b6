use sigmalab::solver::{InitialData, RunOptions, TorusSolver};
use sigmalab_core::grid::GridSpec;
use sigmalab_core::params::{gamma_exponents, SystemParams};
use sigmalab_core::profile::RadialProfile;
use sigmalab_core::testfn::functionals::{functionals, FunctionalOptions};
use sigmalab_core::testfn::TestFunctionSpec;

/// With `γ₂ < 0` the bound `J_R^{(pq−1)/(pq)} ≲ R^{γ₂}` can only hold for a
/// global solution; on a long pre-blow-up run `J_R` grows with `R`, so the
/// rescaled quantity grows too and the bound is visibly violated.
#[test]
fn blowup_regime_rescaled_functional() {
    let params = SystemParams::symmetric(1, 1.0, 2.0, 2.0).unwrap();
    let grid = GridSpec::new(1, 1024, 400.0).unwrap();
    let bump = RadialProfile::gaussian(1e-3, 10.0);
    let data = InitialData { u1: bump, v1: bump, ..InitialData::zero() };
    let mut opts = RunOptions::new(grid.default_dt(&params));
    opts.snapshot_times = (0..=512).map(|i| 0.5 * i as f64).collect();
    let res = TorusSolver::new(grid, params).unwrap().run(&data, 256.0, &[0.0, 256.0], &opts).unwrap();
    assert!(res.blowup.is_none());
    assert_eq!(res.snapshots.len(), 513);
    let (_, g2) = gamma_exponents(&params).unwrap();
    let pq = params.p * params.q;
    assert!(g2 < 0.0);
    let mut prev: Option<(f64, f64)> = None;
    for big_r in [4.0, 8.0, 16.0] {
        let spec = TestFunctionSpec::for_sigma(1.0, 1, big_r).unwrap();
        let f = functionals(&res.snapshots, &grid, &spec, &params, &FunctionalOptions::default()).unwrap();
        let rescaled = f.j_r.powf((pq - 1.0) / pq) * big_r.powf(-g2);
        println!("R={big_r}: J_R={:e} rescaled={rescaled:e}", f.j_r);
        assert!(f.j_r > 0.0 && rescaled.is_finite());
        if let Some((j, r)) = prev {
            assert!(f.j_r > 2.0 * j, "J_R must grow");
            assert!(rescaled > r);
        }
        prev = Some((f.j_r, rescaled));
    }
}
