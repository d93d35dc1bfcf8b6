//! The test-function invariant suite behind `testfn-check`.

use serde::Serialize;
use sigmalab_core::profile::RadialProfile;
use sigmalab_core::testfn::{
    envelope_case, envelope_ratio_sup, fractional_laplacian_gamma, fractional_laplacian_gamma_direct, integer_laplacian_bracket,
    plancherel_pairing, EnvelopeCase, TestFunctionSpec,
};

use crate::error::Result;

/// Sample radii for the scaling check, in units of `R`.
const SCALING_SAMPLES: [f64; 8] = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0, 40.0];
/// Radii for the finite-difference oracle, in units of `R`.
const FD_SAMPLES: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
const ENVELOPE_RADIUS: f64 = 1e3;
const ENVELOPE_SAMPLES: usize = 61;

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeBound {
    pub case: EnvelopeCase,
    pub max_radius: f64,
    pub samples: usize,
    /// Largest observed ratio to the envelope.
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TestfnReport {
    pub gamma: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub n: u32,
    pub scaling_max_rel_err: f64,
    pub envelope_bound_constants: EnvelopeBound,
    pub plancherel_residual: f64,
    /// Present for integer γ only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_oracle_residuals: Option<Vec<f64>>,
}

/// `0` and `ENVELOPE_SAMPLES − 1` log-spaced radii in `[10⁻², 10³]`.
pub fn envelope_radii() -> Vec<f64> {
    let (lo, hi) = (-2.0f64, ENVELOPE_RADIUS.log10());
    std::iter::once(0.0)
        .chain((0..ENVELOPE_SAMPLES - 1).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (ENVELOPE_SAMPLES - 2) as f64)))
        .collect()
}

/// Denominator floor, as a fraction of the largest sampled value.
const SCALING_FLOOR: f64 = 1e-6;

/// Largest relative gap between the scaling-law and direct evaluations.
/// Near sign changes the gap is measured against `SCALING_FLOOR` times the
/// largest sampled magnitude.
pub fn scaling_error(spec: &TestFunctionSpec, n: u32) -> Result<f64> {
    let mut pairs = Vec::with_capacity(SCALING_SAMPLES.len());
    for &t in &SCALING_SAMPLES {
        let x = t * spec.big_r;
        pairs.push((fractional_laplacian_gamma(spec, x, n)?, fractional_laplacian_gamma_direct(spec, x, n)?));
    }
    let peak = pairs.iter().fold(0.0f64, |m, &(a, b)| m.max(a.abs()).max(b.abs()));
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        let scale = a.abs().max(b.abs()).max(SCALING_FLOOR * peak);
        if scale > 0.0 {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    Ok(worst)
}

/// Fourth-order centred second difference.
fn d2(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Fourth-order centred first difference.
fn d1(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// For integer γ = m: the difference between `(−Δ)^m ψ_R` and the radial
/// finite-difference Laplacian of `(−Δ)^{m−1} ψ_R`, one entry per sample.
pub fn fd_residuals(spec: &TestFunctionSpec, n: u32) -> Vec<f64> {
    let m = spec.integer_part();
    let big_r = spec.big_r;
    let prev = integer_laplacian_bracket(spec.r, m - 1, n);
    let pref = big_r.powf(-2.0 * (m - 1) as f64);
    let f = move |x: f64| pref * prev.eval(x / big_r);
    let h = 1e-3 * big_r;
    FD_SAMPLES
        .iter()
        .map(|&t| {
            let x = t * big_r;
            let lap = d2(&f, x, h) + (n as f64 - 1.0) / x * d1(&f, x, h);
            let exact = fractional_laplacian_gamma(spec, x, n).unwrap_or(f64::NAN);
            (exact + lap).abs()
        })
        .collect()
}

pub fn testfn_check(gamma: f64, r: f64, big_r: f64, n: u32) -> Result<TestfnReport> {
    let spec = TestFunctionSpec::new(gamma, r, big_r)?;
    let radii = envelope_radii();
    let constant = envelope_ratio_sup(&spec, n, &radii)?;
    let pairing = plancherel_pairing(&spec, &RadialProfile::gaussian(1.0, 1.0), n)?;
    Ok(TestfnReport {
        gamma,
        r,
        big_r,
        n,
        scaling_max_rel_err: scaling_error(&spec, n)?,
        envelope_bound_constants: EnvelopeBound {
            case: envelope_case(&spec, n),
            max_radius: ENVELOPE_RADIUS,
            samples: radii.len(),
            constant,
        },
        plancherel_residual: pairing.residual(),
        fd_oracle_residuals: (spec.s == 0.0).then(|| fd_residuals(&spec, n)),
    })
}
