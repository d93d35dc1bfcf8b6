//! Envelope bounds for `(−Δ)^γ⟨x⟩^{−r}` and the Plancherel pairing
//! between a bracket test function and a Gaussian.

use super::fourier::bracket_transform;
use super::fractional::fractional_laplacian_gamma;
use super::TestFunctionSpec;
use crate::profile::RadialProfile;
use crate::quadrature::{integrate, Options};
use crate::special::sphere_measure;
use crate::{Error, Result};

/// Which of the three decay regimes applies, decided by `r + 2[γ]` against `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum EnvelopeCase {
    Below,
    Critical,
    Above,
}

pub fn envelope_case(spec: &TestFunctionSpec, n: u32) -> EnvelopeCase {
    let lhs = spec.r + 2.0 * spec.integer_part() as f64;
    let nn = n as f64;
    if (lhs - nn).abs() <= 1e-12 * nn {
        EnvelopeCase::Critical
    } else if lhs < nn {
        EnvelopeCase::Below
    } else {
        EnvelopeCase::Above
    }
}

/// Envelope of `|(−Δ)^γ⟨x⟩^{−r}|` at radius `x` (unscaled, `R = 1`).
pub fn envelope(spec: &TestFunctionSpec, n: u32, x: f64) -> f64 {
    let b2 = 1.0 + x * x;
    let tail = -0.5 * (n as f64 + 2.0 * spec.s);
    match envelope_case(spec, n) {
        EnvelopeCase::Below => libm::pow(b2, -0.5 * (spec.r + 2.0 * spec.gamma)),
        EnvelopeCase::Critical => libm::pow(b2, tail) * libm::log(core::f64::consts::E + x.abs()),
        EnvelopeCase::Above => libm::pow(b2, tail),
    }
}

/// Largest ratio `|(−Δ)^γ⟨x⟩^{−r}| / envelope(x)` over the sample radii.
pub fn envelope_ratio_sup(spec: &TestFunctionSpec, n: u32, radii: &[f64]) -> Result<f64> {
    let unscaled = TestFunctionSpec { big_r: 1.0, ..*spec };
    let mut sup: f64 = 0.0;
    for &x in radii {
        let v = fractional_laplacian_gamma(&unscaled, x, n)?;
        sup = sup.max(v.abs() / envelope(spec, n, x));
    }
    Ok(sup)
}

/// Both sides of `∫ψ_R·(−Δ)^γ g = ∫(−Δ)^γψ_R·g` for a Gaussian `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Pairing {
    /// Frequency side: `∫ ψ̂_R(ξ)|ξ|^{2γ} ĝ(ξ) dξ`.
    pub fourier: f64,
    /// Physical side: `∫ (−Δ)^γψ_R(x) g(x) dx` with the hypersingular evaluator.
    pub physical: f64,
}

impl Pairing {
    pub fn residual(&self) -> f64 {
        (self.fourier - self.physical).abs() / self.fourier.abs().max(self.physical.abs()).max(f64::MIN_POSITIVE)
    }
}

pub fn plancherel_pairing(spec: &TestFunctionSpec, g: &RadialProfile, n: u32) -> Result<Pairing> {
    spec.validate()?;
    if !g.is_valid() || g.is_zero() {
        return Err(Error::InvalidParams("pairing needs a nonzero Gaussian"));
    }
    let big_r = spec.big_r;
    let nf = n as f64;
    let opts = Options::default().with_rel_tol(1e-10).with_panels(4);
    let mut err: Option<Error> = None;

    let rho_max = g.frequency_cutoff();
    let fourier_breaks = [rho_max / 64.0, rho_max / 16.0, rho_max / 4.0];
    let fourier = integrate(
        |rho| {
            if rho == 0.0 {
                return 0.0;
            }
            let psi_hat = match bracket_transform(spec.r, big_r * rho, n) {
                Ok(v) => libm::pow(big_r, nf) * v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            };
            psi_hat * libm::pow(rho, 2.0 * spec.gamma + nf - 1.0) * g.hat(rho, n)
        },
        0.0,
        rho_max,
        &fourier_breaks,
        &opts,
    )?
    .value;
    if let Some(e) = err.take() {
        return Err(e);
    }

    let x_max = g.spatial_cutoff();
    let physical_breaks = [g.width, 2.0 * g.width, 4.0 * g.width];
    let physical = integrate(
        |x| match fractional_laplacian_gamma(spec, x, n) {
            Ok(v) => v * g.value(x) * libm::pow(x, nf - 1.0),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        x_max,
        &physical_breaks,
        &opts,
    )?
    .value;
    if let Some(e) = err {
        return Err(e);
    }
    let w = sphere_measure(n);
    Ok(Pairing { fourier: w * fourier, physical: w * physical })
}
