//! Frequency-side evaluation of `(−Δ)^s⟨x⟩^{−ℓ}`, independent of the
//! hypersingular quadrature.
//!
//! The unitary transform of `⟨x⟩^{−ℓ}` on ℝⁿ is
//! `2^{1−ℓ/2}/Γ(ℓ/2) · |ξ|^{(ℓ−n)/2} K_{(n−ℓ)/2}(|ξ|)`; multiplying by
//! `|ξ|^{2s}` and inverting radially gives the operator.

use alloc::vec::Vec;

use super::bracket::BracketCombo;
use crate::quadrature::{integrate, Options};
use crate::special::{bessel_j0, bessel_k, gamma, sinc, sphere_measure};
use crate::{Error, Result};

/// Frequencies beyond this carry less than `e^{−60}` of any transform.
const RHO_MAX: f64 = 60.0;

/// Unitary Fourier transform of `⟨x⟩^{−ℓ}` at `|ξ| = rho > 0`.
pub fn bracket_transform(ell: f64, rho: f64, n: u32) -> Result<f64> {
    let nu = 0.5 * (n as f64 - ell);
    let c = libm::pow(2.0, 1.0 - 0.5 * ell) / gamma(0.5 * ell);
    Ok(c * libm::pow(rho, -nu) * bessel_k(nu, rho)?)
}

/// `(−Δ)^s combo` at radius `x` via the inverse radial transform of
/// `|ξ|^{2s}·ĉ(ξ)`. Requires `s ≥ 0`; `s = 0` reproduces the combo.
pub fn fractional_laplacian_fourier(combo: &BracketCombo, s: f64, x: f64, n: u32, rel_tol: f64) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParams("Fourier evaluator supports n in {1, 2, 3}"));
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidParams("fractional order must be nonnegative"));
    }
    let x = x.abs();
    let kernel = |z: f64| match n {
        1 => libm::cos(z),
        2 => bessel_j0(z),
        _ => sinc(z),
    };
    let mut err: Option<Error> = None;
    let mut integrand = |rho: f64| {
        if rho == 0.0 {
            return 0.0;
        }
        let mut hat = 0.0;
        for &(c, l) in &combo.terms {
            match bracket_transform(l, rho, n) {
                Ok(v) => hat += c * v,
                Err(e) => {
                    err.get_or_insert(e);
                }
            }
        }
        libm::pow(rho, 2.0 * s + n as f64 - 1.0) * hat * kernel(rho * x)
    };
    let mut breaks: Vec<f64> = (0..30).map(|k| libm::ldexp(1.0, -k)).collect();
    breaks.extend([2.0, 4.0, 8.0, 16.0, 32.0]);
    if x > 0.0 {
        // one panel edge per half period of the kernel
        let step = core::f64::consts::PI / x;
        let count = ((RHO_MAX / step) as usize).min(4000);
        breaks.extend((1..=count).map(|k| k as f64 * step));
    }
    let opts = Options::default().with_rel_tol(rel_tol).with_abs_tol(1e-16).with_budget(20_000_000);
    let est = integrate(&mut integrand, 0.0, RHO_MAX, &breaks, &opts)?;
    if let Some(e) = err {
        return Err(e);
    }
    let norm = sphere_measure(n) / libm::pow(2.0 * core::f64::consts::PI, 0.5 * n as f64);
    Ok(norm * est.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_of_lorentzian() {
        // F[(1+x²)^{−1}](ξ) = √(π/2) e^{−|ξ|}
        for &rho in &[0.01, 1.0, 7.0] {
            let v = bracket_transform(2.0, rho, 1).unwrap();
            let e = libm::sqrt(core::f64::consts::FRAC_PI_2) * libm::exp(-rho);
            assert!((v - e).abs() <= 1e-12 * e);
        }
    }

    #[test]
    fn zero_order_reproduces_function() {
        for n in 1..=3 {
            let c = BracketCombo::single(n as f64 + 1.0);
            for &x in &[0.0, 0.5, 2.0] {
                let v = fractional_laplacian_fourier(&c, 0.0, x, n, 1e-10).unwrap();
                assert!((v - c.eval(x)).abs() <= 1e-7 * c.eval(x), "n={n} x={x}: {v} vs {}", c.eval(x));
            }
        }
    }

    #[test]
    fn order_one_is_laplacian() {
        let c = BracketCombo::single(3.0);
        let lap = c.neg_laplacian(3);
        let v = fractional_laplacian_fourier(&c, 1.0, 0.7, 3, 1e-10).unwrap();
        assert!((v - lap.eval(0.7)).abs() <= 1e-7 * lap.eval_abs(0.7));
    }
}
