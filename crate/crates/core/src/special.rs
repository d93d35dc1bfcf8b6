//! Special functions used by the propagators and the test-function machinery.

use core::f64::consts::PI;

use crate::quadrature::{integrate, Options};
use crate::Result;

/// `sin(x)/x`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        libm::sin(x) / x
    }
}

/// `(1 − e^{−y})/y`, with value 1 at `y = 0`.
pub fn one_minus_exp_over(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        1.0 - 0.5 * y
    } else {
        -libm::expm1(-y) / y
    }
}

/// `φ₁(z) = (e^z − 1)/z`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-5 {
        1.0 + z / 2.0 * (1.0 + z / 3.0)
    } else {
        libm::expm1(z) / z
    }
}

/// `φ₂(z) = (e^z − 1 − z)/z²`.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < 0.05 {
        // Taylor: Σ z^k/(k+2)!
        let mut term = 0.5;
        let mut sum = 0.5;
        for k in 1..12 {
            term *= z / (k as f64 + 2.0);
            sum += term;
        }
        sum
    } else {
        (libm::expm1(z) - z) / (z * z)
    }
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Surface measure of the unit sphere `S^{n−1}`.
pub fn sphere_measure(n: u32) -> f64 {
    2.0 * libm::pow(PI, n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// Normalisation `C(n, s) = 4^s Γ(n/2 + s)/(π^{n/2} |Γ(−s)|)` for which the
/// hypersingular integral has Fourier symbol `|ξ|^{2s}`.
pub fn frac_laplacian_constant(n: u32, s: f64) -> f64 {
    let abs_gamma_neg = gamma(1.0 - s) / s;
    libm::pow(4.0, s) * gamma(n as f64 / 2.0 + s) / (libm::pow(PI, n as f64 / 2.0) * abs_gamma_neg)
}

/// Modified Bessel function of the second kind,
/// `K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt` for `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let nu = nu.abs();
    // integrand below e^{-745} beyond t_max
    let t_max = libm::acosh(1.0 + 750.0 / x).max(1.0) + 1.0;
    let f = |t: f64| {
        let e = -x * libm::cosh(t) + nu * t;
        0.5 * (libm::exp(e) + libm::exp(-x * libm::cosh(t) - nu * t))
    };
    let mut breaks = [0.0; 8];
    for (i, b) in breaks.iter_mut().enumerate() {
        *b = t_max * (i as f64 + 1.0) / 9.0;
    }
    let scale = libm::exp(-x);
    let est = integrate(f, 0.0, t_max, &breaks, &Options::default().with_rel_tol(1e-13).with_abs_tol(1e-300 * scale))?;
    Ok(est.value)
}

/// Bessel function of the first kind of order zero.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}
