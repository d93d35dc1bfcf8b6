//! Hypersingular-integral evaluation of `(−Δ)^s` on radial bracket
//! combinations,
//!
//! ```text
//! (−Δ)^s f(x) = C(n,s)/2 ∫ (2f(x) − f(x+z) − f(x−z)) |z|^{−n−2s} dz,
//! ```
//!
//! reduced to a one-dimensional integral in `h = |z|` over sphere means.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::bracket::{integer_laplacian_bracket, BracketCombo};
use super::TestFunctionSpec;
use crate::quadrature::{integrate, Options};
use crate::special::{frac_laplacian_constant, sphere_measure};
use crate::{Error, Result};

/// Relative tolerance of the hypersingular quadratures.
pub const DEFAULT_REL_TOL: f64 = 1e-11;

/// Terms kept in the small-radius expansions of sphere means.
const SERIES_TERMS: usize = 10;

/// Expansions are used below this multiple of the profile scale.
const SERIES_RADIUS: f64 = 0.1;

/// `y ↦ Σ cᵢ⟨|y|/R⟩^{−ℓᵢ}` on ℝⁿ.
struct ScaledCombo<'a> {
    combo: &'a BracketCombo,
    /// `(−Δ)^k combo` for `k = 0..=SERIES_TERMS`
    powers: Vec<BracketCombo>,
    /// `Γ(n/2)/(k! Γ(n/2+k)) 4^{−k}`
    weights: Vec<f64>,
    scale: f64,
    n: u32,
}

impl<'a> ScaledCombo<'a> {
    fn new(combo: &'a BracketCombo, scale: f64, n: u32) -> Self {
        let mut powers = Vec::with_capacity(SERIES_TERMS + 1);
        powers.push(combo.clone());
        for k in 0..SERIES_TERMS {
            let next = powers[k].neg_laplacian(n);
            powers.push(next);
        }
        let half = n as f64 / 2.0;
        let mut weights = Vec::with_capacity(SERIES_TERMS + 1);
        let mut w = 1.0;
        weights.push(w);
        for k in 1..=SERIES_TERMS {
            w /= 4.0 * k as f64 * (half + k as f64 - 1.0);
            weights.push(w);
        }
        ScaledCombo { combo, powers, weights, scale, n }
    }

    fn value(&self, rho: f64) -> f64 {
        self.combo.eval(rho / self.scale)
    }

    /// `Δᵏf(ρ)`.
    fn laplacian_power(&self, k: usize, rho: f64) -> f64 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * self.powers[k].eval(rho / self.scale) / libm::pow(self.scale, 2.0 * k as f64)
    }

    /// `Σ_{k≥k0} wₖ ε^{2(k−k0)} Δᵏf(ρ)`. For `k0 = 0` this is the mean of
    /// `f` over the sphere of radius ε around a point at radius ρ.
    fn mean_series(&self, rho: f64, eps: f64, k0: usize) -> f64 {
        let e2 = eps * eps;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for k in k0..=SERIES_TERMS {
            sum += self.weights[k] * pow * self.laplacian_power(k, rho);
            pow *= e2;
        }
        sum
    }

    /// Mean of `f(|x + hθ|)` over unit `θ`, with `|x| = r`.
    fn sphere_mean(&self, r: f64, h: f64, tol: f64) -> Result<f64> {
        if h < SERIES_RADIUS * self.scale {
            return Ok(self.mean_series(r, h, 0));
        }
        if self.n > 1 && r < SERIES_RADIUS * self.scale {
            return Ok(self.mean_series(h, r, 0));
        }
        match self.n {
            1 => Ok(0.5 * (self.value(r + h) + self.value((r - h).abs()))),
            3 => {
                let s = self.scale;
                Ok(s * s * self.combo.radial_increment(r / s, h / s) / (2.0 * r * h))
            }
            2 => {
                let f = |phi: f64| {
                    let d2 = r * r + h * h + 2.0 * r * h * libm::cos(phi);
                    self.value(libm::sqrt(d2.max(0.0)))
                };
                let mut breaks = [0.0; 3];
                let mut nb = 0;
                // angles where |x + hθ| equals a multiple of the scale
                for k in [0.25, 1.0, 4.0] {
                    let c = ((k * self.scale).powi(2) - r * r - h * h) / (2.0 * r * h);
                    if c > -1.0 && c < 1.0 {
                        breaks[nb] = libm::acos(c);
                        nb += 1;
                    }
                }
                let abs = tol * 1e-3 * self.combo.eval_abs(0.0);
                let opts = Options::default().with_rel_tol(tol).with_abs_tol(abs);
                Ok(integrate(f, 0.0, PI, &breaks[..nb], &opts)?.value / PI)
            }
            _ => Err(Error::InvalidParams("fractional Laplacian supports n in {1, 2, 3}")),
        }
    }

    /// `2(f(x) − mean)/h²`, by series expansion for small `h`.
    fn reduced_difference(&self, r: f64, h: f64, tol: f64) -> Result<f64> {
        if h < SERIES_RADIUS * self.scale {
            return Ok(-2.0 * self.mean_series(r, h, 1));
        }
        Ok(2.0 * (self.value(r) - self.sphere_mean(r, h, tol)?) / (h * h))
    }
}

/// `(−Δ)^s` of `y ↦ combo(|y|/R)` at radius `x`.
pub fn fractional_laplacian_scaled(combo: &BracketCombo, scale: f64, s: f64, x: f64, n: u32, rel_tol: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParams("fractional order must lie in (0, 1)"));
    }
    if combo.min_exponent().is_some_and(|l| l <= 0.0) {
        return Err(Error::InvalidParams("bracket exponents must be positive"));
    }
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParams("fractional Laplacian supports n in {1, 2, 3}"));
    }
    if combo.terms.is_empty() {
        return Ok(0.0);
    }
    let x = x.abs();
    let f = ScaledCombo::new(combo, scale, n);
    let mag = combo.eval_abs(x / scale).max(combo.eval_abs(0.0) * 1e-30);
    let abs_tol = 1e-3 * rel_tol * mag;
    let opts = Options::default().with_rel_tol(rel_tol).with_abs_tol(abs_tol).with_budget(4_000_000);
    let mut err: Option<Error> = None;
    let mut guard = |v: Result<f64>| match v {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };

    // [0, 1] with h = τ^β, β = 1/(2−2s): ∫ D̄ h^{−1−2s} dh = β ∫ D̄/h² dτ
    let beta = 1.0 / (2.0 - 2.0 * s);
    let inner = integrate(
        |tau| {
            let h = libm::pow(tau, beta);
            beta * guard(f.reduced_difference(x, h, rel_tol))
        },
        0.0,
        1.0,
        &[1e-6, 1e-4, 1e-2, 0.1, 0.5],
        &opts,
    )?
    .value;

    // [1, H] directly, with breakpoints where the shifted profile peaks
    let big_h = 2.0 * x + 8.0 * scale + 2.0;
    let mut breaks = [0.0; 9];
    for (i, k) in [-4.0, -1.0, -0.25, 0.0, 0.25, 1.0, 4.0, 16.0, 64.0].iter().enumerate() {
        breaks[i] = x + k * scale;
    }
    let mid = integrate(|h| guard(f.sphere_mean(x, h, rel_tol)) * libm::pow(h, -1.0 - 2.0 * s), 1.0, big_h, &breaks, &opts)?.value;

    // [H, ∞) with h = 1/u
    let u_max = 1.0 / big_h;
    let mut ubreaks = [0.0; 12];
    for (i, b) in ubreaks.iter_mut().enumerate() {
        *b = u_max * libm::ldexp(1.0, -2 * (i as i32 + 1));
    }
    let tail = integrate(
        |u| {
            if u == 0.0 {
                0.0
            } else {
                guard(f.sphere_mean(x, 1.0 / u, rel_tol)) * libm::pow(u, 2.0 * s - 1.0)
            }
        },
        0.0,
        u_max,
        &ubreaks,
        &opts,
    )?
    .value;
    if let Some(e) = err {
        return Err(e);
    }
    // ∫₁^∞ 2f(x) h^{−1−2s} dh = f(x)/s
    let outer = f.value(x) / s - 2.0 * (mid + tail);
    let c = frac_laplacian_constant(n, s) * sphere_measure(n) / 2.0;
    Ok(c * (inner + outer))
}

/// `(−Δ)^s combo` at radius `x` in ℝⁿ.
pub fn fractional_laplacian_bracket(combo: &BracketCombo, s: f64, x: f64, n: u32) -> Result<f64> {
    fractional_laplacian_scaled(combo, 1.0, s, x, n, DEFAULT_REL_TOL)
}

/// `(−Δ)^γ ψ_R(x)` via the scaling law `R^{−2γ}((−Δ)^γψ)(x/R)`.
pub fn fractional_laplacian_gamma(spec: &TestFunctionSpec, x: f64, n: u32) -> Result<f64> {
    spec.validate()?;
    let combo = integer_laplacian_bracket(spec.r, spec.integer_part(), n);
    let y = x / spec.big_r;
    let base = if spec.s == 0.0 { combo.eval(y) } else { fractional_laplacian_bracket(&combo, spec.s, y, n)? };
    Ok(libm::pow(spec.big_r, -2.0 * spec.gamma) * base)
}

/// `(−Δ)^γ ψ_R(x)` evaluated directly on the rescaled function, without
/// using the scaling law.
pub fn fractional_laplacian_gamma_direct(spec: &TestFunctionSpec, x: f64, n: u32) -> Result<f64> {
    spec.validate()?;
    let m = spec.integer_part();
    let combo = integer_laplacian_bracket(spec.r, m, n);
    let r = spec.big_r;
    let prefactor = libm::pow(r, -2.0 * m as f64);
    if spec.s == 0.0 {
        return Ok(prefactor * combo.eval(x / r));
    }
    Ok(prefactor * fractional_laplacian_scaled(&combo, r, spec.s, x, n, DEFAULT_REL_TOL)?)
}
