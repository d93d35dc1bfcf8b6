//! Fourier multipliers of the linear problem `ŵ_tt + ŵ_t + |ξ|^{2σ} ŵ = 0`.
//!
//! With `a = |ξ|^{2σ}` the characteristic roots are `λ₁,₂ = (−1 ± √(1−4a))/2`
//! and
//!
//! ```text
//! K̂₀ = (λ₁e^{λ₂t} − λ₂e^{λ₁t})/(λ₁ − λ₂),   K̂₁ = (e^{λ₁t} − e^{λ₂t})/(λ₁ − λ₂).
//! ```
//!
//! All values are real for real `t` and `ξ`. The real branch is written in
//! terms of `(1 − e^{−y})/y` and the oscillatory branch in terms of
//! `cos` and `sinc`, both of which stay smooth through the double root.

use num_complex::Complex64;

use crate::special::{one_minus_exp_over, phi1, phi2, sinc};

/// `|1 − 4|ξ|^{2σ}|` below this is labelled a double root.
pub const DOUBLE_ROOT_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Distinct,
    Double,
    Oscillatory,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicRoots {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub kind: RootKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorValue {
    pub k0: f64,
    pub k1: f64,
    pub dk0: f64,
    pub dk1: f64,
}

impl PropagatorValue {
    /// Apply the 2×2 propagation map to `(ŵ₀, ŵ₁)`.
    pub fn apply(&self, w0: f64, w1: f64) -> (f64, f64) {
        (self.k0 * w0 + self.k1 * w1, self.dk0 * w0 + self.dk1 * w1)
    }
}

/// `|ξ|^{2σ}`.
#[inline]
pub fn symbol_power(xi_mag: f64, sigma: f64) -> f64 {
    if xi_mag == 0.0 {
        0.0
    } else {
        libm::pow(xi_mag, 2.0 * sigma)
    }
}

pub fn roots(xi_mag: f64, sigma: f64) -> CharacteristicRoots {
    roots_from_symbol(symbol_power(xi_mag, sigma))
}

pub fn roots_from_symbol(a: f64) -> CharacteristicRoots {
    let d = 1.0 - 4.0 * a;
    if d.abs() < DOUBLE_ROOT_THRESHOLD {
        let l = Complex64::new(-0.5, 0.0);
        CharacteristicRoots { lambda1: l, lambda2: l, kind: RootKind::Double }
    } else if d > 0.0 {
        let sd = libm::sqrt(d);
        let l1 = -2.0 * a / (1.0 + sd);
        CharacteristicRoots { lambda1: Complex64::new(l1, 0.0), lambda2: Complex64::new(-1.0 - l1, 0.0), kind: RootKind::Distinct }
    } else {
        let w = 0.5 * libm::sqrt(-d);
        CharacteristicRoots { lambda1: Complex64::new(-0.5, w), lambda2: Complex64::new(-0.5, -w), kind: RootKind::Oscillatory }
    }
}

pub fn propagator(t: f64, xi_mag: f64, sigma: f64) -> PropagatorValue {
    propagator_from_symbol(t, symbol_power(xi_mag, sigma))
}

/// Multipliers at time `t` for symbol value `a = |ξ|^{2σ}`.
pub fn propagator_from_symbol(t: f64, a: f64) -> PropagatorValue {
    let d = 1.0 - 4.0 * a;
    if d >= 0.0 {
        let sd = libm::sqrt(d);
        let l1 = -2.0 * a / (1.0 + sd);
        let y = sd * t; // 2μt
        let e1 = libm::exp(l1 * t);
        let g = one_minus_exp_over(y);
        let e2 = libm::exp(-y);
        let k1 = t * e1 * g;
        let k0 = e1 * (0.5 * (1.0 + e2) + 0.5 * t * g);
        let dk1 = e1 * (l1 * t * g + e2);
        PropagatorValue { k0, k1, dk0: -a * k1, dk1 }
    } else {
        let w = 0.5 * libm::sqrt(-d);
        let damp = libm::exp(-0.5 * t);
        let c = libm::cos(w * t);
        let sn = t * sinc(w * t);
        let k1 = damp * sn;
        PropagatorValue { k0: damp * (c + 0.5 * sn), k1, dk0: -a * k1, dk1: damp * (c - 0.5 * sn) }
    }
}

/// Centred-difference residual of the ODE for `K̂₀` and `K̂₁`, maximised over
/// the two.
pub fn ode_residual(t: f64, xi_mag: f64, sigma: f64, h: f64) -> f64 {
    let a = symbol_power(xi_mag, sigma);
    let m = propagator_from_symbol(t - h, a);
    let c = propagator_from_symbol(t, a);
    let p = propagator_from_symbol(t + h, a);
    let res = |fm: f64, f0: f64, fp: f64| ((fp - 2.0 * f0 + fm) / (h * h) + (fp - fm) / (2.0 * h) + a * f0).abs();
    res(m.k0, c.k0, p.k0).max(res(m.k1, c.k1, p.k1))
}

/// Exact integrals of `K̂₁` against a linear-in-time source over one step.
///
/// For `F(τ) = F₀ + (F₁ − F₀)τ/h` the inhomogeneous contribution after a step
/// of length `h` is
/// `û += F₀·(phi0 − phi1) + F₁·phi1` and `ût += F₀·(dphi0 − dphi1) + F₁·dphi1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuhamelWeights {
    /// `∫₀^h K̂₁(h−τ) dτ`
    pub phi0: f64,
    /// `∫₀^h K̂₁(h−τ) τ/h dτ`
    pub phi1: f64,
    /// `∫₀^h ∂ₜK̂₁(h−τ) dτ = K̂₁(h)`
    pub dphi0: f64,
    /// `∫₀^h ∂ₜK̂₁(h−τ) τ/h dτ`
    pub dphi1: f64,
}

pub fn duhamel_weights(h: f64, xi_mag: f64, sigma: f64) -> DuhamelWeights {
    duhamel_weights_from_symbol(h, symbol_power(xi_mag, sigma))
}

/// Weights from `W = ∫₀^h K̂₁` and `G = ∫₀^h K̂₁(s)(h − s) ds`.
pub fn duhamel_weights_from_symbol(h: f64, a: f64) -> DuhamelWeights {
    let k1h = propagator_from_symbol(h, a).k1;
    let (w, g) = integrals_of_k1(h, a);
    DuhamelWeights { phi0: w, phi1: g / h, dphi0: k1h, dphi1: w / h }
}

fn integrals_of_k1(h: f64, a: f64) -> (f64, f64) {
    let rate = 1.0f64.max(libm::sqrt(a));
    if h * rate <= 1.0 {
        return k1_integral_series(h, a);
    }
    if a >= 0.125 {
        let pv = propagator_from_symbol(h, a);
        let w = (1.0 - pv.k0) / a;
        let g = (h - pv.k1 - w) / a;
        return (w, g);
    }
    // well-separated real roots
    let sd = libm::sqrt(1.0 - 4.0 * a);
    let l1 = -2.0 * a / (1.0 + sd);
    let l2 = -1.0 - l1;
    let w = h * (phi1(l1 * h) - phi1(l2 * h)) / sd;
    let g = h * h * (phi2(l1 * h) - phi2(l2 * h)) / sd;
    (w, g)
}

/// Taylor series of `K̂₁` (which solves `y'' + y' + a y = 0`, `y(0) = 0`,
/// `y'(0) = 1`) integrated term by term; accurate while `h·max(1, √a) ≤ 1`.
fn k1_integral_series(h: f64, a: f64) -> (f64, f64) {
    // b_k = c_k h^k with c_{k+2}(k+2)(k+1) = −(k+1)c_{k+1} − a c_k
    let ah2 = a * h * h;
    let (mut b_prev, mut b_cur) = (0.0f64, h);
    let mut w = b_cur / 2.0;
    let mut g = b_cur / 6.0;
    for k in 0..60usize {
        let kf = k as f64;
        let b_next = -(h * (kf + 1.0) * b_cur + ah2 * b_prev) / ((kf + 2.0) * (kf + 1.0));
        b_prev = b_cur;
        b_cur = b_next;
        let m = kf + 2.0; // index of b_cur
        let tw = b_cur / (m + 1.0);
        let tg = b_cur / ((m + 1.0) * (m + 2.0));
        w += tw;
        g += tg;
        if b_cur.abs() < 1e-18 * h && b_prev.abs() < 1e-18 * h {
            break;
        }
    }
    (w * h, g * h * h)
}
