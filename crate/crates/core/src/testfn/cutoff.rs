//! Smooth cutoffs `η = χ^λ` with `χ ≡ 1` on `[0, 1/2]` and `χ ≡ 0` on
//! `[1, ∞)`, built from the C³ smoothstep `S(z) = 35z⁴ − 84z⁵ + 70z⁶ − 20z⁷`.

/// `(χ, χ', χ'')` at `y ≥ 0`.
pub fn chi_derivs(y: f64) -> (f64, f64, f64) {
    if y <= 0.5 {
        return (1.0, 0.0, 0.0);
    }
    if y >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let z = 2.0 * (y - 0.5);
    let z3 = z * z * z;
    let s = z3 * z * (35.0 + z * (-84.0 + z * (70.0 - 20.0 * z)));
    let ds = z3 * (140.0 + z * (-420.0 + z * (420.0 - 140.0 * z)));
    let d2s = z * z * (420.0 + z * (-1680.0 + z * (2100.0 - 840.0 * z)));
    (1.0 - s, -2.0 * ds, -4.0 * d2s)
}

pub fn chi(y: f64) -> f64 {
    chi_derivs(y).0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaDerivs {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `η(t) = χ(t)^λ`.
pub fn eta(t: f64, lam: f64) -> f64 {
    libm::pow(chi(t), lam)
}

pub fn eta_derivs(t: f64, lam: f64) -> EtaDerivs {
    let (c, c1, c2) = chi_derivs(t);
    if c == 0.0 {
        return EtaDerivs { value: 0.0, d1: 0.0, d2: 0.0 };
    }
    let value = libm::pow(c, lam);
    let d1 = lam * libm::pow(c, lam - 1.0) * c1;
    let d2 = lam * libm::pow(c, lam - 2.0) * ((lam - 1.0) * c1 * c1 + c * c2);
    EtaDerivs { value, d1, d2 }
}

/// Power `λ = 2·max(p′, q′)` for the time cutoff.
pub fn eta_power(p: f64, q: f64) -> f64 {
    2.0 * conjugate(p).max(conjugate(q))
}

/// Power `λ = 2σ·max(p′, q′)` for the spatial cutoff with integer σ, large
/// enough that `|Δ^σφ|^{p′}/φ^{p′−1}` stays bounded.
pub fn phi_power(p: f64, q: f64, sigma: u32) -> f64 {
    sigma as f64 * eta_power(p, q)
}

/// Hölder conjugate `κ/(κ−1)`.
pub fn conjugate(kappa: f64) -> f64 {
    kappa / (kappa - 1.0)
}

/// `sup_{[1/2,1)} η^{−κ′/κ}(|η′|^{κ′} + |η″|^{κ′})` on `samples` points,
/// evaluated in logarithms so the vanishing end of the cutoff is harmless.
pub fn eta_ratio_sup(kappa: f64, lam: f64, samples: usize) -> f64 {
    let kc = conjugate(kappa);
    let mut sup: f64 = 0.0;
    for i in 1..samples {
        let t = 0.5 + 0.5 * i as f64 / samples as f64;
        let (c, c1, c2) = chi_derivs(t);
        if c <= 0.0 {
            continue;
        }
        let lc = libm::log(c);
        let log_eta = lam * lc;
        let log_d1 = libm::log(lam) + (lam - 1.0) * lc + libm::log(c1.abs());
        let inner = ((lam - 1.0) * c1 * c1 + c * c2).abs();
        let log_d2 = libm::log(lam) + (lam - 2.0) * lc + libm::log(inner);
        let base = -(kc / kappa) * log_eta;
        let v = libm::exp(base + kc * log_d1) + libm::exp(base + kc * log_d2);
        if v.is_finite() {
            sup = sup.max(v);
        }
    }
    sup
}

/// `φ(x) = χ(|x|)^λ`.
pub fn phi(r: f64, lam: f64) -> f64 {
    eta(r, lam)
}

/// `Δ^σφ` at radius `r` in ℝⁿ by nested fourth-order centred differences of
/// the radial Laplacian `f'' + (n−1)f'/r`.
pub fn phi_laplacian_power(r: f64, lam: f64, sigma: u32, n: u32, h: f64) -> f64 {
    if sigma == 0 {
        return phi(r, lam);
    }
    // φ is constant on [0, 1/2] and zero on [1, ∞)
    let reach = 2.0 * h * sigma as f64;
    if r + reach <= 0.5 || r - reach >= 1.0 {
        return 0.0;
    }
    let f = |x: f64| phi_laplacian_power(x.abs(), lam, sigma - 1, n, h);
    let (fm2, fm1, f0, fp1, fp2) = (f(r - 2.0 * h), f(r - h), f(r), f(r + h), f(r + 2.0 * h));
    let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    d2 + (n as f64 - 1.0) * d1 / r
}

/// `sup |Δ^σφ|^{κ′}/φ^{κ′−1}` over `samples` radii in `(1/2, 1)`.
pub fn phi_ratio_sup(kappa: f64, lam: f64, sigma: u32, n: u32, samples: usize) -> f64 {
    let kc = conjugate(kappa);
    let mut sup: f64 = 0.0;
    for i in 1..samples {
        let r = 0.5 + 0.5 * i as f64 / samples as f64;
        let p = phi(r, lam);
        if p <= 0.0 {
            continue;
        }
        let d = phi_laplacian_power(r, lam, sigma, n, 1e-3).abs();
        let v = libm::pow(d, kc) / libm::pow(p, kc - 1.0);
        if v.is_finite() {
            sup = sup.max(v);
        }
    }
    sup
}
