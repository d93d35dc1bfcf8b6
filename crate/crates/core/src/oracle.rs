//! Ground-truth norms of linear solutions on ℝⁿ, computed on the frequency
//! side by Plancherel and radial quadrature.

use alloc::string::String;
use alloc::vec::Vec;

use crate::decay_fit::{NormSeries, SeriesMeta};
use crate::profile::RadialProfile;
use crate::quadrature::{integrate, Options};
use crate::special::sphere_measure;
use crate::symbol::{propagator_from_symbol, symbol_power};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NormKind {
    /// `‖w(t)‖_{L²}`
    SolutionL2,
    /// `‖|D|^σ w(t)‖_{L²}`
    HomogeneousSigma,
    /// `‖w_t(t)‖_{L²}`
    TimeDerivative,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::SolutionL2, NormKind::HomogeneousSigma, NormKind::TimeDerivative];

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::SolutionL2 => "l2",
            NormKind::HomogeneousSigma => "dsigma",
            NormKind::TimeDerivative => "dt",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "l2" | "SolutionL2" => Some(NormKind::SolutionL2),
            "dsigma" | "HomogeneousSigma" => Some(NormKind::HomogeneousSigma),
            "dt" | "TimeDerivative" => Some(NormKind::TimeDerivative),
            _ => None,
        }
    }

    /// Sharp linear decay exponent `−n/(4σ) − {0, 1/2, 1}`.
    pub fn linear_rate(self, sigma: f64, n: u32) -> f64 {
        let base = -(n as f64) / (4.0 * sigma);
        match self {
            NormKind::SolutionL2 => base,
            NormKind::HomogeneousSigma => base - 0.5,
            NormKind::TimeDerivative => base - 1.0,
        }
    }
}

/// Default quadrature settings for oracle norms.
pub fn default_options() -> Options {
    Options::default().with_rel_tol(1e-12).with_budget(2_000_000)
}

/// Squared-norm integrand `ρ^{n−1} |m(t, ρ)|²`.
fn integrand(w0: &RadialProfile, w1: &RadialProfile, t: f64, sigma: f64, n: u32, kind: NormKind, rho: f64) -> f64 {
    let a = symbol_power(rho, sigma);
    let k = propagator_from_symbol(t, a);
    let (h0, h1) = (w0.hat(rho, n), w1.hat(rho, n));
    let m = match kind {
        NormKind::SolutionL2 => k.k0 * h0 + k.k1 * h1,
        NormKind::HomogeneousSigma => k.k0 * h0 + k.k1 * h1,
        NormKind::TimeDerivative => k.dk0 * h0 + k.dk1 * h1,
    };
    let weight = if kind == NormKind::HomogeneousSigma { a } else { 1.0 };
    let radial = if n == 1 { 1.0 } else { libm::pow(rho, n as f64 - 1.0) };
    weight * m * m * radial
}

/// Breakpoints at the diffusive scale, the double-root seam and the data scale.
fn breakpoints(t: f64, sigma: f64, rho_max: f64, widths: &[f64]) -> Vec<f64> {
    let mut b = Vec::new();
    let scale = libm::pow(1.0 + t, -1.0 / (2.0 * sigma));
    for k in -4..=8 {
        let x = scale * libm::ldexp(1.0, k);
        if x < rho_max {
            b.push(x);
        }
    }
    b.push(libm::pow(0.25, 1.0 / (2.0 * sigma)));
    for &w in widths {
        for m in [0.5, 1.0, 2.0, 4.0] {
            b.push(m / w);
        }
    }
    b
}

pub fn linear_norm(w0: &RadialProfile, w1: &RadialProfile, t: f64, sigma: f64, n: u32, kind: NormKind) -> Result<f64> {
    linear_norm_with(w0, w1, t, sigma, n, kind, &default_options())
}

pub fn linear_norm_with(w0: &RadialProfile, w1: &RadialProfile, t: f64, sigma: f64, n: u32, kind: NormKind, opts: &Options) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParams("oracle supports n in {1, 2, 3}"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParams("oracle time must be finite and >= 0"));
    }
    if !w0.is_valid() || !w1.is_valid() {
        return Err(Error::InvalidParams("profile width must be positive"));
    }
    let active: Vec<&RadialProfile> = [w0, w1].into_iter().filter(|p| !p.is_zero()).collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    let rho_max = active.iter().map(|p| p.frequency_cutoff() * (1.0 + 0.25 * libm::sqrt(sigma))).fold(0.0f64, f64::max);
    let widths: Vec<f64> = active.iter().map(|p| p.width).collect();
    let b = breakpoints(t, sigma, rho_max, &widths);
    let e = integrate(|rho| integrand(w0, w1, t, sigma, n, kind, rho), 0.0, rho_max, &b, opts)?;
    Ok(libm::sqrt(sphere_measure(n) * e.value.max(0.0)))
}

pub fn decay_series(w0: &RadialProfile, w1: &RadialProfile, sigma: f64, n: u32, kind: NormKind, t_grid: &[f64]) -> Result<NormSeries> {
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("time grid must be strictly increasing"));
    }
    let mut entries = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        entries.push((t, linear_norm(w0, w1, t, sigma, n, kind)?));
    }
    Ok(NormSeries { label: String::from(kind.as_str()), entries, meta: SeriesMeta { sigma, n, params: None } })
}

/// `count` log-spaced times from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let (a, b) = (libm::log(lo), libm::log(hi));
            (0..count).map(|i| if i + 1 == count { hi } else { libm::exp(a + (b - a) * i as f64 / (count - 1) as f64) }).collect()
        }
    }
}
