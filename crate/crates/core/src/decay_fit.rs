//! Least-squares power-law fits `value ≈ C(1+t)^α` on norm time series.

use alloc::string::String;
use alloc::vec::Vec;

use crate::params::SystemParams;
use crate::{Error, Result};

/// Minimum number of samples inside a fit window.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeriesMeta {
    pub sigma: f64,
    pub n: u32,
    pub params: Option<SystemParams>,
}

/// Time-stamped values of one norm. Times are strictly increasing.
#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NormSeries {
    pub label: String,
    pub entries: Vec<(f64, f64)>,
    pub meta: SeriesMeta,
}

impl NormSeries {
    pub fn new(label: impl Into<String>, meta: SeriesMeta) -> Self {
        NormSeries { label: label.into(), entries: Vec::new(), meta }
    }

    /// Append a sample; rejects non-increasing times and non-finite values.
    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if let Some(&(last, _)) = self.entries.last() {
            if !(t > last) {
                return Err(Error::InvalidParams("series times must be strictly increasing"));
            }
        }
        if !value.is_finite() {
            return Err(Error::InvalidParams("series values must be finite"));
        }
        self.entries.push((t, value));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
}

pub fn fit_power_law(series: &NormSeries, window: (f64, f64)) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = series.entries.iter().copied().filter(|&(t, _)| t >= window.0 && t <= window.1).collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, found: pts.len() });
    }
    if let Some(&(t, value)) = pts.iter().find(|&&(_, v)| !(v > 0.0)) {
        return Err(Error::NonPositiveValue { t, value });
    }
    let xs: Vec<f64> = pts.iter().map(|&(t, _)| libm::log1p(t)).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, v)| libm::log(v)).collect();
    let m = pts.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, found: 1 });
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let r_squared = if syy <= 1e-28 * (1.0 + my * my) {
        1.0
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let r = y - (intercept + exponent * x);
                r * r
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let t_lo = pts.first().map(|p| p.0).unwrap_or(window.0);
    let t_hi = pts.last().map(|p| p.0).unwrap_or(window.1);
    Ok(DecayFit { exponent, intercept, r_squared, window: (t_lo, t_hi), points: pts.len() })
}

/// How a fitted exponent is compared with a prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Band {
    /// `|fit − predicted| ≤ tol`.
    TwoSided,
    /// `fit ≤ predicted + tol`: the prediction is an upper bound on the rate.
    OneSided,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RateVerdict {
    pub pass: bool,
    pub fitted: f64,
    pub predicted: f64,
    pub tol: f64,
    pub band: Band,
}

pub fn compare_rates(fit: &DecayFit, predicted: f64, tol: f64, band: Band) -> RateVerdict {
    let pass = match band {
        Band::TwoSided => (fit.exponent - predicted).abs() <= tol,
        Band::OneSided => fit.exponent <= predicted + tol,
    };
    RateVerdict { pass, fitted: fit.exponent, predicted, tol, band }
}
