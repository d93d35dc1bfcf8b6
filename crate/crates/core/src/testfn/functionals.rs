//! Space-time functionals `I_R = ∫∫|v|^p φ_R η_R` and `J_R = ∫∫|u|^q φ_R η_R`
//! on physical-space snapshots: grid sums in space, trapezoid rule in time.

use alloc::vec::Vec;

use super::cutoff::{chi, eta, eta_power, phi_power};
use super::TestFunctionSpec;
use crate::grid::GridSpec;
use crate::params::SystemParams;
use crate::{Error, Result};

/// Real fields `u(t, ·)`, `v(t, ·)` on the grid nodes, in flat order.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeWeight {
    /// `η(t/R^{2σ})` with `λ = 2·max(p′, q′)`; support `[0, R^{2σ}]`.
    Eta,
    /// Indicator of `[0, R^{2σ}/2]`, where `η ≡ 1`.
    Plateau,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpatialWeight {
    /// `⟨x/R⟩^{−r}` with `r` from the spec.
    Bracket,
    /// `χ(|x|/R)^λ` with `λ = 2σ·max(p′, q′)` (integer σ).
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionalOptions {
    pub time: TimeWeight,
    pub space: SpatialWeight,
}

impl Default for FunctionalOptions {
    fn default() -> Self {
        FunctionalOptions { time: TimeWeight::Eta, space: SpatialWeight::Bracket }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FunctionalValues {
    pub i_r: f64,
    pub j_r: f64,
    /// Restriction of the time integral to `[R^{2σ}/2, R^{2σ}]`.
    pub i_r_late: f64,
    pub j_r_late: f64,
}

fn spatial_weights(grid: &GridSpec, spec: &TestFunctionSpec, params: &SystemParams, kind: SpatialWeight) -> Vec<f64> {
    let big_r = spec.big_r;
    let lam = phi_power(params.p, params.q, libm::ceil(params.sigma1) as u32);
    grid.radii()
        .into_iter()
        .map(|r| match kind {
            SpatialWeight::Bracket => libm::pow(1.0 + (r / big_r) * (r / big_r), -0.5 * spec.r),
            SpatialWeight::Compact => libm::pow(chi(r / big_r), lam),
        })
        .collect()
}

/// Largest gap in `[0, end]` left by the snapshot times.
fn coverage_gap(times: &[f64], end: f64) -> f64 {
    let inside: Vec<f64> = times.iter().copied().filter(|&t| t >= 0.0 && t <= end).collect();
    if inside.is_empty() {
        return end;
    }
    let mut gap = inside[0];
    for w in inside.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap.max(end - inside[inside.len() - 1])
}

fn trapezoid(ts: &[f64], ys: &[f64], lo: f64, hi: f64) -> f64 {
    let mut acc = 0.0;
    for i in 1..ts.len() {
        let (a, b) = (ts[i - 1], ts[i]);
        if a >= lo && b <= hi {
            acc += 0.5 * (b - a) * (ys[i - 1] + ys[i]);
        }
    }
    acc
}

pub fn functionals(
    snapshots: &[Snapshot],
    grid: &GridSpec,
    spec: &TestFunctionSpec,
    params: &SystemParams,
    opts: &FunctionalOptions,
) -> Result<FunctionalValues> {
    spec.validate()?;
    grid.validate()?;
    let t_scale = libm::pow(spec.big_r, 2.0 * params.sigma1);
    let end = match opts.time {
        TimeWeight::Eta => t_scale,
        TimeWeight::Plateau => 0.5 * t_scale,
    };
    if snapshots.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(Error::InvalidParams("snapshot times must be strictly increasing"));
    }
    let times: Vec<f64> = snapshots.iter().map(|s| s.t).collect();
    let gap = coverage_gap(&times, end);
    if gap > 0.1 * end {
        return Err(Error::InsufficientSnapshots { gap, window: end });
    }
    let weights = spatial_weights(grid, spec, params, opts.space);
    let dv = grid.cell_volume();
    let lam = eta_power(params.p, params.q);
    let mut ts = Vec::new();
    let mut fi = Vec::new();
    let mut fj = Vec::new();
    for s in snapshots.iter().filter(|s| s.t <= end) {
        if s.u.len() != weights.len() || s.v.len() != weights.len() {
            return Err(Error::InvalidParams("snapshot size does not match the grid"));
        }
        let w_t = match opts.time {
            TimeWeight::Eta => eta(s.t / t_scale, lam),
            TimeWeight::Plateau => 1.0,
        };
        let mut si = 0.0;
        let mut sj = 0.0;
        for ((&u, &v), &w) in s.u.iter().zip(&s.v).zip(&weights) {
            si += libm::pow(v.abs(), params.p) * w;
            sj += libm::pow(u.abs(), params.q) * w;
        }
        ts.push(s.t);
        fi.push(w_t * si * dv);
        fj.push(w_t * sj * dv);
    }
    let half = 0.5 * t_scale;
    Ok(FunctionalValues {
        i_r: trapezoid(&ts, &fi, 0.0, end),
        j_r: trapezoid(&ts, &fj, 0.0, end),
        i_r_late: trapezoid(&ts, &fi, half, t_scale),
        j_r_late: trapezoid(&ts, &fj, half, t_scale),
    })
}

/// `count + 1` uniform snapshot times on `[0, R^{2σ}]`.
pub fn snapshot_times(big_r: f64, sigma: f64, count: usize) -> Vec<f64> {
    let end = libm::pow(big_r, 2.0 * sigma);
    (0..=count).map(|i| end * i as f64 / count as f64).collect()
}
