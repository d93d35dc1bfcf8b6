//! Periodic grid geometry on `[−L, L)^n`.
//!
//! Nodes are `x_j = −L + jΔx`, `Δx = 2L/N`; the frequency lattice has spacing
//! `Δξ = π/L` and signed indices `k ∈ [−N/2, N/2)` in FFT order.

use alloc::vec::Vec;

use crate::params::SystemParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct GridSpec {
    pub n_dim: u32,
    pub points_per_dim: usize,
    pub half_length: f64,
}

impl GridSpec {
    pub fn new(n_dim: u32, points_per_dim: usize, half_length: f64) -> Result<Self> {
        let g = GridSpec { n_dim, points_per_dim, half_length };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.n_dim) {
            return Err(Error::InvalidParams("grid dimension must be 1, 2 or 3"));
        }
        if self.points_per_dim < 16 || !self.points_per_dim.is_power_of_two() {
            return Err(Error::InvalidParams("points_per_dim must be a power of two >= 16"));
        }
        if !(self.half_length > 0.0) || !self.half_length.is_finite() {
            return Err(Error::InvalidParams("half_length must be positive"));
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.points_per_dim.pow(self.n_dim)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.points_per_dim as f64
    }

    pub fn dxi(&self) -> f64 {
        core::f64::consts::PI / self.half_length
    }

    pub fn cell_volume(&self) -> f64 {
        libm::pow(self.dx(), self.n_dim as f64)
    }

    pub fn frequency_cell(&self) -> f64 {
        libm::pow(self.dxi(), self.n_dim as f64)
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    /// Signed wavenumber index of FFT position `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        let n = self.points_per_dim as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    pub fn wavenumber(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.dxi()
    }

    /// Multi-index of flat position `idx` (last axis fastest).
    pub fn unflatten(&self, mut idx: usize) -> [usize; 3] {
        let n = self.points_per_dim;
        let mut out = [0usize; 3];
        for axis in (0..self.n_dim as usize).rev() {
            out[axis] = idx % n;
            idx /= n;
        }
        out
    }

    /// Physical radius `|x|` of every node, in flat order.
    pub fn radii(&self) -> Vec<f64> {
        (0..self.total_points())
            .map(|i| {
                let m = self.unflatten(i);
                let mut r2 = 0.0;
                for &j in &m[..self.n_dim as usize] {
                    let x = self.coordinate(j);
                    r2 += x * x;
                }
                libm::sqrt(r2)
            })
            .collect()
    }

    /// Frequency magnitude `|ξ|` of every mode, in flat FFT order.
    pub fn frequency_magnitudes(&self) -> Vec<f64> {
        (0..self.total_points())
            .map(|i| {
                let m = self.unflatten(i);
                let mut r2 = 0.0;
                for &k in &m[..self.n_dim as usize] {
                    let xi = self.wavenumber(k);
                    r2 += xi * xi;
                }
                libm::sqrt(r2)
            })
            .collect()
    }

    /// Flat index of the node reflected through the origin, `x ↦ −x`.
    pub fn reflected(&self, idx: usize) -> usize {
        let n = self.points_per_dim;
        let m = self.unflatten(idx);
        let mut out = 0;
        for &j in &m[..self.n_dim as usize] {
            out = out * n + (n - j) % n;
        }
        out
    }

    pub fn max_frequency(&self) -> f64 {
        let one = core::f64::consts::PI / self.dx();
        one * libm::sqrt(self.n_dim as f64)
    }

    /// Largest `t` with `(1+t)^{1/(2σ_min)} ≤ L/8`.
    pub fn t_valid(&self, sigma_min: f64) -> f64 {
        libm::pow(self.half_length / 8.0, 2.0 * sigma_min) - 1.0
    }

    /// `0.1·min(1, 2π/ω_max)` with `ω_max = √(4|ξ|_max^{2σ} − 1)/2`.
    pub fn default_dt(&self, params: &SystemParams) -> f64 {
        let xi = self.max_frequency();
        let a = libm::pow(xi, 2.0 * params.sigma1.max(params.sigma2));
        let omega = 0.5 * libm::sqrt((4.0 * a - 1.0).max(0.0));
        if omega > 0.0 {
            0.1 * (2.0 * core::f64::consts::PI / omega).min(1.0)
        } else {
            0.1
        }
    }
}
