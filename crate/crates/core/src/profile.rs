//! Radial initial-data profiles with closed-form unitary Fourier transforms.

use core::f64::consts::PI;

use crate::quadrature::{integrate, Options};
use crate::special::sphere_measure;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ProfileKind {
    #[default]
    Gaussian,
}

/// `A·exp(−|x|²/(2w²))`. A zero amplitude is the zero profile.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct RadialProfile {
    #[cfg_attr(feature = "serde", serde(default))]
    pub kind: ProfileKind,
    pub amplitude: f64,
    pub width: f64,
}

impl Default for RadialProfile {
    fn default() -> Self {
        RadialProfile::zero()
    }
}

impl RadialProfile {
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        RadialProfile { kind: ProfileKind::Gaussian, amplitude, width }
    }

    pub fn zero() -> Self {
        RadialProfile::gaussian(0.0, 1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    pub fn is_valid(&self) -> bool {
        self.width > 0.0 && self.width.is_finite() && self.amplitude.is_finite()
    }

    pub fn value(&self, r: f64) -> f64 {
        let z = r / self.width;
        self.amplitude * libm::exp(-0.5 * z * z)
    }

    /// Unitary transform `A wⁿ exp(−w²ρ²/2)` at `|ξ| = ρ`.
    pub fn hat(&self, rho: f64, n: u32) -> f64 {
        let z = rho * self.width;
        self.amplitude * libm::pow(self.width, n as f64) * libm::exp(-0.5 * z * z)
    }

    /// Radius beyond which `|f̂|²` is below `e^{−80}` of its peak.
    pub fn frequency_cutoff(&self) -> f64 {
        libm::sqrt(80.0) / self.width
    }

    /// Radius beyond which `|f|²` is below `e^{−80}` of its peak.
    pub fn spatial_cutoff(&self) -> f64 {
        libm::sqrt(80.0) * self.width
    }

    pub fn l1_norm(&self, n: u32) -> f64 {
        self.amplitude.abs() * libm::pow(2.0 * PI, n as f64 / 2.0) * libm::pow(self.width, n as f64)
    }

    pub fn l2_norm(&self, n: u32) -> f64 {
        self.amplitude.abs() * libm::pow(PI * self.width * self.width, n as f64 / 4.0)
    }

    /// Inhomogeneous Sobolev norm `(∫(1+|ξ|²)^σ |f̂|² dξ)^{1/2}`.
    pub fn h_sigma_norm(&self, sigma: f64, n: u32) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let rho_max = self.frequency_cutoff() * (1.0 + libm::sqrt(sigma));
        let f = |rho: f64| {
            let h = self.hat(rho, n);
            libm::pow(1.0 + rho * rho, sigma) * h * h * libm::pow(rho, n as f64 - 1.0)
        };
        let breaks = [0.25 * rho_max, 0.5 * rho_max];
        let e = integrate(f, 0.0, rho_max, &breaks, &Options::default().with_rel_tol(1e-12))?;
        Ok(libm::sqrt(sphere_measure(n) * e.value))
    }

    /// `L¹ + H^σ` part of the data norm.
    pub fn position_norm(&self, sigma: f64, n: u32) -> Result<f64> {
        Ok(self.l1_norm(n) + self.h_sigma_norm(sigma, n)?)
    }

    /// `L¹ + L²` part of the data norm.
    pub fn velocity_norm(&self, n: u32) -> f64 {
        self.l1_norm(n) + self.l2_norm(n)
    }
}

/// `‖(w₀, w₁)‖ = ‖w₀‖_{L¹} + ‖w₀‖_{H^σ} + ‖w₁‖_{L¹} + ‖w₁‖_{L²}`.
pub fn data_norm(w0: &RadialProfile, w1: &RadialProfile, sigma: f64, n: u32) -> Result<f64> {
    Ok(w0.position_norm(sigma, n)? + w1.velocity_norm(n))
}
