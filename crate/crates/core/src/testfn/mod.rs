//! Test-function machinery for the blow-up argument: Japanese-bracket
//! combinations and their integer and fractional Laplacians, smooth cutoffs,
//! and the space-time functionals `I_R`, `J_R` evaluated on simulation
//! snapshots.

pub mod bracket;
pub mod cutoff;
pub mod fourier;
pub mod fractional;
pub mod functionals;
pub mod pairing;

pub use bracket::{integer_laplacian_bracket, neg_laplacian_bracket, BracketCombo};
pub use fractional::{fractional_laplacian_bracket, fractional_laplacian_gamma, fractional_laplacian_gamma_direct};
pub use functionals::{functionals, FunctionalValues, Snapshot};
pub use pairing::{envelope, envelope_case, envelope_ratio_sup, plancherel_pairing, EnvelopeCase, Pairing};

use crate::{Error, Result};

/// `(γ, r, R)` for `ψ_R(x) = ⟨x/R⟩^{−r}` together with the derived
/// fractional part `s = γ − [γ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestFunctionSpec {
    pub gamma: f64,
    pub s: f64,
    pub r: f64,
    pub big_r: f64,
    /// `σ − [σ]` when the spec is tied to the equation.
    pub theta: Option<f64>,
}

impl TestFunctionSpec {
    pub fn new(gamma: f64, r: f64, big_r: f64) -> Result<Self> {
        let spec = TestFunctionSpec { gamma, s: gamma - libm::floor(gamma), r, big_r, theta: None };
        spec.validate()?;
        Ok(spec)
    }

    /// The construction tied to the equation: `γ = σ`, `r = n + 2θ` with
    /// `θ = σ − [σ]`. For integer σ, `r = n + 2` is used instead.
    pub fn for_sigma(sigma: f64, n: u32, big_r: f64) -> Result<Self> {
        let theta = sigma - libm::floor(sigma);
        let r = if theta > 0.0 { n as f64 + 2.0 * theta } else { n as f64 + 2.0 };
        let mut spec = Self::new(sigma, r, big_r)?;
        spec.theta = Some(theta);
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParams("gamma must be >= 1"));
        }
        if !(self.r > 0.0) || !(self.big_r > 0.0) {
            return Err(Error::InvalidParams("r and R must be positive"));
        }
        if !(0.0..1.0).contains(&self.s) {
            return Err(Error::InvalidParams("fractional part must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Integer part `[γ]`.
    pub fn integer_part(&self) -> u32 {
        libm::floor(self.gamma) as u32
    }
}
