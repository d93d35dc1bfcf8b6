//! Numerical core for weakly coupled damped σ-evolution systems
//!
//! ```text
//! u_tt + (-Δ)^σ₁ u + u_t = |v|^p
//! v_tt + (-Δ)^σ₂ v + v_t = |u|^q
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and carries everything that is
//! pure arithmetic: exponent conditions and regime classification
//! ([`params`]), the exact Fourier multipliers of the linear problem
//! ([`symbol`]), frequency-side ground-truth norms ([`oracle`]), the
//! Japanese-bracket test-function machinery ([`testfn`]) and power-law
//! regression ([`decay_fit`]). Transforms, IO and orchestration live in the
//! `sigmalab` crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decay_fit;
mod error;
pub mod exact;
pub mod grid;
pub mod oracle;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod special;
pub mod symbol;
pub mod testfn;

pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
