//! Simulation, configuration, file formats and the command-line front end
//! built on `sigmalab-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod fft;
pub mod linear;
pub mod output;
pub mod simulate;
pub mod solver;
pub mod sweep;
pub mod testfn_check;

pub use error::{LabError, Result};
pub use sigmalab_core as core;
