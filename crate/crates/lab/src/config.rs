//! Run and sweep configuration files: strict JSON with unknown-field
//! rejection, field-path diagnostics and a provenance hash.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sigmalab_core::grid::GridSpec;
use sigmalab_core::params::{SystemParams, DEFAULT_EPS};

use crate::error::{LabError, Result};
use crate::solver::{InitialData, RunOptions, DEFAULT_BLOWUP_FACTOR};

/// Time step: a fixed positive value or `"auto"`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum DtSpec {
    #[default]
    Auto,
    Fixed(f64),
}

impl DtSpec {
    pub fn resolve(&self, grid: &GridSpec, params: &SystemParams) -> f64 {
        match *self {
            DtSpec::Auto => grid.default_dt(params),
            DtSpec::Fixed(dt) => dt,
        }
    }
}

impl Serialize for DtSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            DtSpec::Auto => s.serialize_str("auto"),
            DtSpec::Fixed(v) => s.serialize_f64(v),
        }
    }
}

impl<'de> Deserialize<'de> for DtSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = DtSpec;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or \"auto\"")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<DtSpec, E> {
                if v == "auto" {
                    Ok(DtSpec::Auto)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<DtSpec, E> {
                Ok(DtSpec::Fixed(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<DtSpec, E> {
                Ok(DtSpec::Fixed(v as f64))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<DtSpec, E> {
                Ok(DtSpec::Fixed(v as f64))
            }
        }
        d.deserialize_any(V)
    }
}

/// Record cadence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RecordSpec {
    /// `0, Δ, 2Δ, …` up to `t_max`.
    Every(f64),
    /// `count` log-spaced times in `[lo, hi]`.
    Log { lo: f64, hi: f64, count: usize },
    /// Explicit times.
    Times(Vec<f64>),
}

impl RecordSpec {
    pub fn times(&self, t_max: f64) -> Vec<f64> {
        match self {
            RecordSpec::Every(step) => {
                let count = (t_max / step * (1.0 + 1e-12)).floor() as usize;
                (0..=count).map(|k| k as f64 * step).filter(|&t| t <= t_max).collect()
            }
            RecordSpec::Log { lo, hi, count } => sigmalab_core::oracle::log_grid(*lo, *hi, *count),
            RecordSpec::Times(v) => v.clone(),
        }
    }

    fn validate(&self, path: &str) -> Result<()> {
        let bad = |m: &str| Err(LabError::config(path, m));
        match self {
            RecordSpec::Every(step) if !(*step > 0.0) || !step.is_finite() => bad("cadence must be positive"),
            RecordSpec::Log { lo, hi, count } if !(*lo > 0.0 && hi >= lo && *count >= 1) => {
                bad("log cadence needs 0 < lo <= hi and count >= 1")
            }
            RecordSpec::Times(v) if v.iter().any(|t| !t.is_finite() || *t < 0.0) => bad("times must be finite and >= 0"),
            _ => Ok(()),
        }
    }
}

fn default_blowup() -> f64 {
    DEFAULT_BLOWUP_FACTOR
}

fn default_true() -> bool {
    true
}

/// Everything a run needs apart from the system parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    pub grid: GridSpec,
    #[serde(default)]
    pub data: InitialData,
    pub t_max: f64,
    #[serde(default)]
    pub dt: DtSpec,
    pub record: RecordSpec,
    /// Blow-up threshold as a multiple of the initial total norm.
    #[serde(default = "default_blowup")]
    pub blowup_threshold: f64,
    #[serde(default)]
    pub seed: u64,
    /// Fit window `[lo, hi]`; defaults to `[t_hi/10, t_hi]` with `t_hi = min(t_max, t_valid)`.
    #[serde(default)]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default = "default_true")]
    pub adaptive: bool,
    #[serde(default)]
    pub linear_only: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: SystemParams,
    pub grid: GridSpec,
    #[serde(default)]
    pub data: InitialData,
    pub t_max: f64,
    #[serde(default)]
    pub dt: DtSpec,
    pub record: RecordSpec,
    #[serde(default = "default_blowup")]
    pub blowup_threshold: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default = "default_true")]
    pub adaptive: bool,
    #[serde(default)]
    pub linear_only: bool,
}

impl RunConfig {
    pub fn from_settings(params: SystemParams, s: RunSettings) -> Self {
        RunConfig {
            params,
            grid: s.grid,
            data: s.data,
            t_max: s.t_max,
            dt: s.dt,
            record: s.record,
            blowup_threshold: s.blowup_threshold,
            seed: s.seed,
            fit_window: s.fit_window,
            adaptive: s.adaptive,
            linear_only: s.linear_only,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| LabError::config("params", e.to_string()))?;
        self.grid.validate().map_err(|e| LabError::config("grid", e.to_string()))?;
        if self.grid.n_dim != self.params.n {
            return Err(LabError::config("grid.n_dim", "must equal params.n"));
        }
        self.data.validate()?;
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(LabError::config("t_max", "must be positive and finite"));
        }
        if let DtSpec::Fixed(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(LabError::config("dt", "must be positive or \"auto\""));
            }
        }
        self.record.validate("record")?;
        if !(self.blowup_threshold > 0.0) {
            return Err(LabError::config("blowup_threshold", "must be positive"));
        }
        if let Some([lo, hi]) = self.fit_window {
            if !(lo >= 0.0 && hi > lo) {
                return Err(LabError::config("fit_window", "needs 0 <= lo < hi"));
            }
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.dt.resolve(&self.grid, &self.params)
    }

    pub fn options(&self) -> RunOptions {
        RunOptions {
            dt: self.dt(),
            blowup_factor: self.blowup_threshold,
            adaptive: self.adaptive,
            linear_only: self.linear_only,
            snapshot_times: Vec::new(),
        }
    }

    pub fn record_times(&self) -> Vec<f64> {
        self.record.times(self.t_max)
    }

    /// Upper end of the trustworthy window on the torus.
    pub fn t_hi(&self) -> f64 {
        let sigma_min = self.params.sigma1.min(self.params.sigma2);
        self.t_max.min(self.grid.t_valid(sigma_min))
    }

    pub fn fit_window(&self) -> (f64, f64) {
        match self.fit_window {
            Some([lo, hi]) => (lo, hi),
            None => {
                let hi = self.t_hi();
                (0.1 * hi, hi)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    /// `lo, lo+step, …` up to `hi`; empty when `hi < lo`.
    pub fn values(&self) -> Vec<f64> {
        if self.hi < self.lo {
            return Vec::new();
        }
        let count = ((self.hi - self.lo) / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize;
        (0..=count).map(|k| round12(self.lo + k as f64 * self.step)).collect()
    }

    fn validate(&self, path: &str) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(LabError::config(format!("{path}.step"), "must be positive"));
        }
        if !(self.lo > 1.0) || !self.hi.is_finite() {
            return Err(LabError::config(format!("{path}.lo"), "must exceed 1"));
        }
        Ok(())
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedParams {
    pub n: u32,
    pub sigma1: f64,
    pub sigma2: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p_range: Range,
    pub q_range: Range,
    pub fixed: FixedParams,
    pub template: RunSettings,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.p_range.validate("p_range")?;
        self.q_range.validate("q_range")?;
        let probe = self.cell(self.p_range.lo, self.q_range.lo);
        probe.validate().map_err(|e| match e {
            LabError::Config { path, message } => LabError::config(format!("template.{path}"), message),
            other => other,
        })
    }

    pub fn cells(&self) -> Vec<(f64, f64)> {
        let qs = self.q_range.values();
        self.p_range.values().into_iter().flat_map(|p| qs.iter().map(move |&q| (p, q))).collect()
    }

    pub fn cell(&self, p: f64, q: f64) -> RunConfig {
        let f = self.fixed;
        let params = SystemParams { n: f.n, sigma1: f.sigma1, sigma2: f.sigma2, p, q, eps: f.eps };
        RunConfig::from_settings(params, self.template.clone())
    }
}

/// Parse JSON text, reporting the path of the offending field.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        LabError::config(if path.is_empty() { ".".into() } else { path }, e.into_inner().to_string())
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.display().to_string(), source })
}

pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let cfg: RunConfig = parse_json(&read_text(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_sweep_config(path: &Path) -> Result<SweepConfig> {
    let cfg: SweepConfig = parse_json(&read_text(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

/// SHA-256 of the canonical JSON serialisation.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("configs serialise");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
