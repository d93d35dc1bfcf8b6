//! Oracle decay studies for the linear problem.

use serde::Serialize;
use sigmalab_core::decay_fit::{fit_power_law, DecayFit, NormSeries, SeriesMeta};
use sigmalab_core::oracle::{linear_norm, log_grid, NormKind};
use sigmalab_core::profile::RadialProfile;

use crate::error::{LabError, Result};
use crate::output::num;

/// A time grid `log:lo:hi:count` or `lin:lo:hi:count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    pub log: bool,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl std::str::FromStr for TimeGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, lo, hi, count] = parts[..] else {
            return Err(format!("expected log:lo:hi:count or lin:lo:hi:count, got {s:?}"));
        };
        let log = match kind {
            "log" => true,
            "lin" => false,
            other => return Err(format!("unknown grid kind {other:?}")),
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let g = TimeGrid { log, lo: num(lo)?, hi: num(hi)?, count: count.parse().map_err(|e| format!("{count:?}: {e}"))? };
        if g.count == 0 || !(g.lo >= 0.0) || !(g.hi >= g.lo) || !g.hi.is_finite() || (g.count > 1 && g.hi == g.lo) {
            return Err(format!("invalid time grid {s:?}"));
        }
        if log && !(g.lo > 0.0) {
            return Err("log grids need lo > 0".into());
        }
        Ok(g)
    }
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        if self.log {
            return log_grid(self.lo, self.hi, self.count);
        }
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearDecayRequest {
    pub sigma: f64,
    pub n: u32,
    pub kind: NormKind,
    pub grid: TimeGrid,
    pub u0: RadialProfile,
    pub u1: RadialProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub t: f64,
    pub norm: Option<f64>,
    /// `ok`, or the failure message.
    pub status: String,
}

impl DecayRow {
    pub fn cells(&self, req: &LinearDecayRequest) -> Vec<String> {
        vec![
            num(self.t),
            self.norm.map(num).unwrap_or_default(),
            req.kind.as_str().to_string(),
            num(req.sigma),
            req.n.to_string(),
            self.status.clone(),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecaySummary {
    pub kind: NormKind,
    pub predicted: f64,
    pub fit: Option<DecayFit>,
    pub warning: Option<String>,
}

pub const DECAY_COLUMNS: [&str; 6] = ["t", "norm", "kind", "sigma", "n", "status"];

pub fn linear_decay(req: &LinearDecayRequest) -> Result<(Vec<DecayRow>, DecaySummary)> {
    if !(req.sigma >= 1.0) || !(1..=3).contains(&req.n) {
        return Err(LabError::config("sigma/n", "need sigma >= 1 and n in {1, 2, 3}"));
    }
    let rows: Vec<DecayRow> = req
        .grid
        .times()
        .into_iter()
        .map(|t| match linear_norm(&req.u0, &req.u1, t, req.sigma, req.n, req.kind) {
            Ok(v) => DecayRow { t, norm: Some(v), status: "ok".into() },
            Err(e) => DecayRow { t, norm: None, status: e.to_string() },
        })
        .collect();
    let mut series = NormSeries::new(req.kind.as_str(), SeriesMeta { sigma: req.sigma, n: req.n, params: None });
    for r in &rows {
        if let Some(v) = r.norm {
            series.push(r.t, v)?;
        }
    }
    let (fit, warning) = match series.entries.as_slice() {
        [] => (None, Some("no successful rows".to_string())),
        [_] => (None, Some("single row: no fit".to_string())),
        e => match fit_power_law(&series, (e[0].0, e[e.len() - 1].0)) {
            Ok(f) => (Some(f), None),
            Err(err) => (None, Some(format!("fit failed: {err}"))),
        },
    };
    let summary = DecaySummary { kind: req.kind, predicted: req.kind.linear_rate(req.sigma, req.n), fit, warning };
    Ok((rows, summary))
}
