//! `(p, q)` phase-diagram sweeps: one short simulation per cell, run
//! concurrently, rows sorted by `(p, q)`.

use rayon::prelude::*;
use serde::Serialize;
use sigmalab_core::params::{classify_regime, critical_ratio, Regime};

use crate::config::{config_hash, SweepConfig};
use crate::error::Result;
use crate::output::{num, write_csv};
use crate::simulate::fit_series;
use crate::solver::TorusSolver;

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "SIGMALAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Observed {
    Decayed,
    Grew,
    BlewUp,
    Inconclusive,
}

impl Observed {
    pub fn as_str(self) -> &'static str {
        match self {
            Observed::Decayed => "Decayed",
            Observed::Grew => "Grew",
            Observed::BlewUp => "BlewUp",
            Observed::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCell {
    pub p: f64,
    pub q: f64,
    /// `(1 + max{p, q})/(pq − 1)`.
    pub kappa: f64,
    pub predicted: Regime,
    /// `None` when the run failed.
    pub observed: Option<Observed>,
    pub blowup_time: Option<f64>,
    /// Final total norm over initial total norm.
    pub growth: Option<f64>,
    /// Fitted exponents of the six norms (`None` where the fit failed).
    pub exponents: [Option<f64>; 6],
    pub error: Option<String>,
}

pub const SWEEP_COLUMNS: [&str; 14] = [
    "p",
    "q",
    "kappa",
    "predicted",
    "observed",
    "blowup_time",
    "growth",
    "fit_u_l2",
    "fit_u_dsigma",
    "fit_ut",
    "fit_v_l2",
    "fit_v_dsigma",
    "fit_vt",
    "error",
];

impl PhaseCell {
    pub fn row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        let mut r = vec![
            num(self.p),
            num(self.q),
            num(self.kappa),
            self.predicted.as_str().to_string(),
            self.observed.map(|o| o.as_str().to_string()).unwrap_or_default(),
            opt(self.blowup_time),
            opt(self.growth),
        ];
        r.extend(self.exponents.iter().map(|&e| opt(e)));
        r.push(self.error.clone().unwrap_or_default());
        r
    }
}

/// Observed-verdict rule: blow-up, else growth by 10×, else decay by 10×
/// with all fitted exponents negative, else inconclusive.
pub fn observe(blew_up: bool, growth: f64, exponents: &[Option<f64>; 6]) -> Observed {
    if blew_up {
        Observed::BlewUp
    } else if growth > 10.0 {
        Observed::Grew
    } else if growth < 0.1 && exponents.iter().all(|e| e.is_some_and(|v| v < 0.0)) {
        Observed::Decayed
    } else {
        Observed::Inconclusive
    }
}

pub fn run_cell(cfg: &SweepConfig, p: f64, q: f64) -> PhaseCell {
    let run = cfg.cell(p, q);
    let predicted = classify_regime(&run.params).regime;
    let mut cell = PhaseCell {
        p,
        q,
        kappa: critical_ratio(p, q),
        predicted,
        observed: None,
        blowup_time: None,
        growth: None,
        exponents: [None; 6],
        error: None,
    };
    let outcome = TorusSolver::new(run.grid, run.params).and_then(|mut s| s.run(&run.data, run.t_max, &run.record_times(), &run.options()));
    match outcome {
        Ok(res) => {
            let fits = fit_series(&res, &run.params, run.fit_window(), None);
            for (slot, f) in cell.exponents.iter_mut().zip(&fits) {
                *slot = f.fit.map(|f| f.exponent);
            }
            let last = res.series.records.last().map(|r| r.total()).unwrap_or(res.initial_total_norm);
            let growth = if res.initial_total_norm > 0.0 { last / res.initial_total_norm } else { 1.0 };
            cell.growth = Some(growth);
            cell.blowup_time = res.blowup.map(|b| b.time);
            cell.observed = Some(observe(res.blowup.is_some(), growth, &cell.exponents));
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

/// Worker count from the environment, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// All cells, evaluated concurrently and sorted by `(p, q)`.
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<PhaseCell>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    let mut out: Vec<PhaseCell> = pool.install(|| cells.par_iter().map(|&(p, q)| run_cell(cfg, p, q)).collect());
    out.sort_by(|a, b| a.p.total_cmp(&b.p).then(a.q.total_cmp(&b.q)));
    Ok(out)
}

pub fn write_sweep_csv<W: std::io::Write>(out: W, cfg: &SweepConfig, cells: &[PhaseCell]) -> Result<()> {
    let rows: Vec<Vec<String>> = cells.iter().map(PhaseCell::row).collect();
    write_csv(out, &config_hash(cfg), &SWEEP_COLUMNS, &rows)
}
