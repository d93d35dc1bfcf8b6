//! Pseudo-spectral simulator for the coupled system on the periodic box
//! `[−L, L)ⁿ`: exact linear propagation per Fourier mode and a second-order
//! exponential (ETD2RK) Duhamel integrator for the couplings `|v|^p`, `|u|^q`.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sigmalab_core::decay_fit::{NormSeries, SeriesMeta};
use sigmalab_core::grid::GridSpec;
use sigmalab_core::params::SystemParams;
use sigmalab_core::profile::{data_norm, RadialProfile};
use sigmalab_core::symbol::{duhamel_weights_from_symbol, propagator_from_symbol, symbol_power, DuhamelWeights, PropagatorValue};
use sigmalab_core::testfn::Snapshot;

use crate::error::{LabError, Result};
use crate::fft::Transform;

/// Column names of the six recorded norms, in storage order.
pub const NORM_COLUMNS: [&str; 6] = ["norm_u_l2", "norm_u_dsigma", "norm_ut", "norm_v_l2", "norm_v_dsigma", "norm_vt"];

/// Default blow-up threshold as a multiple of the initial total norm.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e6;

/// Largest admissible tail mass outside the box, relative to the total.
const TAIL_LIMIT: f64 = 1e-10;

/// Top-octave energy fraction above which resolution is reported as inadequate.
const TAIL_WARNING: f64 = 1e-6;

/// Target for `h·λ` with `λ` the growth rate of the linearised coupling.
const ADAPTIVE_TARGET: f64 = 0.1;
const MAX_HALVINGS: u32 = 40;
const MAX_CACHED: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default)]
    pub u0: RadialProfile,
    #[serde(default)]
    pub u1: RadialProfile,
    #[serde(default)]
    pub v0: RadialProfile,
    #[serde(default)]
    pub v1: RadialProfile,
}

impl InitialData {
    pub fn zero() -> Self {
        InitialData::default()
    }

    pub fn profiles(&self) -> [(&'static str, &RadialProfile); 4] {
        [("u0", &self.u0), ("u1", &self.u1), ("v0", &self.v0), ("v1", &self.v1)]
    }

    /// Data norms `(‖(u₀,u₁)‖_{𝒜^{σ₁}}, ‖(v₀,v₁)‖_{𝒜^{σ₂}})`.
    pub fn a_norms(&self, params: &SystemParams) -> Result<(f64, f64)> {
        let n = params.n;
        Ok((data_norm(&self.u0, &self.u1, params.sigma1, n)?, data_norm(&self.v0, &self.v1, params.sigma2, n)?))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in self.profiles() {
            if !p.is_valid() {
                return Err(LabError::config(format!("data.{name}"), "width must be positive and amplitude finite"));
            }
        }
        Ok(())
    }
}

/// Fourier coefficients of `(u, uₜ, v, vₜ)` at time `time`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralState {
    pub u_hat: Vec<Complex64>,
    pub ut_hat: Vec<Complex64>,
    pub v_hat: Vec<Complex64>,
    pub vt_hat: Vec<Complex64>,
    pub time: f64,
    pub blown_up: bool,
}

impl SpectralState {
    pub fn zeros(len: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); len];
        SpectralState { u_hat: z.clone(), ut_hat: z.clone(), v_hat: z.clone(), vt_hat: z, time: 0.0, blown_up: false }
    }

    pub fn is_finite(&self) -> bool {
        [&self.u_hat, &self.ut_hat, &self.v_hat, &self.vt_hat].iter().all(|f| f.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormRecord {
    pub t: f64,
    pub norms: [f64; 6],
}

impl NormRecord {
    pub fn total(&self) -> f64 {
        self.norms.iter().sum()
    }
}

/// Six-norm records at strictly increasing times.
#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct RunSeries {
    pub records: Vec<NormRecord>,
}

impl RunSeries {
    /// One norm as a fit-ready series.
    pub fn component(&self, index: usize, params: &SystemParams) -> NormSeries {
        let sigma = if index < 3 { params.sigma1 } else { params.sigma2 };
        let meta = SeriesMeta { sigma, n: params.n, params: Some(*params) };
        let mut s = NormSeries::new(NORM_COLUMNS[index], meta);
        for r in &self.records {
            // records are strictly increasing and finite by construction
            let _ = s.push(r.t, r.norms[index]);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowupEvent {
    pub time: f64,
    /// Largest of the six norms at detection (infinite if a value was non-finite).
    pub norm_at_detection: f64,
    pub threshold: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub min_step: f64,
    /// Largest `max|Im|/max|Re|` of the inverse-transformed fields.
    pub max_imag_residue: f64,
    /// Largest top-octave energy fraction seen at record times.
    pub max_tail_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub series: RunSeries,
    pub blowup: Option<BlowupEvent>,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
    pub initial_total_norm: f64,
    pub diagnostics: Diagnostics,
    pub config_echo: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    /// Base time step.
    pub dt: f64,
    /// Blow-up when a norm exceeds this multiple of the initial total norm.
    pub blowup_factor: f64,
    /// Halve the step while the coupling grows fast.
    pub adaptive: bool,
    /// Drop the couplings and use exact linear propagation only.
    pub linear_only: bool,
    /// Times at which physical fields are stored.
    pub snapshot_times: Vec<f64>,
}

impl RunOptions {
    pub fn new(dt: f64) -> Self {
        RunOptions { dt, blowup_factor: DEFAULT_BLOWUP_FACTOR, adaptive: true, linear_only: false, snapshot_times: Vec::new() }
    }
}

/// Extra physical-space source `(f_u, f_v)` added to the couplings at time `t`.
pub type Forcing = dyn Fn(f64, &mut [f64], &mut [f64]) + Send + Sync;

struct ModeTables {
    prop: Vec<PropagatorValue>,
    weights: Vec<DuhamelWeights>,
}

impl ModeTables {
    fn new(symbols: &[f64], h: f64) -> Self {
        ModeTables {
            prop: symbols.iter().map(|&a| propagator_from_symbol(h, a)).collect(),
            weights: symbols.iter().map(|&a| duhamel_weights_from_symbol(h, a)).collect(),
        }
    }
}

struct StepTables {
    u: Arc<ModeTables>,
    v: Arc<ModeTables>,
}

struct Workspace {
    bu: Vec<Complex64>,
    bv: Vec<Complex64>,
    fu: Vec<f64>,
    fv: Vec<f64>,
    n0u: Vec<Complex64>,
    n0v: Vec<Complex64>,
    n1u: Vec<Complex64>,
    n1v: Vec<Complex64>,
    pred: SpectralState,
}

/// Maxima of the physical fields produced while evaluating the couplings.
#[derive(Clone, Copy, Debug, Default)]
struct FieldStats {
    max_u: f64,
    max_v: f64,
    imag_residue: f64,
}

pub struct TorusSolver {
    grid: GridSpec,
    params: SystemParams,
    transform: Transform,
    radii: Vec<f64>,
    xi: Vec<f64>,
    symbol_u: Vec<f64>,
    symbol_v: Vec<f64>,
    forcing: Option<Box<Forcing>>,
    cache: HashMap<u64, Arc<StepTables>>,
    work: Workspace,
}

impl TorusSolver {
    pub fn new(grid: GridSpec, params: SystemParams) -> Result<Self> {
        grid.validate()?;
        params.validate()?;
        if grid.n_dim != params.n {
            return Err(LabError::config("grid.n_dim", "must equal params.n"));
        }
        let transform = Transform::new(&grid);
        let xi = grid.frequency_magnitudes();
        let symbol_u: Vec<f64> = xi.iter().map(|&k| symbol_power(k, params.sigma1)).collect();
        let symbol_v: Vec<f64> = xi.iter().map(|&k| symbol_power(k, params.sigma2)).collect();
        let len = transform.len();
        let zc = vec![Complex64::new(0.0, 0.0); len];
        let work = Workspace {
            bu: zc.clone(),
            bv: zc.clone(),
            fu: vec![0.0; len],
            fv: vec![0.0; len],
            n0u: zc.clone(),
            n0v: zc.clone(),
            n1u: zc.clone(),
            n1v: zc,
            pred: SpectralState::zeros(len),
        };
        Ok(TorusSolver { radii: grid.radii(), grid, params, transform, xi, symbol_u, symbol_v, forcing: None, cache: HashMap::new(), work })
    }

    pub fn with_forcing(mut self, forcing: Box<Forcing>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Node radii `|x|` in flat order.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Mode magnitudes `|ξ|` in flat FFT order.
    pub fn frequencies(&self) -> &[f64] {
        &self.xi
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    /// Sample the profiles on the nodes and transform.
    pub fn init(&self, data: &InitialData) -> Result<SpectralState> {
        data.validate()?;
        let n = self.grid.n_dim as f64;
        let l = self.grid.half_length;
        for (name, p) in data.profiles() {
            if p.is_zero() {
                continue;
            }
            let one_axis = libm::erfc(l / (std::f64::consts::SQRT_2 * p.width));
            let tail = 1.0 - (1.0 - one_axis).powf(n);
            if tail > TAIL_LIMIT {
                return Err(LabError::ProfileTooWide { name, tail });
            }
        }
        let sample = |p: &RadialProfile| -> Vec<Complex64> {
            let mut d: Vec<Complex64> = self.radii.iter().map(|&r| Complex64::new(p.value(r), 0.0)).collect();
            if !p.is_zero() {
                self.transform.forward(&mut d);
            }
            d
        };
        Ok(SpectralState {
            u_hat: sample(&data.u0),
            ut_hat: sample(&data.u1),
            v_hat: sample(&data.v0),
            vt_hat: sample(&data.v1),
            time: 0.0,
            blown_up: false,
        })
    }

    /// `‖u‖, ‖|D|^{σ₁}u‖, ‖uₜ‖, ‖v‖, ‖|D|^{σ₂}v‖, ‖vₜ‖` by Parseval on the lattice.
    pub fn norms(&self, state: &SpectralState) -> [f64; 6] {
        let mut acc = [0.0f64; 6];
        for i in 0..self.xi.len() {
            let (u, ut, v, vt) =
                (state.u_hat[i].norm_sqr(), state.ut_hat[i].norm_sqr(), state.v_hat[i].norm_sqr(), state.vt_hat[i].norm_sqr());
            acc[0] += u;
            acc[1] += self.symbol_u[i] * u;
            acc[2] += ut;
            acc[3] += v;
            acc[4] += self.symbol_v[i] * v;
            acc[5] += vt;
        }
        let cell = self.grid.frequency_cell();
        acc.map(|s| (s * cell).sqrt())
    }

    /// True iff a norm exceeds `threshold` or a coefficient is non-finite.
    pub fn detect_blowup(&self, state: &SpectralState, threshold: f64) -> bool {
        if state.blown_up || !state.is_finite() {
            return true;
        }
        self.norms(state).iter().any(|&v| !v.is_finite() || v > threshold)
    }

    /// Energy fraction of `u` and `v` in modes above half the per-axis Nyquist frequency.
    pub fn tail_fraction(&self, state: &SpectralState) -> f64 {
        let cut = 0.5 * std::f64::consts::PI / self.grid.dx();
        let (mut top, mut all) = (0.0, 0.0);
        for i in 0..self.xi.len() {
            let e = state.u_hat[i].norm_sqr() + state.v_hat[i].norm_sqr();
            all += e;
            if self.xi[i] > cut {
                top += e;
            }
        }
        if all > 0.0 {
            top / all
        } else {
            0.0
        }
    }

    /// Real fields `u`, `v` on the nodes.
    pub fn physical(&self, state: &SpectralState) -> (Vec<f64>, Vec<f64>) {
        let mut bu = state.u_hat.clone();
        let mut bv = state.v_hat.clone();
        self.transform.inverse(&mut bu);
        self.transform.inverse(&mut bv);
        (bu.iter().map(|z| z.re).collect(), bv.iter().map(|z| z.re).collect())
    }

    /// Largest `max|Im|/max|Re|` over the four inverse-transformed fields.
    pub fn imag_residue(&self, state: &SpectralState) -> f64 {
        [&state.u_hat, &state.ut_hat, &state.v_hat, &state.vt_hat]
            .iter()
            .map(|f| {
                let mut b = (*f).clone();
                self.transform.inverse(&mut b);
                residue(&b)
            })
            .fold(0.0, f64::max)
    }

    fn tables(&mut self, h: f64, cacheable: bool) -> Arc<StepTables> {
        if let Some(t) = self.cache.get(&h.to_bits()) {
            return t.clone();
        }
        let u = Arc::new(ModeTables::new(&self.symbol_u, h));
        let v = if self.params.sigma1 == self.params.sigma2 { u.clone() } else { Arc::new(ModeTables::new(&self.symbol_v, h)) };
        let t = Arc::new(StepTables { u, v });
        if cacheable {
            if self.cache.len() >= MAX_CACHED {
                self.cache.clear();
            }
            self.cache.insert(h.to_bits(), t.clone());
        }
        t
    }

    /// Exact linear propagation by `dt`, per mode.
    pub fn linear_step(&mut self, state: &mut SpectralState, dt: f64) {
        let t = self.tables(dt, true);
        propagate(&t.u.prop, &mut state.u_hat, &mut state.ut_hat);
        propagate(&t.v.prop, &mut state.v_hat, &mut state.vt_hat);
        state.time += dt;
    }

    /// Couplings `N_u = |v|^p (+f_u)`, `N_v = |u|^q (+f_v)` of `state` into (`nu`, `nv`).
    fn couplings(&mut self, which: Slot, state_is_pred: bool, inp: Option<&SpectralState>, t: f64) -> FieldStats {
        let (p, q) = (self.params.p, self.params.q);
        let w = &mut self.work;
        let src = if state_is_pred { &w.pred } else { inp.expect("state required") };
        w.bu.copy_from_slice(&src.u_hat);
        w.bv.copy_from_slice(&src.v_hat);
        self.transform.inverse(&mut w.bu);
        self.transform.inverse(&mut w.bv);
        let mut stats = FieldStats { imag_residue: residue(&w.bu).max(residue(&w.bv)), ..FieldStats::default() };
        for i in 0..w.bu.len() {
            let (u, v) = (w.bu[i].re.abs(), w.bv[i].re.abs());
            stats.max_u = stats.max_u.max(u);
            stats.max_v = stats.max_v.max(v);
            w.fu[i] = v.powf(p);
            w.fv[i] = u.powf(q);
        }
        if let Some(f) = &self.forcing {
            f(t, &mut w.fu, &mut w.fv);
        }
        let (nu, nv) = match which {
            Slot::Start => (&mut w.n0u, &mut w.n0v),
            Slot::End => (&mut w.n1u, &mut w.n1v),
        };
        for i in 0..nu.len() {
            nu[i] = Complex64::new(w.fu[i], 0.0);
            nv[i] = Complex64::new(w.fv[i], 0.0);
        }
        self.transform.forward(nu);
        self.transform.forward(nv);
        stats
    }

    /// One ETD2RK step of length `dt`. Non-finite results set `blown_up`.
    pub fn duhamel_step(&mut self, state: &mut SpectralState, dt: f64) {
        self.couplings(Slot::Start, false, Some(state), state.time);
        self.etd2rk(state, dt, true);
    }

    /// Step after the start couplings are in place; returns the imaginary residue of the predictor.
    fn etd2rk(&mut self, state: &mut SpectralState, dt: f64, cacheable: bool) -> f64 {
        let tables = self.tables(dt, cacheable);
        {
            let w = &mut self.work;
            predictor(&tables.u, &state.u_hat, &state.ut_hat, &w.n0u, &mut w.pred.u_hat, &mut w.pred.ut_hat);
            predictor(&tables.v, &state.v_hat, &state.vt_hat, &w.n0v, &mut w.pred.v_hat, &mut w.pred.vt_hat);
        }
        let stats = self.couplings(Slot::End, true, None, state.time + dt);
        let w = &self.work;
        corrector(&tables.u, &mut state.u_hat, &mut state.ut_hat, &w.n0u, &w.n1u);
        corrector(&tables.v, &mut state.v_hat, &mut state.vt_hat, &w.n0v, &w.n1v);
        state.time += dt;
        if !state.is_finite() {
            state.blown_up = true;
        }
        stats.imag_residue
    }

    /// Number of halvings of `dt` needed to resolve the coupling growth rate.
    fn halvings(&self, dt: f64, stats: &FieldStats) -> u32 {
        let (p, q) = (self.params.p, self.params.q);
        let j = (p * stats.max_v.powf(p - 1.0)).max(q * stats.max_u.powf(q - 1.0));
        if !j.is_finite() {
            return MAX_HALVINGS;
        }
        let lam = 0.5 * ((1.0 + 4.0 * j).sqrt() - 1.0);
        let mut k = 0;
        while k < MAX_HALVINGS && dt * 0.5f64.powi(k as i32) * lam > ADAPTIVE_TARGET {
            k += 1;
        }
        k
    }

    /// Advance to `t_max`, recording norms at `record_times` (clipped to
    /// `[0, t_max]`) and stopping early on blow-up.
    pub fn run(&mut self, data: &InitialData, t_max: f64, record_times: &[f64], opts: &RunOptions) -> Result<RunResult> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(LabError::config("t_max", "must be positive and finite"));
        }
        if !(opts.dt > 0.0) || !opts.dt.is_finite() {
            return Err(LabError::config("dt", "must be positive"));
        }
        if !(opts.blowup_factor > 0.0) {
            return Err(LabError::config("blowup_threshold", "must be positive"));
        }
        let records = clean_times(record_times, t_max);
        let snaps = clean_times(&opts.snapshot_times, t_max);
        let mut stops: Vec<f64> = records.iter().chain(snaps.iter()).copied().chain([t_max]).collect();
        stops.sort_by(f64::total_cmp);
        stops.dedup();

        let mut state = self.init(data)?;
        let initial = self.norms(&state);
        let initial_total: f64 = initial.iter().sum();
        let threshold = if initial_total > 0.0 { opts.blowup_factor * initial_total } else { f64::INFINITY };
        let mut diag = Diagnostics { min_step: opts.dt, ..Diagnostics::default() };
        let mut series = RunSeries::default();
        let mut snapshots = Vec::new();
        let mut blowup = None;
        let mut warned = false;
        let mut ri = 0;
        let mut si = 0;

        let mut visit = |solver: &TorusSolver,
                         state: &SpectralState,
                         t: f64,
                         series: &mut RunSeries,
                         snapshots: &mut Vec<Snapshot>,
                         diag: &mut Diagnostics| {
            if ri < records.len() && records[ri] == t {
                series.records.push(NormRecord { t, norms: solver.norms(state) });
                let tail = solver.tail_fraction(state);
                diag.max_tail_fraction = diag.max_tail_fraction.max(tail);
                if tail > TAIL_WARNING && !warned {
                    log::warn!("top-octave energy fraction {tail:.3e} at t = {t}: resolution may be inadequate");
                    warned = true;
                }
                ri += 1;
            }
            if si < snaps.len() && snaps[si] == t {
                let (u, v) = solver.physical(state);
                snapshots.push(Snapshot { t, u, v });
                si += 1;
            }
        };
        visit(self, &state, 0.0, &mut series, &mut snapshots, &mut diag);

        'outer: for &target in stops.iter().filter(|&&t| t > 0.0) {
            while state.time < target {
                let remaining = target - state.time;
                let (h, cacheable) = if opts.linear_only {
                    (remaining, false)
                } else {
                    let stats = self.couplings(Slot::Start, false, Some(&state), state.time);
                    diag.max_imag_residue = diag.max_imag_residue.max(stats.imag_residue);
                    let k = if opts.adaptive { self.halvings(opts.dt, &stats) } else { 0 };
                    let h = opts.dt * 0.5f64.powi(k as i32);
                    if remaining <= h * (1.0 + 1e-9) {
                        (remaining, false)
                    } else {
                        (h, true)
                    }
                };
                if opts.linear_only {
                    self.linear_step(&mut state, h);
                } else {
                    let res = self.etd2rk(&mut state, h, cacheable);
                    diag.max_imag_residue = diag.max_imag_residue.max(res);
                }
                if target - state.time <= 1e-12 * target.max(1.0) {
                    state.time = target;
                }
                diag.steps += 1;
                diag.min_step = diag.min_step.min(h);
                if self.detect_blowup(&state, threshold) {
                    let norms = self.norms(&state);
                    let peak = norms.iter().fold(0.0f64, |m, &v| if v.is_finite() { m.max(v) } else { f64::INFINITY });
                    blowup = Some(BlowupEvent { time: state.time, norm_at_detection: peak, threshold });
                    break 'outer;
                }
            }
            visit(self, &state, target, &mut series, &mut snapshots, &mut diag);
        }
        Ok(RunResult {
            series,
            blowup,
            snapshots,
            initial_total_norm: initial_total,
            diagnostics: diag,
            config_echo: serde_json::Value::Null,
        })
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Start,
    End,
}

fn residue(b: &[Complex64]) -> f64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for z in b {
        re = re.max(z.re.abs());
        im = im.max(z.im.abs());
    }
    if re > 0.0 {
        im / re
    } else {
        0.0
    }
}

/// Sorted, deduplicated times in `[0, t_max]`.
fn clean_times(times: &[f64], t_max: f64) -> Vec<f64> {
    let mut v: Vec<f64> = times.iter().copied().filter(|t| t.is_finite() && *t >= 0.0 && *t <= t_max).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn propagate(prop: &[PropagatorValue], w: &mut [Complex64], wt: &mut [Complex64]) {
    for i in 0..prop.len() {
        let k = &prop[i];
        let (a, b) = (w[i], wt[i]);
        w[i] = a * k.k0 + b * k.k1;
        wt[i] = a * k.dk0 + b * k.dk1;
    }
}

fn predictor(t: &ModeTables, w: &[Complex64], wt: &[Complex64], n0: &[Complex64], pw: &mut [Complex64], pwt: &mut [Complex64]) {
    for i in 0..w.len() {
        let k = &t.prop[i];
        let c = &t.weights[i];
        pw[i] = w[i] * k.k0 + wt[i] * k.k1 + n0[i] * c.phi0;
        pwt[i] = w[i] * k.dk0 + wt[i] * k.dk1 + n0[i] * c.dphi0;
    }
}

fn corrector(t: &ModeTables, w: &mut [Complex64], wt: &mut [Complex64], n0: &[Complex64], n1: &[Complex64]) {
    for i in 0..w.len() {
        let k = &t.prop[i];
        let c = &t.weights[i];
        let (a, b) = (w[i], wt[i]);
        w[i] = a * k.k0 + b * k.k1 + n0[i] * (c.phi0 - c.phi1) + n1[i] * c.phi1;
        wt[i] = a * k.dk0 + b * k.dk1 + n0[i] * (c.dphi0 - c.dphi1) + n1[i] * c.dphi1;
    }
}
