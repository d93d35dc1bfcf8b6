//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature on finite
//! intervals with user breakpoints.

#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_326_787,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
    /// Equal panels per breakpoint interval before adaptation starts.
    pub initial_panels: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { abs_tol: 0.0, rel_tol: 1e-11, max_evaluations: 400_000, initial_panels: 1 }
    }
}

impl Options {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    pub fn with_budget(mut self, evaluations: usize) -> Self {
        self.max_evaluations = evaluations;
        self
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    mass: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = hl * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hl;
    let resabs = resabs * hl.abs();
    let resasc = resasc * hl.abs();
    let mut err = ((resk - resg) * hl).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * libm::pow(200.0 * err / resasc, 1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

/// Integrate `f` over `[a, b]`. Interior `breaks` (any order; values outside
/// `(a, b)` are ignored) are always panel edges.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], opts: &Options) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if b < a {
        let e = integrate(f, b, a, breaks, opts)?;
        return Ok(Estimate { value: -e.value, ..e });
    }
    let mut edges: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b && x.is_finite()));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let panels = opts.initial_panels.max(1);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let (mut total, mut total_err, mut total_mass) = (0.0, 0.0, 0.0);
    for w in edges.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for k in 0..panels {
            let lo = w[0] + h * k as f64;
            let hi = if k + 1 == panels { w[1] } else { lo + h };
            let (value, error, mass) = gk21(&mut f, lo, hi);
            evaluations += 21;
            total += value;
            total_err += error;
            total_mass += mass;
            heap.push(Segment { a: lo, b: hi, value, error, mass });
        }
    }

    // the per-segment error never drops below 50ε·∫|f|; a tolerance under
    // twice that floor is unattainable and is raised to it
    let tolerance = |total: f64, mass: f64| opts.abs_tol.max(opts.rel_tol * total.abs()).max(100.0 * f64::EPSILON * mass);
    let mut frozen_err = 0.0;
    while total_err > tolerance(total, total_mass) {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) || (seg.b - seg.a) <= 1e-14 * seg.a.abs().max(seg.b.abs()) {
            // cannot split further; keep its error but stop refining it
            frozen_err += seg.error;
            total_err -= seg.error;
            if frozen_err > tolerance(total, total_mass) {
                return Err(Error::QuadratureFailure { value: total, error: total_err + frozen_err });
            }
            continue;
        }
        if evaluations + 42 > opts.max_evaluations {
            heap.push(seg);
            return Err(Error::QuadratureFailure { value: total, error: total_err + frozen_err });
        }
        let (v1, e1, m1) = gk21(&mut f, seg.a, mid);
        let (v2, e2, m2) = gk21(&mut f, mid, seg.b);
        evaluations += 42;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        total_mass += m1 + m2 - seg.mass;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1, mass: m1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2, mass: m2 });
        if heap.len() % 64 == 0 {
            // rebuild sums to contain round-off drift
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
            total_mass = heap.iter().map(|s| s.mass).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    if !value.is_finite() {
        return Err(Error::QuadratureFailure { value, error });
    }
    Ok(Estimate { value, error, evaluations })
}
