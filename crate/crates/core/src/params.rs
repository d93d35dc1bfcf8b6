//! Exponent arithmetic for the coupled system: admissibility conditions of
//! the two global-existence theorems, the blow-up condition, predicted decay
//! rates, Gagliardo–Nirenberg interpolation exponents and the test-function
//! exponents γ₁, γ₂.
//!
//! Every inequality is evaluated on [`Scalar`]s, so rational inputs such as
//! `p = 3, n = 1, σ = 1` hit boundary cases like `p ≤ 1 + 2σ/n` exactly.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::exact::Scalar;
use crate::{Error, Result};

/// Default slack ε in the loss-of-decay exponents.
pub const DEFAULT_EPS: f64 = 0.01;

/// The tuple (n, σ₁, σ₂, p, q) plus the slack ε.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SystemParams {
    pub n: u32,
    pub sigma1: f64,
    pub sigma2: f64,
    pub p: f64,
    pub q: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_eps"))]
    pub eps: f64,
}

#[cfg(feature = "serde")]
fn default_eps() -> f64 {
    DEFAULT_EPS
}

impl SystemParams {
    pub fn new(n: u32, sigma1: f64, sigma2: f64, p: f64, q: f64, eps: f64) -> Result<Self> {
        let params = SystemParams { n, sigma1, sigma2, p, q, eps };
        params.validate()?;
        Ok(params)
    }

    /// Parameters with `σ₁ = σ₂ = σ` and the default slack.
    pub fn symmetric(n: u32, sigma: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(n, sigma, sigma, p, q, DEFAULT_EPS)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParams("n must be at least 1"));
        }
        if !(self.sigma1 >= 1.0 && self.sigma2 >= 1.0) || !self.sigma1.is_finite() || !self.sigma2.is_finite() {
            return Err(Error::InvalidParams("sigma1 and sigma2 must be finite and >= 1"));
        }
        if !(self.p > 1.0 && self.q > 1.0) || !self.p.is_finite() || !self.q.is_finite() {
            return Err(Error::InvalidParams("p and q must be finite and > 1"));
        }
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidParams("eps must be positive"));
        }
        Ok(())
    }

    pub fn sigmas_equal(&self) -> bool {
        Scalar::from_f64(self.sigma1).compare(Scalar::from_f64(self.sigma2)) == Ordering::Equal
    }

    fn scalars(&self) -> Exps {
        Exps {
            n: Scalar::int(self.n as i64),
            s1: Scalar::from_f64(self.sigma1),
            s2: Scalar::from_f64(self.sigma2),
            p: Scalar::from_f64(self.p),
            q: Scalar::from_f64(self.q),
            eps: Scalar::from_f64(self.eps),
        }
    }
}

#[derive(Clone, Copy)]
struct Exps {
    n: Scalar,
    s1: Scalar,
    s2: Scalar,
    p: Scalar,
    q: Scalar,
    eps: Scalar,
}

/// Relation recorded between `lhs` and `rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Relation {
    #[cfg_attr(feature = "serde", serde(rename = "<"))]
    Lt,
    #[cfg_attr(feature = "serde", serde(rename = "<="))]
    Le,
    #[cfg_attr(feature = "serde", serde(rename = "=="))]
    Eq,
}

impl Relation {
    fn eval(self, ord: Ordering) -> bool {
        match self {
            Relation::Lt => ord == Ordering::Less,
            Relation::Le => ord != Ordering::Greater,
            Relation::Eq => ord == Ordering::Equal,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "==",
        })
    }
}

/// One atomic inequality `lhs relation rhs` belonging to a named condition.
/// Conditions that are chains (e.g. `p ≤ 1+2σ₂/n ≤ 1+2σ₁/n < q`) produce
/// several records under the same `id`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionRecord {
    pub id: &'static str,
    pub clause: &'static str,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Both sides were evaluated in exact rational arithmetic.
    pub exact: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ConditionReport {
    pub records: Vec<ConditionRecord>,
}

impl ConditionReport {
    fn push(&mut self, id: &'static str, clause: &'static str, lhs: Scalar, rel: Relation, rhs: Scalar) {
        let holds = rel.eval(lhs.compare(rhs));
        self.records.push(ConditionRecord {
            id,
            clause,
            holds,
            lhs: lhs.to_f64(),
            rhs: rhs.to_f64(),
            relation: rel,
            exact: lhs.is_exact() && rhs.is_exact(),
        });
    }

    fn push_upper(&mut self, id: &'static str, clause: &'static str, value: Scalar, bound: Option<Scalar>) {
        match bound {
            Some(b) => self.push(id, clause, value, Relation::Le, b),
            None => self.records.push(ConditionRecord {
                id,
                clause,
                holds: true,
                lhs: value.to_f64(),
                rhs: f64::INFINITY,
                relation: Relation::Le,
                exact: value.is_exact(),
            }),
        }
    }

    /// Records with the given condition id.
    pub fn get<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a ConditionRecord> + 'a {
        self.records.iter().filter(move |r| r.id == id)
    }

    /// Whether the named condition was evaluated and every clause holds.
    pub fn holds(&self, id: &str) -> bool {
        let mut any = false;
        for r in self.get(id) {
            if !r.holds {
                return false;
            }
            any = true;
        }
        any
    }

    pub fn failing(&self) -> impl Iterator<Item = &ConditionRecord> {
        self.records.iter().filter(|r| !r.holds)
    }

    fn family_holds(&self, prefix: &str) -> bool {
        let mut any = false;
        for r in self.records.iter().filter(|r| belongs(r.id, prefix)) {
            if !r.holds {
                return false;
            }
            any = true;
        }
        any
    }

    /// All hypotheses of the σ₁ ≥ σ₂ existence theorem hold.
    pub fn existence11_holds(&self) -> bool {
        self.family_holds("11")
    }

    /// All hypotheses of the σ₂ ≥ σ₁ existence theorem hold.
    pub fn existence12_holds(&self) -> bool {
        self.family_holds("12")
    }
}

fn belongs(id: &str, family: &str) -> bool {
    // ids look like "GN11A2", "exponent11A1", "sigma11"
    id.strip_prefix("GN")
        .or_else(|| id.strip_prefix("exponent"))
        .or_else(|| id.strip_prefix("sigma"))
        .is_some_and(|rest| rest.starts_with(family))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Regime {
    ExistenceThm11,
    ExistenceThm12,
    BlowupThm13,
    Unclassified,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ExistenceThm11 => "ExistenceThm11",
            Regime::ExistenceThm12 => "ExistenceThm12",
            Regime::BlowupThm13 => "BlowupThm13",
            Regime::Unclassified => "Unclassified",
        }
    }

    pub fn is_existence(self) -> bool {
        matches!(self, Regime::ExistenceThm11 | Regime::ExistenceThm12)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RegimeVerdict {
    pub regime: Regime,
    pub report: ConditionReport,
}

/// Decay exponents (powers of `1 + t`) of the six solution norms.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TheoreticalRates {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl TheoreticalRates {
    fn from_leading(f1: f64, g1: f64) -> Self {
        TheoreticalRates { f1, f2: f1 - 0.5, f3: f1 - 1.0, g1, g2: g1 - 0.5, g3: g1 - 1.0 }
    }

    /// Rates in the order `‖u‖, ‖|D|^σ₁u‖, ‖u_t‖, ‖v‖, ‖|D|^σ₂v‖, ‖v_t‖`.
    pub fn as_array(&self) -> [f64; 6] {
        [self.f1, self.f2, self.f3, self.g1, self.g2, self.g3]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// ε(p, σ₂), the loss of decay carried by `u`.
    U,
    /// ε(q, σ₁), the loss of decay carried by `v`.
    V,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnExponent {
    pub theta: f64,
    /// The admissible lower bound s/σ.
    pub lower: f64,
}

/// `n/(n − 2σ)`, or `None` (i.e. +∞) when `n ≤ 2σ`.
fn sobolev_bound(n: Scalar, sigma: Scalar) -> Option<Scalar> {
    let two = Scalar::int(2);
    let gap = n - two * sigma;
    if gap.compare(Scalar::int(0)) != Ordering::Greater {
        None
    } else {
        Some(n / gap)
    }
}

/// Evaluate every inequality of both existence theorems and the blow-up
/// condition. Only the Gagliardo–Nirenberg branch selected by the dimension
/// is recorded; if no branch applies a failing dimension record is emitted.
pub fn check_conditions(params: &SystemParams) -> ConditionReport {
    let e = params.scalars();
    let (one, two, four) = (Scalar::int(1), Scalar::int(2), Scalar::int(4));
    let mut rep = ConditionReport::default();
    let le = |a: Scalar, b: Scalar| a.compare(b) != Ordering::Greater;

    let p_bound = sobolev_bound(e.n, e.s2);
    let q_bound = sobolev_bound(e.n, e.s1);

    // σ₁ ≥ σ₂ family
    rep.push("sigma11", "sigma2 <= sigma1", e.s2, Relation::Le, e.s1);
    if le(e.n, two * e.s2) {
        rep.push("GN11A1", "2 <= p", two, Relation::Le, e.p);
        rep.push("GN11A1", "2 <= q", two, Relation::Le, e.q);
    } else if le(e.n, two * e.s1) {
        rep.push("GN11A2", "2 <= p", two, Relation::Le, e.p);
        rep.push_upper("GN11A2", "p <= n/(n-2*sigma2)", e.p, p_bound);
        rep.push("GN11A2", "2 <= q", two, Relation::Le, e.q);
    } else if le(e.n, four * e.s2) {
        rep.push("GN11A3", "2 <= p", two, Relation::Le, e.p);
        rep.push_upper("GN11A3", "p <= n/(n-2*sigma2)", e.p, p_bound);
        rep.push("GN11A3", "2 <= q", two, Relation::Le, e.q);
        rep.push_upper("GN11A3", "q <= n/(n-2*sigma1)", e.q, q_bound);
    } else {
        rep.push("GN11", "n <= 4*sigma2", e.n, Relation::Le, four * e.s2);
    }
    let den11 = (e.q - one) * (e.s2 / e.s1 - one) + e.p * e.q - one;
    rep.push("exponent11A1", "(1+q)/((q-1)(sigma2/sigma1-1)+pq-1) < n/(2*sigma2)", (one + e.q) / den11, Relation::Lt, e.n / (two * e.s2));
    let t2 = one + two * e.s2 / e.n;
    let t1 = one + two * e.s1 / e.n;
    rep.push("exponent11A2", "p <= 1+2*sigma2/n", e.p, Relation::Le, t2);
    rep.push("exponent11A2", "1+2*sigma2/n <= 1+2*sigma1/n", t2, Relation::Le, t1);
    rep.push("exponent11A2", "1+2*sigma1/n < q", t1, Relation::Lt, e.q);

    // σ₂ ≥ σ₁ family
    rep.push("sigma12", "sigma1 <= sigma2", e.s1, Relation::Le, e.s2);
    if le(e.n, two * e.s1) {
        rep.push("GN12A1", "2 <= p", two, Relation::Le, e.p);
        rep.push("GN12A1", "2 <= q", two, Relation::Le, e.q);
    } else if le(e.n, two * e.s2) {
        rep.push("GN12A2", "2 <= p", two, Relation::Le, e.p);
        rep.push("GN12A2", "2 <= q", two, Relation::Le, e.q);
        rep.push_upper("GN12A2", "q <= n/(n-2*sigma1)", e.q, q_bound);
    } else if le(e.n, four * e.s1) {
        rep.push("GN12A3", "2 <= p", two, Relation::Le, e.p);
        rep.push_upper("GN12A3", "p <= n/(n-2*sigma2)", e.p, p_bound);
        rep.push("GN12A3", "2 <= q", two, Relation::Le, e.q);
        rep.push_upper("GN12A3", "q <= n/(n-2*sigma1)", e.q, q_bound);
    } else {
        rep.push("GN12", "n <= 4*sigma1", e.n, Relation::Le, four * e.s1);
    }
    let den12 = (e.p - one) * (e.s1 / e.s2 - one) + e.p * e.q - one;
    rep.push("exponent12A1", "(1+p)/((p-1)(sigma1/sigma2-1)+pq-1) < n/(2*sigma1)", (one + e.p) / den12, Relation::Lt, e.n / (two * e.s1));
    rep.push("exponent12A2", "q <= 1+2*sigma1/n", e.q, Relation::Le, t1);
    rep.push("exponent12A2", "1+2*sigma1/n <= 1+2*sigma2/n", t1, Relation::Le, t2);
    rep.push("exponent12A2", "1+2*sigma2/n < p", t2, Relation::Lt, e.p);

    // blow-up family, only meaningful for σ₁ = σ₂
    rep.push("sigma13", "sigma1 == sigma2", e.s1, Relation::Eq, e.s2);
    rep.push(
        "optimal13.2",
        "n/(2*sigma) <= (1+max(p,q))/(pq-1)",
        e.n / (two * e.s1),
        Relation::Le,
        (one + e.p.max(e.q)) / (e.p * e.q - one),
    );
    rep
}

/// Decide which theorem, if any, covers `params`.
pub fn classify_regime(params: &SystemParams) -> RegimeVerdict {
    let report = check_conditions(params);
    let regime = if report.existence11_holds() {
        Regime::ExistenceThm11
    } else if report.existence12_holds() {
        Regime::ExistenceThm12
    } else if report.holds("sigma13") && report.holds("optimal13.2") {
        Regime::BlowupThm13
    } else {
        Regime::Unclassified
    };
    RegimeVerdict { regime, report }
}

/// `κ(p, q) = (1 + max{p, q})/(pq − 1)`; the critical curve is `κ = n/(2σ)`.
pub fn critical_ratio(p: f64, q: f64) -> f64 {
    (1.0 + p.max(q)) / (p * q - 1.0)
}

/// The q ≥ p solving `(1+q)/(pq−1) = n/(2σ)`.
///
/// Returns `f64::INFINITY` when the solution lies below `p` (so no finite
/// threshold exists among q ≥ p), and [`Error::NoSolution`] when
/// `np − 2σ ≤ 0`, where the ratio never drops to `n/(2σ)`.
pub fn critical_q(n: u32, sigma: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) || !(sigma > 0.0) || n == 0 {
        return Err(Error::InvalidParams("critical_q needs p > 1, sigma > 0, n >= 1"));
    }
    let (n, s, p) = (Scalar::int(n as i64), Scalar::from_f64(sigma), Scalar::from_f64(p));
    let two = Scalar::int(2);
    let den = n * p - two * s;
    if den.compare(Scalar::int(0)) != Ordering::Greater {
        return Err(Error::NoSolution);
    }
    let q = (two * s + n) / den;
    if q.compare(p) == Ordering::Less {
        Ok(f64::INFINITY)
    } else {
        Ok(q.to_f64())
    }
}

fn loss_of_decay_scalar(e: &Exps, side: Side) -> Scalar {
    let (one, two) = (Scalar::int(1), Scalar::int(2));
    let (exp, sigma) = match side {
        Side::U => (e.p, e.s2),
        Side::V => (e.q, e.s1),
    };
    let raw = one - e.n * (exp - one) / (two * sigma) + e.eps;
    let threshold = one + two * sigma / e.n;
    if exp.compare(threshold) != Ordering::Greater {
        raw.max(e.eps)
    } else {
        raw
    }
}

/// ε(p, σ₂) = 1 − n(p−1)/(2σ₂) + ε on the u-side, ε(q, σ₁) on the v-side.
pub fn loss_of_decay(params: &SystemParams, side: Side) -> f64 {
    loss_of_decay_scalar(&params.scalars(), side).to_f64()
}

/// Predicted rates under the given existence theorem, without checking that
/// its hypotheses hold.
pub fn rates_for(params: &SystemParams, regime: Regime) -> Result<TheoreticalRates> {
    let n = params.n as f64;
    let base_u = -n / (4.0 * params.sigma1);
    let base_v = -n / (4.0 * params.sigma2);
    match regime {
        Regime::ExistenceThm11 => Ok(TheoreticalRates::from_leading(base_u + loss_of_decay(params, Side::U), base_v)),
        Regime::ExistenceThm12 => Ok(TheoreticalRates::from_leading(base_u, base_v + loss_of_decay(params, Side::V))),
        other => Err(Error::WrongRegime(other.as_str())),
    }
}

pub fn theoretical_rates(params: &SystemParams) -> Result<TheoreticalRates> {
    rates_for(params, classify_regime(params).regime)
}

/// Fractional Gagliardo–Nirenberg exponent
/// `θ = (1/p₀ − 1/p + s/n)/(1/p₀ − 1/p₁ + σ/n)`, required to lie in `[s/σ, 1]`.
pub fn gn_theta(p: f64, p0: f64, p1: f64, s: f64, sigma: f64, n: u32) -> Result<GnExponent> {
    let finite_gt1 = |x: f64| x > 1.0 && x.is_finite();
    if !(finite_gt1(p) && finite_gt1(p0) && finite_gt1(p1)) || !(s >= 0.0 && s <= sigma) || n == 0 {
        return Err(Error::InvalidParams("gn_theta needs 1 < p, p0, p1 < inf and 0 <= s <= sigma"));
    }
    let one = Scalar::int(1);
    let (p, p0, p1) = (Scalar::from_f64(p), Scalar::from_f64(p0), Scalar::from_f64(p1));
    let (s, sigma, nn) = (Scalar::from_f64(s), Scalar::from_f64(sigma), Scalar::int(n as i64));
    let theta = (one / p0 - one / p + s / nn) / (one / p0 - one / p1 + sigma / nn);
    let lower = s / sigma;
    let ok = theta.compare(lower) != Ordering::Less && theta.compare(one) != Ordering::Greater;
    if ok {
        Ok(GnExponent { theta: theta.to_f64(), lower: lower.to_f64() })
    } else {
        Err(Error::InvalidRange { theta: theta.to_f64(), lower: lower.to_f64() })
    }
}

/// γ₁ and γ₂ as exact-when-possible scalars.
pub fn gamma_exponents_exact(params: &SystemParams) -> Result<(Scalar, Scalar)> {
    if !params.sigmas_equal() {
        return Err(Error::SigmaMismatch { sigma1: params.sigma1, sigma2: params.sigma2 });
    }
    let e = params.scalars();
    let (one, two) = (Scalar::int(1), Scalar::int(2));
    let sigma = e.s1;
    let pc = e.p / (e.p - one);
    let qc = e.q / (e.q - one);
    let w = e.n + two * sigma;
    let g1 = (-(two * sigma) + w / pc) / e.q - two * sigma + w / qc;
    let g2 = (-(two * sigma) + w / qc) / e.p - two * sigma + w / pc;
    Ok((g1, g2))
}

/// Exponents γ₁, γ₂ bounding `I_R^{(pq−1)/(pq)}` and `J_R^{(pq−1)/(pq)}` by
/// powers of R.
pub fn gamma_exponents(params: &SystemParams) -> Result<(f64, f64)> {
    gamma_exponents_exact(params).map(|(a, b)| (a.to_f64(), b.to_f64()))
}
