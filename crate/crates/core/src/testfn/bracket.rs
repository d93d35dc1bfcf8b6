//! Finite combinations `Σ cᵢ⟨x⟩^{−ℓᵢ}` of Japanese brackets `⟨x⟩ = √(1+|x|²)`.
//! The class is closed under `−Δ`:
//!
//! ```text
//! −Δ⟨x⟩^{−ℓ} = ℓ(n−ℓ−2)⟨x⟩^{−ℓ−2} + ℓ(ℓ+2)⟨x⟩^{−ℓ−4}.
//! ```

use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BracketCombo {
    /// `(coefficient, exponent ℓ)` pairs, sorted by exponent, no duplicates.
    pub terms: Vec<(f64, f64)>,
}

/// Two exponents closer than this are the same term.
const EXPONENT_EPS: f64 = 1e-12;

impl BracketCombo {
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut c = BracketCombo { terms: Vec::new() };
        for (coef, ell) in terms {
            c.add_term(coef, ell);
        }
        c
    }

    pub fn single(ell: f64) -> Self {
        BracketCombo { terms: alloc::vec![(1.0, ell)] }
    }

    fn add_term(&mut self, coef: f64, ell: f64) {
        if coef == 0.0 {
            return;
        }
        match self.terms.iter_mut().find(|t| (t.1 - ell).abs() < EXPONENT_EPS) {
            Some(t) => t.0 += coef,
            None => self.terms.push((coef, ell)),
        }
        self.terms.retain(|t| t.0 != 0.0);
        self.terms.sort_by(|a, b| a.1.total_cmp(&b.1));
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.1)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        BracketCombo { terms: self.terms.iter().map(|&(c, l)| (c * factor, l)).collect() }
    }

    /// Value at radius `r`.
    pub fn eval(&self, r: f64) -> f64 {
        let b = 1.0 + r * r;
        self.terms.iter().map(|&(c, l)| c * libm::pow(b, -0.5 * l)).sum()
    }

    /// `Σ|cᵢ|⟨r⟩^{−ℓᵢ}`, a bound on the size of individual terms.
    pub fn eval_abs(&self, r: f64) -> f64 {
        let b = 1.0 + r * r;
        self.terms.iter().map(|&(c, l)| c.abs() * libm::pow(b, -0.5 * l)).sum()
    }

    /// One application of `−Δ` in ℝⁿ.
    pub fn neg_laplacian(&self, n: u32) -> Self {
        let nf = n as f64;
        let mut out = BracketCombo::default();
        for &(c, l) in &self.terms {
            out.add_term(c * l * (nf - l - 2.0), l + 2.0);
            out.add_term(c * l * (l + 2.0), l + 4.0);
        }
        out
    }

    /// Antiderivative of `ρ·f(ρ)`, used for sphere means in ℝ³.
    pub fn radial_antiderivative(&self, rho: f64) -> f64 {
        let b = 1.0 + rho * rho;
        self.terms
            .iter()
            .map(|&(c, l)| {
                if (l - 2.0).abs() < EXPONENT_EPS {
                    0.5 * c * libm::log1p(rho * rho)
                } else {
                    c * libm::pow(b, 1.0 - 0.5 * l) / (2.0 - l)
                }
            })
            .sum()
    }

    /// `∫ ρ·f(ρ) dρ` over `[|r − h|, r + h]`, without cancellation between
    /// the endpoint antiderivatives.
    pub fn radial_increment(&self, r: f64, h: f64) -> f64 {
        let a = r - h;
        let base = 1.0 + a * a;
        let u = 4.0 * r * h / base;
        let lu = libm::log1p(u);
        self.terms
            .iter()
            .map(|&(c, l)| {
                if (l - 2.0).abs() < EXPONENT_EPS {
                    0.5 * c * lu
                } else {
                    let e = 1.0 - 0.5 * l;
                    c * libm::pow(base, e) * libm::expm1(e * lu) / (2.0 - l)
                }
            })
            .sum()
    }
}

pub fn neg_laplacian_bracket(ell: f64, n: u32) -> BracketCombo {
    BracketCombo::single(ell).neg_laplacian(n)
}

/// `(−Δ)^m⟨x⟩^{−r}` by `m` applications of the one-step formula.
pub fn integer_laplacian_bracket(r: f64, m: u32, n: u32) -> BracketCombo {
    let mut c = BracketCombo::single(r);
    for _ in 0..m {
        c = c.neg_laplacian(n);
    }
    c
}
