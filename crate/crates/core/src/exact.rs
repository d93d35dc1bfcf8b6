//! Exact-when-possible scalars for exponent arithmetic.
//!
//! Boundary cases such as `p = 1 + 2σ/n` are meaningful, so exponent
//! inequalities are evaluated on small rationals whenever every input is
//! recognisably rational. Anything else falls back to `f64` and compares with
//! a relative tolerance of [`REL_TOL`].

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};

/// Relative tolerance for comparisons involving a floating-point operand.
pub const REL_TOL: f64 = 1e-12;

/// Largest denominator accepted when recovering a rational from an `f64`.
const MAX_DENOMINATOR: i128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Exact(Ratio<i128>),
    Approx(f64),
}

impl Scalar {
    /// Recover a small rational if `x` is one (up to a couple of ulps),
    /// otherwise keep the float.
    pub fn from_f64(x: f64) -> Self {
        match rational_approx(x) {
            Some(r) => Scalar::Exact(r),
            None => Scalar::Approx(x),
        }
    }

    pub fn int(i: i64) -> Self {
        Scalar::Exact(Ratio::from_integer(i as i128))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Ratio::new(num as i128, den as i128))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Scalar::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Scalar::Approx(x) => x,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(self) -> bool {
        self.compare(Scalar::int(0)) == Ordering::Equal
    }

    /// Total comparison: exact for two rationals, relative tolerance otherwise.
    pub fn compare(self, other: Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(&b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = libm::fmax(libm::fmax(a.abs(), b.abs()), 1.0);
                if (a - b).abs() <= REL_TOL * scale {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self.compare(other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self.compare(other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    fn combine(self, rhs: Scalar, exact: fn(&Ratio<i128>, &Ratio<i128>) -> Option<Ratio<i128>>, approx: fn(f64, f64) -> f64) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, rhs) {
            if let Some(r) = exact(&a, &b) {
                return Scalar::Exact(r);
            }
        }
        Scalar::Approx(approx(self.to_f64(), rhs.to_f64()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.combine(rhs, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.combine(rhs, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.combine(rhs, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.combine(rhs, |a, b| if b.is_zero() { None } else { a.checked_div(b) }, |a, b| a / b)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(x) => Scalar::Approx(-x),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::from_f64(x)
    }
}

/// Continued-fraction recovery of `x` as `h/k` with `k <= MAX_DENOMINATOR`,
/// accepted only if it reproduces `x` to within two ulps.
fn rational_approx(x: f64) -> Option<Ratio<i128>> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = libm::floor(y);
        let ai = a as i128;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            return None;
        }
        let approx = h2 as f64 / k2 as f64;
        if (approx - x).abs() <= 2.0 * f64::EPSILON * x.abs() {
            return Some(Ratio::new(h2, k2));
        }
        let frac = y - a;
        if frac == 0.0 {
            return None;
        }
        y = 1.0 / frac;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    None
}
