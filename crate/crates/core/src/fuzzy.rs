//! Triangular fuzzy numbers.
//!
//! A [`Tfn`] `(a, b, c)` has a triangular membership function that rises
//! linearly from `a` to the peak `b` and falls back to zero at `c`. Failure
//! rates, failure probabilities and importance inputs all travel through the
//! analysis as `Tfn`s; a crisp value `x` is the degenerate number `(x, x, x)`.
//!
//! The arithmetic here is the componentwise vertex arithmetic used in
//! quantitative fuzzy fault tree work, not alpha-cut interval arithmetic.
//! Multiplication and division are only defined for non-negative operands,
//! where the vertex rules keep the result ordered.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Triangular fuzzy number `(lower, peak, upper)` with `lower <= peak <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Tfn {
    lower: f64,
    peak: f64,
    upper: f64,
}

impl Tfn {
    pub const ZERO: Tfn = Tfn {
        lower: 0.0,
        peak: 0.0,
        upper: 0.0,
    };
    pub const ONE: Tfn = Tfn {
        lower: 1.0,
        peak: 1.0,
        upper: 1.0,
    };

    /// Builds a TFN, rejecting unordered or non-finite triples.
    ///
    /// ```
    /// use fuzzy_tft::Tfn;
    /// assert!(Tfn::new(1.0, 2.0, 3.0).is_ok());
    /// assert!(Tfn::new(3.0, 2.0, 1.0).is_err());
    /// ```
    pub fn new(lower: f64, peak: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && peak.is_finite() && upper.is_finite()) {
            return Err(Error::NonFinite("triangular fuzzy number"));
        }
        if lower <= peak && peak <= upper {
            Ok(Tfn { lower, peak, upper })
        } else {
            Err(Error::Unordered { lower, peak, upper })
        }
    }

    /// The degenerate number `(x, x, x)`.
    pub fn crisp(x: f64) -> Self {
        Tfn {
            lower: x,
            peak: x,
            upper: x,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn components(&self) -> [f64; 3] {
        [self.lower, self.peak, self.upper]
    }

    pub fn is_crisp(&self) -> bool {
        self.lower == self.peak && self.peak == self.upper
    }

    /// Membership grade of `x`.
    pub fn membership(&self, x: f64) -> f64 {
        let (a, b, c) = (self.lower, self.peak, self.upper);
        if x == b {
            1.0
        } else if a < x && x < b {
            (x - a) / (b - a)
        } else if b < x && x < c {
            (c - x) / (c - b)
        } else {
            0.0
        }
    }

    /// Componentwise product `(a1*b1, a2*b2, a3*b3)`; both operands must be non-negative.
    pub fn mul(&self, other: &Tfn) -> Result<Tfn> {
        if self.lower < 0.0 || other.lower < 0.0 {
            return Err(Error::domain(format!(
                "vertex multiplication needs non-negative operands, got {self} * {other}"
            )));
        }
        Tfn::new(
            self.lower * other.lower,
            self.peak * other.peak,
            self.upper * other.upper,
        )
    }

    /// `(a1/b3, a2/b2, a3/b1)`. The divisor's support must stay strictly positive.
    pub fn div(&self, other: &Tfn) -> Result<Tfn> {
        if other.lower <= 0.0 {
            return Err(Error::domain(format!(
                "divisor {other} has support touching zero"
            )));
        }
        if self.lower < 0.0 {
            return Err(Error::domain(format!(
                "vertex division needs a non-negative dividend, got {self}"
            )));
        }
        Tfn::new(
            self.lower / other.upper,
            self.peak / other.peak,
            self.upper / other.lower,
        )
    }

    /// `e^{k x}` applied to the vertices, swapping the ends when `k < 0`.
    pub fn exp_scaled(&self, k: f64) -> Tfn {
        if k == 0.0 {
            return Tfn::ONE;
        }
        let (lo, hi) = if k > 0.0 {
            (self.lower, self.upper)
        } else {
            (self.upper, self.lower)
        };
        Tfn {
            lower: (k * lo).exp(),
            peak: (k * self.peak).exp(),
            upper: (k * hi).exp(),
        }
    }

    /// Centroid `(a + b + c) / 3` of the membership function.
    pub fn centroid(&self) -> f64 {
        (self.lower + self.peak + self.upper) / 3.0
    }

    /// Euclidean distance between the vertex triples.
    pub fn distance(&self, other: &Tfn) -> f64 {
        let da = self.lower - other.lower;
        let db = self.peak - other.peak;
        let dc = self.upper - other.upper;
        (da * da + db * db + dc * dc).sqrt()
    }

    /// Clamps each vertex into `[lo, hi]`. Ordering survives because clamping is monotone.
    pub fn clamp(&self, lo: f64, hi: f64) -> Tfn {
        Tfn {
            lower: self.lower.clamp(lo, hi),
            peak: self.peak.clamp(lo, hi),
            upper: self.upper.clamp(lo, hi),
        }
    }

    /// Applies a non-decreasing map to every vertex.
    pub(crate) fn map_monotone(&self, f: impl Fn(f64) -> f64) -> Result<Tfn> {
        Tfn::new(f(self.lower), f(self.peak), f(self.upper))
    }
}

impl Add for Tfn {
    type Output = Tfn;

    fn add(self, rhs: Tfn) -> Tfn {
        Tfn {
            lower: self.lower + rhs.lower,
            peak: self.peak + rhs.peak,
            upper: self.upper + rhs.upper,
        }
    }
}

impl Sub for Tfn {
    type Output = Tfn;

    /// `(a1 - b3, a2 - b2, a3 - b1)`
    fn sub(self, rhs: Tfn) -> Tfn {
        Tfn {
            lower: self.lower - rhs.upper,
            peak: self.peak - rhs.peak,
            upper: self.upper - rhs.lower,
        }
    }
}

impl TryFrom<[f64; 3]> for Tfn {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Tfn::new(v[0], v[1], v[2])
    }
}

impl From<Tfn> for [f64; 3] {
    fn from(x: Tfn) -> Self {
        x.components()
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.lower, self.peak, self.upper)
    }
}

/// Symmetric percentage spread used to fuzzify a crisp rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Spread(f64);

impl Spread {
    pub const P15: Spread = Spread(15.0);
    pub const P25: Spread = Spread(25.0);
    pub const P50: Spread = Spread(50.0);

    /// Accepts one of the standard spreads: 15, 25 or 50 percent.
    pub fn standard(percent: f64) -> Result<Self> {
        if [15.0, 25.0, 50.0].contains(&percent) {
            Ok(Spread(percent))
        } else {
            Err(Error::Config(format!(
                "spread {percent}% is not one of 15, 25, 50 (use a custom spread to override)"
            )))
        }
    }

    /// Any spread strictly between 0 and 100 percent.
    pub fn custom(percent: f64) -> Result<Self> {
        if percent.is_finite() && percent > 0.0 && percent < 100.0 {
            Ok(Spread(percent))
        } else {
            Err(Error::Config(format!(
                "spread {percent}% must lie in (0, 100)"
            )))
        }
    }

    pub fn percent(&self) -> f64 {
        self.0
    }

    pub fn fraction(&self) -> f64 {
        self.0 / 100.0
    }
}

impl Default for Spread {
    fn default() -> Self {
        Spread::P15
    }
}

impl TryFrom<f64> for Spread {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Spread::custom(v)
    }
}

impl From<Spread> for f64 {
    fn from(s: Spread) -> f64 {
        s.0
    }
}

impl fmt::Display for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.0)
    }
}

/// Widens a crisp positive rate into `((1 - s) λ, λ, (1 + s) λ)`.
///
/// ```
/// use fuzzy_tft::{fuzzify, Spread};
/// let x = fuzzify(1.0, Spread::P50).unwrap();
/// assert_eq!(x.components(), [0.5, 1.0, 1.5]);
/// ```
pub fn fuzzify(rate: f64, spread: Spread) -> Result<Tfn> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::domain(format!("rate must be positive, got {rate}")));
    }
    let s = spread.fraction();
    Tfn::new((1.0 - s) * rate, rate, (1.0 + s) * rate)
}
