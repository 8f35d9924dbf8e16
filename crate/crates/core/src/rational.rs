//! Exact rational time values.
//!
//! Clock values and timestamps are compared against integer guard endpoints
//! and timeout bounds, so every operation here is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedMul, One, Signed, ToPrimitive, Zero};

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{text}`: {reason}")]
pub struct ParseRationalError {
    text: String,
    reason: &'static str,
}

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));

    /// Builds `numer / denom`, reducing to lowest terms.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    /// Lossy conversion for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::from_integer(i64::from(n))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts integers (`2`), fractions (`3/2`) and terminating decimals
/// (`1.25`), all converted exactly.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRationalError {
            text: s.to_string(),
            reason,
        };
        let text = s.trim();
        if text.is_empty() {
            return Err(err("empty"));
        }
        if let Some((n, d)) = text.split_once('/') {
            let numer: i64 = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let denom: i64 = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if denom == 0 {
                return Err(err("zero denominator"));
            }
            return Ok(Rational::new(numer, denom));
        }
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err("not a number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: i64 = digits.parse().map_err(|_| err("out of range"))?;
        let scale = u32::try_from(frac_part.len()).map_err(|_| err("out of range"))?;
        let denom = 10i64.checked_pow(scale).ok_or_else(|| err("out of range"))?;
        let value = Ratio::new(numer, denom);
        let value = if negative {
            value
                .checked_mul(&-Ratio::<i64>::one())
                .ok_or_else(|| err("out of range"))?
        } else {
            value
        };
        Ok(Rational(value))
    }
}
