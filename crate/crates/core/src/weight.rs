//! Scalar weights for measures and kernels.
//!
//! Two arithmetic modes are supported: exact rationals ([`Rational`]) for
//! bit-stable small-horizon runs, and `f64` for long horizons. Every
//! algorithm in the crate is generic over [`Weight`].

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Weight:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Signed
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// `base^exp` for a possibly negative integer exponent.
    fn int_pow(base: i64, exp: i32) -> Self;

    fn to_text(&self) -> String;

    fn from_text(text: &str) -> Result<Self>;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Weight for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn int_pow(base: i64, exp: i32) -> Self {
        (base as f64).powi(exp)
    }

    fn to_text(&self) -> String {
        // Shortest representation that round-trips.
        format!("{self:?}")
    }

    fn from_text(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((n, d)) = text.split_once('/') {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{text}: {e}")))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{text}: {e}")))?;
            return Ok(n / d);
        }
        text.parse()
            .map_err(|e| Error::Parse(format!("{text}: {e}")))
    }
}

impl Weight for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn int_pow(base: i64, exp: i32) -> Self {
        let b = BigRational::from_integer(BigInt::from(base));
        if exp >= 0 {
            num_traits::pow(b, exp as usize)
        } else {
            num_traits::pow(b, exp.unsigned_abs() as usize).recip()
        }
    }

    fn to_text(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn from_text(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((n, d)) = text.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("{text}: zero denominator")));
            }
            return Ok(BigRational::new(n, d));
        }
        if let Ok(n) = BigInt::from_str(text) {
            return Ok(BigRational::from_integer(n));
        }
        // Decimal literals are read exactly.
        let (int_part, frac_part) = text
            .split_once('.')
            .ok_or_else(|| Error::Parse(format!("not a rational: {text}")))?;
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches('-'), frac_part);
        let n = BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(n, d);
        Ok(if negative { -value } else { value })
    }
}

/// Which scalar type an experiment runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
    /// Exact when the horizon is at most [`EXACT_HORIZON_LIMIT`], float otherwise.
    #[default]
    Auto,
}

pub const EXACT_HORIZON_LIMIT: usize = 32;

impl ArithmeticMode {
    pub fn resolve(self, horizon: usize) -> ArithmeticMode {
        match self {
            ArithmeticMode::Auto if horizon <= EXACT_HORIZON_LIMIT => ArithmeticMode::Exact,
            ArithmeticMode::Auto => ArithmeticMode::Float,
            other => other,
        }
    }
}

/// Default per-atom truncation threshold for float runs.
pub const DEFAULT_TRUNCATION: f64 = 1e-12;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_roundtrip() {
        let r = rational(-3, 12);
        assert_eq!(r.to_text(), "-1/4");
        assert_eq!(Rational::from_text("-1/4").unwrap(), r);
        assert_eq!(Rational::from_text("0.25").unwrap(), rational(1, 4));
        assert_eq!(Rational::from_text("-0.5").unwrap(), rational(-1, 2));
        assert_eq!(Rational::from_text("7").unwrap(), rational(7, 1));
    }

    #[test]
    fn float_text_roundtrip() {
        let x = 0.1f64 + 0.2;
        assert_eq!(f64::from_text(&x.to_text()).unwrap(), x);
        assert_eq!(f64::from_text("1/4").unwrap(), 0.25);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(Rational::int_pow(3, -2), rational(1, 9));
        assert_eq!(Rational::int_pow(2, 5), rational(32, 1));
        assert_eq!(<f64 as Weight>::int_pow(3, -1), 1.0 / 3.0);
    }

    #[test]
    fn auto_mode_switches_on_horizon() {
        assert_eq!(ArithmeticMode::Auto.resolve(32), ArithmeticMode::Exact);
        assert_eq!(ArithmeticMode::Auto.resolve(33), ArithmeticMode::Float);
        assert_eq!(ArithmeticMode::Float.resolve(4), ArithmeticMode::Float);
    }
}
