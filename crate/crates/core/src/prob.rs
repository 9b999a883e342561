//! Probability values with an optional exact rational shadow.
//!
//! Every probability carries its binary64 value. When it was loaded (or
//! derived) from exact rationals, the rational is kept alongside so that
//! serialization can print `1/6` instead of a rounded decimal, and so that
//! the binary64 value is always the nearest double to the true rational.
//! Arithmetic that overflows the rational representation silently drops to
//! float-only.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Non-negative rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    /// Returns `None` for a zero denominator.
    pub fn new(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Self::reduce(num as u128, den as u128)
    }

    fn reduce(num: u128, den: u128) -> Option<Self> {
        if num == 0 {
            return Some(Self::ZERO);
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        Some(Ratio {
            num: u64::try_from(num).ok()?,
            den: u64::try_from(den).ok()?,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// Nearest binary64 when both parts are below 2^53, which covers every
    /// table this crate ships.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(&self, other: &Ratio) -> Option<Ratio> {
        let num = (self.num as u128)
            .checked_mul(other.den as u128)?
            .checked_add((other.num as u128).checked_mul(self.den as u128)?)?;
        let den = (self.den as u128).checked_mul(other.den as u128)?;
        Self::reduce(num, den)
    }

    pub fn checked_mul(&self, other: &Ratio) -> Option<Ratio> {
        let num = (self.num as u128).checked_mul(other.num as u128)?;
        let den = (self.den as u128).checked_mul(other.den as u128)?;
        Self::reduce(num, den)
    }

    pub fn checked_div(&self, other: &Ratio) -> Option<Ratio> {
        if other.num == 0 {
            return None;
        }
        let num = (self.num as u128).checked_mul(other.den as u128)?;
        let den = (self.den as u128).checked_mul(other.num as u128)?;
        Self::reduce(num, den)
    }

    pub fn checked_pow(&self, exp: u32) -> Option<Ratio> {
        Some(Ratio {
            num: self.num.checked_pow(exp)?,
            den: self.den.checked_pow(exp)?,
        })
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A probability: binary64 value plus the exact rational when known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prob {
    value: f64,
    exact: Option<Ratio>,
}

impl Prob {
    pub const ZERO: Prob = Prob {
        value: 0.0,
        exact: Some(Ratio::ZERO),
    };
    pub const ONE: Prob = Prob {
        value: 1.0,
        exact: Some(Ratio::ONE),
    };

    pub fn from_f64(value: f64) -> Self {
        Prob { value, exact: None }
    }

    pub fn from_ratio(r: Ratio) -> Self {
        Prob {
            value: r.to_f64(),
            exact: Some(r),
        }
    }

    /// Exact `num/den`; panics on a zero denominator.
    pub fn ratio(num: u64, den: u64) -> Self {
        Self::from_ratio(Ratio::new(num, den).expect("zero denominator"))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Ratio> {
        self.exact
    }

    /// Forgets the rational shadow.
    pub fn inexact(self) -> Self {
        Prob::from_f64(self.value)
    }

    fn combine(
        &self,
        other: &Prob,
        exact: impl Fn(&Ratio, &Ratio) -> Option<Ratio>,
        float: impl Fn(f64, f64) -> f64,
    ) -> Prob {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => match exact(&a, &b) {
                Some(r) => Prob::from_ratio(r),
                None => Prob::from_f64(float(self.value, other.value)),
            },
            _ => Prob::from_f64(float(self.value, other.value)),
        }
    }

    pub fn add(&self, other: &Prob) -> Prob {
        self.combine(other, Ratio::checked_add, |a, b| a + b)
    }

    pub fn mul(&self, other: &Prob) -> Prob {
        self.combine(other, Ratio::checked_mul, |a, b| a * b)
    }

    pub fn div(&self, other: &Prob) -> Prob {
        self.combine(other, Ratio::checked_div, |a, b| a / b)
    }

    pub fn powi(&self, exp: u32) -> Prob {
        match self.exact.and_then(|r| r.checked_pow(exp)) {
            Some(r) => Prob::from_ratio(r),
            None => Prob::from_f64(self.value.powi(exp as i32)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self.exact {
            Some(r) => r.numer() == 0,
            None => self.value == 0.0,
        }
    }
}

impl std::iter::Sum for Prob {
    fn sum<I: Iterator<Item = Prob>>(iter: I) -> Prob {
        iter.fold(Prob::ZERO, |acc, p| acc.add(&p))
    }
}

impl<'a> std::iter::Sum<&'a Prob> for Prob {
    fn sum<I: Iterator<Item = &'a Prob>>(iter: I) -> Prob {
        iter.fold(Prob::ZERO, |acc, p| acc.add(p))
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{r}"),
            None => f.write_str(&format_sig17(self.value)),
        }
    }
}

impl FromStr for Prob {
    type Err = Error;

    /// Accepts `n/d` rationals (kept exact) and decimal literals (float only).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid probability literal {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Ratio::new(n, d).map(Prob::from_ratio).ok_or_else(bad);
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Prob::from_f64(v))
    }
}

/// Plain decimal with 17 significant digits, e.g. `0.25925925925925924`.
/// Round-trips every finite binary64.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            for _ in digits.len()..int_len {
                out.push('0');
            }
            out.push_str(".0");
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}
