//! Exact rational arithmetic used throughout construction code.
//!
//! Every length, offset, time and probability outside Monte Carlo
//! estimation is a [`Rational`]. The textual form is `p/q` (or a plain
//! integer); decimals such as `0.25` are accepted on input and converted
//! exactly.

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number with 128-bit numerator and denominator.
pub type Rational = Ratio<i128>;

/// Shorthand constructor, `rat(3, 4) == 3/4`.
pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

/// Integer as a rational.
pub fn int(value: i128) -> Rational {
    Rational::from_integer(value)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, or a finite decimal (`-1.125`) exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() && whole_digits.is_empty() {
            return None;
        }
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 30 {
            return None;
        }
        let whole: i128 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().ok()?
        };
        let scale = 10i128.checked_pow(frac.len() as u32)?;
        let frac: i128 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let magnitude = Rational::new(whole.checked_mul(scale)?.checked_add(frac)?, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    text.parse::<i128>().ok().map(Rational::from_integer)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub(crate) fn min(a: Rational, b: Rational) -> Rational {
    if a < b {
        a
    } else {
        b
    }
}

pub(crate) fn max(a: Rational, b: Rational) -> Rational {
    if a > b {
        a
    } else {
        b
    }
}

/// Reduces `value` into `[0, period)`.
pub(crate) fn modulo(value: Rational, period: &Rational) -> Rational {
    let q = (value / *period).floor();
    let r = value - q * *period;
    if r.is_negative() {
        r + *period
    } else {
        r
    }
}

pub(crate) fn half() -> Rational {
    rat(1, 2)
}
