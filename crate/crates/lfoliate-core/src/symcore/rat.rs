//! Exact rationals. `Rat` is `num_rational::BigRational`, which already keeps
//! itself reduced with a positive denominator; this module only adds parsing
//! and small constructors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::SymError;

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"-3"`, `"7/2"`, `" 4 / -6 "`.
pub fn parse_rat(s: &str) -> Result<Rat, SymError> {
    let bad = || SymError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Integer value of `r` if it is an integer that fits in `i64`.
pub fn to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.numer()).ok()
}

/// `|r|` rendered without sign, e.g. `3/2`.
pub fn fmt_abs(r: &Rat) -> String {
    r.abs().to_string()
}
