//! Exact rational scalars.

use alloc::format;
use alloc::string::String;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn from_i64(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Always writes `numerator/denominator`, even for integers.
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p` or `p/q` with `q != 0`; the result is reduced.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Largest bit length among numerator and denominator.
pub fn bit_length(q: &Rational) -> u64 {
    q.numer().abs().bits().max(q.denom().bits())
}

/// Residue modulo a prime `p`, or `None` if `p` divides the denominator.
pub fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    let modulus = BigInt::from(p);
    let to_residue = |v: &BigInt| -> u64 {
        let r = ((v % &modulus) + &modulus) % &modulus;
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    };
    let num = to_residue(q.numer());
    let den = to_residue(q.denom());
    if den == 0 {
        return None;
    }
    Some(crate::linalg::mul_mod(num, crate::linalg::inv_mod(den, p), p))
}
