//! Text helpers for exact rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. The canonical text form is
//! `p/q`, always with the slash, so `0` prints as `0/1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = p
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let denom: BigInt = q
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(numer, denom))
}

pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn from_int(p: impl Into<BigInt>) -> Rational {
    Rational::from_integer(p.into())
}

/// Exact `1/(4m)`.
pub(crate) fn quarter_over(m: &BigInt) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(4u64) * m)
}
