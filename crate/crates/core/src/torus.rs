//! The circle group ℝ/ℤ with exact rational points.
//!
//! Every point is stored by its unique representative in `[-1/2, 1/2)`.
//! The closed arcs `T_m = [-1/(4m), 1/(4m)]` are modelled by [`TmLevel`];
//! `T_1` is the usual `T_+`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, quarter_over, Rational};

/// A point of ℝ/ℤ, held as its representative in `[-1/2, 1/2)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    rep: Rational,
}

impl TorusPoint {
    pub fn zero() -> Self {
        TorusPoint { rep: Rational::zero() }
    }

    /// Reduces any rational modulo 1 into `[-1/2, 1/2)`.
    pub fn canonicalize(q: &Rational) -> Self {
        // r = q - floor(q + 1/2) lies in [-1/2, 1/2)
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let shift = (q + &half).floor();
        TorusPoint { rep: q - shift }
    }

    /// The point `numer/denom + ℤ`, computed with integer arithmetic only.
    pub fn from_fraction(numer: &BigInt, denom: &BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        let (numer, denom) = if denom.is_negative() {
            (-numer, -denom)
        } else {
            (numer.clone(), denom.clone())
        };
        // residue in [0, denom), then fold the upper half down
        let mut r = numer.mod_floor(&denom);
        if &r * 2 >= denom {
            r -= &denom;
        }
        TorusPoint {
            rep: Rational::new(r, denom),
        }
    }

    pub fn rep(&self) -> &Rational {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::canonicalize(&(&self.rep + &other.rep))
    }

    pub fn neg(&self) -> TorusPoint {
        self.int_scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &TorusPoint) -> TorusPoint {
        self.add(&other.neg())
    }

    /// `k · x` in ℝ/ℤ.
    pub fn int_scale(&self, k: &BigInt) -> TorusPoint {
        TorusPoint::from_fraction(&(k * self.rep.numer()), self.rep.denom())
    }

    /// Closed-interval membership `|rep| <= 1/(4m)`.
    pub fn in_tm(&self, level: &TmLevel) -> bool {
        // |p|/q <= 1/(4m)  <=>  4m|p| <= q
        let lhs = BigInt::from(4) * &level.0 * self.rep.numer().abs();
        lhs <= *self.rep.denom()
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.rep))
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusPoint({})", format_rational(&self.rep))
    }
}

impl FromStr for TorusPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(TorusPoint::canonicalize(&parse_rational(s)?))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Index `m >= 1` of the arc `T_m = [-1/(4m), 1/(4m)]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TmLevel(BigInt);

impl TmLevel {
    /// `T_+`.
    pub fn plus() -> Self {
        TmLevel(BigInt::one())
    }

    pub fn new(m: u64) -> Result<Self> {
        Self::from_bigint(BigInt::from(m))
    }

    pub fn from_bigint(m: BigInt) -> Result<Self> {
        if m < BigInt::one() {
            return Err(Error::Precondition(format!("T_m level must be >= 1, got {m}")));
        }
        Ok(TmLevel(m))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    /// Right endpoint `1/(4m)`.
    pub fn radius(&self) -> Rational {
        quarter_over(&self.0)
    }
}

impl fmt::Display for TmLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn canonicalize(q: &Rational) -> TorusPoint {
    TorusPoint::canonicalize(q)
}

pub fn add(x: &TorusPoint, y: &TorusPoint) -> TorusPoint {
    x.add(y)
}

pub fn int_scale(k: &BigInt, x: &TorusPoint) -> TorusPoint {
    x.int_scale(k)
}

pub fn in_tm(x: &TorusPoint, level: &TmLevel) -> bool {
    x.in_tm(level)
}
