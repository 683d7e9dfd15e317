//! Serde helpers shared by the report types. Big integers and rationals are
//! emitted as strings so that no precision is lost in JSON.

use num_bigint::BigInt;
use serde::Serializer;

use crate::rational::{format_rational, Rational};

pub fn bigint_str<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn bigint_vec_str<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub fn rational_str<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

pub fn rational_vec_str<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}
