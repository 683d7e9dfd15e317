//! Balanced digit expansion of an integer over a pivot chain.
//!
//! Every `l ∈ ℤ` is written `l = Σ k_i b_i` with `|k_n| <= b_{n+1}/(2 b_n)`
//! and `|Σ_{i<=n} k_i b_i| <= b_{n+1}/2`. The digits come from the top
//! down: with `N` minimal such that `b_N >= |l|`,
//! `k_n = rd((l - Σ_{i>n} k_i b_i) / b_n)`, where `rd` rounds to the
//! nearest integer and breaks exact half-ties toward zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::pivots::PivotSequence;
use crate::rational::Rational;

/// Nearest integer to `q`; exact half-ties go to the neighbour closer to 0.
pub fn rd(q: &Rational) -> BigInt {
    rd_div(q.numer(), q.denom())
}

/// `rd(a / b)` for `b > 0` with integer arithmetic only.
pub(crate) fn rd_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    // on a tie q + 1/2, q < 0 means q + 1 is nearer zero
    if twice > *b || (twice == *b && q.is_negative()) {
        q + 1
    } else {
        q
    }
}

/// Digits `k_0, ..., k_N` of `source` over `pivots`, lowest index first.
///
/// Trailing zero digits are not stored; `top_index` keeps the `N` of the
/// recursion (`None` for `l = 0`).
#[derive(Clone, Debug)]
pub struct PivotCoefficients {
    source: BigInt,
    coeffs: Vec<BigInt>,
    top_index: Option<usize>,
    pivots: PivotSequence,
}

impl PivotCoefficients {
    /// Wraps hand-built digits; `source` is set to their recomposition.
    pub fn from_digits(digits: Vec<BigInt>, pivots: PivotSequence) -> Result<Self> {
        let mut c = PivotCoefficients {
            source: BigInt::zero(),
            top_index: digits.len().checked_sub(1),
            coeffs: digits,
            pivots,
        };
        c.source = c.recompose()?;
        Ok(c)
    }

    pub fn source(&self) -> &BigInt {
        &self.source
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `k_n`, zero past the stored digits.
    pub fn digit(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn top_index(&self) -> Option<usize> {
        self.top_index
    }

    pub fn pivots(&self) -> &PivotSequence {
        &self.pivots
    }

    pub fn recompose(&self) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for (i, k) in self.coeffs.iter().enumerate() {
            if !k.is_zero() {
                acc += k * self.pivots.term(i)?;
            }
        }
        Ok(acc)
    }

    /// Partial sums `P_n = Σ_{s<n} k_s b_s` for `n = 0 ..= len`.
    pub fn partial_sums(&self, len: usize) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(len + 1);
        let mut acc = BigInt::zero();
        out.push(acc.clone());
        for s in 0..len {
            let k = self.digit(s);
            if !k.is_zero() {
                acc += k * self.pivots.term(s)?;
            }
            out.push(acc.clone());
        }
        Ok(out)
    }

    /// Digits as `k0,k1,...`; empty for zero.
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Computes the balanced digits of `l`.
pub fn decompose(l: &BigInt, pivots: &PivotSequence) -> Result<PivotCoefficients> {
    if l.is_zero() {
        return Ok(PivotCoefficients {
            source: BigInt::zero(),
            coeffs: Vec::new(),
            top_index: None,
            pivots: pivots.clone(),
        });
    }
    let top = pivots.first_index_at_least(&l.abs())?;
    pivots.ensure_valid(top + 1)?;
    let mut coeffs = vec![BigInt::zero(); top + 1];
    let mut rest = l.clone();
    for n in (0..=top).rev() {
        let b = pivots.term(n)?;
        let k = rd_div(&rest, &b);
        rest -= &k * &b;
        coeffs[n] = k;
    }
    debug_assert!(rest.is_zero());
    while coeffs.last().is_some_and(|k| k.is_zero()) {
        coeffs.pop();
    }
    Ok(PivotCoefficients {
        source: l.clone(),
        coeffs,
        top_index: Some(top),
        pivots: pivots.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub value: BigInt,
    pub sum_ok: bool,
    pub digit_bounds_ok: bool,
    pub partial_sum_bounds_ok: bool,
}

impl CheckReport {
    pub fn all_ok(&self) -> bool {
        self.sum_ok && self.digit_bounds_ok && self.partial_sum_bounds_ok
    }
}

/// Recomputes `Σ k_i b_i` and checks each bound separately. Works on any
/// digit list, including ones that violate the bounds.
pub fn recompose_and_check(coeffs: &PivotCoefficients) -> Result<CheckReport> {
    let pivots = &coeffs.pivots;
    let len = coeffs.coeffs.len();
    pivots.ensure_valid(len + 1)?;
    let value = coeffs.recompose()?;

    let mut digit_bounds_ok = true;
    let mut partial_sum_bounds_ok = true;
    let mut partial = BigInt::zero();
    for (n, k) in coeffs.coeffs.iter().enumerate() {
        let b = pivots.term(n)?;
        let next = pivots.term(n + 1)?;
        // |k_n| <= b_{n+1} / (2 b_n)
        if BigInt::from(2) * k.abs() * &b > next {
            digit_bounds_ok = false;
        }
        partial += k * &b;
        // |Σ_{i<=n} k_i b_i| <= b_{n+1} / 2
        if BigInt::from(2) * partial.abs() > next {
            partial_sum_bounds_ok = false;
        }
    }
    Ok(CheckReport {
        sum_ok: value == coeffs.source,
        value,
        digit_bounds_ok,
        partial_sum_bounds_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pivots::make_pivots;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rd_examples() {
        assert_eq!(rd(&ratio(1, 2)), BigInt::from(0));
        assert_eq!(rd(&ratio(-1, 2)), BigInt::from(0));
        assert_eq!(rd(&ratio(3, 2)), BigInt::from(1));
        assert_eq!(rd(&ratio(-3, 2)), BigInt::from(-1));
        assert_eq!(rd(&ratio(-3, 4)), BigInt::from(-1));
        assert_eq!(rd(&ratio(5, 8)), BigInt::from(1));
        assert_eq!(rd(&ratio(7, 1)), BigInt::from(7));
    }

    #[test]
    fn decompose_zero_is_empty() {
        let c = decompose(&BigInt::zero(), &PivotSequence::square()).unwrap();
        assert!(c.coeffs().is_empty());
        assert_eq!(c.top_index(), None);
        let r = recompose_and_check(&c).unwrap();
        assert_eq!(r.value, BigInt::zero());
        assert!(r.all_ok());
    }

    #[test]
    fn decompose_128_over_square() {
        let c = decompose(&BigInt::from(128), &PivotSequence::square()).unwrap();
        assert_eq!(c.coeffs(), ints(&[0, 0, 8]).as_slice());
        assert_eq!(c.top_index(), Some(3));
        let r = recompose_and_check(&c).unwrap();
        assert_eq!(r.value, BigInt::from(128));
        assert!(r.all_ok());
    }

    #[test]
    fn decompose_5_over_linear() {
        let c = decompose(&BigInt::from(5), &PivotSequence::linear()).unwrap();
        assert_eq!(c.coeffs(), ints(&[1, 0, -1, 1]).as_slice());
        assert_eq!(c.to_text(), "1,0,-1,1");
        assert!(recompose_and_check(&c).unwrap().all_ok());
    }

    #[test]
    fn trimmed_and_untrimmed_forms_check_alike() {
        let sq = PivotSequence::square();
        let short = PivotCoefficients::from_digits(ints(&[0, 0, 8]), sq.clone()).unwrap();
        let long = PivotCoefficients::from_digits(ints(&[0, 0, 8, 0]), sq).unwrap();
        assert_eq!(recompose_and_check(&short).unwrap(), recompose_and_check(&long).unwrap());
    }

    #[test]
    fn hand_built_violation_is_reported() {
        let c = PivotCoefficients::from_digits(ints(&[2]), PivotSequence::linear()).unwrap();
        let r = recompose_and_check(&c).unwrap();
        assert_eq!(r.value, BigInt::from(2));
        assert!(r.sum_ok);
        assert!(!r.digit_bounds_ok);
        assert!(!r.partial_sum_bounds_ok);
    }

    #[test]
    fn finite_chain_too_short_is_an_error() {
        let p = make_pivots("chain:2,3".parse().unwrap()).unwrap();
        assert!(decompose(&BigInt::from(5), &p).is_ok());
        assert!(decompose(&BigInt::from(100), &p).is_err());
    }

    #[test]
    fn invalid_chain_is_rejected() {
        let p = make_pivots("terms:1,3,5,10".parse().unwrap()).unwrap();
        assert!(decompose(&BigInt::from(4), &p).is_err());
    }

    #[test]
    fn odd_ratio_chain() {
        // b = 1, 3, 9, 27: balanced ternary
        let p = make_pivots("chain:3,...".parse().unwrap()).unwrap();
        let c = decompose(&BigInt::from(5), &p).unwrap();
        assert_eq!(c.coeffs(), ints(&[-1, -1, 1]).as_slice());
        assert!(recompose_and_check(&c).unwrap().all_ok());
    }

    proptest! {
        #[test]
        fn rd_is_odd_and_nearest(p in -10_000i64..10_000, q in 1i64..200) {
            let x = ratio(p, q);
            let r = rd(&x);
            prop_assert_eq!(rd(&-x.clone()), -r.clone());
            prop_assert_eq!(rd(&x.abs()), r.abs());
            let dist = (&x - Rational::from_integer(r.clone())).abs();
            prop_assert!(dist <= ratio(1, 2));
        }

        #[test]
        fn round_trip_and_bounds(l in -100_000i64..=100_000, which in 0usize..4) {
            let pivots = match which {
                0 => PivotSequence::linear(),
                1 => PivotSequence::square(),
                2 => PivotSequence::factorial(),
                _ => make_pivots("chain:2,3,...".parse().unwrap()).unwrap(),
            };
            let c = decompose(&BigInt::from(l), &pivots).unwrap();
            let r = recompose_and_check(&c).unwrap();
            prop_assert_eq!(&r.value, &BigInt::from(l));
            prop_assert!(r.all_ok());
        }
    }
}
