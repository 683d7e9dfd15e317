//! Rational characters of ℤ and their continuity.
//!
//! A character `χ: ℤ → ℝ/ℤ` is fixed by `χ(1)`. For the linear topology of
//! a chain `(b_n)`, `χ` is continuous exactly when `χ(1) = k/b_n + ℤ` for
//! some `n`, i.e. when the reduced denominator of `χ(1)` divides some
//! `b_n`. The same condition describes the subgroup generated by
//! `S = {1/b_n + ℤ}`; for two-power chains that subgroup is the Prüfer
//! 2-group.
//!
//! [`continuity_window_check`] only looks at a finite window of a
//! neighbourhood. A pass is necessary evidence for continuity, never a
//! proof; whether the dual of the uniform topology is larger than the
//! Prüfer group is not decided here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::neighborhoods::NeighborhoodSpec;
use crate::pivots::PivotSequence;
use crate::rational::Rational;
use crate::torus::{TmLevel, TorusPoint};

/// Upper limit on terms scanned by the divisor search for chains whose
/// prime support is unknown.
const MAX_SEARCH_TERMS: usize = 100_000;

/// The character `x ↦ x · value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    pub value: TorusPoint,
}

impl Character {
    pub fn new(value: TorusPoint) -> Self {
        Character { value }
    }

    pub fn from_rational(q: &Rational) -> Self {
        Character { value: TorusPoint::canonicalize(q) }
    }

    /// Reduced denominator of `χ(1)`.
    pub fn denominator(&self) -> &BigInt {
        self.value.rep().denom()
    }
}

impl std::str::FromStr for Character {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Character { value: s.parse()? })
    }
}

pub fn char_eval(chi: &Character, x: &BigInt) -> TorusPoint {
    chi.value.int_scale(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The denominator divides `b_n` for the reported index.
    Divides,
    /// The denominator has a prime factor that no multiplier has.
    PrimeSupport {
        #[serde(serialize_with = "crate::report::bigint_str")]
        cofactor: BigInt,
    },
    /// A finite chain ended without a term divisible by the denominator.
    ChainExhausted,
    /// Inconclusive: the search hit the bit budget or the term limit.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub continuous_for_linear: bool,
    pub witness_index: Option<usize>,
    pub certificate: Certificate,
}

impl KernelReport {
    pub fn is_conclusive(&self) -> bool {
        self.certificate != Certificate::BudgetExhausted
    }
}

/// Least `n` with `q | b_n`, or a certificate that none exists.
fn divisor_search(q: &BigInt, pivots: &PivotSequence) -> Result<KernelReport> {
    let found = |n| KernelReport {
        continuous_for_linear: true,
        witness_index: Some(n),
        certificate: Certificate::Divides,
    };
    let none = |certificate| KernelReport {
        continuous_for_linear: false,
        witness_index: None,
        certificate,
    };
    if q.is_one() {
        return Ok(found(0));
    }
    if let Some(primes) = pivots.multiplier_prime_support() {
        let mut rest = q.clone();
        for p in primes {
            let p = BigInt::from(p);
            while rest.is_multiple_of(&p) {
                rest /= &p;
            }
        }
        if !rest.is_one() {
            return Ok(none(Certificate::PrimeSupport { cofactor: rest }));
        }
    }
    let limit = if pivots.support_recurs() { usize::MAX } else { MAX_SEARCH_TERMS };
    let mut n = 0;
    while n < limit {
        match pivots.ensure_valid(n + 1).and_then(|_| pivots.term(n)) {
            Ok(b) => {
                if b.is_multiple_of(q) {
                    return Ok(found(n));
                }
            }
            Err(Error::ChainExhausted { .. }) => return Ok(none(Certificate::ChainExhausted)),
            Err(Error::BitBudgetExceeded { .. }) => return Ok(none(Certificate::BudgetExhausted)),
            Err(e) => return Err(e),
        }
        n += 1;
    }
    Ok(none(Certificate::BudgetExhausted))
}

/// Whether `χ` is continuous on ℤ with the linear topology of `pivots`.
pub fn kernel_check(chi: &Character, pivots: &PivotSequence) -> Result<KernelReport> {
    divisor_search(chi.denominator(), pivots)
}

/// Whether `x` lies in the subgroup generated by `{1/b_n + ℤ : n >= 1}`.
pub fn generated_member(x: &TorusPoint, pivots: &PivotSequence) -> Result<bool> {
    let r = divisor_search(x.rep().denom(), pivots)?;
    if !r.is_conclusive() {
        return Err(Error::Inconclusive(format!(
            "no term of {pivots} within budget is divisible by {}",
            x.rep().denom()
        )));
    }
    Ok(r.continuous_for_linear)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCheck {
    pub passed: bool,
    /// Least `|k|` (positive first) in the neighbourhood with `χ(k) ∉ T_+`.
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub failing_k: Option<BigInt>,
    pub failing_value: Option<TorusPoint>,
    pub window: u64,
}

fn serialize_opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// Checks `χ(k) ∈ T_+` for every `k` of the neighbourhood with
/// `|k| <= window`. Necessary for continuity, not sufficient.
pub fn continuity_window_check(
    chi: &Character,
    spec: &NeighborhoodSpec,
    window: u64,
) -> Result<WindowCheck> {
    let plus = TmLevel::plus();
    if chi.value.is_zero() {
        return Ok(WindowCheck { passed: true, failing_k: None, failing_value: None, window });
    }
    for a in 1..=window {
        for k in [BigInt::from(a), -BigInt::from(a)] {
            if !spec.contains(&k)? {
                continue;
            }
            let v = char_eval(chi, &k);
            if !v.in_tm(&plus) {
                return Ok(WindowCheck {
                    passed: false,
                    failing_k: Some(k),
                    failing_value: Some(v),
                    window,
                });
            }
        }
    }
    Ok(WindowCheck { passed: true, failing_k: None, failing_value: None, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pivots::make_pivots;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn chi(p: i64, q: i64) -> Character {
        Character::from_rational(&ratio(p, q))
    }

    #[test]
    fn char_eval_examples() {
        assert!(char_eval(&chi(1, 2), &BigInt::from(2)).is_zero());
        assert_eq!(char_eval(&chi(3, 16), &BigInt::from(5)).rep(), &ratio(-1, 16));
        let b = PivotSequence::square().term(3).unwrap();
        for k in [1, 7, -300] {
            let c = Character::from_rational(&Rational::new(BigInt::from(k), b.clone()));
            assert!(char_eval(&c, &b).is_zero());
        }
    }

    #[test]
    fn kernel_check_examples() {
        let sq = PivotSequence::square();
        let r = kernel_check(&chi(3, 16), &sq).unwrap();
        assert!(r.continuous_for_linear);
        assert_eq!(r.witness_index, Some(2));
        let r = kernel_check(&chi(1, 3), &sq).unwrap();
        assert!(!r.continuous_for_linear);
        assert_eq!(r.certificate, Certificate::PrimeSupport { cofactor: BigInt::from(3) });
        let r = kernel_check(&chi(0, 1), &sq).unwrap();
        assert_eq!(r.witness_index, Some(0));
    }

    #[test]
    fn kernel_check_on_finite_and_generated_chains() {
        let fin = make_pivots("chain:2,2".parse().unwrap()).unwrap();
        assert_eq!(kernel_check(&chi(1, 8), &fin).unwrap().certificate, Certificate::ChainExhausted);
        assert_eq!(kernel_check(&chi(1, 4), &fin).unwrap().witness_index, Some(2));

        let g: crate::pivots::MultiplierFn = std::sync::Arc::new(|n| BigInt::from(if n % 2 == 0 { 2 } else { 5 }));
        let gen = make_pivots(crate::pivots::PivotDescriptor::MultiplierChain(
            crate::pivots::MultiplierChain::Generator(g),
        ))
        .unwrap();
        assert_eq!(kernel_check(&chi(1, 50), &gen).unwrap().witness_index, Some(4));
        let small = PivotSequence::with_bit_budget(gen.descriptor().clone(), 64).unwrap();
        let r = kernel_check(&chi(1, 3), &small).unwrap();
        assert!(!r.is_conclusive());
        assert!(generated_member(&"1/3".parse().unwrap(), &small).is_err());
    }

    #[test]
    fn generated_member_examples() {
        let sq = PivotSequence::square();
        assert!(generated_member(&"1/8".parse().unwrap(), &sq).unwrap());
        assert!(!generated_member(&"1/3".parse().unwrap(), &sq).unwrap());
        assert!(generated_member(&TorusPoint::zero(), &sq).unwrap());
        // 1/8 = 64/512
        assert_eq!(
            TorusPoint::from_fraction(&BigInt::from(64), &sq.term(3).unwrap()),
            "1/8".parse().unwrap()
        );
    }

    #[test]
    fn window_check_examples() {
        let sq = PivotSequence::square();
        let spec = NeighborhoodSpec::uniform(sq, TmLevel::plus());
        assert!(continuity_window_check(&chi(1, 2), &spec, 10_000).unwrap().passed);

        let lin = NeighborhoodSpec::linear(PivotSequence::linear(), 5);
        let r = continuity_window_check(&chi(1, 3), &lin, 1000).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failing_k, Some(BigInt::from(32)));
        assert_eq!(r.failing_value.unwrap().rep(), &ratio(-1, 3));

        assert!(continuity_window_check(&chi(0, 1), &lin, 1000).unwrap().passed);
    }

    #[test]
    fn kernel_implies_window_for_linear() {
        let sq = PivotSequence::square();
        for q in [1i64, 2, 4, 8, 16, 64, 512] {
            for p in 0..q.min(20) {
                let c = chi(p, q);
                let r = kernel_check(&c, &sq).unwrap();
                assert!(r.continuous_for_linear);
                let spec = NeighborhoodSpec::linear(sq.clone(), r.witness_index.unwrap());
                assert!(continuity_window_check(&c, &spec, 2000).unwrap().passed);
            }
        }
    }

    proptest! {
        #[test]
        fn char_eval_is_a_homomorphism(p in -500i64..500, q in 1i64..300, x in -10_000i64..10_000, y in -10_000i64..10_000) {
            let c = chi(p, q);
            let lhs = char_eval(&c, &BigInt::from(x + y));
            let rhs = char_eval(&c, &BigInt::from(x)).add(&char_eval(&c, &BigInt::from(y)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn generated_member_agrees_with_kernel(p in -200i64..200, q in 1i64..400) {
            let sq = PivotSequence::square();
            let c = chi(p, q);
            prop_assert_eq!(
                generated_member(&c.value, &sq).unwrap(),
                kernel_check(&c, &sq).unwrap().continuous_for_linear
            );
        }
    }
}
