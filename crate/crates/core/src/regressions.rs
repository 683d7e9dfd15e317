//! Catalogue of known results, each checked exactly. Backs the
//! `verify-paper` CLI command.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::convergence::{
    blocks_and_sn, falsify_uniform, prefix_test, sn_sufficient_report, IntegerSequence, SequenceFamily,
};
use crate::decomposition::{decompose, recompose_and_check};
use crate::duality::{generated_member, kernel_check, Character};
use crate::error::Result;
use crate::neighborhoods::{
    discreteness_witness, geometric_prefix, member_direct, member_linear, membership_report,
    MembershipReport, NeighborhoodSpec,
};
use crate::pivots::PivotSequence;
use crate::rational::{format_rational, Rational};
use crate::torus::{TmLevel, TorusPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegressionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CATALOGUE: &[(&str, Check)] = &[
    ("square-chain-terms", square_chain_terms),
    ("decompose-128-square", decompose_128),
    ("decompose-5-linear", decompose_5),
    ("torus-128-over-512", torus_128_over_512),
    ("member-128-square-m1", member_128),
    ("pow2-linear-j_n-equals-n", pow2_linear),
    ("pow2-square-witnesses", pow2_square_witnesses),
    ("pivothalf-separation", pivothalf_separation),
    ("geomdiff-membership", geomdiff_membership),
    ("geomdiff-s_n-closed-form", geomdiff_blocks),
    ("blockexample-s_n-and-falsification", block_example),
    ("discreteness-halving", discreteness_halving),
    ("generated-subgroup-prufer", generated_subgroup),
    ("kernel-3-over-16", kernel_3_16),
    ("decomposition-sweep", decomposition_sweep),
    ("characterization-sweep", characterization_sweep),
    ("kernel-prime-support", kernel_prime_support),
];

pub fn names() -> Vec<&'static str> {
    CATALOGUE.iter().map(|(n, _)| *n).collect()
}

pub fn run_all() -> Vec<RegressionResult> {
    CATALOGUE
        .iter()
        .map(|(name, check)| {
            let (passed, detail) = match check() {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            RegressionResult { name, passed, detail }
        })
        .collect()
}

fn lvl(m: u64) -> TmLevel {
    TmLevel::new(m).expect("m >= 1")
}

fn half() -> TorusPoint {
    TorusPoint::canonicalize(&Rational::new(BigInt::one(), BigInt::from(2)))
}

fn square_chain_terms() -> Result<(bool, String)> {
    let sq = PivotSequence::square();
    let t: Vec<BigInt> = (0..5).map(|n| sq.term(n)).collect::<Result<_>>()?;
    let want: Vec<BigInt> = [1, 2, 16, 512, 65536].into_iter().map(BigInt::from).collect();
    Ok((t == want, format!("{t:?}")))
}

fn decompose_128() -> Result<(bool, String)> {
    let c = decompose(&BigInt::from(128), &PivotSequence::square())?;
    let r = recompose_and_check(&c)?;
    Ok((c.to_text() == "0,0,8" && r.all_ok(), format!("digits {}", c.to_text())))
}

fn decompose_5() -> Result<(bool, String)> {
    let c = decompose(&BigInt::from(5), &PivotSequence::linear())?;
    let r = recompose_and_check(&c)?;
    Ok((c.to_text() == "1,0,-1,1" && r.all_ok(), format!("digits {}", c.to_text())))
}

fn torus_128_over_512() -> Result<(bool, String)> {
    let x = TorusPoint::from_fraction(&BigInt::one(), &BigInt::from(512)).int_scale(&BigInt::from(128));
    let y = TorusPoint::from_fraction(&BigInt::from(8), &BigInt::from(31));
    let ok = x.to_string() == "1/4" && x.in_tm(&lvl(1)) && !y.in_tm(&lvl(1));
    Ok((ok, format!("128/512 = {x}, 8/31 in T_+: {}", y.in_tm(&lvl(1)))))
}

fn member_128() -> Result<(bool, String)> {
    let r = membership_report(&BigInt::from(128), &PivotSequence::square(), &lvl(1))?;
    let want = MembershipReport { direct: true, partial_sums: true, sufficient: false, necessary: true };
    Ok((r == want, format!("{r:?}")))
}

fn pow2_linear() -> Result<(bool, String)> {
    let seq = IntegerSequence::new(SequenceFamily::PowTwo, None)?;
    for n in 1..=20 {
        let v = prefix_test(&seq, &NeighborhoodSpec::linear(PivotSequence::linear(), n), 100)?;
        if v.stabilized_at() != Some(n) {
            return Ok((false, format!("n = {n}: {:?}", v.outcome)));
        }
    }
    Ok((true, "j_n = n for n = 1..=20".into()))
}

fn pow2_square_witnesses() -> Result<(bool, String)> {
    let seq = IntegerSequence::new(SequenceFamily::PowTwo, None)?;
    let w = falsify_uniform(&seq, &PivotSequence::square(), &lvl(1), 50)?;
    let js: Vec<usize> = w.iter().map(|w| w.j).collect();
    let ok = js == [3, 8, 15, 24, 35, 48] && w.iter().all(|w| w.value == half());
    Ok((ok, format!("witnesses at j = {js:?}")))
}

fn pivothalf_separation() -> Result<(bool, String)> {
    let sq = PivotSequence::square();
    let seq = IntegerSequence::over(SequenceFamily::PivotHalf, &sq);
    for j in 1..=30 {
        if !member_linear(&seq.eval(j)?, &sq, j)? {
            return Ok((false, format!("b_{j} does not divide l_{j}")));
        }
    }
    let w = falsify_uniform(&seq, &sq, &lvl(1), 30)?;
    let ok = w.len() == 30
        && w.iter().enumerate().all(|(i, w)| w.j == i + 1 && w.n == w.j + 1 && w.value == half());
    Ok((ok, format!("{} certified witnesses", w.len())))
}

fn geomdiff_membership() -> Result<(bool, String)> {
    let sq = PivotSequence::square();
    let seq = IntegerSequence::over(SequenceFamily::GeomDiff, &sq);
    for m in 1..=6u64 {
        for j in m as usize..=m as usize + 20 {
            if !member_direct(&seq.eval(j)?, &sq, &lvl(m))? {
                return Ok((false, format!("l_{j} not in V_(S,{m})")));
            }
        }
    }
    Ok((true, "l_j in V_(S,m) for m <= 6, m <= j <= m + 20".into()))
}

fn geomdiff_blocks() -> Result<(bool, String)> {
    let sq = PivotSequence::square();
    let seq = IntegerSequence::over(SequenceFamily::GeomDiff, &sq);
    let r = blocks_and_sn(&seq, &sq, 12, 10)?;
    let ok = r.blocks.len() == 10
        && r.blocks.iter().all(|b| {
            let d = BigInt::one() << (2 * b.n + 1);
            b.first == b.n && b.last == b.n && b.s_n == Rational::new(&d - 1, d)
        });
    let sn = sn_sufficient_report(&seq, &sq, 12, 10, &[lvl(1)])?;
    let not_applicable = sn.levels[0].n0.is_none();
    Ok((
        ok && not_applicable,
        format!(
            "S_1..S_3 = {:?}; S_n -> 0 condition met: {}",
            r.blocks.iter().take(3).map(|b| format_rational(&b.s_n)).collect::<Vec<_>>(),
            !not_applicable
        ),
    ))
}

fn block_example() -> Result<(bool, String)> {
    let sq = PivotSequence::square();
    let seq = IntegerSequence::new(SequenceFamily::BlockExample, None)?;
    let r = blocks_and_sn(&seq, &sq, 130, 10)?;
    let blocks_ok = r.blocks.len() == 10
        && r.blocks.iter().all(|b| {
            b.first == b.n * b.n && b.last == (b.n + 1) * (b.n + 1) - 1 && b.s_n == Rational::one()
        });
    let spec = NeighborhoodSpec::uniform(sq.clone(), lvl(1));
    let v = prefix_test(&seq, &spec, 48)?;
    let js: Vec<usize> = v.witnesses().iter().map(|w| w.j).collect();
    let ok = blocks_ok && js == [3, 8, 15, 24, 35, 48];
    Ok((ok, format!("S_n = 1 for n <= 10: {blocks_ok}; falsified at j = {js:?}")))
}

fn discreteness_halving() -> Result<(bool, String)> {
    let w = discreteness_witness(&geometric_prefix(2, 12), &BigInt::from(2), 100)?;
    let ok = w.level == BigInt::from(2) && w.multiplier == BigInt::one() && w.verified;
    Ok((ok, format!("L = {}, survivors {:?}", w.level, w.survivors)))
}

fn generated_subgroup() -> Result<(bool, String)> {
    let sq = PivotSequence::square();
    let a = generated_member(&"1/8".parse()?, &sq)?;
    let b = generated_member(&"1/3".parse()?, &sq)?;
    Ok((a && !b, format!("1/8: {a}, 1/3: {b}")))
}

fn kernel_3_16() -> Result<(bool, String)> {
    let r = kernel_check(&"3/16".parse::<Character>()?, &PivotSequence::square())?;
    Ok((r.continuous_for_linear && r.witness_index == Some(2), format!("{r:?}")))
}

fn decomposition_sweep() -> Result<(bool, String)> {
    for text in ["linear", "square", "factorial", "chain:2,3,..."] {
        let p = PivotSequence::new(text.parse()?)?;
        for l in -2000i64..=2000 {
            let c = decompose(&BigInt::from(l), &p)?;
            if !recompose_and_check(&c)?.all_ok() {
                return Ok((false, format!("{text}, l = {l}: {}", c.to_text())));
            }
        }
    }
    Ok((true, "|l| <= 2000 over 4 pivot families".into()))
}

fn characterization_sweep() -> Result<(bool, String)> {
    for p in [PivotSequence::linear(), PivotSequence::square(), PivotSequence::factorial()] {
        for m in [1, 2, 4, 8] {
            for k in -2000i64..=2000 {
                let r = membership_report(&BigInt::from(k), &p, &lvl(m))?;
                if !r.consistent() {
                    return Ok((false, format!("{p}, m = {m}, k = {k}: {r:?}")));
                }
            }
        }
    }
    Ok((true, "|k| <= 2000, m in {1,2,4,8}, 3 pivot families".into()))
}

fn kernel_prime_support() -> Result<(bool, String)> {
    for (text, primes) in [("square", &[2u64][..]), ("chain:2,3,...", &[2, 3][..])] {
        let p = PivotSequence::new(text.parse()?)?;
        for q in 1..=1000u64 {
            let mut rest = q;
            for &pr in primes {
                while rest % pr == 0 {
                    rest /= pr;
                }
            }
            let chi = Character::from_rational(&Rational::new(BigInt::one(), BigInt::from(q)));
            if kernel_check(&chi, &p)?.continuous_for_linear != (rest == 1) {
                return Ok((false, format!("{text}, 1/{q}")));
            }
        }
    }
    Ok((true, "1/q for q <= 1000 over square and chain:2,3,...".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_regression_passes() {
        for r in run_all() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut n = names();
        n.sort_unstable();
        let len = n.len();
        n.dedup();
        assert_eq!(n.len(), len);
    }
}
