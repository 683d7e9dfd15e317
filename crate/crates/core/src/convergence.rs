//! Prefix tests for convergence of integer sequences to zero.
//!
//! Convergence in either topology is a statement about a whole tail, so a
//! finite prefix can only falsify it or provide evidence. A [`Verdict`]
//! records which of the two happened and up to which index.
//!
//! The block statistics follow the usual construction: `j_n` is the least
//! index from which `b_n` divides every term, `M_n` is the run of indices
//! from `j_n` up to `j_{n+1} - 1` (or `{j_n}` when the two coincide), and
//! `S_n = max_{j ∈ M_n} |l_j| / b_{n+1}`. If `S_n → 0` in ℝ the sequence
//! converges in the uniform topology; the converse fails.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::neighborhoods::{member_direct, uniform_violation, Family, NeighborhoodSpec};
use crate::pivots::{PivotSequence, DEFAULT_BIT_BUDGET};
use crate::rational::Rational;
use crate::torus::{TmLevel, TorusPoint};

/// One summand `coeff · j^power · base(j)` of a custom closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomTerm {
    pub coeff: i64,
    pub power: u32,
    pub base: CustomBase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CustomBase {
    /// `b_{j+shift}`.
    Pivot(usize),
    /// `2^{j+shift}`.
    TwoPow(usize),
    One,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceFamily {
    /// `l_j = 2^j`.
    PowTwo,
    /// `l_j = b_{j+1} - b_j`.
    GeomDiff,
    /// `l_j = j b_{j+1} - b_j`.
    WeightedGeomDiff,
    /// `l_j = 2^{n^2}` when `j = n^2 - 2` for some `n >= 2`, else `2^j`.
    BlockExample,
    /// `l_j = b_j ⌊b_{j+1} / (2 b_j)⌋`.
    PivotHalf,
    /// `l_j = b_{j+1}`.
    PivotSuccessor,
    Zero,
    /// Sum of [`CustomTerm`]s.
    Custom(Vec<CustomTerm>),
}

impl SequenceFamily {
    fn needs_pivots(&self) -> bool {
        match self {
            SequenceFamily::PowTwo | SequenceFamily::BlockExample | SequenceFamily::Zero => false,
            SequenceFamily::Custom(terms) => {
                terms.iter().any(|t| matches!(t.base, CustomBase::Pivot(_)))
            }
            _ => true,
        }
    }
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceFamily::PowTwo => f.write_str("pow2"),
            SequenceFamily::GeomDiff => f.write_str("geomdiff"),
            SequenceFamily::WeightedGeomDiff => f.write_str("wgeomdiff"),
            SequenceFamily::BlockExample => f.write_str("blockexample"),
            SequenceFamily::PivotHalf => f.write_str("pivothalf"),
            SequenceFamily::PivotSuccessor => f.write_str("pivotsucc"),
            SequenceFamily::Zero => f.write_str("zero"),
            SequenceFamily::Custom(terms) => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| {
                        let (kind, shift) = match t.base {
                            CustomBase::Pivot(s) => ("b", s),
                            CustomBase::TwoPow(s) => ("p2", s),
                            CustomBase::One => ("one", 0),
                        };
                        format!("{},{},{},{}", t.coeff, t.power, kind, shift)
                    })
                    .collect();
                write!(f, "custom:{}", parts.join(";"))
            }
        }
    }
}

impl FromStr for SequenceFamily {
    type Err = Error;

    /// Family names, or `custom:c,p,kind,shift;...` with kind one of `b`
    /// (pivot `b_{j+shift}`), `p2` (`2^{j+shift}`) or `one`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "pow2" => SequenceFamily::PowTwo,
            "geomdiff" => SequenceFamily::GeomDiff,
            "wgeomdiff" => SequenceFamily::WeightedGeomDiff,
            "blockexample" => SequenceFamily::BlockExample,
            "pivothalf" => SequenceFamily::PivotHalf,
            "pivotsucc" => SequenceFamily::PivotSuccessor,
            "zero" => SequenceFamily::Zero,
            _ => {
                let body = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::InvalidSequence(format!("unknown family {s:?}")))?;
                let bad = || Error::InvalidSequence(format!("bad custom term list {body:?}"));
                let mut terms = Vec::new();
                for part in body.split(';') {
                    let f: Vec<&str> = part.split(',').map(str::trim).collect();
                    if f.len() != 4 {
                        return Err(bad());
                    }
                    let coeff = f[0].parse().map_err(|_| bad())?;
                    let power = f[1].parse().map_err(|_| bad())?;
                    let shift: usize = f[3].parse().map_err(|_| bad())?;
                    let base = match f[2] {
                        "b" => CustomBase::Pivot(shift),
                        "p2" => CustomBase::TwoPow(shift),
                        "one" => CustomBase::One,
                        _ => return Err(bad()),
                    };
                    terms.push(CustomTerm { coeff, power, base });
                }
                SequenceFamily::Custom(terms)
            }
        })
    }
}

/// An integer sequence `(l_j)_{j >= 1}` given in closed form.
#[derive(Clone, Debug)]
pub struct IntegerSequence {
    family: SequenceFamily,
    pivots: Option<PivotSequence>,
}

impl IntegerSequence {
    pub fn new(family: SequenceFamily, pivots: Option<PivotSequence>) -> Result<Self> {
        if family.needs_pivots() && pivots.is_none() {
            return Err(Error::InvalidSequence(format!("{family} needs a pivot chain")));
        }
        Ok(IntegerSequence { family, pivots })
    }

    pub fn over(family: SequenceFamily, pivots: &PivotSequence) -> Self {
        IntegerSequence { family, pivots: Some(pivots.clone()) }
    }

    pub fn family(&self) -> &SequenceFamily {
        &self.family
    }

    fn budget(&self) -> u64 {
        self.pivots.as_ref().map_or(DEFAULT_BIT_BUDGET, |p| p.bit_budget())
    }

    fn pow2(&self, j: usize, e: usize) -> Result<BigInt> {
        let budget = self.budget();
        if e as u64 + 1 > budget {
            return Err(Error::BitBudgetExceeded { index: j, bits: e as u64 + 1, budget });
        }
        Ok(BigInt::one() << e)
    }

    fn b(&self, n: usize) -> Result<BigInt> {
        let p = self.pivots.as_ref().expect("checked at construction");
        p.ensure_valid(n + 1)?;
        p.term(n)
    }

    /// The exact term `l_j`, `j >= 1`.
    pub fn eval(&self, j: usize) -> Result<BigInt> {
        if j == 0 {
            return Err(Error::Precondition("sequences are indexed from j = 1".into()));
        }
        Ok(match &self.family {
            SequenceFamily::PowTwo => self.pow2(j, j)?,
            SequenceFamily::GeomDiff => self.b(j + 1)? - self.b(j)?,
            SequenceFamily::WeightedGeomDiff => BigInt::from(j) * self.b(j + 1)? - self.b(j)?,
            SequenceFamily::BlockExample => {
                let root = (j + 2).isqrt();
                if root >= 2 && root * root == j + 2 {
                    self.pow2(j, j + 2)?
                } else {
                    self.pow2(j, j)?
                }
            }
            SequenceFamily::PivotHalf => {
                let (lo, hi) = (self.b(j)?, self.b(j + 1)?);
                let q = hi / (BigInt::from(2) * &lo);
                lo * q
            }
            SequenceFamily::PivotSuccessor => self.b(j + 1)?,
            SequenceFamily::Zero => BigInt::zero(),
            SequenceFamily::Custom(terms) => {
                let mut acc = BigInt::zero();
                for t in terms {
                    let base = match t.base {
                        CustomBase::Pivot(s) => self.b(j + s)?,
                        CustomBase::TwoPow(s) => self.pow2(j, j + s)?,
                        CustomBase::One => BigInt::one(),
                    };
                    acc += BigInt::from(t.coeff) * BigInt::from(j).pow(t.power) * base;
                }
                acc
            }
        })
    }
}

impl fmt::Display for IntegerSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pivots {
            Some(p) => write!(f, "{} over {}", self.family, p),
            None => write!(f, "{}", self.family),
        }
    }
}

pub fn eval_sequence(seq: &IntegerSequence, j: usize) -> Result<BigInt> {
    seq.eval(j)
}

/// A term `l_j` outside the neighbourhood, certified by index `n`:
/// `value = l_j / b_n + ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub j: usize,
    pub n: usize,
    pub value: TorusPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// Every `j` in `[index, horizon]` lies in the neighbourhood.
    StabilizedAt { index: usize },
    /// The final index fails; all failing indices up to the horizon.
    Falsified { witnesses: Vec<Witness> },
    /// The bit budget stopped evaluation before the requested horizon while
    /// the last evaluated term was still inside.
    InconclusiveAtHorizon,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Last index actually evaluated.
    pub horizon: usize,
    pub level: NeighborhoodSpec,
}

impl Serialize for NeighborhoodSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NeighborhoodSpec", 3)?;
        st.serialize_field("pivots", &self.pivots.to_string())?;
        match &self.family {
            Family::Uniform(m) => {
                st.serialize_field("family", "uniform")?;
                st.serialize_field("m", &m.to_string())?;
            }
            Family::Linear(n) => {
                st.serialize_field("family", "linear")?;
                st.serialize_field("n", n)?;
            }
        }
        st.end()
    }
}

impl Verdict {
    pub fn stabilized_at(&self) -> Option<usize> {
        match self.outcome {
            Outcome::StabilizedAt { index } => Some(index),
            _ => None,
        }
    }

    pub fn witnesses(&self) -> &[Witness] {
        match &self.outcome {
            Outcome::Falsified { witnesses } => witnesses,
            _ => &[],
        }
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self.outcome, Outcome::Falsified { .. })
    }
}

fn witness_for(spec: &NeighborhoodSpec, j: usize, l: &BigInt) -> Result<Option<Witness>> {
    Ok(spec.violation(l)?.map(|(n, value)| Witness { j, n, value }))
}

pub fn prefix_test(seq: &IntegerSequence, spec: &NeighborhoodSpec, horizon: usize) -> Result<Verdict> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be >= 1".into()));
    }
    let mut witnesses = Vec::new();
    let mut last = 0;
    let mut truncated = false;
    for j in 1..=horizon {
        let l = match seq.eval(j) {
            Ok(l) => l,
            Err(Error::BitBudgetExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        if let Some(w) = witness_for(spec, j, &l)? {
            witnesses.push(w);
        }
        last = j;
    }
    let final_fails = witnesses.last().is_some_and(|w| w.j == last);
    let outcome = if last == 0 {
        Outcome::InconclusiveAtHorizon
    } else if final_fails {
        Outcome::Falsified { witnesses }
    } else if truncated {
        Outcome::InconclusiveAtHorizon
    } else {
        Outcome::StabilizedAt { index: witnesses.last().map_or(1, |w| w.j + 1) }
    };
    Ok(Verdict { outcome, horizon: last, level: spec.clone() })
}

/// Every `j <= horizon` with some `n` putting `l_j/b_n + ℤ` outside `T_m`,
/// each with its least such `n`.
pub fn falsify_uniform(
    seq: &IntegerSequence,
    pivots: &PivotSequence,
    m: &TmLevel,
    horizon: usize,
) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for j in 1..=horizon {
        let l = seq.eval(j)?;
        if let Some((n, value)) = uniform_violation(&l, pivots, m)? {
            out.push(Witness { j, n, value });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub n: usize,
    /// First and last index of `M_n`, inclusive.
    pub first: usize,
    pub last: usize,
    #[serde(serialize_with = "crate::report::rational_str")]
    pub s_n: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub horizon: usize,
    /// `(n, j_n)` for every `n` whose `j_n` lies within the horizon.
    pub j: Vec<(usize, usize)>,
    /// `M_0 = {1, ..., j_1 - 1}` as an inclusive range, if nonempty.
    pub m0: Option<(usize, usize)>,
    pub blocks: Vec<Block>,
    /// Least `n` with no `j_n` within the horizon (then none for larger `n`).
    pub missing_from: Option<usize>,
}

impl BlockReport {
    pub fn j_n(&self, n: usize) -> Option<usize> {
        self.j.iter().find(|(k, _)| *k == n).map(|(_, j)| *j)
    }

    pub fn s_values(&self) -> Vec<Rational> {
        self.blocks.iter().map(|b| b.s_n.clone()).collect()
    }

    /// Largest index covered by a complete block.
    pub fn covered_until(&self) -> Option<usize> {
        self.blocks.iter().map(|b| b.last).max()
    }
}

/// `j_n`, `M_n` and `S_n` for `n = 1 ..= max_n`, restricted to what the
/// first `horizon` terms determine.
pub fn blocks_and_sn(
    seq: &IntegerSequence,
    pivots: &PivotSequence,
    horizon: usize,
    max_n: usize,
) -> Result<BlockReport> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be >= 1".into()));
    }
    let terms: Vec<BigInt> = (1..=horizon).map(|j| seq.eval(j)).collect::<Result<_>>()?;
    let term = |j: usize| &terms[j - 1];

    let mut j = Vec::new();
    let mut missing_from = None;
    for n in 1..=max_n + 1 {
        pivots.ensure_valid(n + 1)?;
        let b = pivots.term(n)?;
        // scan down from the horizon while b_n divides
        let mut start = horizon + 1;
        while start > 1 && term(start - 1).is_multiple_of(&b) {
            start -= 1;
        }
        if start > horizon {
            missing_from = Some(n);
            break;
        }
        j.push((n, start));
    }

    let m0 = j.first().and_then(|&(_, j1)| (j1 > 1).then_some((1, j1 - 1)));
    let mut blocks = Vec::new();
    for w in j.windows(2) {
        let ((n, jn), (_, jnext)) = (w[0], w[1]);
        if n > max_n {
            break;
        }
        let (first, last) = if jn == jnext { (jn, jn) } else { (jn, jnext - 1) };
        let b_next = pivots.term(n + 1)?;
        let max_abs = (first..=last).map(|i| term(i).abs()).max().unwrap();
        blocks.push(Block { n, first, last, s_n: Rational::new(max_abs, b_next) });
    }
    Ok(BlockReport { horizon, j, m0, blocks, missing_from })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnLevelReport {
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub m: BigInt,
    /// Least `n_0` with `S_n < 1/(4m)` for every computed `n >= n_0`.
    pub n0: Option<usize>,
    /// With `n0` present: whether every `l_j` from `j_{n0}` to the end of
    /// the computed blocks lies in `V_{S,m}`.
    pub cross_check_ok: Option<bool>,
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnReport {
    pub blocks: BlockReport,
    pub levels: Vec<SnLevelReport>,
}

pub fn sn_sufficient_report(
    seq: &IntegerSequence,
    pivots: &PivotSequence,
    horizon: usize,
    max_n: usize,
    thresholds: &[TmLevel],
) -> Result<SnReport> {
    let blocks = blocks_and_sn(seq, pivots, horizon, max_n)?;
    let mut levels = Vec::new();
    for m in thresholds {
        let radius = m.radius();
        let mut n0 = None;
        for b in blocks.blocks.iter().rev() {
            if b.s_n < radius {
                n0 = Some(b.n);
            } else {
                break;
            }
        }
        let (mut cross_check_ok, mut first_failure) = (None, None);
        if let (Some(n0), Some(end)) = (n0, blocks.covered_until()) {
            let start = blocks.j_n(n0).expect("block has j_n");
            let mut ok = true;
            for j in start..=end {
                if !member_direct(&seq.eval(j)?, pivots, m)? {
                    ok = false;
                    first_failure = Some(j);
                    break;
                }
            }
            cross_check_ok = Some(ok);
        }
        levels.push(SnLevelReport { m: m.value().clone(), n0, cross_check_ok, first_failure });
    }
    Ok(SnReport { blocks, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn lvl(m: u64) -> TmLevel {
        TmLevel::new(m).unwrap()
    }

    fn seq(f: SequenceFamily) -> IntegerSequence {
        IntegerSequence::over(f, &PivotSequence::square())
    }

    #[test]
    fn eval_examples() {
        let p2 = IntegerSequence::new(SequenceFamily::PowTwo, None).unwrap();
        assert_eq!(p2.eval(5).unwrap(), BigInt::from(32));
        assert_eq!(seq(SequenceFamily::GeomDiff).eval(2).unwrap(), BigInt::from(496));
        assert_eq!(seq(SequenceFamily::PivotHalf).eval(2).unwrap(), BigInt::from(256));
        assert_eq!(seq(SequenceFamily::WeightedGeomDiff).eval(2).unwrap(), BigInt::from(2 * 512 - 16));
        assert_eq!(seq(SequenceFamily::PivotSuccessor).eval(1).unwrap(), BigInt::from(16));
        assert!(p2.eval(0).is_err());
        assert!(IntegerSequence::new(SequenceFamily::GeomDiff, None).is_err());
    }

    #[test]
    fn geomdiff_matches_construction() {
        // l_j = 2^{j^2} (2^{2j+1} - 1)
        let s = seq(SequenceFamily::GeomDiff);
        for j in 1..30usize {
            let expected = (BigInt::one() << (j * j)) * ((BigInt::one() << (2 * j + 1)) - 1);
            assert_eq!(s.eval(j).unwrap(), expected);
        }
    }

    #[test]
    fn block_example_terms() {
        let s = IntegerSequence::new(SequenceFamily::BlockExample, None).unwrap();
        assert_eq!(s.eval(1).unwrap(), BigInt::from(2));
        assert_eq!(s.eval(2).unwrap(), BigInt::from(16));
        assert_eq!(s.eval(3).unwrap(), BigInt::from(8));
        assert_eq!(s.eval(7).unwrap(), BigInt::from(512));
        assert_eq!(s.eval(14).unwrap(), BigInt::one() << 16);
    }

    #[test]
    fn custom_family_reproduces_geomdiff() {
        let custom: SequenceFamily = "custom:1,0,b,1;-1,0,b,0".parse().unwrap();
        assert_eq!(custom.to_string(), "custom:1,0,b,1;-1,0,b,0");
        let a = seq(custom);
        let b = seq(SequenceFamily::GeomDiff);
        for j in 1..15 {
            assert_eq!(a.eval(j).unwrap(), b.eval(j).unwrap());
        }
        assert!("custom:1,0,q,0".parse::<SequenceFamily>().is_err());
        assert!("nope".parse::<SequenceFamily>().is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for name in ["pow2", "geomdiff", "wgeomdiff", "blockexample", "pivothalf", "pivotsucc", "zero"] {
            assert_eq!(name.parse::<SequenceFamily>().unwrap().to_string(), name);
        }
    }

    #[test]
    fn pow2_linear_stabilizes_at_n() {
        let p2 = IntegerSequence::new(SequenceFamily::PowTwo, None).unwrap();
        let spec = NeighborhoodSpec::linear(PivotSequence::linear(), 4);
        let v = prefix_test(&p2, &spec, 100).unwrap();
        assert_eq!(v.outcome, Outcome::StabilizedAt { index: 4 });
        assert_eq!(v.horizon, 100);
    }

    #[test]
    fn geomdiff_uniform_stabilizes_early() {
        let spec = NeighborhoodSpec::uniform(PivotSequence::square(), lvl(2));
        let v = prefix_test(&seq(SequenceFamily::GeomDiff), &spec, 50).unwrap();
        assert!(v.stabilized_at().unwrap() <= 2);
    }

    #[test]
    fn pow2_over_square_is_falsified_when_horizon_hits_a_witness() {
        let p2 = IntegerSequence::new(SequenceFamily::PowTwo, None).unwrap();
        let spec = NeighborhoodSpec::uniform(PivotSequence::square(), lvl(1));
        let v = prefix_test(&p2, &spec, 48).unwrap();
        let js: Vec<usize> = v.witnesses().iter().map(|w| w.j).collect();
        assert_eq!(js, vec![3, 8, 15, 24, 35, 48]);
        // past the last witness the prefix looks convergent again
        let v = prefix_test(&p2, &spec, 50).unwrap();
        assert_eq!(v.stabilized_at(), Some(49));
    }

    #[test]
    fn pivothalf_falsified_everywhere() {
        let sq = PivotSequence::square();
        let w = falsify_uniform(&seq(SequenceFamily::PivotHalf), &sq, &lvl(1), 30).unwrap();
        assert_eq!(w.len(), 30);
        for (i, w) in w.iter().enumerate() {
            assert_eq!(w.j, i + 1);
            assert_eq!(w.n, w.j + 1);
            assert_eq!(w.value, TorusPoint::canonicalize(&ratio(1, 2)));
        }
    }

    #[test]
    fn zero_sequence() {
        let z = IntegerSequence::new(SequenceFamily::Zero, None).unwrap();
        let sq = PivotSequence::square();
        assert!(falsify_uniform(&z, &sq, &lvl(1), 20).unwrap().is_empty());
        let r = blocks_and_sn(&z, &sq, 10, 5).unwrap();
        assert!(r.j.iter().all(|&(_, j)| j == 1));
        assert!(r.blocks.iter().all(|b| b.first == 1 && b.last == 1 && b.s_n.is_zero()));
        let rep = sn_sufficient_report(&z, &sq, 10, 5, &[lvl(1), lvl(4)]).unwrap();
        for l in rep.levels {
            assert_eq!(l.n0, Some(1));
            assert_eq!(l.cross_check_ok, Some(true));
        }
    }

    #[test]
    fn geomdiff_blocks() {
        let r = blocks_and_sn(&seq(SequenceFamily::GeomDiff), &PivotSequence::square(), 12, 10).unwrap();
        assert_eq!(r.m0, None);
        for b in &r.blocks {
            assert_eq!((b.first, b.last), (b.n, b.n));
            let d = BigInt::one() << (2 * b.n + 1);
            assert_eq!(b.s_n, Rational::new(&d - 1, d));
        }
        assert_eq!(r.blocks.len(), 10);
        let rep = sn_sufficient_report(&seq(SequenceFamily::GeomDiff), &PivotSequence::square(), 12, 10, &[lvl(1)]).unwrap();
        assert_eq!(rep.levels[0].n0, None);
    }

    #[test]
    fn block_example_blocks_and_falsification() {
        let s = IntegerSequence::new(SequenceFamily::BlockExample, None).unwrap();
        let sq = PivotSequence::square();
        let r = blocks_and_sn(&s, &sq, 80, 7).unwrap();
        for b in &r.blocks {
            assert_eq!((b.first, b.last), (b.n * b.n, (b.n + 1) * (b.n + 1) - 1));
            assert_eq!(b.s_n, Rational::one());
        }
        let w = falsify_uniform(&s, &sq, &lvl(1), 63).unwrap();
        let js: Vec<usize> = w.iter().map(|w| w.j).collect();
        assert_eq!(js, vec![3, 8, 15, 24, 35, 48, 63]);
    }

    #[test]
    fn pivot_successor_blocks() {
        let s = seq(SequenceFamily::PivotSuccessor);
        let sq = PivotSequence::square();
        let r = blocks_and_sn(&s, &sq, 20, 10).unwrap();
        // j_1 = j_2 = 1, then j_n = n - 1
        assert_eq!(r.j_n(1), Some(1));
        assert_eq!(r.j_n(2), Some(1));
        assert_eq!(r.blocks[0].s_n, Rational::one());
        for b in &r.blocks[1..] {
            assert_eq!((b.first, b.last), (b.n - 1, b.n - 1));
            assert_eq!(b.s_n, Rational::new(BigInt::one(), BigInt::one() << (2 * b.n + 1)));
        }
        let rep = sn_sufficient_report(&s, &sq, 20, 10, &[lvl(1)]).unwrap();
        assert_eq!(rep.levels[0].n0, Some(2));
        assert_eq!(rep.levels[0].cross_check_ok, Some(true));
    }

    #[test]
    fn missing_j_n_is_reported() {
        let s = IntegerSequence::new(SequenceFamily::PowTwo, None).unwrap();
        // with horizon 10, 2^{n^2} divides l_10 = 2^10 only for n <= 3
        let r = blocks_and_sn(&s, &PivotSequence::square(), 10, 10).unwrap();
        assert_eq!(r.missing_from, Some(4));
        assert_eq!(r.blocks.len(), 2);
    }

    #[test]
    fn budget_truncation_is_inconclusive() {
        let small = PivotSequence::with_bit_budget(
            crate::pivots::PivotDescriptor::TwoPowerExponent(crate::pivots::ExponentForm::Square),
            200,
        )
        .unwrap();
        let s = IntegerSequence::over(SequenceFamily::GeomDiff, &small);
        let spec = NeighborhoodSpec::uniform(PivotSequence::square(), lvl(1));
        let v = prefix_test(&s, &spec, 50).unwrap();
        assert_eq!(v.outcome, Outcome::InconclusiveAtHorizon);
        assert!(v.horizon < 50);
    }

    #[test]
    fn witnesses_are_sorted_and_sound() {
        let s = IntegerSequence::new(SequenceFamily::PowTwo, None).unwrap();
        let sq = PivotSequence::square();
        let w = falsify_uniform(&s, &sq, &lvl(3), 60).unwrap();
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        for w in &w {
            let b = sq.term(w.n).unwrap();
            let x = TorusPoint::canonicalize(&Rational::new(s.eval(w.j).unwrap(), b));
            assert_eq!(x, w.value);
            assert!(!x.in_tm(&lvl(3)));
        }
    }
}
