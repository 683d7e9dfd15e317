//! Pivot sequences: divisibility chains `1 = b_0 | b_1 | b_2 | ...` with
//! `b_{n+1} / b_n >= 2`.
//!
//! A chain defines two group topologies on ℤ: the linear topology with
//! basic neighbourhoods `b_n ℤ`, and the topology of uniform convergence on
//! `S = {1/b_n + ℤ : n >= 1}`.
//!
//! Terms are evaluated lazily and cached. Because towers like `2^{n^2}` grow
//! fast, every sequence carries a per-term bit budget (default
//! [`DEFAULT_BIT_BUDGET`]); asking for a larger term is an error rather than
//! an allocation storm.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::torus::TorusPoint;

pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

/// Closed form of the exponent sequence `a_n` in `b_n = 2^{a_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentForm {
    /// `a_n = n`, the 2-adic chain.
    Linear,
    /// `a_n = n^2`.
    Square,
    /// `a_0 = 0`, `a_n = n!` for `n >= 1`.
    Factorial,
    /// `a_0 = 0`, `a_n = 2^n` for `n >= 1`.
    PowerOfTwo,
    /// `a_n = c_1 n + c_2 n^2 + ...`; coefficients start at degree one so
    /// that `a_0 = 0` holds by construction.
    Polynomial(Vec<i64>),
}

impl ExponentForm {
    pub fn eval(&self, n: usize) -> Option<u64> {
        let n64 = n as u64;
        match self {
            ExponentForm::Linear => Some(n64),
            ExponentForm::Square => n64.checked_mul(n64),
            ExponentForm::Factorial => {
                if n == 0 {
                    return Some(0);
                }
                (1..=n64).try_fold(1u64, |acc, i| acc.checked_mul(i))
            }
            ExponentForm::PowerOfTwo => {
                if n == 0 {
                    Some(0)
                } else {
                    1u64.checked_shl(u32::try_from(n).ok()?).filter(|_| n < 64)
                }
            }
            ExponentForm::Polynomial(coeffs) => {
                let v = eval_poly_from_degree_one(coeffs, n as i128)?;
                u64::try_from(v).ok()
            }
        }
    }
}

fn eval_poly_from_degree_one(coeffs: &[i64], n: i128) -> Option<i128> {
    let mut acc: i128 = 0;
    for &c in coeffs.iter().rev() {
        acc = acc.checked_add(c as i128)?.checked_mul(n)?;
    }
    Some(acc)
}

/// Certifies that `c_1 n + c_2 n^2 + ...` is strictly increasing on `n >= 0`.
fn check_polynomial(coeffs: &[i64]) -> Result<()> {
    let deg = coeffs.iter().rposition(|&c| c != 0).map(|i| i + 1);
    let Some(deg) = deg else {
        return Err(Error::InvalidDescriptor("polynomial exponent is identically zero".into()));
    };
    // full coefficient vector p[0..=deg] with p[0] = 0
    let mut p = vec![0i128; deg + 1];
    for (i, &c) in coeffs.iter().take(deg).enumerate() {
        p[i + 1] = c as i128;
    }
    // d(n) = p(n+1) - p(n), via binomial expansion
    let mut d = vec![0i128; deg];
    for (j, &pj) in p.iter().enumerate().skip(1) {
        let mut binom: i128 = 1;
        for (i, di) in d.iter_mut().enumerate().take(j) {
            *di += pj * binom;
            binom = binom * (j - i) as i128 / (i + 1) as i128;
        }
    }
    let lead = d[deg - 1];
    if lead <= 0 {
        return Err(Error::InvalidDescriptor("polynomial exponent is not increasing".into()));
    }
    // Cauchy bound on the real roots of d
    let max_ratio = d[..deg - 1]
        .iter()
        .map(|c| c.unsigned_abs().div_ceil(lead as u128))
        .max()
        .unwrap_or(0);
    let bound = max_ratio + 1;
    if bound > 1_000_000 {
        return Err(Error::InvalidDescriptor(
            "cannot certify monotonicity of polynomial exponent".into(),
        ));
    }
    for n in 0..=bound as i128 {
        let mut v: i128 = 0;
        for &c in d.iter().rev() {
            v = v * n + c;
        }
        if v <= 0 {
            return Err(Error::InvalidDescriptor(format!(
                "polynomial exponent is not strictly increasing at n = {n}"
            )));
        }
    }
    Ok(())
}

pub type MultiplierFn = Arc<dyn Fn(usize) -> BigInt + Send + Sync>;

/// Consecutive ratios `b_{n+1} / b_n`.
#[derive(Clone)]
pub enum MultiplierChain {
    /// Exactly these multipliers; the chain ends after them.
    Finite(Vec<BigInt>),
    /// The multipliers repeated forever.
    Cycle(Vec<BigInt>),
    /// `b_{n+1} = b_n * f(n)`. Each value is checked to be `>= 2` on use.
    Generator(MultiplierFn),
}

impl fmt::Debug for MultiplierChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierChain::Finite(m) => f.debug_tuple("Finite").field(m).finish(),
            MultiplierChain::Cycle(m) => f.debug_tuple("Cycle").field(m).finish(),
            MultiplierChain::Generator(_) => f.write_str("Generator(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum PivotDescriptor {
    TwoPowerExponent(ExponentForm),
    MultiplierChain(MultiplierChain),
    /// Literal terms, unchecked until [`PivotSequence::validate_prefix`].
    Explicit(Vec<BigInt>),
}

impl PivotDescriptor {
    fn check(&self) -> Result<()> {
        match self {
            PivotDescriptor::TwoPowerExponent(ExponentForm::Polynomial(c)) => check_polynomial(c),
            PivotDescriptor::TwoPowerExponent(_) => Ok(()),
            PivotDescriptor::MultiplierChain(MultiplierChain::Finite(m))
            | PivotDescriptor::MultiplierChain(MultiplierChain::Cycle(m)) => {
                if matches!(self, PivotDescriptor::MultiplierChain(MultiplierChain::Cycle(_)))
                    && m.is_empty()
                {
                    return Err(Error::InvalidDescriptor("empty multiplier cycle".into()));
                }
                match m.iter().find(|x| **x < BigInt::from(2)) {
                    Some(bad) => Err(Error::InvalidDescriptor(format!(
                        "multiplier {bad} is below 2"
                    ))),
                    None => Ok(()),
                }
            }
            PivotDescriptor::MultiplierChain(MultiplierChain::Generator(_)) => Ok(()),
            PivotDescriptor::Explicit(terms) => {
                if terms.is_empty() {
                    Err(Error::InvalidDescriptor("explicit chain has no terms".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for PivotDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(v: &[BigInt]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            PivotDescriptor::TwoPowerExponent(form) => match form {
                ExponentForm::Linear => f.write_str("linear"),
                ExponentForm::Square => f.write_str("square"),
                ExponentForm::Factorial => f.write_str("factorial"),
                ExponentForm::PowerOfTwo => f.write_str("pow2"),
                ExponentForm::Polynomial(c) => {
                    let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    write!(f, "poly:{}", c.join(","))
                }
            },
            PivotDescriptor::MultiplierChain(MultiplierChain::Finite(m)) => {
                write!(f, "chain:{}", join(m))
            }
            PivotDescriptor::MultiplierChain(MultiplierChain::Cycle(m)) => {
                write!(f, "chain:{},...", join(m))
            }
            PivotDescriptor::MultiplierChain(MultiplierChain::Generator(_)) => {
                f.write_str("chain:<generator>")
            }
            PivotDescriptor::Explicit(t) => write!(f, "terms:{}", join(t)),
        }
    }
}

impl FromStr for PivotDescriptor {
    type Err = Error;

    /// Accepts `linear`, `square`, `factorial`, `pow2`, `poly:c1,c2,...`,
    /// `chain:m1,m2` (finite), `chain:m1,m2,...` (cyclic) and
    /// `terms:b0,b1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidDescriptor(format!("{msg}: {s:?}"));
        let form = match s {
            "linear" => Some(ExponentForm::Linear),
            "square" => Some(ExponentForm::Square),
            "factorial" => Some(ExponentForm::Factorial),
            "pow2" => Some(ExponentForm::PowerOfTwo),
            _ => None,
        };
        if let Some(form) = form {
            return Ok(PivotDescriptor::TwoPowerExponent(form));
        }
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("unknown pivot descriptor"))?;
        let mut items: Vec<&str> = rest.split(',').map(str::trim).collect();
        let cyclic = items.last() == Some(&"...");
        if cyclic {
            items.pop();
        }
        let ints = |items: &[&str]| -> Result<Vec<BigInt>> {
            items
                .iter()
                .map(|x| x.parse::<BigInt>().map_err(|_| bad("bad integer")))
                .collect()
        };
        match kind {
            "poly" if !cyclic => {
                let c = items
                    .iter()
                    .map(|x| x.parse::<i64>().map_err(|_| bad("bad coefficient")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PivotDescriptor::TwoPowerExponent(ExponentForm::Polynomial(c)))
            }
            "chain" => {
                let m = ints(&items)?;
                Ok(PivotDescriptor::MultiplierChain(if cyclic {
                    MultiplierChain::Cycle(m)
                } else {
                    MultiplierChain::Finite(m)
                }))
            }
            "terms" if !cyclic => Ok(PivotDescriptor::Explicit(ints(&items)?)),
            _ => Err(bad("unknown pivot descriptor")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationReason {
    NonUnitStart,
    NonPositive,
    NonDivisor,
    EqualConsecutive,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ValidationReport {
    Ok { length: usize },
    Violation { index: usize, reason: ViolationReason },
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, ValidationReport::Ok { .. })
    }
}

struct Cache {
    terms: Vec<BigInt>,
    validated: usize,
}

struct Inner {
    descriptor: PivotDescriptor,
    bit_budget: u64,
    cache: RwLock<Cache>,
}

/// A lazily evaluated pivot chain. Cloning is cheap and shares the cache.
#[derive(Clone)]
pub struct PivotSequence {
    inner: Arc<Inner>,
}

impl fmt::Debug for PivotSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PivotSequence")
            .field("descriptor", &self.inner.descriptor)
            .field("bit_budget", &self.inner.bit_budget)
            .finish()
    }
}

impl fmt::Display for PivotSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.descriptor.fmt(f)
    }
}

pub fn make_pivots(descriptor: PivotDescriptor) -> Result<PivotSequence> {
    PivotSequence::new(descriptor)
}

impl PivotSequence {
    pub fn new(descriptor: PivotDescriptor) -> Result<Self> {
        Self::with_bit_budget(descriptor, DEFAULT_BIT_BUDGET)
    }

    pub fn with_bit_budget(descriptor: PivotDescriptor, bit_budget: u64) -> Result<Self> {
        descriptor.check()?;
        Ok(PivotSequence {
            inner: Arc::new(Inner {
                descriptor,
                bit_budget,
                cache: RwLock::new(Cache {
                    terms: Vec::new(),
                    validated: 0,
                }),
            }),
        })
    }

    pub fn linear() -> Self {
        Self::new(PivotDescriptor::TwoPowerExponent(ExponentForm::Linear)).unwrap()
    }

    pub fn square() -> Self {
        Self::new(PivotDescriptor::TwoPowerExponent(ExponentForm::Square)).unwrap()
    }

    pub fn factorial() -> Self {
        Self::new(PivotDescriptor::TwoPowerExponent(ExponentForm::Factorial)).unwrap()
    }

    pub fn descriptor(&self) -> &PivotDescriptor {
        &self.inner.descriptor
    }

    pub fn bit_budget(&self) -> u64 {
        self.inner.bit_budget
    }

    /// Exponent `a_n` for two-power chains, `None` for other kinds.
    pub fn exponent(&self, n: usize) -> Option<Result<u64>> {
        match &self.inner.descriptor {
            PivotDescriptor::TwoPowerExponent(form) => Some(form.eval(n).ok_or(
                Error::BitBudgetExceeded {
                    index: n,
                    bits: u64::MAX,
                    budget: self.inner.bit_budget,
                },
            )),
            _ => None,
        }
    }

    /// The exact term `b_n`.
    pub fn term(&self, n: usize) -> Result<BigInt> {
        {
            let cache = self.inner.cache.read().expect("pivot cache poisoned");
            if let Some(t) = cache.terms.get(n) {
                return Ok(t.clone());
            }
        }
        let mut cache = self.inner.cache.write().expect("pivot cache poisoned");
        while cache.terms.len() <= n {
            let i = cache.terms.len();
            let next = match cache.terms.last() {
                Some(prev) => self.compute_term(i, prev)?,
                None => self.first_term(),
            };
            cache.terms.push(next);
        }
        Ok(cache.terms[n].clone())
    }

    fn first_term(&self) -> BigInt {
        match &self.inner.descriptor {
            PivotDescriptor::Explicit(terms) => terms[0].clone(),
            _ => BigInt::one(),
        }
    }

    fn compute_term(&self, n: usize, prev: &BigInt) -> Result<BigInt> {
        let budget = self.inner.bit_budget;
        let over = |bits: u64| Error::BitBudgetExceeded { index: n, bits, budget };
        let t = match &self.inner.descriptor {
            PivotDescriptor::TwoPowerExponent(form) => {
                let a = form.eval(n).ok_or_else(|| over(u64::MAX))?;
                if a.saturating_add(1) > budget {
                    return Err(over(a.saturating_add(1)));
                }
                BigInt::one() << a
            }
            PivotDescriptor::MultiplierChain(chain) => {
                let m = match chain {
                    MultiplierChain::Finite(ms) => ms.get(n - 1).cloned().ok_or(
                        Error::ChainExhausted { index: n, available: ms.len() + 1 },
                    )?,
                    MultiplierChain::Cycle(ms) => ms[(n - 1) % ms.len()].clone(),
                    MultiplierChain::Generator(f) => {
                        let m = f(n - 1);
                        if m < BigInt::from(2) {
                            return Err(Error::InvalidDescriptor(format!(
                                "generated multiplier {m} at step {} is below 2",
                                n - 1
                            )));
                        }
                        m
                    }
                };
                prev * m
            }
            PivotDescriptor::Explicit(terms) => terms
                .get(n)
                .cloned()
                .ok_or(Error::ChainExhausted { index: n, available: terms.len() })?,
        };
        if t.bits() > budget {
            return Err(over(t.bits()));
        }
        Ok(t)
    }

    /// Checks `b_0 = 1`, `b_n | b_{n+1}` and `b_n != b_{n+1}` over the
    /// first `length` terms. A violation at index `n` concerns the pair
    /// `(b_n, b_{n+1})`.
    pub fn validate_prefix(&self, length: usize) -> Result<ValidationReport> {
        if length == 0 {
            return Err(Error::Precondition("prefix length must be >= 1".into()));
        }
        let b0 = self.term(0)?;
        if !b0.is_one() {
            return Ok(ValidationReport::Violation { index: 0, reason: ViolationReason::NonUnitStart });
        }
        let mut prev = b0;
        for n in 1..length {
            let cur = self.term(n)?;
            let index = n - 1;
            if !cur.is_positive() {
                return Ok(ValidationReport::Violation { index, reason: ViolationReason::NonPositive });
            }
            if cur == prev {
                return Ok(ValidationReport::Violation {
                    index,
                    reason: ViolationReason::EqualConsecutive,
                });
            }
            if !cur.is_multiple_of(&prev) {
                return Ok(ValidationReport::Violation { index, reason: ViolationReason::NonDivisor });
            }
            prev = cur;
        }
        Ok(ValidationReport::Ok { length })
    }

    /// Like [`validate_prefix`](Self::validate_prefix) but turns a violation
    /// into an error. Results are remembered, so repeated calls are cheap.
    pub fn ensure_valid(&self, length: usize) -> Result<()> {
        if self.inner.cache.read().expect("pivot cache poisoned").validated >= length {
            return Ok(());
        }
        match self.validate_prefix(length)? {
            ValidationReport::Ok { .. } => {
                let mut cache = self.inner.cache.write().expect("pivot cache poisoned");
                cache.validated = cache.validated.max(length);
                Ok(())
            }
            ValidationReport::Violation { index, reason } => Err(Error::Precondition(format!(
                "pivot chain {self} is not a divisibility chain at n = {index} ({reason:?})"
            ))),
        }
    }

    /// Least `n` with `b_n >= x`, for `x >= 1`.
    pub fn first_index_at_least(&self, x: &BigInt) -> Result<usize> {
        let mut n = 0;
        loop {
            self.ensure_valid(n + 1)?;
            if self.term(n)? >= *x {
                return Ok(n);
            }
            n += 1;
        }
    }

    /// `b_{n+1} / b_n` (exact for validated prefixes).
    pub fn ratio(&self, n: usize) -> Result<BigInt> {
        Ok(self.term(n + 1)? / self.term(n)?)
    }

    /// The element `1/b_n + ℤ` of `S`, for `n >= 1`.
    pub fn s_point(&self, n: usize) -> Result<TorusPoint> {
        Ok(TorusPoint::from_fraction(&BigInt::one(), &self.term(n)?))
    }

    /// Whether `a_{n+1} - a_n >= gap` for every `from <= n < from + count`.
    /// `None` unless this is a two-power chain.
    pub fn exponent_gaps_at_least(&self, from: usize, count: usize, gap: u64) -> Option<Result<bool>> {
        self.exponent_gaps(from, count + 1)
            .map(|g| g.map(|g| g.iter().all(|&d| d >= gap)))
    }

    /// Whether the gaps `a_{n+1} - a_n` strictly increase over the window.
    pub fn exponent_gaps_strictly_increasing(&self, from: usize, count: usize) -> Option<Result<bool>> {
        self.exponent_gaps(from, count + 1)
            .map(|g| g.map(|g| g.windows(2).all(|w| w[0] < w[1])))
    }

    fn exponent_gaps(&self, from: usize, count: usize) -> Option<Result<Vec<u64>>> {
        if !matches!(self.inner.descriptor, PivotDescriptor::TwoPowerExponent(_)) {
            return None;
        }
        Some((from..from + count).map(|n| {
            let lo = self.exponent(n).unwrap()?;
            let hi = self.exponent(n + 1).unwrap()?;
            Ok(hi - lo)
        }).collect())
    }

    /// Whether `b_{n+1}/b_n <= bound` for every `n < count`.
    pub fn ratios_bounded_by(&self, count: usize, bound: &BigInt) -> Result<bool> {
        for n in 0..count {
            if self.ratio(n)? > *bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Prime support of all multipliers, when it is finite and known.
    pub fn multiplier_prime_support(&self) -> Option<Vec<u64>> {
        match &self.inner.descriptor {
            PivotDescriptor::TwoPowerExponent(_) => Some(vec![2]),
            PivotDescriptor::MultiplierChain(MultiplierChain::Cycle(ms))
            | PivotDescriptor::MultiplierChain(MultiplierChain::Finite(ms)) => {
                let mut primes = Vec::new();
                for m in ms {
                    primes.extend(small_prime_factors(m)?);
                }
                primes.sort_unstable();
                primes.dedup();
                Some(primes)
            }
            _ => None,
        }
    }

    /// True for chains that never end (everything except finite lists).
    pub fn is_unbounded(&self) -> bool {
        !matches!(
            self.inner.descriptor,
            PivotDescriptor::MultiplierChain(MultiplierChain::Finite(_)) | PivotDescriptor::Explicit(_)
        )
    }

    /// True for cyclic chains and two-power chains, where every prime of the
    /// support recurs infinitely often.
    pub(crate) fn support_recurs(&self) -> bool {
        matches!(
            self.inner.descriptor,
            PivotDescriptor::TwoPowerExponent(_)
                | PivotDescriptor::MultiplierChain(MultiplierChain::Cycle(_))
        )
    }
}

/// Trial-division factorization, only for multipliers that fit in `u64`.
fn small_prime_factors(m: &BigInt) -> Option<Vec<u64>> {
    let mut x = m.to_u64()?;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= x {
        if x % p == 0 {
            out.push(p);
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    Some(out)
}
