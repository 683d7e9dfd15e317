//! Membership oracles for the basic neighbourhoods of zero.
//!
//! For the uniform-convergence topology the basic sets are
//! `V_{S,m} = {k : k/b_n + ℤ ∈ T_m for all n >= 1}`. The quantifier over `n`
//! is infinite, but once `b_n >= 4m|k|` we have `|k/b_n| <= 1/(4m)`, so only
//! the finitely many `n` with `b_n < 4m|k|` need checking. All routes below
//! stop at that bound.
//!
//! Four routes decide or bound membership:
//! - [`member_direct`] evaluates `k/b_n` on the circle;
//! - [`member_partial_sums`] uses the digit expansion, `k ∈ V_{S,m}` iff
//!   `|Σ_{s<n} k_s b_s| <= b_n/(4m)` for all `n`;
//! - [`coeff_bound_test`] in sufficient mode (`|k_n| b_n/b_{n+1} <= 1/(8m)`)
//!   and necessary mode (`<= 3/(8m)`).
//!
//! The linear topology has basic sets `b_n ℤ` ([`member_linear`]).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::decomposition::{decompose, PivotCoefficients};
use crate::error::{Error, Result};
use crate::pivots::PivotSequence;
use crate::rational::Rational;
use crate::torus::{TmLevel, TorusPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `V_{S,m}`.
    Uniform(TmLevel),
    /// `b_n ℤ`.
    Linear(usize),
}

/// A basic neighbourhood of zero in one of the two topologies.
#[derive(Clone, Debug)]
pub struct NeighborhoodSpec {
    pub pivots: PivotSequence,
    pub family: Family,
}

impl NeighborhoodSpec {
    pub fn uniform(pivots: PivotSequence, m: TmLevel) -> Self {
        NeighborhoodSpec { pivots, family: Family::Uniform(m) }
    }

    pub fn linear(pivots: PivotSequence, n: usize) -> Self {
        NeighborhoodSpec { pivots, family: Family::Linear(n) }
    }

    pub fn contains(&self, k: &BigInt) -> Result<bool> {
        match &self.family {
            Family::Uniform(m) => member_direct(k, &self.pivots, m),
            Family::Linear(n) => member_linear(k, &self.pivots, *n),
        }
    }

    /// A certificate that `k` lies outside: the least index `n` that fails,
    /// with `k/b_n + ℤ` (which is zero for the linear family only when `k`
    /// is inside).
    pub fn violation(&self, k: &BigInt) -> Result<Option<(usize, TorusPoint)>> {
        match &self.family {
            Family::Uniform(m) => uniform_violation(k, &self.pivots, m),
            Family::Linear(n) => {
                if member_linear(k, &self.pivots, *n)? {
                    Ok(None)
                } else {
                    let b = self.pivots.term(*n)?;
                    Ok(Some((*n, TorusPoint::from_fraction(k, &b))))
                }
            }
        }
    }
}

impl std::fmt::Display for NeighborhoodSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.family {
            Family::Uniform(m) => write!(f, "uniform(m={m}) over {}", self.pivots),
            Family::Linear(n) => write!(f, "linear(n={n}) over {}", self.pivots),
        }
    }
}

/// Least `n >= 1` with `k/b_n + ℤ ∉ T_m`, together with that point.
pub fn uniform_violation(
    k: &BigInt,
    pivots: &PivotSequence,
    m: &TmLevel,
) -> Result<Option<(usize, TorusPoint)>> {
    if k.is_zero() {
        return Ok(None);
    }
    let bound = BigInt::from(4) * m.value() * k.abs();
    let mut n = 1;
    loop {
        pivots.ensure_valid(n + 1)?;
        let b = pivots.term(n)?;
        if b >= bound {
            return Ok(None);
        }
        let x = TorusPoint::from_fraction(k, &b);
        if !x.in_tm(m) {
            return Ok(Some((n, x)));
        }
        n += 1;
    }
}

pub fn member_direct(k: &BigInt, pivots: &PivotSequence, m: &TmLevel) -> Result<bool> {
    Ok(uniform_violation(k, pivots, m)?.is_none())
}

/// Membership through the partial sums of the digit expansion of `k`.
pub fn member_partial_sums(k: &BigInt, pivots: &PivotSequence, m: &TmLevel) -> Result<bool> {
    if k.is_zero() {
        return Ok(true);
    }
    let coeffs = decompose(k, pivots)?;
    partial_sums_criterion(&coeffs, m)
}

/// `|Σ_{s<n} k_s b_s| <= b_n/(4m)` for every `n` below the termination bound.
pub fn partial_sums_criterion(coeffs: &PivotCoefficients, m: &TmLevel) -> Result<bool> {
    let k = coeffs.source();
    let pivots = coeffs.pivots();
    let bound = BigInt::from(4) * m.value() * k.abs();
    let four_m = BigInt::from(4) * m.value();
    let mut partial = BigInt::zero();
    let mut n = 1;
    loop {
        let b = pivots.term(n)?;
        if b >= bound {
            return Ok(true);
        }
        let k_prev = coeffs.digit(n - 1);
        if !k_prev.is_zero() {
            partial += k_prev * pivots.term(n - 1)?;
        }
        if &four_m * partial.abs() > b {
            return Ok(false);
        }
        n += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    /// `|k_n| b_n / b_{n+1} <= 1/(8m)` for all `n`; implies membership.
    Sufficient,
    /// `|k_n| b_n / b_{n+1} <= 3/(8m)` for all `n`; implied by membership.
    Necessary,
}

pub fn coeff_bound_test(coeffs: &PivotCoefficients, m: &TmLevel, mode: BoundMode) -> Result<bool> {
    let pivots = coeffs.pivots();
    let eight_m = BigInt::from(8) * m.value();
    let numer = match mode {
        BoundMode::Sufficient => BigInt::one(),
        BoundMode::Necessary => BigInt::from(3),
    };
    for (n, k) in coeffs.coeffs().iter().enumerate() {
        if k.is_zero() {
            continue;
        }
        // |k| b_n / b_{n+1} <= numer / (8m)
        let lhs = k.abs() * pivots.term(n)? * &eight_m;
        if lhs > &numer * pivots.term(n + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn member_linear(k: &BigInt, pivots: &PivotSequence, n: usize) -> Result<bool> {
    pivots.ensure_valid(n + 1)?;
    let b = pivots.term(n)?;
    Ok((k % b).is_zero())
}

/// All four uniform routes for one `k`, side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub direct: bool,
    pub partial_sums: bool,
    pub sufficient: bool,
    pub necessary: bool,
}

impl MembershipReport {
    /// `sufficient ⟹ member ⟹ necessary`, and the two exact routes agree.
    pub fn consistent(&self) -> bool {
        self.direct == self.partial_sums
            && (!self.sufficient || self.direct)
            && (!self.direct || self.necessary)
    }
}

pub fn membership_report(k: &BigInt, pivots: &PivotSequence, m: &TmLevel) -> Result<MembershipReport> {
    let coeffs = decompose(k, pivots)?;
    Ok(MembershipReport {
        direct: member_direct(k, pivots, m)?,
        partial_sums: partial_sums_criterion(&coeffs, m)?,
        sufficient: coeff_bound_test(&coeffs, m, BoundMode::Sufficient)?,
        necessary: coeff_bound_test(&coeffs, m, BoundMode::Necessary)?,
    })
}

/// Outcome of the constructive discreteness argument for
/// `S = {x_n + ℤ}` with `x_n / x_{n+1} <= m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscretenessWitness {
    /// `m`, the bound on consecutive ratios.
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub ratio_bound: BigInt,
    /// Least `l` with `4 l x_1 > 1`.
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub multiplier: BigInt,
    /// `L = l m`; the claim is `V_{S,L} = {0}`.
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub level: BigInt,
    /// `⌈1/(4 x_1)⌉`; `V_{S,m}` lies within `[-1/(4x_1), 1/(4x_1)]`.
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub window_bound: BigInt,
    pub brute_window: u64,
    /// Whether the supplied prefix alone decides membership on the window.
    pub prefix_covers_window: bool,
    /// `k` in the window that survive every supplied `x_n` at level `L`.
    pub survivors: Vec<i64>,
    pub verified: bool,
}

/// `x_n = base^{-n}` for `n = 1 ..= len`.
pub fn geometric_prefix(base: u64, len: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(len);
    let mut d = BigInt::one();
    for _ in 0..len {
        d *= base;
        out.push(Rational::new(BigInt::one(), d.clone()));
    }
    out
}

pub fn discreteness_witness(
    xs: &[Rational],
    ratio_bound: &BigInt,
    brute_window: u64,
) -> Result<DiscretenessWitness> {
    let Some(x1) = xs.first() else {
        return Err(Error::Precondition("empty sequence prefix".into()));
    };
    if *ratio_bound < BigInt::one() {
        return Err(Error::Precondition("ratio bound must be >= 1".into()));
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for (i, x) in xs.iter().enumerate() {
        if !x.is_positive() || *x > half {
            return Err(Error::Precondition(format!("x_{} = {x} is not in (0, 1/2]", i + 1)));
        }
    }
    let bound = Rational::from_integer(ratio_bound.clone());
    for (i, w) in xs.windows(2).enumerate() {
        if w[1] >= w[0] {
            return Err(Error::Precondition(format!("sequence not strictly decreasing at n = {}", i + 1)));
        }
        if &w[0] / &w[1] > bound {
            return Err(Error::Precondition(format!(
                "x_{}/x_{} = {} exceeds the ratio bound {ratio_bound}",
                i + 1,
                i + 2,
                &w[0] / &w[1]
            )));
        }
    }

    // least l with 4 l x_1 > 1
    let inv = (Rational::from_integer(BigInt::from(4)) * x1).recip();
    let multiplier: BigInt = inv.floor().to_integer() + 1;

    let level_value: BigInt = &multiplier * ratio_bound;
    let level = TmLevel::from_bigint(level_value.clone())?;
    let window_bound = inv.ceil().to_integer();

    let w = BigInt::from(brute_window);
    let last = xs.last().unwrap();
    let prefix_covers_window =
        Rational::from_integer(w.clone()) * last <= level.radius();

    let mut survivors = Vec::new();
    let window = i64::try_from(brute_window)
        .map_err(|_| Error::Precondition("brute-force window too large".into()))?;
    for k in -window..=window {
        let kb = BigInt::from(k);
        let inside = xs.iter().all(|x| {
            TorusPoint::from_fraction(&(&kb * x.numer()), x.denom()).in_tm(&level)
        });
        if inside {
            survivors.push(k);
        }
    }
    let verified = survivors == [0];
    Ok(DiscretenessWitness {
        ratio_bound: ratio_bound.clone(),
        multiplier,
        level: level_value,
        window_bound,
        brute_window,
        prefix_covers_window,
        survivors,
        verified,
    })
}

/// Members of `V_{S,m}` (as computed from the supplied prefix) in
/// `[-window, window]`. With a prefix that covers the window this is exact.
pub fn prefix_neighborhood(xs: &[Rational], m: &TmLevel, window: u64) -> Vec<i64> {
    let w = window.to_i64().unwrap_or(i64::MAX);
    (-w..=w)
        .filter(|&k| {
            let kb = BigInt::from(k);
            xs.iter().all(|x| TorusPoint::from_fraction(&(&kb * x.numer()), x.denom()).in_tm(m))
        })
        .collect()
}
