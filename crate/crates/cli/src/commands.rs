use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use qconvex::convergence::{blocks_and_sn, prefix_test, sn_sufficient_report, IntegerSequence};
use qconvex::neighborhoods::{geometric_prefix, membership_report};
use qconvex::rational::{format_rational, parse_rational};
use qconvex::{
    continuity_window_check, decompose, discreteness_witness, generated_member, kernel_check,
    member_linear, recompose_and_check, regressions, Character, Error, NeighborhoodSpec,
    PivotSequence, Rational, TmLevel,
};

use crate::config::{Command, Format, RunConfig};

pub enum Failure {
    /// Bad flags, config or parameters: exit 2.
    Usage(String),
    /// The computation itself failed: exit 2.
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDescriptor(_)
            | Error::InvalidSequence(_)
            | Error::Precondition(_)
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub results: Value,
    pub table: Option<Table>,
    /// Falsification or invariant violation found.
    pub flagged: bool,
}

type Run = Result<Outcome, Failure>;

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn done(results: Value, flagged: bool) -> Run {
    Ok(Outcome { results, table: None, flagged })
}

fn required<T: Clone>(x: &Option<T>, flag: &str) -> Result<T, Failure> {
    x.clone().ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn pivots(cfg: &RunConfig) -> Result<PivotSequence, Failure> {
    let text = required(&cfg.pivots, "pivots")?;
    let d = text.parse()?;
    Ok(match cfg.bit_budget {
        Some(b) => PivotSequence::with_bit_budget(d, b)?,
        None => PivotSequence::new(d)?,
    })
}

fn level(m: u64) -> Result<TmLevel, Failure> {
    Ok(TmLevel::new(m)?)
}

fn spec(cfg: &RunConfig, p: &PivotSequence) -> Result<NeighborhoodSpec, Failure> {
    Ok(match cfg.n {
        Some(n) => NeighborhoodSpec::linear(p.clone(), n),
        None => NeighborhoodSpec::uniform(p.clone(), level(required(&cfg.m, "m")?)?),
    })
}

pub fn run(cfg: &RunConfig) -> Run {
    let cmd = required(&cfg.command, "command")?;
    if cfg.format == Some(Format::Csv) && !matches!(cmd, Command::Blocks | Command::Sweep) {
        return Err(Failure::Usage(format!("csv output is only available for blocks and sweep, not {}", cmd.name())));
    }
    match cmd {
        Command::Decompose => run_decompose(cfg),
        Command::Member => run_member(cfg),
        Command::Converge => run_converge(cfg),
        Command::Blocks => run_blocks(cfg),
        Command::Discrete => run_discrete(cfg),
        Command::Dual => run_dual(cfg),
        Command::VerifyPaper => run_verify(),
        Command::Sweep => run_sweep(cfg),
    }
}

fn run_decompose(cfg: &RunConfig) -> Run {
    let p = pivots(cfg)?;
    let l = required(&cfg.l, "l")?.0;
    let c = decompose(&l, &p)?;
    let check = recompose_and_check(&c)?;
    let coeffs: Vec<String> = c.coeffs().iter().map(BigInt::to_string).collect();
    done(
        json!({
            "coefficients": c.to_text(),
            "digits": coeffs,
            "top_index": c.top_index(),
            "checks": check,
        }),
        !check.all_ok(),
    )
}

fn run_member(cfg: &RunConfig) -> Run {
    let p = pivots(cfg)?;
    let k = required(&cfg.k, "k")?.0;
    let r = membership_report(&k, &p, &level(required(&cfg.m, "m")?)?)?;
    let mut results = to_value(&r);
    results["consistent"] = json!(r.consistent());
    if let Some(n) = cfg.n {
        results["linear"] = json!(member_linear(&k, &p, n)?);
    }
    done(results, !r.consistent())
}

fn sequence(cfg: &RunConfig, p: &PivotSequence) -> Result<IntegerSequence, Failure> {
    let family = required(&cfg.sequence, "seq")?.parse()?;
    Ok(IntegerSequence::new(family, Some(p.clone()))?)
}

fn run_converge(cfg: &RunConfig) -> Run {
    let p = pivots(cfg)?;
    let s = sequence(cfg, &p)?;
    let v = prefix_test(&s, &spec(cfg, &p)?, required(&cfg.horizon, "horizon")?)?;
    done(to_value(&v), v.is_falsified())
}

fn run_blocks(cfg: &RunConfig) -> Run {
    let p = pivots(cfg)?;
    let s = sequence(cfg, &p)?;
    let horizon = required(&cfg.horizon, "horizon")?;
    let max_n = required(&cfg.max_n, "max-n")?;
    let (blocks, results) = match cfg.m {
        Some(m) => {
            let r = sn_sufficient_report(&s, &p, horizon, max_n, &[level(m)?])?;
            (r.blocks.clone(), to_value(&r))
        }
        None => {
            let r = blocks_and_sn(&s, &p, horizon, max_n)?;
            (r.clone(), to_value(&r))
        }
    };
    let rows = blocks
        .blocks
        .iter()
        .map(|b| {
            vec![
                b.n.to_string(),
                b.first.to_string(),
                b.last.to_string(),
                format_rational(&b.s_n),
            ]
        })
        .collect();
    Ok(Outcome {
        results,
        table: Some(Table { header: vec!["n", "first", "last", "s_n"], rows }),
        flagged: false,
    })
}

fn run_discrete(cfg: &RunConfig) -> Run {
    let xs: Vec<Rational> = match (&cfg.x, cfg.base) {
        (Some(text), _) => text.split(',').map(parse_rational).collect::<Result<_, _>>()?,
        (None, Some(base)) => {
            if base < 2 {
                return Err(Failure::Usage("--base must be >= 2".into()));
            }
            geometric_prefix(base, required(&cfg.count, "count")?)
        }
        (None, None) => return Err(Failure::Usage("--x or --base is required".into())),
    };
    let ratio = match &cfg.ratio {
        Some(r) => r.0.clone(),
        None => xs
            .windows(2)
            .map(|w| (&w[0] / &w[1]).ceil().to_integer())
            .max()
            .unwrap_or_else(|| BigInt::from(1)),
    };
    let w = discreteness_witness(&xs, &ratio, required(&cfg.window, "window")?)?;
    let flagged = !w.verified;
    done(to_value(&w), flagged)
}

fn run_dual(cfg: &RunConfig) -> Run {
    let p = pivots(cfg)?;
    let chi: Character = required(&cfg.chi, "chi")?.parse()?;
    let window = required(&cfg.window, "window")?;
    let kernel = kernel_check(&chi, &p)?;
    let generated = match generated_member(&chi.value, &p) {
        Ok(b) => Some(b),
        Err(Error::Inconclusive(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut flagged = false;
    let mut results = json!({
        "character": chi.value.to_string(),
        "kernel": kernel,
        "generated_member": generated,
    });
    if let Some(n) = kernel.witness_index.filter(|_| kernel.continuous_for_linear) {
        let w = continuity_window_check(&chi, &NeighborhoodSpec::linear(p.clone(), n), window)?;
        flagged |= !w.passed;
        results["kernel_window"] = to_value(&w);
    }
    if cfg.m.is_some() || cfg.n.is_some() {
        let s = spec(cfg, &p)?;
        results["window"] = to_value(continuity_window_check(&chi, &s, window)?);
        results["neighborhood"] = to_value(&s);
    }
    done(results, flagged)
}

fn run_verify() -> Run {
    let rs = regressions::run_all();
    let failed = rs.iter().filter(|r| !r.passed).count();
    done(json!({ "passed": rs.len() - failed, "failed": failed, "checks": rs }), failed > 0)
}

fn run_sweep(cfg: &RunConfig) -> Run {
    let p = pivots(cfg)?;
    let m = level(required(&cfg.m, "m")?)?;
    let count = required(&cfg.count, "count")?;
    let window = i64::try_from(required(&cfg.window, "window")?)
        .map_err(|_| Failure::Usage("--window too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(required(&cfg.seed, "seed")?);
    let mut rows = Vec::with_capacity(count);
    let mut inconsistent = Vec::new();
    for _ in 0..count {
        let k = rng.random_range(-window..=window);
        let r = membership_report(&BigInt::from(k), &p, &m)?;
        if !r.consistent() {
            inconsistent.push(k);
        }
        rows.push(vec![
            k.to_string(),
            r.direct.to_string(),
            r.partial_sums.to_string(),
            r.sufficient.to_string(),
            r.necessary.to_string(),
            r.consistent().to_string(),
        ]);
    }
    let members = rows.iter().filter(|r| r[1] == "true").count();
    Ok(Outcome {
        results: json!({ "samples": count, "members": members, "inconsistent": inconsistent }),
        table: Some(Table {
            header: vec!["k", "direct", "partial_sums", "sufficient", "necessary", "consistent"],
            rows,
        }),
        flagged: !inconsistent.is_empty(),
    })
}
