use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Pivot digits of an integer, with bound checks
    Decompose,
    /// All membership routes for k in V_(S,m) side by side
    Member,
    /// Prefix convergence verdict for a sequence
    Converge,
    /// j_n / M_n / S_n table
    Blocks,
    /// Discreteness witness for a sequence x_n in (0, 1/2]
    Discrete,
    /// Character checks
    Dual,
    /// Run the catalogue of known results
    VerifyPaper,
    /// Seeded random sweep of the membership routes
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Member => "member",
            Command::Converge => "converge",
            Command::Blocks => "blocks",
            Command::Discrete => "discrete",
            Command::Dual => "dual",
            Command::VerifyPaper => "verify-paper",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Integer parameter: a TOML/JSON integer or a decimal string, echoed as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl FromStr for Int {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.trim().parse().map(Int).map_err(|_| format!("not an integer: {s:?}"))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Int(BigInt::from(n))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One invocation. Fields left unset fall back to the config file, then to
/// per-command defaults.
#[derive(Args, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// Pivot descriptor: linear, square, factorial, pow2, poly:c1,..,
    /// chain:2,3,2 or chain:2,3,... (cyclic), terms:1,2,6
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivots: Option<String>,

    /// Sequence family: pow2, geomdiff, wgeomdiff, blockexample, pivothalf,
    /// pivotsucc, zero or custom:c,p,kind,shift;...
    #[arg(long = "seq")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<String>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Int>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<Int>,

    /// Level of T_m (>= 1)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,

    /// Pivot index for the linear neighbourhood b_n Z
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,

    /// Character value p/q
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,

    /// Explicit prefix x_1,x_2,... for `discrete`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,

    /// Use x_n = base^-n for `discrete`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,

    /// Prefix length for `discrete`, sample count for `sweep`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,

    /// Bound on x_n / x_(n+1) for `discrete`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Int>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Per-term bit budget for pivot and sequence terms
    #[arg(long, env = "QCONVEX_BIT_BUDGET")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bit_budget: Option<u64>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        overlay!(
            self, top, command, pivots, sequence, k, l, m, n, horizon, window, max_n, chi, x, base,
            count, ratio, seed, bit_budget, output, format
        )
    }

    /// Fills the defaults the command uses, so the echo shows the values
    /// actually run.
    pub fn with_defaults(mut self) -> RunConfig {
        let Some(cmd) = self.command else { return self };
        let uses_pivots = !matches!(cmd, Command::VerifyPaper | Command::Discrete);
        if uses_pivots && self.pivots.is_none() {
            self.pivots = Some("square".into());
        }
        match cmd {
            Command::Member | Command::Sweep => {
                self.m.get_or_insert(1);
            }
            Command::Converge if self.n.is_none() => {
                self.m.get_or_insert(1);
            }
            _ => {}
        }
        match cmd {
            Command::Converge => {
                self.horizon.get_or_insert(50);
            }
            Command::Blocks => {
                self.horizon.get_or_insert(50);
                self.max_n.get_or_insert(10);
            }
            Command::Discrete => {
                if self.x.is_none() {
                    self.base.get_or_insert(2);
                    self.count.get_or_insert(12);
                }
                self.window.get_or_insert(100);
            }
            Command::Dual => {
                self.window.get_or_insert(1000);
            }
            Command::Sweep => {
                self.seed.get_or_insert(42);
                self.count.get_or_insert(1000);
                self.window.get_or_insert(10_000);
            }
            _ => {}
        }
        self.format.get_or_insert(Format::Json);
        self
    }
}
