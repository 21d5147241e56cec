//! Command-line flags and the validated suite configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use crossnorm::{CrossnormTag, Exponent};
use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Sandwich,
    UniformIdentity,
    Theorem41,
    Corollary44,
    RemarkChain,
    Gamma,
    Prop32,
    Question4,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Sandwich,
        Suite::UniformIdentity,
        Suite::Theorem41,
        Suite::Corollary44,
        Suite::RemarkChain,
        Suite::Gamma,
        Suite::Prop32,
        Suite::Question4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sandwich => "sandwich",
            Suite::UniformIdentity => "uniform-identity",
            Suite::Theorem41 => "theorem41",
            Suite::Corollary44 => "corollary44",
            Suite::RemarkChain => "remark-chain",
            Suite::Gamma => "gamma",
            Suite::Prop32 => "prop32",
            Suite::Question4 => "question4",
            Suite::All => "all",
        }
    }

    /// The suites to run, in report order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }

    /// Whether instances are operator tensors (four spaces) rather than
    /// plain tensors (two spaces).
    pub fn is_operator(self) -> bool {
        !matches!(self, Suite::Sandwich | Suite::Gamma)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `n×m` for a tensor, `nX×nY×nV×nW` for an operator tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Dims {
    Pair(usize, usize),
    Quad([usize; 4]),
}

impl Dims {
    /// `(nX, nY)`.
    pub fn pair(self) -> (usize, usize) {
        match self {
            Dims::Pair(n, m) => (n, m),
            Dims::Quad(d) => (d[0], d[1]),
        }
    }

    /// `[nX, nY, nV, nW]`; a pair is read as square operators.
    pub fn quad(self) -> [usize; 4] {
        match self {
            Dims::Pair(n, m) => [n, m, n, m],
            Dims::Quad(d) => d,
        }
    }

    fn all(self) -> Vec<usize> {
        self.quad().to_vec()
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dims::Pair(n, m) => write!(f, "{n}x{m}"),
            Dims::Quad([a, b, c, d]) => write!(f, "{a}x{b}x{c}x{d}"),
        }
    }
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts = s
            .trim()
            .split('x')
            .map(|d| {
                d.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad dimension in {s:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match parts[..] {
            [n, m] => Ok(Dims::Pair(n, m)),
            [a, b, c, d] => Ok(Dims::Quad([a, b, c, d])),
            _ => Err(format!("dims must look like 2x3 or 2x2x3x3, got {s:?}")),
        }
    }
}

impl TryFrom<String> for Dims {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Dims> for String {
    fn from(d: Dims) -> String {
        d.to_string()
    }
}

/// A crossnorm choice; bare `entrywise` follows the exponent of the trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TagChoice {
    Fixed(CrossnormTag),
    EntrywiseMatchingP,
}

impl TagChoice {
    pub fn resolve(self, p: Exponent) -> CrossnormTag {
        match self {
            TagChoice::Fixed(t) => t,
            TagChoice::EntrywiseMatchingP => CrossnormTag::EntrywiseP(p),
        }
    }
}

impl fmt::Display for TagChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagChoice::Fixed(t) => write!(f, "{t}"),
            TagChoice::EntrywiseMatchingP => f.write_str("entrywise"),
        }
    }
}

impl FromStr for TagChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "entrywise" {
            return Ok(TagChoice::EntrywiseMatchingP);
        }
        s.parse::<CrossnormTag>()
            .map(TagChoice::Fixed)
            .map_err(|e| e.to_string())
    }
}

impl TryFrom<String> for TagChoice {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<TagChoice> for String {
    fn from(t: TagChoice) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Seeded verification suites for crossnorm inequalities.
#[derive(Debug, Parser)]
#[command(name = "crossnorm", version)]
pub struct Args {
    /// Suite to run.
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Comma-separated dimension tuples, e.g. `2x3` or `2x2x3x3`.
    #[arg(long)]
    pub dims: Option<String>,
    /// Comma-separated exponents; `inf` allowed.
    #[arg(long)]
    pub p: Option<String>,
    /// Comma-separated crossnorm tags.
    #[arg(long)]
    pub tags: Option<String>,
    /// Trials per suite.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// Absolute tolerance of every comparison.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// `None` selects per-suite defaults.
    pub dims: Option<Vec<Dims>>,
    pub p_values: Option<Vec<Exponent>>,
    pub tags: Option<Vec<TagChoice>>,
    pub trials: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    let items = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<T>().map_err(|e| format!("--{what}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(format!("--{what} is empty"));
    }
    Ok(items)
}

impl SuiteConfig {
    pub fn from_args(a: Args) -> Result<Self, String> {
        let cfg = SuiteConfig {
            suite: a.suite,
            dims: a
                .dims
                .as_deref()
                .map(|s| parse_list(s, "dims"))
                .transpose()?,
            p_values: a.p.as_deref().map(|s| parse_list(s, "p")).transpose()?,
            tags: a
                .tags
                .as_deref()
                .map(|s| parse_list(s, "tags"))
                .transpose()?,
            trials: a.trials,
            seed: a.seed,
            restarts: a.restarts,
            max_iters: a.max_iters,
            tol: a.tol,
            out: a.out,
            format: a.format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.trials < 1 {
            return Err("--trials must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err("--tol must be positive".into());
        }
        for d in self.dims.iter().flatten() {
            if d.all().iter().any(|&n| n == 0 || n > MAX_DIM) {
                return Err(format!("dimension out of range 1..={MAX_DIM} in {d}"));
            }
        }
        for suite in self.suite.expand() {
            let plan = self.plan(suite);
            for p in &plan.p_values {
                for t in &plan.tags {
                    let tag = t.resolve(*p);
                    let sp = crossnorm::LpSpace::new(1, *p).map_err(|e| e.to_string())?;
                    tag.check_attachable(&sp, &sp)
                        .map_err(|e| format!("suite {suite}: {e}"))?;
                }
            }
        }
        Ok(())
    }

    /// Grids for one suite with defaults filled in.
    pub fn plan(&self, suite: Suite) -> Plan {
        let two = Exponent::TWO;
        let default_dims: Vec<Dims> = match suite {
            Suite::Sandwich => vec![
                Dims::Pair(2, 2),
                Dims::Pair(2, 3),
                Dims::Pair(3, 3),
                Dims::Pair(3, 4),
                Dims::Pair(4, 4),
            ],
            Suite::Gamma => vec![Dims::Pair(2, 2), Dims::Pair(3, 3)],
            Suite::UniformIdentity => vec![
                Dims::Quad([2, 2, 2, 2]),
                Dims::Quad([2, 3, 3, 2]),
                Dims::Quad([3, 3, 3, 3]),
                Dims::Quad([4, 3, 2, 4]),
                Dims::Quad([4, 4, 4, 4]),
            ],
            _ => vec![
                Dims::Quad([2, 2, 2, 2]),
                Dims::Quad([2, 3, 3, 2]),
                Dims::Quad([3, 3, 3, 3]),
            ],
        };
        let default_p = match suite {
            Suite::Sandwich => vec![
                Exponent::ONE,
                Exponent::Finite(1.5),
                two,
                Exponent::Finite(3.0),
                Exponent::INF,
            ],
            _ => vec![two],
        };
        let default_tags = match suite {
            Suite::Sandwich => vec![TagChoice::EntrywiseMatchingP],
            _ => vec![TagChoice::Fixed(CrossnormTag::Hilbertian)],
        };
        Plan {
            suite,
            dims: self.dims.clone().unwrap_or(default_dims),
            p_values: self.p_values.clone().unwrap_or(default_p),
            tags: self.tags.clone().unwrap_or(default_tags),
        }
    }
}

/// The resolved grid of one suite; trial `t` uses combination `t mod len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub suite: Suite,
    pub dims: Vec<Dims>,
    pub p_values: Vec<Exponent>,
    pub tags: Vec<TagChoice>,
}

impl Plan {
    pub fn combination(&self, trial: usize) -> (Dims, Exponent, CrossnormTag) {
        let (nd, np, nt) = (self.dims.len(), self.p_values.len(), self.tags.len());
        let i = trial % (nd * np * nt);
        let p = self.p_values[i % np];
        let tag = self.tags[(i / np) % nt].resolve(p);
        (self.dims[i / (np * nt)], p, tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(argv: &[&str]) -> Result<SuiteConfig, String> {
        let a = Args::try_parse_from(std::iter::once("crossnorm").chain(argv.iter().copied()))
            .map_err(|e| e.to_string())?;
        SuiteConfig::from_args(a)
    }

    #[test]
    fn defaults_and_lists() {
        let c = parse(&["--suite", "all", "--seed", "42"]).unwrap();
        assert_eq!(
            (c.suite, c.seed, c.trials, c.restarts, c.max_iters),
            (Suite::All, 42, 10, 32, 200)
        );
        assert_eq!(c.tol, 1e-6);
        let c = parse(&["--suite", "sandwich", "--p", "1,2,inf"]).unwrap();
        assert_eq!(
            c.p_values.unwrap(),
            vec![Exponent::ONE, Exponent::TWO, Exponent::INF]
        );
        let c = parse(&["--suite", "sandwich", "--dims", "2x3"]).unwrap();
        assert_eq!(c.dims.unwrap(), vec![Dims::Pair(2, 3)]);
        let c = parse(&["--suite", "theorem41", "--dims", "2x2x3x3,2x2"]).unwrap();
        assert_eq!(c.dims.unwrap()[0].quad(), [2, 2, 3, 3]);
        let c = parse(&[
            "--suite",
            "sandwich",
            "--tags",
            "entrywise,projective",
            "--p",
            "3",
        ])
        .unwrap();
        assert_eq!(
            c.plan(Suite::Sandwich).combination(0).2,
            CrossnormTag::EntrywiseP(Exponent::Finite(3.0))
        );
    }

    #[test]
    fn usage_errors() {
        assert!(parse(&["--suite", "sandwich", "--trials", "0"]).is_err());
        assert!(parse(&["--suite", "sandwich", "--bogus"]).is_err());
        assert!(parse(&["--seed", "1"]).is_err());
        assert!(parse(&["--suite", "sandwich", "--dims", "7x2"]).is_err());
        assert!(parse(&["--suite", "sandwich", "--dims", "2x2x2"]).is_err());
        assert!(parse(&["--suite", "sandwich", "--tol", "0"]).is_err());
        assert!(parse(&["--suite", "sandwich", "--p", "0.5"]).is_err());
        assert!(parse(&["--suite", "gamma", "--p", "3", "--tags", "hilbertian"]).is_err());
    }

    #[test]
    fn combinations_cycle_through_the_grid() {
        let c = parse(&["--suite", "sandwich", "--dims", "2x2,3x3", "--p", "1,2"]).unwrap();
        let plan = c.plan(Suite::Sandwich);
        let seen: Vec<_> = (0..4).map(|t| plan.combination(t)).collect();
        assert_eq!(seen[0].0, Dims::Pair(2, 2));
        assert_eq!(seen[1].1, Exponent::TWO);
        assert_eq!(seen[2].0, Dims::Pair(3, 3));
        assert_eq!(plan.combination(4), seen[0]);
    }
}
