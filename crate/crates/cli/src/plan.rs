//! Declarative benchmark plans.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use hermeig::{Config, EigenSelection, Method};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest size accepted without an explicit opt-in.
pub const LARGE_N: usize = 4096;
pub const PAPER_N: usize = 8000;

/// Eigenpair selection as written in plans and on the command line:
/// `all`, `fraction:F` or `range:IL:IU` (1-based, inclusive).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selection {
    All,
    Fraction(f64),
    Range(usize, usize),
}

impl Selection {
    pub fn to_eigen(self) -> EigenSelection {
        match self {
            Selection::All => EigenSelection::all(),
            Selection::Fraction(f) => EigenSelection::fraction(f),
            Selection::Range(il, iu) => EigenSelection::range(il, iu),
        }
    }

    pub fn mode(self) -> &'static str {
        match self {
            Selection::All => "all",
            Selection::Fraction(_) => "fraction",
            Selection::Range(..) => "range",
        }
    }

    /// Share of the spectrum requested at dimension `n`.
    pub fn fraction_of(self, n: usize) -> f64 {
        match self {
            Selection::All => 1.0,
            Selection::Fraction(f) => f,
            Selection::Range(il, iu) => (iu + 1 - il) as f64 / n as f64,
        }
    }

    /// File-name friendly label.
    pub fn slug(self) -> String {
        self.to_string().replace(':', "-")
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::All => write!(f, "all"),
            Selection::Fraction(x) => write!(f, "fraction:{x}"),
            Selection::Range(il, iu) => write!(f, "range:{il}:{iu}"),
        }
    }
}

impl FromStr for Selection {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["all"] => Ok(Selection::All),
            ["fraction", f] => {
                let f: f64 = f.parse().with_context(|| format!("bad fraction in `{s}`"))?;
                if !(f > 0.0 && f <= 1.0) {
                    bail!("fraction {f} not in (0, 1]");
                }
                Ok(Selection::Fraction(f))
            }
            ["range", il, iu] => {
                let il: usize = il.parse().with_context(|| format!("bad range in `{s}`"))?;
                let iu: usize = iu.parse().with_context(|| format!("bad range in `{s}`"))?;
                if il == 0 || il > iu {
                    bail!("range {il}:{iu} must satisfy 1 <= il <= iu");
                }
                Ok(Selection::Range(il, iu))
            }
            _ => Err(anyhow!("unknown selection `{s}`; expected all, fraction:F or range:IL:IU")),
        }
    }
}

impl Serialize for Selection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Selection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sizes {
    One(usize),
    Many(Vec<usize>),
}

impl Sizes {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            Sizes::One(n) => vec![*n],
            Sizes::Many(v) => v.clone(),
        }
    }
}

fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}

fn default_selections() -> Vec<Selection> {
    vec![Selection::All]
}

fn default_repeats() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub n: Sizes,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_selections")]
    pub selections: Vec<Selection>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// Overrides the suite seed for this case.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_cond_b() -> f64 {
    100.0
}

fn default_oracle_max_n() -> usize {
    64
}

fn default_oracle_tolerance() -> f64 {
    1e-12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    /// Target condition number of the generated `B`.
    #[serde(default = "default_cond_b")]
    pub cond_b: f64,
    /// Eigenvalues are also checked against the Jacobi oracle up to this size.
    #[serde(default = "default_oracle_max_n")]
    pub oracle_max_n: usize,
    /// Oracle agreement bound, relative to the largest eigenvalue magnitude.
    #[serde(default = "default_oracle_tolerance")]
    pub oracle_tolerance: f64,
    #[serde(default)]
    pub config: Config,
    #[serde(default, rename = "case")]
    pub cases: Vec<Case>,
}

impl Default for Plan {
    fn default() -> Self {
        Self {
            cond_b: default_cond_b(),
            oracle_max_n: default_oracle_max_n(),
            oracle_tolerance: default_oracle_tolerance(),
            config: Config::default(),
            cases: Vec::new(),
        }
    }
}

/// One solve to perform.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub n: usize,
    pub method: Method,
    pub sel: Selection,
    pub seed: u64,
    pub repeat: usize,
}

impl Plan {
    pub fn from_toml(src: &str) -> Result<Self> {
        let plan: Plan = toml::from_str(src).context("invalid plan file")?;
        plan.check(usize::MAX)?;
        Ok(plan)
    }

    /// Sizes in {512, 1024, 2048}, both methods, full and 10% eigenspace;
    /// `large` adds n = 8000.
    pub fn default_plan(large: bool) -> Self {
        let mut sizes = vec![512, 1024, 2048];
        if large {
            sizes.push(PAPER_N);
        }
        Plan {
            cases: vec![Case {
                n: Sizes::Many(sizes),
                methods: default_methods(),
                selections: vec![Selection::All, Selection::Fraction(0.1)],
                repeats: 3,
                seed: None,
            }],
            ..Plan::default()
        }
    }

    /// Validates the plan; sizes above `max_n` are rejected.
    pub fn check(&self, max_n: usize) -> Result<()> {
        if !(self.cond_b >= 1.0 && self.cond_b.is_finite()) {
            bail!("cond_b must be finite and >= 1");
        }
        for (i, case) in self.cases.iter().enumerate() {
            let sizes = case.n.to_vec();
            if sizes.is_empty() || case.methods.is_empty() || case.selections.is_empty() {
                bail!("case {i}: sizes, methods and selections must be non-empty");
            }
            if case.repeats == 0 {
                bail!("case {i}: repeats must be at least 1");
            }
            for &n in &sizes {
                if n == 0 {
                    bail!("case {i}: n must be at least 1");
                }
                if n > max_n {
                    bail!("case {i}: n = {n} exceeds {max_n}; pass --large to run it");
                }
                for sel in &case.selections {
                    sel.to_eigen().resolve(n).map_err(|e| anyhow!("case {i}, n = {n}: {e}"))?;
                }
            }
        }
        Ok(())
    }

    /// All runs in plan order: case, size, method, selection, repeat.
    pub fn expand(&self, seed: u64) -> Vec<RunSpec> {
        let mut out = Vec::new();
        for case in &self.cases {
            for n in case.n.to_vec() {
                for &method in &case.methods {
                    for &sel in &case.selections {
                        for repeat in 0..case.repeats {
                            out.push(RunSpec {
                                n,
                                method,
                                sel,
                                seed: case.seed.unwrap_or(seed),
                                repeat,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}
