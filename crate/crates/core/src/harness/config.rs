//! Layered key=value settings.
//!
//! The same keys are used by config files and CLI flags. A file holds one
//! `key = value` per line; `#` starts a comment. Values of grid keys may be
//! comma-separated lists, which `sweep` expands into a cartesian product.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::engine::{GaConfig, InitMode, StopRule};
use crate::error::{JumpGaError, Result};
use crate::rng::cell_seed;
use crate::selection::PairSelector;

use super::table::Metric;

pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "k",
    "mu",
    "pc",
    "selector",
    "seed",
    "budget",
    "replicates",
    "init",
    "stop",
    "trace-stride",
    "parallel",
    "metric",
    "trajectories",
    "verify",
];

/// Keys whose values may be lists in a sweep.
pub const GRID_KEYS: &[&str] = &["n", "k", "mu", "pc", "selector", "init"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut s = Self::new();
        for (k, v) in pairs {
            s.set(k, v)?;
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                JumpGaError::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            s.set(key.trim(), value.trim())
                .map_err(|e| JumpGaError::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(JumpGaError::Parse(format!("unknown setting {key:?}")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `self` with every key of `higher` overriding.
    pub fn overlay(&self, higher: &Settings) -> Settings {
        let mut values = self.values.clone();
        values.extend(higher.values.clone());
        Settings { values }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(raw) = self.get(key) else {
            return Ok(None);
        };
        raw.split(',')
            .map(|item| {
                item.trim().parse::<T>().map_err(|e| {
                    JumpGaError::Parse(format!("invalid value {item:?} for {key}: {e}"))
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn single<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.list::<T>(key)? {
            None => Ok(None),
            Some(mut v) if v.len() == 1 => Ok(v.pop()),
            Some(_) => Err(JumpGaError::Parse(format!(
                "{key} takes a single value here"
            ))),
        }
    }

    fn list_or<T: FromStr>(&self, key: &str, default: T) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.list(key)?.unwrap_or_else(|| vec![default]))
    }

    fn required_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.list(key)?
            .ok_or_else(|| JumpGaError::InvalidConfig(format!("missing required setting {key}")))
    }

    pub fn replicates(&self) -> Result<usize> {
        let r = self.single("replicates")?.unwrap_or(1);
        if r == 0 {
            return Err(JumpGaError::InvalidConfig(
                "replicates must be at least 1".into(),
            ));
        }
        Ok(r)
    }

    pub fn seed(&self) -> Result<u64> {
        Ok(self.single("seed")?.unwrap_or(0))
    }

    /// Worker count; `JUMPGA_THREADS` takes precedence when set.
    pub fn parallelism(&self) -> Result<usize> {
        if let Ok(env) = std::env::var("JUMPGA_THREADS") {
            return env
                .trim()
                .parse()
                .map_err(|_| JumpGaError::Parse(format!("invalid JUMPGA_THREADS value {env:?}")));
        }
        Ok(self.single("parallel")?.unwrap_or(1))
    }

    pub fn metric(&self) -> Result<Metric> {
        match self.get("metric").map(str::trim) {
            None | Some("optimum") => Ok(Metric::EvaluationsToOptimum),
            Some("plateau") => Ok(Metric::EvaluationsToAllPlateau),
            Some(other) => Err(JumpGaError::Parse(format!("unknown metric {other:?}"))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key).map(str::trim) {
            None | Some("false") | Some("no") | Some("0") => Ok(false),
            Some("true") | Some("yes") | Some("1") | Some("first") => Ok(true),
            Some(other) => Err(JumpGaError::Parse(format!(
                "invalid value {other:?} for {key}"
            ))),
        }
    }

    /// The cartesian product of the grid keys, in the nesting order
    /// n, k, mu, pc, selector, init. Cell `c` is seeded with
    /// `cell_seed(seed, c)`.
    pub fn grid(&self) -> Result<Vec<GaConfig>> {
        let ns: Vec<usize> = self.required_list("n")?;
        let ks: Vec<usize> = self.required_list("k")?;
        let mus = self.list_or("mu", GaConfig::DEFAULT_MU)?;
        let pcs = self.list_or("pc", GaConfig::DEFAULT_P_C)?;
        let selectors = self.list_or("selector", PairSelector::default())?;
        let inits = self.list_or("init", InitMode::default())?;
        let budget = self.single("budget")?.unwrap_or(GaConfig::DEFAULT_BUDGET);
        let stop: StopRule = self.single("stop")?.unwrap_or_default();
        let trace_stride = self.single("trace-stride")?.unwrap_or(0);
        let verify = self.flag("verify")?;
        let seed = self.seed()?;

        let mut grid = Vec::new();
        for &n in &ns {
            for &k in &ks {
                for &mu in &mus {
                    for &p_c in &pcs {
                        for &selector in &selectors {
                            for &init in &inits {
                                let cell = grid.len() as u64;
                                grid.push(
                                    GaConfig::builder(n, k)
                                        .mu(mu)
                                        .p_c(p_c)
                                        .pair_selector(selector)
                                        .init(init)
                                        .stop(stop)
                                        .max_evaluations(budget)
                                        .trace_stride(trace_stride)
                                        .verify(verify)
                                        .seed(cell_seed(seed, cell))
                                        .build()?,
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(grid)
    }

    /// A single configuration seeded with `seed` itself; every grid key must
    /// hold one value.
    pub fn config(&self) -> Result<GaConfig> {
        for key in GRID_KEYS {
            if self.get(key).is_some_and(|v| v.contains(',')) {
                return Err(JumpGaError::Parse(format!(
                    "{key} takes a single value here"
                )));
            }
        }
        let mut grid = self.grid()?;
        debug_assert_eq!(grid.len(), 1);
        Ok(grid.remove(0).with_seed(self.seed()?))
    }
}
