//! Suite configuration, validated in full before any computation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wick_core::Measure;

use crate::args::{CheckArgs, DEFAULT_MC_COUNT};
use crate::checks::{CheckKind, FunctionSpec, Tolerances};
use crate::error::{BenchError, Result};

/// One explicitly parameterized evaluation, as accepted by `wickbench check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub check: CheckKind,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub seed: u64,
    pub dim: usize,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// `nu` specs; the Dirac mass at the origin when empty.
    #[serde(default)]
    pub measures: Vec<Measure>,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    /// Direction lists for `ab_matrix` and `char_gram`; collected from the
    /// exponential functions when empty.
    #[serde(default)]
    pub directions: Vec<Vec<f64>>,
    /// Checks evaluated over the (α × ν × f) grid and the random sweeps.
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub cases: Vec<Case>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub quadrature_order: Option<usize>,
    #[serde(default = "default_mc_count")]
    pub mc_count: usize,
    /// Seeded random instances per configured check.
    #[serde(default)]
    pub random_sweeps: usize,
    /// Extra `(p, q)` pairs for `holder`; `r` is solved per α.
    #[serde(default)]
    pub holder_exponents: Vec<[f64; 2]>,
    /// Swap both sides of every row (exercises the failure path).
    #[serde(default)]
    pub negate: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_alphas() -> Vec<f64> {
    crate::random::alpha_grid()
}

fn default_mc_count() -> usize {
    DEFAULT_MC_COUNT
}

fn invalid(msg: impl Into<String>) -> BenchError {
    BenchError::Config(msg.into())
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            return Err(invalid("dim must be at least 1"));
        }
        for &a in &self.alphas {
            if !(0.0..=1.0).contains(&a) {
                return Err(invalid(format!("alpha {a} outside [0, 1]")));
            }
        }
        for (i, nu) in self.measures.iter().enumerate() {
            if nu.dim() != n {
                return Err(invalid(format!("measures[{i}] has dim {}, expected {n}", nu.dim())));
            }
        }
        for (i, f) in self.functions.iter().enumerate() {
            if f.dim() != n {
                return Err(invalid(format!("functions[{i}] has dim {}, expected {n}", f.dim())));
            }
        }
        for (i, h) in self.directions.iter().enumerate() {
            if h.len() != n {
                return Err(invalid(format!("directions[{i}] has length {}, expected {n}", h.len())));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("exact", t.exact),
            ("quadrature", t.quadrature),
            ("psd", t.psd),
            ("coefficient", t.coefficient),
            ("mc_se", t.mc_se),
        ] {
            if !(v >= 0.0) {
                return Err(invalid(format!("tolerance `{name}` must be nonnegative")));
            }
        }
        if self.quadrature_order == Some(0) {
            return Err(invalid("quadrature_order must be at least 1"));
        }
        if self.mc_count < 2 && self.checks.contains(&CheckKind::OracleTriangle) {
            return Err(invalid("mc_count must be at least 2"));
        }
        for pq in &self.holder_exponents {
            if !(pq[0] > 1.0 && pq[1] > 1.0) {
                return Err(invalid(format!("holder exponents {pq:?} must exceed 1")));
            }
        }
        self.parsed_cases()?;
        Ok(())
    }

    pub fn parsed_cases(&self) -> Result<Vec<CheckArgs>> {
        self.cases
            .iter()
            .map(|c| CheckArgs::parse(c.check, c.params.clone()))
            .collect()
    }
}
