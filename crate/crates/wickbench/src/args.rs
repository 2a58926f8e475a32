//! Typed arguments for one evaluation of one check.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wick_core::{Chaos, Convolution, Exp, HolderParams, InequalityReport, Measure};

use crate::checks::{self, CheckKind, FunctionSpec, OracleSettings, Tolerances};
use crate::error::{BenchError, Result};

pub const DEFAULT_MC_COUNT: usize = 100_000;

fn dirac_zero(dim: usize) -> Measure {
    Measure::dirac(vec![0.0; dim])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FnArgs {
    pub f: FunctionSpec,
    /// Defaults to the Dirac mass at the origin, i.e. `rho = mu`.
    #[serde(default)]
    pub nu: Option<Measure>,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbArgs {
    pub hs: Vec<Vec<f64>>,
    #[serde(default)]
    pub nu: Option<Measure>,
    pub alpha: f64,
}

/// Missing `p, q` default to `2(1+α)`; a missing `r` is solved from the relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderArgs {
    pub f: FunctionSpec,
    pub g: FunctionSpec,
    pub alpha: f64,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub r: Option<f64>,
}

impl HolderArgs {
    pub fn params(&self) -> Result<HolderParams> {
        let sym = HolderParams::symmetric(self.alpha);
        let (p, q) = (self.p.unwrap_or(sym.p), self.q.unwrap_or(sym.q));
        Ok(match self.r {
            Some(r) => HolderParams::new(p, q, r, self.alpha),
            None => HolderParams::solve_r(p, q, self.alpha)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicArgs {
    pub f: Chaos,
    pub alpha: f64,
}

/// `phi` defaults to the constant 1; at least one of `nu`, `phi` fixes the dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongArgs {
    #[serde(default)]
    pub nu: Option<Measure>,
    #[serde(default)]
    pub phi: Option<Exp>,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairArgs {
    pub nu1: Measure,
    pub nu2: Measure,
    /// Only used by `covariance_gap`; defaults to the constant 1.
    #[serde(default)]
    pub phi: Option<Exp>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramArgs {
    pub nu: Measure,
    pub hs: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleArgs {
    pub f: Exp,
    #[serde(default)]
    pub nu: Option<Measure>,
    pub alpha: f64,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub mc_count: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckArgs {
    BecknerDeficit(FnArgs),
    LeftPositivity(FnArgs),
    AbMatrix(AbArgs),
    Holder(HolderArgs),
    ClassicBecknerCoeff(ClassicArgs),
    StrongPositivity(StrongArgs),
    CovarianceGap(PairArgs),
    CharGram(GramArgs),
    WickDensityIdentity(PairArgs),
    OracleTriangle(OracleArgs),
}

impl CheckArgs {
    pub fn parse(kind: CheckKind, params: Value) -> Result<Self> {
        let wrap = |e: serde_json::Error| BenchError::Config(format!("params for `{kind}`: {e}"));
        Ok(match kind {
            CheckKind::BecknerDeficit => CheckArgs::BecknerDeficit(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::LeftPositivity => CheckArgs::LeftPositivity(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::AbMatrix => CheckArgs::AbMatrix(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::Holder => CheckArgs::Holder(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::ClassicBecknerCoeff => {
                CheckArgs::ClassicBecknerCoeff(serde_json::from_value(params).map_err(wrap)?)
            }
            CheckKind::StrongPositivity => CheckArgs::StrongPositivity(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::CovarianceGap => CheckArgs::CovarianceGap(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::CharGram => CheckArgs::CharGram(serde_json::from_value(params).map_err(wrap)?),
            CheckKind::WickDensityIdentity => {
                CheckArgs::WickDensityIdentity(serde_json::from_value(params).map_err(wrap)?)
            }
            CheckKind::OracleTriangle => CheckArgs::OracleTriangle(serde_json::from_value(params).map_err(wrap)?),
        })
    }

    pub fn kind(&self) -> CheckKind {
        match self {
            CheckArgs::BecknerDeficit(_) => CheckKind::BecknerDeficit,
            CheckArgs::LeftPositivity(_) => CheckKind::LeftPositivity,
            CheckArgs::AbMatrix(_) => CheckKind::AbMatrix,
            CheckArgs::Holder(_) => CheckKind::Holder,
            CheckArgs::ClassicBecknerCoeff(_) => CheckKind::ClassicBecknerCoeff,
            CheckArgs::StrongPositivity(_) => CheckKind::StrongPositivity,
            CheckArgs::CovarianceGap(_) => CheckKind::CovarianceGap,
            CheckArgs::CharGram(_) => CheckKind::CharGram,
            CheckArgs::WickDensityIdentity(_) => CheckKind::WickDensityIdentity,
            CheckArgs::OracleTriangle(_) => CheckKind::OracleTriangle,
        }
    }

    pub fn run(&self, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
        let rho = |nu: &Option<Measure>, dim: usize| Convolution::new(nu.clone().unwrap_or_else(|| dirac_zero(dim)));
        Ok(match self {
            CheckArgs::BecknerDeficit(a) => {
                vec![checks::beckner_deficit(&a.f, &rho(&a.nu, a.f.dim()), a.alpha, tol)?]
            }
            CheckArgs::LeftPositivity(a) => {
                vec![checks::left_positivity(&a.f, &rho(&a.nu, a.f.dim()), a.alpha, tol)?]
            }
            CheckArgs::AbMatrix(a) => {
                let dim = a.hs.first().map_or(0, Vec::len);
                checks::ab_matrix(&a.hs, &rho(&a.nu, dim), a.alpha, tol)?
            }
            CheckArgs::Holder(a) => vec![checks::holder(&a.f, &a.g, a.params()?, tol)?],
            CheckArgs::ClassicBecknerCoeff(a) => vec![checks::classic_beckner_coeff(&a.f, a.alpha, tol)?],
            CheckArgs::StrongPositivity(a) => {
                let dim = match (&a.nu, &a.phi) {
                    (Some(nu), _) => nu.dim(),
                    (None, Some(phi)) => phi.dim(),
                    (None, None) => {
                        return Err(BenchError::Config("strong_positivity needs `nu` or `phi`".into()));
                    }
                };
                let phi = a.phi.clone().unwrap_or_else(|| Exp::constant(dim, 1.0));
                vec![checks::strong_positivity(&rho(&a.nu, dim), a.alpha, &phi, tol)?]
            }
            CheckArgs::CovarianceGap(a) => {
                let phi = a.phi.clone().unwrap_or_else(|| Exp::constant(a.nu1.dim(), 1.0));
                vec![checks::covariance_gap(&a.nu1, &a.nu2, &phi, tol)?]
            }
            CheckArgs::CharGram(a) => vec![checks::char_gram_check(&a.nu, &a.hs, tol)?],
            CheckArgs::WickDensityIdentity(a) => vec![checks::wick_density_identity(&a.nu1, &a.nu2)?],
            CheckArgs::OracleTriangle(a) => {
                let dim = a.f.dim();
                let order = match a.order {
                    Some(o) => o,
                    None => wick_core::quadrature::default_order(dim)
                        .ok_or_else(|| BenchError::Config(format!("oracle_triangle: no default order for n = {dim}")))?,
                };
                let settings = OracleSettings {
                    order,
                    mc_count: a.mc_count.unwrap_or(DEFAULT_MC_COUNT),
                    seed: a.seed.unwrap_or(0),
                };
                checks::oracle_triangle(&a.f, &rho(&a.nu, dim), a.alpha, settings, tol)?
            }
        })
    }
}
