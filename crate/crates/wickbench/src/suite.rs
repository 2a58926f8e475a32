//! Expansion of a [`SuiteConfig`] into tasks, parallel evaluation and report output.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;
use wick_core::{Exp, HolderParams, InequalityReport, Measure};

use crate::args::{AbArgs, CheckArgs, ClassicArgs, FnArgs, GramArgs, HolderArgs, OracleArgs, PairArgs, StrongArgs};
use crate::checks::{CheckKind, FunctionSpec, Tolerances};
use crate::config::SuiteConfig;
use crate::error::{BenchError, Result};
use crate::random::{self, RADIUS};

/// Directions used by the matrix checks: configured, else the exponents of
/// the exponential functions plus the origin.
fn directions(cfg: &SuiteConfig) -> Vec<Vec<f64>> {
    if !cfg.directions.is_empty() {
        return cfg.directions.clone();
    }
    let mut hs = vec![vec![0.0; cfg.dim]];
    for f in &cfg.functions {
        if let FunctionSpec::Exp(e) = f {
            for t in e.terms() {
                if !hs.contains(&t.h) {
                    hs.push(t.h.clone());
                }
            }
        }
    }
    hs
}

fn positive_tests(cfg: &SuiteConfig) -> Vec<Exp> {
    let mut out = vec![Exp::constant(cfg.dim, 1.0)];
    out.extend(cfg.functions.iter().filter_map(|f| match f {
        FunctionSpec::Exp(e) if e.has_positive_weights() => Some(e.clone()),
        _ => None,
    }));
    out
}

fn pairs<T>(items: &[T]) -> impl Iterator<Item = (&T, &T)> {
    items
        .iter()
        .enumerate()
        .flat_map(move |(i, a)| items[i..].iter().map(move |b| (a, b)))
}

fn same_representation(f: &FunctionSpec, g: &FunctionSpec) -> bool {
    matches!(
        (f, g),
        (FunctionSpec::Exp(_), FunctionSpec::Exp(_)) | (FunctionSpec::Chaos(_), FunctionSpec::Chaos(_))
    )
}

/// Tasks from the configured (α × ν × f) grid.
pub fn grid_tasks(cfg: &SuiteConfig, kind: CheckKind) -> Vec<CheckArgs> {
    let measures: Vec<Measure> = if cfg.measures.is_empty() {
        vec![Measure::dirac(vec![0.0; cfg.dim])]
    } else {
        cfg.measures.clone()
    };
    let mut out = Vec::new();
    match kind {
        CheckKind::BecknerDeficit | CheckKind::LeftPositivity => {
            for &alpha in &cfg.alphas {
                for nu in &measures {
                    for f in &cfg.functions {
                        let a = FnArgs {
                            f: f.clone(),
                            nu: Some(nu.clone()),
                            alpha,
                        };
                        out.push(if kind == CheckKind::BecknerDeficit {
                            CheckArgs::BecknerDeficit(a)
                        } else {
                            CheckArgs::LeftPositivity(a)
                        });
                    }
                }
            }
        }
        CheckKind::AbMatrix => {
            let hs = directions(cfg);
            for &alpha in &cfg.alphas {
                for nu in &measures {
                    out.push(CheckArgs::AbMatrix(AbArgs {
                        hs: hs.clone(),
                        nu: Some(nu.clone()),
                        alpha,
                    }));
                }
            }
        }
        CheckKind::Holder => {
            for &alpha in &cfg.alphas {
                let mut exps = vec![HolderParams::symmetric(alpha)];
                for &[p, q] in &cfg.holder_exponents {
                    match HolderParams::solve_r(p, q, alpha) {
                        Ok(hp) if hp.relation_check().is_ok_and(|r| r.admissible) => exps.push(hp),
                        _ => warn!("holder: (p, q) = ({p}, {q}) inadmissible at alpha = {alpha}; skipped"),
                    }
                }
                for (f, g) in pairs(&cfg.functions).filter(|(f, g)| same_representation(f, g)) {
                    for hp in &exps {
                        out.push(CheckArgs::Holder(HolderArgs {
                            f: f.clone(),
                            g: g.clone(),
                            alpha,
                            p: Some(hp.p),
                            q: Some(hp.q),
                            r: Some(hp.r),
                        }));
                    }
                }
            }
        }
        CheckKind::ClassicBecknerCoeff => {
            for &alpha in &cfg.alphas {
                for f in &cfg.functions {
                    if let FunctionSpec::Chaos(c) = f {
                        out.push(CheckArgs::ClassicBecknerCoeff(ClassicArgs { f: c.clone(), alpha }));
                    }
                }
            }
        }
        CheckKind::StrongPositivity => {
            for &alpha in cfg.alphas.iter().filter(|&&a| a > 0.0) {
                for nu in &measures {
                    for phi in positive_tests(cfg) {
                        out.push(CheckArgs::StrongPositivity(StrongArgs {
                            nu: Some(nu.clone()),
                            phi: Some(phi),
                            alpha,
                        }));
                    }
                }
            }
        }
        CheckKind::CovarianceGap => {
            for (nu1, nu2) in pairs(&measures) {
                for phi in positive_tests(cfg) {
                    out.push(CheckArgs::CovarianceGap(PairArgs {
                        nu1: nu1.clone(),
                        nu2: nu2.clone(),
                        phi: Some(phi),
                    }));
                }
            }
        }
        CheckKind::CharGram => {
            let hs = directions(cfg);
            for nu in &measures {
                out.push(CheckArgs::CharGram(GramArgs {
                    nu: nu.clone(),
                    hs: hs.clone(),
                }));
            }
        }
        CheckKind::WickDensityIdentity => {
            for (nu1, nu2) in pairs(&measures) {
                out.push(CheckArgs::WickDensityIdentity(PairArgs {
                    nu1: nu1.clone(),
                    nu2: nu2.clone(),
                    phi: None,
                }));
            }
        }
        CheckKind::OracleTriangle => {
            if cfg.quadrature_order.is_none() && wick_core::quadrature::default_order(cfg.dim).is_none() {
                warn!("oracle_triangle: no quadrature grid for n = {}; skipped", cfg.dim);
                return out;
            }
            for &alpha in &cfg.alphas {
                for nu in &measures {
                    for f in &cfg.functions {
                        if let FunctionSpec::Exp(e) = f {
                            out.push(CheckArgs::OracleTriangle(OracleArgs {
                                f: e.clone(),
                                nu: Some(nu.clone()),
                                alpha,
                                order: cfg.quadrature_order,
                                mc_count: Some(cfg.mc_count),
                                seed: Some(cfg.seed),
                            }));
                        }
                    }
                }
            }
        }
    }
    out
}

fn stream_id(kind: CheckKind, index: usize) -> u64 {
    let k = CheckKind::ALL.iter().position(|&c| c == kind).unwrap() as u64;
    (k << 32) | index as u64
}

/// Random instance `index` of `kind`, a pure function of `(seed, kind, index)`.
///
/// Dimensions are drawn from `{1, 2, 3}` (`{1, 2}` where a quadrature side is
/// involved), atoms and directions from the ball of radius 1.5 and α from
/// `{0, 0.1, ..., 1}`.
pub fn random_task(seed: u64, kind: CheckKind, index: usize, mc_count: usize) -> CheckArgs {
    let mut rng = random::rng(seed, stream_id(kind, index));
    let rng = &mut rng;
    match kind {
        CheckKind::BecknerDeficit | CheckKind::LeftPositivity => {
            let n = random::dim(rng, 3);
            let a = FnArgs {
                nu: Some(random::measure(rng, n, 5)),
                f: FunctionSpec::Exp(random::exp_combo(rng, n, 4, RADIUS)),
                alpha: random::alpha(rng),
            };
            if kind == CheckKind::BecknerDeficit {
                CheckArgs::BecknerDeficit(a)
            } else {
                CheckArgs::LeftPositivity(a)
            }
        }
        CheckKind::AbMatrix => {
            let n = random::dim(rng, 3);
            let k = rng.random_range(1..=6);
            CheckArgs::AbMatrix(AbArgs {
                hs: (0..k).map(|_| random::direction(rng, n, RADIUS)).collect(),
                nu: Some(random::measure(rng, n, 5)),
                alpha: random::alpha(rng),
            })
        }
        CheckKind::Holder => {
            let n = random::dim(rng, 2);
            let alpha = random::alpha(rng);
            if rng.random_bool(0.5) {
                let f = FunctionSpec::Exp(Exp::exponential(random::direction(rng, n, RADIUS)));
                CheckArgs::Holder(HolderArgs {
                    g: f.clone(),
                    f,
                    alpha,
                    p: None,
                    q: None,
                    r: Some(2.0),
                })
            } else {
                let (p, q) = loop {
                    let p = rng.random_range(1.2..4.0);
                    let q = rng.random_range(1.2..4.0);
                    if HolderParams::solve_r(p, q, alpha).is_ok_and(|hp| hp.r >= 1.0) {
                        break (p, q);
                    }
                };
                CheckArgs::Holder(HolderArgs {
                    f: FunctionSpec::Exp(random::exp_combo(rng, n, 3, 1.0)),
                    g: FunctionSpec::Exp(random::exp_combo(rng, n, 3, 1.0)),
                    alpha,
                    p: Some(p),
                    q: Some(q),
                    r: None,
                })
            }
        }
        CheckKind::ClassicBecknerCoeff => {
            let n = random::dim(rng, 3);
            CheckArgs::ClassicBecknerCoeff(ClassicArgs {
                f: random::chaos(rng, n, 8, 6),
                alpha: random::alpha(rng),
            })
        }
        CheckKind::StrongPositivity => {
            let n = random::dim(rng, 3);
            let alpha = loop {
                let a = random::alpha(rng);
                if a > 0.0 {
                    break a;
                }
            };
            CheckArgs::StrongPositivity(StrongArgs {
                nu: Some(random::measure(rng, n, 5)),
                phi: Some(random::positive_exp_combo(rng, n, 4, RADIUS)),
                alpha,
            })
        }
        CheckKind::CovarianceGap => {
            let n = random::dim(rng, 3);
            let nu1 = random::measure(rng, n, 5);
            let nu2 = random::measure(rng, n, 5);
            let phi = if rng.random_bool(0.25) {
                Exp::constant(n, 1.0)
            } else {
                Exp::exponential(random::direction(rng, n, RADIUS))
            };
            CheckArgs::CovarianceGap(PairArgs {
                nu1,
                nu2,
                phi: Some(phi),
            })
        }
        CheckKind::CharGram => {
            let n = random::dim(rng, 3);
            let k = rng.random_range(1..=6);
            CheckArgs::CharGram(GramArgs {
                nu: random::measure(rng, n, 5),
                hs: (0..k).map(|_| random::direction(rng, n, 2.0 * RADIUS)).collect(),
            })
        }
        CheckKind::WickDensityIdentity => {
            let n = random::dim(rng, 3);
            CheckArgs::WickDensityIdentity(PairArgs {
                nu1: random::measure(rng, n, 4),
                nu2: random::measure(rng, n, 4),
                phi: None,
            })
        }
        CheckKind::OracleTriangle => {
            let n = random::dim(rng, 2);
            let nu = random::measure(rng, n, 3);
            let nu = Measure::new(n, nu.atoms().iter().map(|y| y.iter().map(|v| v / RADIUS).collect()).collect(), nu.weights().to_vec()).unwrap();
            CheckArgs::OracleTriangle(OracleArgs {
                f: random::exp_combo(rng, n, 3, 0.8),
                nu: Some(nu),
                alpha: random::alpha(rng),
                order: None,
                mc_count: Some(mc_count),
                seed: Some(rng.random()),
            })
        }
    }
}

/// All tasks of a validated config: explicit cases, grid tasks, then random sweeps.
pub fn tasks(cfg: &SuiteConfig) -> Result<Vec<CheckArgs>> {
    let mut out = cfg.parsed_cases()?;
    for &kind in &cfg.checks {
        out.extend(grid_tasks(cfg, kind));
        out.extend((0..cfg.random_sweeps).map(|i| random_task(cfg.seed, kind, i, cfg.mc_count)));
    }
    Ok(out)
}

/// Canonical row order: check name, then the serialized parameters, then the
/// whole serialized row for rows sharing both.
pub fn sort_rows(rows: &mut [InequalityReport]) {
    rows.sort_by_cached_key(|r| {
        (
            r.check.clone(),
            r.params.to_string(),
            serde_json::to_string(r).expect("rows serialize"),
        )
    });
}

/// Evaluates every task on a pool of `jobs` threads (all cores when `None`).
pub fn evaluate(tasks: &[CheckArgs], tol: &Tolerances, jobs: Option<usize>) -> Result<Vec<InequalityReport>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build()?;
    let nested: Vec<Vec<InequalityReport>> = pool.install(|| tasks.par_iter().map(|t| t.run(tol)).collect::<Result<_>>())?;
    let mut rows: Vec<InequalityReport> = nested.into_iter().flatten().collect();
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn run_suite(cfg: &SuiteConfig, jobs: Option<usize>) -> Result<Vec<InequalityReport>> {
    let tasks = tasks(cfg)?;
    info!("evaluating {} tasks", tasks.len());
    let mut rows = evaluate(&tasks, &cfg.tolerances, jobs)?;
    if cfg.negate {
        rows = rows.iter().map(InequalityReport::negated).collect();
    }
    Ok(rows)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_owned(),
        source,
    }
}

pub fn to_csv(rows: &[InequalityReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "params", "lhs", "rhs", "gap", "tol", "pass", "method"])?;
    for r in rows {
        w.write_record([
            r.check.clone(),
            r.params.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.gap.to_string(),
            r.tolerance.to_string(),
            r.pass.to_string(),
            r.method.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

/// Writes `report.json` and `report.csv` into `dir`, returning both paths.
pub fn write_reports(rows: &[InequalityReport], dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let json_path = dir.join("report.json");
    let csv_path = dir.join("report.csv");
    let mut text = serde_json::to_string_pretty(rows)?;
    text.push('\n');
    fs::write(&json_path, text).map_err(io_err(&json_path))?;
    fs::write(&csv_path, to_csv(rows)?).map_err(io_err(&csv_path))?;
    Ok((json_path, csv_path))
}

/// Count of failing rows, with a one-line summary per failure at `warn` level.
pub fn failures(rows: &[InequalityReport]) -> usize {
    rows.iter()
        .filter(|r| !r.pass)
        .inspect(|r| warn!("FAIL {} gap={:e} tol={:e} {}", r.check, r.gap, r.tolerance, json!(r.params)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_tasks_are_reproducible() {
        for kind in CheckKind::ALL {
            assert_eq!(random_task(5, kind, 3, 100), random_task(5, kind, 3, 100));
            assert_eq!(random_task(5, kind, 3, 100).kind(), kind);
        }
    }

    #[test]
    fn empty_checks_give_empty_report() {
        let cfg = SuiteConfig::from_json(r#"{"dim": 2}"#).unwrap();
        assert!(run_suite(&cfg, Some(1)).unwrap().is_empty());
    }

    #[test]
    fn csv_has_expected_header() {
        let csv = to_csv(&[]).unwrap();
        assert_eq!(csv.trim(), "check,params,lhs,rhs,gap,tol,pass,method");
    }
}
