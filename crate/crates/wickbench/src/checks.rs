//! Individual inequality and positivity checks. Each returns one or more
//! [`InequalityReport`] rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wick_core::linalg::{hadamard, min_symmetric_eigenvalue};
use wick_core::quadrature::{default_order, mean_and_se};
use wick_core::scalar::{dot, norm_sq, one_minus_pow};
use wick_core::{
    alpha_chaos, char_gram, gauss_hermite_grid, integrate_rho, lp_norm_mu, pointwise_chaos, Chaos, Convolution, Error,
    Exp, HolderParams, InequalityReport, Measure, Method, MethodTags, PointFn,
};

use crate::error::{BenchError, Result};

/// Per-path tolerances. A row passes when `gap >= -tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form paths.
    pub exact: f64,
    /// Paths with a Gauss-Hermite side; relative for oracle comparisons.
    pub quadrature: f64,
    /// Floor for minimum eigenvalues.
    pub psd: f64,
    /// Coefficient-level Beckner check.
    pub coefficient: f64,
    /// Monte Carlo agreement in standard errors.
    pub mc_se: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-9,
            quadrature: 1e-6,
            psd: 1e-10,
            coefficient: 1e-12,
            mc_se: 4.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    BecknerDeficit,
    LeftPositivity,
    AbMatrix,
    Holder,
    ClassicBecknerCoeff,
    StrongPositivity,
    CovarianceGap,
    CharGram,
    WickDensityIdentity,
    OracleTriangle,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::BecknerDeficit,
        CheckKind::LeftPositivity,
        CheckKind::AbMatrix,
        CheckKind::Holder,
        CheckKind::ClassicBecknerCoeff,
        CheckKind::StrongPositivity,
        CheckKind::CovarianceGap,
        CheckKind::CharGram,
        CheckKind::WickDensityIdentity,
        CheckKind::OracleTriangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::BecknerDeficit => "beckner_deficit",
            CheckKind::LeftPositivity => "left_positivity",
            CheckKind::AbMatrix => "ab_matrix",
            CheckKind::Holder => "holder",
            CheckKind::ClassicBecknerCoeff => "classic_beckner_coeff",
            CheckKind::StrongPositivity => "strong_positivity",
            CheckKind::CovarianceGap => "covariance_gap",
            CheckKind::CharGram => "char_gram",
            CheckKind::WickDensityIdentity => "wick_density_identity",
            CheckKind::OracleTriangle => "oracle_triangle",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckKind::BecknerDeficit => "int f^2 drho - int f o_a f drho <= (1-a) int |Df|^2 drho",
            CheckKind::LeftPositivity => "int f o_a f drho <= int f^2 drho",
            CheckKind::AbMatrix => "A, B and their Hadamard product are positive semidefinite",
            CheckKind::Holder => "||Gamma(sqrt((1+a)/2)) (f o_a g)||_r <= ||f||_p ||g||_q",
            CheckKind::ClassicBecknerCoeff => "sum m! c^2 (1 - a^|m|) <= (1-a) sum |m| m! c^2",
            CheckKind::StrongPositivity => "<<Gamma(1/sqrt a) xi, phi>> >= 0 for positive phi",
            CheckKind::CovarianceGap => "<<xi1 xi2 - xi1 <> xi2 - sum_k d_k xi1 <> d_k xi2, phi>> >= 0",
            CheckKind::CharGram => "characteristic Gram matrix of nu is Hermitian PSD",
            CheckKind::WickDensityIdentity => "density of mu*nu1*nu2 equals xi1 <> xi2",
            CheckKind::OracleTriangle => "exact, quadrature and Monte Carlo rho-integrals agree",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown check `{s}` (see `wickbench list-checks`)")))
    }
}

/// A test function in either representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Exp(Exp),
    Chaos(Chaos),
}

impl FunctionSpec {
    pub fn dim(&self) -> usize {
        match self {
            FunctionSpec::Exp(f) => f.dim(),
            FunctionSpec::Chaos(f) => f.dim(),
        }
    }
}

impl PointFn<f64> for FunctionSpec {
    fn value(&self, w: &[f64]) -> f64 {
        match self {
            FunctionSpec::Exp(f) => f.value(w),
            FunctionSpec::Chaos(f) => f.value(w),
        }
    }
    fn dim(&self) -> Option<usize> {
        Some(FunctionSpec::dim(self))
    }
}

/// The three rho-integrals entering the Beckner-type inequalities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BecknerIntegrals {
    /// `int f^2 drho`
    pub square: f64,
    /// `int f o_a f drho`
    pub alpha_product: f64,
    /// `int |Df|^2 drho`
    pub energy: f64,
}

pub fn beckner_integrals(f: &FunctionSpec, rho: &Convolution, alpha: f64) -> Result<BecknerIntegrals> {
    match f {
        FunctionSpec::Exp(f) => {
            let square = rho.integral_exp(&f.pointwise(f)?)?;
            let alpha_product = rho.integral_exp(&f.alpha(f, alpha)?)?;
            let mut energy = 0.0;
            for d in f.gradient() {
                energy += rho.integral_exp(&d.pointwise(&d)?)?;
            }
            Ok(BecknerIntegrals {
                square,
                alpha_product,
                energy,
            })
        }
        FunctionSpec::Chaos(f) => {
            let square = rho.integral_chaos(&pointwise_chaos(f, f)?)?;
            let alpha_product = rho.integral_chaos(&alpha_chaos(f, f, alpha)?)?;
            let mut energy = 0.0;
            for d in f.gradient() {
                energy += rho.integral_chaos(&pointwise_chaos(&d, &d)?)?;
            }
            Ok(BecknerIntegrals {
                square,
                alpha_product,
                energy,
            })
        }
    }
}

fn fn_params(alpha: f64, f: &FunctionSpec, rho: &Convolution) -> Value {
    json!({ "alpha": alpha, "f": f, "nu": rho.nu() })
}

/// `lhs = int f^2 - int f o_a f`, `rhs = (1-a) int |Df|^2`.
pub fn beckner_deficit(f: &FunctionSpec, rho: &Convolution, alpha: f64, tol: &Tolerances) -> Result<InequalityReport> {
    let i = beckner_integrals(f, rho, alpha)?;
    let mut params = fn_params(alpha, f, rho);
    params["integrals"] = json!({ "square": i.square, "alpha_product": i.alpha_product, "energy": i.energy });
    Ok(InequalityReport::new(
        CheckKind::BecknerDeficit.name(),
        params,
        i.square - i.alpha_product,
        (1.0 - alpha) * i.energy,
        tol.exact,
        MethodTags::EXACT,
    ))
}

/// `lhs = int f o_a f`, `rhs = int f^2`.
pub fn left_positivity(f: &FunctionSpec, rho: &Convolution, alpha: f64, tol: &Tolerances) -> Result<InequalityReport> {
    let i = beckner_integrals(f, rho, alpha)?;
    Ok(InequalityReport::new(
        CheckKind::LeftPositivity.name(),
        fn_params(alpha, f, rho),
        i.alpha_product,
        i.square,
        tol.exact,
        MethodTags::EXACT,
    ))
}

/// `a_jk = e^{a s} - e^s + (1-a) s e^s` with `s = <h_j, h_k>`.
pub fn a_matrix(hs: &[Vec<f64>], alpha: f64) -> Vec<Vec<f64>> {
    hs.iter()
        .map(|hj| {
            hs.iter()
                .map(|hk| {
                    let s = dot(hj, hk);
                    (alpha * s).exp() - s.exp() + (1.0 - alpha) * s * s.exp()
                })
                .collect()
        })
        .collect()
}

/// `b_jk = int E(h_j) <> E(h_k) drho = sum_i p_i e^{<y_i, h_j + h_k>}`.
pub fn b_matrix(hs: &[Vec<f64>], nu: &Measure) -> Vec<Vec<f64>> {
    hs.iter()
        .map(|hj| {
            hs.iter()
                .map(|hk| {
                    let sum: Vec<f64> = hj.iter().zip(hk).map(|(a, b)| a + b).collect();
                    nu.laplace(&sum)
                })
                .collect()
        })
        .collect()
}

/// Minimum eigenvalues of `A`, `B` and `A∘B`, one row each.
pub fn ab_matrix(hs: &[Vec<f64>], rho: &Convolution, alpha: f64, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
    check_alpha(alpha)?;
    if hs.is_empty() {
        return Err(BenchError::Config("ab_matrix needs at least one direction".into()));
    }
    for h in hs {
        check_len(rho.dim(), h.len())?;
    }
    let a = a_matrix(hs, alpha);
    let b = b_matrix(hs, rho.nu());
    let ab = hadamard(&a, &b);
    Ok([("A", &a), ("B", &b), ("hadamard", &ab)]
        .into_iter()
        .map(|(which, m)| {
            InequalityReport::nonnegative(
                CheckKind::AbMatrix.name(),
                json!({ "alpha": alpha, "hs": hs, "nu": rho.nu(), "matrix": which }),
                min_symmetric_eigenvalue(m),
                tol.psd,
                MethodTags::EXACT,
            )
        })
        .collect())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        }
        .into())
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found }.into())
    }
}

fn grid_for(dim: usize) -> Result<wick_core::Grid> {
    let order = default_order(dim)
        .ok_or_else(|| BenchError::Config(format!("no quadrature oracle in dimension {dim}; use n <= 4")))?;
    Ok(gauss_hermite_grid(dim, order)?)
}

fn even_power(p: f64) -> Option<u32> {
    (p.fract() == 0.0 && (2.0..=8.0).contains(&p) && (p as u32).is_multiple_of(2)).then_some(p as u32)
}

/// `||f||_p` under `mu`, exact where a closed form exists.
pub fn lp_norm(f: &FunctionSpec, p: f64) -> Result<(f64, Method)> {
    if !(p >= 1.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[1, inf)",
        }
        .into());
    }
    match f {
        FunctionSpec::Exp(e) if e.is_empty() => Ok((0.0, Method::Exact)),
        FunctionSpec::Exp(e) if e.len() == 1 => {
            let t = &e.terms()[0];
            Ok((t.coef.abs() * ((p - 1.0) * norm_sq(&t.h) / 2.0).exp(), Method::Exact))
        }
        FunctionSpec::Exp(e) if p == 1.0 && e.has_positive_weights() => Ok((e.mu_mass(), Method::Exact)),
        FunctionSpec::Exp(e) if even_power(p).is_some() => {
            let mut acc = e.clone();
            for _ in 1..even_power(p).unwrap() {
                acc = acc.pointwise(e)?;
            }
            Ok((acc.mu_mass().max(0.0).powf(1.0 / p), Method::Exact))
        }
        FunctionSpec::Chaos(c) if p == 2.0 => Ok((c.l2_norm(), Method::Exact)),
        FunctionSpec::Chaos(c) if even_power(p).is_some() => {
            let mut acc = c.clone();
            for _ in 1..even_power(p).unwrap() {
                acc = pointwise_chaos(&acc, c)?;
            }
            Ok((acc.constant_term().max(0.0).powf(1.0 / p), Method::Exact))
        }
        _ => {
            let grid = grid_for(f.dim())?;
            Ok((lp_norm_mu(f, p, &grid)?, Method::Quadrature))
        }
    }
}

/// `lhs = ||Gamma(sqrt((1+a)/2)) (f o_a g)||_r`, `rhs = ||f||_p ||g||_q`.
pub fn holder(f: &FunctionSpec, g: &FunctionSpec, params: HolderParams, tol: &Tolerances) -> Result<InequalityReport> {
    let rel = params.relation_check()?;
    if !rel.admissible {
        return Err(Error::Inadmissible(format!("{params:?}: relation residual {:e}", rel.residual)).into());
    }
    let alpha = params.alpha;
    let c = ((1.0 + alpha) / 2.0).sqrt();
    let product = match (f, g) {
        (FunctionSpec::Exp(f), FunctionSpec::Exp(g)) => FunctionSpec::Exp(f.alpha(g, alpha)?.gamma(c)?),
        (FunctionSpec::Chaos(f), FunctionSpec::Chaos(g)) => FunctionSpec::Chaos(alpha_chaos(f, g, alpha)?.gamma(c)?),
        _ => return Err(BenchError::Config("holder: f and g must share a representation".into())),
    };
    let (lhs, lm) = lp_norm(&product, params.r)?;
    let (nf, fm) = lp_norm(f, params.p)?;
    let (ng, gm) = lp_norm(g, params.q)?;
    let rm = if fm == Method::Quadrature || gm == Method::Quadrature {
        Method::Quadrature
    } else {
        Method::Exact
    };
    let tolerance = if lm == Method::Quadrature || rm == Method::Quadrature {
        tol.quadrature
    } else {
        tol.exact
    };
    Ok(InequalityReport::new(
        CheckKind::Holder.name(),
        json!({ "alpha": alpha, "p": params.p, "q": params.q, "r": params.r, "f": f, "g": g }),
        lhs,
        nf * ng,
        tolerance,
        MethodTags { lhs: lm, rhs: rm },
    ))
}

/// Exact coefficient form; the gap is summed as
/// `sum m! c^2 (1-a) sum_{i<|m|} (1 - a^i)` to avoid cancellation.
pub fn classic_beckner_coeff(f: &Chaos, alpha: f64, tol: &Tolerances) -> Result<InequalityReport> {
    check_alpha(alpha)?;
    let (mut lhs, mut rhs, mut gap) = (0.0, 0.0, 0.0);
    for (m, &c) in f.terms() {
        let k = m.degree();
        let w = m.factorial() as f64 * c * c;
        lhs += w * one_minus_pow(alpha, k);
        rhs += w * (1.0 - alpha) * k as f64;
        let inner: f64 = (1..k).map(|i| one_minus_pow(alpha, i)).sum();
        gap += w * (1.0 - alpha) * inner;
    }
    Ok(InequalityReport::with_gap(
        CheckKind::ClassicBecknerCoeff.name(),
        json!({ "alpha": alpha, "f": f }),
        lhs,
        rhs,
        gap,
        tol.coefficient,
        MethodTags::EXACT,
    ))
}

/// `<<Gamma(1/sqrt a) xi, phi>> >= 0` for `phi` with positive weights.
pub fn strong_positivity(rho: &Convolution, alpha: f64, phi: &Exp, tol: &Tolerances) -> Result<InequalityReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "(0, 1]",
        }
        .into());
    }
    if !phi.has_positive_weights() {
        return Err(BenchError::Config("strong_positivity: phi must have positive weights".into()));
    }
    let pairing = rho.gamma_xi(alpha)?.mu_inner(phi)?;
    Ok(InequalityReport::nonnegative(
        CheckKind::StrongPositivity.name(),
        json!({ "alpha": alpha, "nu": rho.nu(), "phi": phi }),
        pairing,
        tol.exact,
        MethodTags::EXACT,
    ))
}

/// `rhs = <<xi1 xi2, phi>>`, `lhs = <<xi1 <> xi2, phi>> + sum_k <<d_k xi1 <> d_k xi2, phi>>`.
///
/// The gap is the closed form
/// `sum_t c_t sum_ij p_i q_j e^{<h_t, y_i + z_j>} (e^s - 1 - s)`, `s = <y_i, z_j>`.
pub fn covariance_gap(nu1: &Measure, nu2: &Measure, phi: &Exp, tol: &Tolerances) -> Result<InequalityReport> {
    check_len(nu1.dim(), nu2.dim())?;
    check_len(nu1.dim(), phi.dim())?;
    if !phi.has_positive_weights() {
        return Err(BenchError::Config("covariance_gap: phi must have positive weights".into()));
    }
    let xi1 = Convolution::new(nu1.clone()).density_xi();
    let xi2 = Convolution::new(nu2.clone()).density_xi();
    let rhs = xi1.pointwise(&xi2)?.mu_inner(phi)?;
    let mut lhs = xi1.wick(&xi2)?.mu_inner(phi)?;
    for (d1, d2) in xi1.gradient().iter().zip(xi2.gradient()) {
        lhs += d1.wick(&d2)?.mu_inner(phi)?;
    }
    let mut gap = 0.0;
    let mut shift = vec![0.0; nu1.dim()];
    for t in phi.terms() {
        for (y, p) in nu1.iter() {
            for (z, q) in nu2.iter() {
                let s = dot(y, z);
                for ((a, yk), zk) in shift.iter_mut().zip(y).zip(z) {
                    *a = yk + zk;
                }
                gap += t.coef * p * q * dot(&t.h, &shift).exp() * (s.exp_m1() - s);
            }
        }
    }
    Ok(InequalityReport::with_gap(
        CheckKind::CovarianceGap.name(),
        json!({ "nu1": nu1, "nu2": nu2, "phi": phi }),
        lhs,
        rhs,
        gap,
        tol.exact,
        MethodTags::EXACT,
    ))
}

pub fn char_gram_check(nu: &Measure, hs: &[Vec<f64>], tol: &Tolerances) -> Result<InequalityReport> {
    let g = char_gram(nu, hs)?;
    Ok(InequalityReport::nonnegative(
        CheckKind::CharGram.name(),
        json!({ "nu": nu, "hs": hs }),
        g.min_eigenvalue(),
        tol.psd,
        MethodTags::EXACT,
    ))
}

pub fn wick_density_identity(nu1: &Measure, nu2: &Measure) -> Result<InequalityReport> {
    Ok(wick_core::wick_density_identity_check(nu1, nu2)?)
}

/// Settings for the quadrature and Monte Carlo re-computations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    pub order: usize,
    pub mc_count: usize,
    pub seed: u64,
}

/// Pointwise integrands of the three Beckner integrals, evaluated termwise
/// from the definitions rather than through the merged exp-span products.
struct Integrands<'a> {
    f: &'a Exp,
    alpha: f64,
}

impl Integrands<'_> {
    fn exps(&self, w: &[f64]) -> Vec<f64> {
        self.f
            .terms()
            .iter()
            .map(|t| (dot(w, &t.h) - norm_sq(&t.h) / 2.0).exp())
            .collect()
    }

    fn square(&self, w: &[f64]) -> f64 {
        let e = self.exps(w);
        let v: f64 = self.f.terms().iter().zip(&e).map(|(t, e)| t.coef * e).sum();
        v * v
    }

    /// `E(h) o_a E(k) = e^{(a - 1) <h, k>} E(h) E(k)`, summed over term pairs.
    fn alpha_product(&self, w: &[f64]) -> f64 {
        let e = self.exps(w);
        let terms = self.f.terms();
        let mut acc = 0.0;
        for (ti, ei) in terms.iter().zip(&e) {
            for (tj, ej) in terms.iter().zip(&e) {
                acc += ti.coef * tj.coef * ((self.alpha - 1.0) * dot(&ti.h, &tj.h)).exp() * ei * ej;
            }
        }
        acc
    }

    fn energy(&self, w: &[f64]) -> f64 {
        let e = self.exps(w);
        (0..self.f.dim())
            .map(|k| {
                let d: f64 = self.f.terms().iter().zip(&e).map(|(t, e)| t.coef * t.h[k] * e).sum();
                d * d
            })
            .sum()
    }
}

/// Compares the exact values of `int f^2`, `int f o_a f` and `int |Df|^2`
/// against Gauss-Hermite quadrature (relative tolerance) and Monte Carlo
/// (`mc_se` standard errors). Six rows.
pub fn oracle_triangle(
    f: &Exp,
    rho: &Convolution,
    alpha: f64,
    settings: OracleSettings,
    tol: &Tolerances,
) -> Result<Vec<InequalityReport>> {
    check_alpha(alpha)?;
    check_len(rho.dim(), f.dim())?;
    let exact = beckner_integrals(&FunctionSpec::Exp(f.clone()), rho, alpha)?;
    let grid = gauss_hermite_grid(f.dim(), settings.order)?;
    let it = Integrands { f, alpha };
    type Integrand<'a> = &'a dyn Fn(&[f64]) -> f64;
    let quantities: [(&str, f64, Integrand); 3] = [
        ("square", exact.square, &|w| it.square(w)),
        ("alpha_product", exact.alpha_product, &|w| it.alpha_product(w)),
        ("energy", exact.energy, &|w| it.energy(w)),
    ];
    let mut rows = Vec::with_capacity(6);
    for (stream, (name, value, integrand)) in quantities.into_iter().enumerate() {
        let params = |oracle: &str| {
            json!({ "alpha": alpha, "f": f, "nu": rho.nu(), "quantity": name, "oracle": oracle, "settings": settings })
        };
        let quad = integrate_rho(&integrand, rho, &grid)?;
        rows.push(InequalityReport::with_gap(
            CheckKind::OracleTriangle.name(),
            params("quadrature"),
            value,
            quad,
            -(value - quad).abs(),
            tol.quadrature * value.abs().max(1.0),
            MethodTags {
                lhs: Method::Exact,
                rhs: Method::Quadrature,
            },
        ));
        let samples = rho.sample_stream(settings.seed, stream as u64, settings.mc_count);
        let values: Vec<f64> = samples.iter().map(|w| integrand(w)).collect();
        let mc = mean_and_se(&values);
        rows.push(InequalityReport::with_gap(
            CheckKind::OracleTriangle.name(),
            params("mc"),
            value,
            mc.estimate,
            -(value - mc.estimate).abs(),
            tol.mc_se * mc.std_error,
            MethodTags {
                lhs: Method::Exact,
                rhs: Method::Mc,
            },
        ));
    }
    Ok(rows)
}
