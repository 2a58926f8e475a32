//! Numerical oracles independent of the closed-form paths: tensor
//! Gauss-Hermite quadrature against the standard Gaussian, Monte Carlo under
//! `rho = mu * nu`, `L^p(mu)` norms and the Mehler form of the
//! Ornstein-Uhlenbeck semigroup.

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::chaos::{ChaosExpansion, Point};
use crate::error::{check_dim, Error, Result};
use crate::exp_span::ExpCombo;
use crate::measures::ConvolutionMeasure;
use crate::scalar::Scalar;

/// Something that can be evaluated at a point of `R^n`.
pub trait PointFn<T> {
    fn value(&self, w: &[T]) -> T;

    /// Dimension the function expects, when known.
    fn dim(&self) -> Option<usize> {
        None
    }
}

impl<T, F: Fn(&[T]) -> T> PointFn<T> for F {
    fn value(&self, w: &[T]) -> T {
        self(w)
    }
}

impl<T: Scalar> PointFn<T> for ExpCombo<T> {
    fn value(&self, w: &[T]) -> T {
        self.eval_unchecked(w)
    }
    fn dim(&self) -> Option<usize> {
        Some(ExpCombo::dim(self))
    }
}

impl<T: Scalar> PointFn<T> for ChaosExpansion<T> {
    fn value(&self, w: &[T]) -> T {
        self.eval(w).expect("dimension checked before evaluation")
    }
    fn dim(&self) -> Option<usize> {
        Some(ChaosExpansion::dim(self))
    }
}

/// Tensor-product Gauss-Hermite rule for the standard Gaussian on `R^dim`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid<T> {
    dim: usize,
    order: usize,
    nodes: Vec<Point<T>>,
    weights: Vec<T>,
}

/// Node count above which building a grid logs a warning.
pub const GRID_WARN_NODES: usize = 1_000_000;

/// Default per-axis order: 30 up to two dimensions, 12 in three, 6 in four.
/// `None` beyond four dimensions, where only Monte Carlo oracles are used.
pub fn default_order(dim: usize) -> Option<usize> {
    match dim {
        0..=2 => Some(30),
        3 => Some(12),
        4 => Some(6),
        _ => None,
    }
}

/// One-dimensional rule: `(nodes, weights)` with weights summing to one.
///
/// Nodes come from the Golub-Welsch eigenproblem and are polished by Newton
/// steps on the orthonormal Hermite polynomial; weights are the reciprocal
/// Christoffel function `1 / sum_{k<order} psi_k(x)^2`.
pub fn gauss_hermite_1d(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::Invalid("quadrature order must be at least 1".into()));
    }
    let jacobi = DMatrix::from_fn(order, order, |i, j| {
        if i + 1 == j {
            (j as f64).sqrt()
        } else if j + 1 == i {
            (i as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    let mut weights = Vec::with_capacity(order);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let psi = orthonormal_hermite(order, *x);
            let deriv = (order as f64).sqrt() * psi[order - 1];
            if deriv == 0.0 {
                break;
            }
            *x -= psi[order] / deriv;
        }
        let psi = orthonormal_hermite(order, *x);
        weights.push(1.0 / psi[..order].iter().map(|v| v * v).sum::<f64>());
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok((nodes, weights))
}

/// `psi_0(x), ..., psi_n(x)` with `psi_k = H_k / sqrt(k!)`.
fn orthonormal_hermite(n: usize, x: f64) -> Vec<f64> {
    let mut psi = Vec::with_capacity(n + 1);
    psi.push(1.0);
    if n >= 1 {
        psi.push(x);
    }
    for k in 1..n {
        let next = (x * psi[k] - (k as f64).sqrt() * psi[k - 1]) / ((k + 1) as f64).sqrt();
        psi.push(next);
    }
    psi
}

pub fn gauss_hermite_grid<T: Scalar>(dim: usize, order: usize) -> Result<QuadratureGrid<T>> {
    let (n1, w1) = gauss_hermite_1d(order)?;
    let total = order.checked_pow(dim as u32).unwrap_or(usize::MAX);
    if total > GRID_WARN_NODES {
        warn!("Gauss-Hermite grid with {order}^{dim} = {total} nodes");
    }
    let mut nodes: Vec<Vec<T>> = vec![Vec::with_capacity(dim)];
    let mut weights: Vec<T> = vec![T::one()];
    for _ in 0..dim {
        let mut next_nodes = Vec::with_capacity(nodes.len() * order);
        let mut next_weights = Vec::with_capacity(nodes.len() * order);
        for (node, &w) in nodes.iter().zip(&weights) {
            for (&x, &wx) in n1.iter().zip(&w1) {
                let mut p = node.clone();
                p.push(T::lit(x));
                next_nodes.push(p);
                next_weights.push(w * T::lit(wx));
            }
        }
        nodes = next_nodes;
        weights = next_weights;
    }
    Ok(QuadratureGrid {
        dim,
        order,
        nodes: nodes.into_iter().map(Point).collect(),
        weights,
    })
}

impl<T: Scalar> QuadratureGrid<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[Point<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn check(&self, f: &impl PointFn<T>) -> Result<()> {
        match f.dim() {
            Some(d) => check_dim(self.dim, d),
            None => Ok(()),
        }
    }

    /// One line per node: coordinates followed by the weight.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (p, w) in self.nodes.iter().zip(&self.weights) {
            let coords: Vec<String> = p.iter().map(|x| format!("{:e}", x.as_f64())).collect();
            out.push_str(&coords.join(","));
            if !coords.is_empty() {
                out.push(',');
            }
            out.push_str(&format!("{:e}\n", w.as_f64()));
        }
        out
    }
}

/// `int f dmu` as a weighted node sum.
pub fn integrate_mu<T: Scalar>(f: &impl PointFn<T>, grid: &QuadratureGrid<T>) -> Result<T> {
    grid.check(f)?;
    Ok(grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .fold(T::zero(), |acc, (x, &w)| acc + w * f.value(x)))
}

/// `int f d rho = sum_i p_i int f(w + y_i) dmu(w)`.
pub fn integrate_rho<T: Scalar>(
    f: &impl PointFn<T>,
    rho: &ConvolutionMeasure<T>,
    grid: &QuadratureGrid<T>,
) -> Result<T> {
    grid.check(f)?;
    check_dim(grid.dim, rho.dim())?;
    let mut shifted = vec![T::zero(); grid.dim];
    let mut total = T::zero();
    for (y, p) in rho.nu().iter() {
        let mut acc = T::zero();
        for (x, &w) in grid.nodes.iter().zip(&grid.weights) {
            for ((s, xk), yk) in shifted.iter_mut().zip(x.iter()).zip(y) {
                *s = *xk + *yk;
            }
            acc += w * f.value(&shifted);
        }
        total += p * acc;
    }
    Ok(total)
}

/// `||f||_p = (int |f|^p dmu)^{1/p}`.
pub fn lp_norm_mu<T: Scalar>(f: &impl PointFn<T>, p: T, grid: &QuadratureGrid<T>) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.as_f64(),
            range: "[1, inf)",
        });
    }
    let s = integrate_mu(&|w: &[T]| f.value(w).abs().powf(p), grid)?;
    Ok(s.powf(T::one() / p))
}

/// Mehler form `(P_tau f)(w) = int f(e^{-tau} w + sqrt(1 - e^{-2 tau}) v) dmu(v)`.
pub fn mehler_ou<'a, T: Scalar, F: PointFn<T>>(
    f: &'a F,
    tau: T,
    grid: &'a QuadratureGrid<T>,
) -> Result<impl Fn(&[T]) -> T + 'a> {
    if !(tau >= T::zero()) {
        return Err(Error::Negative {
            name: "tau",
            value: tau.as_f64(),
        });
    }
    grid.check(f)?;
    let a = (-tau).exp();
    let b = (-(-T::lit(2.0) * tau).exp_m1()).sqrt();
    Ok(move |w: &[T]| {
        let mut arg = vec![T::zero(); w.len()];
        grid.nodes
            .iter()
            .zip(&grid.weights)
            .fold(T::zero(), |acc, (v, &wt)| {
                for ((s, wk), vk) in arg.iter_mut().zip(w).zip(v.iter()) {
                    *s = a * *wk + b * *vk;
                }
                acc + wt * f.value(&arg)
            })
    })
}

/// Monte Carlo estimate and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate<T> {
    pub estimate: T,
    pub std_error: T,
}

/// Sample mean of `f` over `count` draws from `rho` (stream 0 of `seed`).
pub fn mc_integral_rho<T: Scalar>(
    f: &impl PointFn<T>,
    rho: &ConvolutionMeasure<T>,
    seed: u64,
    count: usize,
) -> Result<McEstimate<T>> {
    if count < 2 {
        return Err(Error::Invalid("Monte Carlo needs at least two samples".into()));
    }
    if let Some(d) = f.dim() {
        check_dim(rho.dim(), d)?;
    }
    let samples = rho.sample(seed, count);
    let values: Vec<T> = samples.iter().map(|p| f.value(p)).collect();
    Ok(mean_and_se(&values))
}

/// Mean and standard error `s / sqrt(n)` with the unbiased sample variance.
pub fn mean_and_se<T: Scalar>(values: &[T]) -> McEstimate<T> {
    let n = T::from_usize(values.len()).unwrap();
    let mean = values.iter().fold(T::zero(), |a, v| a + *v) / n;
    let var = values
        .iter()
        .fold(T::zero(), |a, v| a + (*v - mean) * (*v - mean))
        / (n - T::one());
    McEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::MultiIndex;
    use crate::measures::DiscreteMeasure;
    use std::f64::consts::E;

    /// Trapezoid rule on [-12, 12] against the Gaussian density; an oracle
    /// that shares nothing with the Gauss-Hermite construction.
    fn trapezoid_mu(f: impl Fn(f64) -> f64) -> f64 {
        let n = 200_000;
        let (a, b) = (-12.0, 12.0);
        let h = (b - a) / n as f64;
        let dens = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = 0.5 * (f(a) * dens(a) + f(b) * dens(b));
        for i in 1..n {
            let x = a + i as f64 * h;
            s += f(x) * dens(x);
        }
        s * h
    }

    #[test]
    fn one_dimensional_rule_against_trapezoid() {
        let grid = gauss_hermite_grid::<f64>(1, 20).unwrap();
        for c in [0.3, 1.0, 2.0] {
            let gh = integrate_mu(&|w: &[f64]| (c * w[0]).cos(), &grid).unwrap();
            let tr = trapezoid_mu(|x| (c * x).cos());
            assert!((gh - tr).abs() < 1e-10, "c={c}: {gh} vs {tr}");
            assert!((gh - (-0.5 * c * c).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_examples() {
        for order in [1, 2, 5, 30] {
            let g = gauss_hermite_grid::<f64>(1, order).unwrap();
            assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(g.weights().iter().all(|w| *w > 0.0));
            assert!((integrate_mu(&|_: &[f64]| 1.0, &g).unwrap() - 1.0).abs() < 1e-12);
        }
        let g2 = gauss_hermite_grid::<f64>(1, 2).unwrap();
        assert!((integrate_mu(&|w: &[f64]| w[0] * w[0], &g2).unwrap() - 1.0).abs() < 1e-14);
        let g3 = gauss_hermite_grid::<f64>(1, 3).unwrap();
        let h2 = ChaosExpansion::hermite(MultiIndex::new(vec![2]));
        let v = integrate_mu(&|w: &[f64]| h2.eval(w).unwrap().powi(2), &g3).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let g = gauss_hermite_grid::<f64>(3, 4).unwrap();
        assert_eq!(g.len(), 64);
        assert!(gauss_hermite_grid::<f64>(1, 0).is_err());
    }

    #[test]
    fn polynomial_exactness() {
        let g = gauss_hermite_grid::<f64>(2, 6).unwrap();
        for m in crate::chaos::multi_indices_up_to(2, 10) {
            if m.is_zero() || m.exponents().iter().any(|&k| k >= 6) {
                continue;
            }
            let hm = ChaosExpansion::hermite(m.clone());
            assert!(integrate_mu(&hm, &g).unwrap().abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn integrate_examples() {
        let g = gauss_hermite_grid::<f64>(1, 20).unwrap();
        let e1 = ExpCombo::exponential(vec![1.0]);
        assert!((integrate_mu(&e1, &g).unwrap() - 1.0).abs() < 1e-10);
        let sq = e1.pointwise(&e1).unwrap();
        assert!((integrate_mu(&sq, &g).unwrap() - E).abs() < 1e-9);
        assert!((integrate_mu(&|_: &[f64]| 4.2, &g).unwrap() - 4.2).abs() < 1e-13);
        assert!(integrate_mu(&ExpCombo::exponential(vec![1.0, 0.0]), &g).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        let g = gauss_hermite_grid::<f64>(1, 30).unwrap();
        let e1 = ExpCombo::exponential(vec![1.0]);
        assert!((lp_norm_mu(&e1, 2.0, &g).unwrap() - 1.648_721_270_700_128).abs() < 1e-10);
        assert!((lp_norm_mu(&|_: &[f64]| 1.0, 3.7, &g).unwrap() - 1.0).abs() < 1e-13);
        assert!((lp_norm_mu(&e1, 3.0, &g).unwrap() - E).abs() < 1e-9);
        assert!(lp_norm_mu(&e1, 0.5, &g).is_err());
    }

    #[test]
    fn mehler_examples() {
        let g = gauss_hermite_grid::<f64>(1, 30).unwrap();
        let f = ChaosExpansion::hermite(MultiIndex::new(vec![3]))
            .add(&ChaosExpansion::hermite(MultiIndex::new(vec![1])))
            .unwrap();
        let p0 = mehler_ou(&f, 0.0, &g).unwrap();
        for w in [-1.0, 0.2, 1.7] {
            assert!((p0(&[w]) - f.eval(&[w]).unwrap()).abs() < 1e-12);
        }
        let e1 = ExpCombo::exponential(vec![1.0]);
        let pe = mehler_ou(&e1, 2f64.ln(), &g).unwrap();
        assert!((pe(&[1.0]) - 1.454_991_414_618_201_4).abs() < 1e-10);
        let h1 = ChaosExpansion::hermite(MultiIndex::new(vec![1]));
        let ph = mehler_ou(&h1, 0.7, &g).unwrap();
        for w in [-2.0, 0.5, 1.1] {
            assert!((ph(&[w]) - (-0.7f64).exp() * w).abs() < 1e-12);
        }
        assert!(mehler_ou(&h1, -0.1, &g).is_err());
    }

    #[test]
    fn mc_examples() {
        let sym = ConvolutionMeasure::new(DiscreteMeasure::new(1, vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5]).unwrap());
        let one = mc_integral_rho(&|_: &[f64]| 1.0, &sym, 3, 1000).unwrap();
        assert_eq!((one.estimate, one.std_error), (1.0, 0.0));
        let f = ExpCombo::exponential(vec![2.0]);
        let est = mc_integral_rho(&f, &sym, 5, 200_000).unwrap();
        assert!((est.estimate - 2f64.cosh()).abs() < 4.0 * est.std_error, "{est:?}");
        assert_eq!(est, mc_integral_rho(&f, &sym, 5, 200_000).unwrap());
        assert!(mc_integral_rho(&f, &sym, 5, 1).is_err());
    }
}
