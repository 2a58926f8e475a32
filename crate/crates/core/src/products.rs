//! Wick, pointwise and alpha-products on chaos expansions, and the exponent
//! relation of the Hölder inequality for alpha-products.

use serde::{Deserialize, Serialize};

use crate::chaos::{ChaosExpansion, MultiIndex};
use crate::error::{check_dim, Error, Result};
use crate::exp_span::check_unit_interval;
use crate::scalar::{binomial, factorial, Scalar};

/// Wick product: `H_a ⋄ H_b = H_{a+b}`, i.e. coefficient convolution.
pub fn wick_chaos<T: Scalar>(f: &ChaosExpansion<T>, g: &ChaosExpansion<T>) -> Result<ChaosExpansion<T>> {
    check_dim(f.dim(), g.dim())?;
    let mut out = ChaosExpansion::zero(f.dim());
    for (a, &ca) in f.terms() {
        for (b, &cb) in g.terms() {
            out.accumulate(a.add_unchecked(b), ca * cb);
        }
    }
    out.normalize();
    Ok(out)
}

/// `H_a(x) H_b(x) = sum_j C(a,j) C(b,j) j! H_{a+b-2j}(x)` as `(a+b-2j, coefficient)`.
pub fn linearization_1d(a: u32, b: u32) -> Vec<(u32, u128)> {
    (0..=a.min(b))
        .map(|j| (a + b - 2 * j, binomial(a, j) * binomial(b, j) * factorial(j)))
        .collect()
}

/// Exact pointwise product of two polynomial chaos expansions.
pub fn pointwise_chaos<T: Scalar>(f: &ChaosExpansion<T>, g: &ChaosExpansion<T>) -> Result<ChaosExpansion<T>> {
    check_dim(f.dim(), g.dim())?;
    let mut out = pointwise_raw(f, g);
    out.normalize();
    Ok(out)
}

fn pointwise_raw<T: Scalar>(f: &ChaosExpansion<T>, g: &ChaosExpansion<T>) -> ChaosExpansion<T> {
    let dim = f.dim();
    let mut out = ChaosExpansion::zero(dim);
    for (a, &ca) in f.terms() {
        for (b, &cb) in g.terms() {
            let mut partial: Vec<(Vec<u32>, T)> = vec![(Vec::with_capacity(dim), ca * cb)];
            for (&ak, &bk) in a.exponents().iter().zip(b.exponents()) {
                let lin = linearization_1d(ak, bk);
                partial = partial
                    .into_iter()
                    .flat_map(|(idx, c)| {
                        lin.iter().map(move |&(k, w)| {
                            let mut next = idx.clone();
                            next.push(k);
                            (next, c * T::from_u128(w).unwrap())
                        })
                    })
                    .collect();
            }
            for (idx, c) in partial {
                out.accumulate(MultiIndex::new(idx), c);
            }
        }
    }
    out
}

/// The alpha-product `Gamma(1/sqrt(α)) (Gamma(sqrt(α)) f · Gamma(sqrt(α)) g)`.
/// At `α = 0` the Wick product is returned.
pub fn alpha_chaos<T: Scalar>(
    f: &ChaosExpansion<T>,
    g: &ChaosExpansion<T>,
    alpha: T,
) -> Result<ChaosExpansion<T>> {
    check_unit_interval("alpha", alpha)?;
    check_dim(f.dim(), g.dim())?;
    if alpha == T::zero() {
        return wick_chaos(f, g);
    }
    if alpha == T::one() {
        return pointwise_chaos(f, g);
    }
    // intermediate coefficients are scaled by powers of sqrt(α) and must not be
    // pruned before Gamma(1/sqrt(α)) restores them
    let s = alpha.sqrt();
    let prod = pointwise_raw(&f.gamma_raw(s), &g.gamma_raw(s));
    Ok(prod.gamma_unchecked(T::one() / s))
}

/// Exponents `p, q, r` and interpolation parameter `alpha` of the Hölder
/// inequality `||Gamma(sqrt((1+α)/2)) (f ∘_α g)||_r <= ||f||_p ||g||_q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub alpha: f64,
}

/// Residual of the exponent relation and whether it is met within `1e-12`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderRelation {
    pub residual: f64,
    pub admissible: bool,
}

pub const HOLDER_RELATION_TOL: f64 = 1e-12;

impl HolderParams {
    pub fn new(p: f64, q: f64, r: f64, alpha: f64) -> Self {
        HolderParams { p, q, r, alpha }
    }

    /// Exponent `r` satisfying the relation for given `p, q, alpha`.
    pub fn solve_r(p: f64, q: f64, alpha: f64) -> Result<Self> {
        let probe = HolderParams::new(p, q, 2.0, alpha);
        probe.validate_ranges()?;
        let rhs = probe.relation_rhs();
        let r = (1.0 - alpha) / (1.0 + alpha) + 1.0 / rhs;
        Ok(HolderParams::new(p, q, r, alpha))
    }

    /// `p = q = 2(1+α)`, `r = 2`: the equality case on single exponentials.
    pub fn symmetric(alpha: f64) -> Self {
        HolderParams::new(2.0 * (1.0 + alpha), 2.0 * (1.0 + alpha), 2.0, alpha)
    }

    fn validate_ranges(&self) -> Result<()> {
        check_unit_interval("alpha", self.alpha)?;
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v > 1.0) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(1, inf)",
                });
            }
        }
        // r = 1 is admitted: it is the classical Hölder endpoint at alpha = 1.
        if !(self.r >= 1.0) {
            return Err(Error::OutOfRange {
                name: "r",
                value: self.r,
                range: "[1, inf)",
            });
        }
        Ok(())
    }

    fn relation_rhs(&self) -> f64 {
        let a = self.alpha;
        (1.0 + a) / (2.0 * (self.p - 1.0) + 2.0 * a) + (1.0 + a) / (2.0 * (self.q - 1.0) + 2.0 * a)
    }

    /// Evaluates `1/(r - (1-α)/(1+α)) - [(1+α)/(2(p-1)+2α) + (1+α)/(2(q-1)+2α)]`.
    pub fn relation_check(&self) -> Result<HolderRelation> {
        self.validate_ranges()?;
        let a = self.alpha;
        let denom = self.r - (1.0 - a) / (1.0 + a);
        if denom == 0.0 {
            return Err(Error::Inadmissible(format!(
                "r = (1-alpha)/(1+alpha) = {} makes the relation singular",
                self.r
            )));
        }
        let residual = 1.0 / denom - self.relation_rhs();
        Ok(HolderRelation {
            residual,
            admissible: residual.abs() <= HOLDER_RELATION_TOL,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(m: &[u32]) -> ChaosExpansion<f64> {
        ChaosExpansion::hermite(MultiIndex::new(m.to_vec()))
    }

    fn one(dim: usize) -> ChaosExpansion<f64> {
        ChaosExpansion::constant(dim, 1.0)
    }

    #[test]
    fn wick_examples() {
        let f = h(&[2]).add(&h(&[1]).scale(-0.5)).unwrap();
        assert_eq!(wick_chaos(&f, &one(1)).unwrap(), f);
        assert_eq!(wick_chaos(&h(&[1]), &h(&[1])).unwrap(), h(&[2]));
        let p = wick_chaos(&h(&[1]).scale(2.0), &h(&[2]).scale(3.0)).unwrap();
        assert_eq!(p, h(&[3]).scale(6.0));
        assert!(wick_chaos(&h(&[1]), &h(&[1, 0])).is_err());
    }

    #[test]
    fn pointwise_examples() {
        assert_eq!(pointwise_chaos(&h(&[1]), &h(&[1])).unwrap(), h(&[2]).add(&one(1)).unwrap());
        let f = h(&[2, 1]).add(&h(&[0, 3]).scale(0.3)).unwrap();
        assert_eq!(pointwise_chaos(&f, &one(2)).unwrap(), f);
        let p = pointwise_chaos(&h(&[1]), &h(&[2])).unwrap();
        assert_eq!(p, h(&[3]).add(&h(&[1]).scale(2.0)).unwrap());
        for w in [-1.7, -0.4, 0.2, 0.9, 2.3] {
            let direct = w * (w * w - 1.0);
            assert!((p.eval(&[w]).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_examples() {
        let f = h(&[1, 1]).add(&h(&[2, 0]).scale(0.5)).unwrap();
        let g = h(&[0, 2]).add(&one(2)).unwrap();
        assert_eq!(alpha_chaos(&f, &g, 1.0).unwrap(), pointwise_chaos(&f, &g).unwrap());
        for &a in &[0.1, 0.25, 0.5, 0.9] {
            let p = alpha_chaos(&h(&[1]), &h(&[1]), a).unwrap();
            let expect = h(&[2]).add(&one(1).scale(a)).unwrap();
            assert!(p.max_coeff_diff(&expect).unwrap() < 1e-14, "alpha={a}");
        }
        assert_eq!(alpha_chaos(&h(&[1]), &h(&[1]), 0.0).unwrap(), h(&[2]));
        assert!(alpha_chaos(&f, &g, 1.01).is_err());
        assert!(alpha_chaos(&f, &g, -0.01).is_err());
    }

    /// Independent route: `H_a ∘_α H_b = sum_j C(a,j) C(b,j) j! α^j H_{a+b-2j}` per axis.
    fn alpha_direct(f: &ChaosExpansion<f64>, g: &ChaosExpansion<f64>, alpha: f64) -> ChaosExpansion<f64> {
        let dim = f.dim();
        let mut terms = Vec::new();
        for (a, &ca) in f.terms() {
            for (b, &cb) in g.terms() {
                let mut partial = vec![(vec![], ca * cb)];
                for (&ak, &bk) in a.exponents().iter().zip(b.exponents()) {
                    let mut next = vec![];
                    for (idx, c) in &partial {
                        for j in 0..=ak.min(bk) {
                            let w = (binomial(ak, j) * binomial(bk, j) * factorial(j)) as f64;
                            let mut i2: Vec<u32> = idx.clone();
                            i2.push(ak + bk - 2 * j);
                            next.push((i2, c * w * alpha.powi(j as i32)));
                        }
                    }
                    partial = next;
                }
                terms.extend(partial.into_iter().map(|(i, c)| (MultiIndex::new(i), c)));
            }
        }
        ChaosExpansion::from_terms(dim, terms).unwrap()
    }

    #[test]
    fn alpha_composition_matches_direct_formula() {
        let f = h(&[3, 1]).add(&h(&[1, 0]).scale(-2.0)).unwrap().add(&one(2).scale(0.5)).unwrap();
        let g = h(&[2, 2]).scale(0.7).add(&h(&[0, 1])).unwrap();
        for &a in &[0.0, 0.05, 0.3, 0.6, 1.0] {
            let comp = alpha_chaos(&f, &g, a).unwrap();
            let direct = alpha_direct(&f, &g, a);
            assert!(comp.max_coeff_diff(&direct).unwrap() < 1e-10, "alpha={a}");
        }
    }

    #[test]
    fn holder_relation_examples() {
        let classic = HolderParams::new(2.0, 2.0, 1.0, 1.0).relation_check().unwrap();
        assert!(classic.admissible);
        for &a in &[0.1, 0.5, 1.0] {
            let rel = HolderParams::symmetric(a).relation_check().unwrap();
            assert!(rel.admissible, "alpha={a} residual={}", rel.residual);
        }
        // alpha = 0, p = q = 2: 1/(r-1) = 1 gives r = 2
        let solved = HolderParams::solve_r(2.0, 2.0, 0.0).unwrap();
        assert!((solved.r - 2.0).abs() < 1e-15);
        assert_eq!(HolderParams::new(2.0, 2.0, 2.0, 0.0).relation_check().unwrap().residual, 0.0);
        let off = HolderParams::new(2.0, 2.0, 3.0, 0.0).relation_check().unwrap();
        assert!(!off.admissible);
    }

    #[test]
    fn holder_relation_errors() {
        assert!(HolderParams::new(1.0, 2.0, 2.0, 0.5).relation_check().is_err());
        assert!(HolderParams::new(2.0, 2.0, 2.0, 1.5).relation_check().is_err());
        assert!(HolderParams::new(2.0, 2.0, 0.5, 0.5).relation_check().is_err());
        // alpha = 0 and r = 1: r - (1-α)/(1+α) vanishes
        assert!(matches!(
            HolderParams::new(2.0, 2.0, 1.0, 0.0).relation_check(),
            Err(Error::Inadmissible(_))
        ));
    }
}
