//! Closed-form calculus on finite linear combinations of stochastic
//! exponentials `E(h)(w) = exp(<w, h> - |h|^2 / 2)`.
//!
//! Every product used by the inequalities maps a pair of exponentials to a
//! single exponential times a scalar factor:
//!
//! | product     | `E(h) * E(k)`                 |
//! |-------------|-------------------------------|
//! | Wick        | `E(h + k)`                    |
//! | pointwise   | `E(h + k) e^{<h, k>}`         |
//! | alpha       | `E(h + k) e^{alpha <h, k>}`   |
//!
//! and Gaussian integrals reduce to `int E(h) E(k) dmu = e^{<h, k>}`, so all of
//! these are evaluated without truncation.

use serde::{Deserialize, Serialize};

use crate::chaos::{multi_indices_up_to, ChaosExpansion};
use crate::error::{check_dim, Error, Result};
use crate::scalar::{dot, norm_sq, Scalar};

/// One weighted stochastic exponential `coef * E(h)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
pub struct ExpTerm<T> {
    pub coef: T,
    pub h: Vec<T>,
}

/// `sum_j coef_j E(h_j)` on `R^dim`, with distinct directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpRepr<T>", into = "ExpRepr<T>")]
#[serde(bound = "T: Scalar")]
pub struct ExpCombo<T> {
    dim: usize,
    terms: Vec<ExpTerm<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
struct ExpRepr<T> {
    dim: usize,
    terms: Vec<ExpTerm<T>>,
}

impl<T: Scalar> TryFrom<ExpRepr<T>> for ExpCombo<T> {
    type Error = Error;
    fn try_from(r: ExpRepr<T>) -> Result<Self> {
        ExpCombo::from_terms(r.dim, r.terms.into_iter().map(|t| (t.coef, t.h)))
    }
}

impl<T: Scalar> From<ExpCombo<T>> for ExpRepr<T> {
    fn from(f: ExpCombo<T>) -> Self {
        ExpRepr {
            dim: f.dim,
            terms: f.terms,
        }
    }
}

/// Result of expanding an exponential combination into chaos coordinates.
#[derive(Clone, Debug)]
pub struct ChaosTruncation<T> {
    pub chaos: ChaosExpansion<T>,
    /// Upper bound on the `L^2(mu)` norm of the discarded tail.
    pub l2_error_bound: T,
}

impl<T: Scalar> ExpCombo<T> {
    pub fn zero(dim: usize) -> Self {
        ExpCombo {
            dim,
            terms: Vec::new(),
        }
    }

    /// The single exponential `E(h)`.
    pub fn exponential(h: Vec<T>) -> Self {
        ExpCombo {
            dim: h.len(),
            terms: vec![ExpTerm { coef: T::one(), h }],
        }
    }

    /// `c E(0)`, the constant function `c`.
    pub fn constant(dim: usize, c: T) -> Self {
        let mut f = ExpCombo::zero(dim);
        f.push(c, vec![T::zero(); dim]);
        f.prune();
        f
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Vec<T>)>,
    {
        let mut f = ExpCombo::zero(dim);
        for (c, h) in terms {
            check_dim(dim, h.len())?;
            if !c.is_finite() || h.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("non-finite exponential term".into()));
            }
            f.push(c, h);
        }
        f.prune();
        Ok(f)
    }

    /// Adds `c E(h)`, merging with an existing direction when one lies within
    /// the merge tolerance.
    fn push(&mut self, c: T, h: Vec<T>) {
        let tol = T::MERGE_TOL;
        if let Some(t) = self
            .terms
            .iter_mut()
            .find(|t| t.h.iter().zip(&h).all(|(a, b)| (*a - *b).abs() <= tol))
        {
            t.coef += c;
        } else {
            self.terms.push(ExpTerm { coef: c, h });
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|t| t.coef != T::zero());
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ExpTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every weight is strictly positive, which makes the function
    /// pointwise positive.
    pub fn has_positive_weights(&self) -> bool {
        self.terms.iter().all(|t| t.coef > T::zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.coef, t.h.clone());
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coef *= s;
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn eval(&self, w: &[T]) -> Result<T> {
        check_dim(self.dim, w.len())?;
        Ok(self.eval_unchecked(w))
    }

    pub(crate) fn eval_unchecked(&self, w: &[T]) -> T {
        let half = T::lit(0.5);
        self.terms.iter().fold(T::zero(), |acc, t| {
            acc + t.coef * (dot(w, &t.h) - half * norm_sq(&t.h)).exp()
        })
    }

    /// `int f dmu = sum_j coef_j`.
    pub fn mu_mass(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| acc + t.coef)
    }

    fn bilinear(&self, other: &Self, factor: impl Fn(T) -> T) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = ExpCombo::zero(self.dim);
        for a in &self.terms {
            for b in &other.terms {
                let s = dot(&a.h, &b.h);
                let h = a.h.iter().zip(&b.h).map(|(x, y)| *x + *y).collect();
                out.push(a.coef * b.coef * factor(s), h);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Wick product, `E(h) ⋄ E(k) = E(h + k)` extended bilinearly.
    pub fn wick(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |_| T::one())
    }

    /// Ordinary pointwise product, `E(h) E(k) = E(h + k) e^{<h, k>}`.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |s| s.exp())
    }

    /// The alpha-product `E(h) ∘_α E(k) = E(h + k) e^{α <h, k>}`. At `α = 0`
    /// this is the Wick product, at `α = 1` the pointwise product.
    pub fn alpha(&self, other: &Self, alpha: T) -> Result<Self> {
        check_unit_interval("alpha", alpha)?;
        if alpha == T::zero() {
            return self.wick(other);
        }
        self.bilinear(other, |s| (alpha * s).exp())
    }

    /// `Gamma(lambda) E(h) = E(lambda h)`.
    pub fn gamma(&self, lambda: T) -> Result<Self> {
        if !(lambda >= T::zero()) {
            return Err(Error::Negative {
                name: "lambda",
                value: lambda.as_f64(),
            });
        }
        Ok(self.gamma_unchecked(lambda))
    }

    pub(crate) fn gamma_unchecked(&self, lambda: T) -> Self {
        let mut out = ExpCombo::zero(self.dim);
        for t in &self.terms {
            out.push(t.coef, t.h.iter().map(|x| *x * lambda).collect());
        }
        out.prune();
        out
    }

    /// Partial derivatives: `d_k E(h) = h_k E(h)`.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim)
            .map(|k| {
                let mut dk = ExpCombo::zero(self.dim);
                for t in &self.terms {
                    dk.push(t.coef * t.h[k], t.h.clone());
                }
                dk.prune();
                dk
            })
            .collect()
    }

    /// `int f g dmu = sum_{j,k} a_j b_k e^{<h_j, k_k>}`.
    pub fn mu_inner(&self, other: &Self) -> Result<T> {
        check_dim(self.dim, other.dim)?;
        let mut acc = T::zero();
        for a in &self.terms {
            for b in &other.terms {
                acc += a.coef * b.coef * dot(&a.h, &b.h).exp();
            }
        }
        Ok(acc)
    }

    /// Chaos coefficients `c_m = sum_j coef_j h_j^m / m!` for `|m| <= max_degree`.
    ///
    /// The reported bound uses `||E(h) - trunc||_2^2 = sum_{k > cap} |h|^{2k} / k!`.
    pub fn to_chaos(&self, max_degree: u32) -> ChaosTruncation<T> {
        let indices = multi_indices_up_to(self.dim, max_degree);
        let terms = indices.into_iter().map(|m| {
            let inv_fact = T::one() / crate::chaos::fact::<T>(&m);
            let c = self
                .terms
                .iter()
                .fold(T::zero(), |acc, t| acc + t.coef * m.monomial(&t.h));
            (m, c * inv_fact)
        });
        let chaos = ChaosExpansion::from_terms(self.dim, terms)
            .expect("indices generated with matching dimension");
        let l2_error_bound = self.terms.iter().fold(T::zero(), |acc, t| {
            acc + t.coef.abs() * exp_series_tail(norm_sq(&t.h), max_degree).sqrt()
        });
        ChaosTruncation {
            chaos,
            l2_error_bound,
        }
    }

    /// Largest weight discrepancy after pairing directions within `tol`; `None`
    /// if some direction has no partner.
    pub fn max_weight_diff(&self, other: &Self, tol: T) -> Option<T> {
        if self.dim != other.dim {
            return None;
        }
        let mut worst = T::zero();
        let mut used = vec![false; other.terms.len()];
        for a in &self.terms {
            let hit = other.terms.iter().enumerate().find(|(i, b)| {
                !used[*i] && a.h.iter().zip(&b.h).all(|(x, y)| (*x - *y).abs() <= tol)
            });
            match hit {
                Some((i, b)) => {
                    used[i] = true;
                    worst = worst.max((a.coef - b.coef).abs());
                }
                None => worst = worst.max(a.coef.abs()),
            }
        }
        for (i, b) in other.terms.iter().enumerate() {
            if !used[i] {
                worst = worst.max(b.coef.abs());
            }
        }
        Some(worst)
    }

    /// Same directions (within `tol`) and weights equal to relative accuracy `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let scale = self
            .terms
            .iter()
            .chain(&other.terms)
            .fold(T::one(), |m, t| m.max(t.coef.abs()));
        matches!(self.max_weight_diff(other, tol), Some(d) if d <= tol * scale)
    }
}

/// `sum_{k > cap} x^k / k!` summed directly (no cancellation against `e^x`).
fn exp_series_tail<T: Scalar>(x: T, cap: u32) -> T {
    let mut term = T::one();
    for k in 1..=cap + 1 {
        term = term * x / T::from_u32(k).unwrap();
    }
    let mut sum = T::zero();
    let mut k = cap + 1;
    while term > T::zero() && term > sum * T::epsilon() {
        sum += term;
        k += 1;
        term = term * x / T::from_u32(k).unwrap();
        if k > cap + 2000 {
            break;
        }
    }
    sum
}

pub(crate) fn check_unit_interval<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: v.as_f64(),
            range: "[0, 1]",
        })
    }
}
