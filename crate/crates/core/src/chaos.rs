//! Tensorized probabilists' Hermite basis on `R^n` and the diagonal operator
//! calculus on finite chaos expansions.
//!
//! A [`ChaosExpansion`] stores `f = sum_m c_m H_m` sparsely, keyed by
//! [`MultiIndex`]. The `n`-th Wiener chaos is the span of `H_m` with `|m| = n`,
//! so every diagonal operator (second quantization, the number operator, the
//! Ornstein-Uhlenbeck semigroup) acts by scaling coefficients according to the
//! degree of their index.

use std::collections::BTreeMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::scalar::{factorial, Scalar};

/// Exponent vector of a tensorized Hermite basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit index `e_k`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|m|`, the chaos order of `H_m`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `m! = prod_k m_k!`, exact.
    /// Exact `m!`; overflows `u128` once an exponent exceeds 34.
    pub fn factorial(&self) -> u128 {
        self.0.iter().map(|&k| factorial(k)).product()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `m - e_k`, or `None` when `m_k = 0`.
    pub fn decrement(&self, k: usize) -> Option<MultiIndex> {
        let mut e = self.0.clone();
        e[k] = e[k].checked_sub(1)?;
        Some(MultiIndex(e))
    }

    /// `y^m = prod_k y_k^{m_k}`.
    pub fn monomial<T: Scalar>(&self, y: &[T]) -> T {
        self.0
            .iter()
            .zip(y)
            .fold(T::one(), |acc, (&k, &yk)| acc * yk.powi(k as i32))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Every multi-index of length `dim` with `|m| <= max_degree`, graded by degree.
pub fn multi_indices_up_to(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut current = vec![0u32; dim];
        fill_degree(dim, 0, d, &mut current, &mut out);
        if dim == 0 {
            break;
        }
    }
    out
}

fn fill_degree(dim: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos + 1 >= dim {
        if dim > 0 {
            cur[dim - 1] = left;
        } else if left != 0 {
            return;
        }
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill_degree(dim, pos + 1, left - k, cur, out);
    }
    cur[pos] = 0;
}

/// Evaluation point `w` in `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<T>(pub Vec<T>);

impl<T> Point<T> {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl<T> Deref for Point<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> From<Vec<T>> for Point<T> {
    fn from(v: Vec<T>) -> Self {
        Point(v)
    }
}

/// `H_0(x), ..., H_{max}(x)` via `H_{j+1} = x H_j - j H_{j-1}`.
pub fn hermite_table<T: Scalar>(max: u32, x: T) -> Vec<T> {
    let mut h = Vec::with_capacity(max as usize + 1);
    h.push(T::one());
    if max >= 1 {
        h.push(x);
    }
    for j in 1..max as usize {
        let next = x * h[j] - T::from_usize(j).unwrap() * h[j - 1];
        h.push(next);
    }
    h
}

/// One-dimensional probabilists' Hermite polynomial `H_k(x)`.
pub fn hermite_1d<T: Scalar>(k: u32, x: T) -> T {
    hermite_table(k, x)[k as usize]
}

/// `H_m(w) = prod_k H_{m_k}(w_k)`.
pub fn hermite_eval<T: Scalar>(m: &MultiIndex, w: &[T]) -> Result<T> {
    check_dim(m.dim(), w.len())?;
    Ok(m
        .exponents()
        .iter()
        .zip(w)
        .fold(T::one(), |acc, (&k, &x)| acc * hermite_1d(k, x)))
}

/// Finite Hermite chaos expansion `f = sum_m c_m H_m` on `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChaosRepr<T>", into = "ChaosRepr<T>")]
#[serde(bound = "T: Scalar")]
pub struct ChaosExpansion<T> {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChaosTerm<T> {
    m: Vec<u32>,
    c: T,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChaosRepr<T> {
    dim: usize,
    terms: Vec<ChaosTerm<T>>,
}

impl<T: Scalar> TryFrom<ChaosRepr<T>> for ChaosExpansion<T> {
    type Error = Error;
    fn try_from(r: ChaosRepr<T>) -> Result<Self> {
        ChaosExpansion::from_terms(r.dim, r.terms.into_iter().map(|t| (MultiIndex(t.m), t.c)))
    }
}

impl<T: Scalar> From<ChaosExpansion<T>> for ChaosRepr<T> {
    fn from(f: ChaosExpansion<T>) -> Self {
        ChaosRepr {
            dim: f.dim,
            terms: f
                .coeffs
                .into_iter()
                .map(|(m, c)| ChaosTerm { m: m.0, c })
                .collect(),
        }
    }
}

impl<T: Scalar> ChaosExpansion<T> {
    pub fn zero(dim: usize) -> Self {
        ChaosExpansion {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs.insert(MultiIndex::zeros(dim), c);
        f.normalize();
        f
    }

    /// The basis element `H_m` itself.
    pub fn hermite(m: MultiIndex) -> Self {
        let dim = m.dim();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(m, T::one());
        ChaosExpansion { dim, coeffs }
    }

    /// Builds an expansion from `(index, coefficient)` pairs; repeated indices
    /// are summed.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, T)>,
    {
        let mut f = Self::zero(dim);
        for (m, c) in terms {
            check_dim(dim, m.dim())?;
            if !c.is_finite() {
                return Err(Error::Invalid(format!("non-finite coefficient for {:?}", m.0)));
            }
            f.accumulate(m, c);
        }
        f.normalize();
        Ok(f)
    }

    /// The monomial `w^m` rewritten in the Hermite basis, using
    /// `x^k = sum_j k! / (j! (k-2j)! 2^j) H_{k-2j}(x)` on each axis.
    pub fn monomial(m: &MultiIndex) -> Self {
        let dim = m.dim();
        let mut f = Self::constant(dim, T::one());
        for (axis, &k) in m.exponents().iter().enumerate() {
            let mut axis_terms = Vec::new();
            for j in 0..=k / 2 {
                let num = factorial(k) as f64;
                let den = (factorial(j) * factorial(k - 2 * j)) as f64 * 2f64.powi(j as i32);
                let mut e = vec![0; dim];
                e[axis] = k - 2 * j;
                axis_terms.push((MultiIndex(e), T::lit(num / den)));
            }
            let mut next = Self::zero(dim);
            for (a, ca) in &f.coeffs {
                for (b, cb) in &axis_terms {
                    next.accumulate(a.add_unchecked(b), *ca * *cb);
                }
            }
            next.normalize();
            f = next;
        }
        f
    }

    pub(crate) fn accumulate(&mut self, m: MultiIndex, c: T) {
        *self.coeffs.entry(m).or_insert_with(T::zero) += c;
    }

    /// Drops terms whose contribution `|c| sqrt(m!)` to the `L^2(mu)` norm is
    /// below the representation epsilon.
    pub(crate) fn normalize(&mut self) {
        self.coeffs
            .retain(|m, c| c.abs() * fact::<T>(m).sqrt() >= T::REPR_EPS);
    }

    fn map_coeffs(&self, mut f: impl FnMut(&MultiIndex, T) -> T) -> Self {
        let mut out = ChaosExpansion {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(m, &c)| (m.clone(), f(m, c))).collect(),
        };
        out.normalize();
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, m: &MultiIndex) -> T {
        self.coeffs.get(m).copied().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        self.coeff(&MultiIndex::zeros(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|m|` carrying a nonzero coefficient; zero for the zero expansion.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            out.accumulate(m.clone(), c);
        }
        out.normalize();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Self {
        self.map_coeffs(|_, c| c * s)
    }

    /// Maximum absolute coefficient difference over the union of supports.
    pub fn max_coeff_diff(&self, other: &Self) -> Result<T> {
        check_dim(self.dim, other.dim)?;
        let mut worst = T::zero();
        for m in self.coeffs.keys().chain(other.coeffs.keys()) {
            worst = worst.max((self.coeff(m) - other.coeff(m)).abs());
        }
        Ok(worst)
    }

    /// `sum_m c_m H_m(w)`.
    pub fn eval(&self, w: &[T]) -> Result<T> {
        check_dim(self.dim, w.len())?;
        let mut max_per_axis = vec![0u32; self.dim];
        for m in self.coeffs.keys() {
            for (mx, &k) in max_per_axis.iter_mut().zip(m.exponents()) {
                *mx = (*mx).max(k);
            }
        }
        let tables: Vec<Vec<T>> = max_per_axis
            .iter()
            .zip(w)
            .map(|(&mx, &x)| hermite_table(mx, x))
            .collect();
        Ok(self.coeffs.iter().fold(T::zero(), |acc, (m, &c)| {
            let basis = m
                .exponents()
                .iter()
                .zip(&tables)
                .fold(T::one(), |p, (&k, tab)| p * tab[k as usize]);
            acc + c * basis
        }))
    }

    /// `<f, g>_{L^2(mu)} = sum_m m! c_m d_m`.
    pub fn l2_inner(&self, other: &Self) -> Result<T> {
        check_dim(self.dim, other.dim)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small.coeffs.iter().fold(T::zero(), |acc, (m, &c)| match large.coeffs.get(m) {
            Some(&d) => acc + fact::<T>(m) * c * d,
            None => acc,
        }))
    }

    pub fn l2_norm(&self) -> T {
        self.l2_norm_sq().sqrt()
    }

    pub fn l2_norm_sq(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, (m, &c)| acc + fact::<T>(m) * c * c)
    }

    /// `int |Df|^2 dmu = sum_m |m| m! c_m^2`.
    pub fn dirichlet_energy(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (m, &c)| {
            acc + T::from_u32(m.degree()).unwrap() * fact::<T>(m) * c * c
        })
    }

    /// Squared `G_lambda` norm `sum_m m! lambda^{2|m|} c_m^2`.
    pub fn g_lambda_norm_sq(&self, lambda: T) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (m, &c)| {
            acc + fact::<T>(m) * lambda.powi(2 * m.degree() as i32) * c * c
        })
    }

    /// Partial derivatives `(d_1 f, ..., d_n f)` using `d_k H_m = m_k H_{m - e_k}`.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim)
            .map(|k| {
                let mut dk = Self::zero(self.dim);
                for (m, &c) in &self.coeffs {
                    if let Some(lower) = m.decrement(k) {
                        dk.accumulate(lower, T::from_u32(m.exponents()[k]).unwrap() * c);
                    }
                }
                dk.normalize();
                dk
            })
            .collect()
    }

    /// Second quantization `Gamma(lambda)`: `c_m -> lambda^{|m|} c_m`.
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
        let mut out = self.gamma_raw(lambda);
        out.normalize();
        out
    }

    /// `Gamma(lambda)` without dropping small coefficients, for intermediate
    /// steps that are later rescaled by `Gamma(1/lambda)`.
    pub(crate) fn gamma_raw(&self, lambda: T) -> Self {
        ChaosExpansion {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, &c)| (m.clone(), c * lambda.powi(m.degree() as i32)))
                .collect(),
        }
    }

    /// Ornstein-Uhlenbeck semigroup `P_tau = Gamma(e^{-tau})`.
    pub fn ou(&self, tau: T) -> Result<Self> {
        if !(tau >= T::zero()) {
            return Err(Error::Negative {
                name: "tau",
                value: tau.as_f64(),
            });
        }
        Ok(self.gamma_unchecked((-tau).exp()))
    }

    /// Number operator `N`: `c_m -> |m| c_m`.
    pub fn number_operator(&self) -> Self {
        self.map_coeffs(|m, c| c * T::from_u32(m.degree()).unwrap())
    }
}

#[inline]
/// `m!` in floating point; no overflow for exponents past the `u128` range.
pub(crate) fn fact<T: Scalar>(m: &MultiIndex) -> T {
    m.0.iter()
        .flat_map(|&k| 2..=k)
        .fold(T::one(), |acc, i| acc * T::from_u32(i).unwrap())
}
