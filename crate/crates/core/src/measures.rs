//! Finitely supported measures `nu`, the convolution measures `rho = mu * nu`
//! with the standard Gaussian `mu`, and their closed-form densities.
//!
//! For `nu = sum_i p_i delta_{y_i}` the density of `rho` against `mu` is the
//! positive exponential combination `xi = sum_i p_i E(y_i)`, and
//! `int E(h) d rho = sum_i p_i e^{<y_i, h>}` because
//! `E(h)(w + y) = E(h)(w) e^{<y, h>}`.

use num_complex::Complex;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chaos::{ChaosExpansion, Point};
use crate::error::{check_dim, Error, Result};
use crate::exp_span::ExpCombo;
use crate::linalg::{hermitian_eigenvalues, min_hermitian_eigenvalue};
use crate::report::{InequalityReport, MethodTags};
use crate::scalar::{dot, norm_sq, Scalar};

/// `nu = sum_i p_i delta_{y_i}` on `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr<T>", into = "MeasureRepr<T>")]
#[serde(bound = "T: Scalar")]
pub struct DiscreteMeasure<T> {
    dim: usize,
    atoms: Vec<Vec<T>>,
    weights: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
struct MeasureRepr<T> {
    dim: usize,
    atoms: Vec<Vec<T>>,
    weights: Vec<T>,
}

impl<T: Scalar> TryFrom<MeasureRepr<T>> for DiscreteMeasure<T> {
    type Error = Error;
    fn try_from(r: MeasureRepr<T>) -> Result<Self> {
        DiscreteMeasure::new(r.dim, r.atoms, r.weights)
    }
}

impl<T: Scalar> From<DiscreteMeasure<T>> for MeasureRepr<T> {
    fn from(m: DiscreteMeasure<T>) -> Self {
        MeasureRepr {
            dim: m.dim,
            atoms: m.atoms,
            weights: m.weights,
        }
    }
}

impl<T: Scalar> DiscreteMeasure<T> {
    pub fn new(dim: usize, atoms: Vec<Vec<T>>, weights: Vec<T>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        for a in &atoms {
            check_dim(dim, a.len())?;
            if a.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMeasure("non-finite atom".into()));
            }
        }
        if weights.iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidMeasure("weights must be finite and nonnegative".into()));
        }
        let total = weights.iter().fold(T::zero(), |a, w| a + *w);
        if (total - T::one()).abs() > T::MASS_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { dim, atoms, weights })
    }

    pub fn dirac(atom: Vec<T>) -> Self {
        DiscreteMeasure {
            dim: atom.len(),
            atoms: vec![atom],
            weights: vec![T::one()],
        }
    }

    /// Uniform weights on the given atoms, e.g. an empirical measure of samples.
    pub fn uniform(dim: usize, atoms: Vec<Vec<T>>) -> Result<Self> {
        let n = atoms.len();
        if n == 0 {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let w = T::one() / T::from_usize(n).unwrap();
        DiscreteMeasure::new(dim, atoms, vec![w; n])
    }

    pub fn from_samples(dim: usize, samples: &[Point<T>]) -> Result<Self> {
        Self::uniform(dim, samples.iter().map(|p| p.0.clone()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Vec<T>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[T], T)> {
        self.atoms.iter().map(Vec::as_slice).zip(self.weights.iter().copied())
    }

    pub fn mean(&self) -> Vec<T> {
        let mut m = vec![T::zero(); self.dim];
        for (y, p) in self.iter() {
            for (mk, yk) in m.iter_mut().zip(y) {
                *mk += p * *yk;
            }
        }
        m
    }

    /// `int e^{<y, h>} d nu(y)`, the Laplace transform at `h`.
    pub fn laplace(&self, h: &[T]) -> T {
        self.iter().fold(T::zero(), |acc, (y, p)| acc + p * dot(y, h).exp())
    }

    /// `nu_1 * nu_2` with atoms `y_i + z_j` and weights `p_i q_j`; atoms closer
    /// than the merge tolerance are combined.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut atoms: Vec<Vec<T>> = Vec::new();
        let mut weights: Vec<T> = Vec::new();
        for (y, p) in self.iter() {
            for (z, q) in other.iter() {
                let s: Vec<T> = y.iter().zip(z).map(|(a, b)| *a + *b).collect();
                match atoms
                    .iter()
                    .position(|a| a.iter().zip(&s).all(|(u, v)| (*u - *v).abs() <= T::MERGE_TOL))
                {
                    Some(i) => weights[i] += p * q,
                    None => {
                        atoms.push(s);
                        weights.push(p * q);
                    }
                }
            }
        }
        Ok(DiscreteMeasure {
            dim: self.dim,
            atoms,
            weights,
        })
    }

    /// `int exp(|y|^2 / (1 + alpha)) d nu(y)`; finite for every discrete `nu`.
    pub fn integrability_functional(&self, alpha: T) -> Result<T> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha.as_f64(),
                range: "(0, 1]",
            });
        }
        Ok(self
            .iter()
            .fold(T::zero(), |acc, (y, p)| acc + p * (norm_sq(y) / (T::one() + alpha)).exp()))
    }
}

/// Gram matrix `G_{jk} = int e^{i <y, h_j - h_k>} d nu(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianGram<T> {
    size: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> HermitianGram<T> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, j: usize, k: usize) -> Complex<T> {
        self.entries[j * self.size + k]
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.entries.chunks(self.size.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.rows())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.rows())
    }

    /// Largest `|G_{kj} - conj(G_{jk})|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for j in 0..self.size {
            for k in 0..self.size {
                worst = worst.max((self.get(k, j) - self.get(j, k).conj()).norm());
            }
        }
        worst
    }
}

/// Characteristic-function Gram matrix of `nu` at the directions `hs`.
pub fn char_gram<T: Scalar>(nu: &DiscreteMeasure<T>, hs: &[Vec<T>]) -> Result<HermitianGram<T>> {
    for h in hs {
        check_dim(nu.dim(), h.len())?;
    }
    let n = hs.len();
    let mut entries = vec![Complex::new(T::zero(), T::zero()); n * n];
    for j in 0..n {
        for k in j..n {
            let diff: Vec<T> = hs[j].iter().zip(&hs[k]).map(|(a, b)| *a - *b).collect();
            let mut acc = Complex::new(T::zero(), T::zero());
            for (y, p) in nu.iter() {
                let phase = dot(y, &diff);
                acc += Complex::new(p * phase.cos(), p * phase.sin());
            }
            if j == k {
                acc.im = T::zero();
            }
            entries[j * n + k] = acc;
            entries[k * n + j] = acc.conj();
        }
    }
    Ok(HermitianGram { size: n, entries })
}

/// Value and bound of `||xi||_{G_lambda}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GLambdaNorm<T> {
    /// `||xi||^2_{G_lambda} = sum_{i,j} p_i p_j e^{lambda^2 <y_i, y_j>}`.
    pub norm_sq: T,
    /// `int e^{lambda^2 |y|^2 / 2} d nu`, an upper bound on `||xi||_{G_lambda}`.
    pub bound: T,
    /// `lambda < 1`, outside the range where `G_lambda` is nested in `L^2`.
    pub below_one: bool,
}

/// `rho = mu * nu` with `mu` the standard Gaussian on `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound = "T: Scalar")]
pub struct ConvolutionMeasure<T> {
    nu: DiscreteMeasure<T>,
}

impl<T: Scalar> ConvolutionMeasure<T> {
    pub fn new(nu: DiscreteMeasure<T>) -> Self {
        ConvolutionMeasure { nu }
    }

    /// `rho = mu` itself (`nu = delta_0`).
    pub fn gaussian(dim: usize) -> Self {
        Self::new(DiscreteMeasure::dirac(vec![T::zero(); dim]))
    }

    pub fn nu(&self) -> &DiscreteMeasure<T> {
        &self.nu
    }

    pub fn dim(&self) -> usize {
        self.nu.dim
    }

    /// `xi = d rho / d mu = sum_i p_i E(y_i)`.
    pub fn density_xi(&self) -> ExpCombo<T> {
        ExpCombo::from_terms(self.dim(), self.nu.iter().map(|(y, p)| (p, y.to_vec())))
            .expect("atoms share the measure dimension")
    }

    /// `Gamma(1/sqrt(alpha)) xi = sum_i p_i E(y_i / sqrt(alpha))`.
    pub fn gamma_xi(&self, alpha: T) -> Result<ExpCombo<T>> {
        if !(alpha > T::zero()) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha.as_f64(),
                range: "(0, inf)",
            });
        }
        let s = T::one() / alpha.sqrt();
        Ok(ExpCombo::from_terms(
            self.dim(),
            self.nu.iter().map(|(y, p)| (p, y.iter().map(|x| *x * s).collect())),
        )
        .expect("atoms share the measure dimension"))
    }

    pub fn g_lambda_norm(&self, lambda: T) -> GLambdaNorm<T> {
        let l2 = lambda * lambda;
        let mut total = T::zero();
        for (y, p) in self.nu.iter() {
            for (z, q) in self.nu.iter() {
                total += p * q * (l2 * dot(y, z)).exp();
            }
        }
        let half = T::lit(0.5);
        let bound = self
            .nu
            .iter()
            .fold(T::zero(), |acc, (y, p)| acc + p * (half * l2 * norm_sq(y)).exp());
        GLambdaNorm {
            norm_sq: total,
            bound,
            below_one: lambda < T::one(),
        }
    }

    /// `int f d rho = sum_j c_j sum_i p_i e^{<y_i, h_j>}`.
    pub fn integral_exp(&self, f: &ExpCombo<T>) -> Result<T> {
        check_dim(self.dim(), f.dim())?;
        Ok(f.terms()
            .iter()
            .fold(T::zero(), |acc, t| acc + t.coef * self.nu.laplace(&t.h)))
    }

    /// `int f d rho = sum_m c_m sum_i p_i y_i^m`, from `E_mu[H_m(w + y)] = y^m`.
    pub fn integral_chaos(&self, f: &ChaosExpansion<T>) -> Result<T> {
        check_dim(self.dim(), f.dim())?;
        Ok(f.terms().fold(T::zero(), |acc, (m, &c)| {
            acc + c * self.nu.iter().fold(T::zero(), |s, (y, p)| s + p * m.monomial(y))
        }))
    }

    /// `count` draws of `w = g + y`, `g ~ mu`, `y ~ nu`, from stream 0 of `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Point<T>> {
        self.sample_stream(seed, 0, count)
    }

    /// Draws from the ChaCha stream `(seed, stream)`; distinct streams are
    /// independent and each is deterministic.
    pub fn sample_stream(&self, seed: u64, stream: u64, count: usize) -> Vec<Point<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let weights: Vec<f64> = self.nu.weights.iter().map(|w| w.as_f64()).collect();
        let picker = WeightedIndex::new(&weights).expect("weights validated at construction");
        (0..count)
            .map(|_| {
                let y = &self.nu.atoms[picker.sample(&mut rng)];
                let w = y
                    .iter()
                    .map(|&yk| {
                        let g: f64 = StandardNormal.sample(&mut rng);
                        yk + T::lit(g)
                    })
                    .collect();
                Point(w)
            })
            .collect()
    }
}

/// `nu_1 * nu_2`.
pub fn convolve_nu<T: Scalar>(nu1: &DiscreteMeasure<T>, nu2: &DiscreteMeasure<T>) -> Result<DiscreteMeasure<T>> {
    nu1.convolve(nu2)
}

pub const WICK_DENSITY_TOL: f64 = 1e-12;

/// Compares the density of `mu * nu_1 * nu_2` with `xi_1 ⋄ xi_2` term by term.
///
/// `lhs` is the largest weight discrepancy after pairing directions, `rhs = 0`.
pub fn wick_density_identity_check<T: Scalar>(
    nu1: &DiscreteMeasure<T>,
    nu2: &DiscreteMeasure<T>,
) -> Result<InequalityReport> {
    let direct = ConvolutionMeasure::new(nu1.convolve(nu2)?).density_xi();
    let xi1 = ConvolutionMeasure::new(nu1.clone()).density_xi();
    let xi2 = ConvolutionMeasure::new(nu2.clone()).density_xi();
    let wick = xi1.wick(&xi2)?;
    let discrepancy = direct
        .max_weight_diff(&wick, T::lit(WICK_DENSITY_TOL))
        .map(Scalar::as_f64)
        .unwrap_or(f64::INFINITY);
    let params = json!({ "nu1": nu1, "nu2": nu2 });
    Ok(InequalityReport::new(
        "wick_density_identity",
        params,
        discrepancy,
        0.0,
        WICK_DENSITY_TOL,
        MethodTags::EXACT,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::MultiIndex;

    fn sym() -> DiscreteMeasure<f64> {
        DiscreteMeasure::new(1, vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(DiscreteMeasure::new(1, vec![vec![1.0]], vec![0.9]).is_err());
        assert!(DiscreteMeasure::new(1, vec![vec![1.0], vec![2.0]], vec![1.5, -0.5]).is_err());
        assert!(DiscreteMeasure::new(2, vec![vec![1.0]], vec![1.0]).is_err());
        assert!(DiscreteMeasure::<f64>::new(1, vec![], vec![]).is_err());
        let json = r#"{"dim":1,"atoms":[[1.0],[-1.0]],"weights":[0.5,0.5]}"#;
        let m: DiscreteMeasure<f64> = serde_json::from_str(json).unwrap();
        assert_eq!(m, sym());
        assert_eq!(serde_json::to_string(&m).unwrap(), json);
    }

    #[test]
    fn density_examples() {
        let xi0 = ConvolutionMeasure::<f64>::gaussian(2).density_xi();
        assert_eq!(xi0, ExpCombo::constant(2, 1.0));
        let xa = ConvolutionMeasure::new(DiscreteMeasure::dirac(vec![0.3, -1.0])).density_xi();
        assert_eq!(xa, ExpCombo::exponential(vec![0.3, -1.0]));
        let xs = ConvolutionMeasure::new(sym()).density_xi();
        assert!((xs.eval(&[0.0]).unwrap() - 0.606_530_659_712_633_4).abs() < 1e-15);
        assert!(xs.has_positive_weights());
        assert_eq!(xs.mu_mass(), 1.0);
    }

    #[test]
    fn gamma_xi_examples() {
        let rho = ConvolutionMeasure::new(sym());
        assert_eq!(rho.gamma_xi(1.0).unwrap(), rho.density_xi());
        let a = ConvolutionMeasure::new(DiscreteMeasure::dirac(vec![0.7]));
        assert_eq!(a.gamma_xi(0.25).unwrap(), ExpCombo::exponential(vec![1.4]));
        let g = rho.gamma_xi(0.3).unwrap();
        assert!(g.has_positive_weights());
        let via_gamma = rho.density_xi().gamma(1.0 / 0.3f64.sqrt()).unwrap();
        assert!(g.approx_eq(&via_gamma, 1e-14));
        assert!(rho.gamma_xi(0.0).is_err());
    }

    #[test]
    fn g_lambda_examples() {
        let n0 = ConvolutionMeasure::<f64>::gaussian(1).g_lambda_norm(1.5);
        assert_eq!((n0.norm_sq, n0.bound), (1.0, 1.0));
        let rho = ConvolutionMeasure::new(sym());
        for &l in &[1.0, 1.3, 2.0] {
            let n = rho.g_lambda_norm(l);
            assert!((n.norm_sq - (l * l).cosh()).abs() < 1e-13);
            assert!(n.norm_sq.sqrt() <= n.bound);
        }
        let n1 = rho.g_lambda_norm(1.0);
        assert!((n1.norm_sq - 1.543_080_634_815_243_7).abs() < 1e-14);
        assert!((n1.bound - 0.5f64.exp()).abs() < 1e-15);
        assert!(rho.g_lambda_norm(0.5).below_one);
    }

    #[test]
    fn integrability_examples() {
        assert_eq!(DiscreteMeasure::dirac(vec![0.0]).integrability_functional(0.5).unwrap(), 1.0);
        let d1: f64 = DiscreteMeasure::dirac(vec![1.0]).integrability_functional(1.0).unwrap();
        assert!((d1 - 1.648_721_270_700_128).abs() < 1e-14);
        let s = sym().integrability_functional(0.5).unwrap();
        assert!((s - (2.0f64 / 3.0).exp()).abs() < 1e-14);
        assert!(sym().integrability_functional(0.0).is_err());
    }

    #[test]
    fn rho_integral_exp_examples() {
        let mu = ConvolutionMeasure::<f64>::gaussian(2);
        assert!((mu.integral_exp(&ExpCombo::exponential(vec![0.4, -2.0])).unwrap() - 1.0).abs() < 1e-15);
        let rho = ConvolutionMeasure::new(sym());
        let v = rho.integral_exp(&ExpCombo::exponential(vec![2.0])).unwrap();
        assert!((v - 2f64.cosh()).abs() < 1e-14);
        let a = ConvolutionMeasure::new(DiscreteMeasure::dirac(vec![0.5, 1.0]));
        let v = a.integral_exp(&ExpCombo::exponential(vec![2.0, -1.0])).unwrap();
        assert!((v - 0f64.exp()).abs() < 1e-15);
        assert!(rho.integral_exp(&ExpCombo::exponential(vec![1.0, 1.0])).is_err());
    }

    #[test]
    fn rho_integral_chaos_examples() {
        let rho = ConvolutionMeasure::new(sym());
        assert_eq!(rho.integral_chaos(&ChaosExpansion::constant(1, 3.5)).unwrap(), 3.5);
        let h2 = ChaosExpansion::hermite(MultiIndex::new(vec![2]));
        assert_eq!(rho.integral_chaos(&h2).unwrap(), 1.0);
        let h1 = ChaosExpansion::hermite(MultiIndex::new(vec![1]));
        assert_eq!(rho.integral_chaos(&h1).unwrap(), 0.0);
    }

    #[test]
    fn char_gram_examples() {
        let g = char_gram(&DiscreteMeasure::dirac(vec![0.0]), &[vec![0.0], vec![1.0], vec![-0.5]]).unwrap();
        let ev = g.eigenvalues();
        assert!((ev[2] - 3.0).abs() < 1e-13 && ev[0].abs() < 1e-13 && ev[1].abs() < 1e-13);
        let g = char_gram(&sym(), &[vec![0.0], vec![1.0]]).unwrap();
        assert!((g.get(0, 1).re - 1f64.cos()).abs() < 1e-15 && g.get(0, 1).im.abs() < 1e-15);
        let ev = g.eigenvalues();
        assert!((ev[0] - (1.0 - 1f64.cos())).abs() < 1e-14);
        assert!((ev[1] - (1.0 + 1f64.cos())).abs() < 1e-14);
        let single = char_gram(&sym(), &[vec![0.77]]).unwrap();
        assert_eq!(single.get(0, 0), Complex::new(1.0, 0.0));
        assert_eq!(g.hermitian_defect(), 0.0);
        assert!(char_gram(&sym(), &[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn convolve_examples() {
        let d0 = DiscreteMeasure::dirac(vec![0.0]);
        assert_eq!(sym().convolve(&d0).unwrap(), sym());
        let shifted = sym().convolve(&DiscreteMeasure::dirac(vec![1.0])).unwrap();
        assert_eq!(shifted, DiscreteMeasure::new(1, vec![vec![2.0], vec![0.0]], vec![0.5, 0.5]).unwrap());
        let sq = sym().convolve(&sym()).unwrap();
        assert_eq!(
            sq,
            DiscreteMeasure::new(1, vec![vec![2.0], vec![0.0], vec![-2.0]], vec![0.25, 0.5, 0.25]).unwrap()
        );
    }

    #[test]
    fn wick_density_examples() {
        let d0 = DiscreteMeasure::dirac(vec![0.0]);
        assert!(wick_density_identity_check(&d0, &d0).unwrap().pass);
        let a = DiscreteMeasure::dirac(vec![0.3, 0.1]);
        let b = DiscreteMeasure::dirac(vec![-1.0, 0.4]);
        let r = wick_density_identity_check(&a, &b).unwrap();
        assert!(r.pass && r.lhs == 0.0);
        let r = wick_density_identity_check(&sym(), &sym()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn sampling_is_deterministic_and_centered() {
        let a = ConvolutionMeasure::new(DiscreteMeasure::dirac(vec![1.5, -0.5]));
        let s1 = a.sample(7, 20_000);
        assert_eq!(s1, a.sample(7, 20_000));
        assert_ne!(s1, a.sample_stream(7, 1, 20_000));
        let n = s1.len() as f64;
        for (k, target) in [1.5, -0.5].iter().enumerate() {
            let mean = s1.iter().map(|p| p[k]).sum::<f64>() / n;
            assert!((mean - target).abs() < 3.0 / n.sqrt(), "axis {k}: {mean}");
        }
        let mu = ConvolutionMeasure::<f64>::gaussian(1).sample(11, 20_000);
        let mean = mu.iter().map(|p| p[0]).sum::<f64>() / 20_000.0;
        assert!(mean.abs() < 3.0 / 20_000f64.sqrt());
    }
}
