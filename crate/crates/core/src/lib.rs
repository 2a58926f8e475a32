//! Finite-dimensional Gaussian Wick calculus on `R^n` with the standard
//! Gaussian measure.
//!
//! Two exact representations are provided:
//!
//! * [`ChaosExpansion`]: sparse Hermite chaos coefficients, closed under the
//!   Wick, pointwise and alpha-products and under every diagonal operator;
//! * [`ExpCombo`]: finite combinations of stochastic exponentials, on which
//!   the same products and all Gaussian and convolution-measure integrals
//!   have closed forms.
//!
//! [`quadrature`] supplies independent numerical oracles for both.
//!
//! Every type is generic over a [`Scalar`] (`f32` or `f64`); the aliases below
//! fix `f64`, which all tolerances in the verification harness assume.

// `!(x >= 0)` guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chaos;
pub mod error;
pub mod exp_span;
pub mod linalg;
pub mod measures;
pub mod products;
pub mod quadrature;
pub mod report;
pub mod scalar;

pub use chaos::{hermite_eval, multi_indices_up_to, ChaosExpansion, MultiIndex, Point};
pub use error::{Error, Result};
pub use exp_span::{ChaosTruncation, ExpCombo, ExpTerm};
pub use measures::{char_gram, convolve_nu, wick_density_identity_check, ConvolutionMeasure, DiscreteMeasure, HermitianGram};
pub use products::{alpha_chaos, pointwise_chaos, wick_chaos, HolderParams, HolderRelation};
pub use quadrature::{gauss_hermite_grid, integrate_mu, integrate_rho, lp_norm_mu, mc_integral_rho, mehler_ou, PointFn, QuadratureGrid};
pub use report::{InequalityReport, Method, MethodTags};
pub use scalar::Scalar;

pub type Chaos = ChaosExpansion<f64>;
pub type Exp = ExpCombo<f64>;
pub type Measure = DiscreteMeasure<f64>;
pub type Convolution = ConvolutionMeasure<f64>;
pub type Grid = QuadratureGrid<f64>;
pub type Vector = Vec<f64>;

pub type Chaos32 = ChaosExpansion<f32>;
pub type Exp32 = ExpCombo<f32>;
pub type Measure32 = DiscreteMeasure<f32>;
