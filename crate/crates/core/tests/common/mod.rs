#![allow(dead_code)]

use proptest::prelude::*;
use wick_core::{Chaos, Exp, Measure, MultiIndex};

pub fn vector(dim: usize, bound: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-bound..bound, dim)
}

/// Chaos expansion on `R^dim` with per-axis exponents `<= max_axis`.
pub fn chaos(dim: usize, max_axis: u32, max_terms: usize) -> impl Strategy<Value = Chaos> {
    prop::collection::vec((prop::collection::vec(0..=max_axis, dim), -1.0..1.0f64), 1..=max_terms)
        .prop_map(move |terms| Chaos::from_terms(dim, terms.into_iter().map(|(m, c)| (MultiIndex::new(m), c))).unwrap())
}

/// Uniform-in-cube draw rescaled into the closed ball of radius `radius`.
pub fn ball(dim: usize, radius: f64) -> impl Strategy<Value = Vec<f64>> {
    vector(dim, radius).prop_map(move |v| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > radius { v.iter().map(|x| x * radius / n).collect() } else { v }
    })
}

pub fn ball_exp_combo(dim: usize, radius: f64, max_terms: usize) -> impl Strategy<Value = Exp> {
    prop::collection::vec((-1.0..1.0f64, ball(dim, radius)), 1..=max_terms)
        .prop_map(move |terms| Exp::from_terms(dim, terms).unwrap())
}

pub fn exp_combo(dim: usize, bound: f64, max_terms: usize) -> impl Strategy<Value = Exp> {
    prop::collection::vec((-1.0..1.0f64, vector(dim, bound)), 1..=max_terms)
        .prop_map(move |terms| Exp::from_terms(dim, terms).unwrap())
}

pub fn positive_exp_combo(dim: usize, bound: f64, max_terms: usize) -> impl Strategy<Value = Exp> {
    prop::collection::vec((0.05..1.0f64, vector(dim, bound)), 1..=max_terms)
        .prop_map(move |terms| Exp::from_terms(dim, terms).unwrap())
}

pub fn measure(dim: usize, bound: f64, max_atoms: usize) -> impl Strategy<Value = Measure> {
    prop::collection::vec((0.01..1.0f64, vector(dim, bound)), 1..=max_atoms).prop_map(move |atoms| {
        let total: f64 = atoms.iter().map(|a| a.0).sum();
        let (w, y): (Vec<f64>, Vec<Vec<f64>>) = atoms.into_iter().map(|(w, y)| (w / total, y)).unzip();
        Measure::new(dim, y, w).unwrap()
    })
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
