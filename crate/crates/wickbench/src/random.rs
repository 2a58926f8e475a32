//! Seeded generators for random sweep instances.
//!
//! Every instance is drawn from its own ChaCha8 stream so the result depends
//! only on `(seed, stream)`, not on evaluation order.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use wick_core::{Chaos, Exp, Measure, MultiIndex};

/// Coordinate bound for atoms and directions.
pub const RADIUS: f64 = 1.5;

/// The α grid `{0, 0.1, ..., 1}`.
pub fn alpha_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn alpha(rng: &mut impl Rng) -> f64 {
    *alpha_grid().choose(rng).unwrap()
}

pub fn dim(rng: &mut impl Rng, max: usize) -> usize {
    rng.random_range(1..=max)
}

/// Uniform in the cube `[-radius, radius]^n`, rejected outside the ball.
pub fn direction(rng: &mut impl Rng, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..=radius)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
            return v;
        }
    }
}

/// Up to `max_atoms` atoms in the ball; weights flat on the simplex.
pub fn measure(rng: &mut impl Rng, n: usize, max_atoms: usize) -> Measure {
    let k = rng.random_range(1..=max_atoms);
    let atoms: Vec<Vec<f64>> = (0..k).map(|_| direction(rng, n, RADIUS)).collect();
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    Measure::new(n, atoms, raw.iter().map(|w| w / total).collect()).unwrap()
}

/// Up to `max_terms` exponentials with weights in `[-1, 1]`.
pub fn exp_combo(rng: &mut impl Rng, n: usize, max_terms: usize, radius: f64) -> Exp {
    let k = rng.random_range(1..=max_terms);
    let terms: Vec<(f64, Vec<f64>)> = (0..k)
        .map(|_| (rng.random_range(-1.0..=1.0), direction(rng, n, radius)))
        .collect();
    Exp::from_terms(n, terms).unwrap()
}

/// Up to `max_terms` exponentials with weights in `(0, 1]`.
pub fn positive_exp_combo(rng: &mut impl Rng, n: usize, max_terms: usize, radius: f64) -> Exp {
    let k = rng.random_range(1..=max_terms);
    let terms: Vec<(f64, Vec<f64>)> = (0..k)
        .map(|_| (1.0 - rng.random::<f64>(), direction(rng, n, radius)))
        .collect();
    Exp::from_terms(n, terms).unwrap()
}

pub fn multi_index(rng: &mut impl Rng, n: usize, max_degree: u32) -> MultiIndex {
    let total = rng.random_range(0..=max_degree);
    let mut m = vec![0u32; n];
    for _ in 0..total {
        m[rng.random_range(0..n)] += 1;
    }
    MultiIndex::new(m)
}

/// Up to `max_terms` Hermite terms of degree `<= max_degree`, coefficients in `[-1, 1]`.
pub fn chaos(rng: &mut impl Rng, n: usize, max_degree: u32, max_terms: usize) -> Chaos {
    let k = rng.random_range(1..=max_terms);
    let terms: Vec<(MultiIndex, f64)> = (0..k)
        .map(|_| (multi_index(rng, n, max_degree), rng.random_range(-1.0..=1.0)))
        .collect();
    Chaos::from_terms(n, terms).unwrap()
}

/// First-chaos expansion `sum_k c_k H_{e_k}`.
pub fn first_chaos(rng: &mut impl Rng, n: usize) -> Chaos {
    Chaos::from_terms(n, (0..n).map(|k| (MultiIndex::unit(n, k), rng.random_range(-1.0..=1.0)))).unwrap()
}
