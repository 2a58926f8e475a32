use std::f64::consts::E;

use approx::assert_relative_eq;
use wick_core::{Chaos, Convolution, Exp, HolderParams, Measure, MultiIndex};
use wickbench::checks::{self, a_matrix, b_matrix, FunctionSpec};
use wickbench::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn e1(h: f64) -> FunctionSpec {
    FunctionSpec::Exp(Exp::exponential(vec![h]))
}

fn gauss() -> Convolution {
    Convolution::gaussian(1)
}

fn symmetric() -> Measure {
    Measure::uniform(1, vec![vec![1.0], vec![-1.0]]).unwrap()
}

fn h(k: u32) -> Chaos {
    Chaos::hermite(MultiIndex::new(vec![k]))
}

#[test]
fn beckner_deficit_closed_forms() {
    let r = checks::beckner_deficit(&e1(1.0), &gauss(), 0.5, &tol()).unwrap();
    assert_relative_eq!(r.lhs, E - 0.5f64.exp(), max_relative = 1e-14);
    assert_relative_eq!(r.rhs, 0.5 * E, max_relative = 1e-14);
    assert_relative_eq!(r.gap, 0.289580356470606, max_relative = 1e-12);

    let rho = Convolution::new(symmetric());
    let r = checks::beckner_deficit(&e1(1.0), &rho, 0.5, &tol()).unwrap();
    let c2 = 2f64.cosh();
    assert_relative_eq!(r.lhs, (E - 0.5f64.exp()) * c2, max_relative = 1e-13);
    assert_relative_eq!(r.rhs, 0.5 * E * c2, max_relative = 1e-13);
    assert!(r.pass);

    for f in [e1(0.7), FunctionSpec::Chaos(h(3).add(&h(1)).unwrap())] {
        let r = checks::beckner_deficit(&f, &rho, 1.0, &tol()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.gap), (0.0, 0.0, 0.0));
    }
}

#[test]
fn beckner_routes_agree_on_exponentials() {
    // a chaos truncation of E(h) reproduces the exp-span integrals
    let f = Exp::from_terms(1, vec![(1.0, vec![0.4]), (-0.6, vec![-0.3])]).unwrap();
    let chaos = f.to_chaos(24).chaos;
    let rho = Convolution::new(symmetric());
    for alpha in [0.0, 0.3, 1.0] {
        let a = checks::beckner_integrals(&FunctionSpec::Exp(f.clone()), &rho, alpha).unwrap();
        let b = checks::beckner_integrals(&FunctionSpec::Chaos(chaos.clone()), &rho, alpha).unwrap();
        assert_relative_eq!(a.square, b.square, max_relative = 1e-10);
        assert_relative_eq!(a.alpha_product, b.alpha_product, max_relative = 1e-10);
        assert_relative_eq!(a.energy, b.energy, max_relative = 1e-10);
    }
}

#[test]
fn left_positivity_examples() {
    let r = checks::left_positivity(&e1(1.0), &gauss(), 0.5, &tol()).unwrap();
    assert_relative_eq!(r.gap, 1.069560557758917, max_relative = 1e-12);
    for alpha in [0.0, 0.25, 0.9] {
        let r = checks::left_positivity(&FunctionSpec::Chaos(h(1)), &gauss(), alpha, &tol()).unwrap();
        assert_relative_eq!(r.rhs, 1.0);
        assert_relative_eq!(r.lhs, alpha, epsilon = 1e-15);
        assert_relative_eq!(r.gap, 1.0 - alpha, epsilon = 1e-15);
    }
    let r = checks::left_positivity(&e1(1.3), &Convolution::new(symmetric()), 1.0, &tol()).unwrap();
    assert_eq!(r.gap, 0.0);
}

#[test]
fn ab_matrix_examples() {
    let hs = vec![vec![0.0], vec![1.0]];
    assert_eq!(a_matrix(&hs, 0.0), vec![vec![0.0, 0.0], vec![0.0, 1.0]]);
    assert!(a_matrix(&hs, 1.0).iter().flatten().all(|&a| a == 0.0));
    assert!(b_matrix(&hs, &Measure::dirac(vec![0.0])).iter().flatten().all(|&b| b == 1.0));
    let rows = checks::ab_matrix(&hs, &gauss(), 0.0, &tol()).unwrap();
    assert_eq!(rows.len(), 3);
    assert_relative_eq!(rows[0].gap, 0.0, epsilon = 1e-15);
    assert!(rows.iter().all(|r| r.pass));
    // B entries are Wick-product integrals
    let rho = Convolution::new(symmetric());
    let b = b_matrix(&hs, rho.nu());
    let direct = rho
        .integral_exp(&Exp::exponential(vec![0.0]).wick(&Exp::exponential(vec![1.0])).unwrap())
        .unwrap();
    assert_relative_eq!(b[0][1], direct, max_relative = 1e-15);
    assert!(checks::ab_matrix(&hs, &rho, 1.5, &tol()).is_err());
}

#[test]
fn holder_examples() {
    for alpha in [0.0, 0.3, 1.0] {
        let r = checks::holder(&e1(1.0), &e1(1.0), HolderParams::symmetric(alpha), &tol()).unwrap();
        assert_relative_eq!(r.lhs, (1.0 + 2.0 * alpha).exp(), max_relative = 1e-13);
        assert_relative_eq!(r.rhs, (1.0 + 2.0 * alpha).exp(), max_relative = 1e-13);
        assert!(r.gap.abs() < 1e-10);
    }
    let r = checks::holder(&e1(1.0), &e1(1.0), HolderParams::new(2.0, 2.0, 1.0, 1.0), &tol()).unwrap();
    assert_relative_eq!(r.lhs, E, max_relative = 1e-14);
    assert_relative_eq!(r.rhs, E, max_relative = 1e-14);

    let r = checks::holder(&e1(1.0), &e1(-1.0), HolderParams::symmetric(0.5), &tol()).unwrap();
    assert!(r.gap > 0.1);
    assert!(checks::holder(&e1(1.0), &e1(1.0), HolderParams::new(2.0, 2.0, 3.0, 0.5), &tol()).is_err());
}

#[test]
fn lp_norms_by_every_route() {
    let single = e1(1.0);
    assert_relative_eq!(checks::lp_norm(&single, 2.0).unwrap().0, 0.5f64.exp(), max_relative = 1e-15);
    assert_relative_eq!(checks::lp_norm(&single, 3.0).unwrap().0, E, max_relative = 1e-15);
    // combination: even p exact, odd p by quadrature; compare against each other by continuity
    let combo = FunctionSpec::Exp(Exp::from_terms(1, vec![(1.0, vec![0.5]), (-0.4, vec![-0.2])]).unwrap());
    let (exact4, m4) = checks::lp_norm(&combo, 4.0).unwrap();
    assert_eq!(m4, wick_core::Method::Exact);
    let grid = wick_core::gauss_hermite_grid::<f64>(1, 30).unwrap();
    let quad4 = wick_core::lp_norm_mu(&combo, 4.0, &grid).unwrap();
    assert_relative_eq!(exact4, quad4, max_relative = 1e-12);
    let (n3, m3) = checks::lp_norm(&combo, 3.0).unwrap();
    assert_eq!(m3, wick_core::Method::Quadrature);
    assert!(n3 > 0.0);
    let chaos = FunctionSpec::Chaos(h(2).add(&h(0)).unwrap());
    let (c4, _) = checks::lp_norm(&chaos, 4.0).unwrap();
    let q4 = wick_core::lp_norm_mu(&chaos, 4.0, &grid).unwrap();
    assert_relative_eq!(c4, q4, max_relative = 1e-12);
    assert!(checks::lp_norm(&single, 0.5).is_err());
}

#[test]
fn classic_beckner_examples() {
    for alpha in [0.0, 0.2, 0.7, 1.0] {
        let r = checks::classic_beckner_coeff(&h(1), alpha, &tol()).unwrap();
        assert_relative_eq!(r.lhs, 1.0 - alpha, epsilon = 1e-15);
        assert_relative_eq!(r.rhs, 1.0 - alpha, epsilon = 1e-15);
        assert_eq!(r.gap, 0.0);
        let r = checks::classic_beckner_coeff(&h(3), alpha, &tol()).unwrap();
        assert_relative_eq!(r.lhs, 6.0 * (1.0 - alpha.powi(3)), epsilon = 1e-14);
        assert_relative_eq!(r.rhs, 18.0 * (1.0 - alpha), epsilon = 1e-14);
        let expected = 6.0 * (1.0 - alpha) * (2.0 - alpha - alpha * alpha);
        assert_relative_eq!(r.gap, expected, epsilon = 1e-14);
        let r = checks::classic_beckner_coeff(&Chaos::constant(1, 3.0), alpha, &tol()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.gap), (0.0, 0.0, 0.0));
    }
}

#[test]
fn strong_positivity_examples() {
    let a = vec![0.4, -0.3];
    let h2 = vec![1.0, 2.0];
    let rho = Convolution::new(Measure::dirac(a.clone()));
    let r = checks::strong_positivity(&rho, 0.5, &Exp::exponential(h2.clone()), &tol()).unwrap();
    let expected = ((a[0] * h2[0] + a[1] * h2[1]) / 0.5f64.sqrt()).exp();
    assert_relative_eq!(r.rhs, expected, max_relative = 1e-14);

    let r = checks::strong_positivity(&rho, 0.3, &Exp::constant(2, 1.0), &tol()).unwrap();
    assert_relative_eq!(r.rhs, 1.0, max_relative = 1e-15);

    let sym = Convolution::new(symmetric());
    let r = checks::strong_positivity(&sym, 0.25, &Exp::exponential(vec![1.0]), &tol()).unwrap();
    assert_relative_eq!(r.rhs, 2f64.cosh(), max_relative = 1e-14);

    assert!(checks::strong_positivity(&sym, 0.0, &Exp::exponential(vec![1.0]), &tol()).is_err());
    let signed = Exp::from_terms(1, vec![(1.0, vec![0.0]), (-1.0, vec![1.0])]).unwrap();
    assert!(checks::strong_positivity(&sym, 0.5, &signed, &tol()).is_err());
}

#[test]
fn covariance_examples() {
    let one = Exp::constant(1, 1.0);
    let d1 = Measure::dirac(vec![1.0]);
    let r = checks::covariance_gap(&d1, &d1, &one, &tol()).unwrap();
    assert_relative_eq!(r.gap, E - 2.0, max_relative = 1e-14);
    assert_relative_eq!(r.rhs - r.lhs, E - 2.0, max_relative = 1e-12);

    let nu = Measure::new(1, vec![vec![0.3], vec![-1.2]], vec![0.25, 0.75]).unwrap();
    let r = checks::covariance_gap(&nu, &Measure::dirac(vec![0.0]), &Exp::exponential(vec![0.8]), &tol()).unwrap();
    assert_eq!(r.gap, 0.0);

    let sym = symmetric();
    let r = checks::covariance_gap(&sym, &sym, &one, &tol()).unwrap();
    assert_relative_eq!(r.gap, 1f64.cosh() - 1.0, max_relative = 1e-14);
}

#[test]
fn char_gram_and_identity_examples() {
    let sym = symmetric();
    let r = checks::char_gram_check(&sym, &[vec![0.0], vec![1.0]], &tol()).unwrap();
    assert_relative_eq!(r.rhs, 1.0 - 1f64.cos(), max_relative = 1e-12);
    let r = checks::char_gram_check(&Measure::dirac(vec![0.0]), &[vec![0.3], vec![1.0], vec![-2.0]], &tol()).unwrap();
    assert!(r.rhs.abs() < 1e-14);

    let r = checks::wick_density_identity(&sym, &sym).unwrap();
    assert!(r.pass);
    let a = Measure::dirac(vec![0.5, 0.0]);
    let b = Measure::dirac(vec![-0.2, 1.0]);
    assert!(checks::wick_density_identity(&a, &b).unwrap().pass);
    assert!(checks::wick_density_identity(&a, &sym).is_err());
}

#[test]
fn oracle_triangle_rows() {
    let f = Exp::from_terms(1, vec![(1.0, vec![0.5]), (-0.5, vec![-0.3])]).unwrap();
    let rho = Convolution::new(symmetric());
    let settings = checks::OracleSettings {
        order: 30,
        mc_count: 20_000,
        seed: 3,
    };
    let rows = checks::oracle_triangle(&f, &rho, 0.4, settings, &tol()).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
    let again = checks::oracle_triangle(&f, &rho, 0.4, settings, &tol()).unwrap();
    assert_eq!(rows, again);
}
