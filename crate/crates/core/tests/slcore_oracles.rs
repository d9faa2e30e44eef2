use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use gapless_core::slcore::{
    bracket_lambda1, eigenfunction_samples, rayleigh_quotient, shooting_eigenvalue, solve_eigen_matrix,
    solve_eigen_shooting, solve_lowest_pair, Parity, SolverConfig, SolverError, WeightMode, WeightedSLProblem,
};
use gapless_core::ExtFloat;
use proptest::prelude::*;

fn secant(a: f64, m: f64) -> WeightedSLProblem {
    WeightedSLProblem::new(a, m, WeightMode::Secant2).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// Frozen from an independent Chebyshev collocation solve.
const LAMBDA1_M100_PI3: f64 = 60.30715931089;

#[test]
fn frozen_ground_state() {
    let cfg = SolverConfig::default();
    let lam = shooting_eigenvalue(&secant(FRAC_PI_3, 100.0), 1, &cfg).unwrap();
    assert!(rel(lam, LAMBDA1_M100_PI3) < 1e-10, "{lam}");
    let m = solve_eigen_matrix(&secant(FRAC_PI_3, 100.0), 1, cfg.matrix_n, true, &cfg).unwrap();
    assert!(rel(m.lambda, LAMBDA1_M100_PI3) < 1e-10, "{}", m.lambda);
    assert!(m.warning.is_none());
}

#[test]
fn shooting_and_matrix_agree_on_higher_modes() {
    let cfg = SolverConfig::default();
    let p = secant(FRAC_PI_6, 50.0);
    for k in 1..=4 {
        let s = shooting_eigenvalue(&p, k, &cfg).unwrap();
        let m = solve_eigen_matrix(&p, k, 1 << 14, true, &cfg).unwrap();
        assert!(rel(s, m.lambda) < 1e-8, "k = {k}: {s} vs {}", m.lambda);
    }
}

#[test]
fn eigenfunction_invariants() {
    let cfg = SolverConfig::default();
    for m in [10.0, 100.0, 1e4] {
        let p = secant(FRAC_PI_3, m);
        for k in 1..=4 {
            let sol = solve_eigen_shooting(&p, k, &cfg).unwrap();
            let n = sol.values.len() - 1;
            assert_eq!(sol.values[0], 0.0);
            assert_eq!(sol.values[n], 0.0);
            assert_eq!(sol.interior_zeros(), k - 1, "m = {m}, k = {k}");
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            for i in 0..=n {
                assert!((sol.values[i] - sign * sol.values[n - i]).abs() < 1e-9, "parity m = {m} k = {k}");
            }
            let wh2: Vec<f64> = sol.grid.iter().zip(&sol.values).map(|(x, h)| h * h / x.cos().powi(2)).collect();
            let delta = sol.delta();
            let norm: f64 = delta / 3.0
                * wh2
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v * if i == 0 || i == n {
                            1.0
                        } else if i % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        }
                    })
                    .sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-10, "norm {norm}");
            if k == 1 {
                assert!(sol.values[1..n].iter().all(|v| *v > 0.0));
            }
        }
    }
}

#[test]
fn odd_eigenfunction_vanishes_at_center() {
    let cfg = SolverConfig::default();
    let sol = solve_eigen_shooting(&secant(FRAC_PI_3, 1e4), 2, &cfg).unwrap();
    assert_eq!(sol.parity, Parity::Odd);
    assert_eq!(sol.values[sol.values.len() / 2], 0.0);
}

#[test]
fn eigenvalue_ordering() {
    let cfg = SolverConfig::default();
    for m in [1.0, 100.0, 1e3, 1e5] {
        let p = secant(FRAC_PI_3, m);
        let pair = solve_lowest_pair(&p, &cfg).unwrap();
        let l3 = shooting_eigenvalue(&p, 3, &cfg).unwrap();
        let l4 = shooting_eigenvalue(&p, 4, &cfg).unwrap();
        assert!(pair.gap > ExtFloat::ZERO);
        if pair.gap.to_f64() > 1e-6 * pair.lambda1 {
            assert!(pair.lambda1 < pair.lambda2);
        }
        assert!(pair.lambda2 < l3, "m = {m}");
        // the second doublet is also below f64 resolution from m ~ 1e3 on
        assert!(l4 - l3 > -1e-12 * l3, "m = {m}: {l3} {l4}");
    }
}

#[test]
fn ground_state_bracket() {
    let cfg = SolverConfig::default();
    for (a, m) in [(0.3, 1.0), (FRAC_PI_3, 100.0), (1.2, 1e4), (1.5, 10.0)] {
        let p = secant(a, m);
        let (lo, hi) = bracket_lambda1(&p).unwrap();
        let lam = shooting_eigenvalue(&p, 1, &cfg).unwrap();
        assert!(lo <= lam && lam <= hi, "a = {a}, m = {m}: {lo} <= {lam} <= {hi}");
    }
}

#[test]
fn rayleigh_quotient_recovers_eigenvalue() {
    let cfg = SolverConfig::default();
    let p = secant(FRAC_PI_3, 100.0);
    let sol = solve_eigen_shooting(&p, 1, &cfg).unwrap();
    let r = rayleigh_quotient(&sol.grid, &sol.values, p.m, p.weight_mode).unwrap();
    assert!(rel(r, sol.lambda) < 1e-8, "{r} vs {}", sol.lambda);
}

#[test]
fn unit_weight_dirichlet_string() {
    let cfg = SolverConfig::default();
    let p = WeightedSLProblem::new(1.0, 0.0, WeightMode::Unit).unwrap();
    for k in 1..=4 {
        let exact = (k as f64 * PI / 2.0).powi(2);
        assert!(rel(shooting_eigenvalue(&p, k, &cfg).unwrap(), exact) < 1e-11);
    }
}

#[test]
fn wrong_eigenvalue_is_rejected() {
    let cfg = SolverConfig::default();
    let p = secant(FRAC_PI_3, 100.0);
    let r = eigenfunction_samples(&p, LAMBDA1_M100_PI3 * 1.01, Parity::Even, 4096, &cfg);
    assert!(matches!(r, Err(SolverError::NotAnEigenvalue { .. })));
}

fn ground_state() -> &'static (Vec<f64>, f64) {
    static G: std::sync::OnceLock<(Vec<f64>, f64)> = std::sync::OnceLock::new();
    G.get_or_init(|| {
        let cfg = SolverConfig::default();
        let sol = solve_eigen_shooting(&secant(FRAC_PI_3, 100.0), 1, &cfg).unwrap();
        (sol.grid, sol.lambda)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rayleigh_quotient_is_minimized_by_ground_state(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..6),
        lead in 0.1f64..2.0,
    ) {
        let (grid, lam) = ground_state();
        let a = FRAC_PI_3;
        // trial functions in span{cos((2j+1)πφ/2a), sin(jπφ/a)}
        let values: Vec<f64> = grid
            .iter()
            .map(|x| {
                let mut v = lead * (PI * x / (2.0 * a)).cos();
                for (j, c) in coeffs.iter().enumerate() {
                    let j = j as f64 + 1.0;
                    v += c * ((2.0 * j + 1.0) * PI * x / (2.0 * a)).cos() + 0.5 * c * (j * PI * x / a).sin();
                }
                v
            })
            .collect();
        let mut values = values;
        let n = values.len() - 1;
        values[0] = 0.0;
        values[n] = 0.0;
        let r = rayleigh_quotient(grid, &values, 100.0, WeightMode::Secant2).unwrap();
        prop_assert!(r >= lam * (1.0 - 1e-9), "{} < {}", r, lam);
    }

    #[test]
    fn scaling_does_not_change_the_quotient(s in 1e-3f64..1e3) {
        let (grid, _) = ground_state();
        let a = FRAC_PI_3;
        let base: Vec<f64> = grid.iter().map(|x| (PI * x / (2.0 * a)).cos()).collect();
        let scaled: Vec<f64> = base.iter().map(|v| s * v).collect();
        let r0 = rayleigh_quotient(grid, &base, 100.0, WeightMode::Secant2).unwrap();
        let r1 = rayleigh_quotient(grid, &scaled, 100.0, WeightMode::Secant2).unwrap();
        prop_assert!(rel(r1, r0) < 1e-13);
    }

    #[test]
    fn bracket_contains_ground_state(a in 0.2f64..1.5, log_m in 0.0f64..4.0) {
        let cfg = SolverConfig::default();
        let p = secant(a, 10f64.powf(log_m));
        let (lo, hi) = bracket_lambda1(&p).unwrap();
        let lam = shooting_eigenvalue(&p, 1, &cfg).unwrap();
        prop_assert!(lo <= lam && lam <= hi);
    }
}
