use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

use gapless_core::chain::{
    chain_gap, kappa_step, radial_eigenfunction, radial_interval, radial_separation_constant, run_chain,
};
use gapless_core::gap::strictly_decreasing;
use gapless_core::ode::{integrate, Dopri5Options, StepStats};
use gapless_core::slcore::SolverConfig;
use proptest::prelude::*;

// Frozen from an independent Chebyshev collocation solve of the level-2 problem.
const KAPPA2_N4_MU1E3: f64 = 694.2295517635;

#[test]
fn frozen_second_separation_constant() {
    let cfg = SolverConfig::default();
    let kappa1 = radial_separation_constant(4, 1e3, 1);
    assert_eq!(kappa1, 1004.0);
    let k2 = kappa_step(kappa1, 4, 2, FRAC_PI_4, &cfg).unwrap();
    assert!((k2 - KAPPA2_N4_MU1E3).abs() / KAPPA2_N4_MU1E3 < 1e-10, "{k2}");
}

#[test]
fn radial_factor_solves_its_ode_by_differences() {
    for n in [3usize, 4, 7] {
        let mu = 80.0;
        let kappa = radial_separation_constant(n, mu, 1);
        let c = kappa / ((n - 2) as f64).powi(2);
        let (lo, hi) = radial_interval(n, mu);
        let h = 1e-4 * (hi - lo);
        let mut worst: f64 = 0.0;
        for i in 1..40 {
            let s = lo + (hi - lo) * i as f64 / 40.0;
            let f = |x: f64| radial_eigenfunction(n, mu, x).unwrap();
            let fs = (f(s + h) - f(s - h)) / (2.0 * h);
            let fss = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
            let scale = f(s).abs().max(1.0) * c;
            worst = worst.max((fss - 2.0 * fs + c * f(s)).abs() / scale);
        }
        assert!(worst < 1e-6, "n = {n}: residual {worst}");
    }
}

#[test]
fn integrated_second_radial_mode_closes() {
    let (n, mu) = (5usize, 100.0);
    let kappa = radial_separation_constant(n, mu, 2);
    let c = kappa / ((n - 2) as f64).powi(2);
    let (lo, hi) = radial_interval(n, mu);
    let opts = Dopri5Options { rtol: 1e-12, atol: 1e-14, ..Default::default() };
    let mut stats = StepStats::default();
    let (y, _) =
        integrate(|_, y: &[f64; 2]| [y[1], 2.0 * y[1] - c * y[0]], hi, [0.0, 1.0], lo, 1e-3, &opts, &mut stats)
            .unwrap();
    assert!(y[0].abs() < 1e-9, "f(s_lo) = {}", y[0]);
}

#[test]
fn chain_bound_and_gap_trend() {
    let cfg = SolverConfig::default();
    for n in [3usize, 4] {
        let deltas = vec![FRAC_PI_4; n - 2];
        let mut gaps = Vec::new();
        for mu in [1e2, 1e3, 1e4] {
            let c = chain_gap(n, mu, &deltas, FRAC_PI_3, &cfg).unwrap();
            assert_eq!(c.kappas.len(), n - 1);
            assert!(c.bound_margins().iter().all(|m| *m >= 0.0), "n = {n}, mu = {mu}");
            gaps.push(c.gap);
        }
        assert!(strictly_decreasing(&gaps), "n = {n}");
    }
}

#[test]
fn planar_chain_has_no_intermediate_levels() {
    let cfg = SolverConfig::default();
    let c = run_chain(2, 1e3, &[], FRAC_PI_3, &cfg).unwrap();
    assert!(c.kappas == vec![1e3]);
    assert!(c.lambda1 < c.lambda2 + 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn level_bound_holds(log_mu in 1.0f64..4.0, delta in 0.2f64..1.3) {
        let cfg = SolverConfig::default();
        let mu = 10f64.powf(log_mu);
        let c = chain_gap(4, mu, &[delta, delta], FRAC_PI_3, &cfg).unwrap();
        prop_assert!(c.bound_margins().iter().all(|m| *m >= 0.0));
    }
}
