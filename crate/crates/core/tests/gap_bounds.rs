use std::f64::consts::FRAC_PI_3;

use gapless_core::gap::{analyze_gap, c1_constant, default_phi0, test_function_psi, GapReport};
use gapless_core::geometry::StripDomain;
use gapless_core::slcore::SolverConfig;
use gapless_core::ExtFloat;
use proptest::prelude::*;

fn reports() -> &'static [GapReport] {
    static R: std::sync::OnceLock<Vec<GapReport>> = std::sync::OnceLock::new();
    R.get_or_init(|| {
        let cfg = SolverConfig::default();
        [1e2, 1e3, 1e4]
            .iter()
            .map(|mu| {
                let d = StripDomain::planar(*mu, FRAC_PI_3).unwrap();
                analyze_gap(&d, default_phi0(FRAC_PI_3), &cfg).unwrap()
            })
            .collect()
    })
}

#[test]
fn gap_sits_below_rayleigh_difference() {
    for r in reports() {
        assert!(r.gap_bound_holds(), "mu = {}", r.mu);
        assert!(r.gap <= r.rayleigh_upper, "mu = {}", r.mu);
        assert!(r.terms_defect() < 1e-6, "mu = {}: {}", r.mu, r.terms_defect());
    }
}

#[test]
fn abcd_terms_are_ordered() {
    for r in reports() {
        let t = r.terms;
        assert!(t.a > ExtFloat::ZERO && t.a < ExtFloat::ONE);
        assert!(t.a <= t.d, "A <= D at mu = {}", r.mu);
        assert!(t.c < ExtFloat::ZERO);
        assert!(t.b > ExtFloat::ZERO);
    }
    let mags: Vec<ExtFloat> = reports().iter().map(|r| r.terms.b.abs()).collect();
    assert!(mags.windows(2).all(|w| w[1] < w[0]), "B should shrink with mu");
}

#[test]
fn subtraction_agrees_where_resolvable() {
    let r = &reports()[0];
    let sub = r.lambda2 - r.lambda1;
    assert!((r.gap.to_f64() - sub).abs() < 1e-6 * sub);
}

#[test]
fn report_fields_are_consistent() {
    for r in reports() {
        assert!(r.lambda1_lower <= r.lambda1);
        assert_eq!(r.d2gap, r.gap.mul_f64(r.diameter * r.diameter));
        assert!(r.shape.positive);
        assert!(r.shape.evenness_defect < 1e-9);
        assert!(r.integral.holds);
        assert!(r.shape.max_location > 0.0 && r.shape.max_location < r.l);
    }
}

proptest! {
    #[test]
    fn psi_is_odd_and_bounded(
        phi0 in 0.01f64..0.5,
        log_mu in 1.0f64..6.0,
        xs in prop::collection::vec(-1.0f64..1.0, 1..20),
    ) {
        let (mu, l) = (10f64.powf(log_mu), 1.0);
        let grid: Vec<f64> = xs.iter().map(|x| x * l).collect();
        let neg: Vec<f64> = grid.iter().map(|x| -x).collect();
        let a = test_function_psi(phi0, mu, l, &grid).unwrap();
        let b = test_function_psi(phi0, mu, l, &neg).unwrap();
        for (p, q) in a.iter().zip(&b) {
            prop_assert!(p.abs() <= 1.0);
            prop_assert_eq!(*p, -*q);
        }
    }

    #[test]
    fn c1_is_positive_below_a_third_of_pi(phi0 in 1e-3f64..1.04) {
        prop_assert!(c1_constant(phi0) > 0.0);
    }
}
