use std::f64::consts::{FRAC_PI_4, PI};

use gapless_core::chain::{run_chain, KappaChain};
use gapless_core::gap::{GapReport, SweepSummary};
use gapless_core::geometry::{diameter, diameter_bounds, diameter_closed_form, neck_check, StripDomain};
use gapless_core::ExtFloat;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{SweepConfig, PRECISION_MU_CAP};
use crate::error::CliError;
use crate::output;
use crate::sweep::{solve_all, Point};

const GEOMETRY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Distance from the failure boundary; negative when the check fails.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: SweepConfig,
    pub mu_checked: Vec<f64>,
    pub mu_skipped: Vec<f64>,
    pub warnings: Vec<String>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: &str, margin: f64) -> Check {
    Check { name: name.to_string(), passed: margin >= 0.0, margin }
}

fn flag(name: &str, passed: bool, margin: f64) -> Check {
    Check { name: name.to_string(), passed, margin }
}

fn min_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

/// Smallest step `v[i] − v[i+1]`; positive iff strictly decreasing.
fn min_drop(v: &[f64]) -> f64 {
    min_of(v.windows(2).map(|w| w[0] - w[1]))
}

fn trailing(flags: impl Iterator<Item = bool>) -> f64 {
    let v: Vec<bool> = flags.collect();
    v.iter().rev().take_while(|f| **f).count() as f64
}

fn geometry_checks(l: f64, mus: &[f64]) -> Result<Vec<Check>, CliError> {
    let mut bounds = f64::INFINITY;
    let mut max_pair = f64::INFINITY;
    let mut neck = f64::INFINITY;
    for mu in mus {
        let d = StripDomain::planar(*mu, l).map_err(|e| CliError::Config(e.to_string()))?;
        let diam = diameter(&d).map_err(|e| CliError::Config(e.to_string()))?;
        let (lo, hi) = diameter_bounds(&d);
        bounds = bounds.min((diam - lo).min(hi - diam) + GEOMETRY_SLACK);
        let closed = diameter_closed_form(&d).map_err(|e| CliError::Config(e.to_string()))?;
        max_pair = max_pair.min(GEOMETRY_SLACK * diam.max(1.0) - (closed - diam).abs());
        let nc = neck_check(&d).map_err(|e| CliError::Config(e.to_string()))?;
        neck = neck.min(nc.dist_rs - nc.dist_tu / l.cos() + GEOMETRY_SLACK);
    }
    Ok(vec![
        check("geometry.diameter_bounds", bounds),
        check("geometry.max_pair_identity", max_pair),
        check("geometry.neck_ratio", neck),
    ])
}

fn planar_checks(reports: &[GapReport]) -> Vec<Check> {
    let s = SweepSummary::from_reports(reports);
    let log_d2: Vec<f64> = reports.iter().map(|r| r.d2gap.log10()).collect();
    let ratio: Vec<f64> = reports.iter().map(|r| r.lambda1 / r.mu).collect();
    let maxloc: Vec<f64> = reports.iter().map(|r| -r.shape.max_location).collect();
    let mass: Vec<f64> = reports.iter().map(|r| r.shape.mass_center.log10()).collect();
    let deriv: Vec<f64> = reports.iter().map(|r| r.shape.deriv_mass.log10()).collect();
    let min_d2 = reports.iter().map(|r| r.d2gap).fold(ExtFloat::from_f64(f64::MAX), ExtFloat::min);
    let last = reports.last().expect("non-empty sweep");
    vec![
        check("bracket.lambda1_lower", min_of(reports.iter().map(|r| r.lambda1 - r.lambda1_lower))),
        flag(
            "bracket.lambda1_upper_threshold",
            s.upper_bracket_threshold.is_some(),
            last.lambda1_upper_half - last.lambda1,
        ),
        flag("trend.lambda1_over_mu", s.ratio_decreasing, min_drop(&ratio)),
        check("trend.excess_ratio", 0.2 - s.excess_ratio),
        check(
            "gap.upper_bound",
            min_of(reports.iter().map(|r| {
                let upper = r.rayleigh_upper + ExtFloat::from_f64(1e-9);
                ((upper - r.gap) / upper).to_f64()
            })),
        ),
        check("gap.abcd_reconstruction", 1e-6 - reports.iter().map(|r| r.terms_defect()).fold(0.0, f64::max)),
        check("gap.d2gap_decreasing", min_drop(&log_d2)),
        check("gap.below_euclidean", (ExtFloat::from_f64(3.0 * PI * PI) - min_d2).to_f64()),
        check("gap.d2gap_ratio", 0.2 - s.d2gap_ratio.to_f64()),
        check("shape.evenness", 1e-9 - reports.iter().map(|r| r.shape.evenness_defect).fold(0.0, f64::max)),
        check("shape.positivity", 0.0 - reports.iter().filter(|r| !r.shape.positive).count() as f64),
        check("shape.max_location_increasing", min_drop(&maxloc)),
        check("shape.inflection", 1e-6 - reports.iter().map(|r| r.shape.inflection_defect).fold(0.0, f64::max)),
        flag(
            "shape.envelopes_above_threshold",
            s.envelope_threshold.is_some(),
            trailing(reports.iter().map(|r| r.shape.envelopes_ok)),
        ),
        flag(
            "shape.h0_bound_above_threshold",
            s.h0_bound_threshold.is_some(),
            trailing(reports.iter().map(|r| r.shape.h0_bound_ok)),
        ),
        check("shape.integral_bound", min_of(reports.iter().map(|r| r.integral.b_bound - r.integral.weighted_mass))),
        check("shape.mass_center_decreasing", min_drop(&mass)),
        check("shape.deriv_mass_decreasing", min_drop(&deriv)),
    ]
}

fn chain_checks(cfg: &SweepConfig, mus: &[f64], reports: &[GapReport]) -> Result<Vec<Check>, String> {
    let setups: Vec<(usize, Vec<f64>)> = if cfg.n >= 3 {
        vec![(cfg.n, cfg.deltas.clone())]
    } else {
        vec![(3, vec![FRAC_PI_4]), (4, vec![FRAC_PI_4; 2])]
    };
    let mut level = f64::INFINITY;
    let mut decreasing = f64::INFINITY;
    for (n, deltas) in setups {
        let chains: Vec<KappaChain> = mus
            .par_iter()
            .map(|mu| run_chain(n, *mu, &deltas, cfg.l, &cfg.solver).map_err(|e| format!("n = {n}, mu = {mu}: {e}")))
            .collect::<Result<_, _>>()?;
        level = level.min(min_of(chains.iter().flat_map(|c| c.bound_margins())));
        decreasing = decreasing.min(min_drop(&chains.iter().map(|c| c.gap.log10()).collect::<Vec<_>>()));
    }
    let mut reduction: f64 = 0.0;
    for r in reports {
        let c = run_chain(2, r.mu, &[], cfg.l, &cfg.solver).map_err(|e| format!("n = 2, mu = {}: {e}", r.mu))?;
        reduction = reduction.max((c.lambda1 - r.lambda1).abs() / r.lambda1);
        reduction = reduction.max((c.lambda2 - r.lambda2).abs() / r.lambda2);
    }
    Ok(vec![
        check("chain.level_bounds", level),
        check("chain.gap_decreasing", decreasing),
        check("chain.planar_reduction", 1e-8 - reduction),
    ])
}

pub fn run_verify(cfg: &SweepConfig) -> Result<(VerifyReport, Option<String>), CliError> {
    let mut warnings = Vec::new();
    let mut cap = cfg.mu_cap;
    if cap > PRECISION_MU_CAP {
        warnings.push(format!(
            "mu cap {cap:e} exceeds the precision budget {PRECISION_MU_CAP:e}; checks above {PRECISION_MU_CAP:e} are skipped"
        ));
        cap = PRECISION_MU_CAP;
    }
    let (mu_checked, mu_skipped): (Vec<f64>, Vec<f64>) = cfg.mu_values.iter().partition(|m| **m <= cap);
    if !mu_skipped.is_empty() {
        warnings.push(format!("skipped {} sweep point(s) above mu = {cap:e}", mu_skipped.len()));
    }
    if mu_checked.is_empty() {
        return Err(CliError::Config(format!("no sweep point at or below the mu cap {cap:e}")));
    }

    let mut checks = geometry_checks(cfg.l, &mu_checked)?;
    let planar = SweepConfig { n: 2, deltas: Vec::new(), ..cfg.clone() };
    let mut reports = Vec::new();
    let mut solver_failure = None;
    for (mu, p) in mu_checked.iter().zip(solve_all(&planar, &mu_checked)?) {
        match p {
            Ok(Point::Planar(r)) => reports.push(*r),
            Ok(Point::Chain(_)) => unreachable!("planar config"),
            Err(e) => {
                checks.push(flag(&format!("solver.mu={mu:e}"), false, f64::NAN));
                solver_failure.get_or_insert(format!("mu = {mu}: {e}"));
            }
        }
    }
    if solver_failure.is_none() {
        checks.extend(planar_checks(&reports));
        let pool = cfg.pool()?;
        match pool.install(|| chain_checks(cfg, &mu_checked, &reports)) {
            Ok(c) => checks.extend(c),
            Err(e) => {
                checks.push(flag("solver.chain", false, f64::NAN));
                solver_failure = Some(e);
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok((VerifyReport { config: cfg.clone(), mu_checked, mu_skipped, warnings, passed, checks }, solver_failure))
}

pub fn cmd_verify(cfg: &SweepConfig) -> Result<(), CliError> {
    let (report, solver_failure) = run_verify(cfg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
    json.push('\n');
    output::emit(cfg.report.as_deref(), &json)?;
    if let Some(e) = solver_failure {
        return Err(CliError::Solver(e));
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::Verify(failed.join(", ")))
    }
}
