use gapless_core::chain::{chain_gap, KappaChain};
use gapless_core::gap::{analyze_gap, GapReport};
use gapless_core::geometry::StripDomain;
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::error::CliError;
use crate::output::{self, ext, num, ERR_TOKEN};
use crate::svg;

#[derive(Debug, Clone)]
pub enum Point {
    Planar(Box<GapReport>),
    Chain(KappaChain),
}

impl Point {
    fn gap_for_plot(&self) -> f64 {
        match self {
            Point::Planar(r) => r.d2gap.log10(),
            Point::Chain(c) => c.gap.log10(),
        }
    }
}

pub fn solve_point(cfg: &SweepConfig, mu: f64) -> Result<Point, String> {
    if cfg.n == 2 {
        let d = StripDomain::planar(mu, cfg.l).map_err(|e| e.to_string())?;
        analyze_gap(&d, cfg.phi0, &cfg.solver).map(|r| Point::Planar(Box::new(r))).map_err(|e| e.to_string())
    } else {
        chain_gap(cfg.n, mu, &cfg.deltas, cfg.l, &cfg.solver).map(Point::Chain).map_err(|e| e.to_string())
    }
}

/// Solves every `μ` of `mus` on the configured pool; results keep the input
/// order.
pub fn solve_all(cfg: &SweepConfig, mus: &[f64]) -> Result<Vec<Result<Point, String>>, CliError> {
    let pool = cfg.pool()?;
    Ok(pool.install(|| mus.par_iter().map(|mu| solve_point(cfg, *mu)).collect()))
}

pub fn header(n: usize) -> Vec<String> {
    if n == 2 {
        ["mu", "lambda1", "lambda2", "gap", "diameter", "d2gap", "rayleigh_upper", "h1_at_0", "max_location"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        let mut h = vec!["mu".to_string()];
        h.extend((1..n).map(|i| format!("kappa{i}")));
        h.extend(["lambda1", "lambda2", "gap"].iter().map(|s| s.to_string()));
        h
    }
}

pub fn row(n: usize, mu: f64, point: &Result<Point, String>) -> Vec<String> {
    match point {
        Ok(Point::Planar(r)) => vec![
            num(mu),
            num(r.lambda1),
            num(r.lambda2),
            ext(r.gap),
            num(r.diameter),
            ext(r.d2gap),
            ext(r.rayleigh_upper),
            ext(r.shape.h1_at_0),
            num(r.shape.max_location),
        ],
        Ok(Point::Chain(c)) => {
            let mut v = vec![num(mu)];
            v.extend(c.kappas.iter().map(|k| num(*k)));
            v.extend([num(c.lambda1), num(c.lambda2), ext(c.gap)]);
            v
        }
        Err(_) => {
            let mut v = vec![num(mu)];
            v.extend(std::iter::repeat_n(ERR_TOKEN.to_string(), header(n).len() - 1));
            v
        }
    }
}

pub fn cmd_gap_sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    let points = solve_all(cfg, &cfg.mu_values)?;
    let rows: Vec<Vec<String>> = cfg.mu_values.iter().zip(&points).map(|(mu, p)| row(cfg.n, *mu, p)).collect();
    output::emit(cfg.csv.as_deref(), &output::csv(&header(cfg.n), &rows))?;

    if let Some(path) = &cfg.svg {
        let pts: Vec<(f64, f64)> = cfg
            .mu_values
            .iter()
            .zip(&points)
            .map(|(mu, p)| (*mu, p.as_ref().map(Point::gap_for_plot).unwrap_or(f64::NAN)))
            .collect();
        let (title, y) = if cfg.n == 2 {
            ("Diameter-scaled gap", "log10 D^2 (lambda2 - lambda1)")
        } else {
            ("Gap of the separated chain", "log10 (lambda2 - lambda1)")
        };
        std::fs::write(path, svg::log_x_plot(&pts, title, "mu", y))?;
    }

    let failures: Vec<String> = cfg
        .mu_values
        .iter()
        .zip(&points)
        .filter_map(|(mu, p)| p.as_ref().err().map(|e| format!("mu = {mu}: {e}")))
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Solver(failures.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers() {
        assert_eq!(header(2).len(), 9);
        assert_eq!(header(4).join(","), "mu,kappa1,kappa2,kappa3,lambda1,lambda2,gap");
    }

    #[test]
    fn error_rows_keep_width() {
        let r = row(3, 100.0, &Err("x".into()));
        assert_eq!(r.len(), header(3).len());
        assert!(r[1..].iter().all(|c| c == ERR_TOKEN));
    }
}
