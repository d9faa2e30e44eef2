use std::path::PathBuf;

use clap::{Args, Subcommand};
use gapless_core::geometry::{
    diameter, diameter_bounds, diameter_closed_form, hyperbolic_distance, neck_check, HalfPlanePoint, StripDomain,
};
use gapless_core::slcore::{solve_eigen_shooting, SolverConfig, WeightMode, WeightedSLProblem};
use serde_json::json;

use crate::error::CliError;
use crate::output::{self, num};
use crate::svg;

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    #[arg(long)]
    pub mu: f64,
    /// 1-based eigenvalue index (at most 4).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long = "L", visible_alias = "l", default_value_t = std::f64::consts::FRAC_PI_3)]
    pub l: f64,
    /// Full-interval sample count (multiple of 4).
    #[arg(long)]
    pub intervals: Option<usize>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

pub fn cmd_eigen(args: &EigenArgs) -> Result<(), CliError> {
    let p =
        WeightedSLProblem::new(args.l, args.mu, WeightMode::Secant2).map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = SolverConfig { grid_intervals: args.intervals, ..SolverConfig::default() };
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if args.k == 0 || args.k > cfg.max_index {
        return Err(CliError::Config(format!("k = {} outside 1..={}", args.k, cfg.max_index)));
    }
    let sol = solve_eigen_shooting(&p, args.k, &cfg).map_err(|e| CliError::Solver(e.to_string()))?;
    let rows: Vec<Vec<String>> = sol.grid.iter().zip(&sol.values).map(|(x, h)| vec![num(*x), num(*h)]).collect();
    output::emit(args.csv.as_deref(), &output::csv(&["phi".into(), "h".into()], &rows))?;
    if let Some(path) = &args.svg {
        let pts: Vec<(f64, f64)> = sol.grid.iter().copied().zip(sol.values.iter().copied()).collect();
        let title = format!("h{} at mu = {}, L = {:.6}", args.k, args.mu, args.l);
        std::fs::write(path, svg::linear_plot(&pts, &title, "phi", "h"))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Subcommand)]
pub enum GeometryCmd {
    /// Hyperbolic distance between two half-plane points.
    Distance {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        from: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        to: Vec<f64>,
    },
    /// Diameter, its bounds, and the neck comparison of the planar strip.
    Diameter {
        #[arg(long)]
        mu: f64,
        #[arg(long = "L", visible_alias = "l", default_value_t = std::f64::consts::FRAC_PI_3)]
        l: f64,
    },
}

fn point(v: &[f64]) -> Result<HalfPlanePoint, CliError> {
    match v {
        [x, y] => HalfPlanePoint::new(*x, *y).map_err(|e| CliError::Config(e.to_string())),
        _ => Err(CliError::Config(format!("expected x,y, got {v:?}"))),
    }
}

pub fn cmd_geometry(cmd: &GeometryCmd) -> Result<(), CliError> {
    let cfg_err = |e: gapless_core::geometry::GeometryError| CliError::Config(e.to_string());
    let value = match cmd {
        GeometryCmd::Distance { from, to } => {
            let d = hyperbolic_distance(point(from)?, point(to)?).map_err(cfg_err)?;
            json!({ "distance": d })
        }
        GeometryCmd::Diameter { mu, l } => {
            let d = StripDomain::planar(*mu, *l).map_err(cfg_err)?;
            let (lo, hi) = diameter_bounds(&d);
            let neck = neck_check(&d).map_err(cfg_err)?;
            json!({
                "mu": mu,
                "L": l,
                "diameter": diameter(&d).map_err(cfg_err)?,
                "diameter_closed_form": diameter_closed_form(&d).map_err(cfg_err)?,
                "lower_bound": lo,
                "upper_bound": hi,
                "neck": neck,
            })
        }
    };
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    output::emit(None, &s)?;
    Ok(())
}
