use std::path::{Path, PathBuf};

use clap::Args;
use gapless_core::gap::standard_mu_sweep;
use gapless_core::slcore::{SolverConfig, MAX_HALF_WIDTH};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Largest `μ` whose gap the solver resolves reliably.
pub const PRECISION_MU_CAP: f64 = 1e6;

/// Config file contents. Every field is optional; flags win over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    pub mu_values: Option<Vec<f64>>,
    pub phi0: Option<f64>,
    pub mu_cap: Option<f64>,
    pub rel_tol: Option<f64>,
    pub ode_rtol: Option<f64>,
    pub ode_atol: Option<f64>,
    pub workers: Option<usize>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dimension of the hyperbolic space.
    #[arg(long)]
    pub n: Option<usize>,
    /// Half-opening angle L of the strip.
    #[arg(long = "L", visible_alias = "l")]
    pub l: Option<f64>,
    /// Angular half-widths δ₂..δ_{n−1}, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub deltas: Option<Vec<f64>>,
    /// Separation constants, comma separated and strictly increasing.
    #[arg(long = "mu", value_delimiter = ',')]
    pub mu_values: Option<Vec<f64>>,
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Points above this μ are skipped by `verify`.
    #[arg(long)]
    pub mu_cap: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub ode_rtol: Option<f64>,
    #[arg(long)]
    pub ode_atol: Option<f64>,
    /// Worker threads; `GAPLESS_WORKERS` takes precedence.
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// JSON report path for `verify` (stdout when absent).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub deltas: Vec<f64>,
    pub mu_values: Vec<f64>,
    pub phi0: f64,
    pub mu_cap: f64,
    pub solver: SolverConfig,
    pub workers: Option<usize>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<SweepConfig, CliError> {
        let file = match &self.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let l = self.l.or(file.l).unwrap_or(std::f64::consts::FRAC_PI_3);
        let defaults = SolverConfig::default();
        let solver = SolverConfig {
            rel_tol: self.rel_tol.or(file.rel_tol).unwrap_or(defaults.rel_tol),
            ode_rtol: self.ode_rtol.or(file.ode_rtol).unwrap_or(defaults.ode_rtol),
            ode_atol: self.ode_atol.or(file.ode_atol).unwrap_or(defaults.ode_atol),
            ..defaults
        };
        let env_workers = match std::env::var("GAPLESS_WORKERS") {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Config(format!("GAPLESS_WORKERS = {v:?} is not a count")))?,
            ),
            Err(_) => None,
        };
        let cfg = SweepConfig {
            n: self.n.or(file.n).unwrap_or(2),
            l,
            deltas: self.deltas.clone().or(file.deltas).unwrap_or_default(),
            mu_values: self.mu_values.clone().or(file.mu_values).unwrap_or_else(standard_mu_sweep),
            phi0: self.phi0.or(file.phi0).unwrap_or(l / 4.0),
            mu_cap: self.mu_cap.or(file.mu_cap).unwrap_or(PRECISION_MU_CAP),
            solver,
            workers: env_workers.or(self.workers).or(file.workers),
            csv: self.csv.clone().or(file.csv),
            svg: self.svg.clone().or(file.svg),
            report: self.report.clone().or(file.report),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n < 2 {
            return bad(format!("n = {} must be at least 2", self.n));
        }
        if !(self.l > 0.0 && self.l <= MAX_HALF_WIDTH) {
            return bad(format!("L = {} must lie in (0, {MAX_HALF_WIDTH}]", self.l));
        }
        if self.deltas.len() + 2 != self.n {
            return bad(format!("n = {} needs {} deltas, got {}", self.n, self.n - 2, self.deltas.len()));
        }
        if let Some(d) = self.deltas.iter().find(|d| !(**d > 0.0 && **d <= MAX_HALF_WIDTH)) {
            return bad(format!("delta = {d} must lie in (0, {MAX_HALF_WIDTH}]"));
        }
        if self.mu_values.is_empty() {
            return bad("mu_values is empty".into());
        }
        if let Some(m) = self.mu_values.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return bad(format!("mu = {m} must be positive and finite"));
        }
        if !self.mu_values.windows(2).all(|w| w[1] > w[0]) {
            return bad("mu_values must be strictly increasing".into());
        }
        if !(self.phi0 > 0.0 && self.phi0 < 0.5 * self.l) {
            return bad(format!("phi0 = {} must lie in (0, L/2)", self.phi0));
        }
        if !(self.mu_cap > 0.0) {
            return bad(format!("mu_cap = {} must be positive", self.mu_cap));
        }
        if self.workers == Some(0) {
            return bad("worker count must be positive".into());
        }
        self.solver.validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            b = b.num_threads(w);
        }
        b.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))
    }
}
