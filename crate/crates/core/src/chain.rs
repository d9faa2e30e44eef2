//! Separation of variables in `ℍⁿ`: the closed-form radial factor and the
//! chain of weighted angular problems whose first eigenvalues `κ_i` feed
//! the next level.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extfloat::ExtFloat;
use crate::slcore::{self, SolverConfig, SolverError, WeightMode, WeightedSLProblem};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChainError {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("exponent index i = {i} outside 2..={n}")]
    IndexOutOfRange { n: usize, i: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// First radial eigenvalue with `k` half-waves: `k²μ` for `n = 2`,
/// `(n−2)² + k²μ` otherwise.
pub fn radial_separation_constant(n: usize, mu: f64, k: usize) -> f64 {
    let k2 = (k * k) as f64;
    if n <= 2 {
        k2 * mu
    } else {
        let s = (n - 2) as f64;
        s * s + k2 * mu
    }
}

/// Interval `(s_lo, s_hi)` in `s = log(r^{2−n}/(n−2))` covered by
/// `1 < r < e^{π/√μ}`.
pub fn radial_interval(n: usize, mu: f64) -> (f64, f64) {
    let s = (n - 2) as f64;
    (-s * std::f64::consts::PI / mu.sqrt() - s.ln(), -s.ln())
}

/// `f(s) = −eˢ sin(√μ/(n−2) (s + log(n−2)))`.
pub fn radial_eigenfunction(n: usize, mu: f64, s: f64) -> Result<f64, ChainError> {
    if n < 3 || !(mu > 0.0) {
        return Err(ChainError::Domain(format!("radial factor needs n >= 3 and mu > 0, got n = {n}, mu = {mu}")));
    }
    let (lo, hi) = radial_interval(n, mu);
    let tol = 1e-12 * (lo.abs() + hi.abs());
    if !(s >= lo - tol && s <= hi + tol) {
        return Err(ChainError::Domain(format!("s = {s} outside [{lo}, {hi}]")));
    }
    let t = (n - 2) as f64;
    Ok(-s.exp() * (mu.sqrt() / t * (s + t.ln())).sin())
}

/// `α_i = n − 1 − i/2` for `2 ≤ i < n`, and `α_n = n/2 − 1`.
pub fn alpha_exponent(n: usize, i: usize) -> Result<f64, ChainError> {
    if i < 2 || i > n {
        return Err(ChainError::IndexOutOfRange { n, i });
    }
    Ok(if i == n { n as f64 / 2.0 - 1.0 } else { n as f64 - 1.0 - i as f64 / 2.0 })
}

/// The level-`i` problem on `(−δ_i, δ_i)` with shift `κ_{i−1} − α_i²`.
pub fn level_problem(kappa_prev: f64, alpha: f64, half_width: f64) -> Result<WeightedSLProblem, ChainError> {
    Ok(WeightedSLProblem::new(half_width, kappa_prev - alpha * alpha, WeightMode::Secant2)?)
}

/// `κ_i = Λ₁ + α_i(α_i − 1)` for the level-`i` problem.
pub fn kappa_step(kappa_prev: f64, n: usize, i: usize, delta_i: f64, cfg: &SolverConfig) -> Result<f64, ChainError> {
    if i >= n {
        return Err(ChainError::IndexOutOfRange { n, i });
    }
    let alpha = alpha_exponent(n, i)?;
    let p = level_problem(kappa_prev, alpha, delta_i)?;
    Ok(slcore::shooting_eigenvalue(&p, 1, cfg)? + alpha * (alpha - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaChain {
    pub n: usize,
    pub mu: f64,
    pub deltas: Vec<f64>,
    pub l: f64,
    /// `κ₁, …, κ_{n−1}`.
    pub kappas: Vec<f64>,
    /// `α₂, …, α_n`.
    pub alphas: Vec<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `λ₂ − λ₁` of the last level, from the even/odd Wronskian identity.
    pub gap: ExtFloat,
}

impl KappaChain {
    /// `κ_i − α_i(α_i−1) − cos²δ_i (κ_{i−1} − α_i²)` for `i = 2..n−1`.
    pub fn bound_margins(&self) -> Vec<f64> {
        self.deltas
            .iter()
            .enumerate()
            .map(|(j, delta)| {
                let alpha = self.alphas[j];
                let lhs = self.kappas[j + 1] - alpha * (alpha - 1.0);
                let rhs = delta.cos().powi(2) * (self.kappas[j] - alpha * alpha);
                lhs - rhs
            })
            .collect()
    }
}

fn validate(n: usize, mu: f64, deltas: &[f64], l: f64) -> Result<(), ChainError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(ChainError::Domain(format!("mu = {mu} must be positive")));
    }
    if deltas.len() + 2 != n {
        return Err(ChainError::Domain(format!(
            "n = {n} needs {} angular half-widths, got {}",
            n.saturating_sub(2),
            deltas.len()
        )));
    }
    for v in deltas.iter().chain(std::iter::once(&l)) {
        if !(*v > 0.0 && *v < std::f64::consts::FRAC_PI_2) {
            return Err(ChainError::Domain(format!("half-width {v} must lie in (0, pi/2)")));
        }
    }
    Ok(())
}

/// Runs the chain for any `n ≥ 2`; `n = 2` has no intermediate levels and
/// reduces to the planar problem.
pub fn run_chain(n: usize, mu: f64, deltas: &[f64], l: f64, cfg: &SolverConfig) -> Result<KappaChain, ChainError> {
    validate(n, mu, deltas, l)?;
    let mut kappas = vec![radial_separation_constant(n, mu, 1)];
    let mut alphas = Vec::with_capacity(n - 1);
    for (j, delta) in deltas.iter().enumerate() {
        let i = j + 2;
        alphas.push(alpha_exponent(n, i)?);
        let prev = *kappas.last().expect("kappa1");
        kappas.push(kappa_step(prev, n, i, *delta, cfg)?);
    }
    let alpha_n = alpha_exponent(n, n)?;
    alphas.push(alpha_n);
    let top = level_problem(*kappas.last().expect("kappa"), alpha_n, l)?;
    let pair = slcore::solve_lowest_pair(&top, cfg)?;
    let shift = alpha_n * (alpha_n - 1.0);
    Ok(KappaChain {
        n,
        mu,
        deltas: deltas.to_vec(),
        l,
        kappas,
        alphas,
        lambda1: pair.lambda1 + shift,
        lambda2: pair.lambda2 + shift,
        gap: pair.gap,
    })
}

/// `λ₁`, `λ₂`, and their gap for the `n`-dimensional strip, `n ≥ 3`.
pub fn chain_gap(n: usize, mu: f64, deltas: &[f64], l: f64, cfg: &SolverConfig) -> Result<KappaChain, ChainError> {
    if n < 3 {
        return Err(ChainError::Domain(format!("chain needs n >= 3, got {n}")));
    }
    run_chain(n, mu, deltas, l, cfg)
}
