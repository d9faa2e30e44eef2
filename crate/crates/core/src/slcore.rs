//! Weighted Sturm–Liouville eigenproblems `h″ + (Λ w(φ) − m) h = 0` on
//! `(−a, a)` with Dirichlet ends, solved by Prüfer shooting and,
//! independently, by a finite-difference pencil with Sturm bisection.
//!
//! The weight is even, so every eigenfunction has a parity and both solvers
//! work on the half interval `[0, a]`: even modes with `h′(0) = 0`, odd
//! modes with `h(0) = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extfloat::ExtFloat;
use crate::ode::{self, Dopri5Options, OdeError, StepStats};
use crate::quad;

/// Largest admissible half-width; keeps `sec²φ ≤ ~10⁶`.
pub const MAX_HALF_WIDTH: f64 = FRAC_PI_2 - 1e-3;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no convergence for index {index}: {reason}")]
    NoConvergence { index: usize, reason: String },
    #[error("lambda = {lambda} is not an eigenvalue: residual {residual:e} exceeds {threshold:e}")]
    NotAnEigenvalue { lambda: f64, residual: f64, threshold: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    Secant2,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of the index-`k` eigenfunction and its rank within that parity.
    pub fn of_index(k: usize) -> (Parity, usize) {
        if k % 2 == 1 {
            (Parity::Even, k.div_ceil(2))
        } else {
            (Parity::Odd, k / 2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSLProblem {
    pub a: f64,
    pub m: f64,
    pub weight_mode: WeightMode,
}

impl WeightedSLProblem {
    pub fn new(a: f64, m: f64, weight_mode: WeightMode) -> Result<Self, SolverError> {
        if !(a > 0.0 && a <= MAX_HALF_WIDTH) {
            return Err(SolverError::Config(format!("half-width a = {a} must lie in (0, pi/2 - 1e-3]")));
        }
        if !m.is_finite() {
            return Err(SolverError::Config(format!("shift m = {m} must be finite")));
        }
        Ok(Self { a, m, weight_mode })
    }

    #[inline]
    pub fn weight(&self, phi: f64) -> f64 {
        match self.weight_mode {
            WeightMode::Secant2 => {
                let c = phi.cos();
                1.0 / (c * c)
            }
            WeightMode::Unit => 1.0,
        }
    }

    /// Eigenvalue `(kπ/2a)² + m` of the unit-weight problem.
    pub fn unit_eigenvalue(&self, k: usize) -> f64 {
        let t = k as f64 * PI / (2.0 * self.a);
        t * t + self.m
    }

    /// Bracket for `Λ_k` from comparing Rayleigh quotients with the unit
    /// weight, using `1 ≤ w ≤ sec²a`.
    pub fn courant_bracket(&self, k: usize) -> (f64, f64) {
        let x = self.unit_eigenvalue(k);
        match self.weight_mode {
            WeightMode::Unit => (x, x),
            WeightMode::Secant2 => {
                let c2 = self.a.cos().powi(2);
                (x.min(c2 * x), x.max(c2 * x))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative width at which eigenvalue bisection stops.
    pub rel_tol: f64,
    pub max_index: usize,
    /// Bracket expansions allowed before giving up.
    pub max_expansions: usize,
    pub ode_rtol: f64,
    pub ode_atol: f64,
    /// Minimum accepted integration steps per unit of `√m` across `[0, a]`.
    pub steps_per_sqrt_m: f64,
    /// Full-interval resolution of the matrix oracle.
    pub matrix_n: usize,
    /// Full-interval sample count; `None` selects `default_grid_intervals`.
    pub grid_intervals: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_index: 4,
            max_expansions: 60,
            ode_rtol: 1e-12,
            ode_atol: 1e-13,
            steps_per_sqrt_m: 32.0,
            matrix_n: 1 << 16,
            grid_intervals: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(1e-14..=1e-6).contains(&self.rel_tol) {
            return Err(SolverError::Config(format!("rel_tol = {} outside [1e-14, 1e-6]", self.rel_tol)));
        }
        if self.max_index == 0 {
            return Err(SolverError::Config("max_index must be at least 1".into()));
        }
        if !(self.ode_rtol > 0.0 && self.ode_atol > 0.0) {
            return Err(SolverError::Config("ODE tolerances must be positive".into()));
        }
        if self.matrix_n < 64 {
            return Err(SolverError::Config(format!("matrix_n = {} < 64", self.matrix_n)));
        }
        if let Some(n) = self.grid_intervals {
            if n < 16 || n % 4 != 0 {
                return Err(SolverError::Config(format!(
                    "grid_intervals = {n} must be a multiple of 4 and at least 16"
                )));
            }
        }
        Ok(())
    }

    pub fn grid_intervals_for(&self, m: f64) -> usize {
        self.grid_intervals.unwrap_or_else(|| default_grid_intervals(m))
    }

    fn check_index(&self, k: usize) -> Result<(), SolverError> {
        if k == 0 || k > self.max_index {
            return Err(SolverError::Config(format!("index k = {k} outside 1..={}", self.max_index)));
        }
        Ok(())
    }
}

/// `max(4096, ⌈64√|m|⌉)` rounded up to a multiple of 4.
pub fn default_grid_intervals(m: f64) -> usize {
    let n = 4096usize.max((64.0 * m.abs().sqrt()).ceil() as usize);
    n.div_ceil(4) * 4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub index: usize,
    pub lambda: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub parity: Parity,
    /// Set by the matrix solver when successive resolutions disagree.
    pub warning: Option<String>,
}

impl EigenSolution {
    pub fn delta(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn interior_zeros(&self) -> usize {
        let v = &self.values;
        let n = v.len() - 1;
        let crossings = (1..n - 1).filter(|&i| v[i] * v[i + 1] < 0.0).count();
        let touches = (1..n).filter(|&i| v[i] == 0.0 && v[i - 1] * v[i + 1] < 0.0).count();
        crossings + touches
    }
}

/// Prüfer state `(θ, ln ρ)` with `h = ρ sin θ`, `h′ = ρ cos θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub phi: f64,
    pub theta: f64,
    pub ln_rho: f64,
}

impl PhasePoint {
    pub fn h(&self) -> ExtFloat {
        let s = self.theta.sin();
        if s == 0.0 {
            return ExtFloat::ZERO;
        }
        ExtFloat::from_ln(self.ln_rho + s.abs().ln(), s < 0.0)
    }

    pub fn dh(&self) -> ExtFloat {
        let c = self.theta.cos();
        if c == 0.0 {
            return ExtFloat::ZERO;
        }
        ExtFloat::from_ln(self.ln_rho + c.abs().ln(), c < 0.0)
    }

    /// `ln|h|`, `−∞` at a node of `h`.
    pub fn ln_abs_h(&self) -> f64 {
        self.ln_rho + self.theta.sin().abs().ln()
    }
}

fn start_phase(parity: Parity) -> f64 {
    match parity {
        Parity::Even => FRAC_PI_2,
        Parity::Odd => 0.0,
    }
}

fn ode_options(p: &WeightedSLProblem, cfg: &SolverConfig) -> Dopri5Options {
    let steps = (cfg.steps_per_sqrt_m * p.m.abs().max(1.0).sqrt()).ceil();
    Dopri5Options { rtol: cfg.ode_rtol, atol: cfg.ode_atol, h_max: p.a / steps, max_steps: 50_000_000 }
}

/// Integrates the Prüfer system outward from `φ = 0` through the ascending
/// `nodes` (the first must be 0). The start is `h(0) = 1` for even parity and
/// `h′(0) = 1` for odd parity.
pub fn trace_half(
    p: &WeightedSLProblem,
    lambda: f64,
    parity: Parity,
    nodes: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<PhasePoint>, SolverError> {
    if nodes.first() != Some(&0.0) {
        return Err(SolverError::Config("trace must start at phi = 0".into()));
    }
    let opts = ode_options(p, cfg);
    let mut stats = StepStats::default();
    let rhs = |phi: f64, y: &[f64; 2]| {
        let q = lambda * p.weight(phi) - p.m;
        let (s, c) = y[0].sin_cos();
        [c * c + q * s * s, (1.0 - q) * s * c]
    };
    let mut out = Vec::with_capacity(nodes.len());
    let mut y = [start_phase(parity), 0.0];
    let mut h = opts.h_max;
    out.push(PhasePoint { phi: 0.0, theta: y[0], ln_rho: y[1] });
    for w in nodes.windows(2) {
        let (ny, nh) = ode::integrate(rhs, w[0], y, w[1], h, &opts, &mut stats)?;
        y = ny;
        h = nh;
        out.push(PhasePoint { phi: w[1], theta: y[0], ln_rho: y[1] });
    }
    Ok(out)
}

fn end_phase(p: &WeightedSLProblem, lambda: f64, parity: Parity, cfg: &SolverConfig) -> Result<f64, SolverError> {
    Ok(trace_half(p, lambda, parity, &[0.0, p.a], cfg)?[1].theta)
}

/// Bisection on a function increasing in `Λ` whose root is the eigenvalue.
fn bisect_eigenvalue<F>(index: usize, bracket: (f64, f64), cfg: &SolverConfig, mut below: F) -> Result<f64, SolverError>
where
    F: FnMut(f64) -> Result<bool, SolverError>,
{
    let (mut lo, mut hi) = bracket;
    let mut width = (hi - lo).max(1e-3 * hi.abs().max(1.0));
    if lo == hi {
        lo -= width;
        hi += width;
    }
    let mut expansions = 0;
    while !below(lo)? {
        expansions += 1;
        if expansions > cfg.max_expansions {
            return Err(SolverError::NoConvergence { index, reason: format!("lower bracket exhausted at {lo}") });
        }
        hi = lo;
        lo -= width;
        width *= 2.0;
    }
    while below(hi)? {
        expansions += 1;
        if expansions > cfg.max_expansions {
            return Err(SolverError::NoConvergence { index, reason: format!("upper bracket exhausted at {hi}") });
        }
        lo = hi;
        hi += width;
        width *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= cfg.rel_tol * mid.abs().max(f64::MIN_POSITIVE) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(SolverError::NoConvergence { index, reason: "bisection did not terminate".into() })
}

/// `Λ_k` by Prüfer shooting, without sampling the eigenfunction.
pub fn shooting_eigenvalue(p: &WeightedSLProblem, k: usize, cfg: &SolverConfig) -> Result<f64, SolverError> {
    cfg.validate()?;
    cfg.check_index(k)?;
    let (parity, j) = Parity::of_index(k);
    let target = j as f64 * PI;
    bisect_eigenvalue(k, p.courant_bracket(k), cfg, |lam| Ok(end_phase(p, lam, parity, cfg)? < target))
}

pub fn solve_eigen_shooting(p: &WeightedSLProblem, k: usize, cfg: &SolverConfig) -> Result<EigenSolution, SolverError> {
    let lambda = shooting_eigenvalue(p, k, cfg)?;
    let (parity, _) = Parity::of_index(k);
    let mut sol = eigenfunction_samples(p, lambda, parity, cfg.grid_intervals_for(p.m), cfg)?;
    sol.index = k;
    Ok(sol)
}

fn full_grid(a: f64, n: usize) -> Vec<f64> {
    let mut g = quad::uniform(-a, a, n);
    g[n / 2] = 0.0;
    for i in 0..n / 2 {
        g[n - i] = -g[i];
    }
    g
}

/// Reflects half-interval samples `h(0..a)` to the full grid.
fn reflect(half: &[f64], parity: Parity) -> Vec<f64> {
    let n2 = half.len() - 1;
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut v = Vec::with_capacity(2 * n2 + 1);
    v.extend(half[1..].iter().rev().map(|x| sign * x));
    v.extend_from_slice(half);
    v
}

/// Endpoint zeros, unit weighted norm, and positive first extremum from `−a`.
fn finish_samples(p: &WeightedSLProblem, grid: &[f64], values: &mut [f64]) -> Result<(), SolverError> {
    let n = values.len() - 1;
    values[0] = 0.0;
    values[n] = 0.0;
    let delta = grid[1] - grid[0];
    let wh2: Vec<f64> = grid.iter().zip(values.iter()).map(|(x, h)| p.weight(*x) * h * h).collect();
    let norm = quad::simpson(&wh2, delta);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(SolverError::Degenerate("eigenfunction has zero weighted norm".into()));
    }
    let mut scale = 1.0 / norm.sqrt();
    let first_peak = (1..n)
        .find(|&i| values[i].abs() >= values[i - 1].abs() && values[i].abs() > values[i + 1].abs())
        .unwrap_or(n / 2);
    if values[first_peak] < 0.0 {
        scale = -scale;
    }
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(())
}

/// Samples the eigenfunction of parity `parity` at a computed eigenvalue on
/// `n` full-grid intervals, after checking the discrete residual.
pub fn eigenfunction_samples(
    p: &WeightedSLProblem,
    lambda: f64,
    parity: Parity,
    n: usize,
    cfg: &SolverConfig,
) -> Result<EigenSolution, SolverError> {
    if n < 16 || n % 4 != 0 {
        return Err(SolverError::Config(format!("grid intervals {n} must be a multiple of 4, at least 16")));
    }
    let grid = full_grid(p.a, n);
    let nodes = &grid[n / 2..];
    let trace = trace_half(p, lambda, parity, nodes, cfg)?;
    let top = trace.iter().map(|t| t.ln_rho).fold(f64::NEG_INFINITY, f64::max);
    let half: Vec<f64> = trace.iter().map(|t| (t.ln_rho - top).exp() * t.theta.sin()).collect();
    let mut values = reflect(&half, parity);
    if parity == Parity::Odd {
        values[n / 2] = 0.0;
    }
    finish_samples(p, &grid, &mut values)?;

    let delta = grid[1] - grid[0];
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..=n {
        let q = (lambda * p.weight(grid[i])).abs() + p.m.abs();
        scale = scale.max(q * values[i].abs());
    }
    for i in 2..=n - 2 {
        let d2: f64 = (0..5).map(|k| quad::D2_CENTRAL[k] * values[i + k - 2]).sum::<f64>() / (12.0 * delta * delta);
        let r = d2 + (lambda * p.weight(grid[i]) - p.m) * values[i];
        residual = residual.max(r.abs());
    }
    let threshold = 1e-6 * scale;
    if !(residual <= threshold) {
        return Err(SolverError::NotAnEigenvalue { lambda, residual, threshold });
    }
    let index = {
        let j = (trace[trace.len() - 1].theta / PI).round() as usize;
        match parity {
            Parity::Even => 2 * j.max(1) - 1,
            Parity::Odd => 2 * j.max(1),
        }
    };
    Ok(EigenSolution { index, lambda, grid, values, parity, warning: None })
}

/// Symmetric tridiagonal pencil `(A − ΛW)` for one parity, scaled by `Δ²`:
/// diagonal `2 + (m − Λw_j)Δ²`, off-diagonals −1.
///
/// Elimination runs on `r_j = d_j − 1`, where `d_j` are the LDLᵀ pivots, so
/// the `O(Δ²)` information is never added to the leading 2.
struct HalfPencil {
    m_d2: f64,
    w_d2: Vec<f64>,
    /// The even pencil halves its first row.
    halved_first: bool,
}

impl HalfPencil {
    fn new(p: &WeightedSLProblem, parity: Parity, n: usize) -> Self {
        let half = n / 2;
        let delta = 2.0 * p.a / n as f64;
        let d2 = delta * delta;
        let first = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        let mut w_d2: Vec<f64> = (first..half).map(|j| d2 * p.weight(j as f64 * delta)).collect();
        if parity == Parity::Even {
            w_d2[0] *= 0.5;
        }
        Self { m_d2: p.m * d2, w_d2, halved_first: parity == Parity::Even }
    }

    fn len(&self) -> usize {
        self.w_d2.len()
    }

    /// `r_j` for the shifted pencil `A − σW`.
    fn shifted_pivots(&self, sigma: f64) -> Vec<f64> {
        let mut r = Vec::with_capacity(self.len());
        let mut prev = f64::INFINITY;
        for (j, w) in self.w_d2.iter().enumerate() {
            let mut cur = if j == 0 && self.halved_first {
                0.5 * self.m_d2 - sigma * w
            } else {
                let carry = if prev.is_infinite() { 1.0 } else { prev / (1.0 + prev) };
                self.m_d2 - sigma * w + carry
            };
            if cur == -1.0 {
                cur = -1.0 - f64::EPSILON;
            }
            r.push(cur);
            prev = cur;
        }
        r
    }

    /// Number of eigenvalues strictly below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        self.shifted_pivots(lambda).iter().filter(|r| 1.0 + **r < 0.0).count()
    }

    fn eigenvalue(&self, j: usize, bracket: (f64, f64), cfg: &SolverConfig, k: usize) -> Result<f64, SolverError> {
        let strict = SolverConfig { rel_tol: 1e-14, ..*cfg };
        bisect_eigenvalue(k, bracket, &strict, |lam| Ok(self.count_below(lam) < j))
    }

    /// Inverse iteration near `lambda`.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let shift = lambda * (1.0 + 1e-12);
        let denom: Vec<f64> = self.shifted_pivots(shift).iter().map(|r| 1.0 + r).collect();
        let mut x = vec![1.0; n];
        for _ in 0..4 {
            // L D Lᵀ y = W x with unit off-diagonal multipliers −1/d
            let mut y = vec![0.0; n];
            let mut carry = 0.0;
            for i in 0..n {
                y[i] = (x[i] * self.w_d2[i] + carry) / denom[i];
                carry = y[i];
            }
            for i in (0..n - 1).rev() {
                y[i] += y[i + 1] / denom[i];
            }
            let norm = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
            x = y.into_iter().map(|v| v / norm).collect();
        }
        x
    }
}

/// Raw second-order finite-difference `Λ_k` on `n` full-grid intervals.
pub fn matrix_eigenvalue(p: &WeightedSLProblem, k: usize, n: usize, cfg: &SolverConfig) -> Result<f64, SolverError> {
    if n < 64 || n % 4 != 0 {
        return Err(SolverError::Config(format!("matrix N = {n} must be a multiple of 4, at least 64")));
    }
    cfg.check_index(k)?;
    let (parity, j) = Parity::of_index(k);
    HalfPencil::new(p, parity, n).eigenvalue(j, p.courant_bracket(k), cfg, k)
}

/// Finite-difference solution on `n` intervals. With `richardson`, the
/// eigenvalue is `(4Λ_{2N} − Λ_N)/3`.
pub fn solve_eigen_matrix(
    p: &WeightedSLProblem,
    k: usize,
    n: usize,
    richardson: bool,
    cfg: &SolverConfig,
) -> Result<EigenSolution, SolverError> {
    let coarse = matrix_eigenvalue(p, k, n, cfg)?;
    let fine = matrix_eigenvalue(p, k, 2 * n, cfg)?;
    let spread = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
    let warning = (spread > 1e-4)
        .then(|| format!("N = {n} under-resolves index {k}: consecutive estimates differ by {spread:.3e}"));
    let lambda = if richardson { (4.0 * fine - coarse) / 3.0 } else { coarse };

    let (parity, _) = Parity::of_index(k);
    let pencil = HalfPencil::new(p, parity, n);
    let vec = pencil.eigenvector(coarse);
    let mut half = Vec::with_capacity(n / 2 + 1);
    if parity == Parity::Odd {
        half.push(0.0);
    }
    half.extend_from_slice(&vec);
    half.push(0.0);
    let grid = full_grid(p.a, n);
    let mut values = reflect(&half, parity);
    finish_samples(p, &grid, &mut values)?;
    Ok(EigenSolution { index: k, lambda, grid, values, parity, warning })
}

/// `(∫ h′² + m h²) / ∫ w h²` on a uniform grid with an even number of
/// intervals, fourth-order differences, and Simpson quadrature.
pub fn rayleigh_quotient(grid: &[f64], values: &[f64], m: f64, weight_mode: WeightMode) -> Result<f64, SolverError> {
    let n = values.len().saturating_sub(1);
    if grid.len() != values.len() || n < 4 || n % 2 != 0 {
        return Err(SolverError::Config(format!(
            "rayleigh quotient needs matching grids with an even number (>= 4) of intervals, got {n}"
        )));
    }
    let delta = grid[1] - grid[0];
    let dh = quad::derivative(values, delta);
    let top: Vec<f64> = dh.iter().zip(values).map(|(d, h)| d * d + m * h * h).collect();
    let bottom: Vec<f64> = grid
        .iter()
        .zip(values)
        .map(|(x, h)| {
            let w = match weight_mode {
                WeightMode::Secant2 => x.cos().powi(-2),
                WeightMode::Unit => 1.0,
            };
            w * h * h
        })
        .collect();
    let den = quad::simpson(&bottom, delta);
    if !(den > 0.0) {
        return Err(SolverError::Degenerate("identically zero samples".into()));
    }
    Ok(quad::simpson(&top, delta) / den)
}

/// `[cos²a (π²/4a² + m), m + π²/4a²]`, which contains `Λ₁`.
pub fn bracket_lambda1(p: &WeightedSLProblem) -> Result<(f64, f64), SolverError> {
    let x = p.unit_eigenvalue(1);
    match p.weight_mode {
        WeightMode::Unit => Ok((x, x)),
        WeightMode::Secant2 => {
            if !(p.m > 0.0) {
                return Err(SolverError::Config(format!("bracket needs m > 0, got {}", p.m)));
            }
            Ok((p.a.cos().powi(2) * x, x))
        }
    }
}

/// The two lowest eigenvalues and their gap.
///
/// `gap` comes from the Wronskian identity between the even and odd
/// half-interval solutions, `Λ₂ − Λ₁ = h₁(0) h₂′(0) / ∫₀ᵃ w h₁ h₂`, which
/// stays accurate long after `Λ₂ − Λ₁` falls below the resolution of `Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowestPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: ExtFloat,
    /// `lambda2 − lambda1` in double precision.
    pub gap_subtracted: f64,
}

pub fn solve_lowest_pair(p: &WeightedSLProblem, cfg: &SolverConfig) -> Result<LowestPair, SolverError> {
    let lambda1 = shooting_eigenvalue(p, 1, cfg)?;
    let lambda2 = shooting_eigenvalue(p, 2, cfg)?;
    let gap = wronskian_gap(p, lambda1, lambda2, cfg.grid_intervals_for(p.m) / 2, cfg)?;
    Ok(LowestPair { lambda1, lambda2, gap, gap_subtracted: lambda2 - lambda1 })
}

/// `1 / ∫₀ᵃ w h_e h_o` with `h_e(0) = 1`, `h_o′(0) = 1`, on `half_n`
/// Simpson intervals.
pub fn wronskian_gap(
    p: &WeightedSLProblem,
    lambda_even: f64,
    lambda_odd: f64,
    half_n: usize,
    cfg: &SolverConfig,
) -> Result<ExtFloat, SolverError> {
    let half_n = half_n + half_n % 2;
    let nodes = quad::uniform(0.0, p.a, half_n);
    let even = trace_half(p, lambda_even, Parity::Even, &nodes, cfg)?;
    let odd = trace_half(p, lambda_odd, Parity::Odd, &nodes, cfg)?;
    let integrand: Vec<ExtFloat> =
        nodes.iter().zip(even.iter().zip(&odd)).map(|(x, (e, o))| (e.h() * o.h()).mul_f64(p.weight(*x))).collect();
    let overlap = quad::simpson_ext(&integrand, p.a / half_n as f64);
    if !(overlap > ExtFloat::ZERO) {
        return Err(SolverError::Degenerate("non-positive even/odd overlap".into()));
    }
    Ok(ExtFloat::ONE / overlap)
}
