//! Fundamental-gap analysis for the planar strip.
//!
//! The first eigenfunction is resampled on a composite grid that resolves the
//! shrinking interval `[−φ₁, φ₁]`, `φ₁ = φ₀/μ`, where the odd test function
//! `ψ h₁` differs from `± h₁`. Values are carried as [`ExtFloat`] since
//! `h₁(0)` decays like `exp(−c√μ)` and leaves the double range near
//! `μ ~ 10⁵`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Dyadic;
use crate::extfloat::ExtFloat;
use crate::geometry::{self, GeometryError, StripDomain};
use crate::quad::{self, d1_stencil, simpson_mult, D2_CENTRAL};
use crate::slcore::{self, Parity, SolverConfig, SolverError, WeightMode, WeightedSLProblem};

/// Intervals of the inner segment on each side of 0.
pub const INNER_HALF_INTERVALS: usize = 512;
const MIN_INNER_INTERVALS: usize = 64;
const INNER: usize = 2;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GapError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("shape anomaly: {0}")]
    ShapeAnomaly(String),
    #[error("inner interval unresolved: {0}")]
    Unresolved(String),
}

/// The standard sweep `μ = 10^{2 + j/2}`, `j = 0..8`.
pub fn standard_mu_sweep() -> Vec<f64> {
    (0..9).map(|j| 10f64.powf(2.0 + 0.5 * j as f64)).collect()
}

pub fn default_phi0(l: f64) -> f64 {
    0.25 * l
}

/// `1 − (cos 2φ₀ / cos φ₀)²`.
pub fn c1_constant(phi0: f64) -> f64 {
    let r = (2.0 * phi0).cos() / phi0.cos();
    1.0 - r * r
}

/// `(λ₁/μ − cos²L) / (cos²φ₀ − cos²L)`.
pub fn b_bound(mu: f64, lambda1: f64, l: f64, phi0: f64) -> f64 {
    let cl = l.cos().powi(2);
    (lambda1 / mu - cl) / (phi0.cos().powi(2) - cl)
}

/// `ln cosh z` without overflow.
fn ln_cosh(z: f64) -> f64 {
    let z = z.abs();
    z + (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2
}

/// Uniformly spaced run of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub delta: f64,
    pub phi: Vec<f64>,
    pub h: Vec<ExtFloat>,
    /// `h′` from the Prüfer state, not from differencing.
    pub dh: Vec<ExtFloat>,
}

impl Segment {
    fn intervals(&self) -> usize {
        self.phi.len() - 1
    }

    fn reflected(&self, parity_sign: f64) -> Segment {
        Segment {
            delta: self.delta,
            phi: self.phi.iter().rev().map(|x| -x).collect(),
            h: self.h.iter().rev().map(|v| v.mul_f64(parity_sign)).collect(),
            dh: self.dh.iter().rev().map(|v| v.mul_f64(-parity_sign)).collect(),
        }
    }
}

/// Even first eigenfunction on `[−a, a]` split at `±φ₀` and `±φ₁`, with
/// unit weighted norm under composite Simpson quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub problem: WeightedSLProblem,
    pub lambda: f64,
    pub phi0: f64,
    pub phi1: f64,
    /// `[−a,−φ₀], [−φ₀,−φ₁], [−φ₁,φ₁], [φ₁,φ₀], [φ₀,a]`.
    pub segments: Vec<Segment>,
}

fn even_count(len: f64, delta: f64) -> usize {
    let n = ((len / delta).ceil() as usize).max(4);
    n + n % 2
}

impl Profile {
    pub fn build(
        problem: &WeightedSLProblem,
        lambda: f64,
        phi0: f64,
        phi1: f64,
        cfg: &SolverConfig,
    ) -> Result<Self, GapError> {
        let a = problem.a;
        if !(0.0 < phi1 && phi1 < phi0 && phi0 < a) {
            return Err(GapError::Config(format!(
                "need 0 < phi1 < phi0 < a, got phi1 = {phi1}, phi0 = {phi0}, a = {a}"
            )));
        }
        let base = a / (cfg.grid_intervals_for(problem.m) / 2) as f64;
        let parts = [
            (0.0, phi1, INNER_HALF_INTERVALS),
            (phi1, phi0, even_count(phi0 - phi1, base)),
            (phi0, a, even_count(a - phi0, base)),
        ];
        let grids: Vec<Vec<f64>> = parts.iter().map(|&(x0, x1, n)| quad::uniform(x0, x1, n)).collect();
        let mut nodes = grids[0].clone();
        for g in &grids[1..] {
            nodes.extend_from_slice(&g[1..]);
        }
        let trace = slcore::trace_half(problem, lambda, Parity::Even, &nodes, cfg)?;

        let mut half = Vec::with_capacity(3);
        let mut offset = 0;
        for (g, &(x0, x1, n)) in grids.iter().zip(&parts) {
            let pts = &trace[offset..offset + g.len()];
            half.push(Segment {
                delta: (x1 - x0) / n as f64,
                phi: g.clone(),
                h: pts.iter().map(|p| p.h()).collect(),
                dh: pts.iter().map(|p| p.dh()).collect(),
            });
            offset += g.len() - 1;
        }

        let mut norm = ExtFloat::ZERO;
        for s in &half {
            let wh2: Vec<ExtFloat> =
                s.phi.iter().zip(&s.h).map(|(x, h)| h.square().mul_f64(problem.weight(*x))).collect();
            norm += quad::simpson_ext(&wh2, s.delta);
        }
        let scale = ExtFloat::ONE / (norm.mul_f64(2.0)).sqrt();
        if !(scale > ExtFloat::ZERO) || !scale.is_finite() {
            return Err(GapError::ShapeAnomaly("eigenfunction has zero weighted norm".into()));
        }
        for s in &mut half {
            s.h.iter_mut().for_each(|v| *v *= scale);
            s.dh.iter_mut().for_each(|v| *v *= scale);
        }
        *half[2].h.last_mut().expect("outer segment") = ExtFloat::ZERO;

        let left_inner = half[0].reflected(1.0);
        let mut inner = left_inner.clone();
        inner.phi.extend_from_slice(&half[0].phi[1..]);
        inner.h.extend_from_slice(&half[0].h[1..]);
        inner.dh.extend_from_slice(&half[0].dh[1..]);
        inner.dh[INNER_HALF_INTERVALS] = ExtFloat::ZERO;
        let segments = vec![half[2].reflected(1.0), half[1].reflected(1.0), inner, half[1].clone(), half[2].clone()];
        Ok(Self { problem: *problem, lambda, phi0, phi1, segments })
    }

    pub fn inner(&self) -> &Segment {
        &self.segments[INNER]
    }

    pub fn at_zero(&self) -> ExtFloat {
        self.inner().h[INNER_HALF_INTERVALS]
    }

    /// Nodes of the right half `[0, a]` in order, with segment-local indices.
    fn right_half(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let inner = (INNER_HALF_INTERVALS..self.segments[INNER].phi.len()).map(|i| (INNER, i));
        let rest =
            (INNER + 1..self.segments.len()).flat_map(move |s| (1..self.segments[s].phi.len()).map(move |i| (s, i)));
        inner.chain(rest)
    }

    /// `h(φ)` sampled on every segment as `f64`, underflowing to 0.
    pub fn to_f64_samples(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for s in &self.segments {
            let skip = usize::from(!out.is_empty());
            out.extend(s.phi.iter().zip(&s.h).skip(skip).map(|(x, h)| (*x, h.to_f64())));
        }
        out
    }
}

/// Piecewise linear odd test function: `1` on `[−L, −φ₁]`, `−φ/φ₁` on
/// `[−φ₁, φ₁]`, `−1` on `[φ₁, L]`.
pub fn test_function_psi(phi0: f64, mu: f64, l: f64, grid: &[f64]) -> Result<Vec<f64>, GapError> {
    let phi1 = phi0 / mu;
    if !(phi1 > 0.0 && phi1 < l) {
        return Err(GapError::Config(format!("phi1 = phi0/mu = {phi1} must lie in (0, L = {l})")));
    }
    Ok(grid
        .iter()
        .map(|&x| {
            if x <= -phi1 {
                1.0
            } else if x >= phi1 {
                -1.0
            } else {
                -x / phi1
            }
        })
        .collect())
}

/// `ψ` sampled on every segment of the profile.
pub fn psi_on_profile(profile: &Profile, mu: f64) -> Result<Vec<Vec<f64>>, GapError> {
    profile.segments.iter().map(|s| test_function_psi(profile.phi0, mu, profile.problem.a, &s.phi)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcdTerms {
    pub a: ExtFloat,
    pub b: ExtFloat,
    pub c: ExtFloat,
    pub d: ExtFloat,
}

impl AbcdTerms {
    /// `(B + C + D) / (1 − A)`.
    pub fn reconstruction(&self) -> ExtFloat {
        (self.b + self.c + self.d) / (ExtFloat::ONE - self.a)
    }
}

fn fd_derivative(values: &[ExtFloat], delta: f64) -> Vec<ExtFloat> {
    quad::derivative_ext(values, delta)
}

/// Integrals over `[−φ₁, φ₁]` whose combination gives `R[ψh₁] − R[h₁]`:
/// `A = ∫(1 − ψ²) w h²`, `B = ∫((ψh)′² − h′²)`, `C = μ∫(ψ² − 1) h²`,
/// `D = λ₁ A`.
pub fn rayleigh_difference_terms(
    profile: &Profile,
    psi: &[Vec<f64>],
    mu: f64,
    lambda1: f64,
) -> Result<AbcdTerms, GapError> {
    let seg = profile.inner();
    if seg.intervals() < MIN_INNER_INTERVALS {
        return Err(GapError::Unresolved(format!(
            "{} intervals on [-phi1, phi1], need {MIN_INNER_INTERVALS}",
            seg.intervals()
        )));
    }
    let psi = &psi[INNER];
    let g: Vec<ExtFloat> = seg.h.iter().zip(psi).map(|(h, p)| h.mul_f64(*p)).collect();
    let dh = fd_derivative(&seg.h, seg.delta);
    let dg = fd_derivative(&g, seg.delta);
    let mut a_int = Vec::with_capacity(g.len());
    let mut b_int = Vec::with_capacity(g.len());
    let mut c_int = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let h2 = seg.h[i].square();
        let one_minus = 1.0 - psi[i] * psi[i];
        a_int.push(h2.mul_f64(one_minus * profile.problem.weight(seg.phi[i])));
        b_int.push(dg[i].square() - dh[i].square());
        c_int.push(h2.mul_f64(-one_minus));
    }
    let a = quad::simpson_ext(&a_int, seg.delta);
    let b = quad::simpson_ext(&b_int, seg.delta);
    let c = quad::simpson_ext(&c_int, seg.delta).mul_f64(mu);
    Ok(AbcdTerms { a, b, c, d: a.mul_f64(lambda1) })
}

/// Exact numerator and denominator of the discrete Rayleigh quotient of
/// `g = ψh` (or `h` when `psi` is `None`), both multiplied by `432 Πδ`,
/// the product running over all segments.
fn exact_quotient_parts(profile: &Profile, psi: Option<&[Vec<f64>]>, m: f64) -> (Dyadic, Dyadic) {
    let deltas: Vec<f64> = profile.segments.iter().map(|s| s.delta).collect();
    let m_exact = Dyadic::from_f64(m);
    let mut num = Dyadic::zero();
    let mut den = Dyadic::zero();
    for (si, seg) in profile.segments.iter().enumerate() {
        let others = deltas
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != si)
            .fold(Dyadic::from_i64(1), |acc, (_, d)| &acc * &Dyadic::from_f64(*d));
        let delta = Dyadic::from_f64(seg.delta);
        let mass_scale = &(&others * &(&delta * &delta)) * &Dyadic::from_i64(144);
        let g: Vec<Dyadic> = seg
            .h
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let h = Dyadic::from_ext(*h);
                match psi {
                    Some(p) => &h * &Dyadic::from_f64(p[si][i]),
                    None => h,
                }
            })
            .collect();
        let n = seg.intervals();
        let mut seg_deriv = Dyadic::zero();
        let mut seg_mass = Dyadic::zero();
        let mut seg_weight = Dyadic::zero();
        for i in 0..=n {
            let mult = Dyadic::from_i64(simpson_mult(i, n) as i64);
            let (start, c) = d1_stencil(i, n);
            let diff: Dyadic = (0..5).filter(|&k| c[k] != 0).map(|k| &Dyadic::from_i64(c[k]) * &g[start + k]).sum();
            let g2 = &g[i] * &g[i];
            seg_deriv = &seg_deriv + &(&mult * &(&diff * &diff));
            seg_mass = &seg_mass + &(&mult * &g2);
            let w = Dyadic::from_f64(profile.problem.weight(seg.phi[i]));
            seg_weight = &seg_weight + &(&mult * &(&w * &g2));
        }
        num = &num + &(&(&others * &seg_deriv) + &(&mass_scale * &(&m_exact * &seg_mass)));
        den = &den + &(&mass_scale * &seg_weight);
    }
    (num, den)
}

/// `R[ψh] − R[h]` from the two discrete quotients over the whole composite
/// grid, subtracted exactly.
pub fn direct_rayleigh_difference(profile: &Profile, psi: &[Vec<f64>], mu: f64) -> ExtFloat {
    let (n_psi, d_psi) = exact_quotient_parts(profile, Some(psi), mu);
    let (n_h, d_h) = exact_quotient_parts(profile, None, mu);
    let top = &(&n_psi * &d_h) - &(&n_h * &d_psi);
    top.ratio(&(&d_psi * &d_h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub h1_at_0: ExtFloat,
    pub h1_max: ExtFloat,
    pub max_location: f64,
    pub inflection_point: f64,
    /// `|cos²φ_IP − λ₁/μ|`.
    pub inflection_defect: f64,
    pub phi0: f64,
    pub phi1: f64,
    pub c1: f64,
    pub b_bound: f64,
    pub mass_center: ExtFloat,
    pub deriv_mass: ExtFloat,
    pub positive: bool,
    /// `max |h(φ) − h(−φ)| / max h`.
    pub evenness_defect: f64,
    pub envelope_lower_ok: bool,
    pub envelope_upper_ok: bool,
    pub envelopes_ok: bool,
    /// `ln(4b) − √(μc₁)φ₀/2 − 2 ln h₁(0)`; the bound holds when positive.
    pub h0_bound_margin: f64,
    pub h0_bound_ok: bool,
}

fn node(profile: &Profile, (s, i): (usize, usize)) -> (f64, ExtFloat, ExtFloat) {
    let seg = &profile.segments[s];
    (seg.phi[i], seg.h[i], seg.dh[i])
}

/// Sign changes of `h″/h` (fourth-order, segment-local) along `[0, a]`.
fn inflection(profile: &Profile) -> Option<f64> {
    let mut prev: Option<(f64, f64)> = None;
    for (s, seg) in profile.segments.iter().enumerate().skip(INNER) {
        let start = if s == INNER { INNER_HALF_INTERVALS } else { 2 };
        for i in start.max(2)..seg.phi.len().saturating_sub(2) {
            if seg.h[i].is_zero() {
                continue;
            }
            let sum: ExtFloat = (0..5).map(|k| (seg.h[i + k - 2] / seg.h[i]).mul_f64(D2_CENTRAL[k])).sum();
            let ratio = sum.to_f64() / (12.0 * seg.delta * seg.delta);
            let x = seg.phi[i];
            if let Some((px, pr)) = prev {
                if pr > 0.0 && ratio <= 0.0 {
                    return Some(px + (x - px) * pr / (pr - ratio));
                }
            }
            prev = Some((x, ratio));
        }
    }
    None
}

pub fn shape_report(profile: &Profile, mu: f64, lambda1: f64, phi0: f64) -> Result<ShapeReport, GapError> {
    let p = &profile.problem;
    let l = p.a;
    let h0 = profile.at_zero();

    let mut best = (INNER, INNER_HALF_INTERVALS);
    let mut h_max = h0;
    for idx in profile.right_half() {
        let (_, h, _) = node(profile, idx);
        if h > h_max {
            h_max = h;
            best = idx;
        }
    }
    if best == (INNER, INNER_HALF_INTERVALS) {
        return Err(GapError::ShapeAnomaly("no maximum away from phi = 0".into()));
    }
    let (x, h, dh) = node(profile, best);
    let q = lambda1 * p.weight(x) - p.m;
    let step = (dh / h).to_f64() / q;
    let delta = profile.segments[best.0].delta;
    let max_location = x + step.clamp(-delta, delta);

    let inflection_point =
        inflection(profile).ok_or_else(|| GapError::ShapeAnomaly("no inflection point on (0, a)".into()))?;
    let inflection_defect = (inflection_point.cos().powi(2) - lambda1 / mu).abs();

    let positive = profile
        .segments
        .iter()
        .flat_map(|s| s.h.iter().zip(&s.phi))
        .filter(|(_, x)| x.abs() < l)
        .all(|(h, _)| *h > ExtFloat::ZERO);

    let mut evenness_defect = 0.0f64;
    for s in 0..profile.segments.len() {
        let seg = &profile.segments[s];
        let mirror = &profile.segments[profile.segments.len() - 1 - s];
        let n = seg.intervals();
        for i in 0..=n {
            let d = (seg.h[i] - mirror.h[n - i]).abs() / h_max;
            evenness_defect = evenness_defect.max(d.to_f64());
        }
    }

    let c1 = c1_constant(phi0);
    let b = b_bound(mu, lambda1, l, phi0);
    let ln_h0 = h0.ln();
    let slack = 1e-9 * ln_h0.abs().max(1.0);
    let lower_rate = (mu * c1).sqrt();
    let upper_rate = mu.sqrt() * l.sin();
    let mut envelope_lower_ok = true;
    let mut envelope_upper_ok = true;
    for seg in &profile.segments[1..4] {
        for (x, h) in seg.phi.iter().zip(&seg.h) {
            if x.abs() >= phi0 {
                continue;
            }
            let ln_h = h.ln();
            envelope_lower_ok &= ln_h >= ln_h0 + ln_cosh(lower_rate * x) - slack;
            envelope_upper_ok &= ln_h <= ln_h0 + ln_cosh(upper_rate * x) + slack;
        }
    }

    let h0_bound_margin =
        if b > 0.0 { (4.0 * b).ln() - 0.5 * lower_rate * phi0 - 2.0 * ln_h0 } else { f64::NEG_INFINITY };

    let inner = profile.inner();
    let h2: Vec<ExtFloat> = inner.h.iter().map(|h| h.square()).collect();
    let dh2: Vec<ExtFloat> = inner.dh.iter().map(|d| d.square()).collect();
    let mass_center = quad::simpson_ext(&h2, inner.delta).mul_f64(mu * mu);
    let deriv_mass = quad::simpson_ext(&dh2, inner.delta);

    Ok(ShapeReport {
        h1_at_0: h0,
        h1_max: h_max,
        max_location,
        inflection_point,
        inflection_defect,
        phi0,
        phi1: profile.phi1,
        c1,
        b_bound: b,
        mass_center,
        deriv_mass,
        positive,
        evenness_defect,
        envelope_lower_ok,
        envelope_upper_ok,
        envelopes_ok: envelope_lower_ok && envelope_upper_ok,
        h0_bound_margin,
        h0_bound_ok: h0_bound_margin > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralBounds {
    /// `∫_{−φ₀}^{φ₀} w h₁²`.
    pub weighted_mass: f64,
    pub b_bound: f64,
    pub holds: bool,
    /// `μ² ∫_{−φ₁}^{φ₁} h₁²`.
    pub mass_center: ExtFloat,
    /// `∫_{−φ₁}^{φ₁} h₁′²`.
    pub deriv_mass: ExtFloat,
}

pub fn integral_bound_check(profile: &Profile, mu: f64, lambda1: f64, phi0: f64) -> IntegralBounds {
    let p = &profile.problem;
    let mut mass = ExtFloat::ZERO;
    for seg in &profile.segments[1..4] {
        let wh2: Vec<ExtFloat> = seg.phi.iter().zip(&seg.h).map(|(x, h)| h.square().mul_f64(p.weight(*x))).collect();
        mass += quad::simpson_ext(&wh2, seg.delta);
    }
    let b = b_bound(mu, lambda1, p.a, phi0);
    let inner = profile.inner();
    let h2: Vec<ExtFloat> = inner.h.iter().map(|h| h.square()).collect();
    let dh2: Vec<ExtFloat> = inner.dh.iter().map(|d| d.square()).collect();
    let weighted_mass = mass.to_f64();
    IntegralBounds {
        weighted_mass,
        b_bound: b,
        holds: weighted_mass < b,
        mass_center: quad::simpson_ext(&h2, inner.delta).mul_f64(mu * mu),
        deriv_mass: quad::simpson_ext(&dh2, inner.delta),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub mu: f64,
    pub l: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `λ₂ − λ₁` from the even/odd Wronskian identity.
    pub gap: ExtFloat,
    /// `λ₂ − λ₁` by subtraction; zero once the pair is unresolved.
    pub gap_subtracted: f64,
    pub diameter: f64,
    pub d2gap: ExtFloat,
    /// `R[ψh₁] − R[h₁]` from the two quotients.
    pub rayleigh_upper: ExtFloat,
    /// `(B + C + D)/(1 − A)`.
    pub rayleigh_upper_terms: ExtFloat,
    pub terms: AbcdTerms,
    pub shape: ShapeReport,
    pub integral: IntegralBounds,
    /// `cos²L (π²/4L² + μ)`.
    pub lambda1_lower: f64,
    /// `μ cos²(L/2)`.
    pub lambda1_upper_half: f64,
}

impl GapReport {
    pub fn gap_bound_holds(&self) -> bool {
        self.gap <= self.rayleigh_upper + ExtFloat::from_f64(1e-9)
    }

    /// Relative mismatch between the two routes to `R[ψh₁] − R[h₁]`.
    pub fn terms_defect(&self) -> f64 {
        ((self.rayleigh_upper - self.rayleigh_upper_terms).abs() / self.rayleigh_upper.abs()).to_f64()
    }
}

pub fn analyze_gap(d: &StripDomain, phi0: f64, cfg: &SolverConfig) -> Result<GapReport, GapError> {
    if d.n != 2 {
        return Err(GeometryError::UnsupportedDimension(d.n).into());
    }
    let l = d.l;
    if !(phi0 > 0.0 && phi0 < 0.5 * l) {
        return Err(GapError::Config(format!("phi0 = {phi0} must lie in (0, L/2 = {})", 0.5 * l)));
    }
    let mu = d.mu;
    let problem = WeightedSLProblem::new(l, mu, WeightMode::Secant2)?;
    let pair = slcore::solve_lowest_pair(&problem, cfg)?;
    let diameter = geometry::diameter(d)?;

    let phi1 = phi0 / mu;
    let profile = Profile::build(&problem, pair.lambda1, phi0, phi1, cfg)?;
    let psi = psi_on_profile(&profile, mu)?;
    let terms = rayleigh_difference_terms(&profile, &psi, mu, pair.lambda1)?;
    let rayleigh_upper = direct_rayleigh_difference(&profile, &psi, mu);
    let shape = shape_report(&profile, mu, pair.lambda1, phi0)?;
    let integral = integral_bound_check(&profile, mu, pair.lambda1, phi0);

    Ok(GapReport {
        mu,
        l,
        lambda1: pair.lambda1,
        lambda2: pair.lambda2,
        gap: pair.gap,
        gap_subtracted: pair.gap_subtracted,
        diameter,
        d2gap: pair.gap.mul_f64(diameter * diameter),
        rayleigh_upper,
        rayleigh_upper_terms: terms.reconstruction(),
        terms,
        shape,
        integral,
        lambda1_lower: l.cos().powi(2) * (PI * PI / (4.0 * l * l) + mu),
        lambda1_upper_half: mu * (0.5 * l).cos().powi(2),
    })
}

/// Smallest index from which every later flag is set.
pub fn threshold_index(flags: &[bool]) -> Option<usize> {
    let tail = flags.iter().rev().take_while(|f| **f).count();
    (tail > 0).then(|| flags.len() - tail)
}

pub fn strictly_decreasing<T: PartialOrd>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

pub fn strictly_increasing<T: PartialOrd>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[1] > w[0])
}

/// Sweep-level view of a sequence of reports ordered by `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub mu: Vec<f64>,
    pub d2gap_decreasing: bool,
    pub d2gap_ratio: ExtFloat,
    pub below_euclidean: bool,
    /// First index from which `λ₁ ≤ μ cos²(L/2)` holds.
    pub upper_bracket_threshold: Option<usize>,
    pub lower_bracket_always: bool,
    pub ratio_decreasing: bool,
    pub excess_ratio: f64,
    pub peak_ratio_decreasing: bool,
    pub max_location_increasing: bool,
    pub envelope_threshold: Option<usize>,
    pub h0_bound_threshold: Option<usize>,
    pub mass_center_decreasing: bool,
    pub deriv_mass_decreasing: bool,
}

impl SweepSummary {
    pub fn from_reports(reports: &[GapReport]) -> Self {
        let d2: Vec<ExtFloat> = reports.iter().map(|r| r.d2gap).collect();
        let ratio: Vec<f64> = reports.iter().map(|r| r.lambda1 / r.mu).collect();
        let excess: Vec<f64> = reports.iter().map(|r| r.lambda1 / r.mu - r.l.cos().powi(2)).collect();
        let peaks: Vec<ExtFloat> = reports.iter().map(|r| r.shape.h1_at_0 / r.shape.h1_max).collect();
        let maxloc: Vec<f64> = reports.iter().map(|r| r.shape.max_location).collect();
        let mc: Vec<ExtFloat> = reports.iter().map(|r| r.shape.mass_center).collect();
        let dm: Vec<ExtFloat> = reports.iter().map(|r| r.shape.deriv_mass).collect();
        let euclid = ExtFloat::from_f64(3.0 * PI * PI);
        Self {
            mu: reports.iter().map(|r| r.mu).collect(),
            d2gap_decreasing: strictly_decreasing(&d2),
            d2gap_ratio: match (d2.first(), d2.last()) {
                (Some(a), Some(b)) => *b / *a,
                _ => ExtFloat::ONE,
            },
            below_euclidean: d2.iter().any(|v| *v < euclid),
            upper_bracket_threshold: threshold_index(
                &reports.iter().map(|r| r.lambda1 <= r.lambda1_upper_half).collect::<Vec<_>>(),
            ),
            lower_bracket_always: reports.iter().all(|r| r.lambda1_lower <= r.lambda1),
            ratio_decreasing: strictly_decreasing(&ratio) && excess.iter().all(|e| *e > 0.0),
            excess_ratio: match (excess.first(), excess.last()) {
                (Some(a), Some(b)) => b / a,
                _ => 1.0,
            },
            peak_ratio_decreasing: strictly_decreasing(&peaks),
            max_location_increasing: strictly_increasing(&maxloc),
            envelope_threshold: threshold_index(&reports.iter().map(|r| r.shape.envelopes_ok).collect::<Vec<_>>()),
            h0_bound_threshold: threshold_index(&reports.iter().map(|r| r.shape.h0_bound_ok).collect::<Vec<_>>()),
            mass_center_decreasing: strictly_decreasing(&mc),
            deriv_mass_decreasing: strictly_decreasing(&dm),
        }
    }
}
