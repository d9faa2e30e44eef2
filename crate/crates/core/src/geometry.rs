//! Poincaré half-plane geometry of the strip domains.
//!
//! Polar-like coordinates `(r, φ)` relate to the half-plane by
//! `x = r sin φ`, `y = r cos φ`; the strip is `1 ≤ r ≤ e^{π/√μ}`, `|φ| ≤ L`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("point ({x}, {y}) is not in the upper half-plane")]
    NotInHalfPlane { x: f64, y: f64 },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("operation requires n = 2, domain has n = {0}")]
    UnsupportedDimension(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(GeometryError::NotInHalfPlane { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn from_polar(r: f64, phi: f64) -> Result<Self, GeometryError> {
        Self::new(r * phi.sin(), r * phi.cos())
    }

    /// `(r, φ)` with `r > 0`, `|φ| < π/2`.
    pub fn to_polar(self) -> (f64, f64) {
        (self.x.hypot(self.y), self.x.atan2(self.y))
    }
}

/// Parameters of `Ω_{√μ, δ₂, …, δ_{n−1}, L}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripDomain {
    pub n: usize,
    pub mu: f64,
    pub l: f64,
    pub deltas: Vec<f64>,
}

fn in_open_quarter_turn(v: f64) -> bool {
    v > 0.0 && v < FRAC_PI_2
}

impl StripDomain {
    pub fn new(n: usize, mu: f64, l: f64, deltas: Vec<f64>) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::InvalidDomain(format!("dimension n = {n} < 2")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(GeometryError::InvalidDomain(format!("mu = {mu} must be positive")));
        }
        if !in_open_quarter_turn(l) {
            return Err(GeometryError::InvalidDomain(format!("L = {l} must lie in (0, pi/2)")));
        }
        if deltas.len() != n - 2 {
            return Err(GeometryError::InvalidDomain(format!(
                "expected {} angular half-widths for n = {n}, got {}",
                n - 2,
                deltas.len()
            )));
        }
        if let Some(d) = deltas.iter().find(|d| !in_open_quarter_turn(**d)) {
            return Err(GeometryError::InvalidDomain(format!("delta = {d} must lie in (0, pi/2)")));
        }
        Ok(Self { n, mu, l, deltas })
    }

    pub fn planar(mu: f64, l: f64) -> Result<Self, GeometryError> {
        Self::new(2, mu, l, Vec::new())
    }

    /// Outer radius `e^{π/√μ}`.
    pub fn outer_radius(&self) -> f64 {
        (PI / self.mu.sqrt()).exp()
    }

    /// Whether the `(r, φ)` point lies in the closed planar strip.
    pub fn contains_polar(&self, r: f64, phi: f64) -> bool {
        r >= 1.0 && r <= self.outer_radius() && phi.abs() <= self.l
    }

    fn require_planar(&self) -> Result<(), GeometryError> {
        if self.n != 2 {
            return Err(GeometryError::UnsupportedDimension(self.n));
        }
        Ok(())
    }
}

/// Hyperbolic distance in the half-plane model.
///
/// Evaluated as `2 asinh(|p − q| / (2√(y₁y₂)))`, which equals
/// `arcosh(1 + |p − q|²/(2y₁y₂))` without the cancellation near zero.
pub fn hyperbolic_distance(p: HalfPlanePoint, q: HalfPlanePoint) -> Result<f64, GeometryError> {
    for pt in [p, q] {
        if !(pt.y > 0.0) {
            return Err(GeometryError::NotInHalfPlane { x: pt.x, y: pt.y });
        }
    }
    let chord = (p.x - q.x).hypot(p.y - q.y);
    Ok(2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh())
}

/// `arcosh` of the classical distance argument, clamped at 1.
pub fn distance_from_cosh(arg: f64) -> f64 {
    arg.max(1.0).acosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerPoints {
    pub p: HalfPlanePoint,
    pub q: HalfPlanePoint,
    pub r: HalfPlanePoint,
    pub s: HalfPlanePoint,
    pub t: HalfPlanePoint,
    pub u: HalfPlanePoint,
}

pub fn corner_points(d: &StripDomain) -> Result<CornerPoints, GeometryError> {
    d.require_planar()?;
    let (s, c) = d.l.sin_cos();
    let big = d.outer_radius();
    let pt = |x: f64, y: f64| HalfPlanePoint { x, y };
    Ok(CornerPoints {
        p: pt(s, c),
        q: pt(big * s, big * c),
        r: pt(-big * s, big * c),
        s: pt(-s, c),
        t: pt(0.0, 1.0),
        u: pt(0.0, big),
    })
}

/// Diameter of the planar strip; realized between `P` and `R`.
pub fn diameter(d: &StripDomain) -> Result<f64, GeometryError> {
    let c = corner_points(d)?;
    hyperbolic_distance(c.p, c.r)
}

/// Closed form of `dist(P, R)` as an `arcosh`.
pub fn diameter_closed_form(d: &StripDomain) -> Result<f64, GeometryError> {
    d.require_planar()?;
    let e = d.outer_radius();
    let (s, c) = d.l.sin_cos();
    Ok(distance_from_cosh((1.0 + e * e + 2.0 * e * s * s) / (2.0 * e * c * c)))
}

/// `(arcosh(1 + 2 tan²L), arcosh(1 + 2 tan²L) + π/√μ)`.
pub fn diameter_bounds(d: &StripDomain) -> (f64, f64) {
    let t = d.l.tan();
    // arcosh(1 + 2t²) = 2 asinh(t)
    let lower = 2.0 * t.asinh();
    (lower, lower + PI / d.mu.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeckCheck {
    pub dist_rs: f64,
    pub dist_tu: f64,
    pub ratio_ok: bool,
}

/// Compares the side length `dist(R, S)` with the neck `dist(T, U)`.
pub fn neck_check(d: &StripDomain) -> Result<NeckCheck, GeometryError> {
    let c = corner_points(d)?;
    let dist_rs = hyperbolic_distance(c.r, c.s)?;
    let dist_tu = hyperbolic_distance(c.t, c.u)?;
    Ok(NeckCheck { dist_rs, dist_tu, ratio_ok: dist_rs >= dist_tu / d.l.cos() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{E, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn vertical_geodesic_is_log_ratio() {
        let d = hyperbolic_distance(pt(0.0, 1.0), pt(0.0, E)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        assert_eq!(hyperbolic_distance(pt(0.3, 2.0), pt(0.3, 2.0)).unwrap(), 0.0);
    }

    #[test]
    fn sp_distance_matches_tangent_form() {
        let l = FRAC_PI_4;
        let s = pt(-l.sin(), l.cos());
        let p = pt(l.sin(), l.cos());
        let d = hyperbolic_distance(s, p).unwrap();
        assert!((d - 3f64.acosh()).abs() < 1e-14);
        assert!((d - 1.762_747_174_039_086).abs() < 1e-12);
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
        let bad = HalfPlanePoint { x: 0.0, y: -1.0 };
        assert!(matches!(hyperbolic_distance(bad, pt(0.0, 1.0)), Err(GeometryError::NotInHalfPlane { .. })));
    }

    #[test]
    fn clamp_avoids_nan() {
        assert_eq!(distance_from_cosh(1.0 - 1e-16), 0.0);
    }

    #[test]
    fn corner_points_are_placed() {
        let d = StripDomain::planar(4.0, FRAC_PI_6).unwrap();
        let c = corner_points(&d).unwrap();
        assert_eq!(c.t, pt(0.0, 1.0));
        assert!((c.u.y - (PI / 2.0).exp()).abs() < 1e-14);
        let pq = hyperbolic_distance(c.p, c.q).unwrap();
        let rs = hyperbolic_distance(c.r, c.s).unwrap();
        assert!((pq - rs).abs() < 1e-14);
        let near_half = StripDomain::planar(7.0, FRAC_PI_2 - 1e-9).unwrap();
        assert_eq!(corner_points(&near_half).unwrap().t, pt(0.0, 1.0));
    }

    #[test]
    fn higher_dimension_is_refused() {
        let d = StripDomain::new(3, 100.0, FRAC_PI_3, vec![FRAC_PI_4]).unwrap();
        assert_eq!(diameter(&d), Err(GeometryError::UnsupportedDimension(3)));
        assert!(corner_points(&d).is_err());
    }

    #[test]
    fn domain_validation() {
        assert!(StripDomain::planar(100.0, FRAC_PI_2).is_err());
        assert!(StripDomain::planar(0.0, 1.0).is_err());
        assert!(StripDomain::new(3, 100.0, 1.0, vec![]).is_err());
        assert!(StripDomain::new(4, 100.0, 1.0, vec![0.5, 2.0]).is_err());
    }

    #[test]
    fn diameter_at_large_mu() {
        let d = StripDomain::planar(1e6, FRAC_PI_4).unwrap();
        let diam = diameter(&d).unwrap();
        assert!(diam >= 3f64.acosh() && diam <= 3f64.acosh() + PI / 1000.0);
        let closed = diameter_closed_form(&d).unwrap();
        assert!((diam - closed).abs() < 1e-12);
    }

    #[test]
    fn neck_unit_length_and_thin_limit() {
        let d = StripDomain::planar(PI * PI, 1.0).unwrap();
        let neck = neck_check(&d).unwrap();
        assert!((neck.dist_tu - 1.0).abs() < 1e-14);
        // the side RS is shorter than the Euclidean ray through R and S
        assert!(neck.dist_rs < neck.dist_tu / d.l.cos());
        assert!(!neck.ratio_ok);
        let thin = StripDomain::planar(50.0, 1e-8).unwrap();
        let neck = neck_check(&thin).unwrap();
        assert!((neck.dist_rs - neck.dist_tu).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            x1 in -5.0f64..5.0, y1 in 0.01f64..5.0,
            x2 in -5.0f64..5.0, y2 in 0.01f64..5.0,
            x3 in -5.0f64..5.0, y3 in 0.01f64..5.0,
        ) {
            let (a, b, c) = (pt(x1, y1), pt(x2, y2), pt(x3, y3));
            let ab = hyperbolic_distance(a, b).unwrap();
            let bc = hyperbolic_distance(b, c).unwrap();
            let ac = hyperbolic_distance(a, c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert_eq!(ab, hyperbolic_distance(b, a).unwrap());
        }

        #[test]
        fn diameter_within_bounds(log_mu in 0.0f64..8.0, l in 0.01f64..1.5) {
            let d = StripDomain::planar(10f64.powf(log_mu), l).unwrap();
            let diam = diameter(&d).unwrap();
            let (lo, hi) = diameter_bounds(&d);
            prop_assert!(diam >= lo - 1e-12 && diam <= hi + 1e-12);
            let c = corner_points(&d).unwrap();
            let pq = hyperbolic_distance(c.p, c.q).unwrap();
            let rs = hyperbolic_distance(c.r, c.s).unwrap();
            prop_assert!(diam >= pq.max(rs) - 1e-12);
            let neck = neck_check(&d).unwrap();
            prop_assert!(diam >= neck.dist_rs);
            prop_assert!(neck.dist_rs >= neck.dist_tu - 1e-12);
            prop_assert!(neck.dist_rs <= neck.dist_tu / l.cos() + 1e-12);
        }

        #[test]
        fn polar_roundtrip(log_mu in 0.0f64..6.0, t in 0.0f64..1.0, phi in -1.5f64..1.5) {
            let d = StripDomain::planar(10f64.powf(log_mu), 1.0).unwrap();
            let r = 1.0 + t * (d.outer_radius() - 1.0);
            let (r2, phi2) = HalfPlanePoint::from_polar(r, phi).unwrap().to_polar();
            prop_assert!((r2 - r).abs() <= 1e-12 * r && (phi2 - phi).abs() <= 1e-12);
        }
    }
}
