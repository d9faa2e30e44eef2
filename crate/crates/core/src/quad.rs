//! Composite Simpson weights and fourth-order finite-difference stencils on
//! uniform grids.

use crate::extfloat::ExtFloat;

/// Simpson multiplier (1, 4, 2, ..., 4, 1) for node `i` of `n` intervals.
#[inline]
pub(crate) fn simpson_mult(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

pub(crate) fn simpson(values: &[f64], delta: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n % 2 == 0 && n >= 2);
    let s: f64 = values.iter().enumerate().map(|(i, v)| simpson_mult(i, n) * v).sum();
    s * delta / 3.0
}

pub(crate) fn simpson_ext(values: &[ExtFloat], delta: f64) -> ExtFloat {
    let n = values.len() - 1;
    debug_assert!(n % 2 == 0 && n >= 2);
    let s: ExtFloat = values.iter().enumerate().map(|(i, v)| v.mul_f64(simpson_mult(i, n))).sum();
    s.mul_f64(delta / 3.0)
}

/// First-derivative stencil at node `i` of `n` intervals: returns the first
/// node index and integer weights, to be divided by `12δ`.
pub(crate) fn d1_stencil(i: usize, n: usize) -> (usize, [i64; 5]) {
    debug_assert!(n >= 4);
    match i {
        0 => (0, [-25, 48, -36, 16, -3]),
        1 => (0, [-3, -10, 18, -6, 1]),
        _ if i == n - 1 => (n - 4, [-1, 6, -18, 10, 3]),
        _ if i == n => (n - 4, [3, -16, 36, -48, 25]),
        _ => (i - 2, [1, -8, 0, 8, -1]),
    }
}

/// Second-derivative stencil `(−1, 16, −30, 16, −1)/(12δ²)`, interior only.
pub(crate) const D2_CENTRAL: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

pub(crate) fn derivative(values: &[f64], delta: f64) -> Vec<f64> {
    let n = values.len() - 1;
    (0..=n)
        .map(|i| {
            let (s, c) = d1_stencil(i, n);
            let acc: f64 = (0..5).map(|k| c[k] as f64 * values[s + k]).sum();
            acc / (12.0 * delta)
        })
        .collect()
}

pub(crate) fn derivative_ext(values: &[ExtFloat], delta: f64) -> Vec<ExtFloat> {
    let n = values.len() - 1;
    (0..=n)
        .map(|i| {
            let (s, c) = d1_stencil(i, n);
            let acc: ExtFloat = (0..5).map(|k| values[s + k].mul_f64(c[k] as f64)).sum();
            acc.mul_f64(1.0 / (12.0 * delta))
        })
        .collect()
}

/// Uniform grid of `n` intervals on `[x0, x1]` with both ends exact.
pub(crate) fn uniform(x0: f64, x1: f64, n: usize) -> Vec<f64> {
    let delta = (x1 - x0) / n as f64;
    let mut g: Vec<f64> = (0..=n).map(|i| x0 + i as f64 * delta).collect();
    g[n] = x1;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let g = uniform(0.0, 2.0, 8);
        let v: Vec<f64> = g.iter().map(|x| x * x * x - x).collect();
        assert!((simpson(&v, 0.25) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn stencils_differentiate_quartics_exactly() {
        let n = 10;
        let delta = 0.1;
        let g = uniform(0.0, 1.0, n);
        let v: Vec<f64> = g.iter().map(|x| x.powi(4) - 2.0 * x * x).collect();
        let d = derivative(&v, delta);
        for (x, dv) in g.iter().zip(&d) {
            assert!((dv - (4.0 * x.powi(3) - 4.0 * x)).abs() < 1e-11, "{x} {dv}");
        }
        let e: Vec<ExtFloat> = v.iter().map(|&x| ExtFloat::from_f64(x)).collect();
        let de = derivative_ext(&e, delta);
        for (a, b) in d.iter().zip(&de) {
            assert!((a - b.to_f64()).abs() < 1e-12);
        }
    }
}
