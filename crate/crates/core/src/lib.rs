//! Dirichlet spectra of separated strip domains in hyperbolic space.
//!
//! The strip `Ω = {1 ≤ r ≤ e^{π/√μ}, |φ| ≤ L}` of the half-plane separates
//! into a radial factor and the angular problem
//! `h″ + (λ sec²φ − μ) h = 0` on `(−L, L)`. As `μ → ∞` the first
//! eigenfunction splits into two peaks near `±L`, the domain diameter stays
//! bounded, and `D²(λ₂ − λ₁) → 0`.

pub mod chain;
mod exact;
pub mod extfloat;
pub mod gap;
pub mod geometry;
pub mod ode;
mod quad;
pub mod slcore;

pub use extfloat::ExtFloat;
