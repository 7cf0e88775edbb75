//! Tolerance formulas used throughout the toolkit.
//!
//! All thresholds scale with a single global factor (default 1), which the
//! command line sets from the `MINKSPEC_TOL` environment variable.

use std::sync::atomic::{AtomicU64, Ordering};

static SCALE_BITS: AtomicU64 = AtomicU64::new(0x3FF0_0000_0000_0000); // bits of 1.0f64

/// Set the global tolerance scale factor. Must be positive and finite.
pub fn set_scale(factor: f64) {
    assert!(
        factor.is_finite() && factor > 0.0,
        "tolerance scale must be positive and finite, got {factor}"
    );
    SCALE_BITS.store(factor.to_bits(), Ordering::Relaxed);
}

/// Current global tolerance scale factor.
pub fn scale() -> f64 {
    f64::from_bits(SCALE_BITS.load(Ordering::Relaxed))
}

/// Hermitian-validation threshold: asymmetries below are symmetrized away.
pub fn hermitian(j_max_norm: f64) -> f64 {
    1e-10 * j_max_norm.max(1.0) * scale()
}

/// Residues at or below this are treated as exactly zero (unobservable).
pub fn observability(u_norm_sq: f64) -> f64 {
    1e-12 * u_norm_sq.max(1.0) * scale()
}

/// Poles closer than this are merged.
pub fn pole_gap(spread: f64) -> f64 {
    1e-10 * spread.max(1.0) * scale()
}

/// Rank cutoff for the stacked Hautus matrix.
pub fn rank(j_max_norm: f64, u_norm: f64) -> f64 {
    1e-10 * j_max_norm.max(u_norm).max(1.0) * scale()
}

/// |f| at a critical point below this declares a double root.
pub fn tangency(shift: f64, spread: f64) -> f64 {
    1e-8 * (1.0 + shift.abs() + spread) * scale()
}

/// Two critical points closer than this have collapsed (triple root).
pub fn collapse(spread: f64) -> f64 {
    1e-6 * spread * scale()
}

/// Target residual for Newton polishing of secular roots.
pub fn newton_residual(lambda: f64, shift: f64) -> f64 {
    1e-13 * (1.0 + lambda.abs() + shift.abs()) * scale()
}

/// Margin on |g' - 1| below which a simple-root sign is ambiguous; the same
/// margin detects grazing tangencies of g' against 1.
pub fn sign_margin() -> f64 {
    1e-9 * scale()
}

/// Natural magnitude scale for g'' comparisons.
pub fn curvature_scale(shift: f64, spread: f64) -> f64 {
    1.0 + shift.abs() + spread
}

/// |g''| below this at a double root makes its sign ambiguous.
pub fn curvature_margin(shift: f64, spread: f64) -> f64 {
    1e-9 * curvature_scale(shift, spread) * scale()
}

/// |g''| bound certifying a triple root.
pub fn triple_curvature(shift: f64, spread: f64) -> f64 {
    1e-6 * curvature_scale(shift, spread) * scale()
}

/// Off-diagonal threshold for Jacobi rotations.
pub fn jacobi_threshold(fro_norm: f64) -> f64 {
    1e-14 * fro_norm * scale()
}

/// Sweep budget for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 30;

/// Residual bound for the polynomial root oracle, relative to Σ|c_i||z|^i.
pub fn oracle_residual() -> f64 {
    1e-10 * scale()
}
