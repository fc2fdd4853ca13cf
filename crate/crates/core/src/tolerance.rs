//! Default numerical tolerances.
//!
//! All thresholds are scale-aware: `base * (1 + scale)` where `scale` is the
//! Euclidean norm of the operands involved.

/// Eigenvalues closer than this (relative) are merged into one spectral
/// projection; clusters within it of zero are treated as exactly zero.
pub const CLUSTER: f64 = 1e-8;

/// Minimum relative eigenvalue below which a strict inverse is refused.
pub const SINGULAR: f64 = 1e-10;

/// Slack for order comparisons and cone membership.
pub const ORDER: f64 = 1e-9;

/// Slack for idempotence / orthogonality checks on projections.
pub const PROJECTION: f64 = 1e-8;

/// Smallest cluster tolerance ever used, relative to the operand norm.
/// Keeps the doubled eigenvalues of quaternionic blocks paired.
pub const MIN_CLUSTER: f64 = 1e-13;

pub fn scaled(base: f64, scale: f64) -> f64 {
    base * (1.0 + scale)
}
