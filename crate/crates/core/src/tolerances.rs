//! Pinned residual tolerances, `abs + C·s²` unless noted.
//!
//! Second-order constants were calibrated by the refinement runs in the acceptance
//! suite (observed `C` at most about 2 on the shipped fixtures) with a factor 4 margin.

use crate::analysis::Tolerance;

/// Identities whose stencils are exact on the fixture; only rounding remains.
pub const ROUNDING: Tolerance = Tolerance::absolute(1e-10);

/// Rounding bound for the logarithm-free identity, whose terms scale like `J²`.
pub const PRESUB_ROUNDING: Tolerance = Tolerance::absolute(2e-8);

/// Any second-order residual: Bochner pairs, main, presubtraction, radial, Hopf.
pub const SECOND_ORDER: Tolerance = Tolerance::new(1e-10, 0.0, 8.0);

/// Slack for `Δ log J ≤ slack`, per unit spacing.
pub const SUPERHARM_SLACK_PER_S: f64 = 1.0;

/// Slack for the discrete minimum principle, per unit spacing.
pub const MINPRIN_SLACK_PER_S: f64 = 1.0;

/// Multiplier on the solver tolerance added to residual tolerances for solved fields.
pub const SOLVER_TOL_FACTOR: f64 = 10.0;

/// Largest excluded fraction accepted on the shipped fixtures.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.05;

/// Metric consistency bound for `metric-check`.
pub const METRIC_CONSISTENCY: f64 = 1e-6;

/// Residual that counts as "bounded away from zero" for non-harmonic controls.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-2;

/// Outer boundary nodes skipped by checks on solved fields; corner incompatibility of
/// the Dirichlet data makes third derivatives blow up there.
pub fn solved_field_margin(n: usize) -> usize {
    (n - 1) / 4
}

/// `SECOND_ORDER` widened by the solver tolerance.
pub fn for_solution(tol: f64) -> Tolerance {
    SECOND_ORDER.plus(SOLVER_TOL_FACTOR * tol)
}
