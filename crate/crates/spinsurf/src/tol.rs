//! Centralized numerical tolerances.
//!
//! Every tolerance used by the verification suites and the CLI self-test lives
//! here as a documented constant, so a reviewer can audit the numerical
//! contract in one place and tests never embed magic thresholds inline.

/// Identities that hold exactly in exact arithmetic (algebraic identities,
/// structure-constant tables, closed-form frames). Budget for f64 roundoff
/// accumulated over a handful of products.
pub const ALGEBRA_EXACT: f64 = 1e-12;

/// Cross-checks between two independently derived formulas for the same
/// quantity, where each side runs through longer floating-point pipelines
/// (spin lifts, component formulas for the derivative form).
pub const CROSS_CHECK: f64 = 1e-10;

/// Containment of reconstructed points in their defining quadric, and other
/// pointwise constraints propagated through normalized spin lifts.
pub const QUADRIC_CONTAINMENT: f64 = 1e-10;

/// Allowed drift of the coefficient norm of a transported spinor over the
/// whole chart at the reference 64x64 resolution.
pub const UNIT_NORM_DRIFT: f64 = 1e-6;

/// Minimal acceptable empirical convergence order for second-order
/// discretizations measured on a grid-doubling ladder.
pub const ORDER_MIN: f64 = 1.9;

/// Absolute error below which a convergence ladder is accepted without
/// measuring an order: discrete error at the roundoff floor (e.g. flat
/// surfaces where every stencil is exact).
pub const ORDER_FLOOR: f64 = 1e-12;

/// Spin-group membership: deviation of tau(u)*u from the unit scalar and of
/// the adjoint image of a basis vector from grade one.
pub const SPIN_MEMBERSHIP: f64 = 1e-9;

/// Area-normalized loop-defect density above which prescribed data is flagged
/// as incompatible by the self-test hooks. Honest discretization error decays
/// like h toward zero (about 1e-2 on strongly curved models at 64² grids),
/// while genuinely inconsistent data plateaus near its corruption scale.
pub const PLAQUETTE_FLAG: f64 = 3.5e-2;

/// Constraint violation on initial spinor data above which a solve refuses
/// to start (unit pairing normalization, membership checks on seeds).
pub const SEED_CONSTRAINT: f64 = 1e-8;

/// Determinant floor below which an induced metric counts as degenerate.
pub const METRIC_DEGENERACY: f64 = 1e-8;

/// Equation residual above which immersion recovery refuses to integrate a
/// spinor field. Fields that actually solve their derivative equation sit
/// orders of magnitude below this (discretization error, under 1e-3 on every
/// supported chart at the minimum grid), while fields corrupted at even one
/// node overshoot it by an order of magnitude.
pub const RECONSTRUCT_RESIDUAL: f64 = 5e-2;

/// Relative closedness defect (discrete curl scaled by one plus the
/// coefficient sup) above which a scalar 1-form is rejected as
/// path-dependent. Honest closed forms measure O(h²) here; inconsistent
/// data sits at order one or above.
pub const ONE_FORM_CLOSEDNESS: f64 = 5e-2;

/// Factor by which a derived operator's Dirac-type residual may exceed the
/// underlying first-order residual it is built from.
pub const RESIDUAL_RATIO: f64 = 3.0;

/// Smallest grid edge accepted by chart constructors.
pub const MIN_GRID: usize = 8;
