//! Spinorial surface geometry in three-dimensional Lorentzian homogeneous
//! spaces.
//!
//! This crate provides, end to end:
//!
//! * [`clifford`] — real Clifford algebras Cl(p,q) up to four generators,
//!   spin-group helpers, and the intrinsic even-subalgebra spinor models used
//!   on surface charts;
//! * [`lie`] — a catalog of three-dimensional metric Lie algebras and group
//!   models (matrix and coordinate backends) with their left-invariant
//!   connections;
//! * [`chart`] — discrete parameter charts of surfaces in those ambient
//!   spaces, with induced metric, frames, shape operator, and the tangent /
//!   normal decomposition of the ambient invariant fields;
//! * [`spinor`] — spinor fields on charts, the first-order derivative
//!   equations characterizing isometric immersions, a transport-based solver,
//!   residual diagnostics, and the Dirac operator;
//! * [`reconstruct`] — recovery of the immersion from a spinor field, either
//!   by integrating a Maurer–Cartan form into the group model or by the
//!   pointwise quadric formulas, plus export to OBJ/PLY/CSV;
//! * [`correspond`] — the constant-mean-curvature correspondences: the
//!   Dirac ⇄ derivative-equation round trip, the associate rotation trading
//!   mean curvature between ambient geometries, the conformal minimal ↔
//!   zero-mean-curvature map, and the Weierstrass-data transform;
//! * [`scene`] and [`cli`] — JSON scenario descriptions and the `spinsurf`
//!   command-line tool (`selftest`, `run`, `export`, `catalog`).
//!
//! The numerical contract (tolerances, convergence orders) is centralized in
//! [`tol`].

pub mod chart;
pub mod clifford;
pub mod error;
pub mod lie;
pub mod spinor;
pub mod tol;

pub use error::{Error, Result};
