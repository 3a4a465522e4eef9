//! Lattice coverings of the plane by Minkowski balls
//! `D_p = { (x, y) : |x|^p + |y|^p <= 1 }`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: log-gamma, ball volume, bracketed root finding and a
//!   grid-seeded golden-section maximizer.
//! * [`geometry`]: points, planar lattices, centrally symmetric hexagons and
//!   the hexagon to covering-lattice construction.
//! * [`moduli`]: the Davis parameter, the two critical-determinant branches,
//!   the hexagon area surface `A(sigma, p)` and its inscribed section.
//! * [`covering`]: covering constants, densities, bounds and parameter scans.
//! * [`verifier`]: sampling-based checks that a lattice of balls covers the
//!   plane, and that critical lattices are admissible.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering;
pub mod error;
pub mod geometry;
pub mod moduli;
pub mod numerics;
pub mod verifier;

pub use covering::{
    alpha_fit, bounds_report, covering_constant_al, covering_density, default_p_grid, gamma_h_general,
    reproduce_p3_example, scan, AlCovering, Comparison, ComparisonStatus, CoveringOptions, CoveringSummary,
    GeneralCovering, MonotonicityVerdict, P3Report, Scan, ScanRow, Trend,
};
pub use error::{Error, Result};
pub use geometry::{al_hexagon, boundary_residual, gauge, HexagonKind, Lattice2, Point2, SymmetricHexagon};
pub use moduli::{
    critical_determinant, critical_lattice, davis_constant, delta_branch0, delta_branch1, family_area, i_min_area,
    inscribed_area, min_area, moduli_area, sigma_alpha, sigma_p, tau_inscribed, tau_p, Branch, CriticalData,
    ModuliPoint,
};
pub use numerics::{ball_volume, find_root, log_gamma, maximize_scalar, BallParameter, GridSearch, Tolerance};
pub use verifier::{is_covering, multiplicity_estimate, verify_critical_lattices, CoverageReport};
