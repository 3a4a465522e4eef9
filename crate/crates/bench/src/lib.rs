//! Benchmark fixtures for `minkowski-cover`.

use minkowski_cover::{Lattice2, Point2};

/// Exponents spanning both critical-determinant branches.
pub const EXPONENTS: [f64; 5] = [1.5, 2.0, 2.5725, 3.0, 8.0];

/// Covering lattice of the regular hexagon inscribed in the unit disc.
pub fn hexagonal_lattice() -> Lattice2 {
    let s = 3f64.sqrt();
    Lattice2::new(Point2::new(s, 0.0), Point2::new(s / 2.0, 1.5)).expect("non-degenerate")
}
