//! Sampling checks that a lattice of translated balls covers the plane.
//!
//! Sample points are drawn from the fundamental parallelogram of the given
//! basis on a stratified grid with one seeded jitter per cell. Every
//! per-sample quantity is computed independently; reductions run in sample
//! order, so reports do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{euclidean_radius, gauge, Lattice2, Point2, GAUGE_EPS};
use crate::moduli::{self, critical_lattice, Branch};
use crate::numerics::BallParameter;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub covered_fraction: f64,
    pub samples: usize,
    /// Sample with the largest gap; the deepest uncovered point when the
    /// fraction is below one.
    pub worst_point: Point2,
    /// `min over translates of gauge - 1` at `worst_point`.
    pub worst_gap: f64,
}

/// Stratified jittered samples `(s, t)` in `[0, 1)^2`.
pub fn stratified_samples(samples: usize, seed: u64) -> Vec<(f64, f64)> {
    let cols = (samples as f64).sqrt().ceil().max(1.0) as usize;
    let rows = samples.div_ceil(cols).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|i| {
            let (c, r) = (i % cols, i / cols);
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            ((c as f64 + u) / cols as f64, (r as f64 + v) / rows as f64)
        })
        .collect()
}

/// Smallest gauge distance from `x` to the lattice, searched over the
/// reduced basis.
fn min_gauge(red: &Lattice2, x: Point2, p: BallParameter, radius_scale: f64) -> f64 {
    let (c1, c2) = red.coordinates(x);
    let nearest = red.point(c1.round() as i64, c2.round() as i64);
    let bound = gauge(x - nearest, p);
    // every translate closer in gauge is within this Euclidean distance
    let radius = bound * radius_scale * (1.0 + 1e-12);
    let mut best = bound;
    red.for_each_near(x, radius, |_, _, v| {
        best = best.min(gauge(x - v, p));
    });
    best
}

/// Samples the fundamental parallelogram of `lat` and reports how much of it
/// lies within gauge distance 1 of a lattice point.
pub fn is_covering(lat: &Lattice2, p: BallParameter, samples: usize, seed: u64) -> Result<CoverageReport> {
    let lat = Lattice2::new(lat.basis().0, lat.basis().1)?;
    let samples = samples.max(1);
    let red = lat.reduced();
    let (a1, a2) = lat.basis();
    let scale = euclidean_radius(p);

    let points = stratified_samples(samples, seed);
    let gaps: Vec<(Point2, f64)> = points
        .par_iter()
        .map(|&(s, t)| {
            let x = s * a1 + t * a2;
            (x, min_gauge(&red, x, p, scale) - 1.0)
        })
        .collect();

    let mut covered = 0usize;
    let (mut worst_point, mut worst_gap) = (gaps[0].0, f64::NEG_INFINITY);
    for &(x, gap) in &gaps {
        if gap <= GAUGE_EPS {
            covered += 1;
        }
        if gap > worst_gap {
            worst_gap = gap;
            worst_point = x;
        }
    }
    Ok(CoverageReport {
        covered_fraction: covered as f64 / samples as f64,
        samples,
        worst_point,
        worst_gap,
    })
}

/// Mean number of translates `v + D_p` containing a sample point. For a
/// covering lattice this estimates `ball_volume(p) / det`.
pub fn multiplicity_estimate(lat: &Lattice2, p: BallParameter, samples: usize, seed: u64) -> Result<f64> {
    let lat = Lattice2::new(lat.basis().0, lat.basis().1)?;
    let samples = samples.max(1);
    let red = lat.reduced();
    let (a1, a2) = lat.basis();
    let radius = euclidean_radius(p) * (1.0 + 1e-9);

    let counts: Vec<u64> = stratified_samples(samples, seed)
        .par_iter()
        .map(|&(s, t)| {
            let x = s * a1 + t * a2;
            let mut n = 0u64;
            red.for_each_near(x, radius, |_, _, v| {
                if gauge(x - v, p) <= 1.0 + GAUGE_EPS {
                    n += 1;
                }
            });
            n
        })
        .collect();
    let total: u64 = counts.iter().sum();
    Ok(total as f64 / samples as f64)
}

/// Outcome of checking one critical lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalLatticeCheck {
    pub branch: Branch,
    pub determinant: f64,
    pub expected_determinant: f64,
    pub admissible: bool,
    /// Nonzero lattice points with gauge at most `1 + 1e-9`.
    pub boundary_points: usize,
    pub passed: bool,
}

pub fn check_critical_lattice(p: f64, branch: Branch) -> Result<CriticalLatticeCheck> {
    let lat = critical_lattice(p, branch)?;
    let bp = BallParameter::finite(p)?;
    let expected_determinant = match branch {
        Branch::Branch0 => moduli::delta_branch0(p)?,
        Branch::Branch1 => moduli::delta_branch1(p)?,
    };
    let determinant = lat.determinant();
    let admissible = lat.is_admissible(bp, false);

    let (a1, a2) = lat.basis();
    let expected = [a1, a2, a1 + a2, -a1, -a2, -(a1 + a2)];
    let short = lat.short_vectors(bp, 1.0 + 1e-9);
    let all_expected = short.iter().all(|v| expected.iter().any(|e| (*v - *e).norm() <= 1e-9));

    Ok(CriticalLatticeCheck {
        branch,
        determinant,
        expected_determinant,
        admissible,
        boundary_points: short.len(),
        passed: admissible && short.len() == 6 && all_expected && (determinant - expected_determinant).abs() <= 1e-10,
    })
}

/// Both critical lattices are admissible, carry exactly three boundary
/// pairs, and have the branch determinants.
pub fn verify_critical_lattices(p: f64) -> Result<bool> {
    Ok(check_critical_lattice(p, Branch::Branch0)?.passed && check_critical_lattice(p, Branch::Branch1)?.passed)
}
