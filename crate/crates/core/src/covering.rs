//! Covering constants and densities of `D_p`.
//!
//! A centrally symmetric hexagon inscribed in `D_p` tiles the plane under
//! its covering lattice, so the translates of `D_p` cover the plane with
//! density `V(D_p) / area`. The covering constant over al-hexagons is the
//! maximum of the inscribed area section; a general inscribed-hexagon
//! maximizer serves as an independent upper oracle.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{al_hexagon, boundary_point, residual_finite, Point2, SymmetricHexagon};
use crate::moduli::{
    davis_constant_cached, family_area, i_min_area, inscribed_area, sigma_alpha, sigma_p, tau_inscribed, tau_p,
};
use crate::numerics::{ball_volume, try_maximize_scalar, BallParameter, GridSearch, Tolerance};

/// `(3√3 / 2π)`: every convex body has an inscribed hexagon with at least
/// this fraction of its area.
pub const SAS_RATIO: f64 = 0.826_993_343_132_688_1;

/// `2π / 3√3`, the density of the thinnest lattice covering by discs.
pub const DISC_DENSITY: f64 = 1.209_199_576_156_145_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringOptions {
    pub tol: Tolerance,
    /// Grid for the one-dimensional search over `sigma`.
    pub grid: GridSearch,
    /// Angular grid size for the general-hexagon oracle.
    pub general_grid: usize,
}

impl Default for CoveringOptions {
    fn default() -> Self {
        CoveringOptions {
            tol: Tolerance::default(),
            grid: GridSearch::default(),
            general_grid: 48,
        }
    }
}

impl From<Tolerance> for CoveringOptions {
    fn from(tol: Tolerance) -> Self {
        CoveringOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Maximum-area inscribed al-hexagon of `D_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlCovering {
    /// Undefined (None) at the limit exponents.
    pub sigma_star: Option<f64>,
    pub tau_star: Option<f64>,
    pub gamma_al: f64,
    pub hexagon: SymmetricHexagon,
}

/// The limiting quadrangles: the diamond `D_1` (area 2) and the square
/// `D_inf` (area 4), each stored with one collapsed vertex pair.
pub fn limit_quadrangle(p: BallParameter) -> Option<SymmetricHexagon> {
    let (w1, w2, w3) = match p {
        BallParameter::LimitOne => (Point2::new(1.0, 0.0), Point2::new(0.0, 1.0), Point2::new(-1.0, 0.0)),
        BallParameter::LimitInfinity => (Point2::new(1.0, -1.0), Point2::new(1.0, 1.0), Point2::new(-1.0, 1.0)),
        BallParameter::Finite(_) => return None,
    };
    SymmetricHexagon::new(w1, w2, w3).ok()
}

/// Covering constant over the inscribed al-hexagon family.
pub fn covering_constant_al(p: BallParameter, opts: &CoveringOptions) -> Result<AlCovering> {
    let p = match p {
        BallParameter::Finite(p) => p.get(),
        limit => {
            let hexagon = limit_quadrangle(limit).expect("limit marker");
            return Ok(AlCovering {
                sigma_star: None,
                tau_star: None,
                gamma_al: hexagon.area(),
                hexagon,
            });
        }
    };
    let hi = sigma_p(p)?;
    let (sigma_star, gamma_al) = try_maximize_scalar(|s| inscribed_area(p, s), 1.0, hi, &opts.tol, &opts.grid)?;
    let tau_star = tau_inscribed(p, sigma_star)?;
    Ok(AlCovering {
        sigma_star: Some(sigma_star),
        tau_star: Some(tau_star),
        gamma_al,
        hexagon: al_hexagon(p, tau_star, sigma_star)?,
    })
}

/// `V(D_p) / gamma`.
pub fn covering_density(p: BallParameter, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("covering area must be positive, got {gamma}")));
    }
    Ok(ball_volume(p) / gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringSummary {
    pub p: f64,
    pub volume: f64,
    pub gamma_al: f64,
    pub sigma_star: f64,
    pub tau_star: f64,
    pub density_al: f64,
    /// `i_min_area(p)`, a lower bound for the covering constant.
    pub lower_bound_imin: f64,
    /// `(3√3 / 2π) V(D_p)`.
    pub sas_bound: f64,
    /// `V(D_p)`: an inscribed hexagon cannot be larger.
    pub upper_bound_area: f64,
    /// `2π / 3√3`.
    pub density_upper: f64,
    /// Whether `gamma_al` reaches `sas_bound`; reported, never enforced.
    pub meets_sas_bound: bool,
    /// Density of the `sigma = σ_p` endpoint hexagon.
    pub density_endpoint: f64,
}

pub fn bounds_report(p: f64, opts: &CoveringOptions) -> Result<CoveringSummary> {
    let bp = BallParameter::finite(p)?;
    let al = covering_constant_al(bp, opts)?;
    let volume = ball_volume(bp);
    let sas_bound = SAS_RATIO * volume;
    Ok(CoveringSummary {
        p,
        volume,
        gamma_al: al.gamma_al,
        sigma_star: al.sigma_star.unwrap_or(f64::NAN),
        tau_star: al.tau_star.unwrap_or(f64::NAN),
        density_al: covering_density(bp, al.gamma_al)?,
        lower_bound_imin: i_min_area(p)?,
        sas_bound,
        upper_bound_area: volume,
        density_upper: DISC_DENSITY,
        meets_sas_bound: al.gamma_al >= sas_bound,
        density_endpoint: covering_density(bp, inscribed_area(p, sigma_p(p)?)?)?,
    })
}

/// Maximum-area inscribed centrally symmetric hexagon, without the
/// lattice-sum constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralCovering {
    pub hexagon: SymmetricHexagon,
    pub gamma_h: f64,
    /// Directions of `w1, w2, w3`, increasing in `[0, π)`.
    pub angles: [f64; 3],
}

fn canonical(mut th: [f64; 3]) -> [f64; 3] {
    for t in th.iter_mut() {
        *t = t.rem_euclid(PI);
    }
    th.sort_by(f64::total_cmp);
    th
}

fn general_area(th: &[f64; 3], p: f64) -> f64 {
    let [b1, b2, b3] = th.map(|t| boundary_point(t, p));
    b1.cross(b2) + b2.cross(b3) + b1.cross(b3)
}

/// Compass search over the three angles with step halving.
fn refine_angles(p: f64, start: [f64; 3], step: f64) -> Result<([f64; 3], f64)> {
    const MAX_MOVES: usize = 200_000;
    let mut th = canonical(start);
    let mut best = general_area(&th, p);
    let mut h = step;
    let mut moves = 0;
    while h > 1e-13 {
        let mut improved = false;
        'coords: for i in 0..3 {
            for s in [h, -h] {
                let mut cand = th;
                cand[i] += s;
                let cand = canonical(cand);
                let a = general_area(&cand, p);
                if a > best {
                    th = cand;
                    best = a;
                    improved = true;
                    break 'coords;
                }
            }
        }
        if improved {
            moves += 1;
            if moves > MAX_MOVES {
                return Err(Error::NonConvergence { iterations: MAX_MOVES });
            }
        } else {
            h *= 0.5;
        }
    }
    Ok((th, best))
}

fn direction(v: Point2) -> f64 {
    v.y.atan2(v.x).rem_euclid(PI)
}

/// General-hexagon oracle for the covering constant.
///
/// Vertices are boundary points in directions `0 <= θ1 < θ2 < θ3 < π`.
/// All ordered triples of a uniform angular grid are scored; the best few,
/// together with the optimal al-hexagon, seed a compass search. The result
/// therefore never falls below the al-family maximum.
pub fn gamma_h_general(p: f64, opts: &CoveringOptions) -> Result<GeneralCovering> {
    let bp = BallParameter::finite(p)?;
    let n = opts.general_grid.max(6);
    let step = PI / n as f64;
    let pts: Vec<Point2> = (0..n).map(|i| boundary_point(i as f64 * step, p)).collect();

    let mut scored = Vec::with_capacity(n * n * n / 6);
    for i in 0..n {
        for j in i + 1..n {
            let c_ij = pts[i].cross(pts[j]);
            for k in j + 1..n {
                let a = c_ij + pts[j].cross(pts[k]) + pts[i].cross(pts[k]);
                scored.push((a, [i, j, k]));
            }
        }
    }
    scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut seeds: Vec<[f64; 3]> = scored
        .iter()
        .take(8)
        .map(|(_, idx)| idx.map(|i| i as f64 * step))
        .collect();
    let al = covering_constant_al(bp, opts)?;
    seeds.push(al.hexagon.vertices().map(direction));

    let refined = seeds
        .into_iter()
        .map(|s| refine_angles(p, s, step))
        .collect::<Result<Vec<_>>>()?;
    let (angles, mut gamma_h) =
        refined.into_iter().fold(
            ([0.0; 3], f64::NEG_INFINITY),
            |acc, r| if r.1 > acc.1 { r } else { acc },
        );

    let [b1, b2, b3] = angles.map(|t| boundary_point(t, p));
    let hexagon = SymmetricHexagon::new(b1, b2, b3)?;
    debug_assert!(hexagon.vertices().iter().all(|v| residual_finite(*v, p).abs() < 1e-9));
    gamma_h = gamma_h.max(hexagon.area());
    Ok(GeneralCovering {
        hexagon,
        gamma_h,
        angles,
    })
}

/// `α` with `σ_{α,p} = sigma_star`, i.e. `ln(2^p - 1) / (p ln σ*)`.
pub fn alpha_fit(p: f64, sigma_star: f64) -> Result<f64> {
    if !(sigma_star > 1.0) || !sigma_star.is_finite() {
        return Err(Error::UndefinedAlpha { sigma_star });
    }
    Ok(sigma_p(p)?.ln() / sigma_star.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub sigma_star: f64,
    pub tau_star: f64,
    pub gamma_al: f64,
    pub density_al: f64,
    /// None where `sigma_star = 1`.
    pub alpha_fit: Option<f64>,
    pub gamma_general: Option<f64>,
    pub density_general: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
    Insufficient,
}

/// Monotonicity of one scanned quantity over one `p` segment. This is
/// numerical evidence on the sampled grid only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityVerdict {
    pub quantity: &'static str,
    pub segment: &'static str,
    pub points: usize,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scan {
    pub rows: Vec<ScanRow>,
    pub verdicts: Vec<MonotonicityVerdict>,
}

type Column = fn(&ScanRow) -> Option<f64>;

fn trend(values: &[f64]) -> Trend {
    if values.len() < 2 {
        return Trend::Insufficient;
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let tie = 1e-12 * values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if diffs.iter().all(|d| d.abs() <= tie) {
        Trend::Constant
    } else if diffs.iter().all(|&d| d >= -tie) {
        Trend::Increasing
    } else if diffs.iter().all(|&d| d <= tie) {
        Trend::Decreasing
    } else {
        Trend::NonMonotone
    }
}

fn scan_row(p: f64, include_general: bool, opts: &CoveringOptions) -> Result<ScanRow> {
    let bp = BallParameter::finite(p)?;
    let al = covering_constant_al(bp, opts)?;
    let sigma_star = al.sigma_star.expect("finite p");
    let general = if include_general {
        Some(gamma_h_general(p, opts)?.gamma_h)
    } else {
        None
    };
    Ok(ScanRow {
        p,
        sigma_star,
        tau_star: al.tau_star.expect("finite p"),
        gamma_al: al.gamma_al,
        density_al: covering_density(bp, al.gamma_al)?,
        alpha_fit: alpha_fit(p, sigma_star).ok(),
        gamma_general: general,
        density_general: general.map(|g| covering_density(bp, g)).transpose()?,
    })
}

/// Covering constants and densities along a strictly increasing `p` grid.
/// Rows are computed in parallel and returned in input order.
pub fn scan(p_values: &[f64], include_general: bool, opts: &CoveringOptions) -> Result<Scan> {
    for (i, &p) in p_values.iter().enumerate() {
        BallParameter::finite(p)?;
        if i > 0 && !(p > p_values[i - 1]) {
            return Err(Error::Unordered { index: i });
        }
    }
    let rows = p_values
        .par_iter()
        .map(|&p| scan_row(p, include_general, opts))
        .collect::<Result<Vec<_>>>()?;

    let mut verdicts = Vec::new();
    let mut quantities: Vec<(&'static str, Column)> = vec![
        ("gamma_al", |r| Some(r.gamma_al)),
        ("density_al", |r| Some(r.density_al)),
    ];
    if include_general {
        quantities.push(("gamma_general", |r| r.gamma_general));
        quantities.push(("density_general", |r| r.density_general));
    }
    for (quantity, get) in quantities {
        for (segment, range) in [("(1,2]", (1.0, 2.0)), ("[2,inf)", (2.0, f64::INFINITY))] {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| {
                    if segment.starts_with('(') {
                        r.p > range.0 && r.p <= range.1
                    } else {
                        r.p >= range.0
                    }
                })
                .filter_map(get)
                .collect();
            verdicts.push(MonotonicityVerdict {
                quantity,
                segment,
                points: values.len(),
                trend: trend(&values),
            });
        }
    }
    Ok(Scan { rows, verdicts })
}

/// `steps` log-spaced points on `[lo, hi]` (endpoints included).
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 1.0 && hi > lo && hi.is_finite()) {
        return Err(Error::domain(format!("p grid requires 1 < lo < hi, got [{lo}, {hi}]")));
    }
    if steps < 2 {
        return Err(Error::domain("p grid needs at least two steps"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..steps)
        .map(|i| match i {
            0 => lo,
            i if i == steps - 1 => hi,
            i => (a + (b - a) * i as f64 / (steps - 1) as f64).exp(),
        })
        .collect())
}

/// Adds the branch joints `2` and `p0` where they fall inside the grid.
pub fn with_branch_joints(mut grid: Vec<f64>) -> Vec<f64> {
    if let (Some(&lo), Some(&hi)) = (grid.first(), grid.last()) {
        for joint in [2.0, davis_constant_cached()] {
            if joint >= lo && joint <= hi {
                grid.push(joint);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    grid
}

/// 65 log-spaced exponents on `[1.05, 16]` plus `2` and `p0`.
pub fn default_p_grid() -> Vec<f64> {
    with_branch_joints(log_grid(1.05, 16.0, 65).expect("static grid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComparisonStatus {
    Match,
    Discrepant,
}

/// A computed value set against a quoted reference value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub quantity: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    /// `computed - reference`.
    pub difference: f64,
    pub status: ComparisonStatus,
}

impl Comparison {
    fn new(quantity: &'static str, computed: f64, reference: f64, tolerance: f64) -> Self {
        let difference = computed - reference;
        let status = if difference.abs() <= tolerance {
            ComparisonStatus::Match
        } else {
            ComparisonStatus::Discrepant
        };
        Comparison {
            quantity,
            computed,
            reference,
            tolerance,
            difference,
            status,
        }
    }
}

/// The `D_3` density example: the hexagon at `p = 3`, `α = 2`, `τ = 0.12`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct P3Report {
    pub p: f64,
    pub alpha: f64,
    pub tau: f64,
    pub sigma: f64,
    pub vertices: [Point2; 3],
    /// Boundary residual of the middle vertex; positive means outside `D_3`.
    pub middle_residual: f64,
    pub volume: f64,
    pub area: f64,
    pub density: f64,
    pub gamma_al: f64,
    pub density_al: f64,
    pub gamma_general: f64,
    pub density_general: f64,
    pub sas_bound: f64,
    /// Whether the general-hexagon maximum reaches the quoted 3.331.
    pub reference_gamma_attainable: bool,
    pub comparisons: Vec<Comparison>,
}

pub const P3_REFERENCE_SIGMA: f64 = 1.383;
pub const P3_REFERENCE_TAU_P: f64 = 0.20406;
pub const P3_REFERENCE_VOLUME: f64 = 3.52;
pub const P3_REFERENCE_GAMMA: f64 = 3.331;
pub const P3_REFERENCE_DENSITY: f64 = 1.0567;

pub fn reproduce_p3_example(opts: &CoveringOptions) -> Result<P3Report> {
    let (p, alpha, tau) = (3.0, 2.0, 0.12);
    let bp = BallParameter::finite(p)?;
    let sigma = sigma_alpha(alpha, p)?;
    let hexagon = al_hexagon(p, tau, sigma)?;
    let area = family_area(alpha, p, tau)?;
    let volume = ball_volume(bp);
    let density = covering_density(bp, area)?;
    let al = covering_constant_al(bp, opts)?;
    let general = gamma_h_general(p, opts)?;

    let comparisons = vec![
        Comparison::new("sigma_2_3", sigma, P3_REFERENCE_SIGMA, 5e-4),
        Comparison::new("tau_3", tau_p(p)?, P3_REFERENCE_TAU_P, 5e-6),
        Comparison::new("volume", volume, P3_REFERENCE_VOLUME, 0.02),
        Comparison::new("gamma_h", area, P3_REFERENCE_GAMMA, 5e-4),
        Comparison::new("density", density, P3_REFERENCE_DENSITY, 5e-5),
    ];

    Ok(P3Report {
        p,
        alpha,
        tau,
        sigma,
        vertices: hexagon.vertices(),
        middle_residual: residual_finite(hexagon.vertices()[1], p),
        volume,
        area,
        density,
        gamma_al: al.gamma_al,
        density_al: covering_density(bp, al.gamma_al)?,
        gamma_general: general.gamma_h,
        density_general: covering_density(bp, general.gamma_h)?,
        sas_bound: SAS_RATIO * volume,
        reference_gamma_attainable: general.gamma_h >= P3_REFERENCE_GAMMA,
        comparisons,
    })
}
