//! The hexagon area surface `A(sigma, p)` and the critical determinants of
//! `D_p`.
//!
//! An al-hexagon is fixed by two boundary points, `w1` at slope `tau` and
//! `w3 = (1+σ^p)^(-1/p) (-1, σ)`. Its area is
//! `A = 3 (τ + σ) (1 + τ^p)^(-1/p) (1 + σ^p)^(-1/p)`. The surface is exposed
//! both raw, with `tau` free, and on the inscribed section where `tau` is
//! eliminated by requiring `w1 + w3` to lie on the boundary as well.
//!
//! The lower envelope of the inscribed section is given by two branches:
//! `Δ(p, 1) = 4^(-1/p) (1 + τ_p) / (1 - τ_p)` and `Δ(p, σ_p) = σ_p / 2`.
//! They cross at `p = 2` and at the Davis constant `p0 ≈ 2.5725`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{al_hexagon, residual_finite, Lattice2, Point2};
use crate::numerics::{find_root, Tolerance};

/// Slack allowed when `sigma` overshoots its domain `[1, σ_p]`.
pub const SIGMA_CLAMP: f64 = 1e-9;

fn check_p(p: f64) -> Result<f64> {
    if p.is_finite() && p > 1.0 {
        Ok(p)
    } else {
        Err(Error::domain(format!("requires finite p > 1, got {p}")))
    }
}

/// Davis parameter: the root in `[0, 1)` of `2 (1 - τ)^p = 1 + τ^p`.
pub fn tau_p(p: f64) -> Result<f64> {
    let p = check_p(p)?;
    let davis = |t: f64| 2.0 * (1.0 - t).powf(p) - 1.0 - t.powf(p);
    find_root(davis, 0.0, 1.0, &Tolerance::default())
}

/// `σ_p = (2^p - 1)^(1/p)`, evaluated as `2 (1 - 2^-p)^(1/p)`.
pub fn sigma_p(p: f64) -> Result<f64> {
    let p = check_p(p)?;
    Ok(2.0 * (1.0 - (-p).exp2()).powf(1.0 / p))
}

/// `σ_{α,p} = (2^p - 1)^(1/(α p)) = σ_p^(1/α)`.
pub fn sigma_alpha(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
    }
    Ok(sigma_p(p)?.powf(1.0 / alpha))
}

/// Residual of the middle vertex `w1 + w3` against the boundary.
fn middle_residual(p: f64, tau: f64, sigma: f64) -> f64 {
    let s1 = (1.0 + tau.powf(p)).powf(-1.0 / p);
    let s3 = (1.0 + sigma.powf(p)).powf(-1.0 / p);
    residual_finite(Point2::new(s1 - s3, tau * s1 + sigma * s3), p)
}

fn clamp_sigma(p: f64, sigma: f64) -> Result<f64> {
    let hi = sigma_p(p)?;
    if !(sigma >= 1.0 - SIGMA_CLAMP && sigma <= hi + SIGMA_CLAMP) {
        return Err(Error::domain(format!("sigma = {sigma} outside [1, {hi}] for p = {p}")));
    }
    Ok(sigma.clamp(1.0, hi))
}

/// The `tau` in `[0, τ_p]` that puts all three vertex pairs of
/// `al_hexagon(p, tau, sigma)` on the boundary of `D_p`.
///
/// The middle-vertex residual increases with `tau`; it vanishes at
/// `tau = 0` when `sigma = σ_p` and at `tau = τ_p` when `sigma = 1`.
pub fn tau_inscribed(p: f64, sigma: f64) -> Result<f64> {
    let p = check_p(p)?;
    let sigma = clamp_sigma(p, sigma)?;
    let tp = tau_p(p)?;
    let residual = |t: f64| middle_residual(p, t, sigma);
    if residual(0.0) >= 0.0 {
        return Ok(0.0);
    }
    if residual(tp) <= 0.0 {
        return Ok(tp);
    }
    find_root(residual, 0.0, tp, &Tolerance::default())
}

/// `A(σ, p)` evaluated with a free `tau`.
pub fn moduli_area(p: f64, tau: f64, sigma: f64) -> Result<f64> {
    let p = check_p(p)?;
    if !(tau >= 0.0) {
        return Err(Error::domain(format!("tau must be >= 0, got {tau}")));
    }
    if !(tau < sigma) {
        return Err(Error::ParameterOrder { tau, sigma });
    }
    Ok(3.0 * (tau + sigma) * (1.0 + tau.powf(p)).powf(-1.0 / p) * (1.0 + sigma.powf(p)).powf(-1.0 / p))
}

/// `A(σ, p)` on the inscribed section.
pub fn inscribed_area(p: f64, sigma: f64) -> Result<f64> {
    let tau = tau_inscribed(p, sigma)?;
    moduli_area(p, tau, clamp_sigma(p, sigma)?)
}

/// `A(α, p)` along the family `σ = σ_{α,p}`, with a free `tau`.
pub fn family_area(alpha: f64, p: f64, tau: f64) -> Result<f64> {
    moduli_area(p, tau, sigma_alpha(alpha, p)?)
}

/// `Δ(p, 1) = 4^(-1/p) (1 + τ_p) / (1 - τ_p)`.
pub fn delta_branch1(p: f64) -> Result<f64> {
    let t = tau_p(p)?;
    Ok(4f64.powf(-1.0 / p) * (1.0 + t) / (1.0 - t))
}

/// `Δ(p, σ_p) = σ_p / 2`.
pub fn delta_branch0(p: f64) -> Result<f64> {
    Ok(0.5 * sigma_p(p)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    /// `Δ(p, σ_p)`, lattice through `(1, 0)`.
    Branch0,
    /// `Δ(p, 1)`, lattice through `(-2^(-1/p), 2^(-1/p))`.
    Branch1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalData {
    pub p: f64,
    pub tau_p: f64,
    pub sigma_p: f64,
    pub delta_branch1: f64,
    pub delta_branch0: f64,
    pub critical_determinant: f64,
    pub active_branch: Branch,
}

/// Root of `Δ(p, 1) - Δ(p, σ_p)` on `[2.5, 2.6]`.
pub fn davis_constant(tol: &Tolerance) -> Result<f64> {
    let gap = |p: f64| {
        let t = tau_p(p).unwrap_or(f64::NAN);
        4f64.powf(-1.0 / p) * (1.0 + t) / (1.0 - t) - 0.5 * sigma_p(p).unwrap_or(f64::NAN)
    };
    find_root(gap, 2.5, 2.6, tol)
}

/// Davis constant at the default tolerance, computed once per process.
pub fn davis_constant_cached() -> f64 {
    static P0: OnceLock<f64> = OnceLock::new();
    *P0.get_or_init(|| davis_constant(&Tolerance::default()).expect("Davis constant is bracketed by [2.5, 2.6]"))
}

/// Branch named by the piecewise rule: `Branch0` on `[2, p0]`, else `Branch1`.
fn piecewise_branch(p: f64) -> Branch {
    if (2.0..=davis_constant_cached()).contains(&p) {
        Branch::Branch0
    } else {
        Branch::Branch1
    }
}

/// Critical determinant `Δ(D_p)` together with both branches.
pub fn critical_determinant(p: f64) -> Result<CriticalData> {
    let p = check_p(p)?;
    let tau_p = tau_p(p)?;
    let sigma_p = sigma_p(p)?;
    let delta_branch1 = delta_branch1(p)?;
    let delta_branch0 = delta_branch0(p)?;
    Ok(CriticalData {
        p,
        tau_p,
        sigma_p,
        delta_branch1,
        delta_branch0,
        critical_determinant: delta_branch1.min(delta_branch0),
        active_branch: piecewise_branch(p),
    })
}

/// Minimum of the inscribed area section, `3 Δ(D_p)`.
pub fn min_area(p: f64) -> Result<f64> {
    Ok(3.0 * critical_determinant(p)?.critical_determinant)
}

/// The "inverse minimum": the piecewise minimum with its branches swapped,
/// `(3/2) σ_p` on `(1, 2] ∪ [p0, ∞)` and `3 Δ(p, 1)` on `[2, p0]`.
pub fn i_min_area(p: f64) -> Result<f64> {
    let p = check_p(p)?;
    match piecewise_branch(p) {
        Branch::Branch0 => Ok(3.0 * delta_branch1(p)?),
        Branch::Branch1 => Ok(3.0 * delta_branch0(p)?),
    }
}

/// Critical lattice of the given branch: `{(1, 0), (-1/2, σ_p/2)}` or
/// `{w1(τ_p), (-2^(-1/p), 2^(-1/p))}`.
pub fn critical_lattice(p: f64, branch: Branch) -> Result<Lattice2> {
    let p = check_p(p)?;
    let (tau, sigma) = match branch {
        Branch::Branch0 => (0.0, sigma_p(p)?),
        Branch::Branch1 => (tau_p(p)?, 1.0),
    };
    let [w1, _, w3] = al_hexagon(p, tau, sigma)?.vertices();
    Lattice2::new(w1, w3)
}

/// A point `(p, tau, sigma)` of the moduli domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModuliPoint {
    pub p: f64,
    pub tau: f64,
    pub sigma: f64,
    /// Boundary residual of the middle vertex `w1 + w3`.
    pub inscribed_residual: f64,
}

impl ModuliPoint {
    pub fn new(p: f64, tau: f64, sigma: f64) -> Result<Self> {
        let p = check_p(p)?;
        let sp = sigma_p(p)?;
        let tp = tau_p(p)?;
        if !(sigma >= 1.0 && sigma <= sp + SIGMA_CLAMP) {
            return Err(Error::domain(format!("sigma = {sigma} outside [1, {sp}]")));
        }
        if !(tau >= 0.0 && tau <= tp + SIGMA_CLAMP) {
            return Err(Error::domain(format!("tau = {tau} outside [0, {tp}]")));
        }
        if !(tau < sigma) {
            return Err(Error::ParameterOrder { tau, sigma });
        }
        Ok(ModuliPoint {
            p,
            tau,
            sigma,
            inscribed_residual: middle_residual(p, tau, sigma),
        })
    }

    /// The inscribed point above `sigma`.
    pub fn inscribed(p: f64, sigma: f64) -> Result<Self> {
        let sigma = clamp_sigma(check_p(p)?, sigma)?;
        ModuliPoint::new(p, tau_inscribed(p, sigma)?, sigma)
    }

    pub fn area(&self) -> f64 {
        3.0 * (self.tau + self.sigma)
            * (1.0 + self.tau.powf(self.p)).powf(-1.0 / self.p)
            * (1.0 + self.sigma.powf(self.p)).powf(-1.0 / self.p)
    }
}
