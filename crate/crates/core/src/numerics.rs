//! Scalar special functions and one-dimensional solvers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Stopping rule shared by the root finder and the maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(Error::domain(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(rel_tol >= 0.0) || !rel_tol.is_finite() {
            return Err(Error::domain(format!("rel_tol must be non-negative, got {rel_tol}")));
        }
        if max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        Ok(Tolerance {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    /// Width below which an interval around `x` counts as converged.
    fn width(&self, x: f64) -> f64 {
        self.abs_tol + self.rel_tol * x.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// A finite exponent `p > 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Exponent(p))
        } else {
            Err(Error::domain(format!("finite exponent must satisfy p > 1, got {p}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Exponent of a Minkowski ball. `p = 1` and `p = infinity` are only
/// representable as limit markers; they are always special-cased.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallParameter {
    LimitOne,
    Finite(Exponent),
    LimitInfinity,
}

impl BallParameter {
    pub fn finite(p: f64) -> Result<Self> {
        Exponent::new(p).map(BallParameter::Finite)
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            BallParameter::Finite(p) => Some(p.get()),
            _ => None,
        }
    }

    pub fn is_limit(self) -> bool {
        !matches!(self, BallParameter::Finite(_))
    }
}

impl fmt::Display for BallParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallParameter::LimitOne => write!(f, "1"),
            BallParameter::Finite(p) => write!(f, "{}", p.get()),
            BallParameter::LimitInfinity => write!(f, "inf"),
        }
    }
}

impl FromStr for BallParameter {
    type Err = Error;

    /// `"1"` and `"inf"` map to the limit markers; anything else must be a
    /// finite number above one.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => return Ok(BallParameter::LimitInfinity),
            _ => {}
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::domain(format!("cannot parse exponent {s:?}")))?;
        if p == 1.0 {
            Ok(BallParameter::LimitOne)
        } else if p == f64::INFINITY {
            Ok(BallParameter::LimitInfinity)
        } else {
            BallParameter::finite(p)
        }
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Lanczos approximation (g = 7, nine terms); arguments below one half go
/// through the reflection formula.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Area of the Minkowski ball `D_p`: `4 Γ(1+1/p)² / Γ(1+2/p)`.
pub fn ball_volume(p: BallParameter) -> f64 {
    match p {
        BallParameter::LimitOne => 2.0,
        BallParameter::LimitInfinity => 4.0,
        BallParameter::Finite(p) => {
            let p = p.get();
            let lg1 = ln_gamma_positive(1.0 + 1.0 / p);
            let lg2 = ln_gamma_positive(1.0 + 2.0 / p);
            4.0 * (2.0 * lg1 - lg2).exp()
        }
    }
}

/// Bracketed root of `f` on `[lo, hi]`.
///
/// Bisection until `|f| <= abs_tol` or the bracket is narrower than the
/// tolerance width, followed by one regula-falsi polish step inside the
/// final bracket. Fully deterministic.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = eval(&mut f, a)?;
    let mut fb = eval(&mut f, b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    for _ in 0..tol.max_iter {
        let m = a + 0.5 * (b - a);
        let fm = eval(&mut f, m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if fm.abs() <= tol.abs_tol || b - a <= tol.width(m) {
            return polish(&mut f, (a, fa), (b, fb), (m, fm));
        }
    }
    Err(Error::NonConvergence {
        iterations: tol.max_iter,
    })
}

fn polish<F>(f: &mut F, (a, fa): (f64, f64), (b, fb): (f64, f64), (m, fm): (f64, f64)) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let x = a - fa * (b - a) / (fb - fa);
    if !(x > a && x < b) {
        return Ok(m);
    }
    let fx = eval(f, x)?;
    Ok(if fx.abs() < fm.abs() { x } else { m })
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite { x })
    }
}

/// Coarse-grid settings for [`maximize_scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearch {
    /// Number of uniform cells; the grid has `cells + 1` points including
    /// both endpoints.
    pub cells: usize,
    /// Values within `tie_tol * max(1, |max|)` of the grid maximum count as
    /// equal; the smallest such grid point wins.
    pub tie_tol: f64,
}

impl Default for GridSearch {
    fn default() -> Self {
        GridSearch {
            cells: 64,
            tie_tol: 1e-10,
        }
    }
}

/// Maximize `f` on `[lo, hi]` with the default 64-cell grid.
pub fn maximize_scalar<F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    try_maximize_scalar(|x| Ok(f(x)), lo, hi, tol, &GridSearch::default())
}

/// Grid-seeded golden-section maximization of a fallible function.
///
/// The grid maximum (smallest argument among ties) brackets the refinement.
/// On a plateau, where both grid neighbours tie with the best grid value,
/// the grid point itself is returned. A refined maximum in an end cell
/// whose domain endpoint ties with it is reported at the endpoint.
pub fn try_maximize_scalar<F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance, grid: &GridSearch) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "maximize_scalar requires lo < hi, got [{lo}, {hi}]"
        )));
    }
    let cells = grid.cells.max(2);
    let mut checked = |x: f64| -> Result<f64> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { x })
        }
    };

    let xs: Vec<f64> = (0..=cells)
        .map(|i| {
            if i == cells {
                hi
            } else {
                lo + (hi - lo) * i as f64 / cells as f64
            }
        })
        .collect();
    let ys = xs.iter().map(|&x| checked(x)).collect::<Result<Vec<_>>>()?;

    let top = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = grid.tie_tol * top.abs().max(1.0);
    let best = ys.iter().position(|&y| y >= top - tie).unwrap_or(0);
    let (x_best, y_best) = (xs[best], ys[best]);

    let left = best.saturating_sub(1);
    let right = (best + 1).min(cells);
    let flat = |i: usize| i == best || (ys[i] - y_best).abs() <= tie;
    if flat(left) && flat(right) {
        return Ok((x_best, y_best));
    }

    let (x_ref, y_ref) = golden_section_maximize(&mut checked, xs[left], xs[right], tol)?;
    if y_ref <= y_best {
        return Ok((x_best, y_best));
    }
    // a maximum at a flat domain end is only found to about sqrt(eps)
    for end in [0, cells] {
        if (end == left || end == right) && ys[end] >= y_ref - tie {
            return Ok((xs[end], ys[end]));
        }
    }
    Ok((x_ref, y_ref))
}

fn golden_section_maximize<F>(f: &mut F, mut a: f64, mut b: f64, tol: &Tolerance) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const RESP: f64 = 0.381_966_011_250_105_15; // 2 - golden ratio

    let mut x1 = a + RESP * (b - a);
    let mut x2 = b - RESP * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;

    for _ in 0..tol.max_iter {
        if b - a <= tol.width(0.5 * (a + b)) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + RESP * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - RESP * (b - a);
            f2 = f(x2)?;
        }
    }

    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}
