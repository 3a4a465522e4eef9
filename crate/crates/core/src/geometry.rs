//! Planar points, lattices and centrally symmetric hexagons.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::BallParameter;

/// Relative slack used when comparing gauges against the unit level.
pub const GAUGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, v: Point2) -> Point2 {
        Point2::new(self * v.x, self * v.y)
    }
}

/// The p-norm `(|x|^p + |y|^p)^(1/p)`; `D_p` is its unit ball.
pub fn gauge(point: Point2, p: BallParameter) -> f64 {
    let (ax, ay) = (point.x.abs(), point.y.abs());
    match p {
        BallParameter::LimitOne => ax + ay,
        BallParameter::LimitInfinity => ax.max(ay),
        BallParameter::Finite(p) => gauge_finite(ax, ay, p.get()),
    }
}

pub(crate) fn gauge_finite(ax: f64, ay: f64, p: f64) -> f64 {
    let m = ax.max(ay);
    if m == 0.0 {
        return 0.0;
    }
    // scaled to keep large p from overflowing
    m * ((ax / m).powf(p) + (ay / m).powf(p)).powf(1.0 / p)
}

/// Largest Euclidean norm of a point of `D_p`.
pub(crate) fn euclidean_radius(p: BallParameter) -> f64 {
    match p {
        BallParameter::LimitOne => 1.0,
        BallParameter::LimitInfinity => std::f64::consts::SQRT_2,
        BallParameter::Finite(p) if p.get() <= 2.0 => 1.0,
        BallParameter::Finite(p) => 2f64.powf(0.5 - 1.0 / p.get()),
    }
}

/// Signed boundary residual `|x|^p + |y|^p - 1` (negative inside).
///
/// Only defined for finite exponents; at the limits the boundary is
/// polygonal and `gauge - 1` should be used instead.
pub fn boundary_residual(point: Point2, p: BallParameter) -> Result<f64> {
    match p {
        BallParameter::Finite(p) => Ok(residual_finite(point, p.get())),
        _ => Err(Error::domain("boundary residual is undefined at the limit exponents")),
    }
}

pub(crate) fn residual_finite(point: Point2, p: f64) -> f64 {
    point.x.abs().powf(p) + point.y.abs().powf(p) - 1.0
}

/// Boundary point of `D_p` in direction `theta`.
pub(crate) fn boundary_point(theta: f64, p: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    let r = 1.0 / gauge_finite(c.abs(), s.abs(), p);
    Point2::new(r * c, r * s)
}

/// A planar lattice given by an ordered basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lattice2 {
    a1: Point2,
    a2: Point2,
}

impl Lattice2 {
    pub fn new(a1: Point2, a2: Point2) -> Result<Self> {
        if !a1.is_finite() || !a2.is_finite() {
            return Err(Error::domain("lattice basis must be finite"));
        }
        let det = a1.cross(a2);
        let scale = a1.dot(a1).max(a2.dot(a2));
        if det == 0.0 || det.abs() <= 1e-14 * scale {
            return Err(Error::Degenerate("lattice basis (zero determinant)".into()));
        }
        Ok(Lattice2 { a1, a2 })
    }

    pub fn basis(&self) -> (Point2, Point2) {
        (self.a1, self.a2)
    }

    /// `|det(a1, a2)|`, the area of a fundamental cell.
    pub fn determinant(&self) -> f64 {
        self.a1.cross(self.a2).abs()
    }

    pub fn point(&self, m: i64, n: i64) -> Point2 {
        m as f64 * self.a1 + n as f64 * self.a2
    }

    /// Same lattice, basis transformed by the integer matrix
    /// `[[m11, m12], [m21, m22]]` (rows give the new vectors).
    pub fn transformed(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if d.abs() != 1 {
            return Err(Error::domain("basis change must be unimodular"));
        }
        Lattice2::new(self.point(m[0][0], m[0][1]), self.point(m[1][0], m[1][1]))
    }

    /// Lagrange-Gauss reduced basis of the same lattice.
    pub fn reduced(&self) -> Lattice2 {
        let (mut u, mut v) = (self.a1, self.a2);
        if u.dot(u) > v.dot(v) {
            std::mem::swap(&mut u, &mut v);
        }
        for _ in 0..64 {
            let mu = (u.dot(v) / u.dot(u)).round();
            v = v - mu * u;
            if v.dot(v) >= u.dot(u) {
                break;
            }
            std::mem::swap(&mut u, &mut v);
        }
        if u.cross(v) < 0.0 {
            v = -v;
        }
        Lattice2 { a1: u, a2: v }
    }

    /// Dual basis vectors `b1, b2` with `<a_i, b_j> = δ_ij`.
    fn dual(&self) -> (Point2, Point2) {
        let det = self.a1.cross(self.a2);
        (
            Point2::new(self.a2.y / det, -self.a2.x / det),
            Point2::new(-self.a1.y / det, self.a1.x / det),
        )
    }

    /// Coordinates of `x` in this basis.
    pub fn coordinates(&self, x: Point2) -> (f64, f64) {
        let (b1, b2) = self.dual();
        (x.dot(b1), x.dot(b2))
    }

    /// Visits every lattice point within Euclidean distance `radius` of
    /// `center`. The coefficient ranges come from the dual basis, so no
    /// point in the disk is missed.
    pub fn for_each_near<F: FnMut(i64, i64, Point2)>(&self, center: Point2, radius: f64, mut visit: F) {
        let (b1, b2) = self.dual();
        let (c1, c2) = (center.dot(b1), center.dot(b2));
        let (r1, r2) = (radius * b1.norm(), radius * b2.norm());
        let (m_lo, m_hi) = ((c1 - r1).floor() as i64, (c1 + r1).ceil() as i64);
        let (n_lo, n_hi) = ((c2 - r2).floor() as i64, (c2 + r2).ceil() as i64);
        let r_sq = radius * radius;
        for m in m_lo..=m_hi {
            for n in n_lo..=n_hi {
                let v = self.point(m, n);
                let d = v - center;
                if d.dot(d) <= r_sq {
                    visit(m, n, v);
                }
            }
        }
    }

    /// Nonzero lattice points with gauge at most `level`.
    pub fn short_vectors(&self, p: BallParameter, level: f64) -> Vec<Point2> {
        let red = self.reduced();
        // |v|_2 <= sqrt(2) |v|_inf <= sqrt(2) gauge(v)
        let radius = std::f64::consts::SQRT_2 * level * (1.0 + 1e-9);
        let mut out = Vec::new();
        red.for_each_near(Point2::ORIGIN, radius, |m, n, v| {
            if (m, n) != (0, 0) && gauge(v, p) <= level {
                out.push(v);
            }
        });
        out
    }

    /// Admissibility for `D_p`: no nonzero lattice point in the open ball
    /// (`strict == false`) or in the closed ball (`strict == true`).
    ///
    /// Enumeration covers every point of gauge at most 2, which contains
    /// both balls.
    pub fn is_admissible(&self, p: BallParameter, strict: bool) -> bool {
        self.short_vectors(p, 2.0).into_iter().all(|v| {
            let g = gauge(v, p);
            if strict {
                g > 1.0 + GAUGE_EPS
            } else {
                g >= 1.0 - GAUGE_EPS
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HexagonKind {
    /// Middle vertex is the sum of the outer two: `w2 = w1 + w3`.
    AlHexagon,
    General,
    /// Degenerate hexagon with one collapsed vertex pair.
    Quadrangle,
}

/// Centrally symmetric hexagon with vertices `w1, w2, w3, -w1, -w2, -w3` in
/// counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricHexagon {
    w1: Point2,
    w2: Point2,
    w3: Point2,
    kind: HexagonKind,
}

impl SymmetricHexagon {
    /// Validates convexity and counterclockwise order, then classifies.
    pub fn new(w1: Point2, w2: Point2, w3: Point2) -> Result<Self> {
        if !(w1.is_finite() && w2.is_finite() && w3.is_finite()) {
            return Err(Error::domain("hexagon vertices must be finite"));
        }
        let scale = w1.dot(w1).max(w2.dot(w2)).max(w3.dot(w3));
        let eps = 1e-12 * scale.max(f64::MIN_POSITIVE);

        let fan = [w1.cross(w2), w2.cross(w3), w3.cross(-w1)];
        if fan.iter().any(|&c| c < -eps) {
            return Err(Error::domain("hexagon vertices are not in counterclockwise order"));
        }
        if fan.iter().sum::<f64>() <= eps {
            return Err(Error::Degenerate("hexagon (zero area)".into()));
        }

        // drop zero-length edges, then count the corners that actually turn
        let poly = [w1, w2, w3, -w1, -w2, -w3];
        let len_eps = 1e-12 * scale.sqrt();
        let pts: Vec<Point2> = (0..6)
            .filter(|&i| (poly[i] - poly[(i + 1) % 6]).norm() > len_eps)
            .map(|i| poly[i])
            .collect();
        let n = pts.len();
        let mut corners = 0;
        for i in 0..n {
            let turn = (pts[i] - pts[(i + n - 1) % n]).cross(pts[(i + 1) % n] - pts[i]);
            if turn < -eps {
                return Err(Error::domain("hexagon vertices are not convex"));
            }
            if turn > eps {
                corners += 1;
            }
        }
        let kind = match corners {
            6 if (w2 - (w1 + w3)).norm() <= 1e-12 * scale.sqrt().max(1.0) => HexagonKind::AlHexagon,
            6 => HexagonKind::General,
            4 => HexagonKind::Quadrangle,
            _ => return Err(Error::Degenerate(format!("hexagon ({corners} corners)"))),
        };
        Ok(SymmetricHexagon { w1, w2, w3, kind })
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.w1, self.w2, self.w3]
    }

    /// All six vertices in counterclockwise order.
    pub fn polygon(&self) -> [Point2; 6] {
        [self.w1, self.w2, self.w3, -self.w1, -self.w2, -self.w3]
    }

    pub fn kind(&self) -> HexagonKind {
        self.kind
    }

    /// `cross(w1,w2) + cross(w2,w3) + cross(w1,w3)`, equal to the shoelace
    /// area of the six-vertex polygon.
    pub fn area(&self) -> f64 {
        self.w1.cross(self.w2) + self.w2.cross(self.w3) + self.w1.cross(self.w3)
    }

    /// Shoelace area over the explicit six vertices.
    pub fn shoelace_area(&self) -> f64 {
        let v = self.polygon();
        let twice: f64 = (0..6).map(|i| v[i].cross(v[(i + 1) % 6])).sum();
        0.5 * twice.abs()
    }

    /// Translation lattice `{w1 + w2, w2 + w3}` under which the hexagon
    /// tiles the plane. Its determinant equals the hexagon area.
    pub fn covering_lattice(&self) -> Result<Lattice2> {
        if !(self.area() > 0.0) {
            return Err(Error::Degenerate("hexagon (zero area)".into()));
        }
        Lattice2::new(self.w1 + self.w2, self.w2 + self.w3)
    }
}

/// The al-hexagon of the moduli point `(p, tau, sigma)`:
/// `w1 = (1+τ^p)^(-1/p) (1, τ)`, `w3 = (1+σ^p)^(-1/p) (-1, σ)` and
/// `w2 = w1 + w3`. `w1` and `w3` lie on the boundary of `D_p`; `w2` need not.
pub fn al_hexagon(p: f64, tau: f64, sigma: f64) -> Result<SymmetricHexagon> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::domain(format!("al-hexagon requires finite p > 1, got {p}")));
    }
    if !(tau >= 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("al-hexagon requires tau >= 0, got {tau}")));
    }
    if tau >= sigma {
        return Err(Error::ParameterOrder { tau, sigma });
    }
    let s1 = (1.0 + tau.powf(p)).powf(-1.0 / p);
    let s3 = (1.0 + sigma.powf(p)).powf(-1.0 / p);
    let w1 = Point2::new(s1, tau * s1);
    let w3 = Point2::new(-s3, sigma * s3);
    Ok(SymmetricHexagon {
        w1,
        w2: w1 + w3,
        w3,
        kind: HexagonKind::AlHexagon,
    })
}
