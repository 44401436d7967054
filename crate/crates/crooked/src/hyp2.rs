//! Upper half-plane geometry and the action of PSL(2,R).

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Mat2 = [[f64; 2]; 2];

/// Half-width of the band `||tr| - 2| <= PARABOLIC_BAND` classified as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;
/// Tolerance for deciding that two ideal points coincide (sine of the projective angle).
pub const IDEAL_TOL: f64 = 1e-9;
/// Hyperbolic distance under which a point counts as lying on a line.
pub const ON_LINE_TOL: f64 = 1e-9;
/// Tolerance used by `F_ext` to detect exact endpoint coincidences.
pub const COINCIDE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("matrix has non-positive determinant {0}")]
    NotOrientationPreserving(f64),
    #[error("F is undefined: xi = xi' and g.xi = g'.xi'")]
    Domain,
    #[error("lines are not separated (closures meet)")]
    NotSeparated,
    #[error("lines cross")]
    LinesCross,
    #[error("line endpoints coincide")]
    DegenerateLine,
    #[error("line has no transverse orientation")]
    Unoriented,
}

pub(crate) fn det2(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub(crate) fn mat_det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub(crate) fn adjugate(m: &Mat2) -> Mat2 {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

/// Frobenius norm.
pub(crate) fn fro(m: &Mat2) -> f64 {
    (m[0][0].powi(2) + m[0][1].powi(2) + m[1][0].powi(2) + m[1][1].powi(2)).sqrt()
}

pub(crate) fn mat_vec(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Orientation-preserving isometry of the hyperbolic plane, stored with det = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct Isometry {
    m: Mat2,
}

impl TryFrom<Mat2> for Isometry {
    type Error = GeomError;
    fn try_from(m: Mat2) -> Result<Self, GeomError> {
        Isometry::new(m)
    }
}

impl From<Isometry> for Mat2 {
    fn from(g: Isometry) -> Mat2 {
        g.m
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Normalizes a matrix with positive determinant to unit determinant.
    pub fn new(m: Mat2) -> Result<Self, GeomError> {
        let det = mat_det(&m);
        if !(det > 0.0) || !det.is_finite() {
            return Err(GeomError::NotOrientationPreserving(det));
        }
        // already unit up to the rounding in det itself: rescaling would only add noise
        let scale = (m[0][0] * m[1][1]).abs() + (m[0][1] * m[1][0]).abs();
        if (det - 1.0).abs() <= 8.0 * f64::EPSILON * scale {
            return Ok(Isometry { m });
        }
        let s = det.sqrt().recip();
        Ok(Isometry {
            m: [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]],
        })
    }

    pub fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeomError> {
        Self::new([[a, b], [c, d]])
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { m: adjugate(&self.m) }
    }

    /// Wraps a matrix already known to have unit determinant.
    pub(crate) fn raw(m: Mat2) -> Isometry {
        Isometry { m }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        // renormalize so long products do not drift off the group
        Isometry::new(mat_mul(&self.m, &other.m)).unwrap_or(Isometry {
            m: mat_mul(&self.m, &other.m),
        })
    }

    /// `self * other * self^-1`
    pub fn conjugate(&self, other: &Isometry) -> Isometry {
        self.compose(other).compose(&self.inverse())
    }

    /// Largest entrywise difference, minimized over the global sign.
    pub fn distance_to(&self, other: &Isometry) -> f64 {
        let mut plus: f64 = 0.0;
        let mut minus: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                plus = plus.max((self.m[i][j] - other.m[i][j]).abs());
                minus = minus.max((self.m[i][j] + other.m[i][j]).abs());
            }
        }
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.distance_to(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Isometry::IDENTITY, tol)
    }

    pub fn diag(lambda: f64) -> Isometry {
        Isometry {
            m: [[lambda, 0.0], [0.0, 1.0 / lambda]],
        }
    }

    /// Translation of length `t` along the imaginary axis, toward infinity for t > 0.
    pub fn axial(t: f64) -> Isometry {
        Isometry::diag((t / 2.0).exp())
    }

    /// `z -> z + t`
    pub fn unipotent(t: f64) -> Isometry {
        Isometry {
            m: [[1.0, t], [0.0, 1.0]],
        }
    }

    /// Rotation by `theta` about `i`.
    pub fn rotation_i(theta: f64) -> Isometry {
        let (s, c) = (theta / 2.0).sin_cos();
        Isometry {
            m: [[c, -s], [s, c]],
        }
    }

    /// An isometry mapping `i` to `p` (dilation then horizontal shift).
    pub fn moving_i_to(p: PlanePoint) -> Isometry {
        let y = p.z.im;
        let r = y.sqrt();
        Isometry {
            m: [[r, p.z.re / r], [0.0, 1.0 / r]],
        }
    }

    /// Rotation by `theta` about `p`.
    pub fn rotation(p: PlanePoint, theta: f64) -> Isometry {
        Isometry::moving_i_to(p).conjugate(&Isometry::rotation_i(theta))
    }

    /// Hyperbolic element with the given attracting / repelling points and translation length.
    pub fn hyperbolic(attr: BoundaryPoint, rep: BoundaryPoint, length: f64) -> Isometry {
        let n = frame(&rep, &attr);
        n.conjugate(&Isometry::axial(length))
    }

    /// Parabolic element fixing `xi`; `t` is the translation parameter in the frame of `xi`.
    pub fn parabolic(xi: BoundaryPoint, t: f64) -> Isometry {
        let other = if xi.v[0].abs() > 0.5 {
            BoundaryPoint::new(-xi.v[1], xi.v[0])
        } else {
            BoundaryPoint::new(xi.v[1], -xi.v[0])
        };
        frame(&other, &xi).conjugate(&Isometry::unipotent(t))
    }

    pub fn apply<P: Movable>(&self, p: &P) -> P {
        p.moved_by(self)
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl Mul for &Isometry {
    type Output = Isometry;
    fn mul(self, rhs: &Isometry) -> Isometry {
        self.compose(rhs)
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

/// Ideal point `[v1 : v2]` of the boundary circle, stored as a unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct BoundaryPoint {
    v: [f64; 2],
}

impl TryFrom<[f64; 2]> for BoundaryPoint {
    type Error = GeomError;
    fn try_from(v: [f64; 2]) -> Result<Self, GeomError> {
        if v[0].hypot(v[1]) > 0.0 && v[0].is_finite() && v[1].is_finite() {
            Ok(BoundaryPoint::new(v[0], v[1]))
        } else {
            Err(GeomError::DegenerateLine)
        }
    }
}

impl From<BoundaryPoint> for [f64; 2] {
    fn from(p: BoundaryPoint) -> [f64; 2] {
        p.v
    }
}

impl BoundaryPoint {
    pub fn new(v1: f64, v2: f64) -> BoundaryPoint {
        let n = v1.hypot(v2);
        debug_assert!(n > 0.0, "zero homogeneous vector");
        let (mut a, mut b) = (v1 / n, v2 / n);
        if b < 0.0 || (b == 0.0 && a < 0.0) {
            a = -a;
            b = -b;
        }
        BoundaryPoint { v: [a, b] }
    }

    pub fn real(x: f64) -> BoundaryPoint {
        BoundaryPoint::new(x, 1.0)
    }

    pub fn infinity() -> BoundaryPoint {
        BoundaryPoint::new(1.0, 0.0)
    }

    /// Point of the circle at projective angle `phi` (period pi).
    pub fn from_angle(phi: f64) -> BoundaryPoint {
        BoundaryPoint::new(phi.cos(), phi.sin())
    }

    pub fn vector(&self) -> [f64; 2] {
        self.v
    }

    pub fn as_real(&self) -> Option<f64> {
        if self.v[1].abs() < 1e-300 {
            None
        } else {
            Some(self.v[0] / self.v[1])
        }
    }

    /// |sin| of the projective angle between the two points.
    pub fn separation(&self, other: &BoundaryPoint) -> f64 {
        det2(self.v, other.v).abs()
    }

    pub fn same_as(&self, other: &BoundaryPoint, tol: f64) -> bool {
        self.separation(other) <= tol
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_real() {
            Some(x) if x.abs() < 1e12 => write!(f, "{x:.6}"),
            _ => write!(f, "inf"),
        }
    }
}

/// Point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub z: Complex64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> PlanePoint {
        debug_assert!(y > 0.0);
        PlanePoint {
            z: Complex64::new(x, y),
        }
    }

    pub fn i() -> PlanePoint {
        PlanePoint::new(0.0, 1.0)
    }
}

pub trait Movable: Sized {
    fn moved_by(&self, g: &Isometry) -> Self;
}

impl Movable for PlanePoint {
    fn moved_by(&self, g: &Isometry) -> PlanePoint {
        let [[a, b], [c, d]] = g.m;
        let w = (self.z * a + b) / (self.z * c + d);
        // keep strictly inside after rounding
        PlanePoint {
            z: Complex64::new(w.re, w.im.max(f64::MIN_POSITIVE)),
        }
    }
}

impl Movable for BoundaryPoint {
    fn moved_by(&self, g: &Isometry) -> BoundaryPoint {
        let w = mat_vec(&g.m, self.v);
        BoundaryPoint::new(w[0], w[1])
    }
}

pub fn mobius_apply<P: Movable>(g: &Isometry, p: &P) -> P {
    p.moved_by(g)
}

pub fn dist(x: &PlanePoint, y: &PlanePoint) -> f64 {
    let num = (x.z - y.z).norm_sqr();
    let arg = num / (2.0 * x.z.im * y.z.im);
    // acosh(1 + u) written to keep precision for small u
    let s = (arg * (arg + 2.0)).sqrt();
    (arg + s).ln_1p()
}

/// Distance between `i` and `u . i`, through the Frobenius norm of a unit-determinant matrix.
pub fn dist_from_i(u: &Mat2) -> f64 {
    let n2 = u[0][0].powi(2) + u[0][1].powi(2) + u[1][0].powi(2) + u[1][1].powi(2);
    let det = mat_det(u).abs();
    let c = (n2 / (2.0 * det)).max(1.0);
    let a = c - 1.0;
    (a + (a * (a + 2.0)).sqrt()).ln_1p()
}

/// `d(A . i, B . i)` computed chart-free.
pub fn dist_between(a: &Isometry, b: &Isometry) -> f64 {
    dist_from_i(&mat_mul(&adjugate(&a.m), &b.m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Identity,
    Elliptic { fixed: PlanePoint },
    Parabolic { fixed: BoundaryPoint },
    Hyperbolic { attr: BoundaryPoint, rep: BoundaryPoint },
}

impl Classification {
    pub fn kind(&self) -> &'static str {
        match self {
            Classification::Identity => "identity",
            Classification::Elliptic { .. } => "elliptic",
            Classification::Parabolic { .. } => "parabolic",
            Classification::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

pub(crate) fn eigvec(m: &Mat2, mu: f64) -> [f64; 2] {
    let u = [m[0][1], mu - m[0][0]];
    let w = [mu - m[1][1], m[1][0]];
    if u[0].hypot(u[1]) >= w[0].hypot(w[1]) {
        u
    } else {
        w
    }
}

/// Whether the trace falls in the parabolic band.
pub fn in_parabolic_band(g: &Isometry) -> bool {
    (g.trace().abs() - 2.0).abs() <= PARABOLIC_BAND
}

pub fn classify(g: &Isometry) -> Classification {
    let m = g.m;
    let tr = g.trace();
    let atr = tr.abs();
    if (atr - 2.0).abs() <= PARABOLIC_BAND {
        let scale = 1.0 + m[0][0].abs().max(m[1][1].abs());
        if m[0][1].abs().max(m[1][0].abs()).max((m[0][0] - m[1][1]).abs()) <= 1e-12 * scale {
            return Classification::Identity;
        }
        let s = tr.signum();
        let v = eigvec(&m, s);
        return Classification::Parabolic {
            fixed: BoundaryPoint::new(v[0], v[1]),
        };
    }
    if atr < 2.0 {
        let (a, c, d) = (m[0][0], m[1][0], m[1][1]);
        let root = (4.0 - tr * tr).sqrt();
        let z = Complex64::new((a - d) / (2.0 * c), root / (2.0 * c.abs()));
        return Classification::Elliptic {
            fixed: PlanePoint { z },
        };
    }
    let disc = (tr * tr - 4.0).sqrt();
    let (big, small) = if tr > 0.0 {
        ((tr + disc) / 2.0, (tr - disc) / 2.0)
    } else {
        ((tr - disc) / 2.0, (tr + disc) / 2.0)
    };
    // the small eigenvalue is computed as 1/big to avoid cancellation
    let small = if small.abs() < 1e-8 { 1.0 / big } else { small };
    let va = eigvec(&m, big);
    let vr = eigvec(&m, small);
    Classification::Hyperbolic {
        attr: BoundaryPoint::new(va[0], va[1]),
        rep: BoundaryPoint::new(vr[0], vr[1]),
    }
}

pub fn translation_length(g: &Isometry) -> f64 {
    match classify(g) {
        Classification::Hyperbolic { .. } => 2.0 * (g.trace().abs() / 2.0).acosh(),
        _ => 0.0,
    }
}

/// Rotation angle in (0, pi] of an elliptic element; `None` otherwise.
pub fn rotation_angle(g: &Isometry) -> Option<f64> {
    match classify(g) {
        Classification::Elliptic { .. } => Some(2.0 * (g.trace().abs() / 2.0).acos()),
        _ => None,
    }
}

/// Extended distance functional `F_{g,g'}(xi, xi')`.
#[allow(non_snake_case)]
pub fn F_ext(
    g: &Isometry,
    gp: &Isometry,
    xi: &BoundaryPoint,
    xip: &BoundaryPoint,
) -> Result<f64, GeomError> {
    let d0 = det2(xi.v, xip.v);
    let u = mat_vec(&g.m, xi.v);
    let w = mat_vec(&gp.m, xip.v);
    let scale = u[0].hypot(u[1]) * w[0].hypot(w[1]);
    let d1 = det2(u, w);
    let same_src = d0.abs() <= COINCIDE_TOL;
    let same_img = d1.abs() <= COINCIDE_TOL * scale;
    match (same_src, same_img) {
        (true, true) => Err(GeomError::Domain),
        (true, false) => Ok(f64::INFINITY),
        (false, true) => Ok(f64::NEG_INFINITY),
        (false, false) => Ok(2.0 * (d1.abs().ln() - d0.abs().ln())),
    }
}

/// Which side of the ray a -> b is the positive side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    PositiveLeft,
    #[serde(rename = "-", alias = "−")]
    PositiveRight,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::PositiveLeft => Orientation::PositiveRight,
            Orientation::PositiveRight => Orientation::PositiveLeft,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideOf {
    Positive,
    On,
    Negative,
}

/// Geodesic line with ordered ideal endpoints and an optional transverse orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicLine {
    pub a: BoundaryPoint,
    pub b: BoundaryPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orient: Option<Orientation>,
}

/// Isometry with `0 -> a` and `infinity -> b`.
pub fn frame(a: &BoundaryPoint, b: &BoundaryPoint) -> Isometry {
    let (mut av, bv) = (a.v, b.v);
    if det2(bv, av) < 0.0 {
        av = [-av[0], -av[1]];
    }
    Isometry::new([[bv[0], av[0]], [bv[1], av[1]]]).expect("frame of coincident points")
}

impl GeodesicLine {
    pub fn new(a: BoundaryPoint, b: BoundaryPoint) -> Result<GeodesicLine, GeomError> {
        if a.separation(&b) <= 1e-10 {
            return Err(GeomError::DegenerateLine);
        }
        Ok(GeodesicLine { a, b, orient: None })
    }

    pub fn oriented(a: BoundaryPoint, b: BoundaryPoint, o: Orientation) -> Result<GeodesicLine, GeomError> {
        Ok(GeodesicLine::new(a, b)?.with_orientation(o))
    }

    pub fn reals(a: f64, b: f64) -> Result<GeodesicLine, GeomError> {
        GeodesicLine::new(BoundaryPoint::real(a), BoundaryPoint::real(b))
    }

    pub fn with_orientation(mut self, o: Orientation) -> GeodesicLine {
        self.orient = Some(o);
        self
    }

    /// Orient so that `p` lies on the positive side.
    pub fn oriented_toward(self, p: &PlanePoint) -> GeodesicLine {
        let q = self.frame().inverse().apply(p);
        let o = if q.z.re < 0.0 {
            Orientation::PositiveLeft
        } else {
            Orientation::PositiveRight
        };
        self.with_orientation(o)
    }

    /// Isometry taking the imaginary axis (0 -> infinity) to this line (a -> b).
    pub fn frame(&self) -> Isometry {
        frame(&self.a, &self.b)
    }

    pub fn endpoints(&self) -> [BoundaryPoint; 2] {
        [self.a, self.b]
    }

    pub fn moved_by(&self, g: &Isometry) -> GeodesicLine {
        GeodesicLine {
            a: g.apply(&self.a),
            b: g.apply(&self.b),
            orient: self.orient,
        }
    }

    pub fn has_endpoint(&self, xi: &BoundaryPoint, tol: f64) -> bool {
        self.a.same_as(xi, tol) || self.b.same_as(xi, tol)
    }

    pub fn dist_to_point(&self, p: &PlanePoint) -> f64 {
        let q = self.frame().inverse().apply(p);
        (q.z.re / q.z.im).abs().asinh()
    }

    /// Point at signed arclength `s` from the base point `frame . i`, moving toward `b`.
    pub fn point_at(&self, s: f64) -> PlanePoint {
        self.frame().apply(&PlanePoint::new(0.0, s.exp()))
    }

    /// Matrix `A_s` with `A_s . i = point_at(s)`.
    pub fn point_matrix(&self, s: f64) -> Isometry {
        self.frame().compose(&Isometry::axial(s))
    }

    /// A point strictly on the positive side, at distance 1 from the base point.
    pub fn positive_point(&self) -> Result<PlanePoint, GeomError> {
        let o = self.orient.ok_or(GeomError::Unoriented)?;
        let x = match o {
            Orientation::PositiveLeft => -1.0,
            Orientation::PositiveRight => 1.0,
        };
        Ok(self.frame().apply(&PlanePoint::new(x, 1.0)))
    }

    pub fn same_line(&self, other: &GeodesicLine, tol: f64) -> bool {
        (self.a.same_as(&other.a, tol) && self.b.same_as(&other.b, tol))
            || (self.a.same_as(&other.b, tol) && self.b.same_as(&other.a, tol))
    }
}

impl Movable for GeodesicLine {
    fn moved_by(&self, g: &Isometry) -> GeodesicLine {
        GeodesicLine::moved_by(self, g)
    }
}

fn side_from_sign(x: f64, o: Orientation) -> SideOf {
    let left = x < 0.0;
    match (left, o) {
        (true, Orientation::PositiveLeft) | (false, Orientation::PositiveRight) => SideOf::Positive,
        _ => SideOf::Negative,
    }
}

/// Points and ideal points that can be located relative to an oriented line.
pub trait Sided {
    fn side_wrt(&self, line: &GeodesicLine, o: Orientation) -> SideOf;
}

impl Sided for PlanePoint {
    fn side_wrt(&self, line: &GeodesicLine, o: Orientation) -> SideOf {
        let q = line.frame().inverse().apply(self);
        let r = q.z.re / q.z.im;
        if r.abs().asinh() <= ON_LINE_TOL {
            SideOf::On
        } else {
            side_from_sign(r, o)
        }
    }
}

impl Sided for BoundaryPoint {
    fn side_wrt(&self, line: &GeodesicLine, o: Orientation) -> SideOf {
        if line.has_endpoint(self, IDEAL_TOL) {
            return SideOf::On;
        }
        let u = line.frame().inverse().apply(self).vector();
        side_from_sign(u[0] * u[1], o)
    }
}

pub fn side_of<P: Sided>(line: &GeodesicLine, p: &P) -> Result<SideOf, GeomError> {
    let o = line.orient.ok_or(GeomError::Unoriented)?;
    Ok(p.side_wrt(line, o))
}

/// Side of `line` on which the ideal point sits, ignoring orientation (Re < 0 in the frame is "left").
fn raw_side(line: &GeodesicLine, p: &BoundaryPoint) -> SideOf {
    p.side_wrt(line, Orientation::PositiveLeft)
}

/// How the closures of two lines meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinePosition {
    /// Closures disjoint.
    Separated,
    /// One or two shared ideal endpoints, no interior crossing.
    Asymptotic,
    Crossing,
}

pub fn line_position(l: &GeodesicLine, lp: &GeodesicLine) -> LinePosition {
    let sa = raw_side(l, &lp.a);
    let sb = raw_side(l, &lp.b);
    match (sa, sb) {
        (SideOf::On, _) | (_, SideOf::On) => LinePosition::Asymptotic,
        (x, y) if x == y => LinePosition::Separated,
        _ => LinePosition::Crossing,
    }
}

pub fn lines_separated(l: &GeodesicLine, lp: &GeodesicLine) -> bool {
    line_position(l, lp) == LinePosition::Separated
}

/// True iff the open positive half-planes of the two lines are disjoint.
pub fn oriented_away(l: &GeodesicLine, lp: &GeodesicLine) -> Result<bool, GeomError> {
    let o = l.orient.ok_or(GeomError::Unoriented)?;
    let op = lp.orient.ok_or(GeomError::Unoriented)?;
    if line_position(l, lp) == LinePosition::Crossing {
        return Err(GeomError::LinesCross);
    }
    if l.same_line(lp, IDEAL_TOL) {
        let p = l.positive_point()?;
        return Ok(p.side_wrt(lp, op) == SideOf::Negative);
    }
    let ok = lp
        .endpoints()
        .iter()
        .all(|x| x.side_wrt(l, o) != SideOf::Positive)
        && l.endpoints().iter().all(|x| x.side_wrt(lp, op) != SideOf::Positive);
    Ok(ok)
}

/// Orients both lines so that their positive sides are disjoint.
pub fn orient_away_pair(
    l: &GeodesicLine,
    lp: &GeodesicLine,
) -> Result<(GeodesicLine, GeodesicLine), GeomError> {
    if line_position(l, lp) == LinePosition::Crossing {
        return Err(GeomError::LinesCross);
    }
    let pick = |line: &GeodesicLine, other: &GeodesicLine| -> GeodesicLine {
        let e = other
            .endpoints()
            .into_iter()
            .find(|x| raw_side(line, x) != SideOf::On)
            .unwrap_or(other.a);
        // positive side is the one not containing the other line
        match raw_side(line, &e) {
            SideOf::Positive => line.with_orientation(Orientation::PositiveRight),
            _ => line.with_orientation(Orientation::PositiveLeft),
        }
    };
    Ok((pick(l, lp), pick(lp, l)))
}

/// Möbius map sending `p[k] -> q[k]`; `None` if it would reverse orientation.
pub fn three_point_map(p: [BoundaryPoint; 3], q: [BoundaryPoint; 3]) -> Option<Isometry> {
    fn to_std(p: [BoundaryPoint; 3]) -> Mat2 {
        let (p1, p2, p3) = (p[0].v, p[1].v, p[2].v);
        let s1 = det2(p3, p2);
        let s2 = det2(p3, p1);
        [[s1 * p1[1], -s1 * p1[0]], [s2 * p2[1], -s2 * p2[0]]]
    }
    let mp = to_std(p);
    let mq = to_std(q);
    let m = mat_mul(&adjugate(&mq), &mp);
    Isometry::new(m).ok()
}

/// Normalizing isometry `k` and `R > 1` with `k.l = (-1/R, 1/R)` and `k.l' = {R, -R}`.
pub fn normalize_pair(l: &GeodesicLine, lp: &GeodesicLine) -> Result<(Isometry, f64), GeomError> {
    if !lines_separated(l, lp) {
        return Err(GeomError::NotSeparated);
    }
    let l0 = l.frame().inverse();
    let x = l0.apply(&lp.a).vector();
    let y = l0.apply(&lp.b).vector();
    // x[0]/x[1] and y[0]/y[1] are finite, nonzero and of one sign
    let ratio = (x[0] * y[1]) / (x[1] * y[0]);
    let c = ratio.max(1.0 / ratio).sqrt();
    let r = ((c + 1.0) / (c - 1.0)).sqrt();
    if !(r.is_finite() && r > 1.0) {
        return Err(GeomError::NotSeparated);
    }
    let bp = BoundaryPoint::real;
    let combos = [
        ([-1.0 / r, 1.0 / r], [r, -r]),
        ([-1.0 / r, 1.0 / r], [-r, r]),
        ([1.0 / r, -1.0 / r], [r, -r]),
        ([1.0 / r, -1.0 / r], [-r, r]),
    ];
    let mut best: Option<(f64, Isometry)> = None;
    for (ta, tb) in combos {
        if let Some(k) = three_point_map([l.a, l.b, lp.a], [bp(ta[0]), bp(ta[1]), bp(tb[0])]) {
            let err = k.apply(&lp.b).separation(&bp(tb[1]));
            if best.as_ref().map_or(true, |(e, _)| err < *e) {
                best = Some((err, k));
            }
        }
    }
    let (_, k) = best.ok_or(GeomError::NotSeparated)?;
    Ok((k, r))
}

/// Length of the common perpendicular of two separated lines.
pub fn line_distance(l: &GeodesicLine, lp: &GeodesicLine) -> Result<f64, GeomError> {
    let (_, r) = normalize_pair(l, lp)?;
    Ok(2.0 * r.ln())
}

pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}
