//! Minkowski space as Killing fields of the hyperbolic plane, and its crooked planes.
//!
//! A Killing field is a traceless 2×2 matrix `X = [[z1, z2 - z3], [z2 + z3, -z1]]`; the
//! Minkowski form is `q(X) = z1² + z2² - z3² = -det X`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ads::{
    local_half_side, part_of, relevant, sign, sq_frame, widened, HalfSide, Local, Part, Side,
    MEMBER_TOL, SAMPLE_WINDOW,
};
use crate::hyp2::{
    eigvec, fro, line_position, mat_det, mat_mul, orient_away_pair, BoundaryPoint, GeodesicLine,
    GeomError, Isometry, LinePosition, Mat2, PlanePoint, PARABOLIC_BAND,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MinkError {
    #[error("matrix is not traceless (trace {0})")]
    NotTraceless(f64),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct KillingField {
    pub z: [f64; 3],
}

impl TryFrom<Mat2> for KillingField {
    type Error = MinkError;
    fn try_from(m: Mat2) -> Result<Self, MinkError> {
        KillingField::from_matrix(m)
    }
}

impl From<KillingField> for Mat2 {
    fn from(x: KillingField) -> Mat2 {
        x.matrix()
    }
}

impl std::ops::Add for KillingField {
    type Output = KillingField;
    fn add(self, o: KillingField) -> KillingField {
        KillingField::new(self.z[0] + o.z[0], self.z[1] + o.z[1], self.z[2] + o.z[2])
    }
}

impl std::ops::Sub for KillingField {
    type Output = KillingField;
    fn sub(self, o: KillingField) -> KillingField {
        self + (-o)
    }
}

impl std::ops::Neg for KillingField {
    type Output = KillingField;
    fn neg(self) -> KillingField {
        self.scale(-1.0)
    }
}

impl KillingField {
    pub const ZERO: KillingField = KillingField { z: [0.0; 3] };

    pub fn new(z1: f64, z2: f64, z3: f64) -> KillingField {
        KillingField { z: [z1, z2, z3] }
    }

    pub fn from_matrix(m: Mat2) -> Result<KillingField, MinkError> {
        let tr = m[0][0] + m[1][1];
        let scale = fro(&m).max(1.0);
        if tr.abs() > 1e-12 * scale {
            return Err(MinkError::NotTraceless(tr));
        }
        let z1 = (m[0][0] - m[1][1]) / 2.0;
        Ok(KillingField::new(z1, (m[0][1] + m[1][0]) / 2.0, (m[1][0] - m[0][1]) / 2.0))
    }

    pub fn matrix(&self) -> Mat2 {
        let [z1, z2, z3] = self.z;
        [[z1, z2 - z3], [z2 + z3, -z1]]
    }

    pub fn scale(&self, s: f64) -> KillingField {
        KillingField::new(self.z[0] * s, self.z[1] * s, self.z[2] * s)
    }

    /// `z1² + z2² - z3²`
    pub fn q(&self) -> f64 {
        let [z1, z2, z3] = self.z;
        z1 * z1 + z2 * z2 - z3 * z3
    }

    pub fn norm(&self) -> f64 {
        fro(&self.matrix())
    }

    /// Adjoint action `g X g^-1`.
    pub fn adjoint(&self, g: &Isometry) -> KillingField {
        let m = mat_mul(&mat_mul(&g.matrix(), &self.matrix()), &g.inverse().matrix());
        let z1 = (m[0][0] - m[1][1]) / 2.0;
        KillingField::new(z1, (m[0][1] + m[1][0]) / 2.0, (m[1][0] - m[0][1]) / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KillingClass {
    Zero,
    Elliptic { fixed: PlanePoint },
    Parabolic { fixed: BoundaryPoint },
    Hyperbolic { attr: BoundaryPoint, rep: BoundaryPoint },
}

impl KillingClass {
    pub fn kind(&self) -> &'static str {
        match self {
            KillingClass::Zero => "zero",
            KillingClass::Elliptic { .. } => "elliptic",
            KillingClass::Parabolic { .. } => "parabolic",
            KillingClass::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

pub fn killing_classify(x: &KillingField) -> KillingClass {
    let m = x.matrix();
    let s = fro(&m);
    if s <= 1e-300 {
        return KillingClass::Zero;
    }
    let y = [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]];
    let det = mat_det(&y);
    if (2.0 * det).abs() <= PARABOLIC_BAND {
        let v = eigvec(&y, 0.0);
        return KillingClass::Parabolic {
            fixed: BoundaryPoint::new(v[0], v[1]),
        };
    }
    if det > 0.0 {
        let (a, c) = (y[0][0], y[1][0]);
        let root = (4.0 * det).sqrt();
        return KillingClass::Elliptic {
            fixed: PlanePoint::new(a / c, root / (2.0 * c.abs())),
        };
    }
    let mu = (-det).sqrt();
    let va = eigvec(&y, mu);
    let vr = eigvec(&y, -mu);
    KillingClass::Hyperbolic {
        attr: BoundaryPoint::new(va[0], va[1]),
        rep: BoundaryPoint::new(vr[0], vr[1]),
    }
}

/// `𝒞(l) + v` (Left) or `𝒞*(l) + v` (Right).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkCrookedDesc {
    pub side: Side,
    pub v: KillingField,
    pub line: GeodesicLine,
}

/// Local fixed-point data of `N^-1 (X - v) N`.
fn mink_local(p: &MinkCrookedDesc, x: &KillingField, tol: f64) -> Local {
    let n = p.line.frame();
    let y = (*x - p.v).adjoint(&n.inverse()).matrix();
    let nf = fro(&n.matrix());
    let s = fro(&y);
    let size = (x.norm() + p.v.norm()) * nf * nf;
    if s <= (1e-14f64).max(16.0 * f64::EPSILON * size) {
        return Local::Identity;
    }
    let cond = size / s;
    let y = [[y[0][0] / s, y[0][1] / s], [y[1][0] / s, y[1][1] / s]];
    let det = mat_det(&y);
    if (2.0 * det).abs() <= PARABOLIC_BAND.max(64.0 * f64::EPSILON * cond) {
        return Local::Parabolic {
            fixed: crate::ads::unit(eigvec(&y, 0.0)),
            tol: widened(tol, cond, 1.0),
        };
    }
    if det > 0.0 {
        let root = (4.0 * det).sqrt();
        return Local::Elliptic {
            ratio: (y[0][0] - y[1][1]) * y[1][0].signum() / root,
            tol: widened(tol, cond, root),
        };
    }
    let mu = (-det).sqrt();
    Local::Hyperbolic {
        attr: crate::ads::unit(eigvec(&y, mu)),
        rep: crate::ads::unit(eigvec(&y, -mu)),
        tol: widened(tol, cond, mu),
    }
}

pub fn mink_crooked_part_tol(p: &MinkCrookedDesc, x: &KillingField, tol: f64) -> Option<Part> {
    let local = mink_local(p, x, tol);
    let parabolic = matches!(local, Local::Parabolic { .. });
    part_of(&relevant(p.side, local), parabolic)
}

pub fn mink_crooked_part(p: &MinkCrookedDesc, x: &KillingField) -> Option<Part> {
    mink_crooked_part_tol(p, x, MEMBER_TOL)
}

pub fn mink_crooked_contains(p: &MinkCrookedDesc, x: &KillingField) -> bool {
    mink_crooked_part(p, x).is_some()
}

/// Side of the half-space bounded by `p` selected by its line's orientation.
pub fn mink_halfspace_side(p: &MinkCrookedDesc, x: &KillingField) -> Result<HalfSide, MinkError> {
    let o = p.line.orient.ok_or(GeomError::Unoriented)?;
    Ok(local_half_side(p.side, mink_local(p, x, MEMBER_TOL), o))
}

/// Boundary generators `u_+`, `u_-` of the Minkowski stem quadrant of an oriented line.
///
/// In the frame taking the line to `(-1, 1)` with the positive side inside, `u_eps = [[-1, -eps], [eps, 1]]`.
pub fn stem_generators(line: &GeodesicLine) -> Result<[KillingField; 2], MinkError> {
    let k = sq_frame(line).map_err(|e| match e {
        crate::ads::AdsError::Geom(g) => MinkError::Geom(g),
        _ => MinkError::Geom(GeomError::Unoriented),
    })?;
    let ki = k.inverse();
    let u = |eps: f64| KillingField::from_matrix([[-1.0, -eps], [eps, 1.0]]).expect("traceless").adjoint(&ki);
    Ok([u(1.0), u(-1.0)])
}

fn frame_coords(line: &GeodesicLine, x: &KillingField) -> Result<Mat2, MinkError> {
    let k = sq_frame(line).map_err(|_| MinkError::Geom(GeomError::Unoriented))?;
    Ok(x.adjoint(&k).matrix())
}

/// Open cone spanned by the boundary generators: `X = s u_+ + t u_-` with `s, t > 0`.
pub fn mink_stem_quadrant_contains(line: &GeodesicLine, x: &KillingField) -> Result<bool, MinkError> {
    let m = frame_coords(line, x)?;
    let scale = fro(&m);
    if scale == 0.0 || (m[0][1] + m[1][0]).abs() > 1e-9 * scale {
        return Ok(false);
    }
    let s = (m[1][0] - m[0][0]) / 2.0;
    let t = (-m[0][0] - m[1][0]) / 2.0;
    Ok(s > 1e-12 * scale && t > 1e-12 * scale)
}

/// Geometric form: hyperbolic, axis orthogonal to the line, attracting point on the positive side.
pub fn mink_stem_quadrant_contains_geometric(line: &GeodesicLine, x: &KillingField) -> Result<bool, MinkError> {
    let m = frame_coords(line, x)?;
    match killing_classify(&KillingField::from_matrix(m)?) {
        KillingClass::Hyperbolic { attr, rep } => {
            let (u, w) = (attr.vector(), rep.vector());
            Ok((u[0] * w[0] - u[1] * w[1]).abs() <= 1e-9 && u[0].abs() < u[1].abs())
        }
        _ => Ok(false),
    }
}

fn det3(c: [[f64; 3]; 3]) -> f64 {
    c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
        + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])
}

/// Columns as 3-vectors; the 3×3 matrix with these columns.
fn from_cols(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [[f64; 3]; 3] {
    [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]]
}

/// Solutions of `w = sum x_i c_i` as `x0 + lambda k`, with `k` scaled to max norm 1; `None` when
/// the columns do not span.
fn solution_line(cols: &[[f64; 3]; 4], w: [f64; 3]) -> Option<([f64; 4], [f64; 4], f64)> {
    // kernel by signed 3×3 minors
    let minor = |skip: usize| -> [[f64; 3]; 3] {
        let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
        from_cols(cols[idx[0]], cols[idx[1]], cols[idx[2]])
    };
    let mut k = [0.0; 4];
    for (i, ki) in k.iter_mut().enumerate() {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        *ki = s * det3(minor(i));
    }
    let (imax, kmax) = k
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let scale: f64 = cols.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    if kmax <= 1e-12 * scale.powi(3) {
        return None;
    }
    // particular solution with x_imax = 0, by Cramer on the remaining columns
    let idx: Vec<usize> = (0..4).filter(|&i| i != imax).collect();
    let base = minor(imax);
    let d = det3(base);
    let mut x0 = [0.0; 4];
    for (slot, &col) in idx.iter().enumerate() {
        let mut m = base;
        for row in 0..3 {
            m[row][slot] = w[row];
        }
        x0[col] = det3(m) / d;
    }
    Some((x0, k.map(|v| v / kmax), scale))
}

/// Whether `w = sum x_i c_i` has a solution with every `x_i > 0`, for four columns in R³.
pub fn positive_combination(cols: [[f64; 3]; 4], w: [f64; 3]) -> bool {
    let Some((x0, kn, scale)) = solution_line(&cols, w) else {
        return false;
    };
    // x = x0 + lambda k, every coordinate positive
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let wn = w.iter().map(|v| v.abs()).fold(0.0, f64::max).max(scale);
    let slack = 1e-10 * wn / scale;
    for i in 0..4 {
        let bound = -x0[i] / kn[i];
        if kn[i] > 0.0 {
            lo = lo.max(bound);
        } else if kn[i] < 0.0 {
            hi = hi.min(bound);
        } else if x0[i] <= slack {
            return false;
        }
    }
    hi - lo > slack
}

/// `sup min_i x_i` over solutions of `w = sum x_i c_i`: positive iff a positive solution exists,
/// and its size says how far `w` sits from the boundary of the cone. `-inf` when the columns do not span.
pub fn positive_combination_depth(cols: [[f64; 3]; 4], w: [f64; 3]) -> f64 {
    let Some((x0, kn, _)) = solution_line(&cols, w) else {
        return f64::NEG_INFINITY;
    };
    let f = |lambda: f64| (0..4).map(|i| x0[i] + lambda * kn[i]).fold(f64::INFINITY, f64::min);
    let flat = (0..4).filter(|&i| kn[i] == 0.0).map(|i| x0[i]).fold(f64::INFINITY, f64::min);
    let rising: Vec<usize> = (0..4).filter(|&i| kn[i] > 0.0).collect();
    let falling: Vec<usize> = (0..4).filter(|&i| kn[i] < 0.0).collect();
    if rising.is_empty() || falling.is_empty() {
        // f is monotone; its supremum is the limit, capped by the flat coordinates
        return flat;
    }
    // concave piecewise linear: the maximum is where a rising and a falling line meet
    let mut best = f64::NEG_INFINITY;
    for &i in &rising {
        for &j in &falling {
            best = best.max(f((x0[j] - x0[i]) / (kn[i] - kn[j])));
        }
    }
    best
}

/// Left criterion: lines do not cross and `v' - v` lies in `𝒮𝒬(l') - 𝒮𝒬(l)` for orientations away.
/// Right planes satisfy `𝒞*(l) + v = -(𝒞(l) - v)`, so they reduce to the Left test on `-v, -v'`.
pub fn mink_disjoint(
    side: Side,
    l: &GeodesicLine,
    v: &KillingField,
    lp: &GeodesicLine,
    vp: &KillingField,
) -> Result<bool, MinkError> {
    if side == Side::Right {
        return mink_disjoint(Side::Left, l, &-*v, lp, &-*vp);
    }
    if line_position(l, lp) == LinePosition::Crossing {
        return Ok(false);
    }
    let (lo, lpo) = orient_away_pair(l, lp)?;
    let [u1, u2] = stem_generators(&lo)?;
    let [w1, w2] = stem_generators(&lpo)?;
    let cols = [w1.z, w2.z, (-u1).z, (-u2).z];
    Ok(positive_combination(cols, (*vp - *v).z))
}

/// Signed depth of `v' - v` in the cone of the criterion (Left form; Right via negation). Positive iff
/// disjoint; `-inf` for crossing lines. Small values flag near-tangent configurations.
pub fn mink_disjoint_margin(
    side: Side,
    l: &GeodesicLine,
    v: &KillingField,
    lp: &GeodesicLine,
    vp: &KillingField,
) -> Result<f64, MinkError> {
    if side == Side::Right {
        return mink_disjoint_margin(Side::Left, l, &-*v, lp, &-*vp);
    }
    if line_position(l, lp) == LinePosition::Crossing {
        return Ok(f64::NEG_INFINITY);
    }
    let (lo, lpo) = orient_away_pair(l, lp)?;
    let [u1, u2] = stem_generators(&lo)?;
    let [w1, w2] = stem_generators(&lpo)?;
    Ok(positive_combination_depth([w1.z, w2.z, (-u1).z, (-u2).z], (*vp - *v).z))
}

pub fn mink_planes_disjoint(p: &MinkCrookedDesc, pp: &MinkCrookedDesc) -> Result<bool, MinkError> {
    if p.side != pp.side {
        return Err(MinkError::Geom(GeomError::Unoriented));
    }
    mink_disjoint(p.side, &p.line, &p.v, &pp.line, &pp.v)
}

/// Matrix exponential of a Killing field. The closed form has unit determinant exactly, so no renormalization.
pub fn exp_killing(x: &KillingField) -> Isometry {
    let m = x.matrix();
    let det = mat_det(&m);
    let (c, s) = if det > 0.0 {
        let w = det.sqrt();
        (w.cos(), w.sin() / w)
    } else if det < 0.0 {
        let w = (-det).sqrt();
        (w.cosh(), w.sinh() / w)
    } else {
        (1.0, 1.0)
    };
    let e = [[c + s * m[0][0], s * m[0][1]], [s * m[1][0], c + s * m[1][1]]];
    Isometry::raw(e)
}

// ---------------------------------------------------------------------------
// sampling in the (0, inf) frame

/// Rotation field of speed `rho` (angle `2 rho` per unit time) about `i e^s`.
pub fn local_stem_field(rho: f64, s: f64) -> KillingField {
    KillingField::from_matrix([[0.0, -rho * s.exp()], [rho * (-s).exp(), 0.0]]).expect("traceless")
}

/// Hyperbolic field with attracting point `infinity` (WingPlus) or `0` (WingMinus) and rate `mu`.
pub fn local_wing_field(part: Part, mu: f64, x: f64) -> KillingField {
    let m = match part {
        Part::WingPlus => [[mu, -2.0 * mu * x], [0.0, -mu]],
        _ => [[-mu, 0.0], [-2.0 * mu / x, mu]],
    };
    KillingField::from_matrix(m).expect("traceless")
}

fn sample_local<R: Rng>(rng: &mut R, stratum: usize, i: usize) -> KillingField {
    let half = SAMPLE_WINDOW / 2.0;
    match stratum {
        0 => {
            let rho = sign(rng) * rng.gen_range(0.01..=3.0);
            local_stem_field(rho, rng.gen_range(-half..=half))
        }
        1 => {
            if i == 0 {
                return KillingField::ZERO;
            }
            let t = sign(rng) * rng.gen_range(-5.0..=SAMPLE_WINDOW.ln()).exp();
            let m = if rng.gen_bool(0.5) { [[0.0, t], [0.0, 0.0]] } else { [[0.0, 0.0], [t, 0.0]] };
            KillingField::from_matrix(m).expect("traceless")
        }
        _ => {
            let part = if i % 2 == 0 { Part::WingPlus } else { Part::WingMinus };
            let mu = rng.gen_range(-3.0..=3.0f64).exp();
            let x = sign(rng) * rng.gen_range(-half..=half).exp();
            local_wing_field(part, mu, x)
        }
    }
}

/// Stratified sample of `p`: 40% stem, 20% stem boundary (starting with `v`), 40% wings.
pub fn sample_mink_crooked<R: Rng>(p: &MinkCrookedDesc, n: usize, rng: &mut R) -> Vec<KillingField> {
    let n_stem = (n * 2) / 5;
    let n_bd = n / 5;
    let n_frame = p.line.frame();
    let mut out = Vec::with_capacity(n);
    for idx in 0..n {
        let (stratum, i) = if idx < n_stem {
            (0, idx)
        } else if idx < n_stem + n_bd {
            (1, idx - n_stem)
        } else {
            (2, idx - n_stem - n_bd)
        };
        let y = sample_local(rng, stratum, i);
        let y = match p.side {
            Side::Left => y,
            Side::Right => -y,
        };
        out.push(p.v + y.adjoint(&n_frame));
    }
    out
}

/// Random element of the open Minkowski stem quadrant, `s u_+ + t u_-` with `s, t` in `[e^-3, e^3]`.
pub fn sample_stem_quadrant<R: Rng>(line: &GeodesicLine, rng: &mut R) -> Result<KillingField, MinkError> {
    let [u1, u2] = stem_generators(line)?;
    let s = rng.gen_range(-3.0..=3.0f64).exp();
    let t = rng.gen_range(-3.0..=3.0f64).exp();
    Ok(u1.scale(s) + u2.scale(t))
}
