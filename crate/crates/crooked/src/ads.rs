//! Crooked planes, crooked half-spaces and stem quadrants in AdS³ = PSL(2,R).
//!
//! A left plane `gC(l)` is the set of `h` such that `g^-1 h` has a nonrepelling fixed point
//! in the closure of `l`; a right plane `gC*(l)` uses nonattracting fixed points instead.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp2::{
    eigvec, fro, frame, lines_separated, mat_mul, normalize_pair, orient_away_pair, oriented_away,
    BoundaryPoint, GeodesicLine, GeomError, Isometry, Mat2, Orientation, PlanePoint, F_ext,
    IDEAL_TOL, PARABOLIC_BAND,
};

/// Verdicts with `|score|` below this are flagged as marginal.
pub const MARGIN_BAND: f64 = 1e-6;
/// Default membership tolerance (hyperbolic distance to the line, sine of ideal separation).
pub const MEMBER_TOL: f64 = 1e-9;
/// Arclength window used by samplers and the contraction grid.
pub const SAMPLE_WINDOW: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `gC(l)` (Left) or `gC*(l)` (Right).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrookedPlaneDesc {
    pub side: Side,
    pub g: Isometry,
    pub line: GeodesicLine,
}

/// Crooked half-space bounded by `plane`, selected by the line's orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceDesc {
    pub plane: CrookedPlaneDesc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StemQuadrantDesc {
    pub line: GeodesicLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Stem,
    StemBoundary,
    /// Relevant fixed point is the endpoint `b`.
    WingPlus,
    /// Relevant fixed point is the endpoint `a`.
    WingMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfSide {
    Inside,
    OnPlane,
    Outside,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdsError {
    #[error("planes have different sides")]
    MixedSides,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("the planes are disjoint; there is no common point")]
    IsDisjoint,
    #[error("could not build a verified common point")]
    WitnessFailed,
    #[error("element is not in the stem-quadrant product")]
    NotInProduct,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

impl CrookedPlaneDesc {
    pub fn new(side: Side, g: Isometry, line: GeodesicLine) -> CrookedPlaneDesc {
        CrookedPlaneDesc { side, g, line }
    }

    pub fn left(g: Isometry, line: GeodesicLine) -> CrookedPlaneDesc {
        CrookedPlaneDesc::new(Side::Left, g, line)
    }

    pub fn right(g: Isometry, line: GeodesicLine) -> CrookedPlaneDesc {
        CrookedPlaneDesc::new(Side::Right, g, line)
    }

    /// Right plane whose members are the inverses of the members of this left plane.
    ///
    /// `h in gC(l)` iff `h^-1 in g^-1 C*(g l)`; the orientation flag travels with the line.
    pub fn inverted(&self) -> CrookedPlaneDesc {
        let side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        CrookedPlaneDesc {
            side,
            g: self.g.inverse(),
            line: self.line.moved_by(&self.g),
        }
    }

    /// The line `g . l` carried by the plane's image in the boundary sense.
    pub fn moved_line(&self) -> GeodesicLine {
        self.line.moved_by(&self.g)
    }
}

impl HalfSpaceDesc {
    pub fn new(plane: CrookedPlaneDesc) -> Result<HalfSpaceDesc, AdsError> {
        if plane.line.orient.is_none() {
            return Err(GeomError::Unoriented.into());
        }
        Ok(HalfSpaceDesc { plane })
    }
}

// ---------------------------------------------------------------------------
// local classification

/// Fixed-point data of `k = N^-1 g^-1 h N`, with `N` the frame of the line.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Local {
    Identity,
    /// Signed ratio Re/Im of the fixed point and the tolerance for "on the line" in distance.
    Elliptic { ratio: f64, tol: f64 },
    Parabolic { fixed: [f64; 2], tol: f64 },
    Hyperbolic { attr: [f64; 2], rep: [f64; 2], tol: f64 },
}

pub(crate) fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// Tolerance widened by a first-order roundoff bound.
pub(crate) fn widened(base: f64, cond: f64, gap: f64) -> f64 {
    base.max(16.0 * f64::EPSILON * cond / gap.max(f64::MIN_POSITIVE))
}

fn local_classify(k: &Mat2, cond: f64, tol: f64) -> Local {
    let tr = k[0][0] + k[1][1];
    let atr = tr.abs();
    let off = k[0][1]
        .hypot(k[1][0])
        .hypot(k[0][0] - k[1][1]);
    if (atr - 2.0).abs() <= PARABOLIC_BAND.max(64.0 * f64::EPSILON * cond) {
        if off <= (1e-12f64).max(16.0 * f64::EPSILON * cond) {
            return Local::Identity;
        }
        let v = unit(eigvec(k, tr.signum()));
        return Local::Parabolic {
            fixed: v,
            tol: widened(tol, cond, off),
        };
    }
    if atr < 2.0 {
        let root = (4.0 - tr * tr).sqrt();
        let ratio = (k[0][0] - k[1][1]) * k[1][0].signum() / root;
        return Local::Elliptic {
            ratio,
            tol: widened(tol, cond, root),
        };
    }
    let disc = (tr * tr - 4.0).sqrt();
    let big = if tr > 0.0 { (tr + disc) / 2.0 } else { (tr - disc) / 2.0 };
    let small = 1.0 / big;
    Local::Hyperbolic {
        attr: unit(eigvec(k, big)),
        rep: unit(eigvec(k, small)),
        tol: widened(tol, cond, disc),
    }
}

fn local_view(g: &Isometry, line: &GeodesicLine, h: &Isometry, tol: f64) -> Local {
    let n = line.frame();
    let k = n.inverse().compose(&g.inverse()).compose(h).compose(&n);
    let nf = fro(&n.matrix());
    let cond = fro(&g.matrix()) * fro(&h.matrix()) * nf * nf / 4.0;
    local_classify(&k.matrix(), cond, tol)
}

/// Position of an ideal unit vector in the (0, inf) frame: endpoint tag or side (-1 left, +1 right).
pub(crate) enum IdealPos {
    AtA,
    AtB,
    Off(f64),
}

pub(crate) fn ideal_pos(u: [f64; 2], tol: f64) -> IdealPos {
    if u[0].abs() <= tol {
        IdealPos::AtA
    } else if u[1].abs() <= tol {
        IdealPos::AtB
    } else {
        IdealPos::Off((u[0] * u[1]).signum())
    }
}

/// Relevant fixed point: Left planes use the nonrepelling one, Right planes the nonattracting one.
pub(crate) enum Relevant {
    Identity,
    Interior { ratio: f64, tol: f64 },
    Ideal(IdealPos),
}

pub(crate) fn relevant(side: Side, local: Local) -> Relevant {
    match local {
        Local::Identity => Relevant::Identity,
        Local::Elliptic { ratio, tol } => Relevant::Interior { ratio, tol },
        Local::Parabolic { fixed, tol } => Relevant::Ideal(ideal_pos(fixed, tol)),
        Local::Hyperbolic { attr, rep, tol } => {
            let u = match side {
                Side::Left => attr,
                Side::Right => rep,
            };
            Relevant::Ideal(ideal_pos(u, tol))
        }
    }
}

pub(crate) fn part_of(rel: &Relevant, parabolic: bool) -> Option<Part> {
    match rel {
        Relevant::Identity => Some(Part::StemBoundary),
        Relevant::Interior { ratio, tol } => {
            if ratio.abs().asinh() <= *tol {
                Some(Part::Stem)
            } else {
                None
            }
        }
        Relevant::Ideal(IdealPos::AtA) if parabolic => Some(Part::StemBoundary),
        Relevant::Ideal(IdealPos::AtB) if parabolic => Some(Part::StemBoundary),
        Relevant::Ideal(IdealPos::AtA) => Some(Part::WingMinus),
        Relevant::Ideal(IdealPos::AtB) => Some(Part::WingPlus),
        Relevant::Ideal(IdealPos::Off(_)) => None,
    }
}

/// Membership with an explicit base tolerance; returns the stratum containing `h`.
pub fn crooked_part_tol(p: &CrookedPlaneDesc, h: &Isometry, tol: f64) -> Option<Part> {
    let local = local_view(&p.g, &p.line, h, tol);
    let parabolic = matches!(local, Local::Parabolic { .. });
    part_of(&relevant(p.side, local), parabolic)
}

pub fn crooked_part(p: &CrookedPlaneDesc, h: &Isometry) -> Option<Part> {
    crooked_part_tol(p, h, MEMBER_TOL)
}

pub fn crooked_contains(p: &CrookedPlaneDesc, h: &Isometry) -> bool {
    crooked_part(p, h).is_some()
}

pub fn crooked_contains_tol(p: &CrookedPlaneDesc, h: &Isometry, tol: f64) -> bool {
    crooked_part_tol(p, h, tol).is_some()
}

/// Side of a half-space bounded by a plane of the given side, from the local fixed-point data.
pub(crate) fn local_half_side(side: Side, local: Local, o: Orientation) -> HalfSide {
    let parabolic = matches!(local, Local::Parabolic { .. });
    let rel = relevant(side, local);
    if part_of(&rel, parabolic).is_some() {
        return HalfSide::OnPlane;
    }
    let sign = match rel {
        Relevant::Interior { ratio, .. } => ratio.signum(),
        Relevant::Ideal(IdealPos::Off(s)) => s,
        _ => unreachable!("members handled above"),
    };
    let positive = match o {
        Orientation::PositiveLeft => sign < 0.0,
        Orientation::PositiveRight => sign > 0.0,
    };
    if positive {
        HalfSide::Inside
    } else {
        HalfSide::Outside
    }
}

pub fn halfspace_side_tol(hs: &HalfSpaceDesc, h: &Isometry, tol: f64) -> Result<HalfSide, AdsError> {
    let p = &hs.plane;
    let o = p.line.orient.ok_or(GeomError::Unoriented)?;
    Ok(local_half_side(p.side, local_view(&p.g, &p.line, h, tol), o))
}

pub fn halfspace_side(hs: &HalfSpaceDesc, h: &Isometry) -> Result<HalfSide, AdsError> {
    halfspace_side_tol(hs, h, MEMBER_TOL)
}

// ---------------------------------------------------------------------------
// sampling

fn lower_unipotent(t: f64) -> Isometry {
    Isometry::from_entries(1.0, 0.0, t, 1.0).expect("unit determinant")
}

pub(crate) fn sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Random point of the stem of `C((0, inf))`: rotation about `i e^s`.
pub fn sample_local_stem<R: Rng>(rng: &mut R) -> Isometry {
    let s = rng.gen_range(-SAMPLE_WINDOW / 2.0..=SAMPLE_WINDOW / 2.0);
    let theta = rng.gen_range(0.01..=2.0 * std::f64::consts::PI - 0.01);
    Isometry::rotation(PlanePoint::new(0.0, s.exp()), theta)
}

/// Random parabolic of the stem boundary of `C((0, inf))`, at either endpoint, either sign,
/// `e^-5 <= |t| <= 20`. Tiny parameters are avoided since their fixed point is ill-conditioned.
pub fn sample_local_boundary<R: Rng>(rng: &mut R) -> Isometry {
    let t = sign(rng) * rng.gen_range(-5.0..=SAMPLE_WINDOW.ln()).exp();
    if rng.gen_bool(0.5) {
        Isometry::unipotent(t)
    } else {
        lower_unipotent(t)
    }
}

/// Random wing point of the left plane `C((0, inf))`: hyperbolic with attracting point at an endpoint.
pub fn sample_local_wing<R: Rng>(rng: &mut R, part: Part) -> Isometry {
    let len = rng.gen_range(0.01..=SAMPLE_WINDOW);
    let x = sign(rng) * rng.gen_range(-SAMPLE_WINDOW / 2.0..=SAMPLE_WINDOW / 2.0).exp();
    let attr = match part {
        Part::WingPlus => BoundaryPoint::infinity(),
        _ => BoundaryPoint::real(0.0),
    };
    Isometry::hyperbolic(attr, BoundaryPoint::real(x), len)
}

/// `n` points of the plane, stratified 40% stem, 20% stem boundary (starting with `g`), 40% wings.
pub fn sample_crooked<R: Rng>(p: &CrookedPlaneDesc, n: usize, rng: &mut R) -> Vec<Isometry> {
    let n_stem = (n * 2) / 5;
    let n_bd = n / 5;
    let n_wing = n - n_stem - n_bd;
    let mut local = Vec::with_capacity(n);
    for _ in 0..n_stem {
        local.push(sample_local_stem(rng));
    }
    for i in 0..n_bd {
        local.push(if i == 0 {
            Isometry::IDENTITY
        } else {
            sample_local_boundary(rng)
        });
    }
    for i in 0..n_wing {
        let part = if i % 2 == 0 { Part::WingPlus } else { Part::WingMinus };
        local.push(sample_local_wing(rng, part));
    }
    let nf = p.line.frame();
    let ni = nf.inverse();
    local
        .into_iter()
        .map(|k| {
            let k = match p.side {
                Side::Left => k,
                Side::Right => k.inverse(),
            };
            p.g.compose(&nf).compose(&k).compose(&ni)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// disjointness criteria

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Disjoint { margin: f64 },
    NotDisjoint { worst: f64 },
}

impl Verdict {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, Verdict::Disjoint { .. })
    }

    /// Negative iff disjoint; `+inf` for degenerate coincidences.
    pub fn score(&self) -> f64 {
        match *self {
            Verdict::Disjoint { margin } => margin,
            Verdict::NotDisjoint { worst } => worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisjointReport {
    pub verdict: Verdict,
    /// `F_{g,g'}(xi_i, xi'_j)` for the endpoint pairs (a,a'), (a,b'), (b,a'), (b,b'); NaN off the domain.
    pub values: [[f64; 2]; 2],
    pub marginal: bool,
}

fn same_side(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc) -> Result<Side, AdsError> {
    if p.side != pp.side {
        return Err(AdsError::MixedSides);
    }
    Ok(p.side)
}

fn endpoint_values(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc) -> [[f64; 2]; 2] {
    let mut v = [[f64::NAN; 2]; 2];
    for (i, xi) in p.line.endpoints().iter().enumerate() {
        for (j, xip) in pp.line.endpoints().iter().enumerate() {
            v[i][j] = F_ext(&p.g, &pp.g, xi, xip).unwrap_or(f64::NAN);
        }
    }
    v
}

/// Endpoint criterion: Right pairs are disjoint iff every `F < 0`, Left pairs iff every `F > 0`.
pub fn disjoint_crooked(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc) -> Result<DisjointReport, AdsError> {
    let side = same_side(p, pp)?;
    let values = endpoint_values(p, pp);
    let mut score = f64::NEG_INFINITY;
    for f in values.iter().flatten() {
        let s = match side {
            Side::Right => *f,
            Side::Left => -*f,
        };
        score = score.max(if s.is_nan() { f64::INFINITY } else { s });
    }
    let verdict = if score < 0.0 {
        Verdict::Disjoint { margin: score }
    } else {
        Verdict::NotDisjoint { worst: score }
    };
    Ok(DisjointReport {
        verdict,
        values,
        marginal: score.abs() < MARGIN_BAND,
    })
}

/// Lines whose orientations must point away from each other for half-space disjointness.
fn halfspace_lines(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc) -> (GeodesicLine, GeodesicLine) {
    match p.side {
        Side::Right => (p.line, pp.line),
        Side::Left => (p.moved_line(), pp.moved_line()),
    }
}

pub fn disjoint_halfspaces(h: &HalfSpaceDesc, hp: &HalfSpaceDesc) -> Result<bool, AdsError> {
    let report = disjoint_crooked(&h.plane, &hp.plane)?;
    if !report.verdict.is_disjoint() {
        return Ok(false);
    }
    let (l, lp) = halfspace_lines(&h.plane, &hp.plane);
    match oriented_away(&l, &lp) {
        Ok(b) => Ok(b),
        Err(GeomError::LinesCross) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Max of `d(g x, g' x') - d(x, x')` over a grid of arclength points with `|s| <= 20` (Right);
/// Left planes go through the inverse map, so the value is negative iff the planes are disjoint.
pub fn contraction_margin_sampled(
    p: &CrookedPlaneDesc,
    pp: &CrookedPlaneDesc,
    grid: usize,
) -> Result<f64, AdsError> {
    match same_side(p, pp)? {
        Side::Left => contraction_margin_sampled(&p.inverted(), &pp.inverted(), grid),
        Side::Right => {
            let n = grid.max(2);
            let s: Vec<f64> = (0..n)
                .map(|i| -SAMPLE_WINDOW + 2.0 * SAMPLE_WINDOW * i as f64 / (n - 1) as f64)
                .collect();
            let a: Vec<Isometry> = s.iter().map(|&t| p.line.point_matrix(t)).collect();
            let ap: Vec<Isometry> = s.iter().map(|&t| pp.line.point_matrix(t)).collect();
            let ga: Vec<Isometry> = a.iter().map(|m| p.g.compose(m)).collect();
            let gap: Vec<Isometry> = ap.iter().map(|m| pp.g.compose(m)).collect();
            let mut best = f64::NEG_INFINITY;
            for i in 0..n {
                for j in 0..n {
                    let d1 = crate::hyp2::dist_between(&ga[i], &gap[j]);
                    let d0 = crate::hyp2::dist_between(&a[i], &ap[j]);
                    best = best.max(d1 - d0);
                }
            }
            Ok(best)
        }
    }
}

fn on_both(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc, h: &Isometry) -> bool {
    crooked_contains(p, h) && crooked_contains(pp, h)
}

fn other_endpoint(line: &GeodesicLine, xi: &BoundaryPoint) -> BoundaryPoint {
    if line.a.same_as(xi, IDEAL_TOL) {
        line.b
    } else {
        line.a
    }
}

/// Projective angle of an ideal point; rotations about `i` by `theta` add `theta/2`.
fn proj_angle(x: &BoundaryPoint) -> f64 {
    let v = x.vector();
    v[1].atan2(v[0])
}

fn shared_endpoint_witness(
    p: &CrookedPlaneDesc,
    pp: &CrookedPlaneDesc,
    xi: &BoundaryPoint,
) -> Option<Isometry> {
    let gxi = p.g.apply(xi);
    let gpxi = pp.g.apply(xi);
    let other = other_endpoint(&p.line, xi);
    if gxi.same_as(&gpxi, IDEAL_TOL) {
        // long hyperbolic of C*(l) repelling from xi
        let mut len = 1.0;
        for _ in 0..8 {
            let h = p.g.compose(&Isometry::hyperbolic(other, *xi, len));
            if on_both(p, pp, &h) {
                return Some(h);
            }
            len *= 2.0;
        }
        return None;
    }
    // rotation about a point of l deep toward xi sending xi to g^-1 g' xi
    let eta = p.g.inverse().compose(&pp.g).apply(xi);
    let toward_b = p.line.b.same_as(xi, IDEAL_TOL);
    let mut depth = 2.0;
    for _ in 0..8 {
        let s = if toward_b { depth } else { -depth };
        let m = Isometry::moving_i_to(p.line.point_at(s));
        let mi = m.inverse();
        let theta = 2.0 * (proj_angle(&mi.apply(&eta)) - proj_angle(&mi.apply(xi)));
        let k = m.compose(&Isometry::rotation_i(theta)).compose(&mi);
        let h = p.g.compose(&k);
        if on_both(p, pp, &h) {
            return Some(h);
        }
        depth *= 2.0;
    }
    None
}

/// Isometry taking the oriented line (xi, xi') to (g xi, g' xi') with expansion balanced at both ends.
fn endpoint_pair_witness(
    p: &CrookedPlaneDesc,
    pp: &CrookedPlaneDesc,
    xi: &BoundaryPoint,
    xip: &BoundaryPoint,
) -> Option<Isometry> {
    let gxi = p.g.apply(xi);
    let gpxip = pp.g.apply(xip);
    if xi.separation(xip) <= 1e-14 || gxi.separation(&gpxip) <= 1e-14 {
        return None;
    }
    let a = frame(xi, xip);
    let c = frame(&gxi, &gpxip);
    let ci = c.inverse();
    let u = ci.compose(&p.g).compose(&a).matrix();
    let up = ci.compose(&pp.g).compose(&a).matrix();
    let tau = (u[0][0] * up[0][0]).abs().ln();
    if !tau.is_finite() {
        return None;
    }
    let h = c.compose(&Isometry::axial(tau)).compose(&a.inverse());
    on_both(p, pp, &h).then_some(h)
}

/// A common point of two intersecting planes of the same side.
pub fn intersect_witness(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc) -> Result<Isometry, AdsError> {
    let side = same_side(p, pp)?;
    let report = disjoint_crooked(p, pp)?;
    if report.verdict.is_disjoint() {
        return Err(AdsError::IsDisjoint);
    }
    if side == Side::Left {
        let w = intersect_witness(&p.inverted(), &pp.inverted())?.inverse();
        return if on_both(p, pp, &w) {
            Ok(w)
        } else {
            Err(AdsError::WitnessFailed)
        };
    }
    if on_both(p, pp, &p.g) {
        return Ok(p.g);
    }
    if on_both(p, pp, &pp.g) {
        return Ok(pp.g);
    }
    for xi in p.line.endpoints() {
        if pp.line.has_endpoint(&xi, IDEAL_TOL) {
            if let Some(h) = shared_endpoint_witness(p, pp, &xi) {
                return Ok(h);
            }
        }
    }
    let ends = p.line.endpoints();
    let endsp = pp.line.endpoints();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let f = report.values[i][j];
            pairs.push((if f.is_nan() { f64::INFINITY } else { f }, i, j));
        }
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    for (_, i, j) in pairs {
        if let Some(h) = endpoint_pair_witness(p, pp, &ends[i], &endsp[j]) {
            return Ok(h);
        }
    }
    Err(AdsError::WitnessFailed)
}

// ---------------------------------------------------------------------------
// stem quadrants

const SQ_M: Mat2 = [
    [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
];

/// Isometry taking the oriented line to (-1, 1) with its positive side inside the unit circle.
pub(crate) fn sq_frame(line: &GeodesicLine) -> Result<Isometry, AdsError> {
    let o = line.orient.ok_or(GeomError::Unoriented)?;
    let m = Isometry::new(SQ_M).expect("unit determinant");
    let ni = line.frame().inverse();
    Ok(match o {
        Orientation::PositiveRight => m.compose(&ni),
        Orientation::PositiveLeft => {
            let s = Isometry::from_entries(0.0, -1.0, 1.0, 0.0).expect("unit determinant");
            m.compose(&s).compose(&ni)
        }
    })
}

/// `(alpha, beta, v, shape residual, scale)` of `h` in the stem-quadrant frame.
fn sq_coords(line: &GeodesicLine, h: &Isometry) -> Result<(f64, f64, f64, f64, f64), AdsError> {
    let k = sq_frame(line)?;
    let m = k.compose(h).compose(&k.inverse()).matrix();
    let v = (m[1][0] - m[0][1]) / 2.0;
    Ok((m[0][0], m[1][1], v, (m[0][1] + m[1][0]).abs(), fro(&m)))
}

/// Open stem quadrant: shape `[[alpha, -v], [v, beta]]` in the frame, `|alpha| < |beta|`, `2|v| < |alpha - beta|`.
pub fn stem_quadrant_contains(s: &StemQuadrantDesc, h: &Isometry) -> Result<bool, AdsError> {
    let (al, be, v, shape, scale) = sq_coords(&s.line, h)?;
    if shape > 1e-9 * scale {
        return Ok(false);
    }
    // fix the global sign so the comparison does not depend on the representative
    Ok(al.abs() < be.abs() && 2.0 * v.abs() < (al - be).abs())
}

/// Closed stem quadrant, with slack `tol` relative to the matrix size.
pub fn stem_quadrant_closure_contains(s: &StemQuadrantDesc, h: &Isometry, tol: f64) -> Result<bool, AdsError> {
    let (al, be, v, shape, scale) = sq_coords(&s.line, h)?;
    let slack = tol * scale;
    Ok(shape <= slack && al.abs() <= be.abs() + slack && 2.0 * v.abs() <= (al - be).abs() + slack)
}

/// Geometric form: hyperbolic, axis orthogonal to the line, translating toward the positive side.
pub fn stem_quadrant_contains_geometric(s: &StemQuadrantDesc, h: &Isometry) -> Result<bool, AdsError> {
    let k = sq_frame(&s.line)?;
    let m = k.compose(h).compose(&k.inverse());
    match crate::hyp2::classify(&m) {
        crate::hyp2::Classification::Hyperbolic { attr, rep } => {
            let (u, w) = (attr.vector(), rep.vector());
            // axis orthogonal to the unit circle iff the endpoints are swapped by z -> 1/z
            let orth = (u[0] * w[0] - u[1] * w[1]).abs() <= 1e-9;
            Ok(orth && u[0].abs() < u[1].abs())
        }
        _ => Ok(false),
    }
}

/// Which factor of a decomposition lies on a stem-quadrant boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SqTag {
    Identity,
    /// Two equal translations along the common perpendicular.
    Diagonal,
    /// `h` itself is in the closed stem quadrant of the first line.
    FirstFactorOnly,
    /// `h` itself is in the closed inverse quadrant of the second line.
    SecondFactorOnly,
    /// Second factor is the inverse of the parabolic `P'_eps(t)`.
    SecondParabolic { eps: i8, t: f64 },
    /// First factor is the parabolic `P_eps(t)`.
    FirstParabolic { eps: i8, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqDecomposition {
    pub q: Isometry,
    pub qp: Isometry,
    pub tag: SqTag,
}

/// Normalizing data: `k`, `R` and the normalized oriented lines.
struct Normalized {
    k: Isometry,
    r: f64,
    l: GeodesicLine,
    lp: GeodesicLine,
}

fn normalized(l: &GeodesicLine, lp: &GeodesicLine) -> Result<Normalized, AdsError> {
    let away = match oriented_away(l, lp) {
        Ok(b) => b,
        Err(GeomError::LinesCross) => false,
        Err(e) => return Err(e.into()),
    };
    if !away || !lines_separated(l, lp) {
        return Err(AdsError::Degenerate(
            "lines must be separated and oriented away from each other".into(),
        ));
    }
    let (k, r) = normalize_pair(l, lp)?;
    let ln = GeodesicLine::reals(-1.0 / r, 1.0 / r)?.oriented_toward(&PlanePoint::new(0.0, 0.5 / r));
    let lpn = GeodesicLine::reals(r, -r)?.oriented_toward(&PlanePoint::new(0.0, 2.0 * r));
    Ok(Normalized { k, r, l: ln, lp: lpn })
}

/// `P_eps(t)`, boundary ray of the stem quadrant of `(-1/R, 1/R)` oriented toward 0.
pub fn p_ray(r: f64, eps: f64, t: f64) -> Mat2 {
    [[1.0 - t, -eps * t / r], [eps * r * t, 1.0 + t]]
}

/// `P'_eps(t)`, boundary ray of the stem quadrant of `(R, -R)` oriented toward infinity.
pub fn p_prime_ray(r: f64, eps: f64, t: f64) -> Mat2 {
    [[1.0 + t, -eps * r * t], [eps * t / r, 1.0 - t]]
}

/// `(t'_eps, t_eps)` for a normalized `h = [[a, b], [c, d]]`.
pub fn ray_parameters(h: &Mat2, r: f64, eps: f64) -> (f64, f64) {
    let [[a, b], [c, d]] = *h;
    let tp = (b * r + c / r) / (r * (eps * a * r + b) - (c + eps * d / r) / r);
    let t = (c * r + b / r) / (r * (eps * a * r + c) - (b + eps * d / r) / r);
    (tp, t)
}

/// `log((aR + e'b + ec + ee'd/R)^2 / (R + ee'/R)^2)` on normalized coordinates.
pub fn normalized_closed_form(h: &Mat2, r: f64, eps: f64, epsp: f64) -> f64 {
    let [[a, b], [c, d]] = *h;
    let num = a * r + epsp * b + eps * c + eps * epsp * d / r;
    let den = r + eps * epsp / r;
    2.0 * (num.abs().ln() - den.abs().ln())
}

fn signs() -> [f64; 2] {
    [1.0, -1.0]
}

fn inequalities_hold(h: &Mat2, r: f64) -> bool {
    signs()
        .iter()
        .all(|&e| signs().iter().all(|&ep| normalized_closed_form(h, r, e, ep) < 0.0))
}

fn in_sq(nl: &GeodesicLine, q: &Isometry, strict: bool) -> bool {
    let s = StemQuadrantDesc { line: *nl };
    if strict {
        stem_quadrant_contains(&s, q).unwrap_or(false)
    } else {
        stem_quadrant_closure_contains(&s, q, 1e-9).unwrap_or(false)
    }
}

fn product_ok(q: &Isometry, qp: &Isometry, h: &Isometry) -> bool {
    q.compose(qp).distance_to(h) <= 1e-9 * fro(&h.matrix()).max(1.0)
}

fn check_pair(nz: &Normalized, q: &Isometry, qp: &Isometry, h: &Isometry, strict: bool) -> bool {
    in_sq(&nz.l, q, strict) && in_sq(&nz.lp, &qp.inverse(), strict) && product_ok(q, qp, h)
}

fn decompose_normalized(nz: &Normalized, h: &Isometry) -> Result<SqDecomposition, AdsError> {
    let r = nz.r;
    let m = h.matrix();
    if h.is_identity(1e-12) {
        return Ok(SqDecomposition {
            q: Isometry::IDENTITY,
            qp: Isometry::IDENTITY,
            tag: SqTag::Identity,
        });
    }
    if !inequalities_hold(&m, r) {
        return Err(AdsError::NotInProduct);
    }
    let scale = fro(&m);
    if m[0][1].abs().max(m[1][0].abs()) <= 1e-14 * scale {
        let s = m[0][0].abs().sqrt();
        let q = Isometry::diag(s);
        if check_pair(nz, &q, &q, h, false) {
            return Ok(SqDecomposition { q, qp: q, tag: SqTag::Diagonal });
        }
    }
    let id = Isometry::IDENTITY;
    if (m[0][1] * r + m[1][0] / r).abs() <= 1e-12 * scale && check_pair(nz, h, &id, h, false) {
        return Ok(SqDecomposition { q: *h, qp: id, tag: SqTag::FirstFactorOnly });
    }
    if (m[1][0] * r + m[0][1] / r).abs() <= 1e-12 * scale && check_pair(nz, &id, h, h, false) {
        return Ok(SqDecomposition { q: id, qp: *h, tag: SqTag::SecondFactorOnly });
    }
    for eps in signs() {
        let (tp, _) = ray_parameters(&m, r, eps);
        if tp.is_finite() && tp > 0.0 {
            let pp = Isometry::new(p_prime_ray(r, eps, tp));
            if let Ok(pp) = pp {
                let q = h.compose(&pp);
                let qp = pp.inverse();
                if check_pair(nz, &q, &qp, h, false) {
                    return Ok(SqDecomposition {
                        q,
                        qp,
                        tag: SqTag::SecondParabolic { eps: eps as i8, t: tp },
                    });
                }
            }
        }
    }
    for eps in signs() {
        let (_, t) = ray_parameters(&m, r, eps);
        if t.is_finite() && t > 0.0 {
            if let Ok(q) = Isometry::new(p_ray(r, eps, t)) {
                let qp = q.inverse().compose(h);
                if check_pair(nz, &q, &qp, h, false) {
                    return Ok(SqDecomposition {
                        q,
                        qp,
                        tag: SqTag::FirstParabolic { eps: eps as i8, t },
                    });
                }
            }
        }
    }
    Err(AdsError::NotInProduct)
}

fn unnormalize(nz: &Normalized, d: SqDecomposition) -> SqDecomposition {
    let ki = nz.k.inverse();
    SqDecomposition {
        q: ki.compose(&d.q).compose(&nz.k),
        qp: ki.compose(&d.qp).compose(&nz.k),
        tag: d.tag,
    }
}

/// Splits `h = q q'` with `q` in the closed stem quadrant of `l` and `q'` in the closed inverse
/// stem quadrant of `l'`; the lines must be separated and oriented away from each other.
pub fn sq_decompose(h: &Isometry, l: &GeodesicLine, lp: &GeodesicLine) -> Result<SqDecomposition, AdsError> {
    let nz = normalized(l, lp)?;
    let hn = nz.k.compose(h).compose(&nz.k.inverse());
    Ok(unnormalize(&nz, decompose_normalized(&nz, &hn)?))
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn normed(u: [f64; 3]) -> [f64; 3] {
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    [u[0] / n, u[1] / n, u[2] / n]
}

/// Search for `h = q q'` with both factors strictly inside. Does not use the closed-form inequalities.
///
/// Writing `s = q'^-1 = [[x, -wR], [w/R, y]]` in the plane of the second quadrant, the condition that
/// `q = h s` lies in the plane of the first quadrant is one linear equation in `(x, y, w)`, so the
/// candidates form a projective line. Boundary decompositions cut it into arcs; the strict ones are
/// arc interiors, so arc midpoints and a uniform grid are tested.
fn strict_normalized(nz: &Normalized, h: &Isometry) -> Option<(Isometry, Isometry)> {
    let r = nz.r;
    let m = h.matrix();
    let [[a, b], [c, d]] = m;
    let n = [c, r * r * b, d / r - r * r * r * a];
    if n.iter().all(|x| x.abs() < 1e-300) {
        return None;
    }
    let seed = if n[0].abs() <= n[1].abs().max(n[2].abs()) { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normed(cross(n, seed));
    let e2 = normed(cross(n, e1));
    let point = |th: f64| -> [f64; 3] {
        let (sn, cs) = th.sin_cos();
        [cs * e1[0] + sn * e2[0], cs * e1[1] + sn * e2[1], cs * e1[2] + sn * e2[2]]
    };
    let angle_of = |s: &Mat2| -> f64 {
        let v = [s[0][0], s[1][1], s[1][0] * r];
        let x = v[0] * e1[0] + v[1] * e1[1] + v[2] * e1[2];
        let y = v[0] * e2[0] + v[1] * e2[1] + v[2] * e2[2];
        y.atan2(x)
    };
    let try_angle = |th: f64| -> Option<(Isometry, Isometry)> {
        let [x, y, w] = point(th);
        let mut sm = [[x, -w * r], [w / r, y]];
        if x * y + w * w <= 0.0 {
            return None;
        }
        if x + y < 0.0 {
            sm = [[-x, w * r], [-w / r, -y]];
        }
        let sv = Isometry::new(sm).ok()?;
        let qp = sv.inverse();
        let q = h.compose(&sv);
        check_pair(nz, &q, &qp, h, true).then_some((q, qp))
    };
    // boundary decompositions from the closed rays, as angles on the line
    let hi = h.inverse().matrix();
    let mut cuts: Vec<f64> = vec![angle_of(&[[1.0, 0.0], [0.0, 1.0]]), angle_of(&hi)];
    for eps in signs() {
        let (tp, t) = ray_parameters(&m, r, eps);
        if tp.is_finite() {
            cuts.push(angle_of(&p_prime_ray(r, eps, tp)));
        }
        if t.is_finite() {
            cuts.push(angle_of(&mat_mul(&hi, &p_ray(r, eps, t))));
        }
    }
    let pi = std::f64::consts::PI;
    let mut angles: Vec<f64> = cuts.iter().map(|x| x.rem_euclid(pi)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    for i in 0..angles.len() {
        let lo = angles[i];
        let hi_a = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + pi };
        if let Some(found) = try_angle((lo + hi_a) / 2.0) {
            return Some(found);
        }
    }
    let grid = 2048;
    (0..grid).find_map(|i| try_angle(pi * (i as f64 + 0.5) / grid as f64))
}

/// Strict factorization `h = q q'`, `q` in the open quadrant of `l`, `q'` in the open inverse quadrant of `l'`.
pub fn sq_strict_decompose(
    h: &Isometry,
    l: &GeodesicLine,
    lp: &GeodesicLine,
) -> Result<Option<(Isometry, Isometry)>, AdsError> {
    let nz = normalized(l, lp)?;
    let hn = nz.k.compose(h).compose(&nz.k.inverse());
    let ki = nz.k.inverse();
    Ok(strict_normalized(&nz, &hn)
        .map(|(q, qp)| (ki.compose(&q).compose(&nz.k), ki.compose(&qp).compose(&nz.k))))
}

/// Stem-quadrant criterion: Right planes over separated lines satisfy it iff `g^-1 g'` is in
/// `SQ(l) SQ(l')^-1` for orientations away from each other. Left planes go through the inverse map.
///
/// Returns `Degenerate` when the criterion holds but `g l`, `g' l'` are not separated and oriented
/// away, since disjointness then need not follow.
pub fn sq_criterion(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc) -> Result<bool, AdsError> {
    match same_side(p, pp)? {
        Side::Left => sq_criterion(&p.inverted(), &pp.inverted()),
        Side::Right => {
            if !lines_separated(&p.line, &pp.line) {
                return Ok(false);
            }
            let (l, lp) = orient_away_pair(&p.line, &pp.line)?;
            let h = p.g.inverse().compose(&pp.g);
            let holds = sq_strict_decompose(&h, &l, &lp)?.is_some();
            if holds {
                let gl = l.moved_by(&p.g);
                let glp = lp.moved_by(&pp.g);
                let side_ok = lines_separated(&gl, &glp) && oriented_away(&gl, &glp).unwrap_or(false);
                if !side_ok {
                    return Err(AdsError::Degenerate(
                        "criterion holds but the moved lines are not separated and oriented away".into(),
                    ));
                }
            }
            Ok(holds)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn axis_line() -> GeodesicLine {
        GeodesicLine::new(BoundaryPoint::real(0.0), BoundaryPoint::infinity()).unwrap()
    }

    fn normalized_right(t: f64) -> (CrookedPlaneDesc, CrookedPlaneDesc) {
        let l = GeodesicLine::reals(-0.5, 0.5).unwrap();
        let lp = GeodesicLine::reals(2.0, -2.0).unwrap();
        (
            CrookedPlaneDesc::right(Isometry::IDENTITY, l),
            CrookedPlaneDesc::right(Isometry::axial(-t), lp),
        )
    }

    #[test]
    fn membership_examples() {
        let p = CrookedPlaneDesc::left(Isometry::IDENTITY, axis_line());
        let rot = Isometry::rotation(PlanePoint::i(), 1.0);
        assert_eq!(crooked_part(&p, &rot), Some(Part::Stem));
        assert_eq!(crooked_part(&p, &Isometry::unipotent(1.0)), Some(Part::StemBoundary));
        assert_eq!(crooked_part(&p, &Isometry::diag(2.0)), Some(Part::WingPlus));
        assert_eq!(crooked_part(&p, &Isometry::diag(0.5)), Some(Part::WingMinus));
        assert!(!crooked_contains(&p, &Isometry::rotation(PlanePoint::new(1.0, 1.0), 1.0)));
        assert_eq!(crooked_part(&p, &Isometry::IDENTITY), Some(Part::StemBoundary));
        // right plane: diag(2) has attracting infinity, repelling 0, still in the right plane
        let pr = CrookedPlaneDesc::right(Isometry::IDENTITY, axis_line());
        assert_eq!(crooked_part(&pr, &Isometry::diag(2.0)), Some(Part::WingMinus));
    }

    #[test]
    fn halfspace_examples() {
        let l = axis_line().with_orientation(Orientation::PositiveLeft);
        let h = HalfSpaceDesc::new(CrookedPlaneDesc::left(Isometry::IDENTITY, l)).unwrap();
        let inside = Isometry::rotation(PlanePoint::new(-1.0, 1.0), 1.0);
        let outside = Isometry::rotation(PlanePoint::new(1.0, 1.0), 1.0);
        assert_eq!(halfspace_side(&h, &inside).unwrap(), HalfSide::Inside);
        assert_eq!(halfspace_side(&h, &Isometry::IDENTITY).unwrap(), HalfSide::OnPlane);
        assert_eq!(halfspace_side(&h, &outside).unwrap(), HalfSide::Outside);
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = GeodesicLine::reals(-0.3, 2.5).unwrap();
        let g = Isometry::from_entries(1.2, 0.4, -0.7, 0.9).unwrap();
        for side in [Side::Left, Side::Right] {
            let p = CrookedPlaneDesc::new(side, g, l);
            let pts = sample_crooked(&p, 500, &mut rng);
            assert_eq!(pts.len(), 500);
            assert!(pts.iter().all(|h| crooked_contains(&p, h)));
            if side == Side::Left {
                assert!(pts.iter().any(|h| h.approx_eq(&g, 1e-12)));
                let q = p.inverted();
                assert!(pts.iter().all(|h| crooked_contains(&q, &h.inverse())));
            }
        }
    }

    #[test]
    fn normalized_family() {
        let (p, pp) = normalized_right(1.0);
        assert!(disjoint_crooked(&p, &pp).unwrap().verdict.is_disjoint());
        let (p3, pp3) = normalized_right(3.0);
        assert!(!disjoint_crooked(&p3, &pp3).unwrap().verdict.is_disjoint());
        assert!(!disjoint_crooked(&p, &p).unwrap().verdict.is_disjoint());
        assert!(contraction_margin_sampled(&p, &pp, 50).unwrap() < 0.0);
        assert!(contraction_margin_sampled(&p, &p, 50).unwrap() >= 0.0);
        let w = intersect_witness(&p3, &pp3).unwrap();
        assert!(crooked_contains(&p3, &w) && crooked_contains(&pp3, &w));
        assert_eq!(intersect_witness(&p, &pp), Err(AdsError::IsDisjoint));
        assert!(intersect_witness(&p, &p).unwrap().is_identity(1e-12));
    }

    #[test]
    fn mixed_sides_rejected() {
        let (p, pp) = normalized_right(1.0);
        let q = CrookedPlaneDesc { side: Side::Left, ..pp };
        assert_eq!(disjoint_crooked(&p, &q).unwrap_err(), AdsError::MixedSides);
    }

    #[test]
    fn halfspace_orientation_clause() {
        let (p, pp) = normalized_right(1.0);
        let to0 = PlanePoint::new(0.0, 0.1);
        let toinf = PlanePoint::new(0.0, 10.0);
        let away = (
            HalfSpaceDesc::new(CrookedPlaneDesc { line: p.line.oriented_toward(&to0), ..p }).unwrap(),
            HalfSpaceDesc::new(CrookedPlaneDesc { line: pp.line.oriented_toward(&toinf), ..pp }).unwrap(),
        );
        let toward = (
            HalfSpaceDesc::new(CrookedPlaneDesc { line: p.line.oriented_toward(&toinf), ..p }).unwrap(),
            HalfSpaceDesc::new(CrookedPlaneDesc { line: pp.line.oriented_toward(&to0), ..pp }).unwrap(),
        );
        assert!(disjoint_halfspaces(&away.0, &away.1).unwrap());
        assert!(!disjoint_halfspaces(&toward.0, &toward.1).unwrap());
    }

    #[test]
    fn left_sq_example() {
        // C(l) and gC(l) are disjoint for g in SQ(l)
        let l = axis_line().with_orientation(Orientation::PositiveLeft);
        let g = Isometry::hyperbolic(BoundaryPoint::real(-1.0), BoundaryPoint::real(1.0), 0.7);
        let s = StemQuadrantDesc { line: l };
        assert!(stem_quadrant_contains(&s, &g).unwrap());
        let p = CrookedPlaneDesc::left(Isometry::IDENTITY, l);
        let pp = CrookedPlaneDesc::left(g, l);
        assert!(disjoint_crooked(&p, &pp).unwrap().verdict.is_disjoint());
        assert!(contraction_margin_sampled(&p, &pp, 50).unwrap() < 0.0);
    }

    #[test]
    fn stem_quadrant_examples() {
        let l = GeodesicLine::reals(-0.5, 0.5).unwrap().oriented_toward(&PlanePoint::new(0.0, 0.1));
        let s = StemQuadrantDesc { line: l };
        let h = Isometry::from_entries(1.0, -0.2, 0.8, 2.0).unwrap();
        assert!(stem_quadrant_contains(&s, &h).unwrap());
        assert!(stem_quadrant_contains_geometric(&s, &h).unwrap());
        assert!(!stem_quadrant_contains(&s, &Isometry::IDENTITY).unwrap());
        let t = Isometry::from_entries(1.0, 0.0, 0.0, 2.0).unwrap();
        assert!(stem_quadrant_contains(&s, &t).unwrap());
        assert!(stem_quadrant_contains_geometric(&s, &t).unwrap());
        assert!(!stem_quadrant_contains(&s, &t.inverse()).unwrap());
    }

    #[test]
    fn decompose_examples() {
        let l = GeodesicLine::reals(-0.5, 0.5).unwrap().oriented_toward(&PlanePoint::new(0.0, 0.1));
        let lp = GeodesicLine::reals(2.0, -2.0).unwrap().oriented_toward(&PlanePoint::new(0.0, 10.0));
        let d = sq_decompose(&Isometry::IDENTITY, &l, &lp).unwrap();
        assert_eq!(d.tag, SqTag::Identity);
        let h = Isometry::axial(-1.0);
        let d = sq_decompose(&h, &l, &lp).unwrap();
        assert_eq!(d.tag, SqTag::Diagonal);
        assert!(d.q.approx_eq(&Isometry::axial(-0.5), 1e-12));
        assert!(d.qp.approx_eq(&Isometry::axial(-0.5), 1e-12));
        assert_eq!(sq_decompose(&Isometry::axial(-3.0), &l, &lp), Err(AdsError::NotInProduct));
        let bad = lp.with_orientation(lp.orient.unwrap().flipped());
        assert!(matches!(sq_decompose(&h, &l, &bad), Err(AdsError::Degenerate(_))));
    }

    #[test]
    fn ray_parameters_give_boundary_factors() {
        // q = h P'_eps(t') lands in the plane of the first quadrant
        let r = 2.0;
        let m = Isometry::from_entries(0.9, 0.3, -0.2, 1.05).unwrap().matrix();
        for eps in [1.0, -1.0] {
            let (tp, t) = ray_parameters(&m, r, eps);
            let q = mat_mul(&m, &p_prime_ray(r, eps, tp));
            assert_abs_diff_eq!(r * r * q[0][1] + q[1][0], 0.0, epsilon = 1e-12);
            let qp = mat_mul(&crate::hyp2::adjugate(&p_ray(r, eps, t)), &m);
            assert_abs_diff_eq!(qp[0][1] + r * r * qp[1][0], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sq_criterion_examples() {
        let (p, pp) = normalized_right(1.0);
        assert!(sq_criterion(&p, &pp).unwrap());
        // long downward translations lie in the product but push g'l' inside l
        let (p3, pp3) = normalized_right(3.0);
        assert!(matches!(sq_criterion(&p3, &pp3), Err(AdsError::Degenerate(_))));
        // translations the wrong way are not in the product at all
        let (pu, ppu) = normalized_right(-1.0);
        assert!(!sq_criterion(&pu, &ppu).unwrap());
    }

    #[test]
    fn counterexample_reports_degenerate() {
        // g long in SQ(l)^-1 with attracting point the endpoint 2 of l'; g' in SQ(l')^-1 near e
        let l = GeodesicLine::reals(-0.5, 0.5).unwrap();
        let lp = GeodesicLine::reals(2.0, -2.0).unwrap();
        let g = Isometry::hyperbolic(BoundaryPoint::real(2.0), BoundaryPoint::real(0.125), 6.0);
        let p = CrookedPlaneDesc::right(g, l);
        let pp = CrookedPlaneDesc::right(Isometry::axial(-0.01), lp);
        let gl = l.moved_by(&g);
        assert_eq!(crate::hyp2::line_position(&gl, &lp), crate::hyp2::LinePosition::Crossing);
        let r = sq_criterion(&p, &pp);
        assert!(matches!(r, Err(AdsError::Degenerate(_))), "{r:?}");
        assert!(!disjoint_crooked(&p, &pp).unwrap().verdict.is_disjoint());
    }

    #[test]
    fn rotation_witness_angle() {
        // shared endpoint with different images uses a rotation about a point of l
        let l = axis_line();
        let lp = GeodesicLine::reals(0.0, 3.0).unwrap();
        let p = CrookedPlaneDesc::right(Isometry::IDENTITY, l);
        let pp = CrookedPlaneDesc::right(Isometry::rotation(PlanePoint::new(1.0, 2.0), 0.8), lp);
        let w = intersect_witness(&p, &pp).unwrap();
        assert!(crooked_contains(&p, &w) && crooked_contains(&pp, &w));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn iso() -> impl Strategy<Value = Isometry> {
            (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
                .prop_filter_map("det", |(a, b, c, d)| Isometry::from_entries(a, b, c, d).ok())
                .prop_filter("conditioning", |g| crate::hyp2::fro(&g.matrix()) < 10.0)
        }

        fn line() -> impl Strategy<Value = GeodesicLine> {
            (-PI..PI, -PI..PI)
                .prop_filter("distinct", |(x, y)| (x - y).abs() > 0.1 && (x - y).abs() < PI - 0.1)
                .prop_map(|(x, y)| {
                    GeodesicLine::new(BoundaryPoint::from_angle(x), BoundaryPoint::from_angle(y)).unwrap()
                })
        }

        proptest! {
            #[test]
            fn partition(l in line(), h in iso(), left in any::<bool>()) {
                let side = if left { Side::Left } else { Side::Right };
                let mk = |o| HalfSpaceDesc::new(CrookedPlaneDesc::new(side, Isometry::IDENTITY, l.with_orientation(o))).unwrap();
                let a = halfspace_side(&mk(Orientation::PositiveLeft), &h).unwrap();
                let b = halfspace_side(&mk(Orientation::PositiveRight), &h).unwrap();
                match a {
                    HalfSide::OnPlane => prop_assert_eq!(b, HalfSide::OnPlane),
                    HalfSide::Inside => prop_assert_eq!(b, HalfSide::Outside),
                    HalfSide::Outside => prop_assert_eq!(b, HalfSide::Inside),
                }
                prop_assert_eq!(halfspace_side(&mk(Orientation::PositiveLeft), &Isometry::IDENTITY).unwrap(), HalfSide::OnPlane);
            }

            #[test]
            fn duality(l in line(), seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = CrookedPlaneDesc::left(Isometry::IDENTITY, l);
                let q = CrookedPlaneDesc::right(Isometry::IDENTITY, l);
                for h in sample_crooked(&p, 20, &mut rng) {
                    prop_assert!(crooked_contains(&q, &h.inverse()));
                }
                for h in sample_crooked(&q, 20, &mut rng) {
                    prop_assert!(crooked_contains(&p, &h.inverse()));
                }
            }

            #[test]
            fn equivariance(l in line(), g in iso(), h in iso(), seed in any::<u64>()) {
                let p = CrookedPlaneDesc::left(Isometry::IDENTITY, l);
                let pg = CrookedPlaneDesc::left(Isometry::IDENTITY, l.moved_by(&g));
                prop_assert_eq!(crooked_contains(&pg, &h), crooked_contains(&p, &g.inverse().compose(&h).compose(&g)));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for k in sample_crooked(&p, 10, &mut rng) {
                    prop_assert!(crooked_contains(&pg, &g.compose(&k).compose(&g.inverse())));
                }
            }

            #[test]
            fn stem_quadrant_inside_halfspace(l in line(), pos in any::<bool>(), len in 0.01..5.0f64, off in -3.0..3.0f64) {
                let o = if pos { Orientation::PositiveLeft } else { Orientation::PositiveRight };
                let l = l.with_orientation(o);
                // hyperbolic along the perpendicular at arclength `off`, toward the positive side
                let n = l.frame();
                let toward = match o { Orientation::PositiveLeft => -1.0, Orientation::PositiveRight => 1.0 };
                let e = off.exp();
                let h = n.compose(&Isometry::hyperbolic(BoundaryPoint::real(toward * e), BoundaryPoint::real(-toward * e), len)).compose(&n.inverse());
                let s = StemQuadrantDesc { line: l };
                prop_assert!(stem_quadrant_contains(&s, &h).unwrap());
                prop_assert!(stem_quadrant_contains_geometric(&s, &h).unwrap());
                let hs = HalfSpaceDesc::new(CrookedPlaneDesc::left(Isometry::IDENTITY, l)).unwrap();
                prop_assert_eq!(halfspace_side(&hs, &h).unwrap(), HalfSide::Inside);
                // right half-spaces contain the inverse quadrant
                let hs = HalfSpaceDesc::new(CrookedPlaneDesc::right(Isometry::IDENTITY, l)).unwrap();
                prop_assert_eq!(halfspace_side(&hs, &h.inverse()).unwrap(), HalfSide::Inside);
            }
        }
    }
}
