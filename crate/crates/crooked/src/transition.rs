//! Projective models of AdS³ and Minkowski space, the rescaling `r_t`, and the convergence of
//! rescaled AdS crooked planes to Minkowski ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ads::{disjoint_crooked, AdsError, CrookedPlaneDesc, Side};
use crate::hyp2::{
    dist, frame, lines_separated, mat_mul, orient_away_pair, BoundaryPoint, GeodesicLine, GeomError,
    Isometry, Mat2, PlanePoint,
};
use crate::mink::{exp_killing, mink_disjoint, sample_mink_crooked, KillingField, MinkCrookedDesc, MinkError};

pub type Mat4 = [[f64; 4]; 4];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error("no points of the clouds fall in the window")]
    EmptyWindow,
    #[error("arcs {0} and {1} do not have disjoint closures")]
    ArcsMeet(usize, usize),
    #[error("strip condition fails for arcs {0} and {1}")]
    StripViolation(usize, usize),
    #[error("no t down to {0:e} meets the contraction margin")]
    NoSmallT(f64),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Mink(#[from] MinkError),
    #[error(transparent)]
    Ads(#[from] AdsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Point of projective 3-space as a unit 4-vector, identified with its negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint {
    pub y: [f64; 4],
}

impl ProjPoint {
    pub fn new(y: [f64; 4]) -> ProjPoint {
        let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut u = y.map(|v| v / n);
        // sign convention: largest entry positive
        let big = u.iter().cloned().fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
        if big < 0.0 {
            u = u.map(|v| -v);
        }
        ProjPoint { y: u }
    }

    /// Angle between the lines spanned by the two vectors.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        let d = |s: f64| (0..4).map(|i| (self.y[i] - s * other.y[i]).powi(2)).sum::<f64>().sqrt();
        2.0 * (d(1.0).min(d(-1.0)) / 2.0).min(1.0).asin()
    }

    /// `y1^2 + y2^2 - y3^2 - y4^2`
    pub fn quadric(&self) -> f64 {
        let [a, b, c, d] = self.y;
        a * a + b * b - c * c - d * d
    }

    /// Affine coordinates in the chart `y4 != 0`.
    pub fn chart_y4(&self) -> Option<[f64; 3]> {
        let w = self.y[3];
        (w.abs() > 1e-12).then(|| [self.y[0] / w, self.y[1] / w, self.y[2] / w])
    }

    /// Affine coordinates in the chart `y1 != 0`, ordered `(y2, y3, y4) / y1`.
    pub fn chart_y1(&self) -> Option<[f64; 3]> {
        let w = self.y[0];
        (w.abs() > 1e-12).then(|| [self.y[1] / w, self.y[2] / w, self.y[3] / w])
    }
}

/// Projective transformation, a 4×4 matrix up to nonzero scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjMap {
    pub m: Mat4,
}

fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

impl ProjMap {
    pub const IDENTITY: ProjMap = ProjMap {
        m: [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
    };

    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        ProjMap { m: mat4_mul(&self.m, &other.m) }
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let mut y = [0.0; 4];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..4).map(|k| self.m[i][k] * p.y[k]).sum();
        }
        ProjPoint::new(y)
    }

    fn unit(&self) -> Mat4 {
        let n = self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        self.m.map(|r| r.map(|v| v / n))
    }

    /// Frobenius distance between unit-norm representatives, minimized over sign.
    pub fn distance(&self, other: &ProjMap) -> f64 {
        let (a, b) = (self.unit(), other.unit());
        let d = |s: f64| {
            (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| (a[i][j] - s * b[i][j]).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        d(1.0).min(d(-1.0))
    }
}

/// Coordinates `(y1, y2, y3, y4)` of `[[y1 + y4, y2 - y3], [y2 + y3, -y1 + y4]]`.
fn coords(m: &Mat2) -> [f64; 4] {
    [
        (m[0][0] - m[1][1]) / 2.0,
        (m[0][1] + m[1][0]) / 2.0,
        (m[1][0] - m[0][1]) / 2.0,
        (m[0][0] + m[1][1]) / 2.0,
    ]
}

const BASIS: [Mat2; 4] = [
    [[1.0, 0.0], [0.0, -1.0]],
    [[0.0, 1.0], [1.0, 0.0]],
    [[0.0, -1.0], [1.0, 0.0]],
    [[1.0, 0.0], [0.0, 1.0]],
];

pub fn embed_big_i(g: &Isometry) -> ProjPoint {
    ProjPoint::new(coords(&g.matrix()))
}

pub fn embed_small_i(x: &KillingField) -> ProjPoint {
    let [z1, z2, z3] = x.z;
    ProjPoint::new([z1, z2, z3, 1.0])
}

/// `r_t = diag(1/t, 1/t, 1/t, 1)`.
pub fn rescale(t: f64) -> Result<ProjMap, TransitionError> {
    if !(t > 0.0) {
        return Err(TransitionError::BadParameter(format!("t = {t}")));
    }
    let s = 1.0 / t;
    let mut m = ProjMap::IDENTITY.m;
    for (i, row) in m.iter_mut().enumerate().take(3) {
        row[i] = s;
    }
    Ok(ProjMap { m })
}

/// Linear action of `(h, k)`, `x -> h x k^-1`, in the coordinates of `I`.
pub fn pushforward_big_i(h: &Isometry, k: &Isometry) -> ProjMap {
    let (hm, ki) = (h.matrix(), k.inverse().matrix());
    let mut m = [[0.0; 4]; 4];
    for (j, e) in BASIS.iter().enumerate() {
        let c = coords(&mat_mul(&mat_mul(&hm, e), &ki));
        for i in 0..4 {
            m[i][j] = c[i];
        }
    }
    ProjMap { m }
}

/// Affine action `w -> h w h^-1 + X` in the coordinates of `i`.
pub fn pushforward_small_i(h: &Isometry, x: &KillingField) -> ProjMap {
    let mut m = ProjMap::IDENTITY.m;
    for j in 0..3 {
        let e = KillingField::from_matrix(BASIS[j]).expect("traceless").adjoint(h);
        for i in 0..3 {
            m[i][j] = e.z[i];
        }
    }
    for i in 0..3 {
        m[i][3] = x.z[i];
    }
    ProjMap { m }
}

/// Projective distance between `r_t I(g_t)` and `i(X)`, with `X` the derivative of the path at 0.
pub fn limit_residual<F: Fn(f64) -> Isometry>(path: F, derivative: &KillingField, t: f64) -> Result<f64, TransitionError> {
    let p = rescale(t)?.apply(&embed_big_i(&path(t)));
    Ok(p.distance(&embed_small_i(derivative)))
}

/// Distance between `r_t I_*(h_t, k_t) r_t^-1` and `i_*(h_0, X)`, with `X` the derivative of `h_t k_t^-1`.
pub fn limit_residual_pair<F: Fn(f64) -> (Isometry, Isometry)>(
    path: F,
    h0: &Isometry,
    derivative: &KillingField,
    t: f64,
) -> Result<f64, TransitionError> {
    let (h, k) = path(t);
    let r = rescale(t)?;
    let rinv = rescale(1.0 / t)?;
    let m = r.compose(&pushforward_big_i(&h, &k)).compose(&rinv);
    Ok(m.distance(&pushforward_small_i(h0, derivative)))
}

/// Central finite difference of a path through the identity.
pub fn derivative_at_zero<F: Fn(f64) -> Isometry>(path: F) -> KillingField {
    let h = 1e-6;
    let (p, m) = (path(h).matrix(), path(-h).matrix());
    // fix the sign of each representative near the identity
    let sp = if p[0][0] + p[1][1] < 0.0 { -1.0 } else { 1.0 };
    let sm = if m[0][0] + m[1][1] < 0.0 { -1.0 } else { 1.0 };
    let d = [
        [(sp * p[0][0] - sm * m[0][0]) / (2.0 * h), (sp * p[0][1] - sm * m[0][1]) / (2.0 * h)],
        [(sp * p[1][0] - sm * m[1][0]) / (2.0 * h), (sp * p[1][1] - sm * m[1][1]) / (2.0 * h)],
    ];
    let tr = (d[0][0] + d[1][1]) / 2.0;
    KillingField::from_matrix([[d[0][0] - tr, d[0][1]], [d[1][0], d[1][1] - tr]]).expect("traceless")
}

/// Least-squares slope of `log residual` against `log t`.
pub fn loglog_slope(ts: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

// ---------------------------------------------------------------------------
// strip data

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripArc {
    pub line: GeodesicLine,
    pub v: KillingField,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripData {
    pub arcs: Vec<StripArc>,
    pub adjacency: Vec<(usize, usize)>,
}

/// A point of a line or one of its ideal endpoints.
#[derive(Debug, Clone, Copy)]
enum Spot {
    Inner(Isometry),
    Ideal(BoundaryPoint),
}

fn spot(line: &GeodesicLine, s: f64) -> Spot {
    if s == f64::INFINITY {
        Spot::Ideal(line.b)
    } else if s == f64::NEG_INFINITY {
        Spot::Ideal(line.a)
    } else {
        Spot::Inner(line.point_matrix(s))
    }
}

/// Ideal point in direction `phi` seen from `i` (disk angle).
fn ideal_from_i(phi: f64) -> BoundaryPoint {
    BoundaryPoint::new(-(phi / 2.0).cos(), (phi / 2.0).sin())
}

fn angle_of_ideal(xi: &BoundaryPoint) -> f64 {
    let v = xi.vector();
    2.0 * v[1].atan2(-v[0])
}

/// Unit-speed translation generator along the geodesic from `x` to `x'`.
fn unit_translation(x: Spot, xp: Spot) -> Mat2 {
    let (rep, attr) = match (x, xp) {
        (Spot::Inner(a), Spot::Inner(b)) => {
            let y = a.inverse().compose(&b).apply(&PlanePoint::i());
            let i = num_complex::Complex64::i();
            let phi = ((y.z - i) / (y.z + i)).arg();
            (a.apply(&ideal_from_i(phi + std::f64::consts::PI)), a.apply(&ideal_from_i(phi)))
        }
        (Spot::Inner(a), Spot::Ideal(xi)) => {
            let phi = angle_of_ideal(&a.inverse().apply(&xi));
            (a.apply(&ideal_from_i(phi + std::f64::consts::PI)), xi)
        }
        (Spot::Ideal(xi), Spot::Inner(b)) => {
            let phi = angle_of_ideal(&b.inverse().apply(&xi));
            (xi, b.apply(&ideal_from_i(phi + std::f64::consts::PI)))
        }
        (Spot::Ideal(xi), Spot::Ideal(xip)) => (xi, xip),
    };
    let f = frame(&rep, &attr);
    mat_mul(&mat_mul(&f.matrix(), &[[0.5, 0.0], [0.0, -0.5]]), &f.inverse().matrix())
}

/// Component of the Killing field `X` along the oriented geodesic from `x` to `x'`.
fn component(x: &KillingField, t: &Mat2) -> f64 {
    let m = mat_mul(&x.matrix(), t);
    2.0 * (m[0][0] + m[1][1])
}

/// `d/dt d(exp(t v) x, exp(t v') x')` at `t = 0`, points given by arclength on the lines.
pub fn distance_derivative(a: &StripArc, s: f64, b: &StripArc, sp: f64) -> f64 {
    let t = unit_translation(spot(&a.line, s), spot(&b.line, sp));
    component(&(b.v - a.v), &t)
}

/// Arclength grid used for the infimum over pairs of points, ideal endpoints included.
fn grid() -> Vec<f64> {
    let mut g = vec![f64::NEG_INFINITY];
    g.extend((-24..=24).map(|k| k as f64 * 0.5));
    g.push(f64::INFINITY);
    g
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StripVerdict {
    Ok { k: f64 },
    Violation { pair: (usize, usize) },
}

/// Cone condition on every adjacent pair plus the sampled uniform bound `k` on
/// `-d/dt d(exp(t v) x, exp(t v') x')`.
pub fn strip_condition_check(s: &StripData) -> Result<StripVerdict, TransitionError> {
    let g = grid();
    let mut k = f64::INFINITY;
    for &(a, b) in &s.adjacency {
        let (arc, arcp) = (&s.arcs[a], &s.arcs[b]);
        if !lines_separated(&arc.line, &arcp.line) {
            return Err(TransitionError::ArcsMeet(a, b));
        }
        if !mink_disjoint(Side::Right, &arc.line, &arc.v, &arcp.line, &arcp.v)? {
            return Ok(StripVerdict::Violation { pair: (a, b) });
        }
        for &x in &g {
            for &xp in &g {
                k = k.min(-distance_derivative(arc, x, arcp, xp));
            }
        }
    }
    if k > 0.0 {
        Ok(StripVerdict::Ok { k })
    } else {
        Ok(StripVerdict::Violation { pair: s.adjacency.first().copied().unwrap_or((0, 0)) })
    }
}

/// The two-arc instance: `(-1/2, 1/2)` with `v = 0` and `(2, -2)` with `v' = s - s'`, where `s`, `s'`
/// are the sums of the stem-quadrant generators scaled by `a`, `b` and `a'`, `b'`.
pub fn two_arc_instance(weights: [f64; 4]) -> Result<StripData, TransitionError> {
    let l = GeodesicLine::reals(-0.5, 0.5)?;
    let lp = GeodesicLine::reals(2.0, -2.0)?;
    let (lo, lpo) = orient_away_pair(&l, &lp)?;
    let [u1, u2] = crate::mink::stem_generators(&lo)?;
    let [w1, w2] = crate::mink::stem_generators(&lpo)?;
    let s = u1.scale(weights[0]) + u2.scale(weights[1]);
    let sp = w1.scale(weights[2]) + w2.scale(weights[3]);
    Ok(StripData {
        arcs: vec![StripArc { line: lo, v: KillingField::ZERO }, StripArc { line: lpo, v: s - sp }],
        adjacency: vec![(0, 1)],
    })
}

/// Largest `t = t0 / 2^n` such that `d(f_t x, f_t x') <= d(x, x') - (k/2) t` on the interior grid.
pub fn choose_t(s: &StripData, k: f64, t0: f64) -> Result<f64, TransitionError> {
    let pts: Vec<f64> = (-16..=16).map(|i| i as f64 * 0.5).collect();
    let mut t = t0;
    while t > 1e-12 {
        let mut ok = true;
        'pairs: for &(a, b) in &s.adjacency {
            let (arc, arcp) = (&s.arcs[a], &s.arcs[b]);
            let (f, fp) = (exp_killing(&arc.v.scale(t)), exp_killing(&arcp.v.scale(t)));
            for &x in &pts {
                for &xp in &pts {
                    let (p, q) = (arc.line.point_at(x), arcp.line.point_at(xp));
                    if dist(&f.apply(&p), &fp.apply(&q)) > dist(&p, &q) - 0.5 * k * t {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if ok {
            return Ok(t);
        }
        t /= 2.0;
    }
    Err(TransitionError::NoSmallT(t))
}

/// Per arc, matched clouds `r_t I(exp(t v) exp(t Y))` and `i(v + Y)` for `Y` sampled on the
/// Minkowski right plane `C*(a)` at the origin.
pub fn rescaled_family(
    s: &StripData,
    t: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<(Vec<ProjPoint>, Vec<ProjPoint>)>, TransitionError> {
    let r = rescale(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(s.arcs.len());
    for arc in &s.arcs {
        let desc = MinkCrookedDesc { side: Side::Right, v: KillingField::ZERO, line: arc.line };
        let g = exp_killing(&arc.v.scale(t));
        let ys = sample_mink_crooked(&desc, n, &mut rng);
        let ads: Vec<ProjPoint> = ys
            .iter()
            .map(|y| r.apply(&embed_big_i(&g.compose(&exp_killing(&y.scale(t))))))
            .collect();
        let lim: Vec<ProjPoint> = ys.iter().map(|y| embed_small_i(&(arc.v + *y))).collect();
        out.push((ads, lim));
    }
    Ok(out)
}

/// Right planes `exp(t v_a) C*(a)` of the AdS family, for disjointness checks.
pub fn ads_planes(s: &StripData, t: f64) -> Vec<CrookedPlaneDesc> {
    s.arcs
        .iter()
        .map(|a| CrookedPlaneDesc::right(exp_killing(&a.v.scale(t)), a.line))
        .collect()
}

pub fn ads_planes_disjoint(s: &StripData, t: f64) -> Result<bool, TransitionError> {
    let planes = ads_planes(s, t);
    for &(a, b) in &s.adjacency {
        if !disjoint_crooked(&planes[a], &planes[b])?.verdict.is_disjoint() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn chart_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Symmetric Hausdorff distance in the chart `y4 != 0`: the larger of the distances from windowed
/// points of one cloud (box `|c_i| <= window`) to the whole other cloud.
pub fn hausdorff_window(a: &[ProjPoint], b: &[ProjPoint], window: f64) -> Result<f64, TransitionError> {
    let ca: Vec<[f64; 3]> = a.iter().filter_map(|p| p.chart_y4()).collect();
    let cb: Vec<[f64; 3]> = b.iter().filter_map(|p| p.chart_y4()).collect();
    let inside = |c: &&[f64; 3]| c.iter().all(|v| v.abs() <= window);
    let one_way = |from: &[[f64; 3]], to: &[[f64; 3]]| -> Option<f64> {
        let mut worst: Option<f64> = None;
        for p in from.iter().filter(inside) {
            let d = to.iter().map(|q| chart_dist(p, q)).fold(f64::INFINITY, f64::min);
            worst = Some(worst.map_or(d, |w: f64| w.max(d)));
        }
        worst
    };
    match (one_way(&ca, &cb), one_way(&cb, &ca)) {
        (Some(x), Some(y)) => Ok(x.max(y)),
        (Some(x), None) | (None, Some(x)) => Ok(x),
        (None, None) => Err(TransitionError::EmptyWindow),
    }
}

/// Largest windowed Hausdorff distance over the arcs of the family at `t`.
pub fn family_hausdorff(s: &StripData, t: f64, n: usize, seed: u64, window: f64) -> Result<f64, TransitionError> {
    let mut worst: f64 = 0.0;
    for (ads, lim) in rescaled_family(s, t, n, seed)? {
        worst = worst.max(hausdorff_window(&ads, &lim, window)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub t: f64,
    pub residual: f64,
    pub hausdorff: f64,
}

/// Rows for `t, t/10, t/100, t/1000`: the limit residual of `exp(t v)` for the arc with the largest
/// field, and the family's windowed Hausdorff distance.
pub fn convergence_table(s: &StripData, t: f64, n: usize, seed: u64) -> Result<Vec<ConvergenceRow>, TransitionError> {
    let v = s
        .arcs
        .iter()
        .map(|a| a.v)
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or(KillingField::ZERO);
    (0..4)
        .map(|k| {
            let tk = t / 10f64.powi(k);
            let residual = limit_residual(|u| exp_killing(&v.scale(u)), &v, tk)?;
            let hausdorff = family_hausdorff(s, tk, n, seed, 5.0)?;
            Ok(ConvergenceRow { t: tk, residual, hausdorff })
        })
        .collect()
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("t,residual,hausdorff\n");
    for r in rows {
        out.push_str(&format!("{:e},{:e},{:e}\n", r.t, r.residual, r.hausdorff));
    }
    out
}
