//! Free-group representation pairs acting on AdS³ by `x -> rho(w) x j(w)^-1`, crooked
//! fundamental domains bounded by right crooked planes, and obstruction certificates.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ads::{
    disjoint_crooked, disjoint_halfspaces, halfspace_side, AdsError, CrookedPlaneDesc, HalfSide,
    HalfSpaceDesc,
};
use crate::hyp2::{
    classify, line_position, oriented_away, rotation_angle, side_of, translation_length,
    BoundaryPoint, Classification, GeodesicLine, GeomError, Isometry, LinePosition, PlanePoint,
    SideOf,
};

/// Tolerance for matrix identities in pairing and equivariance checks.
pub const PAIRING_TOL: f64 = 1e-9;
/// Translation lengths at or below this are not counted as hyperbolic.
pub const MIN_LENGTH: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchottkyError {
    #[error("word is not reduced at position {0}")]
    RejectedUnreduced(usize),
    #[error("letter {0} does not name a generator")]
    BadLetter(i32),
    #[error("no word with a hyperbolic j-image up to the given length")]
    NoHyperbolic,
    #[error("generator {0} does not pair its half-planes")]
    PairingFailed(usize),
    #[error("crooked half-spaces {0} and {1} overlap")]
    HalfSpacesOverlap(usize, usize),
    #[error("ping-pong disks overlap")]
    PingPongFailed,
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ads(#[from] AdsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Reduced word; letter `k > 0` is the generator `k`, `-k` its inverse (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Word {
    letters: Vec<i32>,
}

impl TryFrom<Vec<i32>> for Word {
    type Error = SchottkyError;
    fn try_from(v: Vec<i32>) -> Result<Word, SchottkyError> {
        Word::new(v)
    }
}

impl From<Word> for Vec<i32> {
    fn from(w: Word) -> Vec<i32> {
        w.letters
    }
}

impl Word {
    pub fn new(letters: Vec<i32>) -> Result<Word, SchottkyError> {
        if let Some(&z) = letters.iter().find(|&&l| l == 0) {
            return Err(SchottkyError::BadLetter(z));
        }
        if let Some(i) = letters.windows(2).position(|p| p[0] == -p[1]) {
            return Err(SchottkyError::RejectedUnreduced(i));
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Word {
        Word::default()
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Commutator `a b a^-1 b^-1`.
    pub fn commutator(a: i32, b: i32) -> Word {
        Word { letters: vec![a, b, -a, -b] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepPair {
    pub r: usize,
    pub j: Vec<Isometry>,
    pub rho: Vec<Isometry>,
}

impl RepPair {
    pub fn new(j: Vec<Isometry>, rho: Vec<Isometry>) -> Result<RepPair, SchottkyError> {
        if j.len() != rho.len() || j.is_empty() {
            return Err(SchottkyError::Precondition("j and rho need the same positive rank".into()));
        }
        Ok(RepPair { r: j.len(), j, rho })
    }

    fn letter(&self, l: i32) -> Result<(Isometry, Isometry), SchottkyError> {
        let k = l.unsigned_abs() as usize;
        if k == 0 || k > self.r {
            return Err(SchottkyError::BadLetter(l));
        }
        let (a, b) = (self.j[k - 1], self.rho[k - 1]);
        Ok(if l > 0 { (a, b) } else { (a.inverse(), b.inverse()) })
    }

    /// Action of `(j(w), rho(w))` on AdS³.
    pub fn act(&self, w: &Word, x: &Isometry) -> Result<Isometry, SchottkyError> {
        let (a, b) = evaluate(self, w)?;
        Ok(b.compose(x).compose(&a.inverse()))
    }

    pub fn rho_trivial(&self, tol: f64) -> bool {
        self.rho.iter().all(|g| g.is_identity(tol))
    }
}

/// `(j(w), rho(w))`.
pub fn evaluate(rep: &RepPair, w: &Word) -> Result<(Isometry, Isometry), SchottkyError> {
    let mut a = Isometry::IDENTITY;
    let mut b = Isometry::IDENTITY;
    for &l in w.letters() {
        let (x, y) = rep.letter(l)?;
        a = a.compose(&x);
        b = b.compose(&y);
    }
    Ok((a, b))
}

/// Nontrivial reduced words of length `1..=maxlen` in breadth-first order.
pub fn reduced_words(r: usize, maxlen: usize) -> Vec<Word> {
    let alphabet: Vec<i32> = (1..=r as i32).flat_map(|k| [k, -k]).collect();
    let mut out = Vec::new();
    let mut queue: VecDeque<Vec<i32>> = VecDeque::from([Vec::new()]);
    while let Some(w) = queue.pop_front() {
        if w.len() == maxlen {
            continue;
        }
        for &l in &alphabet {
            if w.last() == Some(&-l) {
                continue;
            }
            let mut next = w.clone();
            next.push(l);
            out.push(Word { letters: next.clone() });
            queue.push_back(next);
        }
    }
    out
}

/// Max of `lambda(rho(w)) / lambda(j(w))` over reduced words up to `maxlen` with `lambda(j(w)) > 1e-9`.
pub fn shortness_ratio(rep: &RepPair, maxlen: usize) -> Result<f64, SchottkyError> {
    if maxlen == 0 {
        return Err(SchottkyError::Precondition("maxlen must be at least 1".into()));
    }
    let mut best: Option<f64> = None;
    for w in reduced_words(rep.r, maxlen) {
        let (a, b) = evaluate(rep, &w)?;
        let la = translation_length(&a);
        if la <= MIN_LENGTH {
            continue;
        }
        let ratio = translation_length(&b) / la;
        best = Some(best.map_or(ratio, |m: f64| m.max(ratio)));
    }
    best.ok_or(SchottkyError::NoHyperbolic)
}

// ---------------------------------------------------------------------------
// crooked domains

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub line: GeodesicLine,
    pub g: Isometry,
}

/// Arcs bounding one tile; generator `i` maps arc `pairing[i].0` onto arc `pairing[i].1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainData {
    pub arcs: Vec<Arc>,
    pub pairing: Vec<(usize, usize)>,
}

impl DomainData {
    fn half_spaces(&self) -> Result<Vec<HalfSpaceDesc>, SchottkyError> {
        self.arcs
            .iter()
            .map(|a| Ok(HalfSpaceDesc::new(CrookedPlaneDesc::right(a.g, a.line))?))
            .collect()
    }
}

/// Whether `j` maps the oriented line `l` onto `lp` with the positive side going to the negative side.
fn pairs(j: &Isometry, l: &GeodesicLine, lp: &GeodesicLine) -> Result<bool, SchottkyError> {
    let moved = l.moved_by(j);
    if !moved.same_line(lp, PAIRING_TOL) {
        return Ok(false);
    }
    let p = moved.positive_point()?;
    Ok(side_of(lp, &p)? == SideOf::Negative)
}

/// Half-planes are `[l_1, l_1', l_2, l_2', ...]`; `gs` follows the same order.
pub fn build_schottky(
    half_planes: &[GeodesicLine],
    j: &[Isometry],
    gs: &[Isometry],
) -> Result<(RepPair, DomainData), SchottkyError> {
    let r = j.len();
    if r == 0 || half_planes.len() != 2 * r || gs.len() != 2 * r {
        return Err(SchottkyError::Precondition("expected 2r half-planes and 2r isometries".into()));
    }
    for (a, l) in half_planes.iter().enumerate() {
        if l.orient.is_none() {
            return Err(GeomError::Unoriented.into());
        }
        for (b, lp) in half_planes.iter().enumerate().skip(a + 1) {
            let apart = line_position(l, lp) == LinePosition::Separated && oriented_away(l, lp).unwrap_or(false);
            if !apart {
                return Err(SchottkyError::Precondition(format!("half-planes {a} and {b} are not disjoint")));
            }
        }
    }
    for i in 0..r {
        if !pairs(&j[i], &half_planes[2 * i], &half_planes[2 * i + 1])? {
            return Err(SchottkyError::PairingFailed(i));
        }
    }
    let arcs: Vec<Arc> = half_planes.iter().zip(gs).map(|(&line, &g)| Arc { line, g }).collect();
    let data = DomainData {
        arcs,
        pairing: (0..r).map(|i| (2 * i, 2 * i + 1)).collect(),
    };
    let hs = data.half_spaces()?;
    for a in 0..hs.len() {
        for b in a + 1..hs.len() {
            if !disjoint_halfspaces(&hs[a], &hs[b])? {
                return Err(SchottkyError::HalfSpacesOverlap(a, b));
            }
        }
    }
    let rho = (0..r).map(|i| gs[2 * i + 1].compose(&j[i]).compose(&gs[2 * i].inverse())).collect();
    Ok((RepPair::new(j.to_vec(), rho)?, data))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DomainVerdict {
    Verified { k: f64, pairs_checked: usize },
    Failed { reason: String },
}

impl DomainVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, DomainVerdict::Verified { .. })
    }
}

/// Checks pairing equivariance, then disjointness of the right planes `g_a C*(a)` for all arc pairs
/// of every tile reached by words of length `<= radius`; `k` is the smallest margin.
pub fn verify_crooked_domain(rep: &RepPair, d: &DomainData, radius: usize) -> Result<DomainVerdict, SchottkyError> {
    if d.pairing.len() != rep.r {
        return Err(SchottkyError::Precondition("pairing must list one arc pair per generator".into()));
    }
    let fail = |reason: String| Ok(DomainVerdict::Failed { reason });
    for (i, &(a, b)) in d.pairing.iter().enumerate() {
        let (Some(arc), Some(arc_p)) = (d.arcs.get(a), d.arcs.get(b)) else {
            return Err(SchottkyError::Precondition(format!("pairing {i} names a missing arc")));
        };
        if !pairs(&rep.j[i], &arc.line, &arc_p.line)? {
            return fail(format!("generator {} does not map arc {a} onto arc {b}", i + 1));
        }
        let induced = rep.rho[i].compose(&arc.g).compose(&rep.j[i].inverse());
        let scale = 1.0 + crate::hyp2::fro(&arc_p.g.matrix());
        if !induced.approx_eq(&arc_p.g, PAIRING_TOL * scale) {
            return fail(format!("g of arc {b} differs from rho(g{}) g_{a} j(g{})^-1", i + 1, i + 1));
        }
    }
    let mut tiles = vec![Word::empty()];
    tiles.extend(reduced_words(rep.r, radius));
    let mut k = f64::INFINITY;
    let mut checked = 0;
    for w in &tiles {
        let (jw, rw) = evaluate(rep, w)?;
        let planes: Vec<CrookedPlaneDesc> = d
            .arcs
            .iter()
            .map(|a| CrookedPlaneDesc::right(rw.compose(&a.g).compose(&jw.inverse()), a.line.moved_by(&jw)))
            .collect();
        for a in 0..planes.len() {
            for b in a + 1..planes.len() {
                if line_position(&planes[a].line, &planes[b].line) != LinePosition::Separated {
                    return fail(format!("arcs {a} and {b} of tile {:?} have meeting closures", w.letters()));
                }
                let rep_ab = disjoint_crooked(&planes[a], &planes[b])?;
                if !rep_ab.verdict.is_disjoint() {
                    return fail(format!(
                        "planes of arcs {a} and {b} in tile {:?} meet (score {:.3e})",
                        w.letters(),
                        rep_ab.verdict.score()
                    ));
                }
                k = k.min(-rep_ab.verdict.score());
                checked += 1;
            }
        }
    }
    if checked == 0 {
        return fail("no arc pairs to check".into());
    }
    Ok(DomainVerdict::Verified { k, pairs_checked: checked })
}

/// Whether `x` lies in the closed region outside every open half-space of the tile.
pub fn in_closed_domain(d: &DomainData, x: &Isometry) -> Result<bool, SchottkyError> {
    for h in d.half_spaces()? {
        if halfspace_side(&h, x)? == HalfSide::Inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy ping-pong: while `x` is inside the half-space of arc `l_i` apply `g_i`, inside `l_i'`
/// apply `g_i^-1`. Returns `w` with `w . x` in the closed domain, or `None` after `max_steps`.
pub fn greedy_return(
    rep: &RepPair,
    d: &DomainData,
    x: &Isometry,
    max_steps: usize,
) -> Result<Option<Word>, SchottkyError> {
    let hs = d.half_spaces()?;
    let mut y = *x;
    let mut letters: Vec<i32> = Vec::new();
    for _ in 0..=max_steps {
        let mut hit = None;
        for (a, h) in hs.iter().enumerate() {
            if halfspace_side(h, &y)? == HalfSide::Inside {
                hit = Some(a);
                break;
            }
        }
        let Some(a) = hit else {
            letters.reverse();
            return Ok(Some(Word { letters }));
        };
        if letters.len() == max_steps {
            break;
        }
        let letter = d
            .pairing
            .iter()
            .enumerate()
            .find_map(|(i, &(p, q))| {
                if p == a {
                    Some(i as i32 + 1)
                } else if q == a {
                    Some(-(i as i32 + 1))
                } else {
                    None
                }
            })
            .ok_or_else(|| SchottkyError::Precondition(format!("arc {a} is not paired")))?;
        y = rep.act(&Word { letters: vec![letter] }, &y)?;
        letters.push(letter);
    }
    Ok(None)
}

/// Uniform point of AdS³ with entries in `[-bound, bound]`, by rejection on `d = (1 + bc) / a`.
pub fn sample_window_point<R: Rng>(rng: &mut R, bound: f64) -> Isometry {
    loop {
        let a: f64 = rng.gen_range(-bound..=bound);
        let b: f64 = rng.gen_range(-bound..=bound);
        let c: f64 = rng.gen_range(-bound..=bound);
        if a.abs() < 1e-6 {
            continue;
        }
        let d = (1.0 + b * c) / a;
        if d.abs() <= bound {
            if let Ok(g) = Isometry::from_entries(a, b, c, d) {
                return g;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// obstructions

/// Embedded collar half-width `asinh(1 / sinh(D/2))` around a closed geodesic of length `D`.
pub fn collar_width(d: f64) -> f64 {
    (1.0 / (d / 2.0).sinh()).asinh()
}

/// Root of `collar_width(D) = D/2`, found by bisection.
pub fn collar_threshold() -> f64 {
    let (mut lo, mut hi) = (1e-6, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if collar_width(mid) > mid / 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Half-length of the arc through the axis of a translation of length `lambda` on which the
/// displacement is at most 1, measured perpendicular to the axis: `sinh(1/2) = sinh(lambda/2) cosh(r)`.
pub fn short_displacement_radius(lambda: f64) -> f64 {
    (0.5f64.sinh() / (lambda / 2.0).sinh()).max(1.0).acosh()
}

/// Radius of the ball moved at most 1 by a rotation of angle `theta`: `sinh(1/2) = sinh(r) sin(theta/2)`.
pub fn rotation_ball_radius(theta: f64) -> f64 {
    (0.5f64.sinh() / (theta / 2.0).sin()).asinh()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Parabolics sought in both images among words up to `maxlen`.
    NotCc { maxlen: usize },
    /// `boundary` is the word whose j-image is the single boundary curve of the convex core.
    OneBoundary { boundary: Word },
    Elliptic { word: Word },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certificate {
    Certified { reason: String, conditional: bool },
    NotApplicable { diagnostic: String },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::Certified { .. })
    }
}

fn first_parabolic(g: &[Isometry], words: &[Word]) -> Option<Word> {
    words
        .iter()
        .find(|w| {
            let mut x = Isometry::IDENTITY;
            for &l in w.letters() {
                let k = l.unsigned_abs() as usize - 1;
                x = x.compose(&if l > 0 { g[k] } else { g[k].inverse() });
            }
            matches!(classify(&x), Classification::Parabolic { .. })
        })
        .cloned()
}

pub fn certify_no_crooked_fd(rep: &RepPair, kind: &CertificateKind) -> Result<Certificate, SchottkyError> {
    let na = |s: String| Ok(Certificate::NotApplicable { diagnostic: s });
    match kind {
        CertificateKind::NotCc { maxlen } => {
            let words = reduced_words(rep.r, *maxlen);
            match (first_parabolic(&rep.j, &words), first_parabolic(&rep.rho, &words)) {
                (Some(a), Some(b)) => Ok(Certificate::Certified {
                    reason: format!(
                        "j({:?}) and rho({:?}) are parabolic; valid if neither representation is convex cocompact",
                        a.letters(),
                        b.letters()
                    ),
                    conditional: true,
                }),
                (a, b) => na(format!(
                    "no parabolic found up to length {maxlen} (j: {}, rho: {})",
                    a.is_some(),
                    b.is_some()
                )),
            }
        }
        CertificateKind::OneBoundary { boundary } => {
            if !rep.rho_trivial(PAIRING_TOL) {
                return na("the boundary obstruction needs the trivial rho".into());
            }
            let (jb, _) = evaluate(rep, boundary)?;
            let d = translation_length(&jb);
            if d <= MIN_LENGTH {
                return na("boundary word is not hyperbolic under j".into());
            }
            let psi = collar_width(d);
            if psi > d / 2.0 {
                Ok(Certificate::Certified {
                    reason: format!("collar width {psi:.6} exceeds D/2 = {:.6} (D = {d:.6})", d / 2.0),
                    conditional: false,
                })
            } else {
                na(format!("collar width {psi:.6} does not exceed D/2 = {:.6}", d / 2.0))
            }
        }
        CertificateKind::Elliptic { word } => {
            let (jw, rw) = evaluate(rep, word)?;
            let Some(theta) = rotation_angle(&rw) else {
                return na("rho(w) is not elliptic".into());
            };
            let lambda = translation_length(&jw);
            if lambda <= MIN_LENGTH {
                return na("j(w) is not hyperbolic".into());
            }
            let seg = short_displacement_radius(lambda);
            let ball = rotation_ball_radius(theta);
            if seg > ball {
                Ok(Certificate::Certified {
                    reason: format!(
                        "segment half-length {seg:.6} for lambda {lambda:.6} exceeds ball radius {ball:.6} for angle {theta:.6}"
                    ),
                    conditional: false,
                })
            } else {
                na(format!("segment half-length {seg:.6} does not exceed ball radius {ball:.6}"))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// constructions

/// `[A, B]` trace for equal-length translations along perpendicular axes, `x = tr A`.
pub fn perpendicular_commutator_trace(x: f64) -> f64 {
    2.0 * x * x - x.powi(4) / 4.0 - 2.0
}

/// Translations of equal length along the imaginary axis and the unit circle, with `lambda([A,B]) = D`.
pub fn make_one_holed_torus(d: f64) -> Result<[Isometry; 2], SchottkyError> {
    if !(d > 0.0) {
        return Err(SchottkyError::Precondition("D must be positive".into()));
    }
    let target = -2.0 * (d / 2.0).cosh();
    let tr = |t: f64| perpendicular_commutator_trace(2.0 * (t / 2.0).cosh());
    let (mut lo, mut hi) = (0.0, 1.0);
    while tr(hi) > target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tr(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let a = Isometry::axial(t);
    let b = Isometry::rotation_i(PI / 2.0).conjugate(&a);
    Ok([a, b])
}

/// Angle on the unit circle of the disk model, via the Cayley map.
fn disk_angle(p: &BoundaryPoint) -> f64 {
    let v = p.vector();
    (-2.0 * v[1].atan2(v[0])).rem_euclid(2.0 * PI)
}

fn angular_offset(a: f64, center: f64) -> f64 {
    (a - center + PI).rem_euclid(2.0 * PI) - PI
}

/// Hyperbolic generators with pairwise disjoint ping-pong half-planes, returned as
/// `(generators, [l_1, l_1', ...])` with `j_k l_k = l_k'` flipping sides.
pub fn pingpong_generators(lengths: &[f64]) -> Result<(Vec<Isometry>, Vec<GeodesicLine>), SchottkyError> {
    let r = lengths.len();
    if r == 0 || lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(SchottkyError::Precondition("lengths must be positive".into()));
    }
    let slot = 2.0 * PI / r as f64;
    let mut gens = Vec::with_capacity(r);
    let mut lines = Vec::with_capacity(2 * r);
    for (k, &lambda) in lengths.iter().enumerate() {
        let (lo, hi) = ((-lambda / 2.0).exp(), (lambda / 2.0).exp());
        let base = [
            GeodesicLine::reals(-lo, lo)?.oriented_toward(&PlanePoint::new(0.0, lo / 2.0)),
            GeodesicLine::reals(hi, -hi)?.oriented_toward(&PlanePoint::new(0.0, 2.0 * hi)),
        ];
        let mut delta = 0.0;
        let placed = loop {
            let squeeze = Isometry::hyperbolic(BoundaryPoint::real(1.0), BoundaryPoint::real(-1.0), delta);
            let rot = Isometry::rotation_i(k as f64 * slot);
            let m = rot.compose(&squeeze);
            let center = disk_angle(&rot.apply(&BoundaryPoint::real(1.0)));
            let moved = base.map(|l| l.moved_by(&m));
            let fits = moved
                .iter()
                .flat_map(|l| l.endpoints())
                .all(|p| angular_offset(disk_angle(&p), center).abs() < 0.4 * slot);
            if fits || r == 1 {
                break Some((m, moved));
            }
            if delta > 60.0 {
                break None;
            }
            delta = if delta == 0.0 { 0.5 } else { delta * 1.5 };
        };
        let (m, moved) = placed.ok_or(SchottkyError::PingPongFailed)?;
        gens.push(m.conjugate(&Isometry::axial(lambda)));
        lines.extend(moved);
    }
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let apart = line_position(&lines[a], &lines[b]) == LinePosition::Separated
                && oriented_away(&lines[a], &lines[b]).unwrap_or(false);
            if !apart {
                return Err(SchottkyError::PingPongFailed);
            }
        }
    }
    Ok((gens, lines))
}

/// j plays ping-pong with the given translation lengths; rho rotates about `i` by the given angles.
pub fn make_pingpong_pair(lengths: &[f64], angles: &[f64]) -> Result<RepPair, SchottkyError> {
    if lengths.len() != angles.len() {
        return Err(SchottkyError::Precondition("one angle per length".into()));
    }
    if angles.iter().any(|a| !(*a > -PI && *a <= PI)) {
        return Err(SchottkyError::Precondition("angles must lie in (-pi, pi]".into()));
    }
    let (j, _) = pingpong_generators(lengths)?;
    RepPair::new(j, angles.iter().map(|&a| Isometry::rotation_i(a)).collect())
}

/// The rank-one example: `l = (-1/2, 1/2)` toward 0, `l' = (2, -2)` toward infinity,
/// `j = diag(2, 1/2)`, `g = diag(e^(s/2), e^(-s/2))`, `g' = g^-1`.
pub fn rank_one_example(s: f64) -> Result<(RepPair, DomainData), SchottkyError> {
    let l = GeodesicLine::reals(-0.5, 0.5)?.oriented_toward(&PlanePoint::new(0.0, 0.1));
    let lp = GeodesicLine::reals(2.0, -2.0)?.oriented_toward(&PlanePoint::new(0.0, 10.0));
    let g = Isometry::axial(s);
    build_schottky(&[l, lp], &[Isometry::diag(2.0)], &[g, g.inverse()])
}
