//! Random configurations and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use crooked::ads::{halfspace_side, sample_crooked, CrookedPlaneDesc, HalfSide, HalfSpaceDesc};
use crooked::hyp2::{BoundaryPoint, GeodesicLine, Isometry, Orientation};
use crooked::mink::{mink_halfspace_side, sample_mink_crooked, MinkCrookedDesc};
use rand::Rng;

pub fn random_iso<R: Rng>(rng: &mut R, spread: f64) -> Isometry {
    loop {
        let m = [
            [rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)],
            [rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)],
        ];
        if let Ok(g) = Isometry::new(m) {
            // keep conditioning moderate so sampled membership stays inside tolerance
            if g.matrix().iter().flatten().map(|x| x * x).sum::<f64>() < 30.0 {
                return g;
            }
        }
    }
}

/// Line with endpoints at angles at least 0.1 apart on the boundary circle.
pub fn random_line<R: Rng>(rng: &mut R) -> GeodesicLine {
    loop {
        let (x, y) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let d = (x - y).abs();
        if d > 0.1 && d < PI - 0.1 {
            return GeodesicLine::new(BoundaryPoint::from_angle(x), BoundaryPoint::from_angle(y)).unwrap();
        }
    }
}

pub fn random_orientation<R: Rng>(rng: &mut R) -> Orientation {
    if rng.gen() {
        Orientation::PositiveLeft
    } else {
        Orientation::PositiveRight
    }
}

/// Two lines with disjoint closures: four distinct boundary angles, unlinked.
pub fn separated_lines<R: Rng>(rng: &mut R) -> (GeodesicLine, GeodesicLine) {
    loop {
        let mut a: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        a.sort_by(f64::total_cmp);
        let gaps = [a[1] - a[0], a[2] - a[1], a[3] - a[2], 2.0 * PI + a[0] - a[3]];
        if gaps.iter().all(|&g| g > 0.15) {
            let bp = |t: f64| BoundaryPoint::from_angle(t / 2.0);
            let l = GeodesicLine::new(bp(a[0]), bp(a[1])).unwrap();
            let lp = GeodesicLine::new(bp(a[2]), bp(a[3])).unwrap();
            return (l, lp);
        }
    }
}

/// Translation of length `len` along the perpendicular to `l` at arclength `off`, toward its
/// positive side: an element of the open stem quadrant, built from the definition.
pub fn stem_quadrant_element(l: &GeodesicLine, off: f64, len: f64) -> Isometry {
    let n = l.frame();
    let toward = match l.orient.expect("oriented line") {
        Orientation::PositiveLeft => -1.0,
        Orientation::PositiveRight => 1.0,
    };
    let e = off.exp();
    let k = Isometry::hyperbolic(BoundaryPoint::real(toward * e), BoundaryPoint::real(-toward * e), len);
    n.compose(&k).compose(&n.inverse())
}

/// Outcome of sampling one plane against the half-spaces of another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideCounts {
    pub inside: usize,
    pub outside: usize,
    pub on: usize,
}

impl SideCounts {
    /// A connected surface with samples strictly on both sides crosses the other plane.
    pub fn meets(&self) -> bool {
        (self.inside > 0 && self.outside > 0) || self.on > 0
    }
}

/// Samples `n` points of `p` and sorts them by the sides of `pp`.
pub fn ads_sample_sides<R: Rng>(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc, n: usize, rng: &mut R) -> SideCounts {
    let hs = HalfSpaceDesc::new(CrookedPlaneDesc {
        line: pp.line.with_orientation(Orientation::PositiveLeft),
        ..*pp
    })
    .unwrap();
    let mut c = SideCounts { inside: 0, outside: 0, on: 0 };
    for h in sample_crooked(p, n, rng) {
        match halfspace_side(&hs, &h).unwrap() {
            HalfSide::Inside => c.inside += 1,
            HalfSide::Outside => c.outside += 1,
            HalfSide::OnPlane => c.on += 1,
        }
    }
    c
}

pub fn mink_sample_sides<R: Rng>(p: &MinkCrookedDesc, pp: &MinkCrookedDesc, n: usize, rng: &mut R) -> SideCounts {
    let opp = MinkCrookedDesc { line: pp.line.with_orientation(Orientation::PositiveLeft), ..*pp };
    let mut c = SideCounts { inside: 0, outside: 0, on: 0 };
    for x in sample_mink_crooked(p, n, rng) {
        match mink_halfspace_side(&opp, &x).unwrap() {
            HalfSide::Inside => c.inside += 1,
            HalfSide::Outside => c.outside += 1,
            HalfSide::OnPlane => c.on += 1,
        }
    }
    c
}

/// Sampling oracle for a plane intersection: `n` points of each plane against the other's sides.
pub fn ads_planes_meet<R: Rng>(p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc, n: usize, rng: &mut R) -> bool {
    ads_sample_sides(p, pp, n, rng).meets() || ads_sample_sides(pp, p, n, rng).meets()
}

pub fn mink_planes_meet<R: Rng>(p: &MinkCrookedDesc, pp: &MinkCrookedDesc, n: usize, rng: &mut R) -> bool {
    mink_sample_sides(p, pp, n, rng).meets() || mink_sample_sides(pp, p, n, rng).meets()
}

/// `log(|det(g xi, g' xi')|^2 / |det(xi, xi')|^2)` straight from unit representatives.
pub fn f_oracle(g: &Isometry, gp: &Isometry, xi: [f64; 2], xip: [f64; 2]) -> f64 {
    let mv = |m: [[f64; 2]; 2], v: [f64; 2]| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let det = |u: [f64; 2], w: [f64; 2]| u[0] * w[1] - u[1] * w[0];
    let (u, w) = (mv(g.matrix(), xi), mv(gp.matrix(), xip));
    (det(u, w).powi(2) / det(xi, xip).powi(2)).ln()
}

/// `min(|A - B|, |A + B|)` entrywise max norm.
pub fn proj_err(a: &Isometry, b: &Isometry) -> f64 {
    let (a, b) = (a.matrix(), b.matrix());
    let mut minus: f64 = 0.0;
    let mut plus: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            minus = minus.max((a[i][j] - b[i][j]).abs());
            plus = plus.max((a[i][j] + b[i][j]).abs());
        }
    }
    minus.min(plus)
}
