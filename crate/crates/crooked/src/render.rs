//! Triangulated crooked planes in affine charts of projective space, with OBJ and SVG output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ads::{crooked_contains_tol, CrookedPlaneDesc, Side};
use crate::hyp2::{Isometry, Mat2};
use crate::transition::{embed_big_i, ProjPoint};

/// Chart coordinates beyond this are clipped.
pub const CLIP: f64 = 20.0;
/// Membership tolerance for rendered vertices.
pub const VERTEX_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("resolution must be at least 2 (got {0})")]
    Resolution(usize),
    #[error("every vertex fell outside the chart window")]
    ChartOverflow,
    #[error("slice plane misses the mesh")]
    EmptySlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Y4,
    Y1,
}

impl Chart {
    pub fn coords(&self, p: &ProjPoint) -> Option<[f64; 3]> {
        match self {
            Chart::Y4 => p.chart_y4(),
            Chart::Y1 => p.chart_y1(),
        }
    }

    pub fn inverse(&self, c: &[f64; 3]) -> ProjPoint {
        match self {
            Chart::Y4 => ProjPoint::new([c[0], c[1], c[2], 1.0]),
            Chart::Y1 => ProjPoint::new([1.0, c[0], c[1], c[2]]),
        }
    }
}

impl std::str::FromStr for Chart {
    type Err = String;
    fn from_str(s: &str) -> Result<Chart, String> {
        match s.to_ascii_lowercase().as_str() {
            "y4" => Ok(Chart::Y4),
            "y1" => Ok(Chart::Y1),
            _ => Err(format!("unknown chart {s}")),
        }
    }
}

/// Element of AdS³ with homogeneous coordinates `y`, when inside the quadric.
pub fn point_to_isometry(p: &ProjPoint) -> Option<Isometry> {
    let [y1, y2, y3, y4] = p.y;
    let m: Mat2 = [[y1 + y4, y2 - y3], [y2 + y3, -y1 + y4]];
    Isometry::new(m).ok()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub name: &'static str,
    pub faces: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub chart: Chart,
    pub vertices: Vec<[f64; 3]>,
    /// Parameter-space samples the vertices came from, for verification.
    pub sources: Vec<Isometry>,
    pub groups: Vec<Group>,
    /// Stem boundary curves.
    pub polylines: Vec<Vec<usize>>,
    /// Grid points dropped by the chart window.
    pub clipped: usize,
}

/// Local stem point `[0 : sin(psi) sin(sigma) : cos(psi) sin(sigma) : cos(sigma)]` for the
/// imaginary axis; `|psi| <= pi/4`, the boundary being `|psi| = pi/4`.
pub fn local_stem(psi: f64, sigma: f64) -> Isometry {
    let y = [0.0, psi.sin() * sigma.sin(), psi.cos() * sigma.sin(), sigma.cos()];
    point_to_isometry(&ProjPoint::new(y)).expect("stem points lie inside the quadric")
}

/// Local wing point: `[[cos phi, sin phi], [0, tau cos phi]]` (plus) or its transpose (minus),
/// `0 < tau <= 1`; the Right plane uses the inverse.
pub fn local_wing(plus: bool, side: Side, tau: f64, phi: f64) -> Isometry {
    let (c, s) = (phi.cos(), phi.sin());
    let m = if plus { [[c, s], [0.0, tau * c]] } else { [[tau * c, 0.0], [s, c]] };
    let g = Isometry::new(m).expect("positive determinant");
    match side {
        Side::Left => g,
        Side::Right => g.inverse(),
    }
}

fn offset(k: usize, res: usize) -> f64 {
    (k as f64 + 0.5) / res as f64
}

/// Triangulated stem and wings of `p`, each on a `res × res` parameter grid, mapped to the chart.
pub fn render_crooked(p: &CrookedPlaneDesc, chart: Chart, res: usize) -> Result<Mesh, RenderError> {
    if res < 2 {
        return Err(RenderError::Resolution(res));
    }
    let n = p.line.frame();
    let place = |k: &Isometry| p.g.compose(&n).compose(k).compose(&n.inverse());
    type Param = Box<dyn Fn(usize, usize) -> Isometry>;
    let side = p.side;
    let strata: [(&'static str, Param); 3] = [
        (
            "stem",
            Box::new(move |i, j| {
                let psi = -FRAC_PI_4 + FRAC_PI_2 * i as f64 / (res - 1) as f64;
                local_stem(psi, PI * offset(j, res))
            }),
        ),
        (
            "wing_plus",
            Box::new(move |i, j| local_wing(true, side, (i + 1) as f64 / res as f64, -FRAC_PI_2 + PI * offset(j, res))),
        ),
        (
            "wing_minus",
            Box::new(move |i, j| local_wing(false, side, (i + 1) as f64 / res as f64, -FRAC_PI_2 + PI * offset(j, res))),
        ),
    ];
    let mut mesh = Mesh { chart, vertices: Vec::new(), sources: Vec::new(), groups: Vec::new(), polylines: Vec::new(), clipped: 0 };
    for (name, param) in strata.iter() {
        let mut index = vec![vec![None; res]; res];
        for (i, row) in index.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let h = place(&param(i, j));
                match chart.coords(&embed_big_i(&h)).filter(|c| c.iter().all(|v| v.abs() <= CLIP)) {
                    Some(c) => {
                        *slot = Some(mesh.vertices.len());
                        mesh.vertices.push(c);
                        mesh.sources.push(h);
                    }
                    None => mesh.clipped += 1,
                }
            }
        }
        let mut faces = Vec::new();
        for i in 0..res - 1 {
            for j in 0..res - 1 {
                let q = [index[i][j], index[i + 1][j], index[i + 1][j + 1], index[i][j + 1]];
                if let [Some(a), Some(b), Some(c), Some(d)] = q {
                    faces.push([a, b, c]);
                    faces.push([a, c, d]);
                }
            }
        }
        if *name == "stem" {
            for i in [0, res - 1] {
                let line: Vec<usize> = index[i].iter().flatten().copied().collect();
                if line.len() >= 2 {
                    mesh.polylines.push(line);
                }
            }
        }
        mesh.groups.push(Group { name, faces });
    }
    if mesh.vertices.is_empty() {
        return Err(RenderError::ChartOverflow);
    }
    Ok(mesh)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshCheck {
    pub checked: usize,
    pub membership_failures: usize,
    pub quadric_failures: usize,
}

/// Maps every vertex back through the chart and tests the quadric and membership in `p`.
pub fn verify_mesh(mesh: &Mesh, p: &CrookedPlaneDesc) -> MeshCheck {
    let mut out = MeshCheck { checked: 0, membership_failures: 0, quadric_failures: 0 };
    for c in &mesh.vertices {
        let y = mesh.chart.inverse(c);
        out.checked += 1;
        if y.quadric() >= 0.0 {
            out.quadric_failures += 1;
            continue;
        }
        match point_to_isometry(&y) {
            Some(h) if crooked_contains_tol(p, &h, VERTEX_TOL) => {}
            _ => out.membership_failures += 1,
        }
    }
    out
}

pub fn to_obj(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# crooked plane, chart {:?}, {} clipped", mesh.chart, mesh.clipped);
    for v in &mesh.vertices {
        let _ = writeln!(s, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2]);
    }
    for g in &mesh.groups {
        let _ = writeln!(s, "o {}\ng {}", g.name, g.name);
        for f in &g.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
    }
    if !mesh.polylines.is_empty() {
        let _ = writeln!(s, "g stem_boundary");
        for l in &mesh.polylines {
            let idx: Vec<String> = l.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
        }
    }
    s
}

/// Parsed OBJ: vertices, faces per group, polylines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjData {
    pub vertices: Vec<[f64; 3]>,
    pub groups: Vec<(String, Vec<[usize; 3]>)>,
    pub polylines: Vec<Vec<usize>>,
}

pub fn parse_obj(text: &str) -> Result<ObjData, String> {
    let mut out = ObjData::default();
    for (n, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        let bad = || format!("line {}: {line}", n + 1);
        let index = |tok: &str, count: usize| -> Result<usize, String> {
            let i: usize = tok.parse().map_err(|_| bad())?;
            if i == 0 || i > count {
                return Err(bad());
            }
            Ok(i - 1)
        };
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it.map(|t| t.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
                if c.len() != 3 {
                    return Err(bad());
                }
                out.vertices.push([c[0], c[1], c[2]]);
            }
            Some("g") => out.groups.push((it.next().ok_or_else(bad)?.to_string(), Vec::new())),
            Some("f") => {
                let f: Vec<usize> = it.map(|t| index(t, out.vertices.len())).collect::<Result<_, _>>()?;
                let g = out.groups.last_mut().ok_or_else(bad)?;
                if f.len() != 3 {
                    return Err(bad());
                }
                g.1.push([f[0], f[1], f[2]]);
            }
            Some("l") => {
                let l: Vec<usize> = it.map(|t| index(t, out.vertices.len())).collect::<Result<_, _>>()?;
                out.polylines.push(l);
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Segments where the triangles cross the plane `c[2] = z0`, per group.
pub fn slice(mesh: &Mesh, z0: f64) -> Vec<(&'static str, [[f64; 2]; 2])> {
    let mut out = Vec::new();
    for g in &mesh.groups {
        for f in &g.faces {
            let p: Vec<[f64; 3]> = f.iter().map(|&i| mesh.vertices[i]).collect();
            let mut hits = Vec::new();
            for k in 0..3 {
                let (a, b) = (p[k], p[(k + 1) % 3]);
                let (da, db) = (a[2] - z0, b[2] - z0);
                if (da < 0.0) != (db < 0.0) {
                    let s = da / (da - db);
                    hits.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
                }
            }
            if hits.len() == 2 {
                out.push((g.name, [hits[0], hits[1]]));
            }
        }
    }
    out
}

/// Slice height for a mesh: 0 when that plane meets it, else midway between the median vertex
/// height and the next distinct one (grid levels themselves produce no crossings).
pub fn default_slice_height(mesh: &Mesh) -> f64 {
    if !slice(mesh, 0.0).is_empty() {
        return 0.0;
    }
    let mut zs: Vec<f64> = mesh.vertices.iter().map(|v| v[2]).collect();
    zs.sort_by(f64::total_cmp);
    let Some(&m) = zs.get(zs.len() / 2) else { return 0.0 };
    match zs.iter().find(|&&z| z > m + 1e-9) {
        Some(&n) => 0.5 * (m + n),
        None => m,
    }
}

pub fn to_svg(mesh: &Mesh, z0: f64) -> Result<String, RenderError> {
    let segs = slice(mesh, z0);
    if segs.is_empty() {
        return Err(RenderError::EmptySlice);
    }
    let size = 600.0;
    let scale = size / (2.0 * CLIP);
    let map = |p: [f64; 2]| ((p[0] + CLIP) * scale, (CLIP - p[1]) * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (name, color) in [("stem", "#c0392b"), ("wing_plus", "#2c7fb8"), ("wing_minus", "#41ab5d")] {
        let _ = writeln!(s, r#"<g id="{name}" stroke="{color}" stroke-width="1.5" fill="none">"#);
        for (_, [a, b]) in segs.iter().filter(|(n, _)| *n == name) {
            let ((x1, y1), (x2, y2)) = (map(*a), map(*b));
            let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp2::{BoundaryPoint, GeodesicLine};

    fn unit_circle() -> GeodesicLine {
        GeodesicLine::reals(-1.0, 1.0).unwrap()
    }

    #[test]
    fn vertex_count_at_minimal_resolution() {
        for chart in [Chart::Y4, Chart::Y1] {
            let m = render_crooked(&CrookedPlaneDesc::left(Isometry::IDENTITY, unit_circle()), chart, 2).unwrap();
            assert_eq!(m.vertices.len() + m.clipped, 3 * 2 * 2);
        }
        assert_eq!(
            render_crooked(&CrookedPlaneDesc::left(Isometry::IDENTITY, unit_circle()), Chart::Y4, 1),
            Err(RenderError::Resolution(1))
        );
    }

    #[test]
    fn vertices_are_members() {
        let g = Isometry::from_entries(1.2, 0.3, -0.4, 0.733).unwrap();
        for side in [Side::Left, Side::Right] {
            for chart in [Chart::Y4, Chart::Y1] {
                let p = CrookedPlaneDesc::new(side, g, unit_circle());
                let m = render_crooked(&p, chart, 24).unwrap();
                let c = verify_mesh(&m, &p);
                assert!(c.checked > 0);
                assert_eq!((c.membership_failures, c.quadric_failures), (0, 0), "{side:?} {chart:?}");
            }
        }
    }

    #[test]
    fn stem_touches_boundary_at_two_points() {
        // the stem boundary curves approach the quadric where y4 -> 0, i.e. toward the Y4 window edge
        let p = CrookedPlaneDesc::left(Isometry::IDENTITY, unit_circle());
        let m = render_crooked(&p, Chart::Y1, 200).unwrap();
        let mut closest = [f64::INFINITY; 2];
        for (k, l) in m.polylines.iter().enumerate() {
            for &i in l {
                let y = Chart::Y1.inverse(&m.vertices[i]);
                closest[k] = closest[k].min(-y.quadric());
            }
        }
        assert!(closest.iter().all(|&q| q < 1e-3), "{closest:?}");
        let tangency: Vec<ProjPoint> = m
            .polylines
            .iter()
            .map(|l| {
                let i = *l.iter().min_by(|&&a, &&b| {
                    let qa = -Chart::Y1.inverse(&m.vertices[a]).quadric();
                    let qb = -Chart::Y1.inverse(&m.vertices[b]).quadric();
                    qa.total_cmp(&qb)
                }).unwrap();
                Chart::Y1.inverse(&m.vertices[i])
            })
            .collect();
        assert!(tangency[0].distance(&tangency[1]) > 0.5);
        assert!(tangency.iter().all(|t| t.y[3].abs() < 0.05));
    }

    #[test]
    fn left_and_right_share_the_stem() {
        let l = unit_circle();
        let a = render_crooked(&CrookedPlaneDesc::left(Isometry::IDENTITY, l), Chart::Y4, 8).unwrap();
        let b = render_crooked(&CrookedPlaneDesc::right(Isometry::IDENTITY, l), Chart::Y4, 8).unwrap();
        let stem = |m: &Mesh| m.groups[0].faces.iter().map(|f| f.map(|i| m.vertices[i])).collect::<Vec<_>>();
        assert_eq!(stem(&a), stem(&b));
        assert_ne!(a.vertices, b.vertices);
    }

    #[test]
    fn obj_round_trip() {
        let p = CrookedPlaneDesc::left(Isometry::IDENTITY, unit_circle());
        let m = render_crooked(&p, Chart::Y4, 10).unwrap();
        let obj = parse_obj(&to_obj(&m)).unwrap();
        assert_eq!(obj.vertices.len(), m.vertices.len());
        let names: Vec<&str> = obj.groups.iter().map(|g| g.0.as_str()).collect();
        assert_eq!(names, ["stem", "wing_plus", "wing_minus", "stem_boundary"]);
        for (g, og) in m.groups.iter().zip(&obj.groups) {
            assert_eq!(g.faces, og.1);
        }
        assert_eq!(obj.polylines, m.polylines);
        for (a, b) in obj.vertices.iter().zip(&m.vertices) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-11);
            }
        }
        // every interior grid edge of a stratum is shared by two triangles
        for g in &m.groups {
            let mut count = std::collections::HashMap::new();
            for f in &g.faces {
                for k in 0..3 {
                    let e = (f[k].min(f[(k + 1) % 3]), f[k].max(f[(k + 1) % 3]));
                    *count.entry(e).or_insert(0) += 1;
                }
            }
            assert!(count.values().all(|&c| c <= 2));
        }
    }

    #[test]
    fn svg_slice() {
        let p = CrookedPlaneDesc::left(Isometry::IDENTITY, unit_circle());
        let m = render_crooked(&p, Chart::Y4, 30).unwrap();
        let svg = to_svg(&m, 0.3).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<line"));
        assert_eq!(to_svg(&m, 1e6), Err(RenderError::EmptySlice));
    }

    #[test]
    fn default_height_hits_the_mesh() {
        let axis = GeodesicLine::new(BoundaryPoint::real(0.0), BoundaryPoint::infinity()).unwrap();
        let p = CrookedPlaneDesc::left(Isometry::IDENTITY, axis);
        for chart in [Chart::Y4, Chart::Y1] {
            let m = render_crooked(&p, chart, 8).unwrap();
            assert!(!slice(&m, default_slice_height(&m)).is_empty(), "{chart:?}");
        }
        // this plane stays away from z = 0 in the Y1 chart
        let m = render_crooked(&p, Chart::Y1, 8).unwrap();
        assert!(slice(&m, 0.0).is_empty());
    }
}
