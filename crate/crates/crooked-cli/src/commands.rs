//! Subcommand bodies. Each returns the text for stdout and whether the tested criterion held.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use crooked::ads::{
    crooked_contains_tol, disjoint_crooked, disjoint_halfspaces, intersect_witness, sq_criterion, sq_decompose,
    AdsError, CrookedPlaneDesc,
};
use crooked::hyp2::{GeodesicLine, Isometry};
use crooked::mink::{mink_disjoint, mink_disjoint_margin};
use crooked::render::{default_slice_height, render_crooked, to_obj, to_svg, verify_mesh, Chart};
use crooked::scene::{Scene, SceneObject};
use crooked::schottky::{
    build_schottky, certify_no_crooked_fd, verify_crooked_domain, Certificate, CertificateKind, SchottkyError, Word,
};
use crooked::transition::{convergence_csv, convergence_table, strip_condition_check, StripVerdict};
use serde_json::{json, Value};

/// Tolerance used to accept a witness point on both planes.
const WITNESS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, Default)]
pub struct Opts {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub positive: bool,
}

impl Outcome {
    fn json(v: Value, positive: bool) -> Outcome {
        let mut stdout = serde_json::to_string_pretty(&v).expect("json values serialize");
        stdout.push('\n');
        Outcome { stdout, positive }
    }
}

pub enum Kind {
    OneBoundary(Vec<i32>),
    Elliptic(Vec<i32>),
    NotCc(usize),
}

fn load(path: &Path) -> Result<Scene> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scene::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pairs_of(idx: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            out.push((i, j));
        }
    }
    out
}

fn crooked_pair(i: usize, j: usize, p: &CrookedPlaneDesc, pp: &CrookedPlaneDesc, tol: f64) -> Result<(Value, bool)> {
    let report = disjoint_crooked(p, pp).with_context(|| format!("pair ({i}, {j})"))?;
    let disjoint = report.verdict.is_disjoint();
    let score = report.verdict.score();
    let sq = match sq_criterion(p, pp) {
        Ok(b) => json!({ "holds": b, "agrees": b == disjoint }),
        Err(e) => json!({ "holds": null, "note": e.to_string() }),
    };
    let witness = if disjoint {
        Value::Null
    } else {
        match intersect_witness(p, pp) {
            Ok(h) => json!({
                "point": h,
                "on_first": crooked_contains_tol(p, &h, WITNESS_TOL),
                "on_second": crooked_contains_tol(pp, &h, WITNESS_TOL),
            }),
            Err(e) => json!({ "point": null, "note": e.to_string() }),
        }
    };
    let v = json!({
        "pair": [i, j],
        "kind": "crooked",
        "side": p.side,
        "disjoint": disjoint,
        "margin": score,
        "values": report.values,
        "marginal": report.marginal || score.abs() <= tol,
        "stem_quadrant_check": sq,
        "witness": witness,
    });
    Ok((v, disjoint))
}

pub fn check_disjoint(path: &Path, pair: Option<(usize, usize)>, opts: Opts) -> Result<Outcome> {
    let scene = load(path)?;
    let tol = opts.tol.unwrap_or(scene.metadata.tol);
    let crooked: Vec<usize> = scene.crooked_all().iter().map(|&(i, _)| i).collect();
    let halfspaces: Vec<usize> = scene
        .objects
        .iter()
        .enumerate()
        .filter_map(|(i, o)| matches!(o, SceneObject::Halfspace(_)).then_some(i))
        .collect();
    let todo = match pair {
        Some(p) => vec![p],
        None => [pairs_of(&crooked), pairs_of(&halfspaces)].concat(),
    };
    if todo.is_empty() {
        bail!("scene has no pair of crooked or halfspace records");
    }
    let mut results = Vec::new();
    let mut all = true;
    for (i, j) in todo {
        let (a, b) = (scene.objects.get(i), scene.objects.get(j));
        let (v, ok) = match (a, b) {
            (Some(SceneObject::Crooked(p)), Some(SceneObject::Crooked(pp))) => crooked_pair(i, j, p, pp, tol)?,
            (Some(SceneObject::Halfspace(h)), Some(SceneObject::Halfspace(hp))) => {
                let d = disjoint_halfspaces(h, hp).with_context(|| format!("pair ({i}, {j})"))?;
                (json!({ "pair": [i, j], "kind": "halfspace", "disjoint": d }), d)
            }
            (None, _) | (_, None) => bail!("pair ({i}, {j}) refers past {} objects", scene.objects.len()),
            _ => bail!("pair ({i}, {j}) needs two crooked or two halfspace records"),
        };
        all &= ok;
        results.push(v);
    }
    Ok(Outcome::json(json!({ "all_disjoint": all, "pairs": results }), all))
}

/// Oriented line carried by a record, if it has one.
fn record_line(o: &SceneObject) -> Option<GeodesicLine> {
    let l = match o {
        SceneObject::Crooked(p) => p.line,
        SceneObject::Halfspace(h) => h.plane.line,
        SceneObject::StemQuadrant(s) => s.line,
        _ => return None,
    };
    l.orient.is_some().then_some(l)
}

fn residual(a: &Isometry, b: &Isometry) -> f64 {
    let (a, b) = (a.matrix(), b.matrix());
    let diff = |s: f64| (0..4).map(|k| (a[k / 2][k % 2] - s * b[k / 2][k % 2]).abs()).fold(0.0, f64::max);
    diff(1.0).min(diff(-1.0))
}

pub fn decompose(path: &Path, element: &[f64], pair: Option<(usize, usize)>) -> Result<Outcome> {
    let scene = load(path)?;
    let [a, b, c, d] = element else {
        bail!("--element needs four entries a,b,c,d");
    };
    let h = Isometry::from_entries(*a, *b, *c, *d).context("--element")?;
    let (i, j) = match pair {
        Some(p) => p,
        None => {
            let with: Vec<usize> = (0..scene.objects.len()).filter(|&k| record_line(&scene.objects[k]).is_some()).collect();
            match with[..] {
                [i, j, ..] => (i, j),
                _ => bail!("scene needs two records with oriented lines"),
            }
        }
    };
    let line = |k: usize| {
        scene
            .objects
            .get(k)
            .and_then(record_line)
            .ok_or_else(|| anyhow!("object {k} has no oriented line"))
    };
    let (l, lp) = (line(i)?, line(j)?);
    match sq_decompose(&h, &l, &lp) {
        Ok(dec) => {
            let err = residual(&dec.q.compose(&dec.qp), &h);
            let v = json!({ "lines": [i, j], "q": dec.q, "q_prime": dec.qp, "tag": dec.tag, "product_error": err });
            Ok(Outcome::json(v, true))
        }
        Err(AdsError::NotInProduct) => {
            let v = json!({ "lines": [i, j], "in_product": false });
            Ok(Outcome::json(v, false))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn schottky_build(path: &Path) -> Result<Outcome> {
    let scene = load(path)?;
    let &(_, input) = scene.schottky_input_all().first().ok_or_else(|| anyhow!("no schottky_input record"))?;
    match build_schottky(&input.half_planes, &input.j, &input.gs) {
        Ok((rep, dom)) => {
            let out = Scene { metadata: scene.metadata, objects: vec![SceneObject::RepPair(rep), SceneObject::DomainData(dom)] };
            let mut stdout = out.to_json();
            stdout.push('\n');
            Ok(Outcome { stdout, positive: true })
        }
        Err(e @ (SchottkyError::PairingFailed(_) | SchottkyError::HalfSpacesOverlap(..))) => {
            Ok(Outcome::json(json!({ "status": "failed", "reason": e.to_string() }), false))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn schottky_verify(path: &Path, radius: usize) -> Result<Outcome> {
    let scene = load(path)?;
    let &(_, rep) = scene.rep_pair_all().first().ok_or_else(|| anyhow!("no rep_pair record"))?;
    let &(_, dom) = scene.domain_data_all().first().ok_or_else(|| anyhow!("no domain_data record"))?;
    let verdict = verify_crooked_domain(rep, dom, radius)?;
    let ok = verdict.is_verified();
    Ok(Outcome::json(json!({ "radius": radius, "result": verdict }), ok))
}

pub fn certify(path: &Path, kind: Kind) -> Result<Outcome> {
    let scene = load(path)?;
    let &(_, rep) = scene.rep_pair_all().first().ok_or_else(|| anyhow!("no rep_pair record"))?;
    let word = |w: Vec<i32>| -> Result<Word> {
        if w.is_empty() {
            bail!("--word is required for this kind");
        }
        Ok(Word::new(w)?)
    };
    let kind = match kind {
        Kind::OneBoundary(w) => CertificateKind::OneBoundary { boundary: word(w)? },
        Kind::Elliptic(w) => CertificateKind::Elliptic { word: word(w)? },
        Kind::NotCc(maxlen) => CertificateKind::NotCc { maxlen },
    };
    let cert = certify_no_crooked_fd(rep, &kind)?;
    let ok = matches!(cert, Certificate::Certified { .. });
    Ok(Outcome::json(json!({ "kind": kind, "certificate": cert }), ok))
}

pub fn mink_check(path: &Path, pair: Option<(usize, usize)>, opts: Opts) -> Result<Outcome> {
    let scene = load(path)?;
    let tol = opts.tol.unwrap_or(scene.metadata.tol);
    let todo = match pair {
        Some(p) => vec![p],
        None => pairs_of(&scene.mink_crooked_all().iter().map(|&(i, _)| i).collect::<Vec<_>>()),
    };
    if todo.is_empty() {
        bail!("scene has no pair of mink_crooked records");
    }
    let mut results = Vec::new();
    let mut all = true;
    for (i, j) in todo {
        let (p, pp) = (scene.mink_crooked(i)?, scene.mink_crooked(j)?);
        if p.side != pp.side {
            bail!("pair ({i}, {j}) mixes left and right planes");
        }
        let d = mink_disjoint(p.side, &p.line, &p.v, &pp.line, &pp.v)?;
        let depth = mink_disjoint_margin(p.side, &p.line, &p.v, &pp.line, &pp.v)?;
        all &= d;
        results.push(json!({
            "pair": [i, j],
            "side": p.side,
            "disjoint": d,
            "depth": depth,
            "marginal": depth.abs() <= tol,
        }));
    }
    Ok(Outcome::json(json!({ "all_disjoint": all, "pairs": results }), all))
}

pub fn transition(path: &Path, t: f64, samples: usize, opts: Opts) -> Result<Outcome> {
    let scene = load(path)?;
    let seed = opts.seed.unwrap_or(scene.metadata.seed);
    let &(_, strip) = scene.strip_data_all().first().ok_or_else(|| anyhow!("no strip_data record"))?;
    if let StripVerdict::Violation { pair } = strip_condition_check(strip)? {
        eprintln!("strip condition fails for arcs {} and {}", pair.0, pair.1);
        return Ok(Outcome { stdout: String::new(), positive: false });
    }
    let rows = convergence_table(strip, t, samples, seed)?;
    Ok(Outcome { stdout: convergence_csv(&rows), positive: true })
}

pub fn render(path: &Path, out: &Path, chart: Chart, res: usize, index: Option<usize>, z: Option<f64>) -> Result<Outcome> {
    let scene = load(path)?;
    let (i, p) = match index {
        Some(i) => (i, scene.crooked(i)?),
        None => *scene.crooked_all().first().ok_or_else(|| anyhow!("no crooked record"))?,
    };
    let mesh = render_crooked(p, chart, res)?;
    let mut slice_z = None;
    let text = match out.extension().and_then(|e| e.to_str()) {
        Some("obj") => to_obj(&mesh),
        Some("svg") => {
            let z = z.unwrap_or_else(|| default_slice_height(&mesh));
            slice_z = Some(z);
            to_svg(&mesh, z)?
        }
        _ => bail!("output must end in .obj or .svg"),
    };
    fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    let check = verify_mesh(&mesh, p);
    let ok = check.membership_failures == 0 && check.quadric_failures == 0;
    let faces: usize = mesh.groups.iter().map(|g| g.faces.len()).sum();
    let v = json!({
        "object": i,
        "output": out.display().to_string(),
        "chart": chart,
        "vertices": mesh.vertices.len(),
        "faces": faces,
        "clipped": mesh.clipped,
        "slice_z": slice_z,
        "check": check,
    });
    Ok(Outcome::json(v, ok))
}
