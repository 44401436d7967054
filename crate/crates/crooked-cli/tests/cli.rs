use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use crooked::render::parse_obj;
use serde_json::Value;

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "examples", name].iter().collect();
    p.to_str().unwrap().to_owned()
}

fn crooked(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crooked")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn matrix(v: &Value) -> [[f64; 2]; 2] {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn short_translation_is_disjoint() {
    let out = crooked(&["check-disjoint", &example("right_pair_t1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pair = &v["pairs"][0];
    assert_eq!(pair["disjoint"], true);
    assert!(pair["margin"].as_f64().unwrap() < 0.0);
    assert_eq!(pair["stem_quadrant_check"]["holds"], true);
    assert!(pair["witness"].is_null());
}

#[test]
fn long_translation_reports_witness() {
    let out = crooked(&["check-disjoint", &example("right_pair_t3.json"), "--pair", "0", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let w = &v["pairs"][0]["witness"];
    assert_eq!(w["on_first"], true);
    assert_eq!(w["on_second"], true);
    let m = matrix(&w["point"]);
    assert!((m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0).abs() < 1e-9);
}

#[test]
fn halfspaces_and_bad_pairs() {
    assert_eq!(crooked(&["check-disjoint", &example("halfspaces.json")]).status.code(), Some(0));
    let out = crooked(&["check-disjoint", &example("right_pair_t1.json"), "--pair", "0", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("refers past"));
}

#[test]
fn decompose_diagonal_and_outside() {
    let (a, d) = ((-0.5f64).exp(), 0.5f64.exp());
    let elt = format!("{a},0,0,{d}");
    let out = crooked(&["decompose", &example("stem_quadrants.json"), "--element", &elt]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["product_error"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["tag"]["kind"], "diagonal");
    // the upward translation is not a product of the two quadrants
    let out = crooked(&["decompose", &example("stem_quadrants.json"), "--element", &format!("{d},0,0,{a}")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["in_product"], false);
    assert_eq!(crooked(&["decompose", &example("stem_quadrants.json"), "--element", "1,2"]).status.code(), Some(1));
}

#[test]
fn schottky_build_then_verify() {
    let out = crooked(&["schottky", "build", &example("schottky_input.json")]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("built.json");
    std::fs::write(&built, &out.stdout).unwrap();
    let out = crooked(&["schottky", "verify", built.to_str().unwrap(), "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["status"], "verified");
    assert!(v["result"]["k"].as_f64().unwrap() > 0.0);
}

#[test]
fn certificates() {
    let out = crooked(&["certify", &example("rank_one_domain.json"), "--kind", "not-cc", "--maxlen", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["certificate"]["status"], "not_applicable");
    let out = crooked(&["certify", &example("rank_one_domain.json"), "--kind", "elliptic"]);
    assert_eq!(out.status.code(), Some(1));
    let out = crooked(&["certify", &example("rank_one_domain.json"), "--kind", "elliptic", "--word", "1,-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mink_pairs() {
    let out = crooked(&["mink", "check-disjoint", &example("mink_pair.json"), "--pair", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["pairs"][0]["depth"].as_f64().unwrap() > 0.0);
    let out = crooked(&["mink", "check-disjoint", &example("mink_pair.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn transition_csv_is_deterministic() {
    let run = |seed: &str| crooked(&["--seed", seed, "transition", "--t", "0.1", &example("strip.json"), "--samples", "200"]);
    let (a, b) = (run("3"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1][2] < w[0][2]), "hausdorff should shrink with t: {text}");
    assert_eq!(crooked(&["transition", "--t", "-1", &example("strip.json")]).status.code(), Some(1));
}

#[test]
fn render_obj_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("c.obj");
    let out = crooked(&["render", &example("single_plane.json"), "-o", obj.to_str().unwrap(), "--res", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&out);
    assert_eq!(summary["check"]["membership_failures"], 0);
    let data = parse_obj(&std::fs::read_to_string(&obj).unwrap()).unwrap();
    assert_eq!(data.vertices.len() as u64, summary["vertices"].as_u64().unwrap());
    let names: Vec<&str> = data.groups.iter().filter(|(_, f)| !f.is_empty()).map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["stem", "wing_plus", "wing_minus"]);
    assert_eq!(data.polylines.len(), 2);
    let mut stem_edges = HashMap::new();
    for (name, faces) in &data.groups {
        // no edge is shared by more than two triangles of a stratum
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for f in faces {
            assert!(f.iter().all(|&i| i < data.vertices.len()));
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        assert!(edges.values().all(|&c| c <= 2), "{name} is not a surface");
        if name == "stem" {
            stem_edges = edges;
        }
    }
    // the stem boundary curves run along edges that only one stem triangle uses
    for line in &data.polylines {
        for w in line.windows(2) {
            assert_eq!(stem_edges.get(&(w[0].min(w[1]), w[0].max(w[1]))), Some(&1), "segment {w:?}");
        }
    }
}

#[test]
fn render_svg_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    for chart in ["y4", "y1"] {
        let out = crooked(&["render", &example("single_plane.json"), "-o", svg.to_str().unwrap(), "--chart", chart]);
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<svg") && text.contains("<line"));
    }
    let bad = dir.path().join("c.png");
    assert_eq!(crooked(&["render", &example("single_plane.json"), "-o", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(crooked(&["render", &example("single_plane.json"), "-o", "x.obj", "--chart", "y9"]).status.code(), Some(1));
    assert_eq!(crooked(&["check-disjoint", "/nonexistent.json"]).status.code(), Some(1));
}
