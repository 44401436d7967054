//! Browser bindings: build the normalized pair for a translation length, test a scene for
//! disjointness, and slice a crooked plane to SVG.
//!
//! The `*_impl` functions carry the logic and return plain `String` errors so they can be
//! tested on the host; the exported wrappers only convert errors for JavaScript.

use crooked::ads::{disjoint_crooked, CrookedPlaneDesc};
use crooked::hyp2::{GeodesicLine, Isometry, PlanePoint};
use crooked::render::{default_slice_height, render_crooked, to_svg, Chart};
use crooked::scene::{Scene, SceneObject};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Two right crooked planes over `(-1/r, 1/r)` and `(r, -r)`, the second moved down the
/// imaginary axis by `t`.
pub fn normalized_pair_impl(r: f64, t: f64) -> Result<String, String> {
    if !(r > 1.0) || !t.is_finite() {
        return Err(format!("need r > 1 and finite t (got r = {r}, t = {t})"));
    }
    let l = GeodesicLine::reals(-1.0 / r, 1.0 / r).map_err(|e| e.to_string())?;
    let lp = GeodesicLine::reals(r, -r).map_err(|e| e.to_string())?;
    let scene = Scene::new(vec![
        SceneObject::Crooked(CrookedPlaneDesc::right(Isometry::IDENTITY, l.oriented_toward(&PlanePoint::new(0.0, 0.5 / r)))),
        SceneObject::Crooked(CrookedPlaneDesc::right(Isometry::axial(-t), lp.oriented_toward(&PlanePoint::new(0.0, 2.0 * r)))),
    ]);
    Ok(scene.to_json())
}

/// Verdict and margin for every pair of crooked records in the scene.
pub fn check_disjoint_impl(scene_json: &str) -> Result<String, String> {
    let scene = Scene::from_json(scene_json).map_err(|e| e.to_string())?;
    let planes = scene.crooked_all();
    if planes.len() < 2 {
        return Err("scene needs at least two crooked records".into());
    }
    let mut pairs = Vec::new();
    for (a, &(i, p)) in planes.iter().enumerate() {
        for &(j, pp) in &planes[a + 1..] {
            let report = disjoint_crooked(p, pp).map_err(|e| format!("pair ({i}, {j}): {e}"))?;
            pairs.push(json!({
                "pair": [i, j],
                "disjoint": report.verdict.is_disjoint(),
                "margin": report.verdict.score(),
            }));
        }
    }
    Ok(json!({ "pairs": pairs }).to_string())
}

/// SVG slice of crooked record `index` at the default slice height.
pub fn render_svg_impl(scene_json: &str, index: usize, chart: &str, res: usize) -> Result<String, String> {
    let scene = Scene::from_json(scene_json).map_err(|e| e.to_string())?;
    let p = scene.crooked(index).map_err(|e| e.to_string())?;
    let chart: Chart = chart.parse()?;
    let mesh = render_crooked(p, chart, res).map_err(|e| e.to_string())?;
    to_svg(&mesh, default_slice_height(&mesh)).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn normalized_pair(r: f64, t: f64) -> Result<String, JsError> {
    normalized_pair_impl(r, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check_disjoint(scene_json: &str) -> Result<String, JsError> {
    check_disjoint_impl(scene_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn render_svg(scene_json: &str, index: usize, chart: &str, res: usize) -> Result<String, JsError> {
    render_svg_impl(scene_json, index, chart, res).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn verdict(t: f64) -> Value {
        let scene = normalized_pair_impl(2.0, t).unwrap();
        let v: Value = serde_json::from_str(&check_disjoint_impl(&scene).unwrap()).unwrap();
        v["pairs"][0].clone()
    }

    #[test]
    fn verdict_flips_past_four_log_r() {
        let edge = 4.0 * 2f64.ln();
        for (t, want) in [(1.0, true), (edge - 0.05, true), (edge + 0.05, false), (3.0, false)] {
            let p = verdict(t);
            assert_eq!(p["disjoint"], want, "t = {t}");
            assert_eq!(p["margin"].as_f64().unwrap() < 0.0, want);
        }
    }

    #[test]
    fn svg_for_both_planes_and_charts() {
        let scene = normalized_pair_impl(2.0, 1.0).unwrap();
        for index in [0, 1] {
            for chart in ["y4", "y1"] {
                let svg = render_svg_impl(&scene, index, chart, 12).unwrap();
                assert!(svg.starts_with("<svg") && svg.contains("<line"), "{index} {chart}");
            }
        }
    }

    #[test]
    fn errors_are_strings() {
        assert!(normalized_pair_impl(0.5, 1.0).is_err());
        assert!(check_disjoint_impl("{").is_err());
        let scene = normalized_pair_impl(2.0, 1.0).unwrap();
        assert!(render_svg_impl(&scene, 5, "y4", 8).unwrap_err().contains("out of range"));
        assert!(render_svg_impl(&scene, 0, "y7", 8).is_err());
        assert!(render_svg_impl(&scene, 0, "y4", 1).is_err());
    }
}
