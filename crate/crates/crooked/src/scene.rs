//! Scene files: tagged JSON records shared by the CLI and the web demo.
//!
//! Matrices are row-major `[[a, b], [c, d]]` (rescaled to unit determinant on load), ideal points
//! are `[v1, v2]`, orientations are `"+"` or `"-"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ads::{CrookedPlaneDesc, HalfSpaceDesc, StemQuadrantDesc};
use crate::hyp2::{GeodesicLine, Isometry};
use crate::mink::MinkCrookedDesc;
use crate::schottky::{DomainData, RepPair};
use crate::transition::StripData;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("malformed scene: {0}")]
    Json(#[from] serde_json::Error),
    #[error("object {index}: {reason}")]
    Invalid { index: usize, reason: String },
    #[error("object {0} is not a {1} record")]
    WrongType(usize, &'static str),
    #[error("object index {0} out of range")]
    NoSuchObject(usize),
}

fn default_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata { seed: 0, tol: default_tol() }
    }
}

/// Input to a Schottky build: half-planes `[l_1, l_1', ...]`, the generators `j_i`, and one
/// isometry per half-plane placing its crooked plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyInput {
    pub half_planes: Vec<GeodesicLine>,
    pub j: Vec<Isometry>,
    pub gs: Vec<Isometry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SceneObject {
    Crooked(CrookedPlaneDesc),
    Halfspace(HalfSpaceDesc),
    MinkCrooked(MinkCrookedDesc),
    StemQuadrant(StemQuadrantDesc),
    RepPair(RepPair),
    DomainData(DomainData),
    StripData(StripData),
    SchottkyInput(SchottkyInput),
}

impl SceneObject {
    pub fn type_name(&self) -> &'static str {
        match self {
            SceneObject::Crooked(_) => "crooked",
            SceneObject::Halfspace(_) => "halfspace",
            SceneObject::MinkCrooked(_) => "mink_crooked",
            SceneObject::StemQuadrant(_) => "stem_quadrant",
            SceneObject::RepPair(_) => "rep_pair",
            SceneObject::DomainData(_) => "domain_data",
            SceneObject::StripData(_) => "strip_data",
            SceneObject::SchottkyInput(_) => "schottky_input",
        }
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            SceneObject::Halfspace(h) if h.plane.line.orient.is_none() => Err("half-space line needs an orientation".into()),
            SceneObject::StemQuadrant(s) if s.line.orient.is_none() => Err("stem quadrant line needs an orientation".into()),
            SceneObject::RepPair(r) if r.j.len() != r.r || r.rho.len() != r.r => {
                Err(format!("rank {} but {} / {} generators", r.r, r.j.len(), r.rho.len()))
            }
            SceneObject::DomainData(d) => {
                let n = d.arcs.len();
                match d.pairing.iter().find(|&&(a, b)| a >= n || b >= n) {
                    Some(p) => Err(format!("pairing {p:?} refers past {n} arcs")),
                    None => Ok(()),
                }
            }
            SceneObject::StripData(s) => {
                let n = s.arcs.len();
                match s.adjacency.iter().find(|&&(a, b)| a >= n || b >= n) {
                    Some(p) => Err(format!("adjacency {p:?} refers past {n} arcs")),
                    None => Ok(()),
                }
            }
            SceneObject::SchottkyInput(s) if s.half_planes.len() != 2 * s.j.len() || s.gs.len() != s.half_planes.len() => {
                Err("need 2r half-planes, r generators and 2r placements".into())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Scene {
    #[serde(default)]
    pub metadata: Metadata,
    pub objects: Vec<SceneObject>,
}

macro_rules! getter {
    ($name:ident, $all:ident, $variant:ident, $ty:ty, $label:literal) => {
        pub fn $name(&self, i: usize) -> Result<&$ty, SceneError> {
            match self.objects.get(i) {
                Some(SceneObject::$variant(x)) => Ok(x),
                Some(_) => Err(SceneError::WrongType(i, $label)),
                None => Err(SceneError::NoSuchObject(i)),
            }
        }

        /// `(index, record)` for every record of this type, in file order.
        pub fn $all(&self) -> Vec<(usize, &$ty)> {
            self.objects
                .iter()
                .enumerate()
                .filter_map(|(i, o)| match o {
                    SceneObject::$variant(x) => Some((i, x)),
                    _ => None,
                })
                .collect()
        }
    };
}

impl Scene {
    pub fn new(objects: Vec<SceneObject>) -> Scene {
        Scene { metadata: Metadata::default(), objects }
    }

    pub fn from_json(text: &str) -> Result<Scene, SceneError> {
        let s: Scene = serde_json::from_str(text)?;
        for (index, o) in s.objects.iter().enumerate() {
            o.validate().map_err(|reason| SceneError::Invalid { index, reason })?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene values serialize")
    }

    getter!(crooked, crooked_all, Crooked, CrookedPlaneDesc, "crooked");
    getter!(mink_crooked, mink_crooked_all, MinkCrooked, MinkCrookedDesc, "mink_crooked");
    getter!(rep_pair, rep_pair_all, RepPair, RepPair, "rep_pair");
    getter!(domain_data, domain_data_all, DomainData, DomainData, "domain_data");
    getter!(strip_data, strip_data_all, StripData, StripData, "strip_data");
    getter!(schottky_input, schottky_input_all, SchottkyInput, SchottkyInput, "schottky_input");
}
