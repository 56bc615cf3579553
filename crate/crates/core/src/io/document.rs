use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypcore::HPoint;
use crate::polygeom::ConvexPolygon;

/// Allowed deviation from ⟨p,p⟩ = −1 for loaded hyperboloid vertices.
pub const LOAD_SHEET_TOL: f64 = 1e-9;
pub const KIND_ORDINARY_REDUCED: &str = "ordinary-reduced";
pub const KIND_POLYGON: &str = "polygon";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Hyperboloid,
    Poincare,
}

/// On-disk polygon: vertices in either model, the thickness and optional crossing angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDocument {
    pub kind: String,
    pub model: Model,
    pub w: f64,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis: Option<Vec<f64>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl PolygonDocument {
    pub fn from_polygon(kind: &str, poly: &ConvexPolygon, w: f64) -> Self {
        PolygonDocument {
            kind: kind.to_string(),
            model: Model::Hyperboloid,
            w,
            vertices: poly.vertices().iter().map(|v| v.to_array().to_vec()).collect(),
            phis: None,
            metadata: BTreeMap::new(),
        }
    }

    /// Parses and checks the document; vertices are not yet interpreted.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolygonDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        doc.check_shape()?;
        Ok(doc)
    }

    /// Pretty JSON with a trailing newline; floats in shortest round-trip form.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    fn check_shape(&self) -> Result<()> {
        let dim = match self.model {
            Model::Hyperboloid => 3,
            Model::Poincare => 2,
        };
        if let Some(bad) = self.vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::Malformed(format!("vertex {bad:?} should have {dim} coordinates")));
        }
        let finite = self.w.is_finite()
            && self.vertices.iter().flatten().all(|c| c.is_finite())
            && self.phis.iter().flatten().all(|c| c.is_finite());
        if !finite {
            return Err(Error::Malformed("non-finite number".into()));
        }
        if !(self.w > 0.0) {
            return Err(Error::Malformed(format!("thickness must be positive, got {}", self.w)));
        }
        if self.kind == KIND_ORDINARY_REDUCED && self.vertices.len() % 2 == 0 {
            return Err(Error::InvalidN(self.vertices.len()));
        }
        if self.kind != KIND_ORDINARY_REDUCED && self.kind != KIND_POLYGON {
            return Err(Error::Malformed(format!("unknown kind {:?}", self.kind)));
        }
        Ok(())
    }

    /// Vertices as points, checked against the model.
    pub fn points(&self) -> Result<Vec<HPoint>> {
        self.check_shape()?;
        self.vertices
            .iter()
            .map(|v| match self.model {
                Model::Hyperboloid => HPoint::new(v[0], v[1], v[2], LOAD_SHEET_TOL),
                Model::Poincare => HPoint::from_poincare([v[0], v[1]]),
            })
            .collect()
    }

    /// The vertex cycle as a convex polygon, in the stored order.
    pub fn polygon(&self) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.points()?)
    }

    /// Same document with vertices expressed in `model`.
    pub fn converted(&self, model: Model) -> Result<Self> {
        let pts = self.points()?;
        let vertices = pts
            .iter()
            .map(|p| match model {
                Model::Hyperboloid => p.to_array().to_vec(),
                Model::Poincare => p.to_poincare().to_vec(),
            })
            .collect();
        Ok(PolygonDocument {
            model,
            vertices,
            ..self.clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PolygonDocument {
        let pts: Vec<HPoint> = (0..5)
            .map(|k| HPoint::from_polar(0.9, 0.3 + 1.2566370614359172 * k as f64))
            .collect();
        let mut d = PolygonDocument::from_polygon(KIND_ORDINARY_REDUCED, &ConvexPolygon::new(pts).unwrap(), 1.0);
        d.metadata.insert("seed".into(), "7".into());
        d
    }

    #[test]
    fn roundtrip_is_byte_stable() {
        let a = sample().to_json();
        let b = PolygonDocument::from_json(&a).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.ends_with("}\n"));
        let keys: Vec<usize> = ["\"kind\"", "\"model\"", "\"w\"", "\"vertices\"", "\"metadata\""]
            .iter()
            .map(|k| a.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn model_conversion_preserves_distances() {
        let d = sample();
        let back = d.converted(Model::Poincare).unwrap().converted(Model::Hyperboloid).unwrap();
        let (p, q) = (d.points().unwrap(), back.points().unwrap());
        for i in 0..p.len() {
            for j in 0..p.len() {
                assert!((p[i].distance(&p[j]) - q[i].distance(&q[j])).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bad_inputs_are_classified() {
        let mut d = sample();
        d.vertices[1][0] += 0.01;
        assert!(matches!(d.points(), Err(Error::NotOnHyperboloid(_))));
        let mut e = sample();
        e.vertices.pop();
        assert!(matches!(PolygonDocument::from_json(&e.to_json()), Err(Error::InvalidN(4))));
        assert!(matches!(PolygonDocument::from_json("{\"kind\": 3}"), Err(Error::Malformed(_))));
        let mut f = sample().converted(Model::Poincare).unwrap();
        f.vertices[0] = vec![0.8, 0.8];
        assert!(matches!(f.points(), Err(Error::OutsideDisk { .. })));
        for err in [
            Error::NotOnHyperboloid(0.0),
            Error::InvalidN(4),
            Error::Malformed(String::new()),
            Error::OutsideDisk { x: 0.0, y: 0.0 },
        ] {
            assert_eq!(err.exit_code(), 3);
        }
    }
}
