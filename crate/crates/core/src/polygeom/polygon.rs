use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypcore::{angle, line_through, GeodesicSegment, HLine, HPoint};

/// Minimum separation of consecutive vertices.
pub const VERTEX_SEPARATION: f64 = 1e-9;
/// Interior angles must stay below π minus this margin.
pub const STRAIGHT_ANGLE_MARGIN: f64 = 1e-9;

/// A convex polygon with positively (counter-clockwise) ordered extreme vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<HPoint>,
}

impl ConvexPolygon {
    /// Wraps an already ordered vertex cycle after checking convexity and orientation.
    pub fn new(vertices: Vec<HPoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices")));
        }
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            if a.distance(b) <= VERTEX_SEPARATION {
                return Err(Error::InvalidPolygon(format!("vertices {i} and {} coincide", (i + 1) % n)));
            }
        }
        let poly = ConvexPolygon { vertices };
        for i in 0..n {
            let edge = poly.edge_line(i)?;
            for j in 0..n {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                if edge.signed_distance(&poly.vertices[j]) <= 0.0 {
                    return Err(Error::InvalidPolygon(format!(
                        "vertex {j} is not strictly left of edge {i}"
                    )));
                }
            }
        }
        for i in 0..n {
            let a = poly.interior_angle(i)?;
            if a >= PI - STRAIGHT_ANGLE_MARGIN {
                return Err(Error::InvalidPolygon(format!("vertex {i} is not extreme (angle {a})")));
            }
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &HPoint {
        &self.vertices[i % self.n()]
    }

    /// Line through vertices i and i + 1, with the polygon on its positive side.
    pub fn edge_line(&self, i: usize) -> Result<HLine> {
        line_through(self.vertex(i), self.vertex(i + 1))
    }

    pub fn edge(&self, i: usize) -> GeodesicSegment {
        GeodesicSegment::new(*self.vertex(i), *self.vertex(i + 1))
    }

    pub fn interior_angle(&self, i: usize) -> Result<f64> {
        let n = self.n();
        angle(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1))
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| self.interior_angle(i).expect("validated polygon"))
            .collect()
    }

    /// Whether `p` lies in the closed polygon, allowing `tol` of outward slack.
    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.boundary_violation(p) <= tol
    }

    /// Largest outward signed distance of `p` from the edge lines (≤ 0 inside).
    pub fn boundary_violation(&self, p: &HPoint) -> f64 {
        (0..self.n())
            .map(|i| -self.edge_line(i).expect("validated polygon").signed_distance(p))
            .fold(f64::MIN, f64::max)
    }

    /// Polygon with vertex `j` removed; `None` for triangles.
    pub fn without_vertex(&self, j: usize) -> Option<Result<ConvexPolygon>> {
        if self.n() <= 3 {
            return None;
        }
        let pts: Vec<HPoint> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, p)| *p)
            .collect();
        Some(make_polygon(&pts))
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull of a point set, keeping only extreme points in counter-clockwise order.
///
/// Geodesics are straight chords in the Klein model, so the hull is computed
/// there with a monotone chain and mapped back.
pub fn make_polygon(points: &[HPoint]) -> Result<ConvexPolygon> {
    if points.len() < 3 {
        return Err(Error::InvalidPolygon(format!("{} points", points.len())));
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let k: Vec<[f64; 2]> = points.iter().map(HPoint::to_klein).collect();
    idx.sort_by(|&a, &b| k[a][0].total_cmp(&k[b][0]).then(k[a][1].total_cmp(&k[b][1])));
    idx.dedup_by(|a, b| points[*a].distance(&points[*b]) <= VERTEX_SEPARATION);

    let mut hull: Vec<usize> = Vec::with_capacity(idx.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in seq {
            while hull.len() >= start + 2
                && cross(k[hull[hull.len() - 2]], k[hull[hull.len() - 1]], k[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    let mut verts: Vec<HPoint> = hull.iter().map(|&i| points[i]).collect();
    if verts.len() < 3 || is_nearly_collinear(&verts) {
        return Err(Error::DegenerateHull);
    }
    // drop vertices whose interior angle is numerically straight
    loop {
        let n = verts.len();
        let flat = (0..n).find(|&i| {
            angle(&verts[(i + n - 1) % n], &verts[i], &verts[(i + 1) % n])
                .map(|a| a >= PI - STRAIGHT_ANGLE_MARGIN)
                .unwrap_or(true)
        });
        match flat {
            Some(i) if n > 3 => {
                verts.remove(i);
            }
            Some(_) => return Err(Error::DegenerateHull),
            None => break,
        }
    }
    ConvexPolygon::new(verts)
}

fn is_nearly_collinear(verts: &[HPoint]) -> bool {
    let (mut best, mut pair) = (0.0, (0, 1));
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let d = verts[i].distance(&verts[j]);
            if d > best {
                best = d;
                pair = (i, j);
            }
        }
    }
    match line_through(&verts[pair.0], &verts[pair.1]) {
        Ok(l) => verts.iter().all(|p| l.signed_distance(p).abs() <= 1e-9),
        Err(_) => true,
    }
}

/// Area as the angle defect (n − 2)π − Σ interior angles.
pub fn gauss_bonnet_area(poly: &ConvexPolygon) -> f64 {
    (poly.n() as f64 - 2.0) * PI - poly.interior_angles().iter().sum::<f64>()
}

/// Area as the sum of angle defects of the fan triangles anchored at `anchor`.
pub fn triangulation_area_from(poly: &ConvexPolygon, anchor: usize) -> f64 {
    let a = poly.vertex(anchor);
    (1..poly.n() - 1)
        .map(|k| {
            let (b, c) = (poly.vertex(anchor + k), poly.vertex(anchor + k + 1));
            let s = angle(b, a, c).expect("validated polygon")
                + angle(a, b, c).expect("validated polygon")
                + angle(a, c, b).expect("validated polygon");
            PI - s
        })
        .sum()
}

/// Fan-triangulation area anchored at the first vertex.
pub fn triangulation_area(poly: &ConvexPolygon) -> f64 {
    triangulation_area_from(poly, 0)
}

/// Largest vertex-to-vertex distance, with the realizing pair.
pub fn diameter_pair(poly: &ConvexPolygon) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for i in 0..poly.n() {
        for j in i + 1..poly.n() {
            let d = poly.vertex(i).distance(poly.vertex(j));
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}

pub fn diameter(poly: &ConvexPolygon) -> f64 {
    diameter_pair(poly).0
}
