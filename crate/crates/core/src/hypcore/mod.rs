//! Hyperboloid-model primitives.
//!
//! Points live on the upper sheet of ⟨p,p⟩ = −x0² + x1² + x2² = −1 with base
//! point (1, 0, 0). Geodesics are stored by unit spacelike normals; the
//! Poincaré disk is used only for input/output.

mod isometry;
mod line;
mod point;
mod triangle;

pub use isometry::{
    classify, rotation_about, translation_along, Isometry, IsometryClass, IDENTITY_TOL,
    PARABOLIC_MARGIN,
};
pub use line::{
    foot_of_perpendicular, line_through, point_line_distance, segment_intersection,
    GeodesicSegment, HLine, COINCIDENCE_TOL,
};
pub use point::{angle, lorentz_cross, minkowski, signed_angle, HPoint};
pub use triangle::{triangle_parts, triangle_relations_residual, TriangleResiduals};


/// Geodesic distance between two points.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    p.distance(q)
}

/// Stereographic image in the Poincaré disk.
pub fn to_poincare(p: &HPoint) -> [f64; 2] {
    p.to_poincare()
}

pub fn from_poincare(z: [f64; 2]) -> crate::error::Result<HPoint> {
    HPoint::from_poincare(z)
}
