//! Convex polygons in the hyperbolic plane: hull, area, diameter, width and thickness.

mod polygon;
mod width;

pub use polygon::{
    diameter, diameter_pair, gauss_bonnet_area, make_polygon, triangulation_area,
    triangulation_area_from, ConvexPolygon, STRAIGHT_ANGLE_MARGIN, VERTEX_SEPARATION,
};
pub use width::{
    edge_min_width, pencil_line, pencil_span, supporting_line, thickness, thickness_with,
    width_profile, width_wrt, SupportKind, SupportingLineParam, ThicknessConfig, WidthProfile,
    SUPPORT_TOL,
};
