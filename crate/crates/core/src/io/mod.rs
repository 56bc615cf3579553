//! File formats and reports: JSON polygon documents, SVG rendering, check reports.

mod document;
mod report;
mod svg;

pub use document::{Model, PolygonDocument, KIND_ORDINARY_REDUCED, KIND_POLYGON, LOAD_SHEET_TOL};
pub use report::{Check, CheckReport, Status};
pub use svg::{render_svg, SvgOptions, DEFAULT_EDGE_SAMPLES};
