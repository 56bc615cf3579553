use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypcore::{minkowski, HLine};
use crate::search::{golden_section_max, golden_section_min};

use super::polygon::ConvexPolygon;

/// Slack allowed when deciding that a line supports a polygon.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Which member of the supporting-line family a line is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportKind {
    /// The line through vertices `i` and `i + 1`.
    Edge(usize),
    /// A line through vertex `vertex`, turned by `theta` from the incoming edge line.
    Pencil { vertex: usize, theta: f64 },
}

/// A supporting line together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportingLineParam {
    pub kind: SupportKind,
    /// Oriented so that the polygon lies on the positive side.
    pub line: HLine,
}

impl SupportingLineParam {
    pub fn is_edge(&self) -> bool {
        matches!(self.kind, SupportKind::Edge(_))
    }
}

/// Sampled width function over all supporting lines.
#[derive(Debug, Clone)]
pub struct WidthProfile {
    pub samples: Vec<(SupportingLineParam, f64)>,
    pub min: f64,
    pub argmin: SupportingLineParam,
    pub max: f64,
    pub argmax: SupportingLineParam,
}

/// Resolution of the thickness search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessConfig {
    /// Samples per vertex pencil, endpoints included.
    pub pencil_samples: usize,
    /// Parameter tolerance of the golden-section refinement.
    pub refine_tol: f64,
}

impl Default for ThicknessConfig {
    fn default() -> Self {
        ThicknessConfig {
            pencil_samples: 256,
            refine_tol: 1e-10,
        }
    }
}

/// Width of `poly` with respect to the supporting line `line`: the largest
/// vertex distance from it.
pub fn width_wrt(poly: &ConvexPolygon, line: &HLine) -> Result<f64> {
    let d: Vec<f64> = poly.vertices().iter().map(|v| line.signed_distance(v)).collect();
    let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (near, far) = if lo >= -SUPPORT_TOL {
        (lo, hi)
    } else if hi <= SUPPORT_TOL {
        (-hi, -lo)
    } else {
        return Err(Error::NotSupporting(format!(
            "vertices on both sides (min {lo:.3e}, max {hi:.3e})"
        )));
    };
    if near > SUPPORT_TOL {
        return Err(Error::NotSupporting(format!("no vertex touches (gap {near:.3e})")));
    }
    Ok(far)
}

/// Exterior angle π − interior angle at vertex `i`: the span of its pencil.
pub fn pencil_span(poly: &ConvexPolygon, i: usize) -> f64 {
    PI - poly.interior_angle(i).expect("validated polygon")
}

/// Supporting line through vertex `i` turned by `theta ∈ [0, span]` from edge `i − 1`.
pub fn pencil_line(poly: &ConvexPolygon, i: usize, theta: f64) -> HLine {
    let n = poly.n();
    let v = poly.vertex(i);
    let d0 = -v
        .tangent_toward(poly.vertex(i + n - 1))
        .expect("validated polygon");
    HLine::through_point_with_direction(v, &v.rotate_tangent(&d0, theta))
}

pub fn supporting_line(poly: &ConvexPolygon, kind: SupportKind) -> SupportingLineParam {
    let line = match kind {
        SupportKind::Edge(i) => poly.edge_line(i).expect("validated polygon"),
        SupportKind::Pencil { vertex, theta } => pencil_line(poly, vertex, theta),
    };
    SupportingLineParam { kind, line }
}

// Width for a line known to support the polygon from the positive side.
fn width_unchecked(poly: &ConvexPolygon, line: &HLine) -> f64 {
    poly.vertices()
        .iter()
        .map(|v| minkowski(v.coords(), line.normal()))
        .fold(f64::NEG_INFINITY, f64::max)
        .asinh()
}

fn pencil_width(poly: &ConvexPolygon, i: usize, theta: f64) -> f64 {
    width_unchecked(poly, &pencil_line(poly, i, theta))
}

// Pencil endpoints are edge lines; name them as such.
fn param(poly: &ConvexPolygon, i: usize, theta: f64, span: f64) -> SupportingLineParam {
    let n = poly.n();
    let kind = if theta <= 0.0 {
        SupportKind::Edge((i + n - 1) % n)
    } else if theta >= span {
        SupportKind::Edge(i)
    } else {
        SupportKind::Pencil { vertex: i, theta }
    };
    SupportingLineParam {
        kind,
        line: pencil_line(poly, i, theta),
    }
}

/// Samples every vertex pencil and refines each local extremum.
pub fn width_profile(poly: &ConvexPolygon, cfg: &ThicknessConfig) -> WidthProfile {
    let m = cfg.pencil_samples.max(3);
    let mut samples = Vec::with_capacity(poly.n() * m);
    let mut best_min: Option<(f64, SupportingLineParam)> = None;
    let mut best_max: Option<(f64, SupportingLineParam)> = None;
    for i in 0..poly.n() {
        let span = pencil_span(poly, i);
        let thetas: Vec<f64> = (0..m).map(|k| span * k as f64 / (m - 1) as f64).collect();
        let vals: Vec<f64> = thetas.iter().map(|&t| pencil_width(poly, i, t)).collect();
        for k in 0..m {
            samples.push((param(poly, i, thetas[k], span), vals[k]));
            let left = if k > 0 { vals[k - 1] } else { f64::INFINITY };
            let right = if k + 1 < m { vals[k + 1] } else { f64::INFINITY };
            let (a, b) = (thetas[k.saturating_sub(1)], thetas[(k + 1).min(m - 1)]);
            if vals[k] <= left && vals[k] <= right {
                let (t, v) = golden_section_min(|t| pencil_width(poly, i, t), a, b, cfg.refine_tol);
                let (t, v) = if vals[k] < v { (thetas[k], vals[k]) } else { (t, v) };
                if best_min.as_ref().is_none_or(|(bv, _)| v < *bv) {
                    best_min = Some((v, param(poly, i, t, span)));
                }
            }
            let left = if k > 0 { vals[k - 1] } else { f64::NEG_INFINITY };
            let right = if k + 1 < m { vals[k + 1] } else { f64::NEG_INFINITY };
            if vals[k] >= left && vals[k] >= right {
                let (t, v) = golden_section_max(|t| pencil_width(poly, i, t), a, b, cfg.refine_tol);
                let (t, v) = if vals[k] > v { (thetas[k], vals[k]) } else { (t, v) };
                if best_max.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best_max = Some((v, param(poly, i, t, span)));
                }
            }
        }
    }
    let (min, argmin) = best_min.expect("at least one local minimum");
    let (max, argmax) = best_max.expect("at least one local maximum");
    WidthProfile {
        samples,
        min,
        argmin,
        max,
        argmax,
    }
}

/// Minimal width over all supporting lines, with the realizing line.
pub fn thickness(poly: &ConvexPolygon) -> (f64, SupportingLineParam) {
    thickness_with(poly, &ThicknessConfig::default())
}

pub fn thickness_with(poly: &ConvexPolygon, cfg: &ThicknessConfig) -> (f64, SupportingLineParam) {
    let p = width_profile(poly, cfg);
    (p.min, p.argmin)
}

/// Smallest width among the edge lines alone.
pub fn edge_min_width(poly: &ConvexPolygon) -> (f64, usize) {
    (0..poly.n())
        .map(|i| (width_unchecked(poly, &poly.edge_line(i).expect("validated polygon")), i))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypcore::{line_through, HPoint};
    use crate::polygeom::{diameter, make_polygon};

    fn regular(n: usize, r: f64) -> ConvexPolygon {
        make_polygon(
            &(0..n)
                .map(|k| HPoint::from_polar(r, 2.0 * PI * k as f64 / n as f64))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn half_square_edge_width_is_apex_distance() {
        // right isosceles triangle: right angle at the base point
        let a = HPoint::origin();
        let b = HPoint::from_polar(1.0, 0.0);
        let c = HPoint::from_polar(1.0, PI / 2.0);
        let p = make_polygon(&[a, b, c]).unwrap();
        let l = line_through(&a, &b).unwrap();
        assert!((width_wrt(&p, &l).unwrap() - 1.0).abs() < 1e-12);
        assert!((width_wrt(&p, &l.flipped()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_supporting_lines_are_rejected() {
        let p = regular(5, 1.0);
        let through = line_through(&HPoint::from_polar(2.0, 0.1), &HPoint::from_polar(2.0, 3.0)).unwrap();
        assert!(matches!(width_wrt(&p, &through), Err(Error::NotSupporting(_))));
        let far = line_through(&HPoint::from_polar(3.0, -0.5), &HPoint::from_polar(3.0, 0.5)).unwrap();
        assert!(matches!(width_wrt(&p, &far), Err(Error::NotSupporting(_))));
    }

    #[test]
    fn width_equals_distance_to_farthest_supporting_line() {
        let p = make_polygon(&[
            HPoint::from_polar(1.2, 0.1),
            HPoint::from_polar(0.7, 1.3),
            HPoint::from_polar(1.5, 2.2),
            HPoint::from_polar(0.9, 3.9),
            HPoint::from_polar(1.1, 5.0),
        ])
        .unwrap();
        for i in 0..p.n() {
            let l = p.edge_line(i).unwrap();
            let far = p
                .vertices()
                .iter()
                .max_by(|a, b| l.signed_distance(a).total_cmp(&l.signed_distance(b)))
                .unwrap();
            // line through the far vertex perpendicular to its perpendicular onto l
            let foot = l.foot(far);
            let dir = far.tangent_toward(&foot).unwrap();
            let other = HLine::through_point_with_direction(far, &far.rotate_tangent(&dir, PI / 2.0));
            assert!(width_wrt(&p, &other).is_ok());
            assert!((l.line_distance(&other) - width_wrt(&p, &l).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn pencil_endpoints_are_edge_lines() {
        let p = regular(6, 0.9);
        for i in 0..6 {
            let span = pencil_span(&p, i);
            let e0 = p.edge_line(i + 5).unwrap();
            let e1 = p.edge_line(i).unwrap();
            assert!((pencil_line(&p, i, 0.0).normal() - e0.normal()).amax() < 1e-12);
            assert!((pencil_line(&p, i, span).normal() - e1.normal()).amax() < 1e-12);
            for k in 0..=10 {
                let l = pencil_line(&p, i, span * k as f64 / 10.0);
                assert!(width_wrt(&p, &l).is_ok());
            }
        }
    }

    fn brute_thickness(p: &ConvexPolygon, m: usize) -> f64 {
        (0..p.n())
            .flat_map(|i| {
                let span = pencil_span(p, i);
                (0..m).map(move |k| pencil_width(p, i, span * k as f64 / (m - 1) as f64))
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn thickness_matches_dense_sampling_on_thin_triangle() {
        let p = make_polygon(&[
            HPoint::from_polar(1.0, 0.0),
            HPoint::from_polar(1.0, 0.05),
            HPoint::from_polar(1.3, 2.5),
        ])
        .unwrap();
        let (t, _) = thickness(&p);
        let brute = brute_thickness(&p, 100_000 / 3);
        assert!(t <= brute + 1e-12);
        assert!((t - brute).abs() < 1e-6, "{t} vs {brute}");
    }

    #[test]
    fn profile_max_is_diameter() {
        for p in [
            regular(5, 1.0),
            regular(4, 0.4),
            make_polygon(&[
                HPoint::from_polar(1.2, 0.1),
                HPoint::from_polar(0.7, 1.3),
                HPoint::from_polar(1.5, 2.2),
                HPoint::from_polar(0.9, 3.9),
            ])
            .unwrap(),
        ] {
            let prof = width_profile(&p, &ThicknessConfig::default());
            assert!((prof.max - diameter(&p)).abs() < 1e-7);
            assert!(prof.samples.iter().all(|(_, w)| *w >= prof.min - 1e-15));
        }
    }

    #[test]
    fn regular_square_thickness_is_attained_on_edges() {
        let p = regular(4, 0.8);
        let (t, arg) = thickness(&p);
        let (e, _) = edge_min_width(&p);
        assert!(t <= e + 1e-15);
        assert!((t - e).abs() < 1e-10);
        assert!(width_wrt(&p, &arg.line).is_ok());
    }
}
