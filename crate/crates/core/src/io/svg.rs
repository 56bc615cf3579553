use std::fmt::Write;

use crate::error::Result;
use crate::hypcore::GeodesicSegment;
use crate::redpoly::extract_butterflies;

use super::document::{PolygonDocument, KIND_ORDINARY_REDUCED};

pub const DEFAULT_EDGE_SAMPLES: usize = 64;

/// Options for [`render_svg`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Points per edge polyline, endpoints included.
    pub samples: usize,
    /// Overlay the segments `[v_i, t_i]` when the document is an ordinary reduced polygon.
    pub butterflies: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            samples: DEFAULT_EDGE_SAMPLES,
            butterflies: true,
        }
    }
}

fn polyline(seg: &GeodesicSegment, samples: usize) -> String {
    let m = samples.max(2);
    (0..m)
        .map(|k| {
            let z = seg.point_at(k as f64 / (m - 1) as f64).to_poincare();
            format!("{:.15},{:.15}", z[0], z[1])
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Poincaré-disk drawing of the polygon as SVG 1.1 text. The y axis points up.
pub fn render_svg(doc: &PolygonDocument, opts: &SvgOptions) -> Result<String> {
    let poly = doc.polygon()?;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"600\" height=\"600\">\n",
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.004\"/>\n");
    for i in 0..poly.n() {
        writeln!(
            s,
            "<polyline class=\"edge\" fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"0.006\" points=\"{}\"/>",
            polyline(&poly.edge(i), opts.samples)
        )
        .expect("string write");
    }
    if opts.butterflies && doc.kind == KIND_ORDINARY_REDUCED {
        if let Ok(bflies) = extract_butterflies(&poly, doc.w) {
            for b in &bflies {
                writeln!(
                    s,
                    "<polyline class=\"butterfly\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.003\" points=\"{}\"/>",
                    polyline(&GeodesicSegment::new(b.v, b.t), opts.samples)
                )
                .expect("string write");
            }
        }
    }
    for v in poly.vertices() {
        let z = v.to_poincare();
        writeln!(s, "<circle class=\"vertex\" cx=\"{:.15}\" cy=\"{:.15}\" r=\"0.012\" fill=\"#1f3a93\"/>", z[0], z[1])
            .expect("string write");
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::redpoly::regular_polygon;

    fn doc() -> PolygonDocument {
        PolygonDocument::from_polygon(KIND_ORDINARY_REDUCED, &regular_polygon(5, 1.0).unwrap(), 1.0)
    }

    #[test]
    fn deterministic_output() {
        let a = render_svg(&doc(), &SvgOptions::default()).unwrap();
        let b = render_svg(&doc(), &SvgOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("viewBox=\"-1.05 -1.05 2.1 2.1\""));
        assert_eq!(a.matches("class=\"edge\"").count(), 5);
        assert_eq!(a.matches("class=\"butterfly\"").count(), 5);
    }

    #[test]
    fn edge_endpoints_are_vertex_images() {
        let d = doc();
        let svg = render_svg(&d, &SvgOptions { samples: 16, butterflies: false }).unwrap();
        let pts = d.points().unwrap();
        for (i, line) in svg.lines().filter(|l| l.contains("class=\"edge\"")).enumerate() {
            let list = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
            let coords: Vec<[f64; 2]> = list
                .split(' ')
                .map(|p| {
                    let mut it = p.split(',').map(|x| x.parse::<f64>().unwrap());
                    [it.next().unwrap(), it.next().unwrap()]
                })
                .collect();
            assert_eq!(coords.len(), 16);
            for (c, v) in [(coords[0], &pts[i]), (coords[15], &pts[(i + 1) % 5])] {
                let z = v.to_poincare();
                assert!((c[0] - z[0]).abs() < 1e-12 && (c[1] - z[1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vertex_radii_are_equal_for_centred_regular_polygon() {
        let svg = render_svg(&doc(), &SvgOptions::default()).unwrap();
        let radii: Vec<f64> = svg
            .lines()
            .filter(|l| l.contains("class=\"vertex\""))
            .map(|l| {
                let get = |key: &str| -> f64 {
                    l.split(key).nth(1).unwrap().split('"').next().unwrap().parse().unwrap()
                };
                get("cx=\"").hypot(get("cy=\""))
            })
            .collect();
        assert_eq!(radii.len(), 5);
        assert!(radii.iter().all(|r| (r - radii[0]).abs() < 1e-12));
    }
}
