use proptest::prelude::*;

use hyperreduced::hypcore::{line_through, rotation_about, translation_along, HPoint};
use hyperreduced::polygeom::{diameter, gauss_bonnet_area, make_polygon, thickness, ConvexPolygon};

fn cloud() -> impl Strategy<Value = Vec<HPoint>> {
    prop::collection::vec((0.05f64..2.0, 0.0f64..std::f64::consts::TAU), 4..10)
        .prop_map(|v| v.into_iter().map(|(r, t)| HPoint::from_polar(r, t)).collect())
}

fn hull(points: &[HPoint]) -> Option<ConvexPolygon> {
    make_polygon(points).ok()
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Smallest barycentric coordinate of `q` in the Klein-model triangle `t`.
fn barycentric_min(t: [[f64; 2]; 3], q: [f64; 2]) -> f64 {
    let area = cross(t[0], t[1], t[2]);
    if area.abs() < 1e-12 {
        return f64::NEG_INFINITY;
    }
    [cross(q, t[1], t[2]), cross(t[0], q, t[2]), cross(t[0], t[1], q)]
        .iter()
        .map(|x| x / area)
        .fold(f64::INFINITY, f64::min)
}

// best containment margin of point k over all triangles of the other points
fn depth(klein: &[[f64; 2]], k: usize) -> f64 {
    let m = klein.len();
    let mut best = f64::NEG_INFINITY;
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                if [i, j, l].contains(&k) {
                    continue;
                }
                best = best.max(barycentric_min([klein[i], klein[j], klein[l]], klein[k]));
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_matches_brute_force(pts in cloud()) {
        let poly = hull(&pts);
        prop_assume!(poly.is_some());
        let poly = poly.unwrap();
        let klein: Vec<[f64; 2]> = pts.iter().map(HPoint::to_klein).collect();
        for v in poly.vertices() {
            prop_assert!(pts.iter().any(|p| p.distance(v) < 1e-9));
        }
        for (k, p) in pts.iter().enumerate() {
            prop_assert!(poly.contains(p, 1e-9));
            let is_vertex = poly.vertices().iter().any(|v| v.distance(p) < 1e-9);
            let d = depth(&klein, k);
            if d > 1e-6 {
                prop_assert!(!is_vertex, "interior point {k} kept as a vertex");
            }
            if d < -1e-6 && !pts.iter().enumerate().any(|(j, q)| j != k && q.distance(p) < 1e-6) {
                prop_assert!(is_vertex, "extreme point {k} missing from the hull");
            }
        }
    }

    #[test]
    fn measurements_are_isometry_invariant(
        pts in cloud(),
        theta in 0.0f64..6.0,
        shift in -1.5f64..1.5,
        centre in (0.0f64..1.5, 0.0f64..6.0),
    ) {
        let poly = hull(&pts);
        prop_assume!(poly.is_some());
        let poly = poly.unwrap();
        let c = HPoint::from_polar(centre.0, centre.1);
        let axis = line_through(&HPoint::origin(), &HPoint::from_polar(1.0, centre.1 + 1.0)).unwrap();
        let g = translation_along(&axis, shift).compose(&rotation_about(&c, theta));
        let moved = ConvexPolygon::new(poly.vertices().iter().map(|v| g.apply(v)).collect());
        prop_assume!(moved.is_ok());
        let moved = moved.unwrap();
        prop_assert!((gauss_bonnet_area(&poly) - gauss_bonnet_area(&moved)).abs() < 1e-9);
        prop_assert!((diameter(&poly) - diameter(&moved)).abs() < 1e-9);
        prop_assert!((thickness(&poly).0 - thickness(&moved).0).abs() < 1e-8);
    }

    #[test]
    fn thickness_shrinks_on_sub_hulls(pts in cloud(), mask in prop::collection::vec(any::<bool>(), 10)) {
        let full = hull(&pts);
        prop_assume!(full.is_some());
        let sub: Vec<HPoint> = pts.iter().zip(&mask).filter(|(_, &m)| m).map(|(p, _)| *p).collect();
        let part = if sub.len() >= 3 { hull(&sub) } else { None };
        prop_assume!(part.is_some());
        prop_assert!(thickness(&part.unwrap()).0 <= thickness(&full.unwrap()).0 + 1e-9);
    }

    #[test]
    fn diameter_bounds_sampled_pairs(pts in cloud(), s in prop::collection::vec(0.0f64..1.0, 8)) {
        let poly = hull(&pts);
        prop_assume!(poly.is_some());
        let poly = poly.unwrap();
        let d = diameter(&poly);
        let n = poly.n();
        let mut brute = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                brute = brute.max(poly.vertex(i).distance(poly.vertex(j)));
            }
        }
        prop_assert!((d - brute).abs() < 1e-12);
        let samples: Vec<HPoint> = s.iter().enumerate().map(|(k, &t)| poly.edge(k % n).point_at(t)).collect();
        for a in &samples {
            for b in &samples {
                prop_assert!(a.distance(b) <= d + 1e-9);
            }
        }
        prop_assert!(thickness(&poly).0 <= d + 1e-9);
    }
}
