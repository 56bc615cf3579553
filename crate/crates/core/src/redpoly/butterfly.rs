use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypcore::{
    angle, line_through, minkowski, rotation_about, segment_intersection, translation_along, GeodesicSegment, HLine,
    HPoint, Isometry, IsometryClass,
};
use crate::polygeom::ConvexPolygon;

/// Allowed deviation of a vertex-to-opposite-side distance from `w` during extraction.
pub const EXTRACTION_DISTANCE_TOL: f64 = 1e-7;
/// Minimum barycentric margin of a foot from the ends of its side.
pub const FOOT_MARGIN: f64 = 1e-10;
/// Point-in-triangle slack for the covering test.
pub const COVER_TOL: f64 = 1e-9;
/// Tolerance on the closure half-turn, for both the angle and the fixed point.
pub const CLOSURE_TOL: f64 = 1e-7;

/// Index offsets of the side opposite vertex `i`: `(i + (n−1)/2, i + (n+1)/2)` mod n.
pub fn opposite_side(n: usize, i: usize) -> (usize, usize) {
    ((i + (n - 1) / 2) % n, (i + (n + 1) / 2) % n)
}

/// The butterfly around the crossing of `[v_i, t_i]` with `[v_m, t_m]`, `m = i + (n+1)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ButterflyData {
    pub index: usize,
    /// `m = i + (n+1)/2` mod n.
    pub partner: usize,
    pub v: HPoint,
    /// Foot of `v` on its opposite side.
    pub t: HPoint,
    /// Crossing of `[v_i, t_i]` and `[v_m, t_m]`.
    pub p: HPoint,
    /// `d(p, t_i)`.
    pub b: f64,
    /// `d(p, v_m)`.
    pub c: f64,
    /// Angle at `p` between `t_i` and `v_m`.
    pub phi: f64,
    /// Angle at `v_m` between `t_i` and `p`.
    pub alpha: f64,
    /// Barycentric position of `t` along its side, in (0, 1).
    pub foot_fraction: f64,
    /// Signed distance of `v` from its opposite side line.
    pub height: f64,
    /// The line through `v` and `t`.
    pub line: HLine,
}

fn foot_on_opposite(poly: &ConvexPolygon, i: usize) -> Result<(HPoint, f64, f64, HLine)> {
    let n = poly.n();
    let (a, b) = opposite_side(n, i);
    let (va, vb) = (poly.vertex(a), poly.vertex(b));
    let side = line_through(va, vb)?;
    let v = poly.vertex(i);
    let t = side.foot(v);
    let (sa, sb, st) = (side.coordinate_of(va), side.coordinate_of(vb), side.coordinate_of(&t));
    Ok((t, (st - sa) / (sb - sa), side.signed_distance(v), side))
}

/// Per-vertex feet, heights and foot fractions, without requiring the distances to equal `w`.
pub fn vertex_heights(poly: &ConvexPolygon) -> Result<Vec<(HPoint, f64, f64)>> {
    (0..poly.n())
        .map(|i| foot_on_opposite(poly, i).map(|(t, frac, h, _)| (t, h, frac)))
        .collect()
}

/// Computes every butterfly of an odd polygon whose vertices sit at distance `w`
/// from their opposite sides.
pub fn extract_butterflies(poly: &ConvexPolygon, w: f64) -> Result<Vec<ButterflyData>> {
    let n = poly.n();
    if n % 2 == 0 {
        return Err(Error::InvalidN(n));
    }
    let mut feet = Vec::with_capacity(n);
    for i in 0..n {
        let (t, frac, h, _) = foot_on_opposite(poly, i)?;
        if (h - w).abs() > EXTRACTION_DISTANCE_TOL {
            return Err(Error::NotOrdinaryReduced(format!(
                "vertex {i} is at distance {h} from its opposite side, expected {w}"
            )));
        }
        if !(frac >= FOOT_MARGIN && frac <= 1.0 - FOOT_MARGIN) {
            return Err(Error::NotOrdinaryReduced(format!(
                "foot of vertex {i} is not interior to its side (fraction {frac})"
            )));
        }
        feet.push((t, frac, h));
    }
    let k = (n + 1) / 2;
    (0..n)
        .map(|i| {
            let m = (i + k) % n;
            let (v, vm) = (*poly.vertex(i), *poly.vertex(m));
            let (t, frac, h) = feet[i];
            let tm = feet[m].0;
            let p = segment_intersection(&GeodesicSegment::new(v, t), &GeodesicSegment::new(vm, tm))
                .map_err(|e| Error::NotOrdinaryReduced(format!("butterfly {i}: {e}")))?
                .ok_or_else(|| {
                    Error::NotOrdinaryReduced(format!("segments of butterfly {i} do not cross"))
                })?;
            let nd = |e: Error| Error::NotOrdinaryReduced(format!("butterfly {i}: {e}"));
            Ok(ButterflyData {
                index: i,
                partner: m,
                v,
                t,
                p,
                b: p.distance(&t),
                c: p.distance(&vm),
                phi: angle(&t, &p, &vm).map_err(nd)?,
                alpha: angle(&t, &vm, &p).map_err(nd)?,
                foot_fraction: frac,
                height: h,
                line: line_through(&v, &t)?,
            })
        })
        .collect()
}

/// Congruence residuals between the two triangles of butterfly `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruenceResiduals {
    /// `|d(p, v_i) − d(p, v_m)|`
    pub vertex_legs: f64,
    /// `|d(p, t_i) − d(p, t_m)|`
    pub foot_legs: f64,
    /// `|∠(v_i, p, t_m) − ∠(t_i, p, v_m)|`
    pub vertical_angles: f64,
    /// Difference of the two triangle areas.
    pub areas: f64,
}

impl CongruenceResiduals {
    pub fn max(&self) -> f64 {
        self.vertex_legs
            .max(self.foot_legs)
            .max(self.vertical_angles)
            .max(self.areas)
    }
}

fn triangle_area(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    let s = angle(b, a, c).unwrap_or(0.0) + angle(a, b, c).unwrap_or(0.0) + angle(a, c, b).unwrap_or(0.0);
    PI - s
}

/// Compares the triangle `(p, t_i, v_m)` of `bfly` with `(p, t_m, v_i)`, where
/// `partner` is the butterfly of index `m`.
pub fn congruence_check(bfly: &ButterflyData, partner: &ButterflyData) -> CongruenceResiduals {
    let (p, vi, ti, vm, tm) = (&bfly.p, &bfly.v, &bfly.t, &partner.v, &partner.t);
    CongruenceResiduals {
        vertex_legs: (p.distance(vi) - p.distance(vm)).abs(),
        foot_legs: (p.distance(ti) - p.distance(tm)).abs(),
        vertical_angles: (angle(vi, p, tm).unwrap_or(f64::NAN) - angle(ti, p, vm).unwrap_or(f64::NAN)).abs(),
        areas: (triangle_area(p, ti, vm) - triangle_area(p, tm, vi)).abs(),
    }
}

/// Outward violation of `q` from the closed geodesic triangle `abc` (≤ 0 inside).
pub fn triangle_violation(tri: &[HPoint; 3], q: &HPoint) -> f64 {
    let mut worst = f64::MIN;
    let orient = match line_through(&tri[0], &tri[1]) {
        Ok(l) => l.signed_distance(&tri[2]).signum(),
        Err(_) => return f64::INFINITY,
    };
    for k in 0..3 {
        match line_through(&tri[k], &tri[(k + 1) % 3]) {
            Ok(l) => worst = worst.max(-orient * l.signed_distance(q)),
            Err(_) => return f64::INFINITY,
        }
    }
    worst
}

/// The two triangles `(p, t_i, v_m)` and `(p, t_m, v_i)` making up butterfly `i`.
pub fn butterfly_triangles(bflies: &[ButterflyData], i: usize) -> [[HPoint; 3]; 2] {
    let b = &bflies[i];
    let m = &bflies[b.partner];
    [[b.p, b.t, m.v], [b.p, m.t, b.v]]
}

/// Smallest violation of `q` over all butterflies, with the index attaining it.
pub fn nearest_butterfly(bflies: &[ButterflyData], q: &HPoint) -> (usize, f64) {
    (0..bflies.len())
        .map(|i| {
            let v = butterfly_triangles(bflies, i)
                .iter()
                .map(|t| triangle_violation(t, q))
                .fold(f64::INFINITY, f64::min);
            (i, v)
        })
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

/// Outcome of a covering test.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageStats {
    /// Points drawn inside the polygon.
    pub samples: usize,
    /// Points outside every butterfly, with their disk coordinates and nearest violation.
    pub gaps: Vec<([f64; 2], f64)>,
    /// Largest violation of the polygon by points drawn inside butterflies.
    pub containment_violation: f64,
}

impl CoverageStats {
    pub fn into_result(self) -> Result<CoverageStats> {
        match self.gaps.first() {
            Some(&(z, nearest)) => Err(Error::CoverageGap {
                x: z[0],
                y: z[1],
                nearest,
            }),
            None if self.containment_violation > COVER_TOL => Err(Error::ValidationFailure(format!(
                "butterfly leaves the polygon by {:e}",
                self.containment_violation
            ))),
            None => Ok(self),
        }
    }
}

/// Draws `m` points uniformly with respect to hyperbolic area in `poly` and tests
/// each against the butterflies; also draws `per_butterfly` points in each
/// butterfly triangle and measures how far they leave `poly`.
pub fn coverage(
    poly: &ConvexPolygon,
    bflies: &[ButterflyData],
    m: usize,
    per_butterfly: usize,
    seed: u64,
) -> CoverageStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disk: Vec<[f64; 2]> = poly.vertices().iter().map(HPoint::to_poincare).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for z in &disk {
        for k in 0..2 {
            lo[k] = lo[k].min(z[k]);
            hi[k] = hi[k].max(z[k]);
        }
    }
    // the density 4/(1−|z|²)² peaks at the farthest vertex, since distance from the
    // base point is convex along geodesics
    let rmax2 = disk.iter().map(|z| z[0] * z[0] + z[1] * z[1]).fold(0.0, f64::max);
    let density = |r2: f64| 1.0 / ((1.0 - r2) * (1.0 - r2));
    let dmax = density(rmax2);
    let mut gaps = Vec::new();
    let mut accepted = 0;
    while accepted < m {
        let z = [rng.random_range(lo[0]..=hi[0]), rng.random_range(lo[1]..=hi[1])];
        let r2 = z[0] * z[0] + z[1] * z[1];
        if r2 >= 1.0 || rng.random::<f64>() * dmax > density(r2) {
            continue;
        }
        let q = HPoint::from_poincare(z).expect("inside the disk");
        if !poly.contains(&q, 0.0) {
            continue;
        }
        accepted += 1;
        let (_, v) = nearest_butterfly(bflies, &q);
        if v > COVER_TOL {
            gaps.push((z, v));
        }
    }
    let mut containment: f64 = f64::MIN;
    for i in 0..bflies.len() {
        for tri in butterfly_triangles(bflies, i) {
            for k in 0..per_butterfly.max(1) {
                let q = if k < 3 {
                    tri[k]
                } else {
                    let l: [f64; 3] = [rng.random(), rng.random(), rng.random()];
                    let v = tri[0].coords() * l[0] + tri[1].coords() * l[1] + tri[2].coords() * l[2];
                    let q2 = -minkowski(&v, &v);
                    HPoint::new(v[0] / q2.sqrt(), v[1] / q2.sqrt(), v[2] / q2.sqrt(), 1e-9)
                        .expect("positive combination of sheet points is timelike")
                };
                containment = containment.max(poly.boundary_violation(&q));
            }
        }
    }
    CoverageStats {
        samples: accepted,
        gaps,
        containment_violation: containment,
    }
}

/// The composition of alternating rotations at the crossings `p_j` and
/// translations `p_j → p_{j+(n+1)/2}` around the full index cycle, starting at `p_0`.
///
/// A moving frame starts at `p_0` along `ℓ_0`. At each crossing it turns through
/// the acute angle onto the next line and then slides along it to the next
/// crossing. The result is returned unclassified; see [`check_closure`].
pub fn closure_composition(bflies: &[ButterflyData]) -> Result<Isometry> {
    let n = bflies.len();
    let k = (n + 1) / 2;
    let mut g = Isometry::identity();
    let b0 = &bflies[0];
    let mut dir = b0.p.tangent_toward(&b0.v).or_else(|_| b0.p.tangent_toward(&b0.t))?;
    let mut j = 0;
    for _ in 0..n {
        let here = &bflies[j];
        let next = &bflies[(j + k) % n];
        let p = here.p;
        // ℓ_{j+k} passes through p_j; take its direction making an acute angle with `dir`
        let mut d = p
            .tangent_toward(&next.v)
            .or_else(|_| p.tangent_toward(&next.t))?;
        if minkowski(&d, &dir) < 0.0 {
            d = -d;
        }
        let m = nalgebra::Matrix3::from_columns(&[*p.coords(), dir, d]);
        let theta = m.determinant().atan2(minkowski(&dir, &d));
        let rot = rotation_about(&p, theta);
        let line = HLine::through_point_with_direction(&p, &d);
        let s = line.coordinate_of(&next.p) - line.coordinate_of(&p);
        let tr = translation_along(&line, s);
        g = tr.compose(&rot).compose(&g);
        dir = tr.apply_vector(&d);
        j = (j + k) % n;
    }
    Ok(g)
}

/// Signed area enclosed by the cycle of crossings `p_0 → p_k → p_2k → …`, `k = (n+1)/2`,
/// summed as signed triangles from the base point.
pub fn crossing_cycle_area(bflies: &[ButterflyData]) -> f64 {
    let n = bflies.len();
    let k = (n + 1) / 2;
    let o = HPoint::origin();
    let mut j = 0;
    let mut area = 0.0;
    for _ in 0..n {
        let next = (j + k) % n;
        area += signed_triangle_area(&o, &bflies[j].p, &bflies[next].p);
        j = next;
    }
    area
}

// tan(Δ/2) = det(a, b, c) / (1 − ⟨a,b⟩ − ⟨b,c⟩ − ⟨c,a⟩), signed by orientation
fn signed_triangle_area(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    let m = nalgebra::Matrix3::from_columns(&[*a.coords(), *b.coords(), *c.coords()]);
    let den = 1.0
        - minkowski(a.coords(), b.coords())
        - minkowski(b.coords(), c.coords())
        - minkowski(c.coords(), a.coords());
    2.0 * m.determinant().atan2(den)
}

/// Checks that the closure composition is a half-turn about `p_0`.
pub fn check_closure(bflies: &[ButterflyData], g: &Isometry) -> Result<(f64, f64)> {
    match g.classify() {
        Ok(IsometryClass::Elliptic { fixed, angle }) => {
            let da = (angle - PI).abs();
            let dp = fixed.distance(&bflies[0].p);
            if da <= CLOSURE_TOL && dp <= CLOSURE_TOL {
                Ok((da, dp))
            } else {
                Err(Error::ClosureViolation(format!(
                    "rotation by {angle} about a point {dp:e} from p_1"
                )))
            }
        }
        Ok(other) => Err(Error::ClosureViolation(format!("composition is {}", other.name()))),
        Err(e) => Err(Error::ClosureViolation(e.to_string())),
    }
}
