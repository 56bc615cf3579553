use nalgebra::Vector3;

use super::point::{lorentz_cross, minkowski, HPoint};
use crate::error::{Error, Result};

/// Below this separation two points are treated as one.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// An oriented geodesic, stored as its unit spacelike normal `u`.
///
/// The positive side is {p : ⟨p,u⟩ > 0}; for [`line_through`]`(p, q)` it is the
/// left-hand side when travelling from `p` to `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLine {
    normal: Vector3<f64>,
}

impl HLine {
    /// Builds a line from any spacelike normal vector.
    pub fn from_normal(n: Vector3<f64>) -> Result<Self> {
        let q = minkowski(&n, &n);
        if !(q > 0.0) {
            return Err(Error::DomainError {
                what: "line normal (must be spacelike)",
                value: q,
            });
        }
        Ok(HLine {
            normal: n / q.sqrt(),
        })
    }

    /// The geodesic through `p` with unit tangent `dir`, oriented along `dir`.
    pub fn through_point_with_direction(p: &HPoint, dir: &Vector3<f64>) -> Self {
        let n = lorentz_cross(p.coords(), dir);
        let q = minkowski(&n, &n);
        HLine {
            normal: n / q.sqrt(),
        }
    }

    pub fn normal(&self) -> &Vector3<f64> {
        &self.normal
    }

    pub fn flipped(&self) -> Self {
        HLine {
            normal: -self.normal,
        }
    }

    /// Signed distance from `p`: positive on the left of the orientation.
    pub fn signed_distance(&self, p: &HPoint) -> f64 {
        minkowski(p.coords(), &self.normal).asinh()
    }

    /// Closest point of the line to `p`.
    pub fn foot(&self, p: &HPoint) -> HPoint {
        let s = minkowski(p.coords(), &self.normal);
        if s == 0.0 {
            return *p;
        }
        HPoint::from_timelike(p.coords() - self.normal * s)
    }

    /// Unit tangent of the line at a point `p` on it, pointing along the orientation.
    pub fn direction_at(&self, p: &HPoint) -> Vector3<f64> {
        let e = lorentz_cross(&self.normal, p.coords());
        e / minkowski(&e, &e).sqrt()
    }

    /// Arc-length parameterization anchored at the foot of the base point.
    pub fn point_at(&self, s: f64) -> HPoint {
        let f = self.foot(&HPoint::origin());
        f.exp(&self.direction_at(&f), s)
    }

    /// Arc-length coordinate of the projection of `p` onto the line, in the
    /// parameterization of [`HLine::point_at`].
    pub fn coordinate_of(&self, p: &HPoint) -> f64 {
        let f = self.foot(&HPoint::origin());
        let e = self.direction_at(&f);
        let q = self.foot(p);
        // q = cosh(s) f + sinh(s) e
        minkowski(q.coords(), &e).asinh()
    }

    /// Intersection point with another line, if they cross inside the plane.
    pub fn intersection(&self, other: &HLine) -> Option<HPoint> {
        let x = lorentz_cross(&self.normal, &other.normal);
        if minkowski(&x, &x) < -1e-30 {
            Some(HPoint::from_timelike(x))
        } else {
            None
        }
    }

    /// Distance between two non-intersecting lines (length of the common
    /// perpendicular); zero when they meet or are asymptotically parallel.
    pub fn line_distance(&self, other: &HLine) -> f64 {
        let c = minkowski(&self.normal, &other.normal).abs();
        if c <= 1.0 {
            0.0
        } else {
            c.acosh()
        }
    }
}

/// The line through two distinct points, positive side on the left of `p → q`.
pub fn line_through(p: &HPoint, q: &HPoint) -> Result<HLine> {
    if p.distance(q) <= COINCIDENCE_TOL {
        return Err(Error::DegeneratePoints("line through coincident points"));
    }
    HLine::from_normal(lorentz_cross(p.coords(), q.coords()))
}

/// Signed distance from `p` to `line`.
pub fn point_line_distance(p: &HPoint, line: &HLine) -> f64 {
    line.signed_distance(p)
}

/// Orthogonal projection of `p` onto `line`.
pub fn foot_of_perpendicular(p: &HPoint, line: &HLine) -> HPoint {
    line.foot(p)
}

/// A geodesic segment `[a, b]`; `a == b` is the degenerate segment `{a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub a: HPoint,
    pub b: HPoint,
}

impl GeodesicSegment {
    pub fn new(a: HPoint, b: HPoint) -> Self {
        GeodesicSegment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }

    /// Point at fraction `s ∈ [0, 1]` of the arc length from `a`.
    pub fn point_at(&self, s: f64) -> HPoint {
        let d = self.length();
        if d <= COINCIDENCE_TOL {
            return self.a;
        }
        let (wa, wb) = (((1.0 - s) * d).sinh(), (s * d).sinh());
        HPoint::from_timelike((self.a.coords() * wa + self.b.coords() * wb) / d.sinh())
    }

    /// Whether `p` lies on the segment within `tol` (distance along and across).
    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        (p.distance(&self.a) + p.distance(&self.b) - self.length()).abs() <= tol
    }
}

/// Tolerance used for side tests in [`segment_intersection`].
const SIDE_TOL: f64 = 1e-13;

fn sign_with_tol(x: f64) -> i8 {
    if x > SIDE_TOL {
        1
    } else if x < -SIDE_TOL {
        -1
    } else {
        0
    }
}

/// Common point of two segments. Endpoint contact counts as an intersection;
/// segments sharing a sub-segment yield [`Error::CollinearOverlap`].
pub fn segment_intersection(s1: &GeodesicSegment, s2: &GeodesicSegment) -> Result<Option<HPoint>> {
    let l1 = line_through(&s1.a, &s1.b)?;
    let l2 = line_through(&s2.a, &s2.b)?;
    let (c, d) = (
        sign_with_tol(l1.signed_distance(&s2.a)),
        sign_with_tol(l1.signed_distance(&s2.b)),
    );
    if c == 0 && d == 0 {
        return collinear_case(s1, s2, &l1);
    }
    if c * d > 0 {
        return Ok(None);
    }
    let (a, b) = (
        sign_with_tol(l2.signed_distance(&s1.a)),
        sign_with_tol(l2.signed_distance(&s1.b)),
    );
    if a * b > 0 {
        return Ok(None);
    }
    // exact endpoint contact
    for (sign, p) in [(a, s1.a), (b, s1.b)] {
        if sign == 0 {
            return Ok(Some(p));
        }
    }
    for (sign, p) in [(c, s2.a), (d, s2.b)] {
        if sign == 0 {
            return Ok(Some(p));
        }
    }
    Ok(l1.intersection(&l2))
}

fn collinear_case(s1: &GeodesicSegment, s2: &GeodesicSegment, line: &HLine) -> Result<Option<HPoint>> {
    let iv = |s: &GeodesicSegment| {
        let (x, y) = (line.coordinate_of(&s.a), line.coordinate_of(&s.b));
        (x.min(y), x.max(y))
    };
    let (lo1, hi1) = iv(s1);
    let (lo2, hi2) = iv(s2);
    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    if hi < lo - COINCIDENCE_TOL {
        Ok(None)
    } else if hi - lo <= COINCIDENCE_TOL {
        Ok(Some(line.point_at(0.5 * (lo + hi))))
    } else {
        Err(Error::CollinearOverlap)
    }
}
