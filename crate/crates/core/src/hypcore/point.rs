use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Deviation from ⟨p,p⟩ = −1 above which a point is pulled back onto the sheet.
pub(crate) const SHEET_TOL: f64 = 1e-12;

/// Minkowski bilinear form with signature (−,+,+).
#[inline]
pub fn minkowski(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Lorentzian cross product `J (a × b)`; Minkowski-orthogonal to both factors.
#[inline]
pub fn lorentz_cross(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let c = a.cross(b);
    Vector3::new(-c[0], c[1], c[2])
}

/// A point of the hyperbolic plane on the upper sheet of ⟨p,p⟩ = −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    coords: Vector3<f64>,
}

impl HPoint {
    /// The base point (1, 0, 0).
    pub fn origin() -> Self {
        HPoint {
            coords: Vector3::new(1.0, 0.0, 0.0),
        }
    }

    /// Checked constructor. Coordinates within `tol` of the sheet are accepted and,
    /// when they drift by more than 1e−12, renormalized.
    pub fn new(x0: f64, x1: f64, x2: f64, tol: f64) -> Result<Self> {
        let v = Vector3::new(x0, x1, x2);
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::Malformed("non-finite coordinate".into()));
        }
        let q = minkowski(&v, &v);
        if (q + 1.0).abs() > tol || x0 <= 0.0 {
            return Err(Error::NotOnHyperboloid(q));
        }
        if (q + 1.0).abs() > SHEET_TOL {
            Ok(Self::from_timelike(v))
        } else {
            Ok(HPoint { coords: v })
        }
    }

    /// Projects a timelike vector onto the upper sheet. The caller guarantees ⟨v,v⟩ < 0.
    pub(crate) fn from_timelike(v: Vector3<f64>) -> Self {
        let q = -minkowski(&v, &v);
        debug_assert!(q > 0.0, "vector is not timelike");
        let mut c = v / q.sqrt();
        if c[0] < 0.0 {
            c = -c;
        }
        HPoint { coords: c }
    }

    /// Point at distance `r` from the base point in direction `theta`.
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let s = r.sinh();
        HPoint {
            coords: Vector3::new(r.cosh(), s * theta.cos(), s * theta.sin()),
        }
    }

    /// Inverse of [`HPoint::to_poincare`].
    pub fn from_poincare(z: [f64; 2]) -> Result<Self> {
        let n2 = z[0] * z[0] + z[1] * z[1];
        if !(n2 < 1.0) || !z[0].is_finite() || !z[1].is_finite() {
            return Err(Error::OutsideDisk { x: z[0], y: z[1] });
        }
        let d = 1.0 - n2;
        Ok(HPoint {
            coords: Vector3::new((1.0 + n2) / d, 2.0 * z[0] / d, 2.0 * z[1] / d),
        })
    }

    /// Stereographic projection to the Poincaré disk.
    pub fn to_poincare(&self) -> [f64; 2] {
        let d = 1.0 + self.coords[0];
        [self.coords[1] / d, self.coords[2] / d]
    }

    /// Projection to the Beltrami–Klein disk, where geodesics are chords.
    pub fn to_klein(&self) -> [f64; 2] {
        [self.coords[1] / self.coords[0], self.coords[2] / self.coords[0]]
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.coords
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.coords[0], self.coords[1], self.coords[2]]
    }

    /// Geodesic distance. Uses 2·asinh(‖p−q‖/2), which equals arcosh(−⟨p,q⟩)
    /// but keeps full precision for nearby points.
    pub fn distance(&self, other: &HPoint) -> f64 {
        let d = self.coords - other.coords;
        let m = minkowski(&d, &d).max(0.0);
        2.0 * (0.5 * m.sqrt()).asinh()
    }

    /// Unit tangent vector at `self` pointing along the geodesic toward `toward`.
    pub fn tangent_toward(&self, toward: &HPoint) -> Result<Vector3<f64>> {
        let p = &self.coords;
        let t = toward.coords + p * minkowski(&toward.coords, p);
        let n2 = minkowski(&t, &t);
        if n2 <= 1e-24 || self.distance(toward) <= 1e-12 {
            return Err(Error::DegeneratePoints("tangent toward a coincident point"));
        }
        Ok(t / n2.sqrt())
    }

    /// Exponential map: follows the unit tangent `dir` for arc length `s`.
    pub fn exp(&self, dir: &Vector3<f64>, s: f64) -> HPoint {
        Self::from_timelike(self.coords * s.cosh() + dir * s.sinh())
    }

    /// Rotates a tangent vector at `self` counter-clockwise by `theta`.
    pub fn rotate_tangent(&self, v: &Vector3<f64>, theta: f64) -> Vector3<f64> {
        v * theta.cos() + lorentz_cross(&self.coords, v) * theta.sin()
    }

    /// Unit tangent at `self` in direction `theta`, measured in the frame carried
    /// from the base point by the boost along the connecting geodesic.
    pub fn tangent_at_angle(&self, theta: f64) -> Vector3<f64> {
        let b = boost_to(self);
        b * Vector3::new(0.0, theta.cos(), theta.sin())
    }
}

/// Signed angle from tangent `a` to tangent `b` at `p`, counter-clockwise positive.
pub(crate) fn signed_tangent_angle(p: &HPoint, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let m = nalgebra::Matrix3::from_columns(&[*p.coords(), *a, *b]);
    m.determinant().atan2(minkowski(a, b))
}

/// Unsigned angle at `vertex` between the geodesics toward `a` and `b`, in [0, π].
pub fn angle(a: &HPoint, vertex: &HPoint, b: &HPoint) -> Result<f64> {
    Ok(signed_angle(a, vertex, b)?.abs())
}

/// Counter-clockwise angle at `vertex` from the direction of `a` to that of `b`, in (−π, π].
pub fn signed_angle(a: &HPoint, vertex: &HPoint, b: &HPoint) -> Result<f64> {
    let ta = vertex.tangent_toward(a)?;
    let tb = vertex.tangent_toward(b)?;
    Ok(signed_tangent_angle(vertex, &ta, &tb))
}

/// Lorentz boost carrying the base point to `p` without rotation.
pub(crate) fn boost_to(p: &HPoint) -> nalgebra::Matrix3<f64> {
    let [x0, x1, x2] = p.to_array();
    let k = 1.0 / (1.0 + x0);
    nalgebra::Matrix3::new(
        x0,
        x1,
        x2,
        x1,
        1.0 + x1 * x1 * k,
        x1 * x2 * k,
        x2,
        x1 * x2 * k,
        1.0 + x2 * x2 * k,
    )
}
