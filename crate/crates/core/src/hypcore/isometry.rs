use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use super::line::HLine;
use super::point::{boost_to, minkowski, signed_tangent_angle, HPoint};
use crate::error::{Error, Result};

/// Trace margin from 3 under which elliptic/hyperbolic cannot be told apart.
pub const PARABOLIC_MARGIN: f64 = 1e-8;
/// Max-entry distance from the identity matrix treated as the identity.
pub const IDENTITY_TOL: f64 = 1e-10;

fn metric() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0))
}

/// Classification of an isometry of the hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryClass {
    Identity,
    /// Rotation about an interior fixed point by a counter-clockwise angle in [0, 2π).
    Elliptic { fixed: HPoint, angle: f64 },
    Parabolic,
    /// Translation along an axis by `length`.
    Hyperbolic { length: f64 },
    OrientationReversing,
}

impl IsometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic { .. } => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
            IsometryClass::OrientationReversing => "orientation-reversing",
        }
    }
}

/// A linear map of Minkowski space preserving the form and the upper sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    matrix: Matrix3<f64>,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            matrix: Matrix3::identity(),
        }
    }

    /// Wraps a matrix after checking MᵀJM = J within `tol` and that it keeps the upper sheet.
    pub fn from_matrix(m: Matrix3<f64>, tol: f64) -> Result<Self> {
        let j = metric();
        let dev = (m.transpose() * j * m - j).amax();
        if !(dev <= tol) || m[(0, 0)] <= 0.0 {
            return Err(Error::DomainError {
                what: "isometry matrix (Minkowski form not preserved)",
                value: dev,
            });
        }
        Ok(Isometry { matrix: m })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    /// Applies the map, renormalizing the image onto the sheet.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::from_timelike(self.matrix * p.coords())
    }

    /// Applies the linear part to a tangent (or any) vector.
    pub fn apply_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            matrix: self.matrix * other.matrix,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let j = metric();
        Isometry {
            matrix: j * self.matrix.transpose() * j,
        }
    }

    /// Largest entry of MᵀJM − J.
    pub fn form_residual(&self) -> f64 {
        let j = metric();
        (self.matrix.transpose() * j * self.matrix - j).amax()
    }

    pub fn classify(&self) -> Result<IsometryClass> {
        classify(self)
    }
}

/// Counter-clockwise rotation by `theta` about `p`.
pub fn rotation_about(p: &HPoint, theta: f64) -> Isometry {
    let (c, s) = (theta.cos(), theta.sin());
    let r = Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c);
    let b = boost_to(p);
    let binv = metric() * b.transpose() * metric();
    Isometry {
        matrix: b * r * binv,
    }
}

/// Translation by signed distance `t` along `line`, in the direction of its orientation.
pub fn translation_along(line: &HLine, t: f64) -> Isometry {
    let f = line.foot(&HPoint::origin());
    let e = line.direction_at(&f);
    let frame = Matrix3::from_columns(&[*f.coords(), e, *line.normal()]);
    let (c, s) = (t.cosh(), t.sinh());
    let boost = Matrix3::new(c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
    let inv = metric() * frame.transpose() * metric();
    Isometry {
        matrix: frame * boost * inv,
    }
}

/// Identity / elliptic / parabolic / hyperbolic / orientation-reversing, from the trace.
pub fn classify(iso: &Isometry) -> Result<IsometryClass> {
    let m = iso.matrix();
    if m.determinant() < 0.0 {
        return Ok(IsometryClass::OrientationReversing);
    }
    if (m - Matrix3::identity()).amax() <= IDENTITY_TOL {
        return Ok(IsometryClass::Identity);
    }
    let tr = m.trace();
    let margin = (tr - 3.0).abs();
    if margin < PARABOLIC_MARGIN {
        return Err(Error::IllConditioned { margin });
    }
    if tr > 3.0 {
        // tr = 1 + 2 cosh(length)
        let length = (0.5 * (tr - 1.0)).acosh();
        return Ok(IsometryClass::Hyperbolic { length });
    }
    let fixed = fixed_point(m)?;
    let e = fixed.tangent_at_angle(0.0);
    let img = m * e;
    let mut angle = signed_tangent_angle(&fixed, &e, &img);
    if angle < 0.0 {
        angle += 2.0 * PI;
    }
    Ok(IsometryClass::Elliptic { fixed, angle })
}

/// Timelike eigenvector of eigenvalue 1, from the widest cross product of rows of M − I.
fn fixed_point(m: &Matrix3<f64>) -> Result<HPoint> {
    let a = m - Matrix3::identity();
    let rows = [a.row(0).transpose(), a.row(1).transpose(), a.row(2).transpose()];
    let best = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| rows[i].cross(&rows[j]))
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .expect("three candidate pairs");
    if minkowski(&best, &best) >= 0.0 {
        return Err(Error::IllConditioned { margin: 0.0 });
    }
    Ok(HPoint::from_timelike(best))
}
