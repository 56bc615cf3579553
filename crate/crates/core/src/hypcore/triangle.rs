use super::line::line_through;
use super::point::{angle, HPoint};
use crate::error::{Error, Result};

/// Minimum side length and collinearity margin for a usable triangle.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Relative residuals of the law of sines and Napier's analogy on one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleResiduals {
    /// (max − min) / max of sin(angle) / sinh(opposite side).
    pub law_of_sines: f64,
    /// Worst relative mismatch of cot(γ/2) = tan((α+β)/2)·cosh((a+b)/2)/cosh((a−b)/2)
    /// over the three labellings.
    pub napier: f64,
    /// π minus the angle sum, which is the area and must be positive.
    pub angle_defect: f64,
}

impl TriangleResiduals {
    pub fn max(&self) -> f64 {
        self.law_of_sines.max(self.napier)
    }
}

/// Interior angles (at a, b, c) and opposite side lengths of a triangle.
pub fn triangle_parts(a: &HPoint, b: &HPoint, c: &HPoint) -> Result<([f64; 3], [f64; 3])> {
    let sides = [b.distance(c), c.distance(a), a.distance(b)];
    if sides.iter().any(|&s| s <= DEGENERACY_TOL) {
        return Err(Error::DegenerateTriangle);
    }
    let l = line_through(a, b)?;
    if l.signed_distance(c).abs() <= DEGENERACY_TOL {
        return Err(Error::DegenerateTriangle);
    }
    let angles = [angle(b, a, c)?, angle(c, b, a)?, angle(a, c, b)?];
    Ok((angles, sides))
}

pub fn triangle_relations_residual(a: &HPoint, b: &HPoint, c: &HPoint) -> Result<TriangleResiduals> {
    let (ang, side) = triangle_parts(a, b, c)?;
    let ratios: Vec<f64> = (0..3).map(|k| ang[k].sin() / side[k].sinh()).collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let law_of_sines = (hi - lo) / hi;

    let napier = (0..3)
        .map(|k| {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let lhs = 1.0 / (0.5 * ang[k]).tan();
            let rhs = (0.5 * (ang[i] + ang[j])).tan() * (0.5 * (side[i] + side[j])).cosh()
                / (0.5 * (side[i] - side[j])).cosh();
            (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
        })
        .fold(0.0, f64::max);

    Ok(TriangleResiduals {
        law_of_sines,
        napier,
        angle_defect: std::f64::consts::PI - ang.iter().sum::<f64>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypcore::isometry::rotation_about;
    use std::f64::consts::PI;

    #[test]
    fn equilateral_from_rotations() {
        let a = HPoint::from_polar(1.3, 0.2);
        let r = rotation_about(&HPoint::origin(), 2.0 * PI / 3.0);
        let b = r.apply(&a);
        let c = r.apply(&b);
        let res = triangle_relations_residual(&a, &b, &c).unwrap();
        assert!(res.max() <= 1e-10, "{res:?}");
        assert!(res.angle_defect > 0.0);
    }

    #[test]
    fn right_triangle_cosine_relation() {
        // right angle at t; legs b (t→p) and the hypotenuse c (p→v)
        let t = HPoint::origin();
        let b = 0.37;
        let p = HPoint::from_polar(b, 0.0);
        let v = HPoint::from_polar(0.8, PI / 2.0);
        let c = p.distance(&v);
        let phi = angle(&t, &p, &v).unwrap();
        assert!((phi.cos() - b.tanh() / c.tanh()).abs() < 1e-10);
    }

    #[test]
    fn degenerate_inputs() {
        let a = HPoint::from_polar(1.0, 0.0);
        let b = HPoint::origin();
        let c = HPoint::from_polar(1.0, PI);
        assert_eq!(triangle_relations_residual(&a, &b, &c), Err(Error::DegenerateTriangle));
        assert_eq!(triangle_relations_residual(&a, &a, &c), Err(Error::DegenerateTriangle));
    }
}
