use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypcore::{line_through, HPoint};
use crate::kernel::check_odd_n;
use crate::polygeom::ConvexPolygon;
use crate::search::bisect;

fn regular_vertices(n: usize, rho: f64) -> Vec<HPoint> {
    (0..n)
        .map(|k| HPoint::from_polar(rho, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

// distance from v_0 to the side [v_{(n−1)/2}, v_{(n+1)/2}] at circumradius rho
fn height(n: usize, rho: f64) -> f64 {
    let vs = [
        HPoint::from_polar(rho, 0.0),
        HPoint::from_polar(rho, PI - PI / n as f64),
        HPoint::from_polar(rho, PI + PI / n as f64),
    ];
    match line_through(&vs[1], &vs[2]) {
        Ok(l) => l.signed_distance(&vs[0]),
        Err(_) => 0.0,
    }
}

/// Circumradius of the regular n-gon whose vertices lie at distance `w` from their opposite sides.
pub fn regular_circumradius(n: usize, w: f64) -> Result<f64> {
    check_odd_n(n)?;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::DomainError {
            what: "thickness w",
            value: w,
        });
    }
    let mut hi = w;
    while height(n, hi) < w {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::ConvergenceFailure("no circumradius bracket".into()));
        }
    }
    bisect(|r| height(n, r) - w, 0.0, hi, 200)
        .ok_or_else(|| Error::ConvergenceFailure("circumradius bisection".into()))
}

/// The regular n-gon centred at the base point with vertex 0 on the positive x₁-axis.
pub fn regular_polygon(n: usize, w: f64) -> Result<ConvexPolygon> {
    let rho = regular_circumradius(n, w)?;
    ConvexPolygon::new(regular_vertices(n, rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    // ρ + atanh(tanh ρ cos(π/n)) = w: the vertex-to-centre distance plus the
    // centre-to-side distance along the symmetry axis
    fn oracle_rho(n: usize, w: f64) -> f64 {
        let c = (PI / n as f64).cos();
        bisect(|r| r + (r.tanh() * c).atanh() - w, 0.0, w, 200).unwrap()
    }

    #[test]
    fn circumradius_matches_axis_oracle() {
        for n in [3, 5, 7, 15, 101] {
            for w in [0.2, 1.0, 2.0] {
                let r = regular_circumradius(n, w).unwrap();
                assert!((r - oracle_rho(n, w)).abs() < 1e-13, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn even_n_is_rejected() {
        assert_eq!(regular_circumradius(4, 1.0), Err(Error::InvalidN(4)));
        assert_eq!(regular_circumradius(1, 1.0), Err(Error::InvalidN(1)));
    }
}
