use nalgebra::{DMatrix, DVector, Matrix3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hypcore::{line_through, lorentz_cross, minkowski, HPoint, Isometry};
use crate::polygeom::ConvexPolygon;

use super::butterfly::opposite_side;

/// Target for the largest constraint residual.
pub const PROJECTION_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 50;
pub const MAX_HALVINGS: usize = 30;
const JACOBIAN_STEP: f64 = 1e-6;

/// `d(v_j, opposite side line) − w` for every vertex of a vertex cycle.
pub fn constraint_residuals(vertices: &[HPoint], w: f64) -> Result<DVector<f64>> {
    let n = vertices.len();
    let mut c = DVector::zeros(n);
    for j in 0..n {
        let (a, b) = opposite_side(n, j);
        let l = line_through(&vertices[a], &vertices[b])?;
        c[j] = l.signed_distance(&vertices[j]) - w;
    }
    Ok(c)
}

// Chart at v: δ ↦ exp_v(δ₀ e₁ + δ₁ e₂) with the boost-transported frame.
fn chart_frame(v: &HPoint) -> [nalgebra::Vector3<f64>; 2] {
    [v.tangent_at_angle(0.0), v.tangent_at_angle(std::f64::consts::FRAC_PI_2)]
}

fn displace(vertices: &[HPoint], delta: &DVector<f64>) -> Vec<HPoint> {
    vertices
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let [e1, e2] = chart_frame(v);
            let t = e1 * delta[2 * j] + e2 * delta[2 * j + 1];
            let s = minkowski(&t, &t).max(0.0).sqrt();
            if s == 0.0 {
                *v
            } else {
                v.exp(&(t / s), s)
            }
        })
        .collect()
}

/// Central-difference Jacobian of [`constraint_residuals`] in the 2n chart coordinates.
pub fn constraint_jacobian(vertices: &[HPoint], w: f64) -> Result<DMatrix<f64>> {
    let n = vertices.len();
    let mut jac = DMatrix::zeros(n, 2 * n);
    let mut delta = DVector::zeros(2 * n);
    for k in 0..2 * n {
        delta[k] = JACOBIAN_STEP;
        let plus = constraint_residuals(&displace(vertices, &delta), w)?;
        delta[k] = -JACOBIAN_STEP;
        let minus = constraint_residuals(&displace(vertices, &delta), w)?;
        delta[k] = 0.0;
        jac.set_column(k, &((plus - minus) / (2.0 * JACOBIAN_STEP)));
    }
    Ok(jac)
}

/// Numerical rank with singular values above `tol` times the largest.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let sv = m.singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| s > tol * top).count()
}

// Velocities of the three infinitesimal isometries at each vertex, in chart coordinates.
fn isometry_generators(vertices: &[HPoint]) -> DMatrix<f64> {
    let gens = [
        Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0),
    ];
    let n = vertices.len();
    let mut g = DMatrix::zeros(3, 2 * n);
    for (r, x) in gens.iter().enumerate() {
        for (j, v) in vertices.iter().enumerate() {
            let vel = x * v.coords();
            let [e1, e2] = chart_frame(v);
            g[(r, 2 * j)] = minkowski(&vel, &e1);
            g[(r, 2 * j + 1)] = minkowski(&vel, &e2);
        }
    }
    g
}

/// Component of `xi` orthogonal to the row space of `a`.
fn project_out_rows(a: &DMatrix<f64>, xi: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let top = svd.singular_values.max();
    let mut out = xi.clone();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-9 * top {
            let row = vt.row(k).transpose();
            out -= &row * row.dot(xi);
        }
    }
    out
}

/// Minimum-norm Gauss–Newton projection onto the constraint set, with step halving.
pub fn project_to_constraints(vertices: &[HPoint], w: f64) -> Result<(Vec<HPoint>, usize)> {
    let mut cur = vertices.to_vec();
    let mut res = constraint_residuals(&cur, w)?;
    for it in 0..=MAX_ITERATIONS {
        if res.amax() <= PROJECTION_TOL {
            return Ok((cur, it));
        }
        if it == MAX_ITERATIONS {
            break;
        }
        let jac = constraint_jacobian(&cur, w)?;
        let step = jac
            .clone()
            .svd(true, true)
            .solve(&(-&res), 1e-12)
            .map_err(|e| Error::ConvergenceFailure(format!("Gauss-Newton solve: {e}")))?;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = displace(&cur, &(&step * scale));
            if let Ok(r) = constraint_residuals(&trial, w) {
                if r.norm() < res.norm() {
                    cur = trial;
                    res = r;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            // no decrease at machine precision: accept if already close enough
            break;
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "constraint projection stalled with residual {:e}; try a smaller amplitude",
        res.amax()
    )))
}

/// Lorentz frame `[p, d, J(p × d)]` at a point with a unit tangent.
fn frame(p: &HPoint, d: &nalgebra::Vector3<f64>) -> Matrix3<f64> {
    Matrix3::from_columns(&[*p.coords(), *d, lorentz_cross(p.coords(), d)])
}

/// The isometry taking `(p, d)` to `(q, e)`.
pub fn frame_map(p: &HPoint, d: &nalgebra::Vector3<f64>, q: &HPoint, e: &nalgebra::Vector3<f64>) -> Isometry {
    let j = Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, 1.0, 1.0));
    let fa = frame(p, d);
    let fb = frame(q, e);
    Isometry::from_matrix(fb * j * fa.transpose() * j, 1e-8).expect("frames are Lorentz-orthonormal")
}

/// Random perturbation of `base` followed by projection back onto the distance constraints.
///
/// The step is drawn from a seeded normal distribution, restricted to the
/// tangent space of the constraint set with the three isometry directions
/// removed, and scaled to norm `amplitude`. After projection the polygon is
/// moved back so that `v_0` and the direction `v_0 → t_0` match `base`.
pub fn perturb_and_project(base: &ConvexPolygon, w: f64, seed: u64, amplitude: f64) -> Result<ConvexPolygon> {
    if amplitude == 0.0 {
        return Ok(base.clone());
    }
    let verts = base.vertices().to_vec();
    let n = verts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xi = DVector::from_fn(2 * n, |_, _| StandardNormal.sample(&mut rng));
    let jac = constraint_jacobian(&verts, w)?;
    let gens = isometry_generators(&verts);
    let stacked = DMatrix::from_fn(n + 3, 2 * n, |r, c| if r < n { jac[(r, c)] } else { gens[(r - n, c)] });
    let dir = project_out_rows(&stacked, &xi);
    let norm = dir.norm();
    if norm < 1e-12 {
        return Ok(base.clone());
    }
    let moved = displace(&verts, &(dir * (amplitude / norm)));
    let (projected, _) = project_to_constraints(&moved, w)?;
    let gauge = |vs: &[HPoint]| -> Result<(HPoint, nalgebra::Vector3<f64>)> {
        let (a, b) = opposite_side(n, 0);
        let t = line_through(&vs[a], &vs[b])?.foot(&vs[0]);
        Ok((vs[0], vs[0].tangent_toward(&t)?))
    };
    let (p0, d0) = gauge(&verts)?;
    let (p1, d1) = gauge(&projected)?;
    let g = frame_map(&p1, &d1, &p0, &d0);
    let fixed: Vec<HPoint> = projected.iter().map(|v| g.apply(v)).collect();
    ConvexPolygon::new(fixed).map_err(|e| Error::ValidationFailure(format!("projected polygon: {e}")))
}
