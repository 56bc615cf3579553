//! Ordinary reduced polygons: regular construction, sampling, butterflies and validation.
//!
//! Indices are taken mod n. The side opposite `v_i` is `[v_{i+(n−1)/2}, v_{i+(n+1)/2}]`
//! and butterfly `i` is formed with its partner `m = i + (n+1)/2`.

mod butterfly;
mod regular;
mod sampler;

use std::f64::consts::{FRAC_PI_2, PI};

pub use butterfly::{
    butterfly_triangles, check_closure, closure_composition, congruence_check, coverage, crossing_cycle_area,
    extract_butterflies, nearest_butterfly, opposite_side, triangle_violation, vertex_heights,
    ButterflyData, CongruenceResiduals, CoverageStats, CLOSURE_TOL, COVER_TOL,
    EXTRACTION_DISTANCE_TOL, FOOT_MARGIN,
};
pub use regular::{regular_circumradius, regular_polygon};
pub use sampler::{
    constraint_jacobian, constraint_residuals, frame_map, numerical_rank, perturb_and_project,
    project_to_constraints, MAX_HALVINGS, MAX_ITERATIONS, PROJECTION_TOL,
};

use crate::error::{Error, Result};
use crate::hypcore::Isometry;
use crate::io::CheckReport;
use crate::kernel::{big_f, diameter_bound, KernelParams};
use crate::polygeom::{diameter, gauss_bonnet_area, thickness, triangulation_area, ConvexPolygon};

/// Crossing angles of the butterflies of one polygon.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct PhiVector {
    phis: Vec<f64>,
}

impl PhiVector {
    /// Accepts angles in (0, π/2); the sum is not constrained.
    pub fn new(phis: Vec<f64>) -> Result<Self> {
        if phis.len() < 3 {
            return Err(Error::DomainError {
                what: "phi vector (needs at least three angles)",
                value: phis.len() as f64,
            });
        }
        if let Some(bad) = phis.iter().find(|&&p| !(p > 0.0 && p < FRAC_PI_2)) {
            return Err(Error::DomainError {
                what: "phi vector entry (expects 0 < phi < pi/2)",
                value: *bad,
            });
        }
        Ok(PhiVector { phis })
    }

    /// Rescales positive angles so that they sum to π; each must then lie in (0, π/2).
    pub fn normalized(phis: Vec<f64>) -> Result<Self> {
        let s: f64 = phis.iter().sum();
        if phis.len() < 3 || !(s > 0.0) {
            return Err(Error::DomainError {
                what: "phi vector (needs at least three positive angles)",
                value: s,
            });
        }
        Self::new(phis.iter().map(|p| p * PI / s).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::normalized(vec![1.0; n])
    }

    pub fn sum(&self) -> f64 {
        self.phis.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phis
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }
}

/// Area from the crossing angles: (n − 2)π − 2 Σ F(φ_i).
pub fn area_formula(w: f64, phis: &PhiVector) -> Result<f64> {
    let p = KernelParams::new(w)?;
    let mut s = 0.0;
    for &phi in phis.as_slice() {
        s += big_f(&p, phi)?;
    }
    Ok((phis.len() as f64 - 2.0) * PI - 2.0 * s)
}

/// Settings of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateConfig {
    /// Tolerance on vertex distances, Σφ and the per-butterfly relations.
    pub tol: f64,
    /// Points drawn in the polygon for the covering test.
    pub covering_samples: usize,
    /// Points drawn in each butterfly triangle for the containment test.
    pub containment_samples: usize,
    pub seed: u64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            tol: 1e-9,
            covering_samples: 10_000,
            containment_samples: 1_000,
            seed: 1,
        }
    }
}

/// Runs every check of the definition and its consequences; failures become report entries.
pub fn validate(poly: &ConvexPolygon, w: f64) -> CheckReport {
    validate_with(poly, w, &ValidateConfig::default())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn validate_with(poly: &ConvexPolygon, w: f64, cfg: &ValidateConfig) -> CheckReport {
    let mut rep = CheckReport::new();
    let n = poly.n();
    rep.outcome("odd_n", n % 2 == 1, n as f64, 0.0, format!("n = {n}"));
    if n % 2 == 0 {
        return rep;
    }
    let tol = cfg.tol;
    match vertex_heights(poly) {
        Ok(h) => {
            let dev = h.iter().map(|x| (x.1 - w).abs()).fold(0.0, f64::max);
            rep.bound("vertex_distances", dev, tol, "max |d(v_i, opposite side) - w|");
            let margin = h
                .iter()
                .map(|x| x.2.min(1.0 - x.2))
                .fold(f64::INFINITY, f64::min);
            rep.outcome(
                "feet_interior",
                margin >= FOOT_MARGIN,
                margin,
                FOOT_MARGIN,
                "smallest barycentric margin of a foot",
            );
        }
        Err(e) => rep.outcome("vertex_distances", false, f64::NAN, tol, e.to_string()),
    }
    let (th, witness) = thickness(poly);
    rep.bound(
        "thickness",
        (th - w).abs(),
        1e-7,
        format!("thickness {th}, attained on {}", if witness.is_edge() { "an edge line" } else { "a vertex pencil" }),
    );
    let (d, bound) = (diameter(poly), diameter_bound(w));
    rep.outcome(
        "diameter_window",
        d > w + 1e-9 && d < bound,
        d,
        bound,
        format!("w < {d} < {bound}"),
    );
    let bflies = match extract_butterflies(poly, w) {
        Ok(b) => b,
        Err(e) => {
            for name in ["phi_sum", "phi_holonomy", "butterfly_relations", "congruence", "covering", "closure", "area_agreement"] {
                rep.outcome(name, false, f64::NAN, tol, format!("butterflies unavailable: {e}"));
            }
            return rep;
        }
    };
    let phi_sum: f64 = bflies.iter().map(|b| b.phi).sum();
    rep.bound("phi_sum", (phi_sum - PI).abs(), tol, format!("sum of phi = {phi_sum}"));
    let enclosed = crossing_cycle_area(&bflies);
    rep.bound(
        "phi_holonomy",
        (PI - phi_sum + enclosed).abs(),
        tol,
        format!("pi - sum of phi = {:e}, crossing cycle area = {:e}", PI - phi_sum, -enclosed),
    );
    let rel_dev = bflies
        .iter()
        .map(|b| {
            let legs = (b.c - (w - b.b)).abs();
            let cos = (b.phi.cos() * b.c.tanh() - b.b.tanh()).abs();
            legs.max(cos)
        })
        .fold(0.0, f64::max);
    rep.bound("butterfly_relations", rel_dev, 1e-8, "c = w - b and cos(phi) tanh(c) = tanh(b)");
    let cong = bflies
        .iter()
        .map(|b| congruence_check(b, &bflies[b.partner]).max())
        .fold(0.0, f64::max);
    rep.bound("congruence", cong, 1e-8, "max congruence residual over butterflies");
    let cov = coverage(poly, &bflies, cfg.covering_samples, cfg.containment_samples, cfg.seed);
    rep.outcome(
        "covering",
        cov.gaps.is_empty() && cov.containment_violation <= COVER_TOL,
        cov.containment_violation.max(cov.gaps.iter().map(|g| g.1).fold(f64::MIN, f64::max)),
        COVER_TOL,
        format!(
            "{} points, {} gaps; butterflies leave the polygon by at most {:e}",
            cov.samples,
            cov.gaps.len(),
            cov.containment_violation
        ),
    );
    match closure_composition(&bflies).and_then(|g| check_closure(&bflies, &g)) {
        Ok((da, dp)) => rep.bound("closure", da.max(dp), CLOSURE_TOL, "half-turn about p_1"),
        Err(e) => rep.outcome("closure", false, f64::NAN, CLOSURE_TOL, e.to_string()),
    }
    let phis: Vec<f64> = bflies.iter().map(|b| b.phi).collect();
    match PhiVector::new(phis).and_then(|p| area_formula(w, &p)) {
        Ok(af) => {
            let (gb, tr) = (gauss_bonnet_area(poly), triangulation_area(poly));
            let dev = rel(af, gb).max(rel(af, tr)).max(rel(gb, tr));
            rep.bound(
                "area_agreement",
                dev,
                1e-8,
                format!("formula {af}, angle defect {gb}, triangulation {tr}"),
            );
        }
        Err(e) => rep.outcome("area_agreement", false, f64::NAN, 1e-8, e.to_string()),
    }
    rep
}

/// Checks that removing any single vertex strictly lowers the thickness below `w`.
pub fn vertex_removal_margin(poly: &ConvexPolygon, w: f64) -> f64 {
    (0..poly.n())
        .map(|j| match poly.without_vertex(j) {
            Some(Ok(q)) => w - thickness(&q).0,
            _ => f64::NAN,
        })
        .fold(f64::INFINITY, f64::min)
}

/// Checks that make up the definition; the rest of the report records consequences.
pub const DEFINING_CHECKS: [&str; 4] = ["odd_n", "vertex_distances", "feet_interior", "thickness"];

/// A polygon meeting the definition, with its butterflies and full validation report.
#[derive(Debug, Clone)]
pub struct OrdinaryReducedPolygon {
    pub polygon: ConvexPolygon,
    pub w: f64,
    pub butterflies: Vec<ButterflyData>,
    pub report: CheckReport,
}

impl OrdinaryReducedPolygon {
    pub fn certify(polygon: ConvexPolygon, w: f64, cfg: &ValidateConfig) -> Result<Self> {
        let report = validate_with(&polygon, w, cfg);
        let defining_ok = DEFINING_CHECKS
            .iter()
            .all(|name| report.get(name).is_some_and(|c| c.passed()));
        if !defining_ok {
            let names: Vec<String> = report
                .failures()
                .filter(|c| DEFINING_CHECKS.contains(&c.name.as_str()))
                .map(|c| format!("{} ({})", c.name, c.detail))
                .collect();
            return Err(Error::ValidationFailure(names.join("; ")));
        }
        let butterflies = extract_butterflies(&polygon, w)?;
        Ok(OrdinaryReducedPolygon {
            polygon,
            w,
            butterflies,
            report,
        })
    }

    pub fn n(&self) -> usize {
        self.polygon.n()
    }

    pub fn phis(&self) -> PhiVector {
        PhiVector::new(self.butterflies.iter().map(|b| b.phi).collect()).expect("validated polygon")
    }
}

/// Regular ordinary reduced n-gon of thickness `w`, validated.
pub fn regular_reduced_ngon(n: usize, w: f64) -> Result<OrdinaryReducedPolygon> {
    regular_reduced_ngon_with(n, w, &ValidateConfig::default())
}

pub fn regular_reduced_ngon_with(n: usize, w: f64, cfg: &ValidateConfig) -> Result<OrdinaryReducedPolygon> {
    OrdinaryReducedPolygon::certify(regular_polygon(n, w)?, w, cfg)
}

/// Non-regular ordinary reduced n-gon near the regular one; see [`perturb_and_project`].
pub fn sample_ordinary_reduced(n: usize, w: f64, seed: u64, amplitude: f64) -> Result<OrdinaryReducedPolygon> {
    sample_ordinary_reduced_with(n, w, seed, amplitude, &ValidateConfig::default())
}

pub fn sample_ordinary_reduced_with(
    n: usize,
    w: f64,
    seed: u64,
    amplitude: f64,
    cfg: &ValidateConfig,
) -> Result<OrdinaryReducedPolygon> {
    let base = regular_polygon(n, w)?;
    let poly = perturb_and_project(&base, w, seed, amplitude)?;
    OrdinaryReducedPolygon::certify(poly, w, cfg)
}

/// Covering test with `m` points; gaps and containment failures become errors.
pub fn covering_check(r: &OrdinaryReducedPolygon, m: usize, seed: u64) -> Result<CoverageStats> {
    coverage(&r.polygon, &r.butterflies, m, 1_000, seed).into_result()
}

/// The closure composition, required to be a half-turn about `p_1`.
pub fn closure_isometry(r: &OrdinaryReducedPolygon) -> Result<Isometry> {
    let g = closure_composition(&r.butterflies)?;
    check_closure(&r.butterflies, &g)?;
    Ok(g)
}
