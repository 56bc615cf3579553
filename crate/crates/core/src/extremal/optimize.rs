use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{big_f, big_f_prime, KernelParams};
use crate::redpoly::PhiVector;

/// Settings of the simplex optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeConfig {
    /// Box margin: every angle stays in [eps, π/2 − eps].
    pub eps: f64,
    pub max_iter: usize,
    /// Positive factor applied to the objective; the maximizer does not depend on it.
    pub scale: f64,
    /// Armijo sufficient-increase constant.
    pub armijo: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            eps: 1e-6,
            max_iter: 5_000,
            scale: 1.0,
            armijo: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub n: usize,
    pub w: f64,
    pub argmax: PhiVector,
    /// Area at the maximizer (unscaled).
    pub max_value: f64,
    pub iterations: usize,
    /// Sup-norm of φ − P(φ + ∇A(φ)), the projected-gradient stationarity measure.
    pub residual: f64,
    /// Sup-norm distance of the maximizer from the uniform vector π/n.
    pub distance_to_uniform: f64,
    /// Whether the derivative-free fallback was used.
    pub fallback_used: bool,
}

/// Euclidean projection onto {Σ φ = π, lo ≤ φ ≤ hi}.
pub fn project_capped_simplex(y: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let total = |lam: f64| y.iter().map(|v| (v - lam).clamp(lo, hi)).sum::<f64>() - PI;
    let (mut a, mut b) = (
        y.iter().cloned().fold(f64::INFINITY, f64::min) - hi,
        y.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - lo,
    );
    // total is non-increasing in lam, ≥ 0 at a and ≤ 0 at b
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if total(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let lam = 0.5 * (a + b);
    let mut x: Vec<f64> = y.iter().map(|v| (v - lam).clamp(lo, hi)).collect();
    // spread the last rounding error over the free coordinates
    let free: Vec<usize> = (0..x.len()).filter(|&i| x[i] > lo && x[i] < hi).collect();
    if !free.is_empty() {
        let err = (x.iter().sum::<f64>() - PI) / free.len() as f64;
        for i in free {
            x[i] -= err;
        }
    }
    x
}

struct Objective {
    p: KernelParams,
    scale: f64,
}

impl Objective {
    fn value(&self, phi: &[f64]) -> f64 {
        let s: f64 = phi.iter().map(|&x| big_f(&self.p, x).expect("inside the box")).sum();
        self.scale * ((phi.len() as f64 - 2.0) * PI - 2.0 * s)
    }

    fn gradient(&self, phi: &[f64]) -> Vec<f64> {
        phi.iter()
            .map(|&x| -2.0 * self.scale * big_f_prime(&self.p, x).expect("inside the box"))
            .collect()
    }
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn stationarity(obj: &Objective, phi: &[f64], lo: f64, hi: f64) -> f64 {
    let g = obj.gradient(phi);
    let y: Vec<f64> = phi.iter().zip(&g).map(|(x, d)| x + d).collect();
    sup_dist(phi, &project_capped_simplex(&y, lo, hi))
}

/// Random feasible starting point.
pub fn random_start(n: usize, seed: u64, eps: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<f64> = (0..n).map(|_| rng.random_range(eps..FRAC_PI_2 - eps)).collect();
    project_capped_simplex(&y, eps, FRAC_PI_2 - eps)
}

/// Maximizes (n − 2)π − 2 Σ F(φ_i) over the capped simplex from `start`, by
/// projected gradient ascent with Barzilai–Borwein steps and Armijo backtracking.
pub fn maximize_area_from(
    w: f64,
    start: &[f64],
    tol: f64,
    cfg: &OptimizeConfig,
) -> Result<OptimizationResult> {
    let n = start.len();
    if n < 3 || n as f64 * (FRAC_PI_2 - cfg.eps) <= PI {
        return Err(Error::InvalidN(n));
    }
    if !(tol >= 1e-12) {
        return Err(Error::DomainError {
            what: "optimizer tolerance (expects tol >= 1e-12)",
            value: tol,
        });
    }
    if !(cfg.scale > 0.0) {
        return Err(Error::DomainError {
            what: "objective scale (must be positive)",
            value: cfg.scale,
        });
    }
    let obj = Objective {
        p: KernelParams::new(w)?,
        scale: cfg.scale,
    };
    let (lo, hi) = (cfg.eps, FRAC_PI_2 - cfg.eps);
    let mut phi = project_capped_simplex(start, lo, hi);
    let mut val = obj.value(&phi);
    let mut grad = obj.gradient(&phi);
    let mut step = 1.0;
    let mut fallback_used = false;
    let mut iterations = 0;
    let mut residual = stationarity(&obj, &phi, lo, hi);
    while residual > tol && iterations < cfg.max_iter {
        iterations += 1;
        let mut t = step;
        let mut accepted = None;
        // values near the maximizer agree to rounding; let such steps through
        let slack = 8.0 * f64::EPSILON * cfg.scale * n as f64 * PI;
        for _ in 0..60 {
            let y: Vec<f64> = phi.iter().zip(&grad).map(|(x, d)| x + t * d).collect();
            let cand = project_capped_simplex(&y, lo, hi);
            let v = obj.value(&cand);
            let moved: f64 = cand.iter().zip(&phi).map(|(a, b)| (a - b) * (a - b)).sum();
            if v >= val + cfg.armijo / t * moved - slack && moved > 0.0 {
                accepted = Some((cand, v));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, v)) => {
                let g_new = obj.gradient(&cand);
                let s: Vec<f64> = cand.iter().zip(&phi).map(|(a, b)| a - b).collect();
                let yv: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
                let ss: f64 = s.iter().map(|x| x * x).sum();
                let sy: f64 = s.iter().zip(&yv).map(|(a, b)| a * b).sum();
                // ascent on a concave objective: s·y < 0
                step = if sy < 0.0 { (ss / -sy).clamp(1e-8, 1e8) } else { 1.0 };
                phi = cand;
                val = v;
                grad = g_new;
            }
            None => {
                fallback_used = true;
                let (x, v) = nelder_mead(&obj, &phi, lo, hi, 4_000);
                if v <= val {
                    break;
                }
                phi = x;
                val = v;
                grad = obj.gradient(&phi);
                step = 1.0;
            }
        }
        residual = stationarity(&obj, &phi, lo, hi);
    }
    if residual > tol {
        return Err(Error::ConvergenceFailure(format!(
            "projected gradient stopped after {iterations} iterations with stationarity {residual:e} > {tol:e}"
        )));
    }
    let uniform = vec![PI / n as f64; n];
    Ok(OptimizationResult {
        n,
        w,
        distance_to_uniform: sup_dist(&phi, &uniform),
        max_value: val / cfg.scale,
        argmax: PhiVector::new(phi)?,
        iterations,
        residual,
        fallback_used,
    })
}

/// [`maximize_area_from`] from a seeded random start.
pub fn maximize_area_over_simplex(w: f64, n: usize, tol: f64, seed: u64) -> Result<OptimizationResult> {
    let cfg = OptimizeConfig::default();
    maximize_area_from(w, &random_start(n, seed, cfg.eps), tol, &cfg)
}

// Derivative-free maximization of A(P(x)) over R^n.
fn nelder_mead(obj: &Objective, x0: &[f64], lo: f64, hi: f64, max_eval: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let eval = |x: &[f64]| {
        let p = project_capped_simplex(x, lo, hi);
        let v = obj.value(&p);
        (p, v)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![eval(x0)];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += 0.05;
        simplex.push(eval(&x));
    }
    let mut evals = n + 1;
    while evals < max_eval {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        if (simplex[0].1 - simplex[n].1).abs() <= 1e-15 * simplex[0].1.abs().max(1.0) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|s| s.0[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |c: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(m, x)| m + c * (m - x))
                .collect()
        };
        let r = eval(&along(1.0));
        evals += 1;
        if r.1 > simplex[0].1 {
            let e = eval(&along(2.0));
            evals += 1;
            simplex[n] = if e.1 > r.1 { e } else { r };
        } else if r.1 > simplex[n - 1].1 {
            simplex[n] = r;
        } else {
            let c = eval(&along(-0.5));
            evals += 1;
            if c.1 > simplex[n].1 {
                simplex[n] = c;
            } else {
                let best = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = s.0.iter().zip(&best).map(|(a, b)| b + 0.5 * (a - b)).collect();
                    *s = eval(&x);
                    evals += 1;
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::regular_area_formula;

    #[test]
    fn projection_lands_on_the_capped_simplex() {
        let (lo, hi) = (1e-6, FRAC_PI_2 - 1e-6);
        for y in [vec![5.0, -1.0, 0.3, 0.2, 0.1], vec![0.0; 7], vec![1.0, 1.0, 1.0]] {
            let x = project_capped_simplex(&y, lo, hi);
            assert!((x.iter().sum::<f64>() - PI).abs() < 1e-14);
            assert!(x.iter().all(|&v| (lo..=hi).contains(&v)));
        }
        // a feasible point is its own projection
        let f = vec![0.5, 0.7, 0.9, PI - 2.1];
        assert!(sup_dist(&project_capped_simplex(&f, lo, hi), &f) < 1e-15);
    }

    #[test]
    fn uniform_start_is_a_fixed_point() {
        let cfg = OptimizeConfig::default();
        let r = maximize_area_from(1.0, &[PI / 7.0; 7], 1e-10, &cfg).unwrap();
        assert_eq!(r.iterations, 0);
        let want = regular_area_formula(&KernelParams::new(1.0).unwrap(), 7).unwrap();
        assert!((r.max_value - want).abs() < 1e-12);
    }

    #[test]
    fn random_starts_reach_the_uniform_vector() {
        let want = regular_area_formula(&KernelParams::new(1.0).unwrap(), 9).unwrap();
        for seed in 0..20 {
            let r = maximize_area_over_simplex(1.0, 9, 1e-10, seed).unwrap();
            assert!(r.distance_to_uniform < 1e-6, "seed {seed}: {}", r.distance_to_uniform);
            assert!((r.max_value - want).abs() < 1e-9);
            assert!((r.argmax.sum() - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn objective_scale_does_not_move_the_maximizer() {
        let start = random_start(5, 3, 1e-6);
        let a = maximize_area_from(2.0, &start, 1e-10, &OptimizeConfig::default()).unwrap();
        let cfg = OptimizeConfig {
            scale: 37.5,
            ..OptimizeConfig::default()
        };
        let b = maximize_area_from(2.0, &start, 1e-10, &cfg).unwrap();
        assert!(sup_dist(a.argmax.as_slice(), b.argmax.as_slice()) < 1e-8);
        assert!((a.max_value - b.max_value).abs() < 1e-9);
    }

    #[test]
    fn fallback_climbs_on_its_own() {
        let obj = Objective {
            p: KernelParams::new(1.0).unwrap(),
            scale: 1.0,
        };
        let (lo, hi) = (1e-6, FRAC_PI_2 - 1e-6);
        let start = random_start(5, 11, 1e-6);
        let (x, v) = nelder_mead(&obj, &start, lo, hi, 20_000);
        assert!(v > obj.value(&start));
        assert!(sup_dist(&x, &[PI / 5.0; 5]) < 1e-3);
    }
}
