//! The property suites behind `hyperreduced check` and the acceptance test target.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::extremal::{
    case_seed, h_analysis, maximize_area_from, monotonicity_table, open_grid, random_start, OptimizeConfig,
};
use crate::hypcore::{triangle_relations_residual, HPoint};
use crate::io::{render_svg, CheckReport, PolygonDocument, SvgOptions, KIND_ORDINARY_REDUCED};
use crate::kernel::{
    alpha_oracle, big_f, big_f_prime, big_f_second, circle_limit_area, f, g, g_prime, quarter_disk_area,
    regular_area_formula, KernelParams,
};
use crate::polygeom::gauss_bonnet_area;
use crate::redpoly::{
    regular_reduced_ngon_with, sample_ordinary_reduced_with, vertex_removal_margin, OrdinaryReducedPolygon,
    ValidateConfig,
};

/// Parameters of the instance-based criteria (4 to 7).
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Thickness of the sampled polygons.
    pub w: f64,
    /// Vertex count of the sampled polygons.
    pub n: usize,
    pub seed: u64,
    /// Number of sampled polygons.
    pub cases: usize,
    /// Perturbation size handed to the sampler.
    pub amplitude: f64,
    /// Widths of the regular instances; n runs over 3, 5, …, 15.
    pub regular_widths: Vec<f64>,
    pub regular_n_max: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            w: 1.0,
            n: 7,
            seed: 1,
            cases: 100,
            amplitude: 0.1,
            regular_widths: vec![0.2, 1.0, 2.0],
            regular_n_max: 15,
        }
    }
}

pub const KERNEL_WIDTHS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
pub const DERIVATIVE_WIDTHS: [f64; 3] = [0.5, 1.0, 2.0];
pub const OPTIMIZER_NS: [usize; 4] = [3, 5, 7, 9];
pub const OPTIMIZER_WIDTHS: [f64; 3] = [0.5, 1.0, 2.0];
pub const OPTIMIZER_STARTS: usize = 20;
pub const H_WIDTHS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
pub const REMARK_WIDTHS: [f64; 3] = [0.1, 1.0, 3.0];
pub const RANDOM_TRIANGLES: usize = 1000;

/// Regular and sampled polygons shared by criteria 4 to 7.
#[derive(Debug)]
pub struct Instances {
    pub regular: Vec<Result<OrdinaryReducedPolygon>>,
    pub regular_labels: Vec<String>,
    pub sampled: Vec<Result<OrdinaryReducedPolygon>>,
    pub sampled_labels: Vec<String>,
}

impl Instances {
    pub fn build(cfg: &SuiteConfig) -> Self {
        let vcfg = ValidateConfig {
            seed: cfg.seed,
            ..ValidateConfig::default()
        };
        let grid: Vec<(usize, f64)> = cfg
            .regular_widths
            .iter()
            .flat_map(|&w| (3..=cfg.regular_n_max).step_by(2).map(move |n| (n, w)))
            .collect();
        let regular = grid
            .par_iter()
            .map(|&(n, w)| regular_reduced_ngon_with(n, w, &vcfg))
            .collect();
        let regular_labels = grid.iter().map(|(n, w)| format!("regular n={n} w={w}")).collect();
        let seeds: Vec<u64> = (0..cfg.cases as u64).map(|k| case_seed(cfg.seed, k)).collect();
        let sampled = seeds
            .par_iter()
            .map(|&s| sample_ordinary_reduced_with(cfg.n, cfg.w, s, cfg.amplitude, &vcfg))
            .collect();
        let sampled_labels = seeds
            .iter()
            .map(|s| format!("sampled n={} w={} seed={s}", cfg.n, cfg.w))
            .collect();
        Instances {
            regular,
            regular_labels,
            sampled,
            sampled_labels,
        }
    }

    fn all(&self) -> impl Iterator<Item = (&String, &Result<OrdinaryReducedPolygon>)> {
        self.regular_labels
            .iter()
            .zip(&self.regular)
            .chain(self.sampled_labels.iter().zip(&self.sampled))
    }
}

/// Folds one named check over every instance into a single entry: worst residual,
/// failing labels in the detail.
fn over_instances(rep: &mut CheckReport, inst: &Instances, check: &str, tol: f64) {
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    let mut count = 0;
    for (label, r) in inst.all() {
        count += 1;
        match r {
            Ok(r) => match r.report.get(check) {
                Some(c) => {
                    if c.residual.is_finite() {
                        worst = worst.max(c.residual);
                    }
                    if !c.passed() {
                        failed.push(format!("{label}: {}", c.detail));
                    }
                }
                None => failed.push(format!("{label}: no {check} entry")),
            },
            Err(e) => failed.push(format!("{label}: {e}")),
        }
    }
    let detail = if failed.is_empty() {
        format!("{count} instances")
    } else {
        format!("{} of {count} instances fail; {}", failed.len(), failed.join(" | "))
    };
    rep.outcome(check, failed.is_empty(), worst, tol, detail);
}

/// Forced values of g, f and F at the ends of their domains.
pub fn criterion_1() -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    for &w in &KERNEL_WIDTHS {
        let p = KernelParams::new(w)?;
        let tw2 = (w / 2.0).tanh();
        let cases = [
            ("F(0)", big_f(&p, 0.0)?, FRAC_PI_2),
            ("F(pi/2)", big_f(&p, FRAC_PI_2)?, 0.0),
            ("g(0)", g(&p, 0.0)?, tw2),
            ("g(pi/2)", g(&p, FRAC_PI_2)?, 0.0),
            ("f(tanh(w/2))", f(&p, tw2)?, FRAC_PI_2),
        ];
        for (name, got, want) in cases {
            rep.bound(&format!("w={w}/{name}"), (got - want).abs(), 1e-12, format!("{got}"));
        }
    }
    Ok(rep)
}

/// Closed form F against the bisection oracle on a 200-point grid.
pub fn criterion_2() -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let phis = open_grid(0.0, FRAC_PI_2, 40);
    for &w in &KERNEL_WIDTHS {
        let p = KernelParams::new(w)?;
        let mut worst = 0.0f64;
        for &phi in &phis {
            let oracle = alpha_oracle(&p, phi)?.alpha;
            worst = worst.max((big_f(&p, phi)? - oracle).abs());
        }
        rep.bound(&format!("w={w}/closed_form_vs_oracle"), worst, 1e-12, "max |F - alpha_oracle| over 40 angles");
    }
    Ok(rep)
}

/// First derivatives against central differences, and convexity of F.
pub fn criterion_3() -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let xs = open_grid(0.05, FRAC_PI_2 - 0.05, 200);
    let h = 1e-5;
    for &w in &DERIVATIVE_WIDTHS {
        let p = KernelParams::new(w)?;
        let (mut dg, mut df, mut min_second, mut printed) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
        for &x in &xs {
            let cg = (g(&p, x + h)? - g(&p, x - h)?) / (2.0 * h);
            let cf = (big_f(&p, x + h)? - big_f(&p, x - h)?) / (2.0 * h);
            let (ag, af) = (g_prime(&p, x)?, big_f_prime(&p, x)?);
            dg = dg.max((ag - cg).abs() / ag.abs());
            df = df.max((af - cf).abs() / af.abs());
            let second = big_f_second(&p, x)?;
            min_second = min_second.min(second.numerical);
            let gap = second.closed_form_discrepancy();
            printed = if gap.is_nan() || printed.is_nan() { f64::NAN } else { printed.max(gap) };
        }
        rep.bound(&format!("w={w}/g_prime"), dg, 1e-6, "max relative gap to central differences");
        rep.bound(&format!("w={w}/F_prime"), df, 1e-6, "max relative gap to central differences");
        rep.outcome(
            &format!("w={w}/F_second_positive"),
            min_second > 0.0,
            min_second,
            0.0,
            format!("smallest numerical F''; printed form deviates by {printed:e} (reported only)"),
        );
    }
    Ok(rep)
}

/// Formula, angle-defect and triangulation areas agree on every instance.
pub fn criterion_4(inst: &Instances) -> CheckReport {
    let mut rep = CheckReport::new();
    over_instances(&mut rep, inst, "area_agreement", 1e-8);
    rep
}

/// Congruent butterfly pairs, covering and closure on every instance.
pub fn criterion_5(inst: &Instances) -> CheckReport {
    let mut rep = CheckReport::new();
    over_instances(&mut rep, inst, "congruence", 1e-8);
    over_instances(&mut rep, inst, "covering", crate::redpoly::COVER_TOL);
    over_instances(&mut rep, inst, "closure", crate::redpoly::CLOSURE_TOL);
    rep
}

/// Diameter window, thickness and strict loss of thickness under vertex removal.
pub fn criterion_6(inst: &Instances) -> CheckReport {
    let mut rep = CheckReport::new();
    over_instances(&mut rep, inst, "diameter_window", f64::NAN);
    over_instances(&mut rep, inst, "thickness", 1e-7);
    let margins: Vec<(String, f64)> = inst
        .all()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(label, r)| {
            let m = match r {
                Ok(r) => vertex_removal_margin(&r.polygon, r.w),
                Err(_) => f64::NAN,
            };
            ((*label).clone(), m)
        })
        .collect();
    let bad: Vec<&str> = margins.iter().filter(|m| !(m.1 > 0.0)).map(|m| m.0.as_str()).collect();
    let worst = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    rep.outcome(
        "vertex_removal",
        bad.is_empty(),
        worst,
        0.0,
        if bad.is_empty() {
            "smallest drop of thickness when a vertex is removed".to_string()
        } else {
            format!("no strict drop for {}", bad.join(", "))
        },
    );
    rep
}

/// Optimizer runs from random starts, and sampled areas below the regular one.
pub fn criterion_7(inst: &Instances, cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let grid: Vec<(usize, f64)> = OPTIMIZER_WIDTHS
        .iter()
        .flat_map(|&w| OPTIMIZER_NS.iter().map(move |&n| (n, w)))
        .collect();
    let ocfg = OptimizeConfig::default();
    let runs: Vec<Result<(usize, f64, f64, f64)>> = grid
        .par_iter()
        .map(|&(n, w)| {
            let target = regular_area_formula(&KernelParams::new(w)?, n)?;
            let (mut dist, mut value) = (0.0f64, 0.0f64);
            for k in 0..OPTIMIZER_STARTS as u64 {
                let start = random_start(n, case_seed(cfg.seed, k), ocfg.eps);
                let res = maximize_area_from(w, &start, 1e-10, &ocfg)?;
                dist = dist.max(res.distance_to_uniform);
                value = value.max((res.max_value - target).abs());
            }
            Ok((n, w, dist, value))
        })
        .collect();
    for run in runs {
        let (n, w, dist, value) = run?;
        rep.bound(&format!("n={n} w={w}/argmax_uniform"), dist, 1e-6, "sup-norm distance to pi/n over 20 starts");
        rep.bound(&format!("n={n} w={w}/max_value"), value, 1e-9, "max |value - regular area| over 20 starts");
    }
    let regular = regular_area_formula(&KernelParams::new(cfg.w)?, cfg.n)?;
    let mut worst = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for (label, r) in inst.sampled_labels.iter().zip(&inst.sampled) {
        match r {
            Ok(r) => {
                let gap = gauss_bonnet_area(&r.polygon) - regular;
                worst = worst.max(gap);
                if !(gap < 0.0) {
                    bad.push(label.as_str());
                }
            }
            Err(_) => bad.push(label.as_str()),
        }
    }
    rep.outcome(
        "sampled_below_regular",
        bad.is_empty() && !inst.sampled.is_empty(),
        worst,
        0.0,
        format!(
            "{} sampled polygons, largest area minus regular {worst:e}{}",
            inst.sampled.len(),
            if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }
        ),
    );
    Ok(rep)
}

/// Regular areas grow with n toward the circle limit; properties of h.
pub fn criterion_8() -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let t = monotonicity_table(1.0, 201)?;
    let min_step = t.rows.windows(2).map(|r| r[1].area - r[0].area).fold(f64::INFINITY, f64::min);
    rep.outcome("areas_increasing", t.strictly_increasing(), min_step, 0.0, "smallest step between consecutive n");
    let min_gap = t.rows.iter().map(|r| r.circle_gap).fold(f64::INFINITY, f64::min);
    rep.outcome(
        "below_circle",
        t.below_circle(),
        min_gap,
        0.0,
        format!("circle limit {}", t.circle_area),
    );
    let (g201, g101) = (t.gap(201).unwrap_or(f64::NAN), t.gap(101).unwrap_or(f64::NAN));
    rep.outcome("gap_shrinks", g201 < g101, g201 - g101, 0.0, format!("gap(201) = {g201:e}, gap(101) = {g101:e}"));
    rep.absorb("h", h_analysis(&H_WIDTHS)?);
    Ok(rep)
}

/// The quarter disk has more area than the circle limit.
pub fn criterion_9() -> CheckReport {
    let mut rep = CheckReport::new();
    for &w in &REMARK_WIDTHS {
        let quarter = FRAC_PI_2 * (w.cosh() - 1.0);
        let circle = 2.0 * PI * ((w / 2.0).cosh() - 1.0);
        let agree = (quarter - quarter_disk_area(w)).abs().max((circle - circle_limit_area(w)).abs());
        rep.outcome(
            &format!("w={w}/quarter_disk_wins"),
            quarter > circle && agree < 1e-12,
            quarter - circle,
            0.0,
            format!("quarter disk {quarter}, circle {circle}"),
        );
    }
    rep
}

/// Golden documents are byte-stable; triangle relations hold on random triangles.
pub fn criterion_10(seed: u64) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let render = || -> Result<(String, String)> {
        let r = regular_reduced_ngon_with(7, 1.0, &ValidateConfig::default())?;
        let doc = PolygonDocument::from_polygon(KIND_ORDINARY_REDUCED, &r.polygon, 1.0);
        let json = doc.to_json();
        let svg = render_svg(&doc, &SvgOptions::default())?;
        Ok((json, svg))
    };
    let (j1, s1) = render()?;
    let (j2, s2) = render()?;
    let j3 = PolygonDocument::from_json(&j1)?.to_json();
    rep.outcome("json_stable", j1 == j2 && j1 == j3, 0.0, 0.0, "two runs and a save-load-save cycle");
    let s3 = render_svg(&PolygonDocument::from_json(&j1)?, &SvgOptions::default())?;
    rep.outcome("svg_stable", s1 == s2 && s1 == s3, 0.0, 0.0, "two runs and a render after reload");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut tested) = (0.0f64, 0);
    while tested < RANDOM_TRIANGLES {
        let mut pt = || HPoint::from_polar(rng.random_range(0.0..3.0), rng.random_range(0.0..2.0 * PI));
        let (a, b, c) = (pt(), pt(), pt());
        if let Ok(res) = triangle_relations_residual(&a, &b, &c) {
            worst = worst.max(res.max());
            tested += 1;
        }
    }
    rep.bound(
        "triangle_relations",
        worst,
        1e-10,
        format!("{tested} random triangles, law of sines and Napier analogy"),
    );
    Ok(rep)
}

pub const CRITERION_TITLES: [&str; 10] = [
    "kernel exactness",
    "closed form vs oracle",
    "derivative audits",
    "geometric area equivalence",
    "butterfly structure",
    "reduced-polygon envelope",
    "extremality",
    "regular area growth",
    "quarter disk vs circle",
    "infrastructure",
];

/// Report of one criterion; an `Err` from a suite becomes a single failing entry.
fn settle(r: Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| {
        let mut rep = CheckReport::new();
        rep.outcome("suite_error", false, f64::NAN, 0.0, e.to_string());
        rep
    })
}

/// Runs all ten criteria in order.
pub fn run_criteria(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let inst = Instances::build(cfg);
    vec![
        settle(criterion_1()),
        settle(criterion_2()),
        settle(criterion_3()),
        criterion_4(&inst),
        criterion_5(&inst),
        criterion_6(&inst),
        settle(criterion_7(&inst, cfg)),
        settle(criterion_8()),
        criterion_9(),
        settle(criterion_10(cfg.seed)),
    ]
}

/// All criteria merged into one report, entries prefixed `criterion_k/`.
pub fn run_suite(cfg: &SuiteConfig) -> CheckReport {
    let mut rep = CheckReport::new();
    for (k, r) in run_criteria(cfg).into_iter().enumerate() {
        rep.absorb(&format!("criterion_{}", k + 1), r);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_grid_criteria_pass() {
        for rep in [criterion_1().unwrap(), criterion_2().unwrap(), criterion_3().unwrap(), criterion_9()] {
            assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn small_instance_set() {
        let cfg = SuiteConfig {
            cases: 3,
            regular_widths: vec![1.0],
            regular_n_max: 7,
            ..SuiteConfig::default()
        };
        let inst = Instances::build(&cfg);
        assert_eq!(inst.regular.len(), 3);
        for rep in [criterion_4(&inst), criterion_5(&inst), criterion_6(&inst)] {
            assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }
}
