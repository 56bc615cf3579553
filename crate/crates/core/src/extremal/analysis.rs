use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::io::CheckReport;
use crate::kernel::{
    big_f, big_f_second, circle_limit_area, cubic_margin, h, h_bar, h_bar_prime, h_bar_second, h_prime,
    quarter_disk_area, regular_area_formula, KernelParams,
};
use crate::polygeom::gauss_bonnet_area;
use crate::redpoly::{sample_ordinary_reduced_with, ValidateConfig};

/// Midpoint grid of `m` points on (a, b).
pub fn open_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    (0..m).map(|k| a + (b - a) * (k as f64 + 0.5) / m as f64).collect()
}

/// Convexity of F on (0, π/2), from the numerical second derivative and from
/// second differences of F itself.
pub fn convexity_scan(ws: &[f64], xs: &[f64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    for &w in ws {
        let p = KernelParams::new(w)?;
        let (mut min_second, mut min_diff, mut worst_agree, mut worst_printed) =
            (f64::INFINITY, f64::INFINITY, 0.0f64, 0.0f64);
        for &x in xs {
            let d2 = big_f_second(&p, x)?;
            min_second = min_second.min(d2.numerical);
            let hstep = 1e-3f64.min(0.5 * x).min(0.5 * (FRAC_PI_2 - x));
            let diff = (big_f(&p, x + hstep)? - 2.0 * big_f(&p, x)? + big_f(&p, x - hstep)?) / (hstep * hstep);
            min_diff = min_diff.min(diff);
            if x > 0.05 && x < FRAC_PI_2 - 0.05 {
                worst_agree = worst_agree.max((diff - d2.numerical).abs() / d2.numerical.abs());
            }
            let gap = d2.closed_form_discrepancy();
            worst_printed = if gap.is_nan() { f64::NAN } else { worst_printed.max(gap) };
        }
        rep.outcome(
            &format!("w={w}/second_derivative_positive"),
            min_second > 0.0,
            min_second,
            0.0,
            "smallest numerical F''",
        );
        rep.outcome(
            &format!("w={w}/second_difference_positive"),
            min_diff > 0.0,
            min_diff,
            0.0,
            "smallest second difference of F",
        );
        rep.bound(
            &format!("w={w}/difference_agreement"),
            worst_agree,
            1e-5,
            format!("printed F'' relative discrepancy {worst_printed:e} (reported only)"),
        );
    }
    Ok(rep)
}

/// One row of the regular-area table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub area: f64,
    /// circle_limit_area(w) − area
    pub circle_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityTable {
    pub w: f64,
    pub rows: Vec<TableRow>,
    pub circle_area: f64,
    pub quarter_disk_area: f64,
}

impl MonotonicityTable {
    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|r| r[1].area > r[0].area)
    }

    pub fn below_circle(&self) -> bool {
        self.rows.iter().all(|r| r.circle_gap > 0.0)
    }

    pub fn gaps_decreasing(&self) -> bool {
        self.rows.windows(2).all(|r| r[1].circle_gap < r[0].circle_gap)
    }

    pub fn gap(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.circle_gap)
    }

    /// CSV with header `n,area,circle_gap`, 15 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,area,circle_gap\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", r.n, sig15(r.area), sig15(r.circle_gap)));
        }
        s
    }
}

/// Fixed-point rendering with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (14 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Areas of the regular ordinary reduced n-gons for n = 3, 5, …, n_max.
pub fn monotonicity_table(w: f64, n_max: usize) -> Result<MonotonicityTable> {
    let p = KernelParams::new(w)?;
    let circle = circle_limit_area(w);
    let rows = (3..=n_max)
        .step_by(2)
        .map(|n| {
            let area = regular_area_formula(&p, n)?;
            Ok(TableRow {
                n,
                area,
                circle_gap: circle - area,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotonicityTable {
        w,
        rows,
        circle_area: circle,
        quarter_disk_area: quarter_disk_area(w),
    })
}

/// Checks on the regular-area function y ↦ h(y) and its auxiliary h̄.
pub fn h_analysis(ws: &[f64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    for &w in ws {
        let p = KernelParams::new(w)?;
        let eps = 1e-6 * p.half;
        let xs = open_grid(eps, p.half - eps, 500);
        let mut min_step = f64::INFINITY;
        let mut prev = h(&p, xs[0])?;
        for &x in &xs[1..] {
            let v = h(&p, x)?;
            min_step = min_step.min(v - prev);
            prev = v;
        }
        rep.outcome(&format!("w={w}/h_increasing"), min_step > 0.0, min_step, 0.0, "smallest increment of h on the grid");
        let end = h_bar(&p, p.half)?.abs().max(h_bar_prime(&p, p.half)?.abs());
        rep.bound(&format!("w={w}/endpoint_vanishing"), end, 1e-9, "|h_bar| and |h_bar'| at tanh(w/2)");
        let (mut min_second, mut worst_printed, mut worst_alt) = (f64::INFINITY, 0.0f64, 0.0f64);
        let mut sign_mismatch = 0;
        let mut min_cubic = f64::INFINITY;
        for &x in &xs {
            let d2 = h_bar_second(&p, x)?;
            min_second = min_second.min(d2.numerical);
            let gap = d2.closed_form_discrepancy();
            worst_printed = if gap.is_nan() || worst_printed.is_nan() { f64::NAN } else { worst_printed.max(gap) };
            if x < 0.9 * p.half {
                worst_alt = worst_alt.max(d2.alternate_discrepancy());
            }
            let (hb, hp) = (h_bar(&p, x)?, h_prime(&p, x)?);
            if hb.signum() != hp.signum() {
                sign_mismatch += 1;
            }
            min_cubic = min_cubic.min(cubic_margin(&p, x));
        }
        rep.outcome(
            &format!("w={w}/h_bar_second_positive"),
            min_second > 0.0,
            min_second,
            0.0,
            format!(
                "printed h_bar'' relative discrepancy {worst_printed:e}, corrected form {worst_alt:e} (reported only)"
            ),
        );
        rep.outcome(
            &format!("w={w}/sign_agreement"),
            sign_mismatch == 0,
            sign_mismatch as f64,
            0.0,
            "grid points where sign(h_bar) != sign(h')",
        );
        rep.outcome(&format!("w={w}/cubic_positive"), min_cubic > 0.0, min_cubic, 0.0, "min of x^3 - 3x + 2 tanh w");
    }
    Ok(rep)
}

/// Per-sample outcome of [`empirical_extremality`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalitySample {
    pub seed: u64,
    pub area: Option<f64>,
    pub phi_spread: f64,
    pub error: Option<String>,
}

/// Deterministic per-case seed derived from a base seed.
pub fn case_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples ordinary reduced n-gons and compares their areas with the regular one.
pub fn empirical_extremality(
    w: f64,
    n: usize,
    samples: usize,
    seed: u64,
    amplitude: f64,
) -> Result<(CheckReport, Vec<ExtremalitySample>)> {
    let regular = regular_area_formula(&KernelParams::new(w)?, n)?;
    let cfg = ValidateConfig {
        covering_samples: 500,
        containment_samples: 20,
        ..ValidateConfig::default()
    };
    let cases: Vec<ExtremalitySample> = (0..samples as u64)
        .map(|k| {
            let s = case_seed(seed, k);
            match sample_ordinary_reduced_with(n, w, s, amplitude, &cfg) {
                Ok(r) => ExtremalitySample {
                    seed: s,
                    area: Some(gauss_bonnet_area(&r.polygon)),
                    phi_spread: r
                        .butterflies
                        .iter()
                        .map(|b| (b.phi - PI / n as f64).abs())
                        .fold(0.0, f64::max),
                    error: None,
                },
                Err(e) => ExtremalitySample {
                    seed: s,
                    area: None,
                    phi_spread: f64::NAN,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let mut rep = CheckReport::new();
    let failed = cases.iter().filter(|c| c.area.is_none()).count();
    rep.outcome("sampler", failed == 0, failed as f64, 0.0, format!("{failed} of {samples} samples rejected"));
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    for c in &cases {
        if let Some(a) = c.area {
            worst = worst.max(a - regular);
            let strict = c.phi_spread > 1e-6;
            ok &= if strict { a < regular } else { a <= regular + 1e-9 };
        }
    }
    rep.outcome(
        "below_regular",
        ok,
        worst,
        0.0,
        format!("largest area minus regular area {worst:e}"),
    );
    Ok((rep, cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convexity_holds_on_standard_grid() {
        let xs = open_grid(0.0, FRAC_PI_2, 500);
        let rep = convexity_scan(&[0.2, 1.0, 4.0], &xs).unwrap();
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn table_for_unit_width() {
        let t = monotonicity_table(1.0, 201).unwrap();
        assert_eq!(t.rows.len(), 100);
        assert!(t.strictly_increasing() && t.below_circle() && t.gaps_decreasing());
        assert!(t.gap(201).unwrap() < t.gap(101).unwrap());
        assert!(t.quarter_disk_area > t.circle_area);
        let csv = t.to_csv();
        assert!(csv.starts_with("n,area,circle_gap\n3,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn sig15_digits() {
        assert_eq!(sig15(1.0), "1.00000000000000");
        assert_eq!(sig15(0.00123), "0.00123000000000000");
        assert_eq!(sig15(-12.5), "-12.5000000000000");
    }

    #[test]
    fn h_checks_pass() {
        let rep = h_analysis(&[0.25, 1.0, 4.0]).unwrap();
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn sampled_areas_stay_below_regular() {
        let (rep, cases) = empirical_extremality(1.0, 7, 4, 9, 0.15).unwrap();
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        assert_eq!(cases.len(), 4);
        let (rep0, cases0) = empirical_extremality(1.0, 7, 2, 9, 0.0).unwrap();
        assert!(rep0.pass);
        let reg = regular_area_formula(&KernelParams::new(1.0).unwrap(), 7).unwrap();
        assert!((cases0[0].area.unwrap() - reg).abs() < 1e-9);
    }
}
