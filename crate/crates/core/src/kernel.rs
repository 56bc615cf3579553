//! Closed-form scalar kernels for ordinary reduced polygons of thickness `w`.
//!
//! For a butterfly with crossing angle φ, `g(φ) = tanh b` is the half-leg
//! length solving cos φ = tanh b / tanh(w − b), `f` turns tanh b into the
//! butterfly angle α, and `F = f ∘ g`. Areas of ordinary reduced polygons are
//! (n − 2)π − 2 Σ F(φ_i).
//!
//! The printed radicals cancel catastrophically near φ = 0 and φ = π/2, so the
//! evaluations below use equivalent factored forms:
//!
//! * (1 + cos x)² − 4 tanh²w cos x = (1 − cos x)² + 4 sech²w cos x
//! * tanh w − g(x) = tanh w (r + 1 − cos x) / (r + 1 + cos x)
//! * (tanh w − y)² − sech²w y² = (1 + sech w)(tanh(w/2) − y)(tanh w − y(1 − sech w))
//!
//! Each is checked against the literal expression in the tests.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Slack allowed past the right end of `f`'s domain before rejecting.
const F_DOMAIN_SLACK: f64 = 1e-12;
/// Step used by the numerical second derivatives.
const SECOND_DIFF_STEP: f64 = 1e-4;

/// Thickness `w` together with the hyperbolic functions every kernel needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub w: f64,
    /// tanh w
    pub t: f64,
    /// sech w
    pub s: f64,
    /// tanh(w/2) = g(0), the right end of `f`'s domain.
    pub half: f64,
}

impl KernelParams {
    pub fn new(w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::DomainError {
                what: "thickness w",
                value: w,
            });
        }
        Ok(KernelParams {
            w,
            t: w.tanh(),
            s: 1.0 / w.cosh(),
            half: (0.5 * w).tanh(),
        })
    }
}

/// The two leg lengths and angles of one butterfly triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ButterflyScalars {
    pub phi: f64,
    /// Leg from the crossing point to the foot.
    pub b: f64,
    /// Hypotenuse from the crossing point to the vertex; equals w − b.
    pub c: f64,
    pub alpha: f64,
}

fn check_angle(what: &'static str, x: f64, closed: bool) -> Result<()> {
    let ok = if closed {
        (0.0..=FRAC_PI_2).contains(&x)
    } else {
        x > 0.0 && x < FRAC_PI_2
    };
    if ok {
        Ok(())
    } else {
        Err(Error::DomainError { what, value: x })
    }
}

fn one_minus_cos(x: f64) -> f64 {
    let h = (0.5 * x).sin();
    2.0 * h * h
}

fn radicand(p: &KernelParams, x: f64) -> f64 {
    let c = x.cos();
    if c >= 0.0 {
        let d = one_minus_cos(x);
        d * d + 4.0 * c * p.s * p.s
    } else {
        (1.0 + c) * (1.0 + c) - 4.0 * p.t * p.t * c
    }
}

/// r_w(x) = √((1 + cos x)² − 4 tanh²w cos x), defined for every real x.
pub fn r(p: &KernelParams, x: f64) -> f64 {
    radicand(p, x).sqrt()
}

fn g_raw(p: &KernelParams, x: f64) -> f64 {
    let c = x.cos();
    2.0 * p.t * c / (1.0 + c + r(p, x))
}

/// tanh of the short leg of a butterfly with crossing angle `x ∈ [0, π/2]`.
pub fn g(p: &KernelParams, x: f64) -> Result<f64> {
    check_angle("g (expects 0 <= x <= pi/2)", x, true)?;
    Ok(g_raw(p, x))
}

/// `f(y) = arcsin(y sech w / (tanh w − y))` for `y ∈ [0, tanh(w/2)]`.
pub fn f(p: &KernelParams, y: f64) -> Result<f64> {
    if !(y >= 0.0 && y <= p.half + F_DOMAIN_SLACK) {
        return Err(Error::DomainError {
            what: "f (expects 0 <= y <= tanh(w/2))",
            value: y,
        });
    }
    let y = y.min(p.half);
    let cos_part = ((1.0 + p.s) * (p.half - y) * (p.t - y * (1.0 - p.s))).max(0.0).sqrt();
    Ok((y * p.s).atan2(cos_part))
}

/// sin(x/2)-free part of √((tanh w − g)² − sech²w g²), i.e. that root divided by |sin(x/2)|.
fn cos_alpha_factor(p: &KernelParams, x: f64) -> f64 {
    let c = x.cos();
    let rr = r(p, x);
    p.t * (2.0 * (rr + 1.0 - c) / (rr + 1.0 + c)).sqrt()
}

fn big_f_raw(p: &KernelParams, x: f64) -> f64 {
    let g = g_raw(p, x);
    let cos_part = (0.5 * x).sin().abs() * cos_alpha_factor(p, x);
    (g * p.s).atan2(cos_part)
}

/// Butterfly angle α = F(φ) = f(g(φ)) for `φ ∈ [0, π/2]`.
pub fn big_f(p: &KernelParams, x: f64) -> Result<f64> {
    check_angle("F (expects 0 <= x <= pi/2)", x, true)?;
    Ok(big_f_raw(p, x))
}

fn g_prime_raw(p: &KernelParams, x: f64) -> f64 {
    let c = x.cos();
    let rr = r(p, x);
    let t_minus_g = p.t * (rr + 1.0 - c) / (rr + 1.0 + c);
    -x.sin() * t_minus_g / rr
}

/// g′(x) = −sin x (tanh w − g(x)) / r(x) on the open interval (0, π/2).
pub fn g_prime(p: &KernelParams, x: f64) -> Result<f64> {
    check_angle("g' (expects 0 < x < pi/2)", x, false)?;
    Ok(g_prime_raw(p, x))
}

fn big_f_prime_raw(p: &KernelParams, x: f64) -> f64 {
    // −tanh w sech w sin x / (r √((tanh w − g)² − sech²w g²)), with sin x / |sin(x/2)| = 2cos(x/2)
    let rr = r(p, x);
    -2.0 * p.t * p.s * (0.5 * x).cos() / (rr * cos_alpha_factor(p, x))
}

/// F′(x) on (0, π/2).
pub fn big_f_prime(p: &KernelParams, x: f64) -> Result<f64> {
    check_angle("F' (expects 0 < x < pi/2)", x, false)?;
    Ok(big_f_prime_raw(p, x))
}

/// A second derivative evaluated from more than one source.
///
/// `numerical` (central difference of the closed-form first derivative) is the
/// authoritative value. `closed_form` is the literal textbook expression, which
/// may be inaccurate or undefined; see the producing function for `alternate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondDerivative {
    pub numerical: f64,
    pub closed_form: f64,
    pub alternate: f64,
}

impl SecondDerivative {
    /// Relative gap between `numerical` and `closed_form` (NaN when the latter is undefined).
    pub fn closed_form_discrepancy(&self) -> f64 {
        (self.closed_form - self.numerical).abs() / self.numerical.abs()
    }

    pub fn alternate_discrepancy(&self) -> f64 {
        (self.alternate - self.numerical).abs() / self.numerical.abs()
    }
}

fn central_second(f: impl Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> f64 {
    let h = SECOND_DIFF_STEP.min(0.5 * (x - lo)).min(0.5 * (hi - x));
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// F″(x) on (0, π/2). `closed_form` is the unsimplified quotient-rule fraction,
/// `alternate` its one-line simplification.
pub fn big_f_second(p: &KernelParams, x: f64) -> Result<SecondDerivative> {
    check_angle("F'' (expects 0 < x < pi/2)", x, false)?;
    let numerical = central_second(|y| big_f_prime_raw(p, y), x, 0.0, FRAC_PI_2);

    let (t, s) = (p.t, p.s);
    let c = x.cos();
    let sin2 = x.sin().powi(2);
    let rr = r(p, x);
    let omc = 1.0 - c;
    let q = -1.0 - c + 2.0 * t * t + rr;
    let num = c * rr * omc.sqrt() + sin2 * (1.0 + c - 2.0 * t * t) / rr * omc.sqrt()
        - sin2 * (rr + omc) / (2.0 * omc.sqrt());
    let closed_form = -(2f64.sqrt()) * t * s * num / (rr * rr * omc * q);
    let alternate = -(2f64.sqrt() / 2.0) * t * s * (omc / q).sqrt()
        * ((1.0 + c).powi(2) - 4.0 * t * t - (1.0 + c) * rr);
    Ok(SecondDerivative {
        numerical,
        closed_form,
        alternate,
    })
}

/// Independent route to F: bisection for b in cos φ = tanh b / tanh(w − b), then
/// the law of sines sin α = sinh b / sinh(w − b).
pub fn alpha_oracle(p: &KernelParams, phi: f64) -> Result<ButterflyScalars> {
    check_angle("alpha_oracle (expects 0 < phi < pi/2)", phi, false)?;
    let w = p.w;
    let cphi = phi.cos();
    let b = crate::search::bisect(|b| b.tanh() / (w - b).tanh() - cphi, 0.0, 0.5 * w, 200)
        .ok_or_else(|| Error::ConvergenceFailure("alpha_oracle bisection".into()))?;
    let c = w - b;
    // sinh²c − sinh²b = sinh(c − b) sinh(c + b)
    let alpha = b.sinh().atan2(((w - 2.0 * b).sinh() * w.sinh()).max(0.0).sqrt());
    Ok(ButterflyScalars { phi, b, c, alpha })
}

/// Scalars of the butterfly with crossing angle `phi`, from the closed forms.
pub fn butterfly_scalars(p: &KernelParams, phi: f64) -> Result<ButterflyScalars> {
    let b = g(p, phi)?.atanh();
    Ok(ButterflyScalars {
        phi,
        b,
        c: p.w - b,
        alpha: big_f(p, phi)?,
    })
}

/// Upper bound on the diameter of an ordinary reduced polygon of thickness `w`.
pub fn diameter_bound(w: f64) -> f64 {
    (w.cosh() * (1.0 + 0.5 * 2f64.sqrt() * w.sinh()).sqrt()).acosh()
}

pub fn check_odd_n(n: usize) -> Result<()> {
    if n >= 3 && n % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidN(n))
    }
}

/// Area of the regular ordinary reduced n-gon: (n − 2)π − 2n F(π/n).
pub fn regular_area_formula(p: &KernelParams, n: usize) -> Result<f64> {
    check_odd_n(n)?;
    let nf = n as f64;
    Ok((nf - 2.0) * PI - 2.0 * nf * big_f_raw(p, PI / nf))
}

/// Area of the disk of radius w/2: 2π(cosh(w/2) − 1) = 4π sinh²(w/4).
pub fn circle_limit_area(w: f64) -> f64 {
    4.0 * PI * (0.25 * w).sinh().powi(2)
}

/// Area of a quarter of the disk of radius w: (π/2)(cosh w − 1) = π sinh²(w/2).
pub fn quarter_disk_area(w: f64) -> f64 {
    PI * (0.5 * w).sinh().powi(2)
}

/// arccos(y sech w / (tanh w − y)), the complement of `f`.
fn acos_a(p: &KernelParams, y: f64) -> f64 {
    let sin_part = ((1.0 + p.s) * (p.half - y) * (p.t - y * (1.0 - p.s))).max(0.0).sqrt();
    sin_part.atan2(y * p.s)
}

/// arccos(y (1 − y tanh w) / (tanh w − y)); equals φ when y = g(φ).
fn acos_b(p: &KernelParams, y: f64) -> f64 {
    let rad = (1.0 - y * y) * (p.half - y) * (1.0 / p.half - y);
    (p.t * rad.max(0.0).sqrt()).atan2(y * (1.0 - y * p.t))
}

fn check_h_domain(p: &KernelParams, x: f64, include_right: bool) -> Result<()> {
    let ok = x > 0.0 && (x < p.half || (include_right && x <= p.half));
    if ok {
        Ok(())
    } else {
        Err(Error::DomainError {
            what: "h-family (expects 0 < x < tanh(w/2))",
            value: x,
        })
    }
}

/// Regular-polygon area as a function of y = g(π/n), divided by 2π and shifted:
/// area = 2π (h(y) − 1).
pub fn h(p: &KernelParams, x: f64) -> Result<f64> {
    check_h_domain(p, x, false)?;
    Ok(acos_a(p, x) / acos_b(p, x))
}

fn h_bar_raw(p: &KernelParams, x: f64) -> f64 {
    (x * x + 1.0 - 2.0 * x * p.t) * acos_a(p, x) - p.s * (1.0 - x * x).sqrt() * acos_b(p, x)
}

fn h_bar_prime_raw(p: &KernelParams, x: f64) -> f64 {
    x * p.s / (1.0 - x * x).sqrt() * acos_b(p, x) - 2.0 * (p.t - x) * acos_a(p, x)
}

/// Numerator of h′ up to a positive factor; same sign as h′. Defined on (0, tanh(w/2)].
pub fn h_bar(p: &KernelParams, x: f64) -> Result<f64> {
    check_h_domain(p, x, true)?;
    Ok(h_bar_raw(p, x))
}

/// h̄′ on (0, tanh(w/2)].
pub fn h_bar_prime(p: &KernelParams, x: f64) -> Result<f64> {
    check_h_domain(p, x, true)?;
    Ok(h_bar_prime_raw(p, x))
}

/// h′ from h̄ through the positive prefactor.
pub fn h_prime(p: &KernelParams, x: f64) -> Result<f64> {
    check_h_domain(p, x, false)?;
    let t = p.t;
    let b = acos_b(p, x);
    let root = ((1.0 - x * x) * t * t * (p.half - x) * (1.0 / p.half - x)).sqrt();
    Ok(t * h_bar_raw(p, x) / (b * b * (t - x) * root))
}

/// h̄″ on (0, tanh(w/2)).
///
/// `closed_form` carries a bare tanh w where tanh w − x belongs and −2x in
/// place of −2x tanh w under the root (it is NaN wherever that root goes
/// negative). `alternate` is the corrected expression
/// 2A + sech w (1 − x²)^{-3/2} B + tanh w sech w (x³ − 3x + 2 tanh w) /
/// ((1 − x²)(tanh w − x) √(tanh²w x² + tanh²w − 2x tanh w)),
/// with A = arccos(x sech w / (tanh w − x)), B = arccos(x (1 − x tanh w) / (tanh w − x)).
pub fn h_bar_second(p: &KernelParams, x: f64) -> Result<SecondDerivative> {
    check_h_domain(p, x, false)?;
    let numerical = central_second(|y| h_bar_prime_raw(p, y), x, 0.0, p.half);
    let (t, s) = (p.t, p.s);
    let (a, b) = (acos_a(p, x), acos_b(p, x));
    let omx2 = 1.0 - x * x;
    let cubic = x * x * x - 3.0 * x + 2.0 * t;
    let head = 2.0 * a + s / omx2.powf(1.5) * b;
    let closed_form = head + t * s / (omx2 * t * (t * t * x * x + t * t - 2.0 * x).sqrt()) * cubic;
    let alternate = head
        + t * s / (omx2 * (t - x) * (t * t * (p.half - x) * (1.0 / p.half - x)).sqrt()) * cubic;
    Ok(SecondDerivative {
        numerical,
        closed_form,
        alternate,
    })
}

/// x³ − 3x + 2 tanh w, positive on the h-domain.
pub fn cubic_margin(p: &KernelParams, x: f64) -> f64 {
    x * x * x - 3.0 * x + 2.0 * p.t
}

/// Recovers n from φ = π/n through cos φ = g(1 − g tanh w)/(tanh w − g).
pub fn n_from_phi(p: &KernelParams, phi: f64) -> Result<f64> {
    check_angle("n_from_phi (expects 0 < phi < pi/2)", phi, false)?;
    Ok(PI / acos_b(p, g_raw(p, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const WS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

    fn literal_g(p: &KernelParams, x: f64) -> f64 {
        let c = x.cos();
        (1.0 + c - ((1.0 + c).powi(2) - 4.0 * p.t * p.t * c).sqrt()) / (2.0 * p.t)
    }

    fn literal_f(p: &KernelParams, y: f64) -> f64 {
        (y * (1.0 - p.t * p.t).sqrt() / (p.t - y)).asin()
    }

    #[test]
    fn params_invariants() {
        for w in WS {
            let p = KernelParams::new(w).unwrap();
            assert!((p.s * p.s + p.t * p.t - 1.0).abs() < 1e-14);
            assert!((p.half - p.t / (1.0 + p.s)).abs() < 1e-15);
        }
        assert!(KernelParams::new(0.0).is_err());
        assert!(KernelParams::new(f64::NAN).is_err());
    }

    #[test]
    fn factored_forms_match_literal_expressions() {
        for w in WS {
            let p = KernelParams::new(w).unwrap();
            for k in 1..40 {
                let x = k as f64 / 40.0 * FRAC_PI_2;
                assert!((g(&p, x).unwrap() - literal_g(&p, x)).abs() < 1e-13);
                let lit = ((1.0 + x.cos()).powi(2) - 4.0 * p.t * p.t * x.cos()).sqrt();
                // the literal radicand cancels for large w
                assert!((r(&p, x) - lit).abs() < 1e-12);
                let y = g(&p, x).unwrap();
                assert!((f(&p, y).unwrap() - literal_f(&p, y)).abs() < 1e-9);
                assert!((big_f(&p, x).unwrap() - f(&p, y).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn forced_identities() {
        for w in WS {
            let p = KernelParams::new(w).unwrap();
            assert!(g(&p, FRAC_PI_2).unwrap().abs() < 1e-12);
            assert!((g(&p, 0.0).unwrap() - (0.5 * w).tanh()).abs() < 1e-12);
            assert!((big_f(&p, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-12);
            assert!(big_f(&p, FRAC_PI_2).unwrap().abs() < 1e-12);
            assert!(f(&p, 0.0).unwrap() == 0.0);
            assert!((f(&p, (0.5 * w).tanh()).unwrap() - FRAC_PI_2).abs() < 1e-12);
            assert!((r(&p, FRAC_PI_2) - 1.0).abs() < 1e-15);
            assert!((r(&p, 0.0) - 2.0 / w.cosh()).abs() < 1e-15);
            assert_eq!(r(&p, 0.7), r(&p, -0.7));
        }
    }

    #[test]
    fn domain_errors() {
        let p = KernelParams::new(1.0).unwrap();
        assert!(g(&p, -1e-3).is_err());
        assert!(g(&p, FRAC_PI_2 + 1e-3).is_err());
        assert!(f(&p, -1e-9).is_err());
        assert!(f(&p, p.half + 1e-9).is_err());
        assert!(f(&p, p.half + 1e-13).is_ok());
        assert!(g_prime(&p, 0.0).is_err());
        assert!(big_f_prime(&p, FRAC_PI_2).is_err());
        assert!(h(&p, p.half).is_err());
        assert!(h_bar(&p, p.half).is_ok());
        assert!(h_bar(&p, 0.0).is_err());
        assert_eq!(regular_area_formula(&p, 4), Err(Error::InvalidN(4)));
        assert_eq!(regular_area_formula(&p, 1), Err(Error::InvalidN(1)));
    }

    // Reference values from a 50-digit mpmath evaluation of the literal formulas.
    #[test]
    fn high_precision_reference_values() {
        let p = KernelParams::new(1.0).unwrap();
        // arcsin(0.2 sech 1 / (tanh 1 - 0.2))
        assert!((f(&p, 0.2).unwrap() - 0.232_890_510_961_401_205).abs() < 1e-15);
        // r_1(1.0)
        assert!((r(&p, 1.0) - 1.057_815_858_601_201_83).abs() < 1e-15);
    }

    #[test]
    fn g_at_pi_over_3_solves_the_cosine_relation() {
        let p = KernelParams::new(1.0).unwrap();
        let b = crate::search::bisect(|b| b.tanh() / (1.0 - b).tanh() - 0.5, 0.0, 0.5, 200).unwrap();
        assert!((g(&p, PI / 3.0).unwrap() - b.tanh()).abs() < 1e-14);
    }

    #[test]
    fn f_at_pi_over_3_matches_oracle() {
        let p = KernelParams::new(1.0).unwrap();
        let o = alpha_oracle(&p, PI / 3.0).unwrap();
        assert!((big_f(&p, PI / 3.0).unwrap() - o.alpha).abs() < 1e-12);
        let lit = (o.b.sinh() / o.c.sinh()).asin();
        assert!((o.alpha - lit).abs() < 1e-12);
    }

    #[test]
    fn oracle_limits_and_consistency() {
        let p = KernelParams::new(1.0).unwrap();
        let near_right = alpha_oracle(&p, FRAC_PI_2 - 1e-9).unwrap();
        assert!(near_right.b < 1e-8 && near_right.alpha < 1e-8);
        let near_zero = alpha_oracle(&p, 1e-7).unwrap();
        assert!((near_zero.b - 0.5).abs() < 1e-10);
        assert!((near_zero.alpha - FRAC_PI_2).abs() < 1e-6);
        let o = alpha_oracle(&p, PI / 5.0).unwrap();
        let k = butterfly_scalars(&p, PI / 5.0).unwrap();
        assert!((o.b - k.b).abs() < 1e-12 && (o.alpha - k.alpha).abs() < 1e-12);
        assert!((o.c - (1.0 - o.b)).abs() < 1e-15);
        assert!(((PI / 5.0).cos() - o.b.tanh() / o.c.tanh()).abs() < 1e-12);
        assert!(o.b < 0.5 && o.c > 0.5 && o.c < 1.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let hstep = 1e-5;
        for w in [0.5, 1.0, 2.0] {
            let p = KernelParams::new(w).unwrap();
            for k in 0..50 {
                let x = 0.05 + (FRAC_PI_2 - 0.1) * k as f64 / 49.0;
                let fd_g = (g_raw(&p, x + hstep) - g_raw(&p, x - hstep)) / (2.0 * hstep);
                let an_g = g_prime(&p, x).unwrap();
                assert!((fd_g - an_g).abs() <= 1e-6 * an_g.abs(), "g' w={w} x={x}");
                assert!(an_g < 0.0);
                let fd_f = (big_f_raw(&p, x + hstep) - big_f_raw(&p, x - hstep)) / (2.0 * hstep);
                let an_f = big_f_prime(&p, x).unwrap();
                assert!((fd_f - an_f).abs() <= 1e-6 * an_f.abs(), "F' w={w} x={x}");
                assert!(an_f < 0.0);
                assert!(big_f_second(&p, x).unwrap().numerical > 0.0);
            }
        }
    }

    #[test]
    fn literal_g_prime_matches() {
        let p = KernelParams::new(1.0).unwrap();
        let x: f64 = 1.0;
        let lit = -x.sin() / r(&p, x) * (p.t - literal_g(&p, x));
        assert!((g_prime(&p, x).unwrap() - lit).abs() < 1e-14);
    }

    #[test]
    fn g_stays_below_tanh_w() {
        for w in WS {
            let p = KernelParams::new(w).unwrap();
            for k in 0..=100 {
                let x = FRAC_PI_2 * k as f64 / 100.0;
                let y = g(&p, x).unwrap();
                assert!(y < p.t && y <= p.half + 1e-15 && y >= 0.0);
            }
        }
    }

    #[test]
    fn diameter_bound_values() {
        let want = (1f64.cosh() * (1.0 + 2f64.sqrt() / 2.0 * 1f64.sinh()).sqrt()).acosh();
        assert!((diameter_bound(1.0) - want).abs() < 1e-15);
        for w in [0.1, 1.0, 5.0] {
            assert!(diameter_bound(w) > w);
        }
        let vals: Vec<f64> = (1..=100).map(|k| diameter_bound(0.05 * k as f64)).collect();
        assert!(vals.windows(2).all(|v| v[1] > v[0]));
    }

    #[test]
    fn area_closed_forms() {
        let p = KernelParams::new(1.0).unwrap();
        let tri = regular_area_formula(&p, 3).unwrap();
        assert!((tri - (PI - 6.0 * big_f(&p, PI / 3.0).unwrap())).abs() < 1e-15);
        assert!((circle_limit_area(2.0) - 2.0 * PI * (1f64.cosh() - 1.0)).abs() < 1e-14);
        assert!((quarter_disk_area(1.0) - FRAC_PI_2 * (1f64.cosh() - 1.0)).abs() < 1e-15);
        assert!(circle_limit_area(1e-9) < 1e-17);
        let big = regular_area_formula(&p, 10001).unwrap();
        let circ = circle_limit_area(1.0);
        assert!(big < circ && circ - big < 1e-5);
        for w in [0.1, 1.0, 3.0] {
            assert!(quarter_disk_area(w) > circle_limit_area(w));
        }
        let ratio = quarter_disk_area(1e-4) / circle_limit_area(1e-4);
        assert!((ratio - 1.0).abs() < 1e-7);
    }

    #[test]
    fn n_from_phi_self_consistent() {
        let p1 = KernelParams::new(1.0).unwrap();
        assert!((n_from_phi(&p1, PI / 7.0).unwrap() - 7.0).abs() < 1e-9);
        let p2 = KernelParams::new(2.0).unwrap();
        assert!((n_from_phi(&p2, PI / 3.0).unwrap() - 3.0).abs() < 1e-9);
        let vals: Vec<f64> = (1..100).map(|k| n_from_phi(&p1, 1.5 * k as f64 / 100.0).unwrap()).collect();
        assert!(vals.windows(2).all(|v| v[1] < v[0]));
    }

    #[test]
    fn h_family_endpoints_and_shape() {
        for w in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let p = KernelParams::new(w).unwrap();
            assert!(h_bar(&p, p.half).unwrap().abs() < 1e-9);
            assert!(h_bar_prime(&p, p.half).unwrap().abs() < 1e-9);
            let xs: Vec<f64> = (1..200).map(|k| p.half * k as f64 / 200.0).collect();
            let hs: Vec<f64> = xs.iter().map(|&x| h(&p, x).unwrap()).collect();
            assert!(hs.windows(2).all(|v| v[1] > v[0]), "h not increasing at w={w}");
            for (k, &x) in xs.iter().enumerate() {
                assert!(cubic_margin(&p, x) > 0.0);
                let hb2 = h_bar_second(&p, x).unwrap();
                assert!(hb2.numerical > 0.0);
                // h̄″ grows like (tanh(w/2) − x)^(-1/2) at the right end, where differencing degrades
                if k < 180 {
                    assert!(hb2.alternate_discrepancy() < 1e-5, "w={w} x={x} {hb2:?}");
                }
                assert_eq!(h_bar(&p, x).unwrap() > 0.0, h_prime(&p, x).unwrap() > 0.0);
            }
            let u = p.half;
            let endpoint = u * (u * u - 1.0).powi(2) / (1.0 + u * u);
            assert!((cubic_margin(&p, u) - endpoint).abs() < 1e-14);
        }
    }

    #[test]
    fn h_matches_regular_area() {
        let p = KernelParams::new(1.0).unwrap();
        for n in [3usize, 5, 9, 21] {
            let y = g(&p, PI / n as f64).unwrap();
            let via_h = 2.0 * PI * (h(&p, y).unwrap() - 1.0);
            assert!((via_h - regular_area_formula(&p, n).unwrap()).abs() < 1e-12);
        }
    }
}
