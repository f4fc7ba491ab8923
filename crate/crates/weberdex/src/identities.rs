//! Numeric verification of the closed-form gamma-integral identities the
//! kernel construction rests on. Each check evaluates both sides of one
//! identity independently and reports the discrepancy; the suite doubles as
//! the regression gate for the special-function and contour layers.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mbquad::{mb_integral, ContourLine, MellinSymbol, QuadratureConfig, TailKind};
use crate::quad::{gl_adaptive, gl_panels, oscillatory_tail, tanh_sinh};
use crate::specfun::{lg, macdonald_k_scaled};

const PI: f64 = std::f64::consts::PI;

/// Outcome of one identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub passed: bool,
}

impl IdentityReport {
    pub fn new(
        name: impl Into<String>,
        lhs: Complex64,
        rhs: Complex64,
        abs_tol: f64,
        rel_tol: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        IdentityReport {
            name: name.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            abs_tol,
            rel_tol,
            passed: abs_err <= abs_tol || rel_err <= rel_tol,
        }
    }

    /// Folds a second error measurement (another direction of the same
    /// identity) into the report; `passed` is re-evaluated conservatively.
    fn fold_error(mut self, abs_err: f64, rel_err: f64) -> Self {
        self.abs_err = self.abs_err.max(abs_err);
        self.rel_err = self.rel_err.max(rel_err);
        self.passed = self.abs_err <= self.abs_tol || self.rel_err <= self.rel_tol;
        self
    }
}

fn gamma_pair(s: Complex64, tau: f64) -> Complex64 {
    let it = Complex64::new(0.0, tau);
    (lg(s + it) + lg(s - it)).exp()
}

/// log of Gamma(s+it)Gamma(s-it) (complex), safe for huge tau.
fn gamma_pair_log(s: Complex64, tau: f64) -> Complex64 {
    let it = Complex64::new(0.0, tau);
    lg(s + it) + lg(s - it)
}

fn ln_sinh(y: f64) -> f64 {
    // y > 0; sinh underflows to y itself for small y, so the direct log is
    // exact there, while the shifted form avoids e^y overflow for large y
    if y < 0.1 {
        y.sinh().ln()
    } else {
        y + (-(-2.0 * y).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

fn ln_cosh(y: f64) -> f64 {
    y.abs() + ((-2.0 * y.abs()).exp()).ln_1p() - std::f64::consts::LN_2
}

fn require_quarter_strip(s: Complex64) -> Result<()> {
    if s.re <= 0.0 || s.re >= 0.25 {
        return Err(Error::Strip { abscissa: s.re, lo: 0.0, hi: 0.25 });
    }
    Ok(())
}

/// The cosine-transform pair
///
/// ```text
/// int_0^inf G(s+it)G(s-it) cos(t y) dt = (pi/2^{2s}) G(2s) / cosh^{2s}(y/2)
/// G(s+it)G(s-it) = (G(2s)/2^{2s-1}) int_0^inf cos(t y)/cosh^{2s}(y/2) dy
/// ```
///
/// checked in both directions at the given (s, y); the reported lhs/rhs are
/// the first direction's values, the error is the worse of the two.
pub fn check_gamma_cosine_pair(
    s: Complex64,
    y: f64,
    _cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    if s.re <= 0.0 {
        return Err(Error::Strip { abscissa: s.re, lo: 0.0, hi: f64::INFINITY });
    }
    // Direction 1: integrate over the index.
    let t_cap = 38.0 + s.im.abs();
    let f1 = |t: f64| gamma_pair(s, t) * (t * y).cos();
    let p0 = ((t_cap * (1.0 + y.abs()) / 4.0).ceil() as usize).max(16);
    let lhs1 = gl_adaptive(f1, 0.0, t_cap, p0, 1e-12, 1e-15, 6)?;
    let two_s = 2.0 * s;
    let rhs1 = PI
        * (lg(two_s) - two_s * 2.0_f64.ln() - two_s * ln_cosh(0.5 * y)).exp();

    // Direction 2: integrate over the argument, reusing y as the index.
    let tau = y;
    let lhs2 = gamma_pair(s, tau);
    let y_cap = 40.0 / s.re.min(1.0) + 5.0;
    let f2 = |u: f64| {
        Complex64::new((tau * u).cos(), 0.0) * (-two_s * ln_cosh(0.5 * u)).exp()
    };
    let p2 = ((y_cap * (1.0 + tau.abs()) / 4.0).ceil() as usize).max(16);
    let int2 = gl_adaptive(f2, 0.0, y_cap, p2, 1e-12, 1e-15, 6)?;
    let rhs2 = (lg(two_s) - (two_s - 1.0) * 2.0_f64.ln()).exp() * int2;
    let abs2 = (lhs2 - rhs2).norm();
    let rel2 = abs2 / lhs2.norm().max(rhs2.norm()).max(1e-300);

    Ok(IdentityReport::new("gamma-cosine-pair", lhs1, rhs1, 1e-9, 1e-8).fold_error(abs2, rel2))
}

/// Shared core of the sinh^2 / cosh^2 weighted |Gamma-pair|^2 integrals:
/// integral over (0, inf) of e^{2 w(pi tau)} |G(s+it)G(s-it)|^2 dt where
/// w = ln sinh or ln cosh. The integrand decays only algebraically
/// (~ tau^{4 Re s - 2}); the far tail is taken in log space.
fn weighted_pair_square_integral(s: Complex64, use_sinh: bool) -> f64 {
    let log_integrand = |tau: f64| -> f64 {
        if tau <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if tau > 1e4 {
            // Stirling regime: e^{2 pi tau} from the hyperbolic weight and
            // e^{-2 pi tau} from the gamma pair cancel exactly; evaluating
            // the log-gammas at this size would lose that cancellation.
            let lt = (tau + s.im).ln() + (tau - s.im).ln();
            return 2.0 * (2.0 * PI).ln() + 2.0 * (s.re - 0.5) * lt
                - 2.0 * std::f64::consts::LN_2;
        }
        let w = if use_sinh { ln_sinh(PI * tau) } else { ln_cosh(PI * tau) };
        2.0 * w + 2.0 * gamma_pair_log(s, tau).re
    };
    let f = |tau: f64| log_integrand(tau).exp();
    // Head: the integrand is smooth and positive.
    let t0 = 30.0_f64;
    let head = gl_adaptive(
        |t| Complex64::new(f(t), 0.0),
        0.0,
        t0,
        64,
        1e-13,
        1e-300,
        6,
    )
    .map(|v| v.re)
    .unwrap_or_else(|_| {
        // Positive smooth integrand: fall back to a dense fixed rule.
        gl_panels(|t| Complex64::new(f(t), 0.0), 0.0, t0, 512).re
    });
    // Tail in w = ln tau blocks until exhaustion.
    let mut tail = 0.0;
    let mut w_lo = t0.ln();
    loop {
        let w_hi = w_lo + 5.0;
        let block = gl_panels(
            |w| {
                let l = w + log_integrand(w.exp());
                Complex64::new(if l < -700.0 { 0.0 } else { l.exp() }, 0.0)
            },
            w_lo,
            w_hi,
            10,
        )
        .re;
        tail += block;
        if block <= 1e-16 * (head + tail).abs() || w_hi > 400.0 {
            break;
        }
        w_lo = w_hi;
    }
    head + tail
}

/// int_0^inf sinh^2(pi t) |G(s+it)G(s-it)|^2 dt
///   = (pi sqrt pi / 2) G(1/2 - 2 Re s) G(2 Re s) |G(1/2+s)/G(1-s)|^2,
/// valid on 0 < Re s < 1/4.
pub fn check_sinh_gamma_integral(s: Complex64, _cfg: &QuadratureConfig) -> Result<IdentityReport> {
    require_quarter_strip(s)?;
    let lhs = weighted_pair_square_integral(s, true);
    let sr = s.re;
    let one = Complex64::new(1.0, 0.0);
    let ratio = (2.0 * (lg(0.5 * one + s).re - lg(one - s).re)).exp();
    let rhs = 0.5
        * PI
        * PI.sqrt()
        * (lg(Complex64::new(0.5 - 2.0 * sr, 0.0)) + lg(Complex64::new(2.0 * sr, 0.0)))
            .exp()
            .re
        * ratio;
    Ok(IdentityReport::new(
        "sinh-gamma",
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        1e-9,
        1e-7,
    ))
}

/// int_{-inf}^inf cosh^2(pi t) |G(s+it)G(s-it)|^2 dt
///   = pi sqrt pi G(1/2 - 2 Re s) G(2 Re s) |G(s)/G(1/2-s)|^2,
/// valid on 0 < Re s < 1/4. The integrand is even, so the full line is twice
/// the half line.
pub fn check_cosh_gamma_integral(s: Complex64, _cfg: &QuadratureConfig) -> Result<IdentityReport> {
    require_quarter_strip(s)?;
    let lhs = 2.0 * weighted_pair_square_integral(s, false);
    let sr = s.re;
    let one = Complex64::new(1.0, 0.0);
    let ratio = (2.0 * (lg(s).re - lg(0.5 * one - s).re)).exp();
    let rhs = PI
        * PI.sqrt()
        * (lg(Complex64::new(0.5 - 2.0 * sr, 0.0)) + lg(Complex64::new(2.0 * sr, 0.0)))
            .exp()
            .re
        * ratio;
    Ok(IdentityReport::new(
        "cosh-gamma",
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        1e-9,
        1e-7,
    ))
}

/// The Fourier-sine pair
///
/// ```text
/// int_0^inf sin(tau t)/sinh^{2s}(t/2) dt
///   = (sinh(pi tau)/sqrt pi) G(s+i tau)G(s-i tau)G(1-s)/G(1/2+s)
/// int_0^inf sinh(pi tau) G(s+i tau)G(s-i tau) sin(t tau) d tau
///   = pi sqrt pi G(1/2+s) / (2 G(1-s) sinh^{2s}(t/2))
/// ```
///
/// first direction on 0 < Re s < 1/2, second (conditionally convergent,
/// accelerated) on 0 < Re s < 1/4.
pub fn check_sine_gamma_pair(
    s: Complex64,
    t: f64,
    _cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    if s.re <= 0.0 || s.re >= 0.5 {
        return Err(Error::Strip { abscissa: s.re, lo: 0.0, hi: 0.5 });
    }
    let one = Complex64::new(1.0, 0.0);
    let two_s = 2.0 * s;
    let tau = t; // first direction reuses t as the index

    // Direction 1: integrate over the argument.
    let u_cap = 40.0 / s.re.min(1.0) + 5.0;
    let f1 = |u: f64| {
        Complex64::new((tau * u).sin(), 0.0) * (-two_s * ln_sinh(0.5 * u)).exp()
    };
    // endpoint singularity u^{-2 Re s} at 0 (integrable), smooth beyond 1
    let head = tanh_sinh(&f1, 0.0, 1.0, 1e-12, 1e-15)?;
    let p0 = ((u_cap * (1.0 + tau.abs()) / 4.0).ceil() as usize).max(16);
    let rest = gl_adaptive(&f1, 1.0, u_cap, p0, 1e-12, 1e-15, 6)?;
    let lhs1 = head + rest;
    let rhs1 = (ln_sinh(PI * tau) + gamma_pair_log(s, tau) + lg(one - s)
        - lg(0.5 * one + s))
    .exp()
        / PI.sqrt();
    let abs1 = (lhs1 - rhs1).norm();
    let rel1 = abs1 / lhs1.norm().max(rhs1.norm()).max(1e-300);

    // Direction 2: conditionally convergent oscillatory index integral.
    require_quarter_strip(s)?;
    let density = |v: f64| -> Complex64 {
        if v <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (ln_sinh(PI * v) + gamma_pair_log(s, v)).exp() * (t * v).sin()
    };
    let half_period = PI / t;
    // start the accelerated tail at a zero of sin(t v)
    let m = (8.0 / half_period).ceil();
    let v0 = m * half_period;
    let head2 = gl_adaptive(&density, 0.0, v0, (4.0 * m as f64) as usize + 16, 1e-12, 1e-15, 6)?;
    let tail_re = oscillatory_tail(|v| density(v).re, v0, half_period, 36);
    let tail_im = oscillatory_tail(|v| density(v).im, v0, half_period, 36);
    let lhs2 = head2 + Complex64::new(tail_re, tail_im);
    let rhs2 = 0.5
        * PI
        * PI.sqrt()
        * (lg(0.5 * one + s) - lg(one - s) - two_s * ln_sinh(0.5 * t)).exp();
    let abs2 = (lhs2 - rhs2).norm();
    let rel2 = abs2 / lhs2.norm().max(rhs2.norm()).max(1e-300);

    Ok(IdentityReport::new("sine-gamma-pair", lhs2, rhs2, 1e-8, 1e-6)
        .fold_error(abs1, rel1)
        .fold_error(abs2, rel2))
}

/// Laplace-transform representation of the Macdonald function through the
/// imaginary part of a squared Bessel function:
///
/// ```text
/// (1/pi) sinh(pi tau) e^{-x/2} K_{i tau}(x/2)
///   = -(1/x) int_0^inf e^{-t/x} Im[J_{i tau}^2(sqrt t)] dt.
/// ```
///
/// The relative sign between the two sides is fixed numerically: both sides
/// are computed independently here and must agree as written above.
pub fn check_nicholson_kl(tau: f64, x: f64, _cfg: &QuadratureConfig) -> Result<IdentityReport> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("needs x > 0, got {x}")));
    }
    let lhs = (PI * tau).sinh() / PI * macdonald_k_scaled(tau, 0.5 * x)? * (-x).exp();
    let t_cap = 45.0 * x;
    let im_j2 = |t: f64| -> f64 {
        let j = crate::specfun::bessel_j(Complex64::new(0.0, tau), t.sqrt()).unwrap();
        (j * j).im
    };
    let f = |t: f64| Complex64::new((-t / x).exp() * im_j2(t), 0.0);
    let head = tanh_sinh(&f, 0.0, 1.0, 1e-12, 1e-15)?;
    let p0 = ((t_cap.sqrt() * 2.0).ceil() as usize).max(24);
    let rest = gl_adaptive(&f, 1.0, t_cap, p0, 1e-12, 1e-15, 6)?;
    let rhs = -(head + rest).re / x;
    Ok(IdentityReport::new(
        "nicholson-laplace",
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        1e-8,
        1e-6,
    ))
}

/// The two Mellin-Barnes representations of the Macdonald function:
///
/// ```text
/// sqrt(pi)/cosh(pi tau) e^{x/2} K_{i tau}(x/2)
///   = MB[ G(s+it)G(s-it)G(1/2-s) ](x),        0 < gamma < 1/2
/// (1/sqrt pi) e^{-x/2} K_{i tau}(x/2)
///   = MB[ G(s+it)G(s-it)/G(1/2+s) ](x),       gamma > 0
/// ```
///
/// both checked against the cosh-integral evaluation of K.
pub fn check_kl_macdonald_mb(tau: f64, x: f64, line: &ContourLine) -> Result<IdentityReport> {
    let cfg = QuadratureConfig::default();
    let k_scaled = macdonald_k_scaled(tau, 0.5 * x)?;

    let sym_a = MellinSymbol::new(0.0, 0.5, TailKind::Exponential, move |s| {
        (gamma_pair_log(s, tau) + lg(Complex64::new(0.5, 0.0) - s)).exp()
    });
    let lhs_a = PI.sqrt() / (PI * tau).cosh() * k_scaled;
    let rhs_a = mb_integral(&sym_a, line, x, &cfg)?;

    let sym_b = MellinSymbol::new(0.0, f64::INFINITY, TailKind::Exponential, move |s| {
        (gamma_pair_log(s, tau) - lg(Complex64::new(0.5, 0.0) + s)).exp()
    });
    let lhs_b = k_scaled * (-x).exp() / PI.sqrt();
    let rhs_b = mb_integral(&sym_b, line, x, &cfg)?;
    let abs_b = (lhs_b - rhs_b.re).abs();
    let rel_b = abs_b / lhs_b.abs().max(rhs_b.norm()).max(1e-300);

    Ok(
        IdentityReport::new(
            "kl-macdonald-mb",
            Complex64::new(lhs_a, 0.0),
            rhs_a,
            1e-10,
            1e-8,
        )
        .fold_error(abs_b, rel_b),
    )
}

/// Runs every identity on its standard parameter set; used by the CLI
/// `verify` subcommand and the acceptance suite.
pub fn standard_suite(cfg: &QuadratureConfig) -> Result<Vec<IdentityReport>> {
    let mut reports = Vec::new();
    for &(re, im, y) in &[(1.0, 0.0, 0.0), (0.75, 0.0, 1.0), (0.6, 0.2, 0.5)] {
        reports.push(check_gamma_cosine_pair(Complex64::new(re, im), y, cfg)?);
    }
    for &(re, im) in &[(0.125, 0.0), (0.1, 0.2), (0.2, -0.1)] {
        reports.push(check_sinh_gamma_integral(Complex64::new(re, im), cfg)?);
    }
    for &(re, im) in &[(0.125, 0.0), (0.05, 0.1), (0.15, 0.05)] {
        reports.push(check_cosh_gamma_integral(Complex64::new(re, im), cfg)?);
    }
    for &(re, t) in &[(0.15, 1.0), (0.2, 1.0), (0.1, 2.0)] {
        reports.push(check_sine_gamma_pair(Complex64::new(re, 0.0), t, cfg)?);
    }
    for &(tau, x) in &[(1.0, 2.0), (0.5, 1.0), (1.5, 3.0)] {
        reports.push(check_nicholson_kl(tau, x, cfg)?);
    }
    let line = ContourLine::new(0.3);
    for &(tau, x) in &[(0.5, 1.0), (1.0, 2.0), (2.0, 0.5)] {
        reports.push(check_kl_macdonald_mb(tau, x, &line)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn gamma_cosine_pair_points() {
        // s = 1, y = 0: both sides reduce to pi/4.
        let r = check_gamma_cosine_pair(Complex64::new(1.0, 0.0), 0.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.rhs.re - PI / 4.0).abs() < 1e-12);
        let r = check_gamma_cosine_pair(Complex64::new(0.75, 0.0), 1.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        // y-evenness of the first direction
        let a = check_gamma_cosine_pair(Complex64::new(0.75, 0.0), 0.7, &cfg()).unwrap();
        let b = check_gamma_cosine_pair(Complex64::new(0.75, 0.0), -0.7, &cfg()).unwrap();
        assert!((a.lhs - b.lhs).norm() < 1e-11);
    }

    #[test]
    fn sinh_gamma_golden() {
        let r = check_sinh_gamma_integral(Complex64::new(0.125, 0.0), &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        // frozen from an arbitrary-precision oracle
        assert!(
            (r.rhs.re - 63.429831180754191).abs() < 1e-9 * 63.43,
            "rhs {}",
            r.rhs.re
        );
        let r = check_sinh_gamma_integral(Complex64::new(0.1, 0.2), &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn sinh_gamma_strip_enforced() {
        assert!(matches!(
            check_sinh_gamma_integral(Complex64::new(0.3, 0.0), &cfg()),
            Err(Error::Strip { .. })
        ));
    }

    #[test]
    fn sinh_gamma_near_pole_reports_growth() {
        // Re s -> 1/4^- : both sides blow up but stay consistent; no panic.
        let r = check_sinh_gamma_integral(Complex64::new(0.2495, 0.0), &cfg()).unwrap();
        assert!(r.rhs.re > 100.0, "expected growth, got {}", r.rhs.re);
    }

    #[test]
    fn cosh_gamma_points() {
        let r = check_cosh_gamma_integral(Complex64::new(0.125, 0.0), &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_cosh_gamma_integral(Complex64::new(0.05, 0.1), &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn sine_gamma_pair_golden() {
        let r = check_sine_gamma_pair(Complex64::new(0.15, 0.0), 1.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        // frozen oracle value of the index integral
        assert!((r.lhs.re - 4.21416477929421).abs() < 1e-6 * 4.2, "lhs {}", r.lhs.re);
        let r = check_sine_gamma_pair(Complex64::new(0.2, 0.0), 1.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn nicholson_kl_golden() {
        let r = check_nicholson_kl(1.0, 2.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.lhs.re.abs() - 0.391409015215).abs() < 1e-6, "lhs {}", r.lhs.re);
        let r = check_nicholson_kl(0.5, 1.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.lhs.re.abs() - 0.35176723068).abs() < 1e-6);
        // tau -> 0: both sides vanish
        let r = check_nicholson_kl(0.0, 1.0, &cfg()).unwrap();
        assert!(r.lhs.norm() < 1e-14 && r.rhs.norm() < 1e-9, "{r:?}");
    }

    #[test]
    fn kl_macdonald_mb_points() {
        let line = ContourLine::new(0.3);
        let r = check_kl_macdonald_mb(0.5, 1.0, &line).unwrap();
        assert!(r.passed, "{r:?}");
        // frozen: sqrt(pi) e^{1/2} K_{0.5 i}(0.5)/cosh(pi/2)
        assert!((r.lhs.re - 0.922083151281).abs() < 1e-9, "lhs {}", r.lhs.re);
        let r = check_kl_macdonald_mb(1.0, 2.0, &line).unwrap();
        assert!(r.passed, "{r:?}");
        // tau-evenness
        let a = check_kl_macdonald_mb(0.7, 1.5, &line).unwrap();
        let b = check_kl_macdonald_mb(-0.7, 1.5, &line).unwrap();
        assert!((a.lhs - b.lhs).norm() < 1e-12);
    }

    #[test]
    fn report_invariant() {
        let r = IdentityReport::new("x", Complex64::new(1.0, 0.0), Complex64::new(1.0, 1e-9), 1e-8, 1e-8);
        assert!(r.passed);
        let r = IdentityReport::new("x", Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), 1e-8, 1e-8);
        assert!(!r.passed);
    }
}
