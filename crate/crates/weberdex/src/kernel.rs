//! The Weber-type kernel
//!
//! ```text
//! W_a(x, tau) = Im[ J_{a+i tau}(sqrt x) Y_{a-i tau}(sqrt x) ] / sinh(pi tau)
//! ```
//!
//! evaluated by three independent routes (direct Bessel product, a
//! Mellin-Barnes contour integral, and a Fourier-cosine integral of an
//! Anger-Bessel difference), together with the companion Re-kernel, its tail
//! integral, the fourth-order ODE residual, and the growth-bound constant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mbquad::{
    mb_integral, mb_integral_est, ContourLine, LineCache, MellinSymbol, QuadratureConfig,
    TailKind,
};
use crate::quad::gl_adaptive;
use crate::specfun::{anger_j, bessel_j, bessel_y, lg, X_SWITCH};

/// Direct-route gate: below this |tau| the sinh(pi tau) division loses
/// digits and the Mellin-Barnes route is the designated evaluator.
pub const TAU_MIN: f64 = 1e-3;

const PI: f64 = std::f64::consts::PI;

/// The order parameter alpha with its per-formula validity strips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOrder {
    pub alpha: f64,
}

impl KernelOrder {
    pub fn new(alpha: f64) -> Self {
        KernelOrder { alpha }
    }

    /// Abscissa strip of the kernel's Mellin-Barnes representation.
    pub fn mb_strip(&self) -> (f64, f64) {
        ((-self.alpha).max(0.0), 0.5)
    }

    /// Abscissa strip of the Re-kernel representation.
    pub fn re_strip(&self) -> (f64, f64) {
        (-self.alpha, 0.75)
    }

    /// Abscissa strip of the Re-kernel tail integral (the extra 1/s factor
    /// forces the abscissa positive).
    pub fn re_tail_strip(&self) -> (f64, f64) {
        ((-self.alpha).max(0.0), 0.75)
    }

    /// Natural line for the kernel Mellin-Barnes symbol.
    pub fn mb_line(&self) -> ContourLine {
        let (lo, hi) = self.mb_strip();
        ContourLine::new(0.5 * (lo + hi))
    }

    pub fn check_anger(&self) -> Result<()> {
        if self.alpha.abs() >= 0.5 || self.alpha == 0.0 {
            return Err(Error::Constraint(format!(
                "Fourier-cosine route needs 0 < |alpha| < 1/2, got alpha = {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn check_ode(&self) -> Result<()> {
        if self.alpha >= 0.5 {
            return Err(Error::Constraint(format!(
                "kernel ODE needs alpha < 1/2, got alpha = {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Evaluation point (x, tau), x > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: f64,
    pub tau: f64,
}

impl KernelPoint {
    pub fn new(x: f64, tau: f64) -> Self {
        KernelPoint { x, tau }
    }
}

/// Kernel Mellin-Barnes symbol:
/// Gamma(s+it)Gamma(s-it)Gamma(s+a)Gamma(1/2-s)Gamma(1-s)/Gamma(1+a-s).
/// Decays like e^{-2 pi |Im s|}.
pub fn kernel_symbol(alpha: f64, tau: f64) -> MellinSymbol {
    let (lo, hi) = KernelOrder::new(alpha).mb_strip();
    MellinSymbol::new(lo, hi, TailKind::Exponential, move |s| {
        let it = Complex64::new(0.0, tau);
        let one = Complex64::new(1.0, 0.0);
        (lg(s + it) + lg(s - it) + lg(s + alpha) + lg(0.5 * one - s) + lg(one - s)
            - lg(one + alpha - s))
            .exp()
    })
}

/// Re-kernel symbol:
/// Gamma(s+it)Gamma(s-it)Gamma(a+s)/(Gamma(s)Gamma(1/2+s)Gamma(1+a-s)).
/// Only algebraic decay (~ |Im s|^{2 Re s - 3/2}) along the line.
pub fn re_kernel_symbol(alpha: f64, tau: f64) -> MellinSymbol {
    let (lo, hi) = KernelOrder::new(alpha).re_strip();
    MellinSymbol::new(lo, hi, TailKind::Algebraic, move |s| {
        let it = Complex64::new(0.0, tau);
        let one = Complex64::new(1.0, 0.0);
        (lg(s + it) + lg(s - it) + lg(s + alpha)
            - lg(s)
            - lg(0.5 * one + s)
            - lg(one + alpha - s))
            .exp()
    })
}

/// Tail-integral symbol: the Re-kernel symbol with Gamma(s) promoted to
/// Gamma(1+s), i.e. one extra 1/s.
pub fn re_tail_symbol(alpha: f64, tau: f64) -> MellinSymbol {
    let (lo, hi) = KernelOrder::new(alpha).re_tail_strip();
    MellinSymbol::new(lo, hi, TailKind::Algebraic, move |s| {
        let it = Complex64::new(0.0, tau);
        let one = Complex64::new(1.0, 0.0);
        (lg(s + it) + lg(s - it) + lg(s + alpha)
            - lg(one + s)
            - lg(0.5 * one + s)
            - lg(one + alpha - s))
            .exp()
    })
}

/// A contour line tall enough to clear the Gamma(s +/- i tau) poles when the
/// deformed-leg strategy is used.
pub fn line_for_tau(abscissa: f64, tau: f64) -> ContourLine {
    ContourLine::with_height(abscissa, (tau.abs() + 10.0).max(40.0))
}

/// Direct route: Im[J Y]/sinh(pi tau) from the Bessel product.
pub fn weber_kernel_direct(order: &KernelOrder, p: &KernelPoint) -> Result<f64> {
    if p.tau.abs() < TAU_MIN {
        return Err(Error::NearZeroTau(p.tau));
    }
    let z = p.x.sqrt();
    let nu_j = Complex64::new(order.alpha, p.tau);
    let nu_y = Complex64::new(order.alpha, -p.tau);
    let j = bessel_j(nu_j, z)?;
    let y = bessel_y(nu_y, z)?;
    Ok((j * y).im / (PI * p.tau).sinh())
}

/// Mellin-Barnes route: cosh(pi tau)/pi^{5/2} times the line integral of the
/// kernel symbol. Regular through tau = 0.
pub fn weber_kernel_mb(
    order: &KernelOrder,
    p: &KernelPoint,
    line: &ContourLine,
) -> Result<f64> {
    weber_kernel_mb_est(order, p, line).map(|(v, _)| v)
}

/// Mellin-Barnes route with a conservative error estimate.
pub fn weber_kernel_mb_est(
    order: &KernelOrder,
    p: &KernelPoint,
    line: &ContourLine,
) -> Result<(f64, f64)> {
    let cfg = QuadratureConfig::default();
    let sym = kernel_symbol(order.alpha, p.tau);
    let (v, err) = mb_integral_est(&sym, line, p.x, &cfg)?;
    let pref = (PI * p.tau).cosh() / PI.powf(2.5);
    Ok((pref * v.re, pref * err))
}

/// The difference AngerJ_nu(z) - J_nu(z) for real nu, any z > 0: ascending
/// series below the argument cap, the inhomogeneous-Bessel asymptotic
/// expansion above it.
fn anger_bessel_diff(nu: f64, z: f64) -> Result<f64> {
    if z <= X_SWITCH {
        let a = anger_j(Complex64::new(nu, 0.0), z)?;
        let j = bessel_j(nu, z)?;
        return Ok((a - j).re);
    }
    // Particular-solution expansion of z^2 y'' + z y' + (z^2 - nu^2) y =
    // (z - nu) sin(nu pi)/pi:
    //   y ~ (sin(nu pi)/pi) [ S1 - nu S2 ],
    //   S1 = sum (-1)^k A_k / z^{2k+1},  A_k = A_{k-1}((2k-1)^2 - nu^2),
    //   S2 = sum (-1)^k B_k / z^{2k+2},  B_k = B_{k-1}((2k)^2 - nu^2).
    let nu2 = nu * nu;
    let z2 = z * z;
    let mut s1 = 0.0;
    let mut term = 1.0 / z;
    let mut prev_mag = f64::INFINITY;
    for k in 1..=14 {
        s1 += term;
        let kf = k as f64;
        let next = -term * ((2.0 * kf - 1.0).powi(2) - nu2) / z2;
        if next.abs() >= prev_mag {
            break;
        }
        prev_mag = term.abs();
        term = next;
    }
    let mut s2 = 0.0;
    term = 1.0 / z2;
    prev_mag = f64::INFINITY;
    for k in 1..=14 {
        s2 += term;
        let kf = k as f64;
        let next = -term * ((2.0 * kf).powi(2) - nu2) / z2;
        if next.abs() >= prev_mag {
            break;
        }
        prev_mag = term.abs();
        term = next;
    }
    Ok((nu * PI).sin() / PI * (s1 - nu * s2))
}

/// Fourier-cosine route:
/// (2 cosh(pi tau)/(pi sin(2 pi a))) * int_0^inf [AngerJ_{2a} - J_{2a}]
/// (2 sqrt x cosh(u/2)) cos(tau u) du. Valid for 0 < |a| < 1/2; accuracy
/// ceiling ~1e-6 set by the oscillatory tail.
pub fn weber_kernel_anger(
    order: &KernelOrder,
    p: &KernelPoint,
    _cfg: &QuadratureConfig,
) -> Result<f64> {
    order.check_anger()?;
    let nu = 2.0 * order.alpha;
    let sqx = p.x.sqrt();
    let cht = (PI * p.tau).cosh();
    // Truncate where the ~ e^{-u/2} amplitude decay beats the cosh(pi tau)
    // prefactor down to ~1e-9 absolute in the final kernel value.
    let u_max = 2.0 * (4.0 * cht / (PI * PI * sqx * 1e-9)).ln().max(10.0);
    let f = |u: f64| -> Complex64 {
        let z = 2.0 * sqx * (0.5 * u).cosh();
        let d = anger_bessel_diff(nu, z).unwrap_or(0.0);
        Complex64::new(d * (p.tau * u).cos(), 0.0)
    };
    // The series/asymptotic switch inside anger_bessel_diff leaves a jump
    // of ~1e-10 in the integrand; tolerances below that cannot converge.
    let panels0 = ((u_max * (1.0 + p.tau.abs()) / 4.0).ceil() as usize).max(16);
    let integral = gl_adaptive(f, 0.0, u_max, panels0, 1e-9, 1e-10, 6)?;
    Ok(2.0 * cht / (PI * (2.0 * PI * order.alpha).sin()) * integral.re)
}

/// Re[J_{a+i tau}(sqrt x) Y_{a-i tau}(sqrt x)] by direct product.
pub fn weber_re_kernel(order: &KernelOrder, p: &KernelPoint) -> Result<f64> {
    let z = p.x.sqrt();
    let nu_j = Complex64::new(order.alpha, p.tau);
    let nu_y = Complex64::new(order.alpha, -p.tau);
    let j = bessel_j(nu_j, z)?;
    let y = bessel_y(nu_y, z)?;
    Ok((j * y).re)
}

/// The Re-kernel via its Mellin-Barnes representation (deformed contour).
pub fn weber_re_kernel_mb(
    order: &KernelOrder,
    p: &KernelPoint,
    line: &ContourLine,
) -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let sym = re_kernel_symbol(order.alpha, p.tau);
    let v = mb_integral(&sym, line, p.x, &cfg)?;
    Ok(-v.re / PI.sqrt())
}

/// int_x^inf Re[J_{a+i tau}(sqrt y) Y_{a-i tau}(sqrt y)] dy/y via the
/// tail symbol.
pub fn re_kernel_tail(order: &KernelOrder, p: &KernelPoint, line: &ContourLine) -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let sym = re_tail_symbol(order.alpha, p.tau);
    let v = mb_integral(&sym, line, p.x, &cfg)?;
    Ok(-v.re / PI.sqrt())
}

/// Residual of the fourth-order kernel ODE
///
/// ```text
/// x^3 W'''' + 6 x^2 W''' + x (7 + tau^2 - a^2 + x) W''
///   + (1 + tau^2 - a^2 + 5x/2) W' + (1/2 - (a tau)^2 / x) W = 0
/// ```
///
/// assembled from five-point central differences on the Mellin-Barnes route.
/// Returns (residual, scale) where scale is the largest term magnitude.
pub fn kernel_ode_residual(
    order: &KernelOrder,
    p: &KernelPoint,
    h: f64,
) -> Result<(f64, f64)> {
    order.check_ode()?;
    if p.x <= 2.0 * h {
        return Err(Error::Stencil(format!(
            "stencil needs x > 2h (x = {}, h = {h})",
            p.x
        )));
    }
    let cfg = QuadratureConfig {
        rel_tol: 1e-13,
        abs_tol: 1e-16,
        max_refinements: 10,
        ..QuadratureConfig::default()
    };
    let sym = kernel_symbol(order.alpha, p.tau);
    let line = order.mb_line();
    // A fixed node set makes the evaluated function smooth in x, so the
    // finite differences see no independent quadrature noise.
    let xs: Vec<f64> = (-2..=2).map(|k| p.x + k as f64 * h).collect();
    let cache = LineCache::build(&sym, &line, &xs, &cfg)?;
    let pref = (PI * p.tau).cosh() / PI.powf(2.5);
    let w: Vec<f64> = xs.iter().map(|&x| pref * cache.eval(x).re).collect();

    let d1 = (w[0] - 8.0 * w[1] + 8.0 * w[3] - w[4]) / (12.0 * h);
    let d2 = (-w[0] + 16.0 * w[1] - 30.0 * w[2] + 16.0 * w[3] - w[4]) / (12.0 * h * h);
    let d3 = (-w[0] + 2.0 * w[1] - 2.0 * w[3] + w[4]) / (2.0 * h * h * h);
    let d4 = (w[0] - 4.0 * w[1] + 6.0 * w[2] - 4.0 * w[3] + w[4]) / (h * h * h * h);

    let x = p.x;
    let t2 = p.tau * p.tau;
    let a2 = order.alpha * order.alpha;
    let terms = [
        x.powi(3) * d4,
        6.0 * x * x * d3,
        x * (7.0 + t2 - a2 + x) * d2,
        (1.0 + t2 - a2 + 2.5 * x) * d1,
        (0.5 - a2 * t2 / x) * w[2],
    ];
    let residual: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    Ok((residual, scale))
}

/// Growth-bound constant
/// C = (2^{2g-1}/pi^2) B(g,g) int |Gamma(s+a)| / |sin(2 pi s) Gamma(1+a-s)| |ds|
/// along Re s = g; the kernel satisfies |W_a(x,tau)| <= C x^{-g} cosh(pi tau).
pub fn bound_constant(order: &KernelOrder, gamma: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (lo, hi) = order.mb_strip();
    if gamma <= lo || gamma >= hi || gamma <= 0.0 {
        return Err(Error::Strip { abscissa: gamma, lo: lo.max(0.0), hi });
    }
    let alpha = order.alpha;
    let modulus = |t: f64| -> f64 {
        let s = Complex64::new(gamma, t);
        let one = Complex64::new(1.0, 0.0);
        let ln_mag = lg(s + alpha).re - lg(one + alpha - s).re;
        let sin_mag = (2.0 * PI * s).sin().norm();
        ln_mag.exp() / sin_mag
    };
    // |integrand| ~ e^{-2 pi |t|}: plain trapezoid on [-T, T].
    let t_cap = 12.0_f64;
    let mut n = 256usize;
    let sum_at = |n: usize| -> f64 {
        let h = 2.0 * t_cap / n as f64;
        let mut s = 0.5 * (modulus(-t_cap) + modulus(t_cap));
        for k in 1..n {
            s += modulus(-t_cap + k as f64 * h);
        }
        s * h
    };
    let mut prev = sum_at(n);
    for _ in 0..cfg.max_refinements {
        n *= 2;
        let cur = sum_at(n);
        if (cur - prev).abs() <= cfg.rel_tol * cur + cfg.abs_tol {
            let b = (lg(Complex64::new(gamma, 0.0)).re * 2.0
                - lg(Complex64::new(2.0 * gamma, 0.0)).re)
                .exp();
            return Ok(2.0_f64.powf(2.0 * gamma - 1.0) / (PI * PI) * b * cur);
        }
        prev = cur;
    }
    Err(Error::Convergence("bound-constant quadrature stalled".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: QuadratureConfig = QuadratureConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        max_refinements: 8,
        tail_cutoff: 1e-14,
    };

    #[test]
    fn direct_route_golden_values() {
        // Frozen from an arbitrary-precision Bessel-product oracle.
        let w = weber_kernel_direct(&KernelOrder::new(0.25), &KernelPoint::new(2.0, 1.3)).unwrap();
        assert!((w - 0.11498755559240274087660).abs() < 1e-11, "got {w}");
        let w = weber_kernel_direct(&KernelOrder::new(0.25), &KernelPoint::new(1.0, 0.6)).unwrap();
        assert!((w - 0.21212498604719513792811).abs() < 1e-11, "got {w}");
        let w = weber_kernel_direct(&KernelOrder::new(-0.3), &KernelPoint::new(2.0, 1.1)).unwrap();
        assert!((w - 0.26905746011943452881503).abs() < 1e-11, "got {w}");
    }

    #[test]
    fn direct_route_evenness_and_gate() {
        let o = KernelOrder::new(0.25);
        let a = weber_kernel_direct(&o, &KernelPoint::new(2.0, 1.3)).unwrap();
        let b = weber_kernel_direct(&o, &KernelPoint::new(2.0, -1.3)).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(matches!(
            weber_kernel_direct(&o, &KernelPoint::new(2.0, 1e-5)),
            Err(Error::NearZeroTau(_))
        ));
    }

    #[test]
    fn mb_route_matches_direct() {
        let o = KernelOrder::new(0.25);
        let line = o.mb_line();
        for &(x, tau) in &[(2.0, 1.3), (1.0, 0.6), (0.5, 2.0), (5.0, 0.3)] {
            let p = KernelPoint::new(x, tau);
            let d = weber_kernel_direct(&o, &p).unwrap();
            let m = weber_kernel_mb(&o, &p, &line).unwrap();
            assert!(
                (d - m).abs() <= 1e-8 * (1.0 + m.abs()),
                "direct {d} vs mb {m} at x={x}, tau={tau}"
            );
        }
    }

    #[test]
    fn mb_route_regular_at_tau_zero() {
        let o = KernelOrder::new(0.25);
        let w = weber_kernel_mb(&o, &KernelPoint::new(1.0, 0.0), &o.mb_line()).unwrap();
        assert!((w - 0.26348297932911407277779).abs() < 1e-11, "got {w}");
        // even in tau
        let a = weber_kernel_mb(&o, &KernelPoint::new(1.0, 0.7), &o.mb_line()).unwrap();
        let b = weber_kernel_mb(&o, &KernelPoint::new(1.0, -0.7), &o.mb_line()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn mb_route_abscissa_independence() {
        let o = KernelOrder::new(0.25);
        let p = KernelPoint::new(1.5, 1.0);
        let a = weber_kernel_mb(&o, &p, &ContourLine::new(0.2)).unwrap();
        let b = weber_kernel_mb(&o, &p, &ContourLine::new(0.4)).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn anger_route_matches_mb() {
        for &(alpha, x, tau) in &[(0.25, 1.0, 0.6), (-0.3, 2.0, 1.1)] {
            let o = KernelOrder::new(alpha);
            let p = KernelPoint::new(x, tau);
            let m = weber_kernel_mb(&o, &p, &o.mb_line()).unwrap();
            let a = weber_kernel_anger(&o, &p, &CFG).unwrap();
            assert!(
                (a - m).abs() <= 1e-6 * (1.0 + m.abs()),
                "anger {a} vs mb {m} at alpha={alpha}, x={x}, tau={tau}"
            );
        }
    }

    #[test]
    fn anger_route_constraint() {
        let o = KernelOrder::new(0.6);
        let r = weber_kernel_anger(&o, &KernelPoint::new(1.0, 0.5), &CFG);
        assert!(matches!(r, Err(Error::Constraint(_))));
    }

    #[test]
    fn anger_diff_asymptotic_vs_contour() {
        // Independent check of the large-argument branch: AngerJ_nu - J_nu
        // at argument 2 sqrt x equals sin(pi nu)/(2 pi^2) times the contour
        // integral of Gamma(s+a)Gamma(s)Gamma(s+1/2)Gamma(1/2-s)Gamma(1-s)
        // / Gamma(1+a-s) with nu = 2a.
        for &(alpha, z) in &[(0.25, 25.0_f64), (-0.3, 32.0), (0.4, 40.0)] {
            let nu = 2.0 * alpha;
            let x = (z / 2.0) * (z / 2.0);
            // strip: the Gamma(s+a) pole family must stay left of the line
            let lo = (-alpha as f64).max(0.0);
            let sym = MellinSymbol::new(lo, 0.5, TailKind::Exponential, move |s| {
                let one = Complex64::new(1.0, 0.0);
                (lg(s + alpha) + lg(s) + lg(s + 0.5 * one) + lg(0.5 * one - s) + lg(one - s)
                    - lg(one + alpha - s))
                    .exp()
            });
            let v = mb_integral(&sym, &ContourLine::new(0.5 * (lo + 0.5)), x, &CFG).unwrap();
            let expect = (2.0 * PI * alpha).sin() / (2.0 * PI * PI) * v.re;
            let got = anger_bessel_diff(nu, z).unwrap();
            assert!(
                (got - expect).abs() < 1e-9 * (expect.abs() + 1e-3),
                "nu={nu}, z={z}: asymptotic {got} vs contour {expect}"
            );
        }
    }

    #[test]
    fn nicholson_reduction_at_alpha_zero() {
        // W_0(x, tau) = (J_{i tau}^2 + Y_{i tau}^2)/2 at sqrt x.
        let o = KernelOrder::new(0.0);
        let p = KernelPoint::new(2.0, 1.0);
        let w = weber_kernel_direct(&o, &p).unwrap();
        let z = p.x.sqrt();
        let nu = Complex64::new(0.0, p.tau);
        let j = bessel_j(nu, z).unwrap();
        let y = bessel_y(nu, z).unwrap();
        let nich = 0.5 * (j * j + y * y).re;
        assert!((w - nich).abs() < 1e-9, "w {w} vs nicholson {nich}");
        // and the J^2 + Y^2 combination is real
        assert!((j * j + y * y).im.abs() < 1e-10);
    }

    #[test]
    fn re_kernel_direct_golden_and_mb() {
        let o = KernelOrder::new(0.5);
        let p = KernelPoint::new(2.0, 0.8);
        let d = weber_re_kernel(&o, &p).unwrap();
        assert!((d - (-0.13039050870973877339153)).abs() < 1e-11, "got {d}");
        let line = line_for_tau(0.4, p.tau);
        let m = weber_re_kernel_mb(&o, &p, &line).unwrap();
        assert!((d - m).abs() <= 1e-8 * (1.0 + m.abs()), "direct {d} vs mb {m}");
    }

    #[test]
    fn re_kernel_reduces_to_real_order_product() {
        let o = KernelOrder::new(0.0);
        let v = weber_re_kernel(&o, &KernelPoint::new(4.0, 0.0)).unwrap();
        // J_0(2) Y_0(2)
        assert!((v - 0.11426840700428367806202).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn re_kernel_evenness() {
        let o = KernelOrder::new(0.5);
        let a = weber_re_kernel(&o, &KernelPoint::new(2.0, 0.8)).unwrap();
        let b = weber_re_kernel(&o, &KernelPoint::new(2.0, -0.8)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn tail_integral_golden_and_derivative() {
        let o = KernelOrder::new(0.5);
        let line = line_for_tau(0.4, 0.5);
        let t = re_kernel_tail(&o, &KernelPoint::new(1.0, 0.5), &line).unwrap();
        assert!((t - (-0.06796812411254595482051)).abs() < 1e-10, "got {t}");

        // d/dx of the tail = -Re[...] / x (fundamental theorem).
        let x = 2.0;
        let h = 1e-4;
        let tp = re_kernel_tail(&o, &KernelPoint::new(x + h, 0.5), &line).unwrap();
        let tm = re_kernel_tail(&o, &KernelPoint::new(x - h, 0.5), &line).unwrap();
        let lhs = (tp - tm) / (2.0 * h);
        let rhs = -weber_re_kernel(&o, &KernelPoint::new(x, 0.5)).unwrap() / x;
        assert!((lhs - rhs).abs() < 1e-6, "d/dx {lhs} vs {rhs}");
    }

    #[test]
    fn tail_integral_decays() {
        let o = KernelOrder::new(0.5);
        let line = line_for_tau(0.4, 0.5);
        let vals: Vec<f64> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&x| re_kernel_tail(&o, &KernelPoint::new(x, 0.5), &line).unwrap().abs())
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
    }

    #[test]
    fn ode_residual_small() {
        let o = KernelOrder::new(0.25);
        let (r, scale) = kernel_ode_residual(&o, &KernelPoint::new(2.0, 1.0), 1e-2).unwrap();
        assert!(r.abs() <= 1e-3 * scale, "residual {r}, scale {scale}");
        // alpha = 0 branch: last coefficient loses its (a tau)^2 / x part
        let o0 = KernelOrder::new(0.0);
        let (r0, scale0) = kernel_ode_residual(&o0, &KernelPoint::new(1.0, 0.5), 1e-2).unwrap();
        assert!(r0.abs() <= 1e-3 * scale0, "residual {r0}, scale {scale0}");
    }

    #[test]
    fn ode_residual_second_order() {
        // Order is measured where truncation dominates: the h^-4 stencil
        // amplifies f64 roundoff to ~1e-7 of scale near h = 1e-2, which
        // floors the residual there.
        let o = KernelOrder::new(0.25);
        let p = KernelPoint::new(2.0, 1.0);
        let (r1, _) = kernel_ode_residual(&o, &p, 0.2).unwrap();
        let (r2, _) = kernel_ode_residual(&o, &p, 0.1).unwrap();
        let order = (r1.abs() / r2.abs()).log2();
        assert!(order >= 1.7, "measured order {order} ({r1} -> {r2})");
    }

    #[test]
    fn ode_constraint() {
        let o = KernelOrder::new(0.7);
        assert!(matches!(
            kernel_ode_residual(&o, &KernelPoint::new(1.0, 1.0), 1e-2),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn bound_constant_and_kernel_estimate() {
        let o = KernelOrder::new(0.25);
        let c = bound_constant(&o, 0.25, &CFG).unwrap();
        assert!(c.is_finite() && c > 0.0);
        // |W(x, tau)| <= C x^{-g} cosh(pi tau) on a small grid.
        let line = o.mb_line();
        for &x in &[0.5, 1.0, 2.0, 5.0, 10.0] {
            for &tau in &[0.0, 0.5, 1.0, 2.0, 3.0] {
                let w = weber_kernel_mb(&o, &KernelPoint::new(x, tau), &line).unwrap();
                let bound = c * x.powf(-0.25) * (PI * tau).cosh();
                assert!(w.abs() <= bound, "bound violated at x={x}, tau={tau}: {w} vs {bound}");
            }
        }
        // strip gate
        assert!(matches!(bound_constant(&o, 0.6, &CFG), Err(Error::Strip { .. })));
    }
}
