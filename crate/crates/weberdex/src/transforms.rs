//! The forward index transforms, their Mellin-space realizations, and the
//! inversion formulas.
//!
//! `forward_f` integrates a half-line function against the kernel in `x`;
//! `forward_g` integrates a real-line function against the kernel in `tau`.
//! Inversions apply Euler-type differential operators to iterated kernel
//! integrals; every such operator is realized primarily in Mellin space
//! (polynomial multiplication of the symbol) with a finite-difference path
//! kept as an independent cross-check.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::identities::IdentityReport;
use crate::kernel::{kernel_symbol, line_for_tau, KernelOrder};
use crate::mbquad::{
    mb_integral, ContourLine, LineCache, MellinSymbol, QuadratureConfig, TailKind,
};
use crate::quad::{gl_adaptive, oscillatory_tail, tanh_sinh};
use crate::specfun::{bessel_i, bessel_j, lg, macdonald_k, macdonald_k_scaled};

const PI: f64 = std::f64::consts::PI;

/// Index grid the transform tables are built on.
pub const TAU_GRID_MAX: f64 = 8.0;
pub const TAU_GRID_STEP: f64 = 0.05;
/// Where the fitted algebraic continuation of a slowly decaying table stops.
const TAU_EXT_MAX: f64 = 40.0;
const TAU_EXT_STEP: f64 = 0.2;

/// Domain tag of a sampled function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    HalfLine,
    RealLine,
}

/// A function with declared power-law envelopes: O(x^{-decay_a}) at the
/// lower end, O(x^{-decay_b}) at the upper end. `decay_b = +inf` means
/// faster-than-any-power decay.
#[derive(Clone)]
pub struct SampledFunction {
    pub domain: Domain,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub decay_a: f64,
    pub decay_b: f64,
}

impl SampledFunction {
    pub fn half_line(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        decay_a: f64,
        decay_b: f64,
    ) -> Self {
        SampledFunction { domain: Domain::HalfLine, f: Arc::new(f), decay_a, decay_b }
    }

    pub fn real_line(f: impl Fn(f64) -> f64 + Send + Sync + 'static, decay_b: f64) -> Self {
        SampledFunction { domain: Domain::RealLine, f: Arc::new(f), decay_a: decay_b, decay_b }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Even part; the value itself for even functions.
    pub fn even_part(&self, x: f64) -> f64 {
        match self.domain {
            Domain::HalfLine => self.eval(x),
            Domain::RealLine => 0.5 * (self.eval(x) + self.eval(-x)),
        }
    }

    /// Sanity check: the declared envelopes must not contradict sampled
    /// magnitudes at the extremes (factor-10 slack).
    pub fn check_decay(&self) -> Result<()> {
        let reference = self.eval(1.0).abs().max(self.eval(2.0).abs()).max(1e-300);
        if self.domain == Domain::HalfLine && self.decay_a.is_finite() {
            let x0 = 1e-3;
            if self.eval(x0).abs() > 10.0 * reference * x0.powf(-self.decay_a) {
                return Err(Error::Domain(format!(
                    "sampled magnitude at x={x0} contradicts declared O(x^-{}) envelope",
                    self.decay_a
                )));
            }
        }
        if self.decay_b.is_finite() {
            let x1: f64 = 50.0;
            let bound = 10.0 * reference * x1.powf(-self.decay_b);
            let v = match self.domain {
                Domain::HalfLine => self.eval(x1).abs(),
                Domain::RealLine => self.eval(x1).abs().max(self.eval(-x1).abs()),
            };
            if v > bound {
                return Err(Error::Domain(format!(
                    "sampled magnitude at |x|={x1} contradicts declared O(x^-{}) envelope",
                    self.decay_b
                )));
            }
        }
        Ok(())
    }
}

/// Which transform a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    FTransform,
    GTransform,
}

/// Tabulated transform values on a strictly increasing grid.
#[derive(Clone)]
pub struct TransformTable {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: TableKind,
}

impl TransformTable {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, kind: TableKind) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Domain("grid/values length mismatch".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("table grid must be strictly increasing".into()));
        }
        if grid.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("table entries must be finite".into()));
        }
        Ok(TransformTable { grid, values, kind })
    }

    /// Builds a table by evaluating `f` at every grid point, in parallel,
    /// with a deterministic (index-ordered) assembly.
    pub fn tabulate<F>(grid: Vec<f64>, kind: TableKind, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let n = grid.len();
        let threads = crate::thread_cap().max(1).min(n.max(1));
        let mut values = vec![0.0; n];
        if n > 0 {
            let chunk = n.div_ceil(threads);
            let mut slots: Vec<Result<Vec<f64>>> = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for (c, xs) in grid.chunks(chunk).enumerate() {
                    let f = &f;
                    handles.push((c, scope.spawn(move || {
                        xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()
                    })));
                }
                for (_, h) in handles {
                    slots.push(h.join().expect("tabulation worker panicked"));
                }
            });
            let mut i = 0;
            for slot in slots {
                for v in slot? {
                    values[i] = v;
                    i += 1;
                }
            }
        }
        TransformTable::new(grid, values, kind)
    }

    /// Quadrature weights for integrating a function sampled on this grid:
    /// composite Simpson when the grid is uniform with an odd point count,
    /// trapezoid otherwise.
    pub fn quad_weights(&self) -> Vec<f64> {
        integration_weights(&self.grid)
    }
}

/// The standard table grid: [0, TAU_GRID_MAX] with step TAU_GRID_STEP.
pub fn standard_tau_grid() -> Vec<f64> {
    let n = (TAU_GRID_MAX / TAU_GRID_STEP).round() as usize;
    (0..=n).map(|k| k as f64 * TAU_GRID_STEP).collect()
}

/// A longer, denser table grid for inversion work: [0, 20] at step 0.01.
/// Inverting the F transform resolves index data against weights that grow
/// like e^{pi tau} relative to the result, so the round trip needs the
/// table to cover the whole index range the spectral cutoff admits, to
/// reach far enough that the fitted tail continuation is accurate, and to
/// be sampled finely enough that the interpolation residual (whose
/// low-frequency content scales like the sixth power of the step) stays
/// below the spectral-window error budget.
pub fn inversion_tau_grid() -> Vec<f64> {
    let n = (20.0 / 0.01_f64).round() as usize;
    (0..=n).map(|k| k as f64 * 0.01).collect()
}

fn integration_weights(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h = grid[1] - grid[0];
    let uniform = grid.windows(2).all(|w| ((w[1] - w[0]) - h).abs() < 1e-9 * h.abs());
    let mut w = vec![0.0; n];
    if uniform && n % 2 == 1 {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = h / 3.0
                * if k == 0 || k == n - 1 {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
        }
    } else {
        for k in 0..n - 1 {
            let half = 0.5 * (grid[k + 1] - grid[k]);
            w[k] += half;
            w[k + 1] += half;
        }
    }
    w
}

// ---------------------------------------------------------------------------
// Mellin machinery
// ---------------------------------------------------------------------------

/// Mellin transform by split quadrature: the strip of absolute convergence is
/// decay_a < Re s < decay_b.
pub fn mellin_transform(
    f: &SampledFunction,
    s: Complex64,
    _cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if !(f.decay_a < s.re && s.re < f.decay_b) {
        return Err(Error::Strip { abscissa: s.re, lo: f.decay_a, hi: f.decay_b });
    }
    let g = |x: f64| {
        if x <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            ((s - 1.0) * x.ln()).exp() * f.eval(x)
        }
    };
    let head = tanh_sinh(&g, 0.0, 1.0, 1e-12, 1e-16)?;
    let tail = crate::quad::exp_sinh(&g, 1.0, 1e-12, 1e-16)?;
    Ok(head + tail)
}

/// Inverse Mellin transform along a vertical line. The integrand must be
/// absolutely integrable on the line (gated by the tail bound inside
/// `mb_integral`).
pub fn mellin_inverse(
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    line: &ContourLine,
    x: f64,
) -> Result<Complex64> {
    let sym = MellinSymbol::new(f64::NEG_INFINITY, f64::INFINITY, TailKind::Exponential, f_star);
    mb_integral(&sym, line, x, &QuadratureConfig::default())
}

// ---------------------------------------------------------------------------
// The F transform
// ---------------------------------------------------------------------------

fn kernel_prefactor(tau: f64) -> f64 {
    (PI * tau).cosh() / PI.powf(2.5)
}

/// Reference points spanning the argument range seen by the split
/// half-line quadratures; the contour caches must stay accurate there.
const HALF_LINE_XS: [f64; 10] =
    [1e-12, 1e-8, 1e-4, 0.01, 0.1, 1.0, 10.0, 100.0, 2e3, 2e5];

/// Direct forward transform: quadrature of the kernel against `f` over the
/// half-line, split at 1, with a geometric tail driven by the decay of `f`.
pub fn forward_f(
    order: &KernelOrder,
    f: &SampledFunction,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    f.check_decay()?;
    if f.decay_b <= 1.0 {
        return Err(Error::Convergence(
            "forward transform needs f to decay faster than 1/x".into(),
        ));
    }
    let (lo, hi) = order.mb_strip();
    let line = line_for_tau(0.5 * (lo + hi), tau);
    let sym = kernel_symbol(order.alpha, tau);
    let cache = LineCache::build(&sym, &line, &HALF_LINE_XS, cfg)?;
    let pref = kernel_prefactor(tau);
    let integrand = |x: f64| {
        if x < 1e-12 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(pref * cache.eval(x).re * f.eval(x), 0.0)
        }
    };
    let mut acc = tanh_sinh(&integrand, 0.0, 1.0, 1e-12, 1e-15)?.re;
    let mut a = 1.0;
    for _ in 0..18 {
        let b = 2.0 * a;
        let block = gl_adaptive(&integrand, a, b, 24, 1e-11, 1e-16, 5)?.re;
        acc += block;
        if block.abs() <= 1e-14 * acc.abs().max(1e-12) {
            break;
        }
        a = b;
    }
    Ok(acc)
}

/// Mellin-space forward transform: the kernel symbol against f*(1-s) on a
/// vertical line, evaluated at argument 1.
pub fn forward_f_mellin(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    tau: f64,
    line: &ContourLine,
) -> Result<f64> {
    let (lo, hi) = order.mb_strip();
    if !(line.abscissa > lo && line.abscissa < hi) {
        return Err(Error::Strip { abscissa: line.abscissa, lo, hi });
    }
    let ks = kernel_symbol(order.alpha, tau);
    // fold the cosh(pi tau) prefactor into the symbol: the raw contour
    // integral decays like e^{-pi tau}, and scaling it up front keeps the
    // quadrature's absolute tolerance meaningful at large tau
    let pref = kernel_prefactor(tau);
    let sym = MellinSymbol::new(lo, hi, TailKind::Exponential, move |s| {
        pref * ks.eval(s) * f_star(Complex64::new(1.0, 0.0) - s)
    });
    let tall = line_for_tau(line.abscissa, tau);
    let v = mb_integral(&sym, &tall, 1.0, &QuadratureConfig::default())?;
    Ok(v.re)
}

fn psi_symbol(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    extra_gamma: bool,
) -> MellinSymbol {
    let alpha = order.alpha;
    // Gamma(1-s+a)Gamma(s)/Gamma(s+a) (times one more Gamma(s) for the
    // phi variant), against f*(s); net exponential decay on the line.
    MellinSymbol::new(0.0, 1.0 + alpha, TailKind::Exponential, move |s| {
        let one = Complex64::new(1.0, 0.0);
        let mut l = lg(one - s + alpha) + lg(s) - lg(s + alpha);
        if extra_gamma {
            l += lg(s);
        }
        l.exp() * f_star(s)
    })
}

/// The auxiliary function fed to the Kontorovich-Lebedev composition.
pub fn psi_alpha(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    x: f64,
    line: &ContourLine,
) -> Result<f64> {
    let sym = psi_symbol(order, f_star, false);
    sym.check_line(line)?;
    Ok(mb_integral(&sym, line, x, &QuadratureConfig::default())?.re)
}

/// The squared-gamma variant feeding the Macdonald/modified-Bessel product
/// representation of the forward transform.
pub fn phi_alpha(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    x: f64,
    line: &ContourLine,
) -> Result<f64> {
    let sym = psi_symbol(order, f_star, true);
    sym.check_line(line)?;
    Ok(mb_integral(&sym, line, x, &QuadratureConfig::default())?.re)
}

/// Extrapolates the limit of a sequence of partial sums whose increments die
/// off geometrically (algebraic integrand tails summed over doubling
/// blocks); two sweeps of increment-ratio extrapolation remove the two
/// leading modes.
fn geometric_block_limit(partial: &[f64]) -> f64 {
    let mut s: Vec<f64> = partial.to_vec();
    for _ in 0..2 {
        if s.len() < 3 {
            break;
        }
        let n = s.len();
        let (b1, b2) = (s[n - 1] - s[n - 2], s[n - 2] - s[n - 3]);
        if b2.abs() < 1e-300 || (b1 / b2).abs() >= 0.95 {
            break;
        }
        let r = b1 / b2;
        let lim = s[n - 1] + b1 * r / (1.0 - r);
        let mut next = Vec::with_capacity(n - 1);
        for k in 2..n {
            let (c1, c2) = (s[k] - s[k - 1], s[k - 1] - s[k - 2]);
            if c2.abs() < 1e-300 {
                next.push(s[k]);
            } else {
                let rr = c1 / c2;
                if rr.abs() < 0.95 {
                    next.push(s[k] + c1 * rr / (1.0 - rr));
                } else {
                    next.push(s[k]);
                }
            }
        }
        if next.is_empty() {
            return lim;
        }
        s = next;
    }
    *s.last().unwrap()
}

/// Head integral over (0, 1] in logarithmic coordinates w = ln x. Contour
/// caches evaluated far below their validated range grow like a power of
/// 1/x (at the eps-level coefficient noise), which defeats quadrature done
/// directly in x; after the substitution the weighted integrand stays
/// bounded and its oscillation (set by the cache line height) is resolvable
/// by a fixed panel density.
fn log_head_integral(
    f: impl Fn(f64) -> Complex64,
    w_min: f64,
    panels0: usize,
) -> Result<Complex64> {
    gl_adaptive(
        |w: f64| {
            let x = w.exp();
            f(x) * x
        },
        w_min,
        0.0,
        panels0,
        1e-11,
        1e-12,
        4,
    )
}

/// Kontorovich-Lebedev composition: (2/pi^2) times the Macdonald kernel
/// against e^x psi(2x). The integrand decays only algebraically, so the
/// doubling blocks are extrapolated.
pub fn forward_f_kl(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    tau: f64,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sym = psi_symbol(order, f_star, false);
    sym.check_line(line)?;
    let xs: Vec<f64> = HALF_LINE_XS.iter().map(|x| 2.0 * x).collect();
    let cache = LineCache::build(&sym, line, &xs, cfg)?;
    let integrand = |x: f64| {
        if x <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let k = macdonald_k_scaled(tau, x).unwrap_or(f64::NAN);
            Complex64::new(k * cache.eval(2.0 * x).re, 0.0)
        }
    };
    let mut acc = log_head_integral(&integrand, -40.0, 320)?.re;
    let mut partial = Vec::new();
    let mut a = 1.0;
    for _ in 0..13 {
        let b = 2.0 * a;
        acc += gl_adaptive(&integrand, a, b, 24, 1e-11, 1e-16, 5)?.re;
        partial.push(acc);
        a = b;
    }
    Ok(2.0 / (PI * PI) * geometric_block_limit(&partial))
}

// ---------------------------------------------------------------------------
// The G transform
// ---------------------------------------------------------------------------

/// Simpson nodes (tau_j, 2 w_j) of the standard index grid, folding the
/// full-line integral onto the half line for even integrands.
fn folded_grid_nodes() -> Vec<(f64, f64)> {
    let grid = standard_tau_grid();
    let w = integration_weights(&grid);
    grid.into_iter().zip(w.into_iter().map(|w| 2.0 * w)).collect()
}

/// Aggregated symbol for an index integral against the kernel: the
/// tau-quadrature is folded into one Mellin symbol,
/// sum_j c_j Gamma(s+i tau_j) Gamma(s-i tau_j) times the tau-free gamma
/// factor of the kernel symbol.
pub(crate) fn g_aggregate_symbol(alpha: f64, coeffs: Vec<(f64, f64)>) -> MellinSymbol {
    let (lo, hi) = KernelOrder::new(alpha).mb_strip();
    MellinSymbol::new(lo, hi, TailKind::Exponential, move |s| {
        let one = Complex64::new(1.0, 0.0);
        let base =
            (lg(s + alpha) + lg(0.5 * one - s) + lg(one - s) - lg(one + alpha - s)).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for &(tau, c) in &coeffs {
            let it = Complex64::new(0.0, tau);
            sum += c * (lg(s + it) + lg(s - it)).exp();
        }
        base * sum
    })
}

/// Builds the aggregate coefficients c_j = 2 w_j cosh(pi tau_j) h(tau_j) for
/// an even weight h, enforcing that the decay of h beats the cosh growth.
pub(crate) fn g_aggregate_coeffs(
    h: &dyn Fn(f64) -> f64,
) -> Result<Vec<(f64, f64)>> {
    let mut coeffs = Vec::new();
    let mut peak: f64 = 0.0;
    for (tau, w2) in folded_grid_nodes() {
        let c = w2 * (PI * tau).cosh() * h(tau);
        if !c.is_finite() {
            return Err(Error::Domain("non-finite index integrand".into()));
        }
        peak = peak.max(c.abs());
        coeffs.push((tau, c));
    }
    // summability: the weighted integrand must have died off by the grid end
    let edge = coeffs.iter().rev().take(4).map(|(_, c)| c.abs()).fold(0.0, f64::max);
    if peak > 0.0 && edge > 1e-8 * peak {
        return Err(Error::Tail { bound: edge / peak, tol: 1e-8 });
    }
    Ok(coeffs)
}

/// Forward G transform: the kernel against `g` over the index line. Kernel
/// evenness folds the integral to the half line; odd parts of `g` drop out.
pub fn forward_g(
    order: &KernelOrder,
    g: &SampledFunction,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("needs x > 0, got {x}")));
    }
    let ge = |tau: f64| g.even_part(tau);
    let coeffs = g_aggregate_coeffs(&ge)?;
    if coeffs.iter().all(|(_, c)| *c == 0.0) {
        return Ok(0.0);
    }
    let sym = g_aggregate_symbol(order.alpha, coeffs);
    let (lo, hi) = order.mb_strip();
    let line = line_for_tau(0.5 * (lo + hi), TAU_GRID_MAX);
    Ok(mb_integral(&sym, &line, x, cfg)?.re / PI.powf(2.5))
}

/// Contour cache of the aggregated G-transform symbol, for operations that
/// need `(G g)(y)` on many arguments. The returned closure already includes
/// the kernel prefactor.
pub(crate) fn forward_g_cache(
    order: &KernelOrder,
    g: &SampledFunction,
    cfg: &QuadratureConfig,
) -> Result<LineCache> {
    let ge = |tau: f64| g.even_part(tau);
    let coeffs = g_aggregate_coeffs(&ge)?;
    let sym = g_aggregate_symbol(order.alpha, coeffs);
    let (lo, hi) = order.mb_strip();
    let line = line_for_tau(0.5 * (lo + hi), TAU_GRID_MAX);
    LineCache::build(&sym, &line, &HALF_LINE_XS, cfg)
}

/// The G transform packaged as a reusable function of x: one aggregated
/// contour cache, built once and shared by every later evaluation. The
/// declared envelopes reflect the transform's boundedness at 0 and its
/// ~x^{-1/2} far field.
pub fn forward_g_function(
    order: &KernelOrder,
    g: &SampledFunction,
    cfg: &QuadratureConfig,
) -> Result<SampledFunction> {
    let cache = forward_g_cache(order, g, cfg)?;
    let pref = PI.powf(2.5);
    Ok(SampledFunction::half_line(
        move |y| if y > 0.0 { cache.eval(y).re / pref } else { 0.0 },
        0.0,
        0.5,
    ))
}

/// Solves a small linear system by Gaussian elimination with partial
/// pivoting (tail-fit plumbing).
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap()
        });
        let piv = piv.unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// Consistency check of the Mellin transform of the G transform against the
/// aggregated gamma-integral form, reported at s = gamma and gamma +/- i.
pub fn forward_g_mellin_check(
    order: &KernelOrder,
    g: &SampledFunction,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let (lo, _hi) = order.mb_strip();
    if !(line.abscissa > lo && line.abscissa < 0.5) {
        return Err(Error::Strip { abscissa: line.abscissa, lo, hi: 0.5 });
    }
    let ge = |tau: f64| g.even_part(tau);
    let coeffs = g_aggregate_coeffs(&ge)?;
    let zero_g = coeffs.iter().all(|(_, c)| *c == 0.0);
    let cache = if zero_g {
        None
    } else {
        Some(forward_g_cache(order, g, cfg)?)
    };
    let gg = |y: f64| -> f64 {
        match &cache {
            Some(c) => c.eval(y).re / PI.powf(2.5),
            None => 0.0,
        }
    };
    let alpha = order.alpha;
    let one = Complex64::new(1.0, 0.0);
    let eval_sides = |s: Complex64| -> Result<(Complex64, Complex64)> {
        // left side: Mellin(G g)(s) * G(1+a-s)/(G(a+s)G(1-s)); the Mellin
        // integral gets a fitted y^{-1/2}, y^{-1}, ... analytic tail
        let m_integrand = |y: f64| {
            if y <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                ((s - 1.0) * y.ln()).exp() * gg(y)
            }
        };
        let y_cut: f64 = 1200.0;
        let mut mell = log_head_integral(&m_integrand, -120.0, 960)?;
        let mut a = 1.0;
        while a < y_cut {
            let b = (2.0 * a).min(y_cut);
            mell += gl_adaptive(&m_integrand, a, b, 24, 1e-12, 1e-16, 5)?;
            a = b;
        }
        if !zero_g {
            // four-term power fit of the far field of (G g)(y)
            let ratio = 1.4_f64;
            let ys: Vec<f64> = (0..4).map(|k| y_cut * ratio.powi(k)).collect();
            let powers = [0.5, 1.0, 1.5, 2.0];
            let a_mat: Vec<Vec<Complex64>> = ys
                .iter()
                .map(|&y| powers.iter().map(|&p| Complex64::new(y.powf(-p), 0.0)).collect())
                .collect();
            let rhs: Vec<Complex64> =
                ys.iter().map(|&y| Complex64::new(gg(y), 0.0)).collect();
            let c = solve_linear(a_mat, rhs);
            for (ck, &p) in c.iter().zip(powers.iter()) {
                // int_Y^inf y^{s-1-p} dy, Re s < 1/2 <= p
                mell += ck * ((s - p) * y_cut.ln()).exp() / (p - s);
            }
        }
        let lhs = mell * (lg(one + alpha - s) - lg(s + alpha) - lg(one - s)).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for &(tau, c) in &coeffs {
            let it = Complex64::new(0.0, tau);
            sum += c * (lg(s + it) + lg(s - it)).exp();
        }
        let rhs = (lg(0.5 * one - s)).exp() / PI.powf(2.5) * sum;
        Ok((lhs, rhs))
    };
    let gamma = line.abscissa;
    let (l0, r0) = eval_sides(Complex64::new(gamma, 0.0))?;
    let mut report = IdentityReport::new("g-transform-mellin", l0, r0, 1e-8, 1e-5);
    for im in [1.0, -1.0] {
        let (l, r) = eval_sides(Complex64::new(gamma, im))?;
        let abs = (l - r).norm();
        let rel = abs / l.norm().max(r.norm()).max(1e-300);
        report.abs_err = report.abs_err.max(abs);
        report.rel_err = report.rel_err.max(rel);
    }
    report.passed = report.abs_err <= report.abs_tol || report.rel_err <= report.rel_tol;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Inversion of the F transform
// ---------------------------------------------------------------------------

/// Expands a tabulated transform into quadrature nodes (tau_j, w_j, v_j),
/// continuing an algebraically decaying table past its edge with a fitted
/// c/tau^2 + d/tau^3 law. A table that has decayed below 1e-10 of its peak
/// at the edge is used as-is.
/// Two-point fit of c/tau^2 + d/tau^3 through the table edge and a point two
/// units below it. Returns None when the tabulated values have already
/// decayed below 1e-10 of their peak at the edge (no continuation needed) or
/// the table is too short to fit.
fn envelope_fit(table: &TransformTable) -> Option<(f64, f64)> {
    let peak = table.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let edge_tau = *table.grid.last().unwrap_or(&0.0);
    let edge_val = *table.values.last().unwrap_or(&0.0);
    if peak == 0.0 || edge_val.abs() <= 1e-10 * peak || edge_tau < 4.0 {
        return None;
    }
    let idx_a = table
        .grid
        .iter()
        .position(|&t| t >= edge_tau - 2.0)
        .unwrap_or(table.grid.len() - 1);
    let (ta, va) = (table.grid[idx_a], table.values[idx_a]);
    let (tb, vb) = (edge_tau, edge_val);
    let det = 1.0 / (ta * ta * tb * tb) * (1.0 / tb - 1.0 / ta);
    if det.abs() < 1e-300 {
        return None;
    }
    let c = (va / (tb * tb * tb) - vb / (ta * ta * ta)) / det;
    let d = (vb / (ta * ta) - va / (tb * tb)) / det;
    Some((c, d))
}

/// Number of inverse-power terms fitted when continuing the weighted
/// transform past the table edge.
const TAIL_TERMS: usize = 5;

/// Continuation coefficients a_k of g(tau) ~ sum_k a_k / tau^{2k+1}
/// (k = 0..TAIL_TERMS) past the grid edge. The transform is an even
/// function of the index (its symbol depends on the index only through the
/// pair Gamma(s + i tau) Gamma(s - i tau)), so its large-index expansion
/// runs in even inverse powers and that of g = tau * (Ff)(tau) in odd ones.
/// Fitting the right parity matters: a wrong-parity model leaves a residual
/// two orders larger than the first omitted term of the true series, and
/// the inversion is sensitive to exactly that residual. Coefficients come
/// from a least-squares fit over the trailing quarter of the table in a
/// conditioning-friendly shifted variable. Returns None when the data has
/// already decayed at the edge or the table is too short.
fn tail_fit(grid: &[f64], g: &[f64]) -> Option<[f64; TAIL_TERMS]> {
    let n = g.len();
    let peak = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let edge = grid[n - 1];
    if peak == 0.0 || g[n - 1].abs() <= 1e-10 * peak || edge < 4.0 {
        return None;
    }
    let i0 = grid.iter().position(|&t| t >= 0.75 * edge)?;
    if n - i0 < 5 * TAIL_TERMS {
        return None;
    }
    // g(tau) ~ r p(x) with r = edge/tau, x = r^2; fit the polynomial p by
    // least squares in z = (x - xc)/xh, which spans [-1, 1] over the window
    let x_hi = (edge / grid[i0]).powi(2);
    let xc = 0.5 * (1.0 + x_hi);
    let xh = (0.5 * (x_hi - 1.0)).max(1e-12);
    let mut m = [[0.0_f64; TAIL_TERMS]; TAIL_TERMS];
    let mut rhs = [0.0_f64; TAIL_TERMS];
    for i in i0..n {
        let r = edge / grid[i];
        let z = (r * r - xc) / xh;
        let y = g[i] / r;
        let mut zp = [0.0_f64; TAIL_TERMS];
        let mut p = 1.0;
        for zk in zp.iter_mut() {
            *zk = p;
            p *= z;
        }
        for j in 0..TAIL_TERMS {
            rhs[j] += zp[j] * y;
            for k in 0..TAIL_TERMS {
                m[j][k] += zp[j] * zp[k];
            }
        }
    }
    let beta = solve_small(&mut m, &mut rhs)?;
    // expand p(z) back into powers of x
    let mut q = [0.0_f64; TAIL_TERMS];
    for (j, &bj) in beta.iter().enumerate() {
        let mut term = [0.0_f64; TAIL_TERMS];
        term[0] = 1.0;
        for _ in 0..j {
            let mut next = [0.0_f64; TAIL_TERMS];
            for k in 0..TAIL_TERMS {
                if term[k] != 0.0 {
                    if k + 1 < TAIL_TERMS {
                        next[k + 1] += term[k] / xh;
                    }
                    next[k] -= xc / xh * term[k];
                }
            }
            term = next;
        }
        for k in 0..TAIL_TERMS {
            q[k] += bj * term[k];
        }
    }
    // r x^k = (edge/tau)^{2k+1}, so a_k = q_k edge^{2k+1}
    let mut a = [0.0_f64; TAIL_TERMS];
    let mut ep = edge;
    for (ak, &qk) in a.iter_mut().zip(q.iter()) {
        *ak = qk * ep;
        ep *= edge * edge;
    }
    Some(a)
}

/// Gaussian elimination with partial pivoting for the small fit systems.
fn solve_small(
    m: &mut [[f64; TAIL_TERMS]; TAIL_TERMS],
    b: &mut [f64; TAIL_TERMS],
) -> Option<[f64; TAIL_TERMS]> {
    let n = TAIL_TERMS;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0_f64; TAIL_TERMS];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

fn table_nodes_extended(table: &TransformTable) -> Vec<(f64, f64, f64)> {
    let w = integration_weights(&table.grid);
    let mut nodes: Vec<(f64, f64, f64)> = table
        .grid
        .iter()
        .zip(w.iter())
        .zip(table.values.iter())
        .map(|((&t, &w), &v)| (t, w, v))
        .collect();
    let Some((c, d)) = envelope_fit(table) else {
        return nodes;
    };
    let edge_tau = *table.grid.last().unwrap_or(&0.0);
    let ext_n = ((TAU_EXT_MAX - edge_tau) / TAU_EXT_STEP).round() as usize;
    let ext_n = if ext_n % 2 == 1 { ext_n + 1 } else { ext_n };
    if ext_n < 2 {
        return nodes;
    }
    let h = (TAU_EXT_MAX - edge_tau) / ext_n as f64;
    for k in 0..=ext_n {
        let t = edge_tau + k as f64 * h;
        let wk = h / 3.0
            * if k == 0 || k == ext_n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
        nodes.push((t, wk, c / (t * t) + d / (t * t * t)));
    }
    nodes
}

/// Gamma factor shared by the inverse-transform symbols:
/// Gamma(a+s)/(Gamma(1+s)Gamma(1/2+s)Gamma(1+a-s)).
fn inverse_tail_factor(alpha: f64, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (lg(s + alpha) - lg(one + s) - lg(0.5 * one + s) - lg(one + alpha - s)).exp()
}

fn check_invert_order(order: &KernelOrder) -> Result<()> {
    if order.alpha <= 0.0 {
        return Err(Error::Constraint(format!(
            "inversion of the F transform needs alpha > 0, got {}",
            order.alpha
        )));
    }
    Ok(())
}

/// Precomputed core of the inverse F transform. The sinh-weighted index
/// aggregate
///
///   J(s) = int_0^inf tau sinh(pi tau) (Ff)(tau) Gamma(s+i tau)Gamma(s-i tau) dtau
///
/// is hopeless to evaluate by direct tau quadrature: the integrand peaks at
/// e^{pi |Im s|} times the size of the result, so every digit of Im s costs
/// 1.4 digits of cancellation. Instead we use the Fourier-sine
/// representation of the weighted gamma pair,
///
///   sinh(pi tau) Gamma(s+i tau)Gamma(s-i tau)
///       = sqrt(pi) Gamma(1/2+s)/Gamma(1-s)
///         * int_0^inf sin(t tau) sinh^{-2s}(t/2) dt,   0 < Re s < 1/2,
///
/// which turns J into the same gamma prefactor times
/// int_0^inf FS(t) sinh^{-2s}(t/2) dt, with FS the sine transform of
/// tau (Ff)(tau). All exponential smallness is then explicit in the
/// prefactor and nothing cancels.
///
/// The t integral is taken in the variable u = ln sinh(t/2), where
/// sinh^{-2s}(t/2) = e^{-2su} is a pure exponential: on a uniform u grid the
/// integral becomes a discrete Fourier sum evaluated by phase recurrence.
/// FS itself is computed once per grid point by Filon quadrature of the
/// table (exact handling of sin(t tau) against a local polynomial model, so
/// large t does not outrun the table resolution) plus the closed-form sine
/// transform of the fitted odd-inverse-power continuation past the edge.
struct SineAggregate {
    nu: f64,
    u0: f64,
    du: f64,
    w: Vec<f64>,
}

impl SineAggregate {
    fn build(table: &TransformTable, nu: f64) -> Self {
        let g: Vec<f64> = table
            .grid
            .iter()
            .zip(table.values.iter())
            .map(|(&t, &v)| t * v)
            .collect();
        // Continuation of g = tau (Ff)(tau) past the edge in the odd
        // inverse-power basis of its true asymptotic series (see
        // [`tail_fit`]); the model error of the continuation feeds straight
        // into the aggregate at the level of its integrated size, so the
        // basis parity and term count are chosen to push it below the
        // spectral-window error budget.
        let edge = *table.grid.last().unwrap_or(&0.0);
        let tail = tail_fit(&table.grid, &g);
        let du = 0.02;
        // decay rates of the u integrand: e^{(1-2 nu)u} towards -inf
        // (FS tends to a constant as t -> 0), e^{-2 nu u} towards +inf
        let u_lo = (-34.0 / (1.0 - 2.0 * nu)).max(-420.0);
        let u_hi = (34.0 / (2.0 * nu)).min(800.0);
        let n = ((u_hi - u_lo) / du).ceil() as usize + 1;
        let mut w = Vec::with_capacity(n);
        for k in 0..n {
            let u = u_lo + k as f64 * du;
            let t = if u > 30.0 {
                2.0 * (u + std::f64::consts::LN_2)
            } else {
                2.0 * u.exp().asinh()
            };
            let mut fs = crate::quad::filon_sin(&table.grid, &g, t);
            if let Some(a) = &tail {
                // closed-form sine transform of the fitted continuation:
                // S_n = int_E^inf sin(t r) r^{-n} dr and its cosine partner
                // C_n obey the two-term recursion below, seeded by the sine
                // and cosine integrals at n = 1
                let te = t * edge;
                let (sn, cn) = te.sin_cos();
                let mut s_n = std::f64::consts::FRAC_PI_2 - crate::specfun::sine_integral(te);
                let mut c_n = -crate::specfun::cosine_integral(te).unwrap_or(0.0);
                let mut fs_tail = a[0] * s_n;
                let mut epow = 1.0; // edge^{n-1}
                for n in 2..=(2 * TAIL_TERMS - 1) {
                    epow *= edge;
                    let f = 1.0 / (n - 1) as f64;
                    let s_next = f * (sn / epow + t * c_n);
                    let c_next = f * (cn / epow - t * s_n);
                    s_n = s_next;
                    c_n = c_next;
                    if n % 2 == 1 {
                        fs_tail += a[(n - 1) / 2] * s_n;
                    }
                }
                fs += fs_tail;
            }
            // dt/du * e^{-2 nu u}, assembled without overflow at either end
            let env = if u >= 0.0 {
                2.0 * (-2.0 * nu * u).exp() / (1.0 + (-2.0 * u).exp()).sqrt()
            } else {
                2.0 * ((1.0 - 2.0 * nu) * u).exp() / (1.0 + (2.0 * u).exp()).sqrt()
            };
            w.push(fs * env * du);
        }
        SineAggregate { nu, u0: u_lo, du, w }
    }

    /// int FS(t) sinh^{-2s}(t/2) dt for s on the line Re s = nu.
    fn eval(&self, s: Complex64) -> Complex64 {
        debug_assert!((s.re - self.nu).abs() < 1e-9);
        let ts = s.im;
        let rot = Complex64::from_polar(1.0, -2.0 * ts * self.du);
        let mut ph = Complex64::from_polar(1.0, -2.0 * ts * self.u0);
        let mut sum = Complex64::new(0.0, 0.0);
        for &wk in &self.w {
            sum += wk * ph;
            ph *= rot;
        }
        sum
    }
}

/// Spectral cutoff of the inverse F transform. Errors of size eps at index
/// tau in the transform table enter the reconstruction amplified by
/// ~e^{pi tau} (the intrinsic conditioning of inverting a kernel that decays
/// like e^{-pi tau} in the index): the cutoff caps that amplification where
/// it would cross the reconstruction tolerance, at the price of discarding
/// the Mellin mass of f*(1+s) beyond |Im s| ~ T, which decays like
/// e^{-pi |Im s|/2} for fixtures of exponential type.
const INVERT_CUTOFF: f64 = 7.0;

/// Smooth spectral window exp(-(s/T)^48), essentially flat for
/// |Im s| < 0.9 T and numerically zero past 1.2 T. The high power keeps the
/// rolloff steep enough that the window beats the e^{pi |Im s|} growth of
/// the amplified table error within a narrow band around T instead of
/// letting it leak through a slow shoulder.
fn spectral_window(s: Complex64) -> Complex64 {
    (-(s / INVERT_CUTOFF).powu(48)).exp()
}

fn invert_f_symbol(
    alpha: f64,
    data: std::sync::Arc<SineAggregate>,
    with_operator: bool,
) -> MellinSymbol {
    let order = KernelOrder::new(alpha);
    let (lo, hi) = order.mb_strip();
    MellinSymbol::new(lo, hi, TailKind::Exponential, move |s| {
        let one = Complex64::new(1.0, 0.0);
        let pre = PI.sqrt() * (lg(0.5 * one + s) - lg(one - s)).exp();
        let op = if with_operator {
            alpha * alpha - s * s
        } else {
            one
        };
        op * spectral_window(s) * inverse_tail_factor(alpha, s) * pre * data.eval(s)
    })
}

fn invert_line(line: &ContourLine) -> ContourLine {
    // the spectral window is numerically zero past |Im s| ~ 1.2 T
    ContourLine::with_height(line.abscissa, 1.3 * INVERT_CUTOFF)
}

/// The aggregated symbol carries a numerical floor well above machine
/// precision (amplified table error near the window edge), so the contour
/// quadrature cannot meaningfully refine past ~1e-9 relative.
fn invert_cfg(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: cfg.rel_tol.max(1e-9),
        abs_tol: cfg.abs_tol.max(1e-11),
        ..*cfg
    }
}

/// Inverse F transform, Mellin-operator path: the Euler operator
/// alpha^2 - (x d/dx)^2 is applied as the polynomial alpha^2 - s^2 on the
/// aggregated symbol of the sinh-weighted index integral (see
/// [`SineAggregate`] for how that integral is made numerically stable), and
/// f(x) = (2 sqrt pi / x) times the resulting contour integral.
pub fn invert_f(
    order: &KernelOrder,
    ff: &TransformTable,
    x: f64,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_invert_order(order)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("needs x > 0, got {x}")));
    }
    let (lo, hi) = order.mb_strip();
    if !(line.abscissa > lo && line.abscissa < hi) {
        return Err(Error::Strip { abscissa: line.abscissa, lo, hi });
    }
    if ff.values.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let data = std::sync::Arc::new(SineAggregate::build(ff, line.abscissa));
    let sym = invert_f_symbol(order.alpha, data, true);
    let v = mb_integral(&sym, &invert_line(line), x, &invert_cfg(cfg))?;
    Ok(2.0 * PI.sqrt() / x * v.re)
}

/// Inverse F transform, finite-difference path: the same aggregated symbol
/// evaluated from one contour cache, with the Euler operator applied by
/// central differences in ln x. Cross-checks the symbol path.
pub fn invert_f_fd(
    order: &KernelOrder,
    ff: &TransformTable,
    x: f64,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_invert_order(order)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("needs x > 0, got {x}")));
    }
    if ff.values.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let data = std::sync::Arc::new(SineAggregate::build(ff, line.abscissa));
    let sym = invert_f_symbol(order.alpha, data, false);
    let h = 1e-2;
    let u0 = x.ln();
    let xs: Vec<f64> = (-2..=2).map(|k| (u0 + k as f64 * h).exp()).collect();
    let cache = LineCache::build(&sym, &invert_line(line), &xs, &invert_cfg(cfg))?;
    let t: Vec<f64> = xs.iter().map(|&y| cache.eval(y).re).collect();
    let d2 = (-t[0] + 16.0 * t[1] - 30.0 * t[2] + 16.0 * t[3] - t[4]) / (12.0 * h * h);
    let alpha = order.alpha;
    Ok(2.0 * PI.sqrt() / x * (alpha * alpha * t[2] - d2))
}

/// Truncated product-operator inversion: the sine product is kept to N
/// factors and applied, together with alpha^2 - s^2, as a polynomial on the
/// kernel symbol itself.
pub fn invert_f_product(
    order: &KernelOrder,
    ff: &TransformTable,
    x: f64,
    n: u32,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_invert_order(order)?;
    if n > 5 {
        return Err(Error::Constraint(format!(
            "product truncation capped at N = 5, got {n}"
        )));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("needs x > 0, got {x}")));
    }
    let (lo, hi) = order.mb_strip();
    if !(line.abscissa > lo && line.abscissa < hi) {
        return Err(Error::Strip { abscissa: line.abscissa, lo, hi });
    }
    let nodes = table_nodes_extended(ff);
    if nodes.iter().all(|n| n.2 == 0.0) {
        return Ok(0.0);
    }
    let alpha = order.alpha;
    let coeffs: Vec<(f64, f64)> = nodes
        .iter()
        .map(|&(t, w, v)| (t, w * t * (PI * t).tanh() * (PI * t).cosh() * v))
        .collect();
    let nn = n;
    let sym = MellinSymbol::new(lo, hi, TailKind::Exponential, move |s| {
        let one = Complex64::new(1.0, 0.0);
        let base =
            (lg(s + alpha) + lg(0.5 * one - s) + lg(one - s) - lg(one + alpha - s)).exp();
        let mut poly = alpha * alpha - s * s;
        for k in 1..=nn {
            let kk = (k * k) as f64;
            poly *= one - 4.0 * s * s / kk;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for &(tau, c) in &coeffs {
            if c == 0.0 {
                continue;
            }
            let it = Complex64::new(0.0, tau);
            sum += c * (lg(s + it) + lg(s - it)).exp();
        }
        base * poly * sum
    });
    let tau_max = nodes.iter().map(|n| n.0).fold(0.0, f64::max);
    let tall = line_for_tau(line.abscissa, tau_max + 1.0);
    let v = mb_integral(&sym, &tall, x, cfg)?;
    Ok(2.0 / PI.sqrt() * v.re / x)
}

// ---------------------------------------------------------------------------
// Inversion of the G transform
// ---------------------------------------------------------------------------

/// Residue of the aggregated tail kernel at its on-axis pole s = i tau;
/// governs the bounded ln-oscillation of the kernel as the argument goes
/// to zero.
fn tail_kernel_residue(alpha: f64, tau: f64, derivative: bool) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let s = Complex64::new(0.0, tau);
    let base = lg(2.0 * s) + lg(s + alpha)
        - lg(0.5 * one + s)
        - lg(one + alpha - s);
    if derivative {
        // residue of s F / Gamma(s) at s = i tau
        s * (base - lg(s)).exp()
    } else {
        // residue of F / Gamma(1+s)
        (base - lg(one + s)).exp()
    }
}

/// Inverse G transform: minus pi x sinh(pi x) times the bracket of the
/// tail-kernel term and the kernel-derivative term, each integrated against
/// the supplied samples of the forward transform.
///
/// Both kernels oscillate in ln y without decay as y -> 0; that head is
/// summed in closed form from the kernel's on-axis residues (Abel value),
/// and the large-y side is accelerated in the sqrt-y oscillation variable.
pub fn invert_g(
    order: &KernelOrder,
    gg: &SampledFunction,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let tau = x;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let alpha = order.alpha;
    let ord = KernelOrder::new(alpha);
    let (lo_t, hi_t) = ord.re_tail_strip();
    let (lo_r, hi_r) = ord.re_strip();
    let a_t = 0.5 * (lo_t + hi_t.min(0.7));
    let a_r = 0.5 * (lo_r.max(0.0) + hi_r.min(0.7));
    let line_t = line_for_tau(a_t, tau);
    let line_r = line_for_tau(a_r, tau);
    let tail_sym = crate::kernel::re_tail_symbol(alpha, tau);
    let der_sym = {
        let rs = crate::kernel::re_kernel_symbol(alpha, tau);
        crate::mbquad::symbol_multiply(&rs, |s| s)
    };
    let ys: Vec<f64> = HALF_LINE_XS.iter().copied().filter(|&y| y >= 1e-8).collect();
    let tail_cache = LineCache::build(&tail_sym, &line_t, &ys, cfg)?;
    let der_cache = LineCache::build(&der_sym, &line_r, &ys, cfg)?;
    let y_floor: f64 = 1e-4;
    let tail_k = |y: f64| -tail_cache.eval(y).re / PI.sqrt();
    // d/dy of the Re-kernel carries 1/y; the bracket integrates it plainly
    let der_k = |y: f64| der_cache.eval(y).re / (PI.sqrt() * y);
    let gval = |y: f64| gg.eval(y.max(1e-8));

    // middle sections, in w = ln y on [y_floor, 1] and v = sqrt y beyond
    let t1_mid = gl_adaptive(
        |w: f64| {
            let y = w.exp();
            Complex64::new(tail_k(y) * gval(y), 0.0)
        },
        y_floor.ln(),
        0.0,
        ((y_floor.ln().abs() * (1.0 + tau)) as usize).max(24),
        1e-11,
        1e-16,
        5,
    )?
    .re;
    let t2_mid = gl_adaptive(
        |w: f64| {
            let y = w.exp();
            Complex64::new(der_k(y) * gval(y) * y, 0.0)
        },
        y_floor.ln(),
        0.0,
        ((y_floor.ln().abs() * (1.0 + tau)) as usize).max(24),
        1e-11,
        1e-16,
        5,
    )?
    .re;

    // y -> 0 head: kernels reduce to 2 Re[rho y^{-i tau}] oscillations; with
    // the transform continuous at 0 the head integral takes its Abel value
    let g0 = gval(y_floor);
    let w0 = y_floor.ln();
    let e0 = Complex64::new(0.0, -tau * w0).exp();
    let abel = |rho: Complex64| -> f64 {
        // int_{-inf}^{w0} 2 Re[rho e^{-i tau w}] dw
        2.0 * (rho * e0 / Complex64::new(0.0, -tau)).re
    };
    let rho_tail = -tail_kernel_residue(alpha, tau, false) / PI.sqrt();
    let rho_der = tail_kernel_residue(alpha, tau, true) / PI.sqrt();
    let t1_head = g0 * abel(rho_tail);
    let t2_head = g0 * abel(rho_der);

    // large-y side in v = sqrt y: uniform cos(2v) oscillation, accelerated
    let t1_f = |v: f64| 2.0 * tail_k(v * v) * gval(v * v) / v;
    let t2_f = |v: f64| 2.0 * v * der_k(v * v) * gval(v * v);
    let v_break = 8.0;
    let t1_large = gl_adaptive(
        |v: f64| Complex64::new(t1_f(v), 0.0),
        1.0,
        v_break,
        48,
        1e-11,
        1e-16,
        5,
    )?
    .re + oscillatory_tail(t1_f, v_break, 0.5 * PI, 30);
    let t2_large = gl_adaptive(
        |v: f64| Complex64::new(t2_f(v), 0.0),
        1.0,
        v_break,
        48,
        1e-11,
        1e-16,
        5,
    )?
    .re + oscillatory_tail(t2_f, v_break, 0.5 * PI, 30);

    let t1 = t1_head + t1_mid + t1_large;
    let t2 = t2_head + t2_mid + t2_large;
    Ok(-PI * x * (PI * x).sinh() * (alpha * alpha * t1 + t2))
}

// ---------------------------------------------------------------------------
// The alpha = 0 specialization
// ---------------------------------------------------------------------------

/// Forward transform at alpha = 0, written through Nicholson's function
/// (J^2 + Y^2)/2 as the kernel.
pub fn nicholson_forward(
    f: &SampledFunction,
    tau: f64,
    _cfg: &QuadratureConfig,
) -> Result<f64> {
    f.check_decay()?;
    let kernel = |x: f64| -> f64 {
        let nu = Complex64::new(0.0, tau);
        let z = x.sqrt();
        let j = bessel_j(nu, z).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let y = crate::specfun::bessel_y(nu, z).unwrap_or(Complex64::new(f64::NAN, 0.0));
        0.5 * (j * j + y * y).re
    };
    let integrand = |x: f64| {
        if x < 1e-12 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(kernel(x) * f.eval(x), 0.0)
        }
    };
    let mut acc = tanh_sinh(&integrand, 0.0, 1.0, 1e-12, 1e-15)?.re;
    let mut a = 1.0_f64;
    // the argument cap of the Bessel series bounds the reach; the fixture
    // decay makes the remainder negligible well before it
    while a < 380.0 {
        let b = (2.0 * a).min(380.0_f64);
        let block = gl_adaptive(&integrand, a, b, 24, 1e-11, 1e-16, 5)?.re;
        acc += block;
        if block.abs() <= 1e-14 * acc.abs().max(1e-12) {
            break;
        }
        a = b;
    }
    Ok(acc)
}

/// Inverse of the alpha = 0 transform:
/// f(x) = -pi d/dx int tau Im[J_{i tau}^2(sqrt x)] F0(tau) d tau.
/// The hypothesis behind the formula is that F0 is integrable against
/// tau cosh(pi tau); the table is gated on exactly that before the
/// (otherwise divergent) integral is assembled.
pub fn nicholson_invert(
    f0: &TransformTable,
    x: f64,
    _cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("needs x > 0, got {x}")));
    }
    let w = integration_weights(&f0.grid);
    let weighted: Vec<f64> = f0
        .grid
        .iter()
        .zip(f0.values.iter())
        .map(|(&t, &v)| t * (PI * t).cosh() * v.abs())
        .collect();
    let peak = weighted.iter().fold(0.0_f64, |m, v| m.max(*v));
    if peak > 0.0 {
        let edge = weighted.iter().rev().take(4).fold(0.0_f64, |m, v| m.max(*v));
        if edge > 1e-6 * peak {
            return Err(Error::Tail { bound: edge / peak, tol: 1e-6 });
        }
    }
    let phi = |xx: f64| -> f64 {
        let mut s = 0.0;
        for ((&t, &wk), &v) in f0.grid.iter().zip(w.iter()).zip(f0.values.iter()) {
            if v == 0.0 {
                continue;
            }
            let j = bessel_j(Complex64::new(0.0, t), xx.sqrt())
                .unwrap_or(Complex64::new(f64::NAN, 0.0));
            s += wk * t * (j * j).im * v;
        }
        s
    };
    let h = 1e-3 * x.max(1.0);
    let d = (phi(x - 2.0 * h) - 8.0 * phi(x - h) + 8.0 * phi(x + h) - phi(x + 2.0 * h))
        / (12.0 * h);
    Ok(-PI * d)
}

// ---------------------------------------------------------------------------
// Norm and Parseval checks
// ---------------------------------------------------------------------------

/// Parseval balance of the Kontorovich-Lebedev composition:
/// int e^x |psi(x)|^2 x dx against 4 int tau sinh(pi tau) |F(tau)|^2 d tau.
/// The left side is integrated on two nested ranges; failure of those to
/// agree (a divergent weight for the supplied data) is folded into the
/// reported error rather than masked.
pub fn parseval_check(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ff: &TransformTable,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let sym = psi_symbol(order, f_star, false);
    sym.check_line(line)?;
    let cache = LineCache::build(&sym, line, &HALF_LINE_XS, cfg)?;
    let dens = |x: f64| {
        if x < 1e-12 {
            Complex64::new(0.0, 0.0)
        } else {
            let p = cache.eval(x).re;
            Complex64::new(x.exp() * p * p * x, 0.0)
        }
    };
    let head = tanh_sinh(&dens, 0.0, 1.0, 1e-12, 1e-16)?.re;
    let x_cut_a = 24.0;
    let x_cut_b = 32.0;
    let mid = gl_adaptive(&dens, 1.0, x_cut_a, 64, 1e-11, 1e-16, 5)?.re;
    let ext = gl_adaptive(&dens, x_cut_a, x_cut_b, 32, 1e-11, 1e-16, 5)?.re;
    let lhs_a = head + mid;
    let lhs = lhs_a + ext;
    let w = integration_weights(&ff.grid);
    let rhs: f64 = ff
        .grid
        .iter()
        .zip(w.iter())
        .zip(ff.values.iter())
        .map(|((&t, &wk), &v)| 4.0 * wk * t * (PI * t).sinh() * v * v)
        .sum();
    let mut report = IdentityReport::new(
        "parseval-kl",
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        1e-6,
        1e-3,
    );
    // cutoff sensitivity of the left side counts as error
    let drift = (lhs - lhs_a).abs();
    report.abs_err = report.abs_err.max(drift);
    report.rel_err = report
        .rel_err
        .max(drift / lhs.abs().max(rhs.abs()).max(1e-300));
    report.passed = report.abs_err <= report.abs_tol || report.rel_err <= report.rel_tol;
    Ok(report)
}

/// Theorem-level bound constant for the G transform at exponent gamma:
/// (1/(2 pi^{7/4})) [G(1/2-2g)G(2g)]^{1/2} int |G(s+a)/(sin(pi s)G(1+a-s))| |ds|.
pub fn g_bound_constant(order: &KernelOrder, gamma: f64, _cfg: &QuadratureConfig) -> Result<f64> {
    let alpha = order.alpha;
    if !(gamma > (-alpha).max(0.0) && gamma < 0.25) {
        return Err(Error::Strip { abscissa: gamma, lo: (-alpha).max(0.0), hi: 0.25 });
    }
    let dens = |t: f64| -> f64 {
        let s = Complex64::new(gamma, t);
        let one = Complex64::new(1.0, 0.0);
        let ln_sin = (PI * s).sin().norm().ln();
        ((lg(s + alpha) - lg(one + alpha - s)).re - ln_sin).exp()
    };
    let t_cap = 14.0;
    let integral = gl_adaptive(
        |t: f64| Complex64::new(dens(t), 0.0),
        -t_cap,
        t_cap,
        64,
        1e-12,
        1e-16,
        5,
    )?
    .re;
    let gg = (lg(Complex64::new(0.5 - 2.0 * gamma, 0.0)) + lg(Complex64::new(2.0 * gamma, 0.0)))
        .exp()
        .re;
    Ok(gg.sqrt() * integral / (2.0 * PI.powf(1.75)))
}

/// Large-argument value of K_{i tau}(z) [I_{i tau} + I_{-i tau}](z): in the
/// product of the standard exponential expansions of K and I the odd powers
/// of 1/z cancel, leaving (1/z)(1 + c2/z^2 + c4/z^4 + c6/z^6 + O(z^-8)).
fn macdonald_i_product_asym(tau: f64, z: f64) -> f64 {
    let mu = -4.0 * tau * tau;
    let mut a = [1.0_f64; 7];
    for k in 1..7 {
        let j = (2 * k - 1) as f64;
        a[k] = a[k - 1] * (mu - j * j) / (8.0 * k as f64);
    }
    let mut c = [0.0_f64; 7];
    for (n, cn) in c.iter_mut().enumerate() {
        for k in 0..=n {
            *cn += if k % 2 == 0 { 1.0 } else { -1.0 } * a[k] * a[n - k];
        }
    }
    let w = 1.0 / (z * z);
    (1.0 + w * (c[2] + w * (c[4] + w * c[6]))) / z
}

/// Cross-check of the forward transform against its Macdonald/modified-
/// Bessel product representation through phi: (1/pi^2) times
/// K_{i tau}(sqrt x) [I_{i tau} + I_{-i tau}](sqrt x) against phi(x).
pub fn forward_f_via_phi(
    order: &KernelOrder,
    f_star: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    tau: f64,
    line: &ContourLine,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sym = psi_symbol(order, f_star, true);
    sym.check_line(line)?;
    let cache = LineCache::build(&sym, line, &HALF_LINE_XS, cfg)?;
    let integrand = |x: f64| {
        if x <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let z = x.sqrt();
        // switch to the product asymptotic at a block boundary, so every
        // quadrature block sees one smooth branch
        let ki = if x >= 256.0 {
            macdonald_i_product_asym(tau, z)
        } else {
            let k = macdonald_k(tau, z).unwrap_or(f64::NAN);
            let nu = Complex64::new(0.0, tau);
            let i_sum = (bessel_i(nu, z).unwrap_or(Complex64::new(f64::NAN, 0.0))
                + bessel_i(-nu, z).unwrap_or(Complex64::new(f64::NAN, 0.0)))
            .re;
            k * i_sum
        };
        Complex64::new(ki * cache.eval(x).re, 0.0)
    };
    let mut acc = log_head_integral(&integrand, -40.0, 320)?.re;
    let mut partial = Vec::new();
    let mut a = 1.0;
    for _ in 0..13 {
        let b = 2.0 * a;
        acc += gl_adaptive(&integrand, a, b, 24, 1e-11, 1e-16, 5)?.re;
        partial.push(acc);
        a = b;
    }
    Ok(geometric_block_limit(&partial) / (PI * PI))
}
