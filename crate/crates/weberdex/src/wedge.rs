//! Spectral solution of a fourth-order boundary value problem on a wedge.
//!
//! The solution is an index integral of the kernel against the boundary data
//! filtered by a sinh ratio,
//!
//! ```text
//! u(r, theta) = int W_a(r, tau) sinh(theta tau)/sinh(beta tau) g(tau) d tau,
//! ```
//!
//! which vanishes on the theta = 0 edge and reduces to the forward G
//! transform of `g` on the theta = beta edge. The polar-form PDE residual is
//! assembled by central differences as an independent check that the
//! spectral field actually solves the equation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::identities::IdentityReport;
use crate::kernel::{line_for_tau, KernelOrder};
use crate::mbquad::{mb_integral, LineCache, QuadratureConfig};
use crate::transforms::{
    forward_g, g_aggregate_coeffs, g_aggregate_symbol, SampledFunction, TAU_GRID_MAX,
};

const PI: f64 = std::f64::consts::PI;

/// The boundary value problem: wedge opening, kernel order, and the edge
/// data driving the solution.
pub struct WedgeProblem {
    pub alpha: f64,
    pub beta: f64,
    pub boundary_g: SampledFunction,
}

impl WedgeProblem {
    pub fn new(alpha: f64, beta: f64, boundary_g: SampledFunction) -> Result<Self> {
        if !(beta > 0.0 && beta < 2.0 * PI) {
            return Err(Error::Domain(format!(
                "wedge opening must lie in (0, 2 pi), got {beta}"
            )));
        }
        if !(alpha < 0.5) {
            return Err(Error::Constraint(format!(
                "the wedge construction needs alpha < 1/2, got {alpha}"
            )));
        }
        boundary_g.check_decay()?;
        Ok(WedgeProblem { alpha, beta, boundary_g })
    }
}

/// A tabulated solution field on a rectangular (r, theta) grid;
/// `values[i][j]` is u(r_grid[i], theta_grid[j]).
pub struct WedgeField {
    pub r_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// sinh(theta tau)/sinh(beta tau), evaluated through scaled exponentials so
/// large indices cannot overflow; tau = 0 takes the limiting value.
fn sinh_ratio(theta: f64, beta: f64, tau: f64) -> f64 {
    if tau == 0.0 {
        return theta / beta;
    }
    let t = tau.abs();
    ((theta - beta) * t).exp() * (-(-2.0 * theta * t).exp_m1()) / (-(-2.0 * beta * t).exp_m1())
}

fn angle_coeffs(prob: &WedgeProblem, theta: f64) -> Result<Vec<(f64, f64)>> {
    if !(0.0 <= theta && theta <= prob.beta) {
        return Err(Error::Domain(format!(
            "angle {theta} outside the wedge [0, {}]",
            prob.beta
        )));
    }
    let g = &prob.boundary_g;
    let beta = prob.beta;
    let h = move |tau: f64| sinh_ratio(theta, beta, tau) * g.even_part(tau);
    g_aggregate_coeffs(&h)
}

/// Point evaluation of the solution field.
pub fn wedge_solution(
    prob: &WedgeProblem,
    r: f64,
    theta: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("needs r > 0, got {r}")));
    }
    let coeffs = angle_coeffs(prob, theta)?;
    if theta == 0.0 || coeffs.iter().all(|(_, c)| *c == 0.0) {
        return Ok(0.0);
    }
    let order = KernelOrder::new(prob.alpha);
    let sym = g_aggregate_symbol(prob.alpha, coeffs);
    let (lo, hi) = order.mb_strip();
    let line = line_for_tau(0.5 * (lo + hi), TAU_GRID_MAX);
    Ok(mb_integral(&sym, &line, r, cfg)?.re / PI.powf(2.5))
}

/// Tabulates the solution on a rectangular grid. Each angle owns one
/// aggregated contour cache, built and evaluated in parallel over angles
/// with a deterministic, index-ordered assembly.
pub fn wedge_field(
    prob: &WedgeProblem,
    r_grid: &[f64],
    theta_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<WedgeField> {
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) || r_grid.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain("r grid must be positive and strictly increasing".into()));
    }
    if theta_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("theta grid must be strictly increasing".into()));
    }
    let order = KernelOrder::new(prob.alpha);
    let (lo, hi) = order.mb_strip();
    let line = line_for_tau(0.5 * (lo + hi), TAU_GRID_MAX);
    let n_t = theta_grid.len();
    let mut columns: Vec<Result<Vec<f64>>> = Vec::with_capacity(n_t);
    let threads = crate::thread_cap().max(1).min(n_t.max(1));
    let chunk = n_t.div_ceil(threads.max(1)).max(1);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for thetas in theta_grid.chunks(chunk) {
            let line = &line;
            handles.push(scope.spawn(move || {
                let mut out = Vec::with_capacity(thetas.len() * r_grid.len());
                for &theta in thetas {
                    let coeffs = angle_coeffs(prob, theta)?;
                    if theta == 0.0 || coeffs.iter().all(|(_, c)| *c == 0.0) {
                        out.extend(std::iter::repeat(0.0).take(r_grid.len()));
                        continue;
                    }
                    let sym = g_aggregate_symbol(prob.alpha, coeffs);
                    let cache = LineCache::build(&sym, line, r_grid, cfg)?;
                    for &r in r_grid {
                        out.push(cache.eval(r).re / PI.powf(2.5));
                    }
                }
                Ok(out)
            }));
        }
        for h in handles {
            columns.push(h.join().expect("field worker panicked"));
        }
    });
    let mut flat: Vec<f64> = Vec::with_capacity(n_t * r_grid.len());
    for c in columns {
        flat.extend(c?);
    }
    let mut values = vec![vec![0.0; n_t]; r_grid.len()];
    for (j, col) in flat.chunks(r_grid.len()).enumerate() {
        for (i, &v) in col.iter().enumerate() {
            values[i][j] = v;
        }
    }
    Ok(WedgeField {
        r_grid: r_grid.to_vec(),
        theta_grid: theta_grid.to_vec(),
        values,
    })
}

fn uniform_step(grid: &[f64], what: &str) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::Stencil(format!("{what} grid too short for differences")));
    }
    let h = grid[1] - grid[0];
    if grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs()) {
        return Err(Error::Stencil(format!("{what} grid must be uniform for the stencil")));
    }
    Ok(h)
}

/// Residual of the polar-form equation at an interior grid point, assembled
/// term by term with central differences:
/// r^2 u_rrrr + u_rrtt + 6 r u_rrr + u_rtt / r + (7 - a^2 + r) u_rr
/// - (a^2/r^2) u_tt + ((1 - a^2)/r + 5/2) u_r + u/(2r).
pub fn pde_residual(prob: &WedgeProblem, field: &WedgeField, i: usize, j: usize) -> Result<f64> {
    pde_residual_scaled(prob, field, i, j).map(|(r, _)| r)
}

/// Same residual together with its scale: the largest magnitude among the
/// assembled terms, the natural yardstick for "residual is small".
pub fn pde_residual_scaled(
    prob: &WedgeProblem,
    field: &WedgeField,
    i: usize,
    j: usize,
) -> Result<(f64, f64)> {
    let (nr, nt) = (field.r_grid.len(), field.theta_grid.len());
    if i < 2 || j < 2 || i + 2 >= nr || j + 2 >= nt {
        return Err(Error::Stencil(format!(
            "stencil at ({i}, {j}) needs two interior layers in a {nr} x {nt} field"
        )));
    }
    let hr = uniform_step(&field.r_grid, "r")?;
    let ht = uniform_step(&field.theta_grid, "theta")?;
    let u = |di: isize, dj: isize| -> f64 {
        field.values[(i as isize + di) as usize][(j as isize + dj) as usize]
    };
    let r = field.r_grid[i];
    let a2 = prob.alpha * prob.alpha;

    let u0 = u(0, 0);
    let u_r = (u(1, 0) - u(-1, 0)) / (2.0 * hr);
    let u_rr = (u(1, 0) - 2.0 * u0 + u(-1, 0)) / (hr * hr);
    let u_rrr = (-u(-2, 0) + 2.0 * u(-1, 0) - 2.0 * u(1, 0) + u(2, 0)) / (2.0 * hr * hr * hr);
    let u_rrrr =
        (u(-2, 0) - 4.0 * u(-1, 0) + 6.0 * u0 - 4.0 * u(1, 0) + u(2, 0)) / (hr * hr * hr * hr);
    let u_tt = (u(0, 1) - 2.0 * u0 + u(0, -1)) / (ht * ht);
    let u_tt_at = |di: isize| -> f64 {
        (u(di, 1) - 2.0 * u(di, 0) + u(di, -1)) / (ht * ht)
    };
    let u_rtt = (u_tt_at(1) - u_tt_at(-1)) / (2.0 * hr);
    let u_rrtt = (u_tt_at(1) - 2.0 * u_tt + u_tt_at(-1)) / (hr * hr);

    let terms = [
        r * r * u_rrrr,
        u_rrtt,
        6.0 * r * u_rrr,
        u_rtt / r,
        (7.0 - a2 + r) * u_rr,
        -a2 / (r * r) * u_tt,
        ((1.0 - a2) / r + 2.5) * u_r,
        u0 / (2.0 * r),
    ];
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    Ok((terms.iter().sum(), scale))
}

/// Audits the two edge conditions on a tabulated field: the theta = 0 column
/// must vanish and the theta = beta column must reproduce the forward G
/// transform of the boundary data.
pub fn boundary_audit(
    prob: &WedgeProblem,
    field: &WedgeField,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let zero = Complex64::new(0.0, 0.0);
    let mut report = IdentityReport::new("wedge-boundary", zero, zero, 1e-12, 1e-6);
    if field.r_grid.is_empty() {
        report.passed = true;
        return Ok(report);
    }
    let col = |target: f64| -> Option<usize> {
        field
            .theta_grid
            .iter()
            .position(|&t| (t - target).abs() <= 1e-12 * (1.0 + target.abs()))
    };
    let (j0, jb) = match (col(0.0), col(prob.beta)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Domain(
                "field must cover the theta = 0 and theta = beta edges".into(),
            ))
        }
    };
    let order = KernelOrder::new(prob.alpha);
    let mut max_zero: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for (i, &r) in field.r_grid.iter().enumerate() {
        max_zero = max_zero.max(field.values[i][j0].abs());
        let want = forward_g(&order, &prob.boundary_g, r, cfg)?;
        let rel = (field.values[i][jb] - want).abs() / want.abs().max(1e-300);
        max_rel = max_rel.max(rel);
    }
    report.lhs = Complex64::new(max_zero, 0.0);
    report.rhs = Complex64::new(max_rel, 0.0);
    report.abs_err = max_zero;
    report.rel_err = max_rel;
    report.passed = max_zero <= report.abs_tol && max_rel <= report.rel_tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn fixture() -> WedgeProblem {
        WedgeProblem::new(
            0.25,
            0.5 * PI,
            SampledFunction::real_line(|t| t * t * (-t * t).exp(), 8.0),
        )
        .unwrap()
    }

    #[test]
    fn problem_invariants() {
        let g = || SampledFunction::real_line(|t| t * t * (-t * t).exp(), 8.0);
        assert!(matches!(WedgeProblem::new(0.25, 0.0, g()), Err(Error::Domain(_))));
        assert!(matches!(
            WedgeProblem::new(0.25, 2.0 * PI, g()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            WedgeProblem::new(0.6, 1.0, g()),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn sinh_ratio_limits() {
        assert!((sinh_ratio(0.7, 1.4, 0.0) - 0.5).abs() < 1e-15);
        // continuity at 0
        let near = sinh_ratio(0.7, 1.4, 1e-8);
        assert!((near - 0.5).abs() < 1e-8);
        // exact at a plain point
        let v = sinh_ratio(0.3, 1.1, 2.0);
        assert!((v - (0.6_f64).sinh() / (2.2_f64).sinh()).abs() < 1e-15);
        // bounded by 1 inside the wedge, no overflow far out
        assert!(sinh_ratio(1.0, 1.5, 300.0) < 1e-60);
    }

    #[test]
    fn edge_values() {
        let prob = fixture();
        assert_eq!(wedge_solution(&prob, 1.3, 0.0, &cfg()).unwrap(), 0.0);
        let order = KernelOrder::new(prob.alpha);
        for &r in &[0.7, 1.0, 2.0] {
            let u = wedge_solution(&prob, r, prob.beta, &cfg()).unwrap();
            let g = forward_g(&order, &prob.boundary_g, r, &cfg()).unwrap();
            assert!((u - g).abs() < 1e-7 * (1.0 + g.abs()), "r={r}: {u} vs {g}");
        }
    }

    #[test]
    fn angle_domain_checked() {
        let prob = fixture();
        assert!(matches!(
            wedge_solution(&prob, 1.0, -0.1, &cfg()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            wedge_solution(&prob, 1.0, prob.beta + 0.1, &cfg()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            wedge_solution(&prob, -1.0, 0.3, &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn linearity() {
        let beta = 0.5 * PI;
        let g1 = SampledFunction::real_line(|t| t * t * (-t * t).exp(), 8.0);
        let g2 = SampledFunction::real_line(|t| (-2.0 * t * t).exp(), 8.0);
        let gs = SampledFunction::real_line(
            |t| t * t * (-t * t).exp() + (-2.0 * t * t).exp(),
            8.0,
        );
        let u1 = wedge_solution(&WedgeProblem::new(0.25, beta, g1).unwrap(), 1.0, 0.8, &cfg())
            .unwrap();
        let u2 = wedge_solution(&WedgeProblem::new(0.25, beta, g2).unwrap(), 1.0, 0.8, &cfg())
            .unwrap();
        let us = wedge_solution(&WedgeProblem::new(0.25, beta, gs).unwrap(), 1.0, 0.8, &cfg())
            .unwrap();
        assert!((us - (u1 + u2)).abs() < 1e-10 * (1.0 + us.abs()), "{us} vs {}", u1 + u2);
    }

    #[test]
    fn field_matches_pointwise_and_zero_column() {
        let prob = fixture();
        let r_grid = [0.8, 1.0, 1.2];
        let t_grid = [0.0, 0.5, prob.beta];
        let field = wedge_field(&prob, &r_grid, &t_grid, &cfg()).unwrap();
        for (i, &r) in r_grid.iter().enumerate() {
            assert_eq!(field.values[i][0], 0.0);
            for (j, &t) in t_grid.iter().enumerate() {
                let want = wedge_solution(&prob, r, t, &cfg()).unwrap();
                assert!(
                    (field.values[i][j] - want).abs() < 1e-9 * (1.0 + want.abs()),
                    "r={r} theta={t}"
                );
            }
        }
        // single-point grid reduces to the point evaluation
        let single = wedge_field(&prob, &[1.0], &[0.5], &cfg()).unwrap();
        let want = wedge_solution(&prob, 1.0, 0.5, &cfg()).unwrap();
        assert!((single.values[0][0] - want).abs() < 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn residual_guards_and_zero_field() {
        let prob = fixture();
        let n = 7;
        let r_grid: Vec<f64> = (0..n).map(|k| 1.0 + 0.1 * k as f64).collect();
        let t_grid: Vec<f64> = (0..n).map(|k| 0.1 * k as f64).collect();
        let field = WedgeField {
            r_grid: r_grid.clone(),
            theta_grid: t_grid.clone(),
            values: vec![vec![0.0; n]; n],
        };
        assert_eq!(pde_residual(&prob, &field, 3, 3).unwrap(), 0.0);
        assert!(matches!(pde_residual(&prob, &field, 1, 3), Err(Error::Stencil(_))));
        assert!(matches!(pde_residual(&prob, &field, 3, n - 2), Err(Error::Stencil(_))));
        let skew = WedgeField {
            r_grid: vec![1.0, 1.1, 1.25, 1.4, 1.5, 1.6, 1.7],
            theta_grid: t_grid,
            values: vec![vec![0.0; n]; n],
        };
        assert!(matches!(pde_residual(&prob, &skew, 3, 3), Err(Error::Stencil(_))));
    }

    #[test]
    fn boundary_audit_vacuous_and_missing_edges() {
        let prob = fixture();
        let empty = WedgeField {
            r_grid: vec![],
            theta_grid: vec![],
            values: vec![],
        };
        let r = boundary_audit(&prob, &empty, &cfg()).unwrap();
        assert!(r.passed && r.lhs.norm() == 0.0 && r.rhs.norm() == 0.0);
        let missing = WedgeField {
            r_grid: vec![1.0],
            theta_grid: vec![0.3],
            values: vec![vec![0.0]],
        };
        assert!(boundary_audit(&prob, &missing, &cfg()).is_err());
    }
}
