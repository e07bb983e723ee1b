use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::fekete::leja_points;
use super::CompactSet;

/// Stopping rule of the discrete minimax.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxOptions {
    /// Relative gap between the active-set bound and the full-cloud maximum.
    pub tolerance: f64,
    /// Cutting-plane rounds before giving up.
    pub max_rounds: usize,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        MinimaxOptions {
            tolerance: 1e-6,
            max_rounds: 60,
        }
    }
}

/// Newton basis on Leja nodes, normalized to unit maximum on the cloud.
struct Basis {
    /// `values[k][m]` is the k-th normalized basis polynomial at sample m.
    values: Vec<Vec<Complex64>>,
    /// `ln` of the scale removed from the monic degree-n member.
    log_scale: f64,
}

fn newton_basis(cloud: &[Complex64], nodes: &[Complex64], n: usize) -> Option<Basis> {
    let mut values = vec![vec![Complex64::new(1.0, 0.0); cloud.len()]];
    let mut log_scale = 0.0;
    for k in 0..n {
        let prev = &values[k];
        let mut next: Vec<Complex64> = prev
            .iter()
            .zip(cloud)
            .map(|(v, z)| v * (z - nodes[k]))
            .collect();
        let top = next.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if top == 0.0 {
            return None;
        }
        for v in &mut next {
            *v /= top;
        }
        log_scale += top.ln();
        values.push(next);
    }
    Some(Basis { values, log_scale })
}

/// Minimizes `max_m |v_n(z_m) + Σ_{k<n} c_k v_k(z_m)|` over the active rows;
/// returns the coefficients and the bound.
fn solve_active(basis: &Basis, n: usize, active: &[usize]) -> Result<(Vec<Complex64>, f64)> {
    let nvar = 2 * n + 1;
    let rows = 3 * active.len();
    // column-major assembly of A (rows: E, Re r, Im r per active point)
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nvar];
    let mut b = vec![0.0; rows];
    for (a, &m) in active.iter().enumerate() {
        let r0 = 3 * a;
        cols[0].push((r0, -1.0));
        let top = basis.values[n][m];
        b[r0 + 1] = top.re;
        b[r0 + 2] = top.im;
        for k in 0..n {
            let v = basis.values[k][m];
            // s1 = Re r = b1 - A x, so A holds the negated linear part
            cols[1 + 2 * k].push((r0 + 1, -v.re));
            cols[1 + 2 * k].push((r0 + 2, -v.im));
            cols[2 + 2 * k].push((r0 + 1, v.im));
            cols[2 + 2 * k].push((r0 + 2, -v.re));
        }
    }
    let mut colptr = vec![0];
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    for col in cols {
        for (r, v) in col {
            if v != 0.0 {
                rowval.push(r);
                nzval.push(v);
            }
        }
        colptr.push(rowval.len());
    }
    let a_mat = CscMatrix::new(rows, nvar, colptr, rowval, nzval);
    let p_mat = CscMatrix::zeros((nvar, nvar));
    let mut q = vec![0.0; nvar];
    q[0] = 1.0;
    let cones = vec![SupportedConeT::SecondOrderConeT(3); active.len()];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(200)
        .tol_gap_abs(1e-12)
        .tol_gap_rel(1e-10)
        .tol_feas(1e-10)
        .build()
        .map_err(|e| Error::NonConvergence(format!("solver settings: {e:?}")))?;
    let mut solver = DefaultSolver::new(&p_mat, &q, &a_mat, &b, &cones, settings);
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {}
        other => {
            return Err(Error::NonConvergence(format!(
                "minimax subproblem ended with {other:?}"
            )))
        }
    }
    let x = &solver.solution.x;
    let coeffs = (0..n)
        .map(|k| Complex64::new(x[1 + 2 * k], x[2 + 2 * k]))
        .collect();
    Ok((coeffs, x[0]))
}

fn residuals(basis: &Basis, n: usize, coeffs: &[Complex64]) -> Vec<f64> {
    let samples = basis.values[0].len();
    (0..samples)
        .map(|m| {
            let mut r = basis.values[n][m];
            for (k, c) in coeffs.iter().enumerate() {
                r += c * basis.values[k][m];
            }
            r.norm()
        })
        .collect()
}

/// `ρ_n^{1/n}` where `ρ_n = min over monic P_n of max_{z ∈ cloud} |P_n(z)|`.
///
/// Solved by cutting planes: a second-order cone program over an active
/// subset of the cloud, enlarged by the worst violators until the subset
/// bound and the full-cloud maximum agree to the relative tolerance.
pub fn chebyshev_constant(set: &CompactSet, n: usize, options: &MinimaxOptions) -> Result<f64> {
    if n < 1 {
        return Err(Error::precondition("the Chebyshev constant needs n >= 1"));
    }
    if n >= set.len() {
        // the monic polynomial vanishing on every sample
        return Ok(0.0);
    }
    let cloud = set.points();
    let nodes = leja_points(set, n)?;
    let Some(basis) = newton_basis(cloud, &nodes, n) else {
        return Ok(0.0);
    };
    let stride = (cloud.len() / (4 * n + 4)).max(1);
    let mut active: Vec<usize> = (0..cloud.len()).step_by(stride).collect();
    let mut in_active = vec![false; cloud.len()];
    for &m in &active {
        in_active[m] = true;
    }
    for round in 0..options.max_rounds {
        let (coeffs, bound) = solve_active(&basis, n, &active)?;
        let res = residuals(&basis, n, &coeffs);
        let top = res.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 || (top - bound) <= options.tolerance * top {
            return Ok(((top.ln() + basis.log_scale) / n as f64).exp());
        }
        let mut violators: Vec<usize> = (0..cloud.len())
            .filter(|&m| !in_active[m] && res[m] > bound * (1.0 + options.tolerance))
            .collect();
        violators.sort_by(|a, b| res[*b].total_cmp(&res[*a]).then(a.cmp(b)));
        violators.truncate(2 * n + 2);
        if violators.is_empty() {
            return Err(Error::NonConvergence(format!(
                "minimax stalled at round {round} with gap {}",
                (top - bound) / top
            )));
        }
        for m in violators {
            in_active[m] = true;
            active.push(m);
        }
    }
    Err(Error::NonConvergence(format!(
        "minimax did not reach relative gap {} in {} rounds",
        options.tolerance, options.max_rounds
    )))
}
