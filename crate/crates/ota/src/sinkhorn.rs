//! Entropic-regularized optimal transport via Sinkhorn-Knopp iteration.
//!
//! The kernel is `M = exp(-c / gamma)`. Starting from all-ones scalings the
//! solver alternates
//!
//! ```text
//! u_j <- d_j / sum_i M_ij v_i
//! v_i <- s_i / sum_j M_ij u_j
//! ```
//!
//! for a fixed number of rounds (optionally stopping early on a column
//! residual), then returns the factorized plan `pi = diag(v) M diag(u)`.
//!
//! A log-domain variant keeps `log u`, `log v` and reduces with max-shifted
//! log-sum-exp; it is selected explicitly, automatically when `min(c)/gamma`
//! exceeds 500, or manually after a `NUMERIC_UNDERFLOW` in linear mode. The
//! large center-prior penalty makes `exp(-c/gamma)` underflow in linear
//! space, which is harmless while every row and column keeps at least one
//! representable kernel entry; the log domain has no such restriction.
//!
//! Every reduction runs in a fixed sequential order, so `solve` is
//! deterministic for identical inputs.

use serde::{Deserialize, Serialize};

use crate::cost::{CostMatrix, SupplyDemand};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Smallest linear-mode denominator; exact zeros error out instead.
const MIN_DENOMINATOR: f64 = 1e-300;

/// Ratio `min(c)/gamma` beyond which linear kernels are considered hopeless.
const AUTO_LOG_THRESHOLD: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinkhornConfig {
    /// Regularization intensity; smaller values sharpen the plan.
    pub gamma: f64,
    /// Iteration count `T`.
    pub iters: u32,
    /// Force log-domain arithmetic.
    pub log_domain: bool,
    /// Early-stop threshold on the normalized L1 column residual; 0 disables
    /// early stopping (fixed-iteration behavior).
    pub residual_tol: f64,
}

impl Default for SinkhornConfig {
    fn default() -> Self {
        Self { gamma: 0.1, iters: 50, log_domain: false, residual_tol: 0.0 }
    }
}

impl SinkhornConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidSpec(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if self.iters == 0 {
            return Err(Error::InvalidSpec("iters must be >= 1".into()));
        }
        if !(self.residual_tol >= 0.0 && self.residual_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "residual_tol must be >= 0, got {}",
                self.residual_tol
            )));
        }
        Ok(())
    }
}

/// Factorized transport plan with diagnostics.
///
/// Invariant: `plan[i][j] = v[i] * exp(-c[i][j]/gamma) * u[j]` for the solved
/// cost, up to floating-point rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub plan: Matrix,
    /// Column (demander) scaling, length `n`.
    pub u: Vec<f64>,
    /// Row (supplier) scaling, length `m+1`.
    pub v: Vec<f64>,
    pub iterations_run: u32,
    pub marginal_residual: f64,
}

impl TransportPlan {
    pub fn rows(&self) -> usize {
        self.plan.rows()
    }

    pub fn cols(&self) -> usize {
        self.plan.cols()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.plan.at(i, j)
    }
}

/// Solves the balanced OT instance. Precondition: `sd` matches the cost
/// shape and balances supply against demand.
pub fn solve(cost: &CostMatrix, sd: &SupplyDemand, cfg: &SinkhornConfig) -> Result<TransportPlan> {
    cfg.validate()?;
    let rows = cost.m() + 1;
    let n = cost.n();
    if sd.supply().len() != rows || sd.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "supply/demand ({}, {}) does not match cost ({rows}, {n})",
            sd.supply().len(),
            sd.n()
        )));
    }
    if !cost.values().is_finite() {
        return Err(Error::NonfiniteInput);
    }
    let supply_total: f64 = sd.supply().iter().sum();
    let demand_total: f64 = sd.demand().iter().sum();
    if (supply_total - demand_total).abs() > 1e-9 * demand_total.max(1.0) {
        return Err(Error::Unbalanced { supply_total, demand_total });
    }

    let use_log = cfg.log_domain || cost.values().min_value() / cfg.gamma > AUTO_LOG_THRESHOLD;
    let mut plan =
        if use_log { solve_log(cost, sd, cfg) } else { solve_linear(cost, sd, cfg) }?;
    plan.marginal_residual = residual_of(&plan.plan, sd);
    Ok(plan)
}

fn solve_linear(cost: &CostMatrix, sd: &SupplyDemand, cfg: &SinkhornConfig) -> Result<TransportPlan> {
    let rows = cost.m() + 1;
    let n = cost.n();
    let inv_gamma = 1.0 / cfg.gamma;
    let kernel = cost.values().map(|c| (-c * inv_gamma).exp());

    let mut u = vec![1.0; n];
    let mut v = vec![1.0; rows];
    let mut col_den = vec![0.0; n];
    let mut iterations_run = 0;

    for t in 0..cfg.iters {
        // u update: columns of diag(v) M
        col_den.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..rows {
            let vi = v[i];
            if vi == 0.0 {
                continue;
            }
            for (den, &mij) in col_den.iter_mut().zip(kernel.row(i)) {
                *den += mij * vi;
            }
        }
        for j in 0..n {
            if col_den[j] == 0.0 {
                return Err(Error::NumericUnderflow { iteration: t });
            }
            u[j] = sd.demand()[j] / col_den[j].max(MIN_DENOMINATOR);
        }

        // v update: rows of M diag(u)
        for i in 0..rows {
            let mut den = 0.0;
            for (&mij, &uj) in kernel.row(i).iter().zip(&u) {
                den += mij * uj;
            }
            if den == 0.0 {
                return Err(Error::NumericUnderflow { iteration: t });
            }
            v[i] = sd.supply()[i] / den.max(MIN_DENOMINATOR);
        }

        iterations_run = t + 1;
        if cfg.residual_tol > 0.0 {
            let res = column_residual_linear(&kernel, &u, &v, sd);
            if res <= cfg.residual_tol {
                break;
            }
        }
    }

    let mut plan = kernel;
    for i in 0..rows {
        let vi = v[i];
        for (slot, &uj) in plan.row_mut(i).iter_mut().zip(&u) {
            *slot *= vi * uj;
        }
    }
    Ok(TransportPlan { plan, u, v, iterations_run, marginal_residual: 0.0 })
}

/// Normalized L1 deviation of column sums from demand for the factorized
/// plan `diag(v) M diag(u)`.
fn column_residual_linear(kernel: &Matrix, u: &[f64], v: &[f64], sd: &SupplyDemand) -> f64 {
    let n = kernel.cols();
    let mut col = vec![0.0; n];
    for i in 0..kernel.rows() {
        let vi = v[i];
        if vi == 0.0 {
            continue;
        }
        for (acc, &mij) in col.iter_mut().zip(kernel.row(i)) {
            *acc += mij * vi;
        }
    }
    let mut dev = 0.0;
    for j in 0..n {
        dev += (col[j] * u[j] - sd.demand()[j]).abs();
    }
    dev / n as f64
}

fn solve_log(cost: &CostMatrix, sd: &SupplyDemand, cfg: &SinkhornConfig) -> Result<TransportPlan> {
    let rows = cost.m() + 1;
    let n = cost.n();
    let inv_gamma = 1.0 / cfg.gamma;
    // log M = -c / gamma, always finite
    let log_kernel = cost.values().map(|c| -c * inv_gamma);

    // f = log v, g = log u; ln(0) = -inf encodes zero supply correctly
    let log_supply: Vec<f64> = sd.supply().iter().map(|s| s.ln()).collect();
    let log_demand: Vec<f64> = sd.demand().iter().map(|d| d.ln()).collect();
    let mut f = vec![0.0; rows];
    let mut g = vec![0.0; n];

    let mut col_max = vec![0.0; n];
    let mut col_acc = vec![0.0; n];
    let mut iterations_run = 0;

    for t in 0..cfg.iters {
        // g_j = log d_j - LSE_i(log M_ij + f_i)
        column_lse(&log_kernel, &f, &mut col_max, &mut col_acc);
        for j in 0..n {
            g[j] = log_demand[j] - (col_max[j] + col_acc[j].ln());
        }

        // f_i = log s_i - LSE_j(log M_ij + g_j)
        for i in 0..rows {
            f[i] = log_supply[i] - row_lse(log_kernel.row(i), &g);
        }

        iterations_run = t + 1;
        if cfg.residual_tol > 0.0 {
            column_lse(&log_kernel, &f, &mut col_max, &mut col_acc);
            let mut dev = 0.0;
            for j in 0..n {
                let col_sum = (g[j] + col_max[j] + col_acc[j].ln()).exp();
                dev += (col_sum - sd.demand()[j]).abs();
            }
            if dev / n as f64 <= cfg.residual_tol {
                break;
            }
        }
    }

    let mut plan = Matrix::zeros(rows, n);
    for i in 0..rows {
        let fi = f[i];
        let log_row = log_kernel.row(i);
        let row = plan.row_mut(i);
        for j in 0..n {
            row[j] = (fi + log_row[j] + g[j]).exp();
        }
    }
    let u = g.iter().map(|&x| x.exp()).collect();
    let v = f.iter().map(|&x| x.exp()).collect();
    Ok(TransportPlan { plan, u, v, iterations_run, marginal_residual: 0.0 })
}

/// Column-wise log-sum-exp of `log_kernel[i][j] + f[i]`, max-shifted. Written
/// as two row-major passes. Columns where every term is -inf yield -inf.
fn column_lse(log_kernel: &Matrix, f: &[f64], col_max: &mut [f64], col_acc: &mut [f64]) {
    let rows = log_kernel.rows();
    col_max.iter_mut().for_each(|x| *x = f64::NEG_INFINITY);
    for i in 0..rows {
        let fi = f[i];
        if fi == f64::NEG_INFINITY {
            continue;
        }
        for (mx, &lk) in col_max.iter_mut().zip(log_kernel.row(i)) {
            let term = lk + fi;
            if term > *mx {
                *mx = term;
            }
        }
    }
    col_acc.iter_mut().for_each(|x| *x = 0.0);
    for i in 0..rows {
        let fi = f[i];
        if fi == f64::NEG_INFINITY {
            continue;
        }
        for ((acc, &mx), &lk) in col_acc.iter_mut().zip(col_max.iter()).zip(log_kernel.row(i)) {
            if mx.is_finite() {
                *acc += (lk + fi - mx).exp();
            }
        }
    }
}

/// Max-shifted log-sum-exp of `log_row[j] + g[j]`.
fn row_lse(log_row: &[f64], g: &[f64]) -> f64 {
    let mut mx = f64::NEG_INFINITY;
    for (&lk, &gj) in log_row.iter().zip(g) {
        let term = lk + gj;
        if term > mx {
            mx = term;
        }
    }
    if !mx.is_finite() {
        return mx;
    }
    let mut acc = 0.0;
    for (&lk, &gj) in log_row.iter().zip(g) {
        acc += (lk + gj - mx).exp();
    }
    mx + acc.ln()
}

/// Transport objective `sum_ij c_ij * pi_ij`.
pub fn objective(cost: &CostMatrix, plan: &TransportPlan) -> f64 {
    debug_assert_eq!(cost.m() + 1, plan.rows());
    debug_assert_eq!(cost.n(), plan.cols());
    let mut total = 0.0;
    for i in 0..plan.rows() {
        for (&c, &p) in cost.row(i).iter().zip(plan.plan.row(i)) {
            if p != 0.0 {
                total += c * p;
            }
        }
    }
    total
}

/// Max of the L1 deviations (row sums vs supply, column sums vs demand),
/// normalized by the anchor count.
pub fn marginal_residual(plan: &TransportPlan, sd: &SupplyDemand) -> f64 {
    residual_of(&plan.plan, sd)
}

fn residual_of(plan: &Matrix, sd: &SupplyDemand) -> f64 {
    let n = plan.cols();
    let mut row_dev = 0.0;
    let mut col_sums = vec![0.0; n];
    for i in 0..plan.rows() {
        let mut row_sum = 0.0;
        for (acc, &p) in col_sums.iter_mut().zip(plan.row(i)) {
            row_sum += p;
            *acc += p;
        }
        row_dev += (row_sum - sd.supply()[i]).abs();
    }
    let mut col_dev = 0.0;
    for (j, &s) in col_sums.iter().enumerate() {
        col_dev += (s - sd.demand()[j]).abs();
    }
    row_dev.max(col_dev) / n as f64
}
