//! Exact integral transportation optimum on small instances.
//!
//! Because every demand is one unit, the transportation LP has integral
//! vertex solutions and reduces to assignment: expand supplier `i` into
//! `supply[i]` identical slot rows, solve the `n x n` min-cost perfect
//! matching, and collapse slots back to supplier indices. A brute-force
//! enumerator cross-checks the matching solver at tiny sizes.

use crate::cost::{CostMatrix, SupplyDemand};
use crate::error::{Error, Result};

/// Default anchor-count limit for `solve_exact`.
pub const DEFAULT_EXACT_LIMIT: usize = 512;

/// Anchor-count limit for the exhaustive enumerator.
pub const ENUMERATE_LIMIT: usize = 10;

/// Provably optimal integral assignment: one supplier index per anchor
/// (`m` = background) and the objective it achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub assignment: Vec<usize>,
    pub cost: f64,
}

/// Objective of an integral assignment, summed in anchor order. Both exact
/// solvers and every cross-check report costs through this one function so
/// equal assignments produce bitwise-equal costs.
pub fn assignment_cost(cost: &CostMatrix, assignment: &[usize]) -> f64 {
    assignment.iter().enumerate().map(|(j, &i)| cost.at(i, j)).sum()
}

/// Exact optimum via Hungarian matching on the supplier-expanded matrix.
pub fn solve_exact(cost: &CostMatrix, sd: &SupplyDemand) -> Result<ExactSolution> {
    solve_exact_with_limit(cost, sd, DEFAULT_EXACT_LIMIT)
}

pub fn solve_exact_with_limit(
    cost: &CostMatrix,
    sd: &SupplyDemand,
    limit: usize,
) -> Result<ExactSolution> {
    let n = cost.n();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let owners = slot_owners(cost, sd)?;
    let matched_col = hungarian(n, |slot, j| cost.at(owners[slot], j));
    let mut assignment = vec![usize::MAX; n];
    for (slot, &j) in matched_col.iter().enumerate() {
        assignment[j] = owners[slot];
    }
    debug_assert!(assignment.iter().all(|&i| i != usize::MAX));
    let total = assignment_cost(cost, &assignment);
    Ok(ExactSolution { assignment, cost: total })
}

/// Exhaustive minimum over all feasible integral assignments. Anchors are
/// filled in order with suppliers tried in increasing index, so the first
/// optimum found — and therefore the one returned — is the lexicographically
/// smallest assignment vector among equal-cost optima.
pub fn enumerate_exact(cost: &CostMatrix, sd: &SupplyDemand) -> Result<ExactSolution> {
    let n = cost.n();
    if n > ENUMERATE_LIMIT {
        return Err(Error::TooLarge { n, limit: ENUMERATE_LIMIT });
    }
    // reuse the expansion checks (integrality, balance)
    let _ = slot_owners(cost, sd)?;
    let mut remaining = sd.integral_supplies()?;
    let mut current = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    dfs(cost, &mut remaining, &mut current, 0, 0.0, &mut best);
    let (total, assignment) = best.expect("balanced instance always has a feasible assignment");
    Ok(ExactSolution { assignment, cost: total })
}

fn dfs(
    cost: &CostMatrix,
    remaining: &mut [u64],
    current: &mut Vec<usize>,
    j: usize,
    partial: f64,
    best: &mut Option<(f64, Vec<usize>)>,
) {
    // costs are non-negative, so a partial sum already at the incumbent
    // cannot improve strictly
    if let Some((bound, _)) = best {
        if partial >= *bound {
            return;
        }
    }
    if j == cost.n() {
        match best {
            Some((bound, _)) if partial >= *bound => {}
            _ => *best = Some((partial, current.clone())),
        }
        return;
    }
    for i in 0..remaining.len() {
        if remaining[i] == 0 {
            continue;
        }
        remaining[i] -= 1;
        current[j] = i;
        dfs(cost, remaining, current, j + 1, partial + cost.at(i, j), best);
        remaining[i] += 1;
    }
}

/// Supplier index for each expanded slot; validates integrality and balance.
fn slot_owners(cost: &CostMatrix, sd: &SupplyDemand) -> Result<Vec<usize>> {
    let n = cost.n();
    if sd.supply().len() != cost.m() + 1 || sd.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "supply/demand ({}, {}) does not match cost ({}, {n})",
            sd.supply().len(),
            sd.n(),
            cost.m() + 1
        )));
    }
    let counts = sd.integral_supplies()?;
    let total: u64 = counts.iter().sum();
    if total != n as u64 {
        return Err(Error::Unbalanced { supply_total: total as f64, demand_total: n as f64 });
    }
    let mut owners = Vec::with_capacity(n);
    for (i, &c) in counts.iter().enumerate() {
        owners.extend(std::iter::repeat(i).take(c as usize));
    }
    Ok(owners)
}

/// Min-cost perfect matching on an `n x n` cost matrix (shortest augmenting
/// paths with dual potentials, O(n^3)). Returns the matched column per row.
/// Deterministic: rows are inserted in order and scans run in index order.
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    // column n is the virtual start of each augmenting path
    let mut row_pot = vec![0.0f64; n];
    let mut col_pot = vec![0.0f64; n + 1];
    let mut matched_row = vec![usize::MAX; n + 1];

    for row in 0..n {
        matched_row[n] = row;
        let mut j0 = n;
        let mut min_slack = vec![f64::INFINITY; n];
        let mut path_via = vec![n; n];
        let mut visited = vec![false; n + 1];

        loop {
            visited[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j_next = n;
            for j in 0..n {
                if visited[j] {
                    continue;
                }
                let slack = cost(i0, j) - row_pot[i0] - col_pot[j];
                if slack < min_slack[j] {
                    min_slack[j] = slack;
                    path_via[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j_next = j;
                }
            }
            debug_assert!(delta.is_finite(), "complete bipartite graph always has an edge");
            for j in 0..n {
                if visited[j] {
                    row_pot[matched_row[j]] += delta;
                    col_pot[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            // virtual column is always visited
            row_pot[matched_row[n]] += delta;
            col_pot[n] -= delta;
            j0 = j_next;
            if matched_row[j0] == usize::MAX {
                break;
            }
        }

        // augment: walk the alternating path back to the virtual column
        loop {
            let j_prev = path_via[j0];
            matched_row[j0] = matched_row[j_prev];
            j0 = j_prev;
            if j0 == n {
                break;
            }
        }
    }

    let mut col_of_row = vec![usize::MAX; n];
    for j in 0..n {
        if matched_row[j] != usize::MAX {
            col_of_row[matched_row[j]] = j;
        }
    }
    col_of_row
}
