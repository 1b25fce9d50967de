//! Plan decoding and the end-to-end assignment pipeline.
//!
//! Each anchor takes the supplier that transports it the most mass.
//! Foreground beats background at exactly equal mass, then the lowest
//! ground-truth index wins, so decoding is deterministic. An anchor whose
//! maximum transported mass falls below 0.9 is flagged ambiguous; the flag is
//! reported, never acted on.

use crate::cost::{build_cost, estimate_supply, CenterPriorConfig, SupplyConfig, SupplyDemand};
use crate::error::Result;
use crate::losses::LossConfig;
use crate::sinkhorn::{self, SinkhornConfig, TransportPlan};
use crate::types::Scene;

/// Mass threshold below which an anchor counts as contested.
pub const AMBIGUITY_THRESHOLD: f64 = 0.9;

/// Hard labels decoded from a transport plan.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    /// Per-anchor supplier index in `[0, m]`; `m` is background.
    pub labels: Vec<usize>,
    /// Anchors labeled foreground.
    pub fg_count: usize,
    /// Positives per ground truth, length `m`.
    pub per_gt_positives: Vec<usize>,
    /// Per-anchor ambiguity flags (`max mass < 0.9`).
    pub ambiguous_flags: Vec<bool>,
    pub ambiguous_count: usize,
    /// Maximum transported mass per anchor.
    pub plan_max: Vec<f64>,
}

impl AssignmentResult {
    fn all_background(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            fg_count: 0,
            per_gt_positives: Vec::new(),
            ambiguous_flags: vec![false; n],
            ambiguous_count: 0,
            plan_max: vec![1.0; n],
        }
    }
}

/// Full pipeline output; `supply` and `plan` are absent for the empty-scene
/// short circuit.
#[derive(Debug, Clone)]
pub struct OtaRun {
    pub assignment: AssignmentResult,
    pub supply: Option<SupplyDemand>,
    pub plan: Option<TransportPlan>,
}

/// Decodes hard labels and ambiguity statistics from a plan.
pub fn decode(plan: &TransportPlan) -> AssignmentResult {
    let rows = plan.rows();
    let n = plan.cols();
    let m = rows - 1;

    let mut labels = vec![m; n];
    let mut plan_max = vec![0.0; n];
    let mut best_fg = vec![f64::NEG_INFINITY; n];
    let mut best_fg_row = vec![m; n];
    for i in 0..m {
        let row = plan.plan.row(i);
        for j in 0..n {
            if row[j] > best_fg[j] {
                best_fg[j] = row[j];
                best_fg_row[j] = i;
            }
        }
    }

    let bg_row = plan.plan.row(m);
    let mut per_gt_positives = vec![0usize; m];
    let mut ambiguous_flags = vec![false; n];
    let mut fg_count = 0;
    let mut ambiguous_count = 0;
    for j in 0..n {
        let bg = bg_row[j];
        if m > 0 && best_fg[j] >= bg {
            labels[j] = best_fg_row[j];
            per_gt_positives[best_fg_row[j]] += 1;
            fg_count += 1;
            plan_max[j] = best_fg[j].max(bg);
        } else {
            labels[j] = m;
            plan_max[j] = bg;
        }
        if plan_max[j] < AMBIGUITY_THRESHOLD {
            ambiguous_flags[j] = true;
            ambiguous_count += 1;
        }
    }

    AssignmentResult {
        labels,
        fg_count,
        per_gt_positives,
        ambiguous_flags,
        ambiguous_count,
        plan_max,
    }
}

/// Runs the complete pipeline: cost matrix, supply estimation, Sinkhorn
/// solve, decode. Deterministic end-to-end for a fixed scene and configs.
pub fn run_ota(
    scene: &Scene,
    loss_cfg: &LossConfig,
    cp_cfg: &CenterPriorConfig,
    sup_cfg: &SupplyConfig,
    sk_cfg: &SinkhornConfig,
    alpha: f64,
) -> Result<AssignmentResult> {
    run_ota_full(scene, loss_cfg, cp_cfg, sup_cfg, sk_cfg, alpha).map(|run| run.assignment)
}

/// As [`run_ota`], also surfacing the supply vector and solved plan.
pub fn run_ota_full(
    scene: &Scene,
    loss_cfg: &LossConfig,
    cp_cfg: &CenterPriorConfig,
    sup_cfg: &SupplyConfig,
    sk_cfg: &SinkhornConfig,
    alpha: f64,
) -> Result<OtaRun> {
    if scene.m() == 0 {
        // a 1 x n transport problem is trivial: background supplies everyone
        return Ok(OtaRun {
            assignment: AssignmentResult::all_background(scene.n()),
            supply: None,
            plan: None,
        });
    }
    let cost = build_cost(scene, loss_cfg, cp_cfg, alpha)?;
    let sd = estimate_supply(scene, sup_cfg)?;
    let plan = sinkhorn::solve(&cost, &sd, sk_cfg)?;
    let assignment = decode(&plan);
    Ok(OtaRun { assignment, supply: Some(sd), plan: Some(plan) })
}
