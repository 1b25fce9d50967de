//! Cost-matrix assembly: foreground/background rows, the center-prior
//! penalty, and supply/demand estimation.
//!
//! The complete cost matrix is `(m+1) x n`: one row per ground truth plus a
//! final background row carrying classification cost only. Anchors outside a
//! ground truth's center-prior candidate set pay a large additive penalty
//! instead of being excluded outright.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::losses::{clamp_prob, focal_nontarget_term, focal_target_term, reg_cost, LossConfig};
use crate::matrix::Matrix;
use crate::types::{center_distance, iou, Anchor, GroundTruth, Scene};

/// Complete `(m+1) x n` cost matrix; row `m` is background.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    m: usize,
    n: usize,
    values: Matrix,
}

impl CostMatrix {
    /// Wraps a prebuilt matrix. `values` must be `(m+1) x n`, finite, and
    /// non-negative.
    pub fn new(m: usize, n: usize, values: Matrix) -> Result<Self> {
        if values.rows() != m + 1 || values.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "cost matrix is {}x{}, expected {}x{}",
                values.rows(),
                values.cols(),
                m + 1,
                n
            )));
        }
        if !values.is_finite() {
            return Err(Error::NonfiniteInput);
        }
        if values.data().iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidFile("cost matrix has negative entries".into()));
        }
        Ok(Self { m, n, values })
    }

    /// Ground-truth (supplier) count, excluding background.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Anchor (demander) count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the background row (always the last row).
    pub fn bg_row(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values.at(i, j)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }
}

/// Balanced supply/demand pair: `m+1` supplies summing exactly to `n`, and a
/// unit demand per anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct SupplyDemand {
    supply: Vec<f64>,
    demand: Vec<f64>,
}

impl SupplyDemand {
    /// Builds from integer supplies; their sum must equal `n` exactly.
    pub fn from_counts(counts: &[u64], n: usize) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total != n as u64 {
            return Err(Error::Unbalanced { supply_total: total as f64, demand_total: n as f64 });
        }
        Ok(Self {
            supply: counts.iter().map(|&c| c as f64).collect(),
            demand: vec![1.0; n],
        })
    }

    /// Builds from raw vectors, checking balance to within 1e-9 absolute.
    pub fn new(supply: Vec<f64>, demand: Vec<f64>) -> Result<Self> {
        if supply.iter().chain(demand.iter()).any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidFile("supplies and demands must be finite and >= 0".into()));
        }
        let s: f64 = supply.iter().sum();
        let d: f64 = demand.iter().sum();
        if (s - d).abs() > 1e-9 {
            return Err(Error::Unbalanced { supply_total: s, demand_total: d });
        }
        Ok(Self { supply, demand })
    }

    pub fn supply(&self) -> &[f64] {
        &self.supply
    }

    pub fn demand(&self) -> &[f64] {
        &self.demand
    }

    pub fn n(&self) -> usize {
        self.demand.len()
    }

    /// Supplies as exact integers, or `FRACTIONAL_SUPPLY`.
    pub fn integral_supplies(&self) -> Result<Vec<u64>> {
        self.supply
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if value >= 0.0 && value.fract() == 0.0 && value <= u64::MAX as f64 {
                    Ok(value as u64)
                } else {
                    Err(Error::FractionalSupply { index, value })
                }
            })
            .collect()
    }
}

/// Center-prior parameters: per level, the `r^2` anchors closest to a ground
/// truth's center are candidates; everyone else pays `penalty`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterPriorConfig {
    pub r: u32,
    pub penalty: f64,
}

impl Default for CenterPriorConfig {
    fn default() -> Self {
        Self { r: 5, penalty: 1e5 }
    }
}

impl CenterPriorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidSpec("r must be >= 1".into()));
        }
        if !(self.penalty > 0.0 && self.penalty.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "penalty must be positive and finite, got {}",
                self.penalty
            )));
        }
        Ok(())
    }
}

/// How per-ground-truth positive supply is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupplyMode {
    FixedK,
    DynamicK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupplyConfig {
    pub mode: SupplyMode,
    /// Positives per ground truth in `FixedK` mode.
    pub k: u32,
    /// Pool size for the top-q IoU sum in `DynamicK` mode.
    pub q: u32,
}

impl Default for SupplyConfig {
    fn default() -> Self {
        Self { mode: SupplyMode::DynamicK, k: 10, q: 20 }
    }
}

impl SupplyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSpec("k must be >= 1".into()));
        }
        if self.q == 0 {
            return Err(Error::InvalidSpec("q must be >= 1".into()));
        }
        Ok(())
    }
}

/// `m x n` boolean candidate mask from the center prior.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMask {
    m: usize,
    n: usize,
    bits: Vec<bool>,
}

impl CandidateMask {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.m && j < self.n);
        self.bits[i * self.n + j]
    }

    /// Candidate count for one ground truth.
    pub fn count_for(&self, i: usize) -> usize {
        self.bits[i * self.n..(i + 1) * self.n].iter().filter(|&&b| b).count()
    }

    /// True if anchor `j` is a candidate of at least one ground truth.
    pub fn any_gt(&self, j: usize) -> bool {
        (0..self.m).any(|i| self.at(i, j))
    }

    /// Ground truths claiming anchor `j`.
    pub fn claimants(&self, j: usize) -> Vec<usize> {
        (0..self.m).filter(|&i| self.at(i, j)).collect()
    }
}

/// Marks, per ground truth and per pyramid level, the `r^2` anchors with the
/// smallest center distance. Levels with fewer than `r^2` anchors are taken
/// whole. Ties at the boundary go to the lower anchor index.
pub fn center_prior_mask(anchors: &[Anchor], gts: &[GroundTruth], r: u32) -> CandidateMask {
    let n = anchors.len();
    let m = gts.len();
    let take = (r as usize) * (r as usize);

    let mut by_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, a) in anchors.iter().enumerate() {
        by_level.entry(a.level).or_default().push(j);
    }

    let mut bits = vec![false; m * n];
    for (i, gt) in gts.iter().enumerate() {
        for level_anchors in by_level.values() {
            if level_anchors.len() <= take {
                for &j in level_anchors {
                    bits[i * n + j] = true;
                }
                continue;
            }
            let mut ranked: Vec<(f64, usize)> = level_anchors
                .iter()
                .map(|&j| (center_distance(&anchors[j], gt), j))
                .collect();
            ranked.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
            for &(_, j) in ranked.iter().take(take) {
                bits[i * n + j] = true;
            }
        }
    }
    CandidateMask { m, n, bits }
}

/// Assembles the complete cost matrix for a scene:
/// `c[i][j] = cls + alpha * reg + center-prior penalty` for ground-truth rows
/// and pure background classification cost for the last row.
pub fn build_cost(
    scene: &Scene,
    loss_cfg: &LossConfig,
    cp_cfg: &CenterPriorConfig,
    alpha: f64,
) -> Result<CostMatrix> {
    let m = scene.m();
    let n = scene.n();
    if m == 0 {
        return Err(Error::EmptyScene);
    }

    let num_classes = scene.preds.num_classes();
    let mask = center_prior_mask(&scene.anchors, &scene.gts, cp_cfg.r);

    // Per anchor and class, both binary focal terms; the background row is
    // the all-nontarget sum and a foreground entry swaps in one target term.
    let mut target_terms = vec![0.0; n * num_classes];
    let mut nontarget_terms = vec![0.0; n * num_classes];
    let mut bg_cls = vec![0.0; n];
    for j in 0..n {
        let row = scene.preds.scores_row(j);
        let mut acc = 0.0;
        for (c, &score) in row.iter().enumerate() {
            let p = clamp_prob(score, loss_cfg);
            let nt = focal_nontarget_term(p, loss_cfg);
            target_terms[j * num_classes + c] = focal_target_term(p, loss_cfg);
            nontarget_terms[j * num_classes + c] = nt;
            acc += nt;
        }
        bg_cls[j] = acc;
    }

    let mut values = Matrix::zeros(m + 1, n);
    for (i, gt) in scene.gts.iter().enumerate() {
        let t = gt.class_id;
        let row = values.row_mut(i);
        for (j, slot) in row.iter_mut().enumerate() {
            let cls = bg_cls[j] - nontarget_terms[j * num_classes + t]
                + target_terms[j * num_classes + t];
            let reg = reg_cost(&scene.preds.boxes()[j], &gt.bbox, loss_cfg);
            let cp = if mask.at(i, j) { 0.0 } else { cp_cfg.penalty };
            *slot = cls + alpha * reg + cp;
        }
    }
    values.row_mut(m).copy_from_slice(&bg_cls);

    CostMatrix::new(m, n, values)
}

/// Estimates per-ground-truth positive supply and fills background with the
/// remainder so that total supply equals the anchor count exactly.
///
/// `DynamicK` sums each ground truth's `min(q, n)` largest predicted-box
/// IoUs over all anchors, floors the sum, and lifts it to at least 1. If the
/// foreground total reaches `n`, every supply is scaled by `(n - m) / total`,
/// re-floored with minimum 1; `SUPPLY_OVERFLOW` if still infeasible.
pub fn estimate_supply(scene: &Scene, cfg: &SupplyConfig) -> Result<SupplyDemand> {
    let m = scene.m();
    let n = scene.n();
    if m == 0 {
        return SupplyDemand::from_counts(&[n as u64], n);
    }

    let mut counts: Vec<u64> = match cfg.mode {
        SupplyMode::FixedK => vec![cfg.k as u64; m],
        SupplyMode::DynamicK => scene
            .gts
            .iter()
            .map(|gt| {
                let mut ious: Vec<f64> =
                    scene.preds.boxes().iter().map(|b| iou(b, &gt.bbox)).collect();
                ious.sort_by(|a, b| b.partial_cmp(a).expect("finite ious"));
                let q = (cfg.q as usize).min(n);
                let top_sum: f64 = ious[..q].iter().sum();
                (top_sum.floor() as u64).max(1)
            })
            .collect(),
    };

    let mut total: u64 = counts.iter().sum();
    if total >= n as u64 {
        if n <= m {
            return Err(Error::SupplyOverflow { supply: total, anchors: n });
        }
        let scale = (n - m) as f64 / total as f64;
        for c in counts.iter_mut() {
            *c = ((*c as f64 * scale).floor() as u64).max(1);
        }
        total = counts.iter().sum();
        if total >= n as u64 {
            return Err(Error::SupplyOverflow { supply: total, anchors: n });
        }
    }

    counts.push(n as u64 - total);
    SupplyDemand::from_counts(&counts, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::focal_cls_cost;
    use crate::types::{BoxXYXY, Predictions};

    fn bx(x1: f64, y1: f64, x2: f64, y2: f64) -> BoxXYXY {
        BoxXYXY::new(x1, y1, x2, y2)
    }

    /// Single-level grid of anchors at stride-cell centers.
    fn grid_anchors(w: u32, h: u32, stride: u32, level: usize) -> Vec<Anchor> {
        let gw = w.div_ceil(stride);
        let gh = h.div_ceil(stride);
        let mut out = Vec::new();
        for iy in 0..gh {
            for ix in 0..gw {
                out.push(Anchor {
                    cx: (ix as f64 + 0.5) * stride as f64,
                    cy: (iy as f64 + 0.5) * stride as f64,
                    level,
                    stride,
                });
            }
        }
        out
    }

    fn scene_with(anchors: Vec<Anchor>, gts: Vec<GroundTruth>, preds: Predictions) -> Scene {
        Scene { image_w: 640, image_h: 640, anchors, gts, preds, seed: 0 }
    }

    fn uniform_preds(anchors: &[Anchor], num_classes: usize, score: f64) -> Predictions {
        let boxes: Vec<BoxXYXY> =
            anchors.iter().map(|a| bx(a.cx - 4.0, a.cy - 4.0, a.cx + 4.0, a.cy + 4.0)).collect();
        let scores = vec![score; anchors.len() * num_classes];
        Predictions::new(num_classes, scores, boxes).unwrap()
    }

    #[test]
    fn mask_unique_nearest_with_r1() {
        // 3x3 grid, gt centered exactly on the middle anchor
        let anchors = grid_anchors(24, 24, 8, 0);
        assert_eq!(anchors.len(), 9);
        let gts = vec![GroundTruth { bbox: bx(8.0, 8.0, 16.0, 16.0), class_id: 0 }];
        let mask = center_prior_mask(&anchors, &gts, 1);
        assert_eq!(mask.count_for(0), 1);
        assert!(mask.at(0, 4), "middle anchor of the 3x3 grid");
    }

    #[test]
    fn mask_takes_whole_small_level() {
        let anchors = grid_anchors(16, 16, 8, 0); // 4 anchors < r^2 = 9
        let gts = vec![GroundTruth { bbox: bx(0.0, 0.0, 4.0, 4.0), class_id: 0 }];
        let mask = center_prior_mask(&anchors, &gts, 3);
        assert_eq!(mask.count_for(0), 4);
    }

    #[test]
    fn mask_counts_r_squared_per_level() {
        // 5 levels, each holding >= 25 anchors: exactly 125 candidates
        let mut anchors = Vec::new();
        for (level, stride) in [8u32, 16, 32, 64, 128].into_iter().enumerate() {
            anchors.extend(grid_anchors(640, 640, stride, level));
        }
        assert_eq!(anchors.len(), 8525);
        let gts = vec![GroundTruth { bbox: bx(300.0, 300.0, 360.0, 360.0), class_id: 0 }];
        let mask = center_prior_mask(&anchors, &gts, 5);
        assert_eq!(mask.count_for(0), 125);
    }

    #[test]
    fn mask_grows_monotonically_in_r() {
        let mut anchors = grid_anchors(128, 128, 8, 0);
        anchors.extend(grid_anchors(128, 128, 16, 1));
        let gts = vec![
            GroundTruth { bbox: bx(10.0, 10.0, 50.0, 60.0), class_id: 0 },
            GroundTruth { bbox: bx(70.0, 40.0, 120.0, 100.0), class_id: 0 },
        ];
        let mut prev = center_prior_mask(&anchors, &gts, 1);
        for r in 2..=6 {
            let cur = center_prior_mask(&anchors, &gts, r);
            for i in 0..gts.len() {
                for j in 0..anchors.len() {
                    assert!(!prev.at(i, j) || cur.at(i, j), "r={r} dropped a candidate");
                }
            }
            prev = cur;
        }
    }

    #[test]
    fn build_cost_rejects_empty_scene() {
        let anchors = grid_anchors(16, 16, 8, 0);
        let preds = uniform_preds(&anchors, 1, 0.5);
        let scene = scene_with(anchors, vec![], preds);
        assert!(matches!(
            build_cost(&scene, &LossConfig::default(), &CenterPriorConfig::default(), 1.5),
            Err(Error::EmptyScene)
        ));
    }

    #[test]
    fn build_cost_matches_loss_modules_term_by_term() {
        // m=1, n=2 with hand-set scores and boxes; expectation assembled
        // directly from the loss functions.
        let anchors = vec![
            Anchor { cx: 4.0, cy: 4.0, level: 0, stride: 8 },
            Anchor { cx: 12.0, cy: 4.0, level: 0, stride: 8 },
        ];
        let gt_box = bx(0.0, 0.0, 8.0, 8.0);
        let gts = vec![GroundTruth { bbox: gt_box, class_id: 1 }];
        let rows = vec![vec![0.2, 0.9], vec![0.6, 0.3]];
        let boxes = vec![bx(0.5, 0.0, 8.5, 8.0), bx(6.0, 0.0, 14.0, 8.0)];
        let preds = Predictions::from_rows(&rows, boxes.clone()).unwrap();
        let scene = scene_with(anchors, gts, preds);

        let loss_cfg = LossConfig::default();
        let cp = CenterPriorConfig { r: 5, penalty: 1e5 };
        let alpha = 1.5;
        let cost = build_cost(&scene, &loss_cfg, &cp, alpha).unwrap();

        assert_eq!(cost.m(), 1);
        assert_eq!(cost.n(), 2);
        // both anchors are candidates (single small level, r^2 >= 4)
        for j in 0..2 {
            let expected = focal_cls_cost(&rows[j], Some(1), &loss_cfg)
                + alpha * reg_cost(&boxes[j], &gt_box, &loss_cfg);
            let got = cost.at(0, j);
            assert!(
                (got - expected).abs() <= 1e-12 * expected.max(1.0),
                "fg[{j}]: {got} vs {expected}"
            );
            let expected_bg = focal_cls_cost(&rows[j], None, &loss_cfg);
            let got_bg = cost.at(1, j);
            assert!(
                (got_bg - expected_bg).abs() <= 1e-12 * expected_bg.max(1.0),
                "bg[{j}]: {got_bg} vs {expected_bg}"
            );
        }
    }

    #[test]
    fn build_cost_applies_penalty_outside_mask() {
        let anchors = grid_anchors(256, 256, 8, 0); // 1024 anchors
        let preds = uniform_preds(&anchors, 1, 0.5);
        let gts = vec![GroundTruth { bbox: bx(0.0, 0.0, 16.0, 16.0), class_id: 0 }];
        let scene = scene_with(anchors.clone(), gts.clone(), preds);
        let cp = CenterPriorConfig { r: 2, penalty: 1e5 };
        let cost = build_cost(&scene, &LossConfig::default(), &cp, 1.5).unwrap();
        let mask = center_prior_mask(&anchors, &gts, 2);
        for j in 0..anchors.len() {
            if mask.at(0, j) {
                assert!(cost.at(0, j) < 1e5);
            } else {
                assert!(cost.at(0, j) >= 1e5);
            }
        }
    }

    #[test]
    fn build_cost_permutation_equivariant_in_gts() {
        let anchors = grid_anchors(64, 64, 8, 0);
        let preds = uniform_preds(&anchors, 2, 0.4);
        let g0 = GroundTruth { bbox: bx(0.0, 0.0, 30.0, 30.0), class_id: 0 };
        let g1 = GroundTruth { bbox: bx(20.0, 30.0, 60.0, 62.0), class_id: 1 };
        let s01 = scene_with(anchors.clone(), vec![g0, g1], preds.clone());
        let s10 = scene_with(anchors, vec![g1, g0], preds);
        let cfg = LossConfig::default();
        let cp = CenterPriorConfig::default();
        let c01 = build_cost(&s01, &cfg, &cp, 1.5).unwrap();
        let c10 = build_cost(&s10, &cfg, &cp, 1.5).unwrap();
        assert_eq!(c01.row(0), c10.row(1));
        assert_eq!(c01.row(1), c10.row(0));
        assert_eq!(c01.row(2), c10.row(2));
    }

    #[test]
    fn fixed_k_supply_arithmetic() {
        let anchors = grid_anchors(80, 80, 8, 0); // 100 anchors
        let preds = uniform_preds(&anchors, 1, 0.5);
        let gts = vec![
            GroundTruth { bbox: bx(0.0, 0.0, 20.0, 20.0), class_id: 0 },
            GroundTruth { bbox: bx(40.0, 40.0, 70.0, 70.0), class_id: 0 },
        ];
        let scene = scene_with(anchors, gts, preds);
        let cfg = SupplyConfig { mode: SupplyMode::FixedK, k: 10, q: 20 };
        let sd = estimate_supply(&scene, &cfg).unwrap();
        assert_eq!(sd.supply(), &[10.0, 10.0, 80.0]);
        assert_eq!(sd.demand().iter().sum::<f64>(), 100.0);
    }

    #[test]
    fn dynamic_k_floor_lifted_to_one() {
        // all predicted boxes disjoint from the gt: top-q sum is 0
        let anchors = grid_anchors(80, 80, 8, 0);
        let boxes: Vec<BoxXYXY> = anchors.iter().map(|_| bx(70.0, 70.0, 79.0, 79.0)).collect();
        let preds = Predictions::new(1, vec![0.5; anchors.len()], boxes).unwrap();
        let gts = vec![GroundTruth { bbox: bx(0.0, 0.0, 10.0, 10.0), class_id: 0 }];
        let scene = scene_with(anchors, gts, preds);
        let sd = estimate_supply(&scene, &SupplyConfig::default()).unwrap();
        assert_eq!(sd.supply()[0], 1.0);
    }

    #[test]
    fn dynamic_k_matches_sort_and_sum_oracle() {
        // 30 anchors with predicted boxes of known IoU against the gt
        let gt_box = bx(0.0, 0.0, 10.0, 10.0);
        let anchors = grid_anchors(48, 48, 8, 0)[..30].to_vec();
        let boxes: Vec<BoxXYXY> =
            (0..30).map(|t| bx(t as f64 * 0.3, 0.0, t as f64 * 0.3 + 10.0, 10.0)).collect();
        let preds = Predictions::new(1, vec![0.5; 30], boxes.clone()).unwrap();
        let gts = vec![GroundTruth { bbox: gt_box, class_id: 0 }];
        let scene = scene_with(anchors, gts, preds);

        let mut ious: Vec<f64> = boxes.iter().map(|b| iou(b, &gt_box)).collect();
        ious.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let expected = (ious[..20].iter().sum::<f64>().floor() as u64).max(1);

        let sd = estimate_supply(&scene, &SupplyConfig::default()).unwrap();
        assert_eq!(sd.supply()[0], expected as f64);
        assert!(expected > 1, "construction should exceed the floor lift");
    }

    #[test]
    fn supply_clamps_when_k_exceeds_anchors() {
        let anchors = grid_anchors(32, 32, 8, 0); // 16 anchors
        let preds = uniform_preds(&anchors, 1, 0.5);
        let gts = vec![
            GroundTruth { bbox: bx(0.0, 0.0, 10.0, 10.0), class_id: 0 },
            GroundTruth { bbox: bx(12.0, 12.0, 30.0, 30.0), class_id: 0 },
        ];
        let scene = scene_with(anchors, gts, preds);
        let cfg = SupplyConfig { mode: SupplyMode::FixedK, k: 10, q: 20 };
        let sd = estimate_supply(&scene, &cfg).unwrap();
        let total: f64 = sd.supply()[..2].iter().sum();
        assert!(total < 16.0);
        assert!(sd.supply()[2] > 0.0);
        assert_eq!(sd.supply().iter().sum::<f64>(), 16.0);
    }

    #[test]
    fn supply_overflow_when_more_gts_than_anchors() {
        let anchors = grid_anchors(16, 16, 8, 0); // 4 anchors
        let preds = uniform_preds(&anchors, 1, 0.5);
        let gts: Vec<GroundTruth> = (0..5)
            .map(|i| GroundTruth {
                bbox: bx(i as f64, i as f64, i as f64 + 2.0, i as f64 + 2.0),
                class_id: 0,
            })
            .collect();
        let scene = scene_with(anchors, gts, preds);
        let cfg = SupplyConfig { mode: SupplyMode::FixedK, k: 1, q: 20 };
        assert!(matches!(estimate_supply(&scene, &cfg), Err(Error::SupplyOverflow { .. })));
    }

    #[test]
    fn fractional_supply_detection() {
        let sd = SupplyDemand::new(vec![1.5, 0.5], vec![1.0, 1.0]).unwrap();
        assert!(matches!(sd.integral_supplies(), Err(Error::FractionalSupply { index: 0, .. })));
    }
}
