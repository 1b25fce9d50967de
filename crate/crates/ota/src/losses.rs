//! Pair-wise classification and regression cost terms for the cost matrix.
//!
//! Classification uses the sigmoid-head convention: detection as
//! `num_classes` independent binary problems, so the per-pair cost is the sum
//! of binary focal terms over classes, and background is the all-negatives
//! target. Regression is either `-ln(iou)` or `1 - GIoU`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{giou, iou, BoxXYXY};

/// Regression cost flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegMode {
    /// `-ln(max(iou, iou_eps))`
    IouLog,
    /// `1 - GIoU`, in `[0, 2]`
    Giou,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    pub focal_alpha: f64,
    pub focal_gamma: f64,
    /// Probability/IoU clamp keeping every log finite.
    pub iou_eps: f64,
    pub reg_mode: RegMode,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self { focal_alpha: 0.25, focal_gamma: 2.0, iou_eps: 1e-6, reg_mode: RegMode::IouLog }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.focal_alpha > 0.0 && self.focal_alpha < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "focal_alpha must be in (0, 1), got {}",
                self.focal_alpha
            )));
        }
        if !(self.focal_gamma >= 0.0 && self.focal_gamma.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "focal_gamma must be >= 0, got {}",
                self.focal_gamma
            )));
        }
        if !(self.iou_eps > 0.0 && self.iou_eps <= 1e-3) {
            return Err(Error::InvalidSpec(format!(
                "iou_eps must be in (0, 1e-3], got {}",
                self.iou_eps
            )));
        }
        Ok(())
    }
}

/// Binary focal term for the target class: `-alpha * (1-p)^gamma * ln(p)`.
#[inline]
pub(crate) fn focal_target_term(p: f64, cfg: &LossConfig) -> f64 {
    -cfg.focal_alpha * (1.0 - p).powf(cfg.focal_gamma) * p.ln()
}

/// Binary focal term for a non-target class: `-(1-alpha) * p^gamma * ln(1-p)`.
#[inline]
pub(crate) fn focal_nontarget_term(p: f64, cfg: &LossConfig) -> f64 {
    -(1.0 - cfg.focal_alpha) * p.powf(cfg.focal_gamma) * (1.0 - p).ln()
}

#[inline]
pub(crate) fn clamp_prob(p: f64, cfg: &LossConfig) -> f64 {
    p.clamp(cfg.iou_eps, 1.0 - cfg.iou_eps)
}

/// Focal classification cost of one anchor against a target class.
/// `target_class = None` means background: every class is a non-target.
pub fn focal_cls_cost(scores_row: &[f64], target_class: Option<usize>, cfg: &LossConfig) -> f64 {
    let mut cost = 0.0;
    for (c, &score) in scores_row.iter().enumerate() {
        let p = clamp_prob(score, cfg);
        cost += if target_class == Some(c) {
            focal_target_term(p, cfg)
        } else {
            focal_nontarget_term(p, cfg)
        };
    }
    cost
}

/// Regression cost between a predicted and a ground-truth box.
pub fn reg_cost(pred: &BoxXYXY, gt: &BoxXYXY, cfg: &LossConfig) -> f64 {
    match cfg.reg_mode {
        RegMode::IouLog => -iou(pred, gt).max(cfg.iou_eps).ln(),
        RegMode::Giou => 1.0 - giou(pred, gt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bx(x1: f64, y1: f64, x2: f64, y2: f64) -> BoxXYXY {
        BoxXYXY::new(x1, y1, x2, y2)
    }

    #[test]
    fn perfect_positive_is_near_zero() {
        let cfg = LossConfig::default();
        let cost = focal_cls_cost(&[1.0 - cfg.iou_eps], Some(0), &cfg);
        assert!(cost < 1e-10, "{cost}");
    }

    #[test]
    fn perfect_negative_is_near_zero() {
        let cfg = LossConfig::default();
        let cost = focal_cls_cost(&[cfg.iou_eps], None, &cfg);
        assert!(cost < 1e-10, "{cost}");
    }

    #[test]
    fn focal_matches_hand_evaluation() {
        // C=1, p=0.5, target: 0.25 * (0.5)^2 * (-ln 0.5)
        let cfg = LossConfig::default();
        let expected = 0.25 * 0.25 * std::f64::consts::LN_2;
        let got = focal_cls_cost(&[0.5], Some(0), &cfg);
        assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
    }

    #[test]
    fn focal_monotone_in_scores() {
        let cfg = LossConfig::default();
        // decreasing in the target score
        let mut prev = f64::INFINITY;
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let c = focal_cls_cost(&[p], Some(0), &cfg);
            assert!(c < prev);
            prev = c;
        }
        // increasing in a non-target score
        let mut prev = -1.0;
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let c = focal_cls_cost(&[p], None, &cfg);
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn background_treats_all_as_nontarget() {
        let cfg = LossConfig::default();
        let row = [0.2, 0.7, 0.4];
        let direct = focal_cls_cost(&row, None, &cfg);
        let summed: f64 =
            row.iter().map(|&p| focal_nontarget_term(clamp_prob(p, &cfg), &cfg)).sum();
        assert_eq!(direct, summed);
    }

    #[test]
    fn reg_identity_zero_in_both_modes() {
        let a = bx(3.0, 4.0, 9.0, 11.0);
        let log_cfg = LossConfig::default();
        let giou_cfg = LossConfig { reg_mode: RegMode::Giou, ..LossConfig::default() };
        assert_eq!(reg_cost(&a, &a, &log_cfg), 0.0);
        assert_eq!(reg_cost(&a, &a, &giou_cfg), 0.0);
    }

    #[test]
    fn reg_iou_log_matches_geometry() {
        let cfg = LossConfig::default();
        let got = reg_cost(&bx(0.0, 0.0, 2.0, 2.0), &bx(1.0, 1.0, 3.0, 3.0), &cfg);
        let expected = -(1.0f64 / 7.0).ln(); // ~1.94591
        assert!((got - expected).abs() < 1e-12, "{got}");
    }

    #[test]
    fn reg_giou_disjoint_exceeds_one() {
        let cfg = LossConfig { reg_mode: RegMode::Giou, ..LossConfig::default() };
        let cost = reg_cost(&bx(0.0, 0.0, 1.0, 1.0), &bx(50.0, 50.0, 51.0, 51.0), &cfg);
        assert!(cost > 1.0 && cost <= 2.0, "{cost}");
    }

    #[test]
    fn costs_stay_finite_on_extremes() {
        let cfg = LossConfig::default();
        assert!(focal_cls_cost(&[0.0, 1.0], Some(1), &cfg).is_finite());
        assert!(focal_cls_cost(&[0.0, 1.0], None, &cfg).is_finite());
        let far = reg_cost(&bx(0.0, 0.0, 1.0, 1.0), &bx(1e6, 1e6, 1e6 + 1.0, 1e6 + 1.0), &cfg);
        assert!(far.is_finite() && far >= 0.0);
    }

    #[test]
    fn config_validation_ranges() {
        assert!(LossConfig::default().validate().is_ok());
        assert!(LossConfig { focal_alpha: 1.0, ..LossConfig::default() }.validate().is_err());
        assert!(LossConfig { focal_gamma: -0.1, ..LossConfig::default() }.validate().is_err());
        assert!(LossConfig { iou_eps: 0.0, ..LossConfig::default() }.validate().is_err());
        assert!(LossConfig { iou_eps: 0.01, ..LossConfig::default() }.validate().is_err());
    }
}
