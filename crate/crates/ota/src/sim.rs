//! Deterministic synthetic scene generation.
//!
//! Scenes stand in for a trained detector's outputs so assignment behavior
//! can be studied at desk scale. Generation is pinned to the counter-based
//! RNG in [`crate::rng`] and uses only IEEE-exact arithmetic (no libm
//! transcendentals), so equal specs produce bitwise-equal scenes on every
//! platform. The procedure below is frozen; see the README file-format notes.
//!
//! Ground truths: the image is divided into a `ceil(sqrt(m))` square grid of
//! cells. Each ground truth gets a box strictly inside its own cell (sizes
//! 35-75% of the cell, jittered center), which guarantees pairwise IoU 0 at
//! `crowding = 0`. A second, fully crowded placement puts larger boxes
//! (25-50% of the image) near the image center. The emitted box linearly
//! interpolates between the two placements with the crowding coefficient,
//! then clamps to image bounds.
//!
//! Predictions: each anchor predicts its nearest ground truth's box, with
//! per-corner Gaussian jitter of scale
//! `pred_noise * gt_extent * (1 + dist/half_diag)` — regression quality
//! degrades with center distance relative to object size, which is what lets
//! larger objects accumulate more well-regressed predictions. Class scores
//! follow the algebraic sigmoid `0.5 + 0.5*x/(1+|x|)` of
//! `score_sharpness * (1 - dist/half_diag)` against the nearest ground truth
//! of that class, plus +-0.01 uniform noise, clamped to `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{splitmix64, CounterRng};
use crate::types::{center_distance, Anchor, BoxXYXY, GroundTruth, Predictions, Scene};

const STREAM_GT: u64 = 0x4754;
const STREAM_CLASS: u64 = 0x434c53;
const STREAM_BOX: u64 = 0x424f58;
const STREAM_SCORE: u64 = 0x534352;

/// Parameters of one synthetic scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub seed: u64,
    pub image_w: u32,
    pub image_h: u32,
    /// Pyramid strides, one grid per entry.
    pub levels: Vec<u32>,
    pub num_gts: u32,
    /// 0 = well-separated boxes, 1 = heavily overlapping central cluster.
    pub crowding: f64,
    pub num_classes: u32,
    /// Box-jitter scale as a fraction of ground-truth size.
    pub pred_noise: f64,
    /// Steepness of the score falloff with center distance.
    pub score_sharpness: f64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            image_w: 640,
            image_h: 640,
            levels: vec![8, 16, 32, 64, 128],
            num_gts: 5,
            crowding: 0.3,
            num_classes: 3,
            pred_noise: 0.1,
            score_sharpness: 4.0,
        }
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.image_w == 0 || self.image_h == 0 {
            return Err(Error::InvalidSpec("image dimensions must be positive".into()));
        }
        if self.levels.is_empty() {
            return Err(Error::InvalidSpec("levels must not be empty".into()));
        }
        if self.levels.iter().any(|&s| s == 0) {
            return Err(Error::InvalidSpec("strides must be positive".into()));
        }
        if self.num_gts == 0 {
            return Err(Error::InvalidSpec("num_gts must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.crowding) {
            return Err(Error::InvalidSpec(format!(
                "crowding must be in [0, 1], got {}",
                self.crowding
            )));
        }
        if self.num_classes == 0 {
            return Err(Error::InvalidSpec("num_classes must be >= 1".into()));
        }
        if !(self.pred_noise >= 0.0 && self.pred_noise.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "pred_noise must be >= 0, got {}",
                self.pred_noise
            )));
        }
        if !(self.score_sharpness > 0.0 && self.score_sharpness.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "score_sharpness must be > 0, got {}",
                self.score_sharpness
            )));
        }
        Ok(())
    }
}

/// Anchor points at the pixel centers of every stride cell, one grid per
/// level, rows scanned top-to-bottom and left-to-right. File readers
/// regenerate implicit anchors with this exact function.
pub fn anchor_grid(image_w: u32, image_h: u32, levels: &[u32]) -> Vec<Anchor> {
    let mut anchors = Vec::new();
    for (level, &stride) in levels.iter().enumerate() {
        let gw = image_w.div_ceil(stride);
        let gh = image_h.div_ceil(stride);
        for iy in 0..gh {
            for ix in 0..gw {
                anchors.push(Anchor {
                    cx: (ix as f64 + 0.5) * stride as f64,
                    cy: (iy as f64 + 0.5) * stride as f64,
                    level,
                    stride,
                });
            }
        }
    }
    anchors
}

/// Algebraic sigmoid `0.5 + 0.5 * x / (1 + |x|)`; exact IEEE arithmetic.
fn fast_sigmoid(x: f64) -> f64 {
    0.5 + 0.5 * x / (1.0 + x.abs())
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Generates one scene. Identical specs yield bitwise-identical scenes.
pub fn generate(spec: &SceneSpec) -> Result<Scene> {
    spec.validate()?;
    let w = spec.image_w as f64;
    let h = spec.image_h as f64;
    let m = spec.num_gts as usize;
    let num_classes = spec.num_classes as usize;

    let gt_seed = splitmix64(spec.seed ^ STREAM_GT);
    let class_seed = splitmix64(spec.seed ^ STREAM_CLASS);
    let box_seed = splitmix64(spec.seed ^ STREAM_BOX);
    let score_seed = splitmix64(spec.seed ^ STREAM_SCORE);

    // ground truths
    let grid = (m as f64).sqrt().ceil() as u64;
    let cell_w = w / grid as f64;
    let cell_h = h / grid as f64;
    let mut gts = Vec::with_capacity(m);
    for i in 0..m {
        let u: Vec<f64> = (0..4).map(|t| CounterRng::unit_at(gt_seed, i as u64 * 8 + t)).collect();
        let cell_x = (i as u64 % grid) as f64;
        let cell_y = (i as u64 / grid) as f64;

        let base_w = cell_w * (0.35 + 0.40 * u[0]);
        let base_h = cell_h * (0.35 + 0.40 * u[1]);
        let base_cx = (cell_x + 0.5) * cell_w + (u[2] - 0.5) * (cell_w - base_w) * 0.9;
        let base_cy = (cell_y + 0.5) * cell_h + (u[3] - 0.5) * (cell_h - base_h) * 0.9;

        let crowd_w = w * (0.25 + 0.25 * u[0]);
        let crowd_h = h * (0.25 + 0.25 * u[1]);
        let crowd_cx = w * 0.5 + (u[2] - 0.5) * w * 0.35;
        let crowd_cy = h * 0.5 + (u[3] - 0.5) * h * 0.35;

        let c = spec.crowding;
        let bw = lerp(base_w, crowd_w, c);
        let bh = lerp(base_h, crowd_h, c);
        let cx = lerp(base_cx, crowd_cx, c);
        let cy = lerp(base_cy, crowd_cy, c);

        let bbox = BoxXYXY::new(
            (cx - bw / 2.0).max(0.0),
            (cy - bh / 2.0).max(0.0),
            (cx + bw / 2.0).min(w),
            (cy + bh / 2.0).min(h),
        );
        let class_id = (CounterRng::at(class_seed, i as u64) % spec.num_classes as u64) as usize;
        gts.push(GroundTruth { bbox, class_id });
    }

    let anchors = anchor_grid(spec.image_w, spec.image_h, &spec.levels);
    let n = anchors.len();

    // predictions
    let mut boxes = Vec::with_capacity(n);
    let mut scores = vec![0.0; n * num_classes];
    for (j, anchor) in anchors.iter().enumerate() {
        let mut nearest = 0;
        let mut nearest_dist = f64::INFINITY;
        for (i, gt) in gts.iter().enumerate() {
            let d = center_distance(anchor, gt);
            if d < nearest_dist {
                nearest_dist = d;
                nearest = i;
            }
        }
        let g = &gts[nearest].bbox;
        let half_diag = (g.width() * g.width() + g.height() * g.height()).sqrt() / 2.0;
        let d_rel = nearest_dist / half_diag;
        let sx = spec.pred_noise * g.width() * (1.0 + d_rel);
        let sy = spec.pred_noise * g.height() * (1.0 + d_rel);
        let base = j as u64 * 64;
        let x1 = g.x1 + CounterRng::gaussian_at(box_seed, base) * sx;
        let y1 = g.y1 + CounterRng::gaussian_at(box_seed, base + 12) * sy;
        let x2 = g.x2 + CounterRng::gaussian_at(box_seed, base + 24) * sx;
        let y2 = g.y2 + CounterRng::gaussian_at(box_seed, base + 36) * sy;
        boxes.push(BoxXYXY::new(x1.min(x2), y1.min(y2), x1.max(x2), y1.max(y2)));

        for c in 0..num_classes {
            let mut d_class = f64::INFINITY;
            for gt in gts.iter().filter(|gt| gt.class_id == c) {
                let hd = (gt.bbox.width() * gt.bbox.width()
                    + gt.bbox.height() * gt.bbox.height())
                .sqrt()
                    / 2.0;
                d_class = d_class.min(center_distance(anchor, gt) / hd);
            }
            let base_score = if d_class.is_finite() {
                fast_sigmoid(spec.score_sharpness * (1.0 - d_class))
            } else {
                0.0
            };
            let noise =
                (CounterRng::unit_at(score_seed, (j * num_classes + c) as u64) - 0.5) * 0.02;
            scores[j * num_classes + c] = (base_score + noise).clamp(0.0, 1.0);
        }
    }

    let preds = Predictions::new(num_classes, scores, boxes)?;
    let scene =
        Scene { image_w: spec.image_w, image_h: spec.image_h, anchors, gts, preds, seed: spec.seed };
    debug_assert!(scene.validate().is_ok());
    Ok(scene)
}

/// Generates `count` scenes; scene `i` uses `spec.seed + i`.
pub fn generate_batch(spec: &SceneSpec, count: usize) -> Result<Vec<Scene>> {
    (0..count)
        .map(|i| {
            let shifted =
                SceneSpec { seed: spec.seed.wrapping_add(i as u64), ..spec.clone() };
            generate(&shifted)
        })
        .collect()
}

/// Mean IoU over all ground-truth pairs of one scene; 0 when fewer than two.
pub fn mean_pairwise_gt_iou(scene: &Scene) -> f64 {
    let m = scene.m();
    if m < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            total += crate::types::iou(&scene.gts[i].bbox, &scene.gts[j].bbox);
            pairs += 1;
        }
    }
    total / pairs as f64
}
