//! Geometric and scene domain types shared by every other module.
//!
//! All types are immutable after construction; nothing here mutates shared
//! state, so values can be read concurrently without coordination.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box in corner form `(x1, y1, x2, y2)`, continuous pixel
/// coordinates with `x1 <= x2` and `y1 <= y2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxXYXY {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BoxXYXY {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    /// Finite coordinates in corner order. Zero-area boxes are valid.
    pub fn is_valid(&self) -> bool {
        self.x1.is_finite()
            && self.y1.is_finite()
            && self.x2.is_finite()
            && self.y2.is_finite()
            && self.x1 <= self.x2
            && self.y1 <= self.y2
    }
}

/// Intersection-over-union of two boxes. Degenerate (zero-area) inputs and
/// empty intersections yield 0 by convention.
pub fn iou(a: &BoxXYXY, b: &BoxXYXY) -> f64 {
    let iw = (a.x2.min(b.x2) - a.x1.max(b.x1)).max(0.0);
    let ih = (a.y2.min(b.y2) - a.y1.max(b.y1)).max(0.0);
    let inter = iw * ih;
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Generalized IoU: `iou - (enclose - union) / enclose`, in `(-1, 1]`.
pub fn giou(a: &BoxXYXY, b: &BoxXYXY) -> f64 {
    let iw = (a.x2.min(b.x2) - a.x1.max(b.x1)).max(0.0);
    let ih = (a.y2.min(b.y2) - a.y1.max(b.y1)).max(0.0);
    let inter = iw * ih;
    let union = a.area() + b.area() - inter;
    let ew = a.x2.max(b.x2) - a.x1.min(b.x1);
    let eh = a.y2.max(b.y2) - a.y1.min(b.y1);
    let enclose = ew * eh;
    let iou = if union <= 0.0 { 0.0 } else { inter / union };
    if enclose <= 0.0 {
        iou
    } else {
        iou - (enclose - union) / enclose
    }
}

/// Anchor point on a feature-pyramid grid. Anchor boxes are represented by
/// their geometric center, so one type covers both conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub cx: f64,
    pub cy: f64,
    /// Index into the scene's pyramid levels.
    pub level: usize,
    /// Grid spacing of this level, pixels.
    pub stride: u32,
}

/// An annotated object: box plus class index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub bbox: BoxXYXY,
    pub class_id: usize,
}

/// Euclidean distance between an anchor point and a ground-truth box center.
pub fn center_distance(anchor: &Anchor, gt: &GroundTruth) -> f64 {
    let (gx, gy) = gt.bbox.center();
    let dx = anchor.cx - gx;
    let dy = anchor.cy - gy;
    (dx * dx + dy * dy).sqrt()
}

/// Per-anchor predictions: post-activation class probabilities in `[0, 1]`
/// (one row of `num_classes` per anchor) and one predicted box per anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    num_classes: usize,
    /// Row-major `n x num_classes`.
    scores: Vec<f64>,
    boxes: Vec<BoxXYXY>,
}

impl Predictions {
    pub fn new(num_classes: usize, scores: Vec<f64>, boxes: Vec<BoxXYXY>) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::InvalidSpec("num_classes must be >= 1".into()));
        }
        if scores.len() != num_classes * boxes.len() {
            return Err(Error::ShapeMismatch(format!(
                "scores length {} != {} anchors x {} classes",
                scores.len(),
                boxes.len(),
                num_classes
            )));
        }
        Ok(Self { num_classes, scores, boxes })
    }

    pub fn from_rows(rows: &[Vec<f64>], boxes: Vec<BoxXYXY>) -> Result<Self> {
        let num_classes = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != num_classes) {
            return Err(Error::ShapeMismatch("ragged score rows".into()));
        }
        let scores = rows.iter().flatten().copied().collect();
        Self::new(num_classes, scores, boxes)
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    #[inline]
    pub fn scores_row(&self, anchor: usize) -> &[f64] {
        &self.scores[anchor * self.num_classes..(anchor + 1) * self.num_classes]
    }

    pub fn boxes(&self) -> &[BoxXYXY] {
        &self.boxes
    }
}

/// One unit of work: anchors across pyramid levels, ground truths, and
/// simulated (or external) per-anchor predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub image_w: u32,
    pub image_h: u32,
    pub anchors: Vec<Anchor>,
    pub gts: Vec<GroundTruth>,
    pub preds: Predictions,
    /// Seed that generated the scene; 0 for externally supplied data.
    pub seed: u64,
}

impl Scene {
    /// Anchor count.
    pub fn n(&self) -> usize {
        self.anchors.len()
    }

    /// Ground-truth count.
    pub fn m(&self) -> usize {
        self.gts.len()
    }

    /// Checks every structural invariant; file loaders call this so the
    /// pipeline can assume validity.
    pub fn validate(&self) -> Result<()> {
        if self.image_w == 0 || self.image_h == 0 {
            return Err(Error::InvalidFile("image dimensions must be positive".into()));
        }
        if self.preds.len() != self.anchors.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} predictions for {} anchors",
                self.preds.len(),
                self.anchors.len()
            )));
        }
        for (j, a) in self.anchors.iter().enumerate() {
            if a.stride == 0 || !a.cx.is_finite() || !a.cy.is_finite() {
                return Err(Error::InvalidFile(format!("anchor {j} is malformed")));
            }
        }
        let (w, h) = (self.image_w as f64, self.image_h as f64);
        for (i, gt) in self.gts.iter().enumerate() {
            if !gt.bbox.is_valid() || gt.bbox.area() <= 0.0 {
                return Err(Error::InvalidFile(format!("gt {i} box is degenerate")));
            }
            if gt.bbox.x1 < 0.0 || gt.bbox.y1 < 0.0 || gt.bbox.x2 > w || gt.bbox.y2 > h {
                return Err(Error::InvalidFile(format!("gt {i} box exceeds image bounds")));
            }
            if gt.class_id >= self.preds.num_classes() {
                return Err(Error::InvalidFile(format!(
                    "gt {i} class {} out of range for {} classes",
                    gt.class_id,
                    self.preds.num_classes()
                )));
            }
        }
        for j in 0..self.preds.len() {
            if !self.preds.boxes()[j].is_valid() {
                return Err(Error::InvalidFile(format!("predicted box {j} is invalid")));
            }
            if self.preds.scores_row(j).iter().any(|s| !(0.0..=1.0).contains(s)) {
                return Err(Error::InvalidFile(format!("scores for anchor {j} leave [0, 1]")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x1: f64, y1: f64, x2: f64, y2: f64) -> BoxXYXY {
        BoxXYXY::new(x1, y1, x2, y2)
    }

    #[test]
    fn iou_identity() {
        let a = bx(0.0, 0.0, 10.0, 10.0);
        assert_eq!(iou(&a, &a), 1.0);
    }

    #[test]
    fn iou_disjoint() {
        assert_eq!(iou(&bx(0.0, 0.0, 1.0, 1.0), &bx(5.0, 5.0, 6.0, 6.0)), 0.0);
    }

    #[test]
    fn iou_partial_overlap() {
        // intersection 1, union 4 + 4 - 1 = 7
        let v = iou(&bx(0.0, 0.0, 2.0, 2.0), &bx(1.0, 1.0, 3.0, 3.0));
        assert!((v - 1.0 / 7.0).abs() < 1e-15, "{v}");
    }

    #[test]
    fn iou_degenerate_is_zero() {
        let point = bx(1.0, 1.0, 1.0, 1.0);
        assert_eq!(iou(&point, &point), 0.0);
        assert_eq!(iou(&point, &bx(0.0, 0.0, 2.0, 2.0)), 0.0);
    }

    #[test]
    fn giou_bounds_and_identity() {
        let a = bx(0.0, 0.0, 2.0, 2.0);
        assert_eq!(giou(&a, &a), 1.0);
        // far-apart boxes drive GIoU negative
        let g = giou(&bx(0.0, 0.0, 1.0, 1.0), &bx(9.0, 9.0, 10.0, 10.0));
        assert!(g < 0.0 && g > -1.0, "{g}");
    }

    #[test]
    fn center_distance_cases() {
        let gt = GroundTruth { bbox: bx(0.0, 0.0, 10.0, 10.0), class_id: 0 };
        let at = |cx, cy| Anchor { cx, cy, level: 0, stride: 8 };
        assert_eq!(center_distance(&at(5.0, 5.0), &gt), 0.0);
        assert_eq!(center_distance(&at(8.0, 5.0), &gt), 3.0);
        // 3-4-5 triangle
        assert_eq!(center_distance(&at(8.0, 9.0), &gt), 5.0);
    }

    fn arb_box() -> impl Strategy<Value = BoxXYXY> {
        (-50.0..50.0f64, -50.0..50.0f64, 0.1..40.0f64, 0.1..40.0f64)
            .prop_map(|(x, y, w, h)| bx(x, y, x + w, y + h))
    }

    proptest! {
        #[test]
        fn iou_symmetric(a in arb_box(), b in arb_box()) {
            prop_assert_eq!(iou(&a, &b), iou(&b, &a));
        }

        #[test]
        fn iou_bounded_by_area_ratio(a in arb_box(), b in arb_box()) {
            let v = iou(&a, &b);
            let bound = a.area().min(b.area()) / a.area().max(b.area());
            prop_assert!(v >= 0.0);
            prop_assert!(v <= bound + 1e-12);
        }

        #[test]
        fn iou_translation_invariant(a in arb_box(), b in arb_box(),
                                     dx in -100.0..100.0f64, dy in -100.0..100.0f64) {
            let shift = |t: &BoxXYXY| bx(t.x1 + dx, t.y1 + dy, t.x2 + dx, t.y2 + dy);
            let before = iou(&a, &b);
            let after = iou(&shift(&a), &shift(&b));
            prop_assert!((before - after).abs() <= 1e-12 * before.max(1.0));
        }

        #[test]
        fn giou_never_exceeds_iou(a in arb_box(), b in arb_box()) {
            prop_assert!(giou(&a, &b) <= iou(&a, &b) + 1e-12);
        }
    }
}
