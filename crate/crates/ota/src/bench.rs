//! Experiment harness: candidate-radius sweeps, supply sweeps, and solver
//! throughput, reported as fixed-column CSV rows.
//!
//! The TOPK_MAXIOU and MIN_AREA baselines are deliberately minimal stand-ins
//! for per-object assigners: each ground truth claims its center-prior
//! candidate set, an anchor claimed by two or more ground truths counts as
//! ambiguous *before* conflict resolution, and conflicts then resolve to the
//! max-predicted-IoU (or min-area) claimant. Their absolute numbers are not
//! comparable to trained-detector statistics; only trends are.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assign::run_ota_full;
use crate::config::RunConfig;
use crate::cost::{build_cost, center_prior_mask, estimate_supply, SupplyMode};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::oracle;
use crate::rng::CounterRng;
use crate::sim::{generate_batch, SceneSpec};
use crate::sinkhorn::{self, SinkhornConfig};
use crate::types::{iou, Scene};

/// Oracle gaps are only computed on instances at most this large.
const GAP_ORACLE_LIMIT: usize = 256;
/// ... and on at most this many scenes per row.
const GAP_SCENES: usize = 8;

/// Hand-crafted assignment rules used as trend baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    TopkMaxIou,
    MinArea,
}

impl Baseline {
    pub fn label(&self) -> &'static str {
        match self {
            Baseline::TopkMaxIou => "topk_maxiou",
            Baseline::MinArea => "min_area",
        }
    }
}

/// One report line: a configuration plus its measured means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub r: Option<u32>,
    pub k_mode: Option<SupplyMode>,
    pub k: Option<u32>,
    pub q: Option<u32>,
    pub gamma: f64,
    pub iters: u32,
    pub scenes: usize,
    pub mean_amb: Option<f64>,
    pub mean_fg: Option<f64>,
    pub mean_gap: Option<f64>,
    pub median_ms: f64,
    /// Sidecar-only: `median_ms / iters`. Not a CSV column.
    pub per_iter_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub const CSV_HEADER: &str =
    "method,r,k_mode,k,q,gamma,iters,scenes,mean_amb,mean_fg,mean_gap,median_ms";

impl BenchReport {
    /// Fixed-column CSV; everything except `median_ms` is deterministic for
    /// a given seed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let k_mode = row.k_mode.map(|m| match m {
                SupplyMode::FixedK => "fixed_k",
                SupplyMode::DynamicK => "dynamic_k",
            });
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.method,
                opt(row.r),
                k_mode.unwrap_or(""),
                opt(row.k),
                opt(row.q),
                row.gamma,
                row.iters,
                row.scenes,
                opt(row.mean_amb),
                opt(row.mean_fg),
                opt(row.mean_gap),
                row.median_ms,
            ));
        }
        out
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// Baseline decode: labels plus the pre-resolution ambiguity count.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineAssignment {
    /// Per-anchor supplier in `[0, m]`, `m` = background.
    pub labels: Vec<usize>,
    /// Anchors claimed by two or more ground truths before resolution.
    pub ambiguous_count: usize,
    pub fg_count: usize,
}

/// Assigns anchors by candidate-set membership; multi-claimed anchors go to
/// the winning claimant under the baseline's rule.
pub fn baseline_assign(scene: &Scene, r: u32, baseline: Baseline) -> BaselineAssignment {
    let m = scene.m();
    let n = scene.n();
    let mask = center_prior_mask(&scene.anchors, &scene.gts, r);
    let mut labels = vec![m; n];
    let mut ambiguous_count = 0;
    let mut fg_count = 0;
    for j in 0..n {
        let claimants = mask.claimants(j);
        match claimants.len() {
            0 => {}
            1 => {
                labels[j] = claimants[0];
                fg_count += 1;
            }
            _ => {
                ambiguous_count += 1;
                fg_count += 1;
                labels[j] = match baseline {
                    Baseline::TopkMaxIou => claimants
                        .iter()
                        .copied()
                        .max_by(|&a, &b| {
                            let ia = iou(&scene.preds.boxes()[j], &scene.gts[a].bbox);
                            let ib = iou(&scene.preds.boxes()[j], &scene.gts[b].bbox);
                            // ties to the lower index
                            ia.partial_cmp(&ib).unwrap().then(b.cmp(&a))
                        })
                        .unwrap(),
                    Baseline::MinArea => claimants
                        .iter()
                        .copied()
                        .min_by(|&a, &b| {
                            let aa = scene.gts[a].bbox.area();
                            let ab = scene.gts[b].bbox.area();
                            aa.partial_cmp(&ab).unwrap().then(a.cmp(&b))
                        })
                        .unwrap(),
                };
            }
        }
    }
    BaselineAssignment { labels, ambiguous_count, fg_count }
}

/// Sweeps the center-prior radius for OTA and the given baselines, recording
/// mean ambiguity and foreground counts per setting.
pub fn run_r_sweep(
    spec: &SceneSpec,
    r_values: &[u32],
    baselines: &[Baseline],
    cfg: &RunConfig,
    scenes: usize,
) -> Result<BenchReport> {
    if r_values.is_empty() {
        return Err(Error::InvalidSpec("r sweep needs at least one value".into()));
    }
    let batch = generate_batch(spec, scenes)?;
    let mut rows = Vec::new();
    for &r in r_values {
        let run_cfg = RunConfig { r, ..cfg.clone() };
        run_cfg.validate()?;
        let mut amb = 0.0;
        let mut fg = 0.0;
        let mut times = Vec::with_capacity(scenes);
        for scene in &batch {
            let started = Instant::now();
            let run = run_ota_full(
                scene,
                &run_cfg.loss(),
                &run_cfg.center_prior(),
                &run_cfg.supply(),
                &run_cfg.sinkhorn(),
                run_cfg.alpha,
            )?;
            times.push(started.elapsed().as_secs_f64() * 1e3);
            amb += run.assignment.ambiguous_count as f64;
            fg += run.assignment.fg_count as f64;
        }
        rows.push(BenchRow {
            method: "ota".into(),
            r: Some(r),
            k_mode: Some(run_cfg.supply_mode),
            k: Some(run_cfg.k),
            q: Some(run_cfg.q),
            gamma: run_cfg.gamma,
            iters: run_cfg.iters,
            scenes,
            mean_amb: Some(amb / scenes as f64),
            mean_fg: Some(fg / scenes as f64),
            mean_gap: None,
            median_ms: median(&mut times),
            per_iter_ms: None,
        });

        for &baseline in baselines {
            let mut amb = 0.0;
            let mut fg = 0.0;
            let mut times = Vec::with_capacity(scenes);
            for scene in &batch {
                let started = Instant::now();
                let out = baseline_assign(scene, r, baseline);
                times.push(started.elapsed().as_secs_f64() * 1e3);
                amb += out.ambiguous_count as f64;
                fg += out.fg_count as f64;
            }
            rows.push(BenchRow {
                method: baseline.label().into(),
                r: Some(r),
                k_mode: None,
                k: None,
                q: None,
                gamma: cfg.gamma,
                iters: 0,
                scenes,
                mean_amb: Some(amb / scenes as f64),
                mean_fg: Some(fg / scenes as f64),
                mean_gap: None,
                median_ms: median(&mut times),
                per_iter_ms: None,
            });
        }
    }
    Ok(BenchReport { rows })
}

/// Sweeps fixed k values (plus optionally dynamic-k), recording foreground
/// counts and, on small instances, the relative gap between the decoded hard
/// assignment and the exact optimum.
pub fn run_k_sweep(
    spec: &SceneSpec,
    k_values: &[u32],
    include_dynamic: bool,
    cfg: &RunConfig,
    scenes: usize,
) -> Result<BenchReport> {
    if k_values.is_empty() && !include_dynamic {
        return Err(Error::InvalidSpec("k sweep needs at least one value".into()));
    }
    let batch = generate_batch(spec, scenes)?;
    let mut rows = Vec::new();
    let mut settings: Vec<(SupplyMode, u32)> =
        k_values.iter().map(|&k| (SupplyMode::FixedK, k)).collect();
    if include_dynamic {
        settings.push((SupplyMode::DynamicK, cfg.k));
    }
    for (mode, k) in settings {
        let run_cfg = RunConfig { supply_mode: mode, k, ..cfg.clone() };
        run_cfg.validate()?;
        let mut amb = 0.0;
        let mut fg = 0.0;
        let mut times = Vec::with_capacity(scenes);
        let mut gaps = Vec::new();
        for (idx, scene) in batch.iter().enumerate() {
            let started = Instant::now();
            let run = run_ota_full(
                scene,
                &run_cfg.loss(),
                &run_cfg.center_prior(),
                &run_cfg.supply(),
                &run_cfg.sinkhorn(),
                run_cfg.alpha,
            )?;
            times.push(started.elapsed().as_secs_f64() * 1e3);
            amb += run.assignment.ambiguous_count as f64;
            fg += run.assignment.fg_count as f64;

            if idx < GAP_SCENES && scene.n() <= GAP_ORACLE_LIMIT && scene.m() > 0 {
                let cost =
                    build_cost(scene, &run_cfg.loss(), &run_cfg.center_prior(), run_cfg.alpha)?;
                let sd = estimate_supply(scene, &run_cfg.supply())?;
                let exact = oracle::solve_exact(&cost, &sd)?;
                let hard = oracle::assignment_cost(&cost, &run.assignment.labels);
                gaps.push((hard - exact.cost) / exact.cost.abs().max(1e-9));
            }
        }
        rows.push(BenchRow {
            method: "ota".into(),
            r: Some(run_cfg.r),
            k_mode: Some(mode),
            k: Some(k),
            q: Some(run_cfg.q),
            gamma: run_cfg.gamma,
            iters: run_cfg.iters,
            scenes,
            mean_amb: Some(amb / scenes as f64),
            mean_fg: Some(fg / scenes as f64),
            mean_gap: if gaps.is_empty() {
                None
            } else {
                Some(gaps.iter().sum::<f64>() / gaps.len() as f64)
            },
            median_ms: median(&mut times),
            per_iter_ms: None,
        });
    }
    Ok(BenchReport { rows })
}

/// Measures solver wall time on a random `(m+1) x n` instance with costs in
/// `[0, 5]` and fixed-k supplies.
pub fn run_throughput(
    m: usize,
    n: usize,
    gamma: f64,
    iters: u32,
    repeats: usize,
    seed: u64,
) -> Result<BenchReport> {
    if repeats < 3 {
        return Err(Error::InvalidSpec("repeats must be >= 3".into()));
    }
    if n == 0 {
        return Err(Error::InvalidSpec("n must be >= 1".into()));
    }
    let mut rng = CounterRng::new(seed);
    let mut values = Matrix::zeros(m + 1, n);
    for i in 0..=m {
        for j in 0..n {
            values.set(i, j, rng.next_range(0.0, 5.0));
        }
    }
    let cost = crate::cost::CostMatrix::new(m, n, values)?;
    let k = if m == 0 { 0 } else { ((n - 1) / m).clamp(1, 10) as u64 };
    let mut counts = vec![k; m];
    counts.push(n as u64 - k * m as u64);
    let sd = crate::cost::SupplyDemand::from_counts(&counts, n)?;
    let cfg = SinkhornConfig { gamma, iters, ..SinkhornConfig::default() };
    cfg.validate()?;

    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let started = Instant::now();
        let plan = sinkhorn::solve(&cost, &sd, &cfg)?;
        times.push(started.elapsed().as_secs_f64() * 1e3);
        std::hint::black_box(&plan);
    }
    let med = median(&mut times);
    Ok(BenchReport {
        rows: vec![BenchRow {
            method: "sinkhorn".into(),
            r: None,
            k_mode: None,
            k: None,
            q: None,
            gamma,
            iters,
            scenes: repeats,
            mean_amb: None,
            mean_fg: None,
            mean_gap: None,
            median_ms: med,
            per_iter_ms: Some(med / iters as f64),
        }],
    })
}
