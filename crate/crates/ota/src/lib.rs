//! Optimal transport label assignment.
//!
//! Builds detection-style cost matrices between ground-truth objects and
//! anchors, estimates per-object positive-label supply, solves the resulting
//! transportation problem with entropic-regularized Sinkhorn-Knopp
//! iteration, decodes hard positive/negative labels, and verifies results
//! against an exact integral transportation oracle on small instances.
//!
//! The pipeline, end to end:
//!
//! 1. [`cost::build_cost`] — per-pair focal classification + IoU regression
//!    costs, a background row, and the additive center-prior penalty.
//! 2. [`cost::estimate_supply`] — fixed-k or dynamic-k positive supply per
//!    ground truth; background supplies the remainder.
//! 3. [`sinkhorn::solve`] — the regularized transport plan.
//! 4. [`assign::decode`] — hard labels plus ambiguity statistics.
//!
//! [`oracle`] provides the exact optimum for verification, [`sim`] generates
//! deterministic synthetic scenes, [`bench`] runs the experiment sweeps, and
//! [`io`] pins the JSON file formats.

pub mod assign;
pub mod bench;
pub mod config;
pub mod cost;
pub mod error;
pub mod io;
pub mod losses;
pub mod matrix;
pub mod oracle;
pub mod rng;
pub mod sim;
pub mod sinkhorn;
pub mod types;

pub use assign::{decode, run_ota, run_ota_full, AssignmentResult, OtaRun};
pub use config::RunConfig;
pub use cost::{
    build_cost, center_prior_mask, estimate_supply, CenterPriorConfig, CostMatrix, SupplyConfig,
    SupplyDemand, SupplyMode,
};
pub use error::{Error, Result};
pub use losses::{focal_cls_cost, reg_cost, LossConfig, RegMode};
pub use oracle::{enumerate_exact, solve_exact, ExactSolution};
pub use sim::{generate, generate_batch, SceneSpec};
pub use sinkhorn::{marginal_residual, objective, solve, SinkhornConfig, TransportPlan};
pub use types::{center_distance, giou, iou, Anchor, BoxXYXY, GroundTruth, Predictions, Scene};
