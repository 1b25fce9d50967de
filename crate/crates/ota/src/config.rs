//! Bundled pipeline configuration with the published defaults.

use serde::{Deserialize, Serialize};

use crate::cost::{CenterPriorConfig, SupplyConfig, SupplyMode};
use crate::error::{Error, Result};
use crate::losses::{LossConfig, RegMode};
use crate::sinkhorn::SinkhornConfig;

/// Every pipeline tunable in one place. Defaults: r=5, q=20, alpha=1.5,
/// gamma=0.1, iters=50, penalty=1e5, focal 0.25/2.0, iou-log regression,
/// dynamic-k supply with k=10 as the fixed-k fallback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub r: u32,
    pub q: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub iters: u32,
    pub penalty: f64,
    pub focal_alpha: f64,
    pub focal_gamma: f64,
    pub reg_mode: RegMode,
    pub supply_mode: SupplyMode,
    pub k: u32,
    pub log_domain: bool,
    pub residual_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            r: 5,
            q: 20,
            alpha: 1.5,
            gamma: 0.1,
            iters: 50,
            penalty: 1e5,
            focal_alpha: 0.25,
            focal_gamma: 2.0,
            reg_mode: RegMode::IouLog,
            supply_mode: SupplyMode::DynamicK,
            k: 10,
            log_domain: false,
            residual_tol: 0.0,
        }
    }
}

impl RunConfig {
    /// Validates every field; error messages name the offending flag.
    pub fn validate(&self) -> Result<()> {
        self.loss().validate().map_err(rename("focal_alpha/focal_gamma"))?;
        self.center_prior().validate().map_err(rename("r/penalty"))?;
        self.supply().validate().map_err(rename("k/q"))?;
        self.sinkhorn().validate().map_err(rename("gamma/iters/residual_tol"))?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidSpec(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn loss(&self) -> LossConfig {
        LossConfig {
            focal_alpha: self.focal_alpha,
            focal_gamma: self.focal_gamma,
            iou_eps: 1e-6,
            reg_mode: self.reg_mode,
        }
    }

    pub fn center_prior(&self) -> CenterPriorConfig {
        CenterPriorConfig { r: self.r, penalty: self.penalty }
    }

    pub fn supply(&self) -> SupplyConfig {
        SupplyConfig { mode: self.supply_mode, k: self.k, q: self.q }
    }

    pub fn sinkhorn(&self) -> SinkhornConfig {
        SinkhornConfig {
            gamma: self.gamma,
            iters: self.iters,
            log_domain: self.log_domain,
            residual_tol: self.residual_tol,
        }
    }
}

fn rename(field: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidSpec(msg) => Error::InvalidSpec(format!("{field}: {msg}")),
        other => other,
    }
}
