//! Crate-wide error type.
//!
//! Display strings lead with a stable UPPER_SNAKE token so callers (and the
//! CLI) can surface the failure class without matching on variants.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A scene with zero ground truths reached an operation that needs at
    /// least one supplier row; callers must short-circuit to all-background.
    #[error("EMPTY_SCENE: scene has no ground truths")]
    EmptyScene,

    /// Foreground supplies exceed the anchor count even after clamping.
    #[error("SUPPLY_OVERFLOW: foreground supply {supply} does not fit {anchors} anchors")]
    SupplyOverflow { supply: u64, anchors: usize },

    /// A linear-mode Sinkhorn denominator collapsed to exactly zero.
    #[error(
        "NUMERIC_UNDERFLOW: zero denominator in linear-mode update at iteration {iteration}; \
         retry with log_domain=true"
    )]
    NumericUnderflow { iteration: u32 },

    /// NaN or infinity in the cost matrix.
    #[error("NONFINITE_INPUT: cost matrix contains NaN or infinite entries")]
    NonfiniteInput,

    /// Total supply does not match total demand.
    #[error("UNBALANCED: total supply {supply_total} != total demand {demand_total}")]
    Unbalanced { supply_total: f64, demand_total: f64 },

    /// Instance exceeds a solver's size limit.
    #[error("TOO_LARGE: instance size {n} exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },

    /// The exact oracle requires integer-valued supplies.
    #[error("FRACTIONAL_SUPPLY: supply[{index}] = {value} is not an integer")]
    FractionalSupply { index: usize, value: f64 },

    /// A generator spec or configuration field is out of range.
    #[error("INVALID_SPEC: {0}")]
    InvalidSpec(String),

    /// Matrix / vector dimensions disagree.
    #[error("SHAPE_MISMATCH: {0}")]
    ShapeMismatch(String),

    /// A data file violates its schema beyond JSON syntax (bad ranges, counts).
    #[error("INVALID_FILE: {0}")]
    InvalidFile(String),

    /// Unsupported schema_version in a data file.
    #[error("SCHEMA_VERSION: file has schema_version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("IO: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
