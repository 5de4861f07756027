use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("morphisms are not composable: source {source_obj} of the left factor differs from target {target_obj} of the right factor")]
    NonComposable {
        source_obj: String,
        target_obj: String,
    },

    #[error("measures live on different fibers ({left} vs {right})")]
    FiberMismatch { left: String, right: String },

    #[error("ill-formed action: {0}")]
    IllFormedAction(String),

    #[error("measure at object {object} charges {morphism}, which lies outside its fiber")]
    FiberViolation { object: String, morphism: String },

    #[error("transition measure at {object} has total mass {mass}, expected 1")]
    MassDeficit { object: String, mass: String },

    #[error("function value at {state} is not positive ({value})")]
    NonPositiveValue { state: String, value: String },

    #[error("harmonicity residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("fiber has {size} states, the dense path supports at most {max}")]
    FiberTooLarge { size: usize, max: usize },

    #[error("operators {left} and {right} do not commute at {state}")]
    NonCommutingFamily {
        left: usize,
        right: usize,
        state: String,
    },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
