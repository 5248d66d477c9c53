use thiserror::Error;

/// Failures raised by the physics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{name} = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("degenerate mode splitting: Omega = {big_omega}")]
    DegenerateMode { big_omega: f64 },
    #[error("step {step} too coarse: step * max frequency = {product} exceeds 0.1")]
    StepTooLarge { step: f64, product: f64 },
    #[error("integration needs {needed} steps but the budget is {max_steps}")]
    StepBudget { needed: u64, max_steps: u64 },
    #[error("phase undefined: amplitude magnitude {magnitude} below 1e-12")]
    UndefinedPhase { magnitude: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
