//! Sweeps, cross-validation and time traces on `f64`, plus their CSV form.

mod csv;
mod sweep;
mod trace;
mod validate;

pub use self::csv::{format_number, write_sweep_csv, write_trace_csv, SWEEP_HEADER, TRACE_HEADER};
pub use self::sweep::{
    loop_series_spec, omega_rot_for_loops, rms, sweep_loops, sweep_theta, SweepRow, SweepSpec,
    SweepSummary,
};
pub use self::trace::{trace, TraceRow};
pub use self::validate::{sample_cases, validate, CheckSummary, ValidationCase, ValidationReport};

use thiserror::Error;

use crate::error::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("row failed at theta = {theta}, omega_rabi = {omega_rabi}: {source}")]
    Row {
        theta: f64,
        omega_rabi: f64,
        #[source]
        source: Error,
    },
    #[error("sweep with loops = {loops} failed: {source}")]
    Loops {
        loops: f64,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Physics(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
