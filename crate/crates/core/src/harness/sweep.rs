use rayon::prelude::*;

use super::HarnessError;
use crate::echo::{run_echo, EchoConfig, Propagator};
use crate::model::{eigenframe, mixing_angle_for_solid_angle, DriveParams};
use crate::perturbation::delta_phi_second_order;
use crate::scalar::{unwrap_near, wrap_phase};

/// Grid over solid angle; bounds are fractions of the hemisphere `2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub delta: f64,
    pub omega_rot: f64,
    pub loops: f64,
    pub points: usize,
    pub solid_min_frac: f64,
    pub solid_max_frac: f64,
    pub propagator: Propagator<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        loop_series_spec(50.0, 1.0)
    }
}

/// Rotation rate tied to the loop count, `ω_R = 4n + 1`.
pub fn omega_rot_for_loops(loops: f64) -> f64 {
    4.0 * loops + 1.0
}

/// Exact-propagator sweep over `[0.02π, 1.98π]` with 101 points and
/// `ω_R = 4n + 1`.
pub fn loop_series_spec(delta: f64, loops: f64) -> SweepSpec {
    SweepSpec {
        delta,
        omega_rot: omega_rot_for_loops(loops),
        loops,
        points: 101,
        solid_min_frac: 0.01,
        solid_max_frac: 0.99,
        propagator: Propagator::Exact,
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.points < 2 {
            return Err(HarnessError::Argument(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        let (lo, hi) = (self.solid_min_frac, self.solid_max_frac);
        if !(lo > 0.0 && lo < hi && hi < 1.0) {
            return Err(HarnessError::Argument(format!(
                "solid-angle bounds must satisfy 0 < min < max < 1 (fractions of 2pi), got {lo}, {hi}"
            )));
        }
        if !(self.loops.is_finite() && self.loops > 0.0) {
            return Err(HarnessError::Argument(format!("loops must be positive, got {}", self.loops)));
        }
        DriveParams::new(self.delta, 0.0, self.omega_rot)?;
        if self.omega_rot == 0.0 {
            return Err(HarnessError::Argument("omega-rot must be non-zero".into()));
        }
        Ok(())
    }

    /// Solid angles of the grid, ascending.
    pub fn solid_angles(&self) -> Vec<f64> {
        let two_pi = std::f64::consts::TAU;
        let (lo, hi) = (self.solid_min_frac * two_pi, self.solid_max_frac * two_pi);
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| lo + (hi - lo) * k as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub solid_angle: f64,
    pub omega_rabi: f64,
    pub lambda: f64,
    pub phi_b: f64,
    pub phi_na: f64,
    pub delta_phi_exact: f64,
    pub delta_phi_2nd: f64,
    pub norm_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub loops: f64,
    pub omega_rot: f64,
    pub rms_exact: f64,
    pub rms_2nd: f64,
    pub max_abs_delta_phi: f64,
    pub rows: Vec<SweepRow>,
}

pub fn rms(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

struct RawRow {
    theta: f64,
    solid_angle: f64,
    omega_rabi: f64,
    lambda: f64,
    phi_b: f64,
    principal: f64,
    delta_phi_2nd: f64,
    norm_error: f64,
}

fn evaluate_row(spec: &SweepSpec, solid: f64) -> Result<RawRow, HarnessError> {
    let theta = mixing_angle_for_solid_angle(solid)?;
    let omega_rabi = spec.delta * theta.tan();
    let wrap = |source| HarnessError::Row {
        theta,
        omega_rabi,
        source,
    };
    let params = DriveParams::new(spec.delta, omega_rabi, spec.omega_rot).map_err(wrap)?;
    let config = EchoConfig::new(params, spec.loops, spec.propagator).map_err(wrap)?;
    let echo = run_echo(&config).map_err(wrap)?;
    let second = delta_phi_second_order(&params, spec.loops).map_err(wrap)?;
    Ok(RawRow {
        theta,
        solid_angle: solid,
        omega_rabi,
        lambda: eigenframe(&params).lambda,
        phi_b: echo.phi_b,
        principal: echo.phi_na_principal,
        delta_phi_2nd: second,
        norm_error: echo.norm_error,
    })
}

/// Runs the echo across the solid-angle grid.
///
/// Rows are evaluated in parallel and assembled in grid order. The measured
/// phase is unwrapped by continuity from the previous row, starting from
/// `θ = 0` where both phases vanish.
pub fn sweep_theta(spec: &SweepSpec) -> Result<SweepSummary, HarnessError> {
    spec.validate()?;
    let raw: Vec<RawRow> = spec
        .solid_angles()
        .into_par_iter()
        .map(|solid| evaluate_row(spec, solid))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(raw.len());
    let (mut prev_na, mut prev_b) = (0.0, 0.0);
    for r in raw {
        let phi_na = unwrap_near(r.principal, prev_na + (r.phi_b - prev_b));
        rows.push(SweepRow {
            theta: r.theta,
            solid_angle: r.solid_angle,
            omega_rabi: r.omega_rabi,
            lambda: r.lambda,
            phi_b: r.phi_b,
            phi_na,
            delta_phi_exact: wrap_phase(phi_na - r.phi_b),
            delta_phi_2nd: r.delta_phi_2nd,
            norm_error: r.norm_error,
        });
        prev_na = phi_na;
        prev_b = r.phi_b;
    }

    Ok(SweepSummary {
        loops: spec.loops,
        omega_rot: spec.omega_rot,
        rms_exact: rms(rows.iter().map(|r| r.delta_phi_exact)),
        rms_2nd: rms(rows.iter().map(|r| r.delta_phi_2nd)),
        max_abs_delta_phi: rows
            .iter()
            .map(|r| r.delta_phi_exact.abs())
            .fold(0.0, f64::max),
        rows,
    })
}

/// One sweep per loop count, each with `ω_R = 4n + 1` and otherwise the
/// settings of `base`.
pub fn sweep_loops(base: &SweepSpec, loops: &[f64]) -> Result<Vec<SweepSummary>, HarnessError> {
    loops
        .iter()
        .map(|&n| {
            let spec = SweepSpec {
                loops: n,
                omega_rot: omega_rot_for_loops(n),
                ..*base
            };
            sweep_theta(&spec).map_err(|e| HarnessError::Loops {
                loops: n,
                source: Box::new(e),
            })
        })
        .collect()
}
