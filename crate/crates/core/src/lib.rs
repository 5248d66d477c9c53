//! Geometric phase of a two-level system in a rotating field, measured with a
//! spin echo.
//!
//! The drive `H(t) = ½(Δσ_z + Ω_R σ_x cos ω_R t + Ω_R σ_y sin ω_R t)` is
//! propagated in its instantaneous eigenbasis by four independent routes:
//! the exact closed-form solution ([`exact`]), the adiabatic approximation,
//! RK4 on the amplitude equations and RK4 on the lab-frame Schrödinger
//! equation ([`ode`]). [`echo`] runs the two-round echo sequence and reads out
//! `arg(α β*)`; [`perturbation`] evaluates the second-order analytic estimate
//! of the deviation from the Berry phase; [`harness`] sweeps, validates and
//! writes CSV.
//!
//! The physics is generic over the scalar type through [`Real`]; the aliases
//! below fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod echo;
pub mod error;
pub mod exact;
pub mod harness;
pub mod model;
pub mod ode;
pub mod perturbation;
pub mod scalar;

pub use echo::{berry_phase, measured_phase, pi_pulse, run_echo, PropagatorKind};
pub use error::{Error, Result};
pub use exact::{mode_coefficients, propagate_adiabatic, propagate_exact};
pub use model::{check_adiabatic, eigenframe, eigenstates, hamiltonian, round_duration, solid_angle};
pub use ode::{from_eigenbasis, propagate_lab, propagate_ode, to_eigenbasis};
pub use perturbation::{delta_phi_second_order, second_order_terms};
pub use scalar::Real;

pub type DriveParams = model::DriveParams<f64>;
pub type EigenFrame = model::EigenFrame<f64>;
pub type LabSpinor = model::LabSpinor<f64>;
pub type AdiabaticMargins = model::AdiabaticMargins<f64>;
pub type Amplitudes = exact::Amplitudes<f64>;
pub type ModeCoefficients = exact::ModeCoefficients<f64>;
pub type IntegratorConfig = ode::IntegratorConfig<f64>;
pub type Propagator = echo::Propagator<f64>;
pub type EchoConfig = echo::EchoConfig<f64>;
pub type EchoResult = echo::EchoResult<f64>;
pub type SecondOrderTerms = perturbation::SecondOrderTerms<f64>;
