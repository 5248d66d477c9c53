//! Second-order analytic estimate of the echo phase deviation:
//! `Δφ ≈ λ² Σ_j c_j sin(φ′_j − φ_B)` with twelve fixed junction phases.

use crate::error::Result;
use crate::echo::berry_phase;
use crate::model::{eigenframe, round_duration, DriveParams};
use crate::scalar::Real;

/// Integer weights `c_j` of the twelve sine terms, in order.
pub const WEIGHTS: [u32; 12] = [1, 4, 2, 2, 2, 1, 2, 1, 2, 2, 4, 4];

/// Ingredients of the second-order estimate for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderTerms<T> {
    /// `φ′_1 … φ′_12`.
    pub phases: [T; 12],
    pub weights: [u32; 12],
    pub lambda: T,
    pub phi_b: T,
}

impl<T: Real> SecondOrderTerms<T> {
    /// Terms for a round of explicit duration `t`, with `φ_B = 2ω_R t (1 − cosθ)`.
    pub fn at_duration(params: &DriveParams<T>, t: T) -> Self {
        let frame = eigenframe(params);
        let w = frame.omega;
        let r = params.omega_rot();
        let cos_t = frame.theta.cos();
        let cos_2t = (T::lit(2.0) * frame.theta).cos();
        let pi = T::PI();
        let (one, two, four, eight) = (T::one(), T::lit(2.0), T::lit(4.0), T::lit(8.0));

        // one line per φ′_j, kept in the published arrangement
        let phases = [
            pi - two * t * r * cos_t,
            -t * r,
            t * r * (-one + two * cos_t),
            -(t * (r * r + eight * r * w + four * w * w - four * r * w * cos_t - r * r * cos_2t)) / (four * w),
            pi + t * (-(r + two * w).powi(2) + four * r * w * cos_t + r * r * cos_2t) / (four * w),
            pi + t * ((r - two * w).powi(2) - r * r * cos_2t) / (two * w),
            t * (r * r - two * r * w + four * w * w - r * r * cos_2t) / (two * w),
            pi + t * (r * r + four * w * w - r * r * cos_2t) / (two * w),
            pi + t * ((r - two * w).powi(2) - four * r * w * cos_t - r * r * cos_2t) / (four * w),
            t * (r * r + four * w * w - four * r * w * cos_t - r * r * cos_2t) / (four * w),
            t * (r * r - eight * r * w + four * w * w + four * r * w * cos_t - r * r * cos_2t) / (four * w),
            pi + t * ((r - two * w).powi(2) + four * r * w * cos_t - r * r * cos_2t) / (four * w),
        ];
        Self {
            phases,
            weights: WEIGHTS,
            lambda: r * frame.theta.sin() / (two * w),
            phi_b: two * r * t * (one - cos_t),
        }
    }

    /// `λ² Σ_j c_j sin(φ′_j − φ_B)`.
    pub fn delta_phi(&self) -> T {
        let sum = self
            .phases
            .iter()
            .zip(self.weights)
            .fold(T::zero(), |acc, (&phase, c)| {
                acc + T::lit(f64::from(c)) * (phase - self.phi_b).sin()
            });
        self.lambda * self.lambda * sum
    }
}

/// Terms for `loops` turns per round, `T = 2πn/|ω_R|`.
///
/// `φ_B` is the same unwrapped value the echo protocol compares against.
pub fn second_order_terms<T: Real>(params: &DriveParams<T>, loops: T) -> Result<SecondOrderTerms<T>> {
    let t = round_duration(params, loops)?;
    let mut terms = SecondOrderTerms::at_duration(params, t);
    terms.phi_b = berry_phase(params, loops)?;
    Ok(terms)
}

pub fn delta_phi_second_order<T: Real>(params: &DriveParams<T>, loops: T) -> Result<T> {
    Ok(second_order_terms(params, loops)?.delta_phi())
}
