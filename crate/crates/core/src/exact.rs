//! Closed-form propagation of the eigenbasis amplitudes: the exact Rabi
//! solution and the adiabatic approximation.
//!
//! Internally the equations are integrated for `(α, β′)` with
//! `β′ = β e^{−iω_R t}`, where the coefficients are constant. Every public
//! function takes and returns the physical pair `(α, β)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{eigenframe, DriveParams, EigenFrame};
use crate::scalar::{cis, i, Real};

/// Amplitudes on the instantaneous eigenstates `|e(t)⟩`, `|g(t)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
}

impl<T: Real> Amplitudes<T> {
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Self {
        Self { alpha, beta }
    }

    /// Equal real weights `(1/√2, 1/√2)`.
    pub fn balanced() -> Self {
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        Self::new(h, h)
    }

    pub fn excited() -> Self {
        Self::new(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    pub fn ground() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn norm_sqr(&self) -> T {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// Largest component-wise distance to `other`.
    pub fn max_deviation(&self, other: &Self) -> T {
        (self.alpha - other.alpha)
            .norm()
            .max((self.beta - other.beta).norm())
    }
}

/// Mode weights of the exact solution
/// `α = A₁e^{iω₊t} + A₂e^{iω₋t}`, `β′ = B₁e^{iω₊t} + B₂e^{iω₋t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients<T> {
    pub a1: Complex<T>,
    pub a2: Complex<T>,
    pub b1: Complex<T>,
    pub b2: Complex<T>,
}

impl<T: Real> ModeCoefficients<T> {
    /// `(α(t), β′(t))` at time `t` after the reference instant.
    fn evaluate(&self, frame: &EigenFrame<T>, t: T) -> (Complex<T>, Complex<T>) {
        let ep = cis(frame.omega_plus * t);
        let em = cis(frame.omega_minus * t);
        (self.a1 * ep + self.a2 * em, self.b1 * ep + self.b2 * em)
    }
}

/// Mode weights fixed by `amps0 = (α(0), β(0))`, taking `β′(0) = β(0)`.
pub fn mode_coefficients<T: Real>(
    frame: &EigenFrame<T>,
    amps0: &Amplitudes<T>,
) -> Result<ModeCoefficients<T>> {
    if !(frame.big_omega > T::zero()) {
        return Err(Error::DegenerateMode {
            big_omega: frame.big_omega.to_f64_lossy(),
        });
    }
    let denom = T::lit(2.0) * frame.big_omega;
    let w = frame.omega;
    let k = frame.omega_rot * frame.theta.sin();
    let (a0, b0) = (amps0.alpha, amps0.beta);
    let coeffs = ModeCoefficients {
        a1: (b0 * k + a0 * (-w + frame.sigma_plus)) / denom,
        a2: (-b0 * k + a0 * (w + frame.sigma_minus)) / denom,
        b1: (b0 * (w + frame.sigma_minus) + a0 * k) / denom,
        b2: (b0 * (-w + frame.sigma_plus) - a0 * k) / denom,
    };
    debug_assert!({
        let tol = T::lit(1e-9) * (T::one() + a0.norm() + b0.norm());
        (coeffs.a1 + coeffs.a2 - a0).norm() <= tol && (coeffs.b1 + coeffs.b2 - b0).norm() <= tol
    });
    Ok(coeffs)
}

fn check_interval<T: Real>(t0: T, t1: T) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(Error::Domain {
            name: "duration",
            value: (t1 - t0).to_f64_lossy(),
            domain: "finite and >= 0",
        });
    }
    Ok(())
}

/// Exact propagation over `[0, t]`.
pub fn propagate_exact<T: Real>(
    params: &DriveParams<T>,
    amps0: &Amplitudes<T>,
    t: T,
) -> Result<Amplitudes<T>> {
    propagate_exact_between(params, amps0, T::zero(), t)
}

/// Exact propagation of amplitudes given at `t0` to `t1 >= t0`.
pub fn propagate_exact_between<T: Real>(
    params: &DriveParams<T>,
    amps: &Amplitudes<T>,
    t0: T,
    t1: T,
) -> Result<Amplitudes<T>> {
    check_interval(t0, t1)?;
    let frame = eigenframe(params);
    let w_r = params.omega_rot();
    let gauge0 = Amplitudes::new(amps.alpha, amps.beta * cis(-w_r * t0));
    let coeffs = mode_coefficients(&frame, &gauge0)?;
    let (alpha, beta_p) = coeffs.evaluate(&frame, t1 - t0);
    Ok(Amplitudes::new(alpha, beta_p * cis(w_r * t1)))
}

/// Adiabatic propagation over `[0, t]`: the coupling `(ω_R/2) sinθ` is
/// dropped and each amplitude only picks up a phase.
pub fn propagate_adiabatic<T: Real>(
    params: &DriveParams<T>,
    amps0: &Amplitudes<T>,
    t: T,
) -> Result<Amplitudes<T>> {
    propagate_adiabatic_between(params, amps0, T::zero(), t)
}

pub fn propagate_adiabatic_between<T: Real>(
    params: &DriveParams<T>,
    amps: &Amplitudes<T>,
    t0: T,
    t1: T,
) -> Result<Amplitudes<T>> {
    check_interval(t0, t1)?;
    let rate = eigenframe(params).alpha_rate();
    let dt = t1 - t0;
    Ok(Amplitudes::new(
        amps.alpha * cis(-rate * dt),
        amps.beta * cis(rate * dt),
    ))
}

/// Right-hand side of the amplitude equations for `(α, β′)`.
pub(crate) fn amplitude_rhs<T: Real>(
    frame: &EigenFrame<T>,
    alpha: Complex<T>,
    beta_p: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let k = frame.coupling();
    let j = i::<T>();
    (
        -j * alpha * frame.alpha_rate() + j * beta_p * k,
        j * beta_p * frame.beta_rate() + j * alpha * k,
    )
}
