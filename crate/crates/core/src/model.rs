//! Drive parameters, the rotating-field Hamiltonian and its instantaneous
//! spectral data.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};

/// Default ratio used to operationalize "much greater than" in the
/// adiabaticity check.
pub const DEFAULT_ADIABATIC_THRESHOLD: f64 = 10.0;

/// Physical knobs of the rotating drive.
///
/// All three values are angular frequencies in reciprocal time units.
/// `omega_rot` is signed; its sign is the rotation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams<T> {
    delta: T,
    omega_rabi: T,
    omega_rot: T,
}

impl<T: Real> DriveParams<T> {
    /// Validates `delta > 0`, `omega_rabi >= 0` and finiteness of all three.
    pub fn new(delta: T, omega_rabi: T, omega_rot: T) -> Result<Self> {
        let check_finite = |name, v: T| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v.to_f64_lossy(),
                    reason: "must be finite",
                })
            }
        };
        check_finite("delta", delta)?;
        check_finite("omega_rabi", omega_rabi)?;
        check_finite("omega_rot", omega_rot)?;
        if delta <= T::zero() {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta.to_f64_lossy(),
                reason: "must be positive",
            });
        }
        if omega_rabi < T::zero() {
            return Err(Error::InvalidParameter {
                name: "omega_rabi",
                value: omega_rabi.to_f64_lossy(),
                reason: "must be non-negative",
            });
        }
        Ok(Self {
            delta,
            omega_rabi,
            omega_rot,
        })
    }

    /// Parameters whose mixing angle is `theta` at fixed `delta`
    /// (`omega_rabi = delta * tan(theta)`), with `theta` in `[0, π/2)`.
    pub fn from_mixing_angle(delta: T, theta: T, omega_rot: T) -> Result<Self> {
        if !(theta >= T::zero() && theta < T::FRAC_PI_2()) {
            return Err(Error::Domain {
                name: "theta",
                value: theta.to_f64_lossy(),
                domain: "[0, pi/2)",
            });
        }
        Self::new(delta, delta * theta.tan(), omega_rot)
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn omega_rabi(&self) -> T {
        self.omega_rabi
    }

    pub fn omega_rot(&self) -> T {
        self.omega_rot
    }

    /// Same drive rotating the opposite way.
    pub fn reversed(&self) -> Self {
        Self {
            omega_rot: -self.omega_rot,
            ..*self
        }
    }

    /// Same static field and amplitude with a different rotation rate.
    pub fn with_omega_rot(&self, omega_rot: T) -> Result<Self> {
        Self::new(self.delta, self.omega_rabi, omega_rot)
    }

    pub fn frame(&self) -> EigenFrame<T> {
        eigenframe(self)
    }
}

/// Duration of one round of `loops` full turns: `T = 2πn/|ω_R|`.
///
/// Every module derives its round time from here.
pub fn round_duration<T: Real>(params: &DriveParams<T>, loops: T) -> Result<T> {
    if !(loops.is_finite() && loops > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "loops",
            value: loops.to_f64_lossy(),
            reason: "must be finite and positive",
        });
    }
    if params.omega_rot() == T::zero() {
        return Err(Error::InvalidParameter {
            name: "omega_rot",
            value: 0.0,
            reason: "must be non-zero for a finite round duration",
        });
    }
    Ok(T::TAU() * loops / params.omega_rot().abs())
}

/// Spectral quantities derived from one drive configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame<T> {
    /// Signed rotation rate the frame was built for.
    pub omega_rot: T,
    /// Instantaneous splitting `ω = √(Δ² + Ω_R²)`.
    pub omega: T,
    /// Mixing angle `θ = arctan(Ω_R/Δ)` in `[0, π/2)`.
    pub theta: T,
    /// Expansion parameter `λ = ω_R sinθ / (2ω)`.
    pub lambda: T,
    /// Mode splitting `Ω = √(ω² − 2ωω_R cosθ + ω_R²)`.
    pub big_omega: T,
    pub omega_plus: T,
    pub omega_minus: T,
    pub sigma_plus: T,
    pub sigma_minus: T,
}

impl<T: Real> EigenFrame<T> {
    /// Diagonal rate of `α` in the amplitude equations: `ω/2 + ω_R sin²(θ/2)`.
    pub fn alpha_rate(&self) -> T {
        let s = (self.theta / T::lit(2.0)).sin();
        self.omega / T::lit(2.0) + self.omega_rot * s * s
    }

    /// Diagonal rate of `β′`: `ω/2 − ω_R cos²(θ/2)`.
    pub fn beta_rate(&self) -> T {
        let c = (self.theta / T::lit(2.0)).cos();
        self.omega / T::lit(2.0) - self.omega_rot * c * c
    }

    /// Off-diagonal coupling `(ω_R/2) sinθ`.
    pub fn coupling(&self) -> T {
        self.omega_rot / T::lit(2.0) * self.theta.sin()
    }
}

pub fn eigenframe<T: Real>(params: &DriveParams<T>) -> EigenFrame<T> {
    let two = T::lit(2.0);
    let w_r = params.omega_rot();
    let omega = params.delta().hypot(params.omega_rabi());
    let theta = params.omega_rabi().atan2(params.delta());
    let cos_t = theta.cos();
    let radicand = omega * omega - two * omega * w_r * cos_t + w_r * w_r;
    let big_omega = radicand.max(T::zero()).sqrt();
    let omega_plus = (-w_r + big_omega) / two;
    let omega_minus = (-w_r - big_omega) / two;
    EigenFrame {
        omega_rot: w_r,
        omega,
        theta,
        lambda: w_r * theta.sin() / (two * omega),
        big_omega,
        omega_plus,
        omega_minus,
        sigma_plus: w_r * (T::one() + cos_t) + two * omega_plus,
        sigma_minus: w_r * (T::one() - cos_t) + two * omega_plus,
    }
}

/// 2×2 complex operator in the `{|0⟩, |1⟩}` basis, row-major.
pub type Operator<T> = [[Complex<T>; 2]; 2];

/// `H(t) = ½(Δσ_z + Ω_R σ_x cos ω_R t + Ω_R σ_y sin ω_R t)`.
pub fn hamiltonian<T: Real>(params: &DriveParams<T>, t: T) -> Operator<T> {
    let half = T::lit(0.5);
    let d = params.delta() * half;
    let off = cis(-params.omega_rot() * t) * (params.omega_rabi() * half);
    [
        [Complex::new(d, T::zero()), off],
        [off.conj(), Complex::new(-d, T::zero())],
    ]
}

/// Applies a 2×2 operator to a spinor.
pub fn apply<T: Real>(op: &Operator<T>, psi: &LabSpinor<T>) -> LabSpinor<T> {
    LabSpinor {
        c0: op[0][0] * psi.c0 + op[0][1] * psi.c1,
        c1: op[1][0] * psi.c0 + op[1][1] * psi.c1,
    }
}

/// State vector in the fixed `{|0⟩, |1⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabSpinor<T> {
    pub c0: Complex<T>,
    pub c1: Complex<T>,
}

impl<T: Real> LabSpinor<T> {
    pub fn new(c0: Complex<T>, c1: Complex<T>) -> Self {
        Self { c0, c1 }
    }

    pub fn basis0() -> Self {
        Self::new(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    pub fn basis1() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn norm_sqr(&self) -> T {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        Self::new(self.c0 * k, self.c1 * k)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.c0 + other.c0, self.c1 + other.c1)
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Self) -> T {
        ((self.c0 - other.c0).norm_sqr() + (self.c1 - other.c1).norm_sqr()).sqrt()
    }
}

/// Instantaneous eigenstates `(|e(t)⟩, |g(t)⟩)` with eigenvalues `±ω/2`.
///
/// The azimuthal phase convention is fixed: `|e⟩` carries `e^{iω_R t}` on
/// `|1⟩`, `|g⟩` carries `e^{−iω_R t}` on `|0⟩`.
pub fn eigenstates<T: Real>(params: &DriveParams<T>, t: T) -> (LabSpinor<T>, LabSpinor<T>) {
    let theta = params.omega_rabi().atan2(params.delta());
    let half = theta / T::lit(2.0);
    let (s, c) = half.sin_cos();
    let phase = cis(params.omega_rot() * t);
    let excited = LabSpinor::new(Complex::new(c, T::zero()), phase * s);
    let ground = LabSpinor::new(phase.conj() * s, Complex::new(-c, T::zero()));
    (excited, ground)
}

/// Solid angle `Θ = 2π(1 − cosθ)` enclosed by one loop of the field.
pub fn solid_angle<T: Real>(theta: T) -> Result<T> {
    if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
        return Err(Error::Domain {
            name: "theta",
            value: theta.to_f64_lossy(),
            domain: "[0, pi/2]",
        });
    }
    Ok(T::TAU() * (T::one() - theta.cos()))
}

/// Inverse of [`solid_angle`]: `θ = arccos(1 − Θ/2π)`.
pub fn mixing_angle_for_solid_angle<T: Real>(solid: T) -> Result<T> {
    if !(solid >= T::zero() && solid <= T::TAU()) {
        return Err(Error::Domain {
            name: "solid_angle",
            value: solid.to_f64_lossy(),
            domain: "[0, 2pi]",
        });
    }
    Ok((T::one() - solid / T::TAU()).acos())
}

/// Both sides of the two adiabatic conditions and their ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticMargins<T> {
    /// `ω/2 + ω_R sin²(θ/2)`
    pub lhs1: T,
    /// `(ω_R/2) sinθ`
    pub rhs1: T,
    /// `ω/2 − ω_R cos²(θ/2)`
    pub lhs2: T,
    /// `(ω_R/2) sinθ`
    pub rhs2: T,
    /// `lhs1/|rhs1|`, `+∞` when the coupling vanishes.
    pub ratio1: T,
    pub ratio2: T,
    pub passed: bool,
}

pub fn check_adiabatic<T: Real>(frame: &EigenFrame<T>, threshold: T) -> Result<AdiabaticMargins<T>> {
    if !(threshold > T::one()) {
        return Err(Error::Domain {
            name: "threshold",
            value: threshold.to_f64_lossy(),
            domain: "(1, inf)",
        });
    }
    let lhs1 = frame.alpha_rate();
    let lhs2 = frame.beta_rate();
    let rhs = frame.coupling();
    let ratio = |lhs: T| {
        if rhs == T::zero() {
            T::infinity()
        } else {
            lhs / rhs.abs()
        }
    };
    let (ratio1, ratio2) = (ratio(lhs1), ratio(lhs2));
    Ok(AdiabaticMargins {
        lhs1,
        rhs1: rhs,
        lhs2,
        rhs2: rhs,
        ratio1,
        ratio2,
        passed: ratio1 >= threshold && ratio2 >= threshold,
    })
}
