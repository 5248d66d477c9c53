//! Scalar abstraction shared by every physics routine.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the propagators are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy widening used for error reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i x}`.
#[inline]
pub fn cis<T: Real>(x: T) -> Complex<T> {
    Complex::new(x.cos(), x.sin())
}

/// Imaginary unit.
#[inline]
pub fn i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Principal value of an angle in (−π, π].
pub fn wrap_phase<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut r = x - two_pi * (x / two_pi).round();
    if r <= -T::PI() {
        r = r + two_pi;
    } else if r > T::PI() {
        r = r - two_pi;
    }
    r
}

/// Adds the multiple of 2π to `raw` that brings it closest to `reference`.
pub fn unwrap_near<T: Real>(raw: T, reference: T) -> T {
    reference + wrap_phase(raw - reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_lands_in_half_open_interval() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((wrap_phase(0.25_f64) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn unwrap_picks_nearest_branch() {
        let x = unwrap_near(0.1_f64, 4.0 * PI);
        assert!((x - (4.0 * PI + 0.1)).abs() < 1e-12);
        let y = unwrap_near(-3.0_f64, 7.0);
        assert!((y - (4.0 * PI - 3.0)).abs() < 1e-12);
    }
}
