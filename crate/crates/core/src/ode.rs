//! Fixed-step RK4 oracles: one on the eigenbasis amplitude equations, one on
//! the lab-frame Schrödinger equation, plus the change of basis between them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::exact::{amplitude_rhs, Amplitudes};
use crate::model::{apply, eigenframe, eigenstates, hamiltonian, DriveParams, LabSpinor};
use crate::scalar::{cis, i, Real};

/// Largest allowed `step * max frequency`.
pub const RESOLUTION_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub step: T,
    pub max_steps: u64,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            step: T::lit(1e-3),
            max_steps: 50_000_000,
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn with_step(step: T) -> Self {
        Self {
            step,
            ..Self::default()
        }
    }

    /// Rejects steps that under-resolve the fastest frequency of `params`.
    pub fn check_resolution(&self, params: &DriveParams<T>) -> Result<()> {
        if !(self.step.is_finite() && self.step > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "step",
                value: self.step.to_f64_lossy(),
                reason: "must be finite and positive",
            });
        }
        let f = eigenframe(params);
        let fastest = f
            .omega
            .max(f.omega_plus.abs())
            .max(f.omega_minus.abs())
            .max(params.omega_rot().abs());
        let product = self.step * fastest;
        if product > T::lit(RESOLUTION_LIMIT) {
            return Err(Error::StepTooLarge {
                step: self.step.to_f64_lossy(),
                product: product.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

type State<T> = [Complex<T>; 2];

/// Classical RK4 from `t0` to `t1`; the last step is shortened to land on `t1`.
fn rk4<T, F>(y0: State<T>, t0: T, t1: T, cfg: &IntegratorConfig<T>, f: F) -> Result<State<T>>
where
    T: Real,
    F: Fn(T, &State<T>) -> State<T>,
{
    let span = t1 - t0;
    if !(span.is_finite() && span >= T::zero()) {
        return Err(Error::Domain {
            name: "duration",
            value: span.to_f64_lossy(),
            domain: "finite and >= 0",
        });
    }
    let h = cfg.step;
    let full = (span / h).floor();
    let rem = span - full * h;
    let partial = rem > h * T::lit(1e-9);
    let full_steps = full.to_u64().unwrap_or(u64::MAX);
    let needed = full_steps.saturating_add(partial as u64);
    if needed > cfg.max_steps {
        return Err(Error::StepBudget {
            needed,
            max_steps: cfg.max_steps,
        });
    }

    let two = T::lit(2.0);
    let sixth = T::one() / T::lit(6.0);
    let step = |y: &State<T>, t: T, h: T| -> State<T> {
        let hc = Complex::new(h, T::zero());
        let half = h / two;
        let k1 = f(t, y);
        let y2 = [y[0] + k1[0] * (h / two), y[1] + k1[1] * (h / two)];
        let k2 = f(t + half, &y2);
        let y3 = [y[0] + k2[0] * (h / two), y[1] + k2[1] * (h / two)];
        let k3 = f(t + half, &y3);
        let y4 = [y[0] + k3[0] * hc, y[1] + k3[1] * hc];
        let k4 = f(t + h, &y4);
        let mut out = *y;
        for n in 0..2 {
            out[n] = y[n] + (k1[n] + k2[n] * two + k3[n] * two + k4[n]) * (h * sixth);
        }
        out
    };

    let mut y = y0;
    for k in 0..full_steps {
        let t = t0 + h * T::from_u64(k).expect("step index fits scalar");
        y = step(&y, t, h);
    }
    if partial {
        let t = t0 + full * h;
        y = step(&y, t, t1 - t);
    }
    Ok(y)
}

/// RK4 on the amplitude equations over `[0, t]`.
pub fn propagate_ode<T: Real>(
    params: &DriveParams<T>,
    amps0: &Amplitudes<T>,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<Amplitudes<T>> {
    propagate_ode_between(params, amps0, T::zero(), t, cfg)
}

/// RK4 on the amplitude equations from `t0` to `t1`.
///
/// The integration variable is `(α, β′)` whose equations have constant
/// coefficients; `β` is reconstructed only at the end.
pub fn propagate_ode_between<T: Real>(
    params: &DriveParams<T>,
    amps: &Amplitudes<T>,
    t0: T,
    t1: T,
    cfg: &IntegratorConfig<T>,
) -> Result<Amplitudes<T>> {
    cfg.check_resolution(params)?;
    let frame = eigenframe(params);
    let w_r = params.omega_rot();
    let y0 = [amps.alpha, amps.beta * cis(-w_r * t0)];
    let y = rk4(y0, T::zero(), t1 - t0, cfg, |_, y| {
        let (da, db) = amplitude_rhs(&frame, y[0], y[1]);
        [da, db]
    })?;
    Ok(Amplitudes::new(y[0], y[1] * cis(w_r * t1)))
}

/// RK4 on `i dψ/dt = H(t) ψ` over `[0, t]`.
pub fn propagate_lab<T: Real>(
    params: &DriveParams<T>,
    psi0: &LabSpinor<T>,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<LabSpinor<T>> {
    propagate_lab_between(params, psi0, T::zero(), t, cfg)
}

pub fn propagate_lab_between<T: Real>(
    params: &DriveParams<T>,
    psi: &LabSpinor<T>,
    t0: T,
    t1: T,
    cfg: &IntegratorConfig<T>,
) -> Result<LabSpinor<T>> {
    cfg.check_resolution(params)?;
    let minus_i = -i::<T>();
    let y = rk4([psi.c0, psi.c1], t0, t1, cfg, |t, y| {
        let h = hamiltonian(params, t);
        let hy = apply(&h, &LabSpinor::new(y[0], y[1]));
        [minus_i * hy.c0, minus_i * hy.c1]
    })?;
    Ok(LabSpinor::new(y[0], y[1]))
}

/// `α = ⟨e(t)|ψ⟩`, `β = ⟨g(t)|ψ⟩`.
pub fn to_eigenbasis<T: Real>(params: &DriveParams<T>, t: T, psi: &LabSpinor<T>) -> Amplitudes<T> {
    let (e, g) = eigenstates(params, t);
    Amplitudes::new(e.inner(psi), g.inner(psi))
}

/// `|ψ⟩ = α|e(t)⟩ + β|g(t)⟩`.
pub fn from_eigenbasis<T: Real>(params: &DriveParams<T>, t: T, amps: &Amplitudes<T>) -> LabSpinor<T> {
    let (e, g) = eigenstates(params, t);
    e.scale(amps.alpha).add(&g.scale(amps.beta))
}
