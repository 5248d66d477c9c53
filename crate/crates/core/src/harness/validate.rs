use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::HarnessError;
use crate::exact::{mode_coefficients, propagate_exact, Amplitudes};
use crate::model::{eigenframe, round_duration, DriveParams};
use crate::ode::{from_eigenbasis, propagate_lab, propagate_ode, to_eigenbasis, IntegratorConfig};
use num_complex::Complex;

/// Smallest `ω_R/ω` drawn; the round time `2πn/ω_R` diverges at zero.
pub const MIN_ROTATION_RATIO: f64 = 0.05;
pub const MAX_ROTATION_RATIO: f64 = 2.0;
pub const LOOP_CHOICES: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const THETA_MARGIN: f64 = 0.05;

/// One random configuration: unit splitting `ω = 1`, propagated for `2T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationCase {
    pub params: DriveParams<f64>,
    pub loops: f64,
    pub duration: f64,
    pub amps0: Amplitudes<f64>,
}

/// Deterministic draws from ChaCha8 seeded with `seed`.
pub fn sample_cases(count: usize, seed: u64) -> Vec<ValidationCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let ratio = rng.gen_range(MIN_ROTATION_RATIO..=MAX_ROTATION_RATIO);
            let theta = rng.gen_range(THETA_MARGIN..=std::f64::consts::FRAC_PI_2 - THETA_MARGIN);
            let loops = LOOP_CHOICES[rng.gen_range(0..LOOP_CHOICES.len())];
            let mix = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
            let pa = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let pb = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let params = DriveParams::new(theta.cos(), theta.sin(), ratio)
                .expect("sampled parameters are valid");
            let duration = 2.0 * round_duration(&params, loops).expect("ratio > 0");
            ValidationCase {
                params,
                loops,
                duration,
                amps0: Amplitudes::new(Complex::from_polar(mix.cos(), pa), Complex::from_polar(mix.sin(), pb)),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub max: f64,
    pub worst_case: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub count: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub step: f64,
    pub checks: Vec<CheckSummary>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.max <= self.tolerance)
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "validate count={} seed={} tol={:.3e} step={:.3e}",
            self.count, self.seed, self.tolerance, self.step
        )?;
        for c in &self.checks {
            let verdict = if c.max <= self.tolerance { "ok" } else { "BREACH" };
            writeln!(f, "{:<24} max={:.6e} case={:<5} {}", c.name, c.max, c.worst_case, verdict)?;
        }
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

const CHECKS: [&str; 7] = [
    "exact_vs_ode",
    "lab_vs_ode",
    "exact_norm_drift",
    "mode_sum_identity",
    "frame_sum_identity",
    "frame_product_identity",
    "sigma_sum_identity",
];

fn deviations(case: &ValidationCase, cfg: &IntegratorConfig<f64>) -> Result<[f64; 7], HarnessError> {
    let p = &case.params;
    let t = case.duration;
    let exact = propagate_exact(p, &case.amps0, t)?;
    let ode = propagate_ode(p, &case.amps0, t, cfg)?;
    let psi0 = from_eigenbasis(p, 0.0, &case.amps0);
    let lab = to_eigenbasis(p, t, &propagate_lab(p, &psi0, t, cfg)?);

    let f = eigenframe(p);
    let modes = mode_coefficients(&f, &case.amps0)?;
    let mode_sum = (modes.a1 + modes.a2 - case.amps0.alpha)
        .norm()
        .max((modes.b1 + modes.b2 - case.amps0.beta).norm());
    let w_r = p.omega_rot();
    let product = -f.omega * f.omega / 4.0 + f.omega * w_r * f.theta.cos() / 2.0;
    Ok([
        exact.max_deviation(&ode),
        lab.max_deviation(&ode),
        (exact.norm_sqr() - case.amps0.norm_sqr()).abs(),
        mode_sum,
        (f.omega_plus + f.omega_minus + w_r).abs(),
        (f.omega_plus * f.omega_minus - product).abs(),
        (f.sigma_plus + f.sigma_minus - 2.0 * f.big_omega).abs(),
    ])
}

/// Cross-checks the exact, amplitude-RK4 and lab-RK4 propagators and the
/// spectral identities on `count` seeded draws.
pub fn validate(
    count: usize,
    seed: u64,
    tolerance: f64,
    cfg: &IntegratorConfig<f64>,
) -> Result<ValidationReport, HarnessError> {
    if count == 0 {
        return Err(HarnessError::Argument("count must be at least 1".into()));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(HarnessError::Argument(format!("tolerance must be positive, got {tolerance}")));
    }
    let cases = sample_cases(count, seed);
    let per_case: Vec<[f64; 7]> = cases
        .par_iter()
        .map(|c| deviations(c, cfg))
        .collect::<Result<_, _>>()?;

    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            let (worst_case, max) = per_case
                .iter()
                .enumerate()
                .map(|(i, d)| (i, d[k]))
                .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            CheckSummary { name, max, worst_case }
        })
        .collect();
    Ok(ValidationReport {
        count,
        seed,
        tolerance,
        step: cfg.step,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_is_rejected() {
        assert!(matches!(
            validate(0, 1, 1e-6, &IntegratorConfig::default()),
            Err(HarnessError::Argument(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let a = sample_cases(50, 9);
        assert_eq!(a, sample_cases(50, 9));
        assert_ne!(a, sample_cases(50, 10));
        for c in &a {
            let f = eigenframe(&c.params);
            assert!((f.omega - 1.0).abs() < 1e-12);
            let ratio = c.params.omega_rot() / f.omega;
            assert!((MIN_ROTATION_RATIO..=MAX_ROTATION_RATIO).contains(&ratio));
            assert!(LOOP_CHOICES.contains(&c.loops));
            assert!((c.amps0.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn small_run_passes_and_reports() {
        let report = validate(4, 3, 1e-6, &IntegratorConfig::default()).unwrap();
        assert!(report.passed(), "{report}");
        let text = report.to_string();
        assert!(text.contains("exact_vs_ode"));
        assert!(text.ends_with("result: PASS\n"));
        assert_eq!(text, validate(4, 3, 1e-6, &IntegratorConfig::default()).unwrap().to_string());
    }

    #[test]
    fn tiny_tolerance_breaches() {
        let report = validate(2, 3, 1e-20, &IntegratorConfig::default()).unwrap();
        assert!(!report.passed());
    }
}
