use super::HarnessError;
use crate::echo::{pi_pulse, EchoConfig, Propagator};
use crate::exact::Amplitudes;
use crate::model::DriveParams;
use crate::scalar::unwrap_near;

/// One sample of the echo sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub pop_e: f64,
    pub pop_g: f64,
    /// `arg(α β*)`, unwrapped along the series.
    pub phase: f64,
    /// Marks the π-pulse instant; that row holds the post-pulse state.
    pub pulse: bool,
}

/// Samples `(t, |α|², |β|², arg αβ*)` every `cadence` over `[0, 2T]`, always
/// including `T` and `2T`.
pub fn trace(
    params: &DriveParams<f64>,
    loops: f64,
    propagator: Propagator<f64>,
    cadence: f64,
) -> Result<Vec<TraceRow>, HarnessError> {
    if !(cadence.is_finite() && cadence > 0.0) {
        return Err(HarnessError::Argument(format!("step must be positive, got {cadence}")));
    }
    let config = EchoConfig::new(*params, loops, propagator)?;
    let round = config.round_duration();
    let mut local_times: Vec<f64> = Vec::new();
    let mut k = 1u64;
    loop {
        let t = cadence * k as f64;
        if t >= round * (1.0 - 1e-12) {
            break;
        }
        local_times.push(t);
        k += 1;
    }
    local_times.push(round);

    let mut rows = Vec::with_capacity(2 * local_times.len() + 1);
    let mut phase = 0.0;
    let mut push = |t: f64, amps: &Amplitudes<f64>, pulse: bool, rows: &mut Vec<TraceRow>| {
        let raw = (amps.alpha * amps.beta.conj()).arg();
        phase = if rows.is_empty() { raw } else { unwrap_near(raw, phase) };
        rows.push(TraceRow {
            t,
            pop_e: amps.alpha.norm_sqr(),
            pop_g: amps.beta.norm_sqr(),
            phase,
            pulse,
        });
    };

    let mut amps = config.initial;
    push(0.0, &amps, false, &mut rows);
    let mut tau = 0.0;
    for &next in &local_times {
        amps = propagator.advance(params, &amps, tau, next)?;
        tau = next;
        if next < round {
            push(next, &amps, false, &mut rows);
        }
    }
    amps = pi_pulse(&amps);
    push(round, &amps, true, &mut rows);

    let reverse = params.reversed();
    tau = 0.0;
    for &next in &local_times {
        amps = propagator.advance(&reverse, &amps, tau, next)?;
        tau = next;
        push(round + next, &amps, false, &mut rows);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::echo::run_echo;
    use crate::model::eigenframe;
    use crate::scalar::wrap_phase;

    fn p(d: f64, r: f64, w: f64) -> DriveParams<f64> {
        DriveParams::new(d, r, w).unwrap()
    }

    #[test]
    fn adiabatic_populations_are_frozen() {
        let rows = trace(&p(50.0, 50.0, 5.0), 1.0, Propagator::Adiabatic, 0.01).unwrap();
        for r in &rows {
            assert!((r.pop_e - 0.5).abs() < 1e-12);
            assert!((r.pop_g - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn time_column() {
        let params = p(50.0, 50.0, 5.0);
        let rows = trace(&params, 1.0, Propagator::Exact, 0.01).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        let round = 2.0 * std::f64::consts::PI / 5.0;
        assert!((rows.last().unwrap().t - 2.0 * round).abs() < 1e-12);
        let pulses: Vec<_> = rows.iter().filter(|r| r.pulse).collect();
        assert_eq!(pulses.len(), 1);
        assert!((pulses[0].t - round).abs() < 1e-12);
        assert!(trace(&params, 1.0, Propagator::Exact, 0.0).is_err());
    }

    #[test]
    fn final_sample_matches_echo() {
        let params = p(50.0, 50.0, 5.0);
        let rows = trace(&params, 1.0, Propagator::Exact, 0.013).unwrap();
        let echo = run_echo(&EchoConfig::new(params, 1.0, Propagator::Exact).unwrap()).unwrap();
        let last = rows.last().unwrap();
        assert!(wrap_phase(last.phase - echo.phi_na_principal).abs() < 1e-9);
        assert!((last.pop_e - echo.amps_final.alpha.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn exact_population_swing_is_first_order() {
        // measured on the closed-form solution: max ||α|² − ½| ≈ 2.1 λ at θ = π/4
        let params = p(50.0, 50.0, 5.0);
        let lambda = eigenframe(&params).lambda;
        let rows = trace(&params, 1.0, Propagator::Exact, 1e-3).unwrap();
        let swing = rows.iter().map(|r| (r.pop_e - 0.5).abs()).fold(0.0, f64::max);
        assert!(swing <= 2.2 * lambda, "swing {swing}");
        assert!(swing >= 1.5 * lambda, "swing {swing}");
    }
}
