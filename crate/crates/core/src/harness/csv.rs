use std::io::{self, Write};

use super::sweep::SweepSummary;
use super::trace::TraceRow;

pub const SWEEP_HEADER: &str =
    "theta_rad,solid_angle_rad,omega_rabi,phi_b_rad,phi_na_rad,delta_phi_rad,delta_phi_2nd_rad,norm_error";

pub const TRACE_HEADER: &str = "t,pop_e,pop_g,phase_rad,pulse";

/// Twelve significant digits, scientific notation, `.` as decimal point.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_sweep_csv<W: Write>(summary: &SweepSummary, mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in &summary.rows {
        let fields = [
            r.theta,
            r.solid_angle,
            r.omega_rabi,
            r.phi_b,
            r.phi_na,
            r.delta_phi_exact,
            r.delta_phi_2nd,
            r.norm_error,
        ];
        let line: Vec<String> = fields.iter().map(|&v| format_number(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_number(r.t),
            format_number(r.pop_e),
            format_number(r.pop_g),
            format_number(r.phase),
            u8::from(r.pulse)
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sweep::{loop_series_spec, sweep_theta, rms};

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.015), "1.50000000000e-2");
        assert_eq!(format_number(-3.0), "-3.00000000000e0");
        assert_eq!(format_number(0.0), "0.00000000000e0");
        let x: f64 = format_number(std::f64::consts::PI).parse().unwrap();
        assert!((x - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn sweep_csv_shape_and_rms_recomputation() {
        let spec = crate::harness::SweepSpec {
            points: 11,
            ..loop_series_spec(50.0, 1.0)
        };
        let summary = sweep_theta(&spec).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&summary, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with('\n'));
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SWEEP_HEADER));
        let deltas: Vec<f64> = lines
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                assert_eq!(cols.len(), 8);
                cols[5].parse().unwrap()
            })
            .collect();
        assert_eq!(deltas.len(), 11);
        assert!((rms(deltas) - summary.rms_exact).abs() <= 1e-11 * summary.rms_exact.max(1e-300));
    }
}
