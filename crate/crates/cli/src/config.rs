//! Option merging: config file values overridden by command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

/// Flags shared by every subcommand. Each can also come from `--config`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// Static splitting Δ (angular frequency)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Drive amplitude Ω_R
    #[arg(long)]
    pub omega_rabi: Option<f64>,
    /// Signed rotation rate ω_R; sweeps default to 4n+1
    #[arg(long, allow_negative_numbers = true)]
    pub omega_rot: Option<f64>,
    /// Loops per round n
    #[arg(long)]
    pub loops: Option<f64>,
    /// exact | ode | adiabatic | lab
    #[arg(long)]
    pub propagator: Option<String>,
    /// RK4 step (or trace cadence)
    #[arg(long)]
    pub step: Option<f64>,
    /// Grid points for sweeps
    #[arg(long)]
    pub points: Option<usize>,
    /// Lower solid-angle bound as a fraction of 2π
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Upper solid-angle bound as a fraction of 2π
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Random seed for `validate`
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance for `validate`
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of draws for `validate`
    #[arg(long)]
    pub count: Option<usize>,
    /// Output path (CSV or report)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the keys above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    /// Fills every unset field from `file`.
    pub fn or(self, file: Options) -> Options {
        Options {
            delta: self.delta.or(file.delta),
            omega_rabi: self.omega_rabi.or(file.omega_rabi),
            omega_rot: self.omega_rot.or(file.omega_rot),
            loops: self.loops.or(file.loops),
            propagator: self.propagator.or(file.propagator),
            step: self.step.or(file.step),
            points: self.points.or(file.points),
            theta_min: self.theta_min.or(file.theta_min),
            theta_max: self.theta_max.or(file.theta_max),
            seed: self.seed.or(file.seed),
            tol: self.tol.or(file.tol),
            count: self.count.or(file.count),
            out: self.out.or(file.out),
            config: self.config,
        }
    }

    /// Resolves `--config` if given.
    pub fn resolve(self) -> Result<Options, String> {
        match self.config.clone() {
            None => Ok(self),
            Some(path) => Ok(self.or(load(&path)?)),
        }
    }
}

pub fn load(path: &Path) -> Result<Options, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

pub fn parse(text: &str) -> Result<Options, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse("delta = 40.0\nloops = 2\nomega-rot = 9.0\npropagator = \"ode\"\n").unwrap();
        let cli = Options {
            delta: Some(50.0),
            ..Default::default()
        };
        let merged = cli.or(file);
        assert_eq!(merged.delta, Some(50.0));
        assert_eq!(merged.loops, Some(2.0));
        assert_eq!(merged.omega_rot, Some(9.0));
        assert_eq!(merged.propagator.as_deref(), Some("ode"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse("delat = 1.0").is_err());
        assert!(parse("delta = \"fifty\"").is_err());
    }
}
