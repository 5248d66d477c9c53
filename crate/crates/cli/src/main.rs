mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use berry_echo::echo::{run_echo, EchoConfig, Propagator, PropagatorKind};
use berry_echo::error::Error as PhysicsError;
use berry_echo::harness::{
    self, format_number, sweep_loops, sweep_theta, validate, write_sweep_csv, write_trace_csv,
    HarnessError, SweepSpec,
};
use berry_echo::model::{check_adiabatic, eigenframe, solid_angle, DriveParams, DEFAULT_ADIABATIC_THRESHOLD};
use berry_echo::ode::IntegratorConfig;
use berry_echo::perturbation::second_order_terms;
use clap::{Parser, Subcommand};

use config::Options;

#[derive(Parser)]
#[command(name = "berry-echo", version, about = "Spin-echo geometric phase of a driven two-level system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral quantities and adiabaticity margins for one drive
    Eigenframe(Options),
    /// One spin-echo run
    Echo(Options),
    /// Solid-angle sweep written as CSV
    Sweep(Options),
    /// Sweeps for n = 1..4 with ω_R = 4n+1
    SweepLoops(Options),
    /// Second-order phases and estimate
    Perturb(Options),
    /// Seeded cross-validation of the propagators
    Validate(Options),
    /// Time series of populations and phase across the echo
    Trace(Options),
}

enum Failure {
    Argument(String),
    Validation(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Argument(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Argument(m) | Failure::Validation(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<PhysicsError> for Failure {
    fn from(e: PhysicsError) -> Self {
        match e {
            PhysicsError::InvalidParameter { .. } | PhysicsError::Domain { .. } => Failure::Argument(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Argument(m) => Failure::Argument(m),
            HarnessError::Physics(p) => p.into(),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Eigenframe(o) => cmd_eigenframe(resolve(o)?),
        Command::Echo(o) => cmd_echo(resolve(o)?),
        Command::Sweep(o) => cmd_sweep(resolve(o)?),
        Command::SweepLoops(o) => cmd_sweep_loops(resolve(o)?),
        Command::Perturb(o) => cmd_perturb(resolve(o)?),
        Command::Validate(o) => cmd_validate(resolve(o)?),
        Command::Trace(o) => cmd_trace(resolve(o)?),
    }
}

fn resolve(o: Options) -> Result<Options, Failure> {
    o.resolve().map_err(Failure::Argument)
}

const DEFAULT_DELTA: f64 = 50.0;

fn params(o: &Options) -> Result<DriveParams<f64>, Failure> {
    let loops = o.loops.unwrap_or(1.0);
    let omega_rot = o.omega_rot.unwrap_or_else(|| harness::omega_rot_for_loops(loops));
    Ok(DriveParams::new(
        o.delta.unwrap_or(DEFAULT_DELTA),
        o.omega_rabi.unwrap_or(DEFAULT_DELTA),
        omega_rot,
    )?)
}

fn integrator(o: &Options) -> IntegratorConfig<f64> {
    o.step.map(IntegratorConfig::with_step).unwrap_or_default()
}

fn propagator(o: &Options) -> Result<Propagator<f64>, Failure> {
    let kind: PropagatorKind = o
        .propagator
        .as_deref()
        .unwrap_or("exact")
        .parse()
        .map_err(Failure::Argument)?;
    Ok(Propagator::from_kind(kind, integrator(o)))
}

fn output(o: &Options) -> Result<Box<dyn Write>, Failure> {
    Ok(match &o.out {
        Some(path) => Box::new(BufWriter::new(create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", path.display())))
}

fn kv(out: &mut dyn Write, key: &str, value: f64) -> io::Result<()> {
    writeln!(out, "{key}={}", format_number(value))
}

fn cmd_eigenframe(o: Options) -> Outcome {
    let p = params(&o)?;
    let f = eigenframe(&p);
    let margins = check_adiabatic(&f, DEFAULT_ADIABATIC_THRESHOLD)?;
    let mut out = output(&o)?;
    for (key, value) in [
        ("omega", f.omega),
        ("theta", f.theta),
        ("solid_angle", solid_angle(f.theta)?),
        ("lambda", f.lambda),
        ("big_omega", f.big_omega),
        ("omega_plus", f.omega_plus),
        ("omega_minus", f.omega_minus),
        ("sigma_plus", f.sigma_plus),
        ("sigma_minus", f.sigma_minus),
        ("adiabatic_ratio1", margins.ratio1),
        ("adiabatic_ratio2", margins.ratio2),
    ] {
        kv(&mut out, key, value)?;
    }
    writeln!(out, "adiabatic_passed={}", margins.passed)?;
    out.flush()?;
    Ok(())
}

fn cmd_echo(o: Options) -> Outcome {
    let p = params(&o)?;
    let config = EchoConfig::new(p, o.loops.unwrap_or(1.0), propagator(&o)?)?;
    let r = run_echo(&config)?;
    let mut out = output(&o)?;
    for (key, value) in [
        ("round_duration", config.round_duration()),
        ("phi_b", r.phi_b),
        ("phi_na", r.phi_na),
        ("delta_phi", r.delta_phi),
        ("norm_error", r.norm_error),
    ] {
        kv(&mut out, key, value)?;
    }
    out.flush()?;
    Ok(())
}

fn sweep_spec(o: &Options) -> Result<SweepSpec, Failure> {
    let loops = o.loops.unwrap_or(1.0);
    let base = harness::loop_series_spec(o.delta.unwrap_or(DEFAULT_DELTA), loops);
    Ok(SweepSpec {
        omega_rot: o.omega_rot.unwrap_or(base.omega_rot),
        points: o.points.unwrap_or(base.points),
        solid_min_frac: o.theta_min.unwrap_or(base.solid_min_frac),
        solid_max_frac: o.theta_max.unwrap_or(base.solid_max_frac),
        propagator: propagator(o)?,
        ..base
    })
}

fn cmd_sweep(o: Options) -> Outcome {
    let spec = sweep_spec(&o)?;
    let summary = sweep_theta(&spec)?;
    write_sweep_csv(&summary, output(&o)?)?;
    eprintln!(
        "rms_exact={} rms_2nd={} max_abs={}",
        format_number(summary.rms_exact),
        format_number(summary.rms_2nd),
        format_number(summary.max_abs_delta_phi)
    );
    Ok(())
}

fn cmd_sweep_loops(o: Options) -> Outcome {
    if o.omega_rot.is_some() {
        return Err(Failure::Argument("sweep-loops derives omega-rot = 4n+1; drop --omega-rot".into()));
    }
    let spec = sweep_spec(&o)?;
    let summaries = sweep_loops(&spec, &[1.0, 2.0, 3.0, 4.0])?;
    let stdout = io::stdout();
    let mut table = stdout.lock();
    writeln!(table, "loops,omega_rot,rms_exact,rms_2nd,max_abs_delta_phi")?;
    for s in &summaries {
        writeln!(
            table,
            "{},{},{},{},{}",
            s.loops,
            s.omega_rot,
            format_number(s.rms_exact),
            format_number(s.rms_2nd),
            format_number(s.max_abs_delta_phi)
        )?;
        if let Some(path) = &o.out {
            let stem = path.with_extension("");
            let file = format!("{}_n{}.csv", stem.display(), s.loops);
            write_sweep_csv(s, BufWriter::new(create(Path::new(&file))?))?;
        }
    }
    Ok(())
}

fn cmd_perturb(o: Options) -> Outcome {
    let p = params(&o)?;
    let terms = second_order_terms(&p, o.loops.unwrap_or(1.0))?;
    let mut out = output(&o)?;
    writeln!(out, "j,weight,phase_rad")?;
    for (j, (phase, w)) in terms.phases.iter().zip(terms.weights).enumerate() {
        writeln!(out, "{},{},{}", j + 1, w, format_number(*phase))?;
    }
    kv(&mut out, "lambda", terms.lambda)?;
    kv(&mut out, "phi_b", terms.phi_b)?;
    kv(&mut out, "delta_phi_2nd", terms.delta_phi())?;
    out.flush()?;
    Ok(())
}

fn cmd_validate(o: Options) -> Outcome {
    let count = o.count.unwrap_or(100);
    let report = validate(count, o.seed.unwrap_or(0), o.tol.unwrap_or(1e-6), &integrator(&o))?;
    let mut out = output(&o)?;
    write!(out, "{report}")?;
    out.flush()?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation("tolerance breached".into()))
    }
}

fn cmd_trace(o: Options) -> Outcome {
    let p = params(&o)?;
    let cadence = o.step.unwrap_or(1e-2);
    // the cadence flag doubles as sample spacing; RK4 keeps its default step
    let prop = Propagator::from_kind(
        propagator(&o)?.kind(),
        IntegratorConfig::default(),
    );
    let rows = harness::trace(&p, o.loops.unwrap_or(1.0), prop, cadence)?;
    write_trace_csv(&rows, output(&o)?)?;
    Ok(())
}
