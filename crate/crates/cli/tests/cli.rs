use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berry-echo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_is_reproducible() {
    let args = ["validate", "--count", "10", "--seed", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("result: PASS"));
}

#[test]
fn validate_breach_exits_two() {
    let o = run(&["validate", "--count", "5", "--tol", "1e-30", "--step", "1e-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("result: FAIL"));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(run(&["validate", "--count", "0"]).status.code(), Some(1));
    assert_eq!(run(&["echo", "--propagator", "euler"]).status.code(), Some(1));
    assert_eq!(run(&["echo", "--delta", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["echo", "--bogus"]).status.code(), Some(1));
}

#[test]
fn coarse_step_exits_three() {
    let o = run(&["echo", "--propagator", "ode", "--step", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&["sweep", "--points", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta_rad,solid_angle_rad,omega_rabi,phi_b_rad,phi_na_rad,delta_phi_rad,delta_phi_2nd_rad,norm_error"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
    assert!(text.ends_with('\n'));
}

#[test]
fn sweep_loops_writes_one_file_per_loop() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("loops.csv");
    let o = run(&["sweep-loops", "--points", "5", "--out", stem.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for n in 1..=4 {
        assert!(dir.path().join(format!("loops_n{n}.csv")).exists());
    }
    assert_eq!(run(&["sweep-loops", "--omega-rot", "3"]).status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "delta = 50.0\nomega-rabi = 50.0\nomega-rot = 5.0\nloops = 1.0\n").unwrap();
    let from_file = stdout(&run(&["eigenframe", "--config", cfg.to_str().unwrap()]));
    assert!(from_file.contains("theta="), "{from_file}");
    let overridden = stdout(&run(&["eigenframe", "--config", cfg.to_str().unwrap(), "--omega-rabi", "10"]));
    assert_ne!(from_file, overridden);
    let direct = stdout(&run(&["eigenframe", "--delta", "50", "--omega-rabi", "10", "--omega-rot", "5"]));
    assert_eq!(overridden, direct);

    fs::write(&cfg, "unknown-key = 1\n").unwrap();
    assert_eq!(run(&["eigenframe", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn trace_marks_the_pulse() {
    let o = run(&["trace", "--step", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("t,pop_e,pop_g,phase_rad,pulse"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",1")).count(), 1);
}

#[test]
fn echo_and_perturb_report_phases() {
    let echo = stdout(&run(&["echo"]));
    assert!(echo.contains("delta_phi="), "{echo}");
    let perturb = stdout(&run(&["perturb"]));
    assert!(perturb.contains("delta_phi_2nd="), "{perturb}");
}
