//! Binary-level tests: subcommand behavior, exit codes, and the guarantee
//! that `run` equals manually chaining the stages byte for byte.

use eogkit::model::MovementKind;
use eogkit::pipeline::write_scenario;
use eogkit::synth::{event_duration, KindAmplitudes, PlannedEvent, ScenarioSpec};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eogkit"))
}

fn run_ok(args: &[&str], cwd: &Path) -> Output {
    let out = bin().args(args).current_dir(cwd).output().unwrap();
    assert!(
        out.status.success(),
        "eogkit {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str], cwd: &Path) -> i32 {
    bin()
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

fn small_scenario(dir: &Path) -> PathBuf {
    let kinds = [
        MovementKind::Right,
        MovementKind::Blink,
        MovementKind::Left,
        MovementKind::DoubleBlink,
        MovementKind::Up,
        MovementKind::Down,
    ];
    let mut events = Vec::new();
    let mut t = 3.0;
    for round in 0..3 {
        for &kind in &kinds {
            events.push(PlannedEvent { kind, onset: t });
            t += event_duration(kind) + 2.0 + 0.1 * round as f64;
        }
    }
    let spec = ScenarioSpec {
        fs: 250.0,
        duration: t + 2.0,
        events,
        amplitudes: KindAmplitudes::default(),
        noise_rms: 8e-6,
        drift: 2e-6,
        seed: 5,
    };
    let path = dir.join("scenario.json");
    write_scenario(&spec, &path).unwrap();
    path
}

#[test]
fn run_equals_manual_stage_chain_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let scenario = small_scenario(dir);
    let scenario = scenario.to_str().unwrap();

    run_ok(&["run", "--scenario", scenario, "--out-dir", "run"], dir);

    run_ok(
        &[
            "synth",
            "--scenario",
            scenario,
            "--out",
            "session.csv",
            "--calibration-out",
            "sweep.csv",
        ],
        dir,
    );
    let design = format!(
        "{},{},{}",
        eogkit::pipeline::DEFAULT_DESIGN_ORDER,
        eogkit::pipeline::DEFAULT_DESIGN_F_LO,
        eogkit::pipeline::DEFAULT_DESIGN_F_HI
    );
    run_ok(
        &[
            "filter",
            "--in",
            "sweep.csv",
            "--out",
            "sweep_filtered.csv",
            "--design",
            &design,
        ],
        dir,
    );
    run_ok(
        &[
            "filter",
            "--in",
            "session.csv",
            "--out",
            "filtered.csv",
            "--design",
            &design,
        ],
        dir,
    );
    run_ok(
        &[
            "calibrate",
            "--in",
            "sweep_filtered.csv",
            "--out",
            "profile.json",
        ],
        dir,
    );
    run_ok(
        &[
            "classify",
            "--in",
            "filtered.csv",
            "--profile",
            "profile.json",
            "--events",
            "events.ndjson",
            "--commands",
            "commands.ndjson",
        ],
        dir,
    );
    let eval = run_ok(
        &[
            "eval",
            "--events",
            "events.ndjson",
            "--truth",
            "session.csv",
        ],
        dir,
    );
    std::fs::write(dir.join("eval.json"), &eval.stdout).unwrap();

    for name in [
        "session.csv",
        "sweep.csv",
        "sweep_filtered.csv",
        "filtered.csv",
        "profile.json",
        "events.ndjson",
        "commands.ndjson",
        "eval.json",
    ] {
        let manual = std::fs::read(dir.join(name)).unwrap();
        let from_run = std::fs::read(dir.join("run").join(name)).unwrap();
        assert_eq!(manual, from_run, "artifact {name} differs");
    }
}

#[test]
fn eval_accuracy_is_one_on_identical_lists() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let scenario = small_scenario(dir);
    run_ok(
        &[
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out-dir",
            "out",
        ],
        dir,
    );
    // Evaluate the run's own events against its own truth again.
    let out = run_ok(
        &[
            "eval",
            "--events",
            "out/events.ndjson",
            "--truth",
            "out/session.csv",
        ],
        dir,
    );
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["accuracy"], serde_json::json!(1.0));
    assert_eq!(value["total_truth"], serde_json::json!(18));
}

#[test]
fn freqz_paper_grid_endpoints_are_blocked() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    run_ok(
        &["freqz", "--paper", "--points", "4", "--out", "resp.csv"],
        dir,
    );
    let text = std::fs::read_to_string(dir.join("resp.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega_rad,magnitude_db,phase_rad");
    assert_eq!(lines.len(), 5);
    let omega: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!((omega[0]).abs() < 1e-12);
    assert!((omega[1] - std::f64::consts::PI / 3.0).abs() < 1e-8);
    assert!((omega[2] - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-8);
    assert!((omega[3] - std::f64::consts::PI).abs() < 1e-8);
    let magnitude_db: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(magnitude_db[0], f64::NEG_INFINITY);
    assert!(magnitude_db[1].is_finite());
    assert!(magnitude_db[2].is_finite());
    assert_eq!(magnitude_db[3], f64::NEG_INFINITY);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    assert_eq!(exit_code(&["no-such-command"], dir), 1);
    assert_eq!(exit_code(&["filter", "--in", "x.csv"], dir), 1);
    // Bad design parameters are usage errors too.
    std::fs::write(dir.join("some.csv"), "t,h,v\n0.0,0,0\n0.004,0,0\n").unwrap();
    assert_eq!(
        exit_code(
            &["filter", "--in", "some.csv", "--out", "y.csv", "--design", "3,1,30"],
            dir
        ),
        1
    );
    assert_eq!(exit_code(&["--help"], dir), 0);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    std::fs::write(dir.join("bad.csv"), "t,h\n0.0,1\n").unwrap();
    assert_eq!(
        exit_code(
            &["filter", "--in", "bad.csv", "--out", "out.csv", "--paper"],
            dir
        ),
        2
    );
    assert_eq!(
        exit_code(
            &["calibrate", "--in", "missing.csv", "--out", "p.json"],
            dir
        ),
        2
    );
}

#[test]
fn classify_with_incomplete_profile_exits_two_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let scenario = small_scenario(dir);
    run_ok(
        &[
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out-dir",
            "out",
        ],
        dir,
    );
    let mut profile: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/profile.json")).unwrap())
            .unwrap();
    profile.as_object_mut().unwrap().remove("threshold_blink");
    std::fs::write(dir.join("broken.json"), profile.to_string()).unwrap();
    let out = bin()
        .args([
            "classify",
            "--in",
            "out/filtered.csv",
            "--profile",
            "broken.json",
            "--events",
            "e.ndjson",
            "--commands",
            "c.ndjson",
        ])
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 2);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("threshold_blink"),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn degenerate_calibration_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let scenario = small_scenario(dir);
    run_ok(
        &[
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out-dir",
            "out",
        ],
        dir,
    );
    // Strip the Down labels out of the sweep.
    let text = std::fs::read_to_string(dir.join("out/sweep_filtered.csv")).unwrap();
    let stripped: Vec<String> = text
        .lines()
        .map(|l| {
            if l.contains("Down:") {
                let mut parts: Vec<&str> = l.split(',').collect();
                parts[3] = "";
                parts.join(",")
            } else {
                l.to_string()
            }
        })
        .collect();
    std::fs::write(dir.join("no_down.csv"), stripped.join("\n") + "\n").unwrap();
    let out = bin()
        .args(["calibrate", "--in", "no_down.csv", "--out", "p.json"])
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Down"));
}

#[test]
fn classify_console_renders_commands() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let scenario = small_scenario(dir);
    run_ok(
        &[
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out-dir",
            "out",
        ],
        dir,
    );
    let out = run_ok(
        &[
            "classify",
            "--in",
            "out/filtered.csv",
            "--profile",
            "out/profile.json",
            "--events",
            "e.ndjson",
            "--commands",
            "c.ndjson",
        ],
        dir,
    );
    let console = String::from_utf8(out.stdout).unwrap();
    assert!(console.contains("Left Call the Doctor"), "{console}");
    let ndjson = std::fs::read_to_string(dir.join("c.ndjson")).unwrap();
    assert!(ndjson.contains("\"text\":\"Call the Doctor\""));
}
