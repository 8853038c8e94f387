use std::process::{Command, Output};

fn leverarm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leverarm")).args(args).output().expect("spawn leverarm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zeros_sweep_over_kp() {
    let o = leverarm(&["zeros", "--filter", "mahony", "--l", "1", "--phi-op", "0", "--kp-grid", "1:1:1"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "kp,re_z1,im_z1,re_z2,im_z2");
    let f: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((f[1] - golden).abs() < 1e-12 && (f[3] + 1.0 / golden).abs() < 1e-12, "{f:?}");
}

#[test]
fn bode_with_simulation() {
    let o = leverarm(&["bode", "--l", "1", "--phi-op", "0", "--omega", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let row: Vec<f64> = stdout(&o).lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    // analytic |1 + 4| = 5
    assert!((row[1] - 5.0).abs() < 1e-12);
    assert!((row[3] / row[1] - 1.0).abs() < 0.02, "{row:?}");
}

#[test]
fn synth_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("synth.csv");
    let errors = dir.path().join("errors.csv");
    let o = leverarm(&["synth", "--out", data.to_str().unwrap(), "--t-end", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = leverarm(&["replay", "--data", data.to_str().unwrap(), "--kp", "1", "--out", errors.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rmse_roll="));
    let text = std::fs::read_to_string(&errors).unwrap();
    assert!(text.starts_with("t,err_roll,err_pitch,err_yaw"));
    assert!(text.lines().count() > 100);
}

#[test]
fn closed_loop_writes_every_step() {
    let o = leverarm(&["closed-loop", "--t-end", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("t,phi,phi_dot,wheel_speed,current,active_imu"));
    assert!(lines.count() >= 1000);
}

#[test]
fn missing_dataset_is_an_io_error() {
    let o = leverarm(&["replay", "--data", "/nonexistent/leverarm/data.csv"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_schedule_is_a_config_error() {
    let o = leverarm(&["closed-loop", "--schedule", "0:middle"]);
    assert_eq!(o.status.code(), Some(2));
    let o = leverarm(&["closed-loop", "--schedule", "5:lower,1:upper"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_config_error() {
    assert_eq!(leverarm(&["frobnicate"]).status.code(), Some(2));
}
