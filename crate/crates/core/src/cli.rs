//! `leverarm` command-line front end. Every subcommand writes CSV to `--out`
//! (or stdout) and is deterministic given its flags.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
//! 4 I/O or parse error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::analysis::{
    self, atan_tf, empirical_freq_response, freq_response, madgwick_sliding_tf, mahony_tf, zero_locus_atan,
    zero_locus_mahony, EmpiricalConfig, OperatingPoint, ZeroSet,
};
use crate::closed_loop::{
    oscillation_metric, run_closed_loop, ClosedLoopConfig, Feedback, ImuPlacement, Placement, SwitchSchedule,
};
use crate::error::Error;
use crate::filters::{FilterKind, MahonyGains};
use crate::imu::{Chirp, Constant, NoiseModel, PendulumConfig, Sinusoid};
use crate::quat::Quaternion;
use crate::replay::{evaluate, load_csv, save_csv, synthetic_dataset, write_errors};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "leverarm", version, about = "Lever-arm effects on IMU attitude estimators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero locations of the atan2 or Mahony roll transfer function over a sweep.
    Zeros(ZerosArgs),
    /// Analytic and simulated frequency response of a filter.
    Bode(BodeArgs),
    /// Reaction-wheel pendulum stabilized on the estimate of a switched IMU.
    ClosedLoop(ClosedLoopArgs),
    /// Run a filter over a recorded CSV dataset and score it against ground truth.
    Replay(ReplayArgs),
    /// Write a synthetic pendulum dataset in the replay CSV format.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalysisFilter {
    #[value(alias = "atan2")]
    Atan,
    Mahony,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    #[value(alias = "atan2")]
    Atan,
    Mahony,
    Madgwick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LoopFilterArg {
    /// Feed back the true roll (filters still run).
    Truth,
    #[value(alias = "atan2")]
    Atan,
    Mahony,
    Madgwick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    /// Start from the first ground-truth orientation.
    Truth,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrajectoryArg {
    /// Constant roll at --phi-op.
    Rest,
    /// --phi-op + --amplitude·sin(--omega·t).
    Sine,
    /// Linear chirp from --omega to --omega-end over the run.
    Chirp,
}

/// `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?} in grid"));
        let count: usize = n.trim().parse().map_err(|_| format!("bad count {n:?} in grid"))?;
        if count == 0 {
            return Err("grid count must be positive".into());
        }
        Ok(Grid {
            start: num(a)?,
            stop: num(b)?,
            count,
        })
    }
}

impl Grid {
    fn linear(&self) -> Vec<f64> {
        analysis::linspace(self.start, self.stop, self.count)
    }

    fn log(&self) -> Result<Vec<f64>, Error> {
        if !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::InvalidParameter("log-spaced grid bounds must be > 0".into()));
        }
        Ok(analysis::logspace(self.start, self.stop, self.count))
    }
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, value_enum, default_value = "atan")]
    pub filter: AnalysisFilter,
    /// Lever arm, m.
    #[arg(long = "l")]
    pub lever_arm: f64,
    /// Gravity, m/s² (1 = normalized units).
    #[arg(long = "g", default_value_t = 1.0)]
    pub gravity: f64,
    /// Operating-point roll, rad, in [0, π]. Mahony default: 0.
    #[arg(long, conflicts_with = "phi_op_grid")]
    pub phi_op: Option<f64>,
    /// Linear operating-point sweep start:stop:count, rad (atan only; default 0:π:181).
    #[arg(long)]
    pub phi_op_grid: Option<Grid>,
    /// Proportional gain, 1/s (mahony only).
    #[arg(long, conflicts_with = "kp_grid")]
    pub kp: Option<f64>,
    /// Log-spaced gain sweep start:stop:count, 1/s (mahony only; default 0.01:1000:121).
    #[arg(long)]
    pub kp_grid: Option<Grid>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct GainArgs {
    /// Mahony proportional gain, 1/s.
    #[arg(long, default_value_t = 1.0)]
    pub kp: f64,
    /// Mahony integral gain, 1/s².
    #[arg(long, default_value_t = 0.0)]
    pub ki: f64,
    /// Madgwick step size, 1/s.
    #[arg(long, default_value_t = 50.0)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct BodeArgs {
    #[arg(long, value_enum, default_value = "atan")]
    pub filter: FilterArg,
    /// Lever arm, m.
    #[arg(long = "l")]
    pub lever_arm: f64,
    /// Gravity, m/s² (1 = normalized units).
    #[arg(long = "g", default_value_t = 1.0)]
    pub gravity: f64,
    /// Operating-point roll, rad, in [0, π].
    #[arg(long, default_value_t = 0.0)]
    pub phi_op: f64,
    /// Comma-separated frequencies, rad/s.
    #[arg(long, value_delimiter = ',', conflicts_with = "omega_grid")]
    pub omega: Vec<f64>,
    /// Log-spaced frequency sweep start:stop:count, rad/s (default 0.1:10:5).
    #[arg(long)]
    pub omega_grid: Option<Grid>,
    /// Input sinusoid amplitude, rad (at most 0.01).
    #[arg(long, default_value_t = 0.001)]
    pub amplitude: f64,
    #[command(flatten)]
    pub gains: GainArgs,
    /// Simulation step, s.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Skip the simulation; leave the empirical columns empty.
    #[arg(long)]
    pub analytic_only: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ClosedLoopArgs {
    #[arg(long, value_enum, default_value = "mahony")]
    pub filter: LoopFilterArg,
    /// Mahony proportional gain, 1/s.
    #[arg(long, default_value_t = 10.0)]
    pub kp: f64,
    /// Mahony integral gain, 1/s².
    #[arg(long, default_value_t = 1.0)]
    pub ki: f64,
    /// Madgwick step size, 1/s.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    /// IMU in the loop from each start time, s: "0:lower,10:upper,20:lower".
    #[arg(long, default_value = "0:lower,10:upper,20:lower")]
    pub schedule: String,
    /// Step for plant, filters and controller, s.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Duration, s.
    #[arg(long, default_value_t = 30.0)]
    pub t_end: f64,
    /// Initial roll, rad.
    #[arg(long, default_value_t = 0.0)]
    pub phi0: f64,
    /// Lower IMU height, m.
    #[arg(long, default_value_t = ImuPlacement::LOWER.lever_arm)]
    pub l_lower: f64,
    /// Upper IMU height, m.
    #[arg(long, default_value_t = ImuPlacement::UPPER.lever_arm)]
    pub l_upper: f64,
    /// Lower IMU accelerometer calibration offset, rad.
    #[arg(long, default_value_t = ImuPlacement::LOWER.accel_offset, allow_negative_numbers = true)]
    pub offset_lower: f64,
    /// Upper IMU accelerometer calibration offset, rad.
    #[arg(long, default_value_t = ImuPlacement::UPPER.accel_offset, allow_negative_numbers = true)]
    pub offset_upper: f64,
    /// Accelerometer white noise std per axis, g.
    #[arg(long, default_value_t = crate::closed_loop::DEFAULT_NOISE.accel_std)]
    pub accel_noise: f64,
    /// Gyroscope white noise std per axis, rad/s.
    #[arg(long, default_value_t = 0.0)]
    pub gyro_noise: f64,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the lower IMU stream as a replay dataset.
    #[arg(long)]
    pub imu_lower_out: Option<PathBuf>,
    /// Also write the upper IMU stream as a replay dataset.
    #[arg(long)]
    pub imu_upper_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Dataset CSV: t,ax,ay,az,gx,gy,gz,qw,qx,qy,qz (s, g, rad/s).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "mahony")]
    pub filter: FilterArg,
    /// Mahony proportional gain, 1/s.
    #[arg(long, default_value_t = 1.0)]
    pub kp: f64,
    /// Mahony integral gain, 1/s².
    #[arg(long, default_value_t = 0.0)]
    pub ki: f64,
    /// Madgwick step size, 1/s.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    /// Initial filter orientation.
    #[arg(long, value_enum, default_value = "truth")]
    pub init: InitArg,
    /// Per-sample errors CSV: t,err_roll,err_pitch,err_yaw (rad).
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output dataset path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "chirp")]
    pub trajectory: TrajectoryArg,
    /// Lever arm, m.
    #[arg(long = "l", default_value_t = 0.3)]
    pub lever_arm: f64,
    /// Gravity, m/s² (1 = normalized units).
    #[arg(long = "g", default_value_t = 9.81)]
    pub gravity: f64,
    /// Mean roll, rad.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_op: f64,
    /// Roll amplitude, rad.
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    /// (Start) angular frequency, rad/s.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Chirp end frequency, rad/s.
    #[arg(long, default_value_t = 12.0)]
    pub omega_end: f64,
    /// Duration, s.
    #[arg(long, default_value_t = 20.0)]
    pub t_end: f64,
    /// Sample period, s.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Accelerometer white noise std per axis, g.
    #[arg(long, default_value_t = 0.0)]
    pub accel_noise: f64,
    /// Gyroscope white noise std per axis, rad/s.
    #[arg(long, default_value_t = 0.0)]
    pub gyro_noise: f64,
    /// Constant gyroscope bias on x, rad/s.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gyro_bias: f64,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Maps library errors onto exit codes.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::PoleOnAxis { .. } | Error::Diverged { .. } => EXIT_NO_CONVERGENCE,
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::MissingColumn { .. }
        | Error::NonMonotonicTime { .. }
        | Error::NoOverlap => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Diagnostics go to `stderr`; CSV goes to `--out` or `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Zeros(a) => cmd_zeros(a, stdout),
        Command::Bode(a) => cmd_bode(a, stdout, stderr),
        Command::ClosedLoop(a) => cmd_closed_loop(a, stdout, stderr),
        Command::Replay(a) => cmd_replay(a, stdout, stderr),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

type CmdResult = Result<i32, Error>;

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// CSV writer over `--out` or the given stdout.
fn csv_out<'a>(out: &OutArg, stdout: &'a mut dyn Write) -> Result<(csv::Writer<Box<dyn Write + 'a>>, PathBuf), Error> {
    match &out.out {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_error(p, e))?;
            Ok((csv::Writer::from_writer(Box::new(io::BufWriter::new(f))), p.clone()))
        }
        None => Ok((csv::Writer::from_writer(Box::new(stdout)), PathBuf::from("<stdout>"))),
    }
}

fn write_row<W: Write>(w: &mut csv::Writer<W>, path: &Path, row: &[String]) -> Result<(), Error> {
    w.write_record(row).map_err(|e| io_error(path, e))
}

fn fmt(x: f64) -> String {
    x.to_string()
}

fn zero_fields(z: &ZeroSet) -> Vec<String> {
    (0..2)
        .flat_map(|k| match z.roots().get(k) {
            Some(r) => [fmt(r.re), fmt(r.im)],
            None => [String::new(), String::new()],
        })
        .collect()
}

fn cmd_zeros(a: &ZerosArgs, stdout: &mut dyn Write) -> CmdResult {
    let (header, rows) = match a.filter {
        AnalysisFilter::Atan => {
            if a.kp.is_some() || a.kp_grid.is_some() {
                return Err(Error::InvalidParameter("--kp/--kp-grid apply to --filter mahony only".into()));
            }
            let grid = match (a.phi_op, a.phi_op_grid) {
                (Some(p), _) => vec![p],
                (None, Some(g)) => g.linear(),
                (None, None) => analysis::default_phi_grid(),
            };
            ("phi_op", zero_locus_atan(a.lever_arm, a.gravity, &grid)?)
        }
        AnalysisFilter::Mahony => {
            if a.phi_op_grid.is_some() {
                return Err(Error::InvalidParameter("--phi-op-grid applies to --filter atan only".into()));
            }
            let op = OperatingPoint::new(a.phi_op.unwrap_or(0.0), a.lever_arm, a.gravity)?;
            let grid = match (a.kp, a.kp_grid) {
                (Some(k), _) => vec![k],
                (None, Some(g)) => g.log()?,
                (None, None) => analysis::default_kp_grid(),
            };
            ("kp", zero_locus_mahony(&op, &grid)?)
        }
    };
    let (mut w, path) = csv_out(&a.out, stdout)?;
    write_row(&mut w, &path, &[header, "re_z1", "im_z1", "re_z2", "im_z2"].map(String::from))?;
    for (x, z) in &rows {
        let mut row = vec![fmt(*x)];
        row.extend(zero_fields(z));
        write_row(&mut w, &path, &row)?;
    }
    w.flush().map_err(|e| io_error(&path, e))?;
    Ok(EXIT_OK)
}

fn filter_kind(filter: FilterArg, kp: f64, ki: f64, beta: f64) -> Result<FilterKind, Error> {
    Ok(match filter {
        FilterArg::Atan => FilterKind::Atan2,
        FilterArg::Mahony => FilterKind::Mahony(MahonyGains::new(kp, ki)?),
        FilterArg::Madgwick => {
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
            }
            FilterKind::Madgwick { beta }
        }
    })
}

fn cmd_bode(a: &BodeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let op = OperatingPoint::new(a.phi_op, a.lever_arm, a.gravity)?;
    let kind = filter_kind(a.filter, a.gains.kp, a.gains.ki, a.gains.beta)?;
    let tf = match kind {
        FilterKind::Atan2 => atan_tf(&op),
        FilterKind::Mahony(g) => mahony_tf(&op, &g),
        FilterKind::Madgwick { .. } => madgwick_sliding_tf(&op),
    };
    let omegas = match (&a.omega_grid, a.omega.is_empty()) {
        (Some(g), _) => g.log()?,
        (None, false) => a.omega.clone(),
        (None, true) => analysis::logspace(0.1, 10.0, 5),
    };
    if omegas.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidParameter("frequencies must be > 0".into()));
    }
    let cfg = EmpiricalConfig {
        dt: a.dt,
        ..EmpiricalConfig::default()
    };
    let (mut w, path) = csv_out(&a.out, stdout)?;
    write_row(
        &mut w,
        &path,
        &["omega", "analytic_gain", "analytic_phase", "empirical_gain", "empirical_phase"].map(String::from),
    )?;
    let mut code = EXIT_OK;
    for &omega in &omegas {
        let g: Complex64 = freq_response(&tf, omega)?;
        let mut row = vec![fmt(omega), fmt(g.norm()), fmt(g.arg())];
        if a.analytic_only {
            row.extend([String::new(), String::new()]);
        } else {
            match empirical_freq_response(kind, &op, omega, a.amplitude, &cfg) {
                Ok(p) => row.extend([fmt(p.gain), fmt(p.phase)]),
                Err(e @ Error::NoConvergence { .. }) => {
                    let _ = writeln!(stderr, "omega = {omega}: {e}");
                    row.extend([String::new(), String::new()]);
                    code = EXIT_NO_CONVERGENCE;
                }
                Err(e) => return Err(e),
            }
        }
        write_row(&mut w, &path, &row)?;
    }
    w.flush().map_err(|e| io_error(&path, e))?;
    Ok(code)
}

fn cmd_closed_loop(a: &ClosedLoopArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let feedback = match a.filter {
        LoopFilterArg::Truth => Feedback::TrueState,
        LoopFilterArg::Atan => Feedback::Estimate(FilterKind::Atan2),
        LoopFilterArg::Mahony => Feedback::Estimate(FilterKind::Mahony(MahonyGains::new(a.kp, a.ki)?)),
        LoopFilterArg::Madgwick => Feedback::Estimate(filter_kind(FilterArg::Madgwick, 0.0, 0.0, a.beta)?),
    };
    let mut cfg = ClosedLoopConfig::new(feedback);
    cfg.schedule = SwitchSchedule::parse(&a.schedule)?;
    cfg.dt = a.dt;
    cfg.t_end = a.t_end;
    cfg.initial.phi = a.phi0;
    cfg.lower.lever_arm = a.l_lower;
    cfg.upper.lever_arm = a.l_upper;
    cfg.lower.accel_offset = a.offset_lower;
    cfg.upper.accel_offset = a.offset_upper;
    cfg.noise = NoiseModel {
        accel_std: a.accel_noise,
        gyro_std: a.gyro_noise,
        gyro_bias: [0.0; 3],
        seed: a.seed,
    };
    let run = run_closed_loop(&cfg)?;

    let (mut w, path) = csv_out(&a.out, stdout)?;
    let header = [
        "t",
        "phi",
        "phi_dot",
        "wheel_speed",
        "current",
        "active_imu",
        "phi_hat_lower",
        "phi_hat_upper",
        "a2_lower",
        "a2_upper",
        "diverged",
    ];
    write_row(&mut w, &path, &header.map(String::from))?;
    let last = run.rows.len().saturating_sub(1);
    for (k, r) in run.rows.iter().enumerate() {
        let diverged = run.diverged_at.is_some() && k == last;
        let row = [
            fmt(r.t),
            fmt(r.state.phi),
            fmt(r.state.phi_dot),
            fmt(r.state.wheel_speed),
            fmt(r.current),
            r.active.label().to_string(),
            fmt(r.roll_hat_lower),
            fmt(r.roll_hat_upper),
            fmt(r.imu_lower.accel[1]),
            fmt(r.imu_upper.accel[1]),
            diverged.to_string(),
        ];
        write_row(&mut w, &path, &row)?;
    }
    w.flush().map_err(|e| io_error(&path, e))?;
    drop(w);

    for (target, placement) in [(&a.imu_lower_out, Placement::Lower), (&a.imu_upper_out, Placement::Upper)] {
        if let Some(p) = target {
            save_csv(p, &run.imu_dataset(placement))?;
        }
    }

    // oscillation summary per schedule segment, skipping 2 s after each switch
    let entries = cfg.schedule.entries();
    for (i, (start, placement)) in entries.iter().enumerate() {
        let end = entries.get(i + 1).map_or(cfg.t_end, |e| e.0);
        let _ = writeln!(
            stderr,
            "segment {start}-{end} s ({}): std(phi_dot) = {:.4e} rad/s",
            placement.label(),
            oscillation_metric(&run, start + 2.0, end)
        );
    }
    if let Some(t) = run.diverged_at {
        let _ = writeln!(stderr, "diverged at t = {t} s");
    }
    Ok(EXIT_OK)
}

fn cmd_replay(a: &ReplayArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let ds = load_csv(&a.data)?;
    let kind = filter_kind(a.filter, a.kp, a.ki, a.beta)?;
    let q0 = match a.init {
        InitArg::Identity => Quaternion::IDENTITY,
        InitArg::Truth => ds
            .truth
            .as_ref()
            .and_then(|t| t.first().copied())
            .ok_or_else(|| Error::MissingColumn {
                path: a.data.clone(),
                column: "qw".into(),
            })?,
    };
    let report = evaluate(&ds, kind, q0)?;
    match &a.out.out {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_error(p, e))?;
            write_errors(io::BufWriter::new(f), &report, p)?;
        }
        None => write_errors(&mut *stdout, &report, Path::new("<stdout>"))?,
    }
    let _ = writeln!(
        stderr,
        "rmse_roll={} rmse_pitch={} rmse_yaw={} max_roll={} max_pitch={} max_yaw={}",
        report.rmse[0], report.rmse[1], report.rmse[2], report.max_abs[0], report.max_abs[1], report.max_abs[2]
    );
    Ok(EXIT_OK)
}

fn cmd_synth(a: &SynthArgs) -> CmdResult {
    let cfg = PendulumConfig::new(a.lever_arm, a.gravity)?;
    let noise = NoiseModel {
        accel_std: a.accel_noise,
        gyro_std: a.gyro_noise,
        gyro_bias: [a.gyro_bias, 0.0, 0.0],
        seed: a.seed,
    };
    let ds = match a.trajectory {
        TrajectoryArg::Rest => synthetic_dataset(&cfg, &Constant(a.phi_op), a.t_end, a.dt, &noise)?,
        TrajectoryArg::Sine => synthetic_dataset(
            &cfg,
            &Sinusoid::new(a.phi_op, a.amplitude, a.omega),
            a.t_end,
            a.dt,
            &noise,
        )?,
        TrajectoryArg::Chirp => {
            let traj = Chirp {
                offset: a.phi_op,
                amplitude: a.amplitude,
                omega_start: a.omega,
                omega_end: a.omega_end,
                sweep_time: a.t_end,
            };
            synthetic_dataset(&cfg, &traj, a.t_end, a.dt, &noise)?
        }
    };
    save_csv(&a.out, &ds)?;
    Ok(EXIT_OK)
}
