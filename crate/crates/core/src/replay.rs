//! Recorded IMU datasets: CSV I/O, ground-truth alignment and open-loop error
//! evaluation.
//!
//! CSV schema (UTF-8, header required, `,` separator):
//! `t,ax,ay,az,gx,gy,gz[,qw,qx,qy,qz]` with time in s, acceleration in g,
//! angular rate in rad/s and an optional scalar-first unit quaternion as
//! ground truth. Columns are located by name; extra columns (for example a
//! magnetometer) are ignored.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::filters::{estimate_series, FilterKind};
use crate::imu::{sample_trajectory, ImuSample, NoiseModel, PendulumConfig, RollTrajectory};
use crate::quat::{quat_to_euler, wrap_angle, EulerAngles, Quaternion};

const IMU_COLUMNS: [&str; 7] = ["t", "ax", "ay", "az", "gx", "gy", "gz"];
const TRUTH_COLUMNS: [&str; 4] = ["qw", "qx", "qy", "qz"];

#[derive(Debug, Clone, PartialEq)]
pub struct RecordedDataset {
    pub samples: Vec<ImuSample>,
    /// One orientation per sample, at the sample's time.
    pub truth: Option<Vec<Quaternion>>,
}

impl RecordedDataset {
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.samples.windows(2).enumerate() {
            if !(w[1].t > w[0].t) {
                return Err(Error::NonMonotonicTime {
                    index: i + 1,
                    previous: w[0].t,
                    current: w[1].t,
                });
            }
        }
        if let Some(truth) = &self.truth {
            if truth.len() != self.samples.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} ground-truth rows for {} samples",
                    truth.len(),
                    self.samples.len()
                )));
            }
            truth.iter().try_for_each(|q| q.ensure_unit())?;
        }
        Ok(())
    }

    /// Ground truth as `(t, roll/pitch/yaw)`.
    pub fn truth_euler(&self) -> Result<Option<Vec<(f64, EulerAngles)>>> {
        let Some(truth) = &self.truth else {
            return Ok(None);
        };
        self.samples
            .iter()
            .zip(truth)
            .map(|(s, q)| Ok((s.t, quat_to_euler(*q)?)))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.kind() {
        csv::ErrorKind::Io(io) => Error::Io {
            path: path.to_path_buf(),
            message: io.to_string(),
        },
        _ => parse_error(path, line, e.to_string()),
    }
}

/// Reads a dataset from any reader; `path` is used in error messages only.
pub fn read_csv<R: Read>(reader: R, path: &Path) -> Result<RecordedDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let missing = |name: &str| Error::MissingColumn {
        path: path.to_path_buf(),
        column: name.to_string(),
    };
    let imu_idx = IMU_COLUMNS
        .iter()
        .map(|c| find(c).ok_or_else(|| missing(c)))
        .collect::<Result<Vec<_>>>()?;
    let truth_found: Vec<Option<usize>> = TRUTH_COLUMNS.iter().map(|c| find(c)).collect();
    let truth_idx = if truth_found.iter().all(Option::is_none) {
        None
    } else {
        let idx = truth_found
            .iter()
            .zip(TRUTH_COLUMNS)
            .map(|(i, c)| i.ok_or_else(|| missing(c)))
            .collect::<Result<Vec<_>>>()?;
        Some(idx)
    };

    let mut samples = Vec::new();
    let mut truth = truth_idx.as_ref().map(|_| Vec::new());
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize, name: &str| -> Result<f64> {
            let raw = record
                .get(i)
                .ok_or_else(|| parse_error(path, line, format!("missing field `{name}`")))?;
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line, format!("`{name}`: cannot parse {raw:?} as a number")))?;
            if !v.is_finite() {
                return Err(parse_error(path, line, format!("`{name}` is not finite")));
            }
            Ok(v)
        };
        let v = imu_idx
            .iter()
            .zip(IMU_COLUMNS)
            .map(|(&i, c)| field(i, c))
            .collect::<Result<Vec<_>>>()?;
        samples.push(ImuSample::new(v[0], [v[1], v[2], v[3]], [v[4], v[5], v[6]]));
        if let (Some(idx), Some(out)) = (&truth_idx, &mut truth) {
            let q = idx
                .iter()
                .zip(TRUTH_COLUMNS)
                .map(|(&i, c)| field(i, c))
                .collect::<Result<Vec<_>>>()?;
            let q = Quaternion::new(q[0], q[1], q[2], q[3]);
            q.ensure_unit()
                .map_err(|e| parse_error(path, line, format!("ground truth: {e}")))?;
            out.push(q);
        }
    }
    let ds = RecordedDataset { samples, truth };
    ds.validate()?;
    Ok(ds)
}

pub fn load_csv(path: &Path) -> Result<RecordedDataset> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    read_csv(std::io::BufReader::new(file), path)
}

/// Writes the dataset with shortest round-trip float formatting, so that
/// reading it back reproduces every value exactly.
pub fn write_csv<W: Write>(writer: W, ds: &RecordedDataset, path: &Path) -> Result<()> {
    ds.validate()?;
    let mut w = csv::WriterBuilder::new().from_writer(writer);
    let mut header: Vec<&str> = IMU_COLUMNS.to_vec();
    if ds.truth.is_some() {
        header.extend(TRUTH_COLUMNS);
    }
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (k, s) in ds.samples.iter().enumerate() {
        let mut row: Vec<String> = [s.t, s.accel[0], s.accel[1], s.accel[2], s.gyro[0], s.gyro[1], s.gyro[2]]
            .iter()
            .map(f64::to_string)
            .collect();
        if let Some(truth) = &ds.truth {
            row.extend(truth[k].to_array().iter().map(f64::to_string));
        }
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn save_csv(path: &Path, ds: &RecordedDataset) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    write_csv(std::io::BufWriter::new(file), ds, path)
}

/// Noise-free (unless `noise` says otherwise) pendulum recording with the
/// true roll as ground truth.
pub fn synthetic_dataset<T: RollTrajectory + ?Sized>(
    cfg: &PendulumConfig,
    traj: &T,
    t_end: f64,
    dt: f64,
    noise: &NoiseModel,
) -> Result<RecordedDataset> {
    let rows = sample_trajectory(cfg, traj, 0.0, t_end, dt)?;
    let mut samples: Vec<ImuSample> = rows.iter().map(|r| r.sample).collect();
    noise.apply(&mut samples)?;
    let truth = rows.iter().map(|r| Quaternion::from_roll(r.truth.roll)).collect();
    Ok(RecordedDataset {
        samples,
        truth: Some(truth),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedPair {
    pub t: f64,
    pub estimate: EulerAngles,
    pub truth: EulerAngles,
}

fn lerp_angle(a: f64, b: f64, u: f64) -> f64 {
    wrap_angle(a + u * wrap_angle(b - a))
}

/// Interpolates `truth` onto the estimate timestamps, per angle along the
/// shorter arc. Estimates outside the truth time range are dropped.
pub fn align_ground_truth(
    estimates: &[(f64, EulerAngles)],
    truth: &[(f64, EulerAngles)],
) -> Result<Vec<AlignedPair>> {
    for (i, w) in truth.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) {
            return Err(Error::NonMonotonicTime {
                index: i + 1,
                previous: w[0].0,
                current: w[1].0,
            });
        }
    }
    let (Some(first), Some(last)) = (truth.first(), truth.last()) else {
        return Err(Error::NoOverlap);
    };
    let mut out = Vec::with_capacity(estimates.len());
    let mut j = 0;
    for &(t, estimate) in estimates {
        if t < first.0 || t > last.0 {
            continue;
        }
        while j + 1 < truth.len() && truth[j + 1].0 <= t {
            j += 1;
        }
        let (t0, a) = truth[j];
        let truth_at = if t == t0 || j + 1 == truth.len() {
            a
        } else {
            let (t1, b) = truth[j + 1];
            let u = (t - t0) / (t1 - t0);
            EulerAngles::new(
                lerp_angle(a.roll, b.roll, u),
                lerp_angle(a.pitch, b.pitch, u),
                lerp_angle(a.yaw, b.yaw, u),
            )
        };
        out.push(AlignedPair {
            t,
            estimate,
            truth: truth_at,
        });
    }
    if out.is_empty() {
        return Err(Error::NoOverlap);
    }
    Ok(out)
}

/// Per-axis (roll, pitch, yaw) errors of an estimate against ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// rad
    pub rmse: [f64; 3],
    /// rad
    pub max_abs: [f64; 3],
    /// `(t, wrapped estimate − truth)` per aligned sample.
    pub errors: Vec<(f64, [f64; 3])>,
}

impl ErrorReport {
    pub fn from_pairs(pairs: &[AlignedPair]) -> Self {
        let errors: Vec<(f64, [f64; 3])> = pairs
            .iter()
            .map(|p| {
                let e = p.estimate.to_array();
                let t = p.truth.to_array();
                (p.t, std::array::from_fn(|k| wrap_angle(e[k] - t[k])))
            })
            .collect();
        let n = errors.len().max(1) as f64;
        let rmse = std::array::from_fn(|k| (errors.iter().map(|e| e.1[k] * e.1[k]).sum::<f64>() / n).sqrt());
        let max_abs = std::array::from_fn(|k| errors.iter().map(|e| e.1[k].abs()).fold(0.0, f64::max));
        ErrorReport { rmse, max_abs, errors }
    }
}

/// Runs the filter over the dataset from `q0` and scores it against the
/// dataset's ground truth.
pub fn evaluate(ds: &RecordedDataset, kind: FilterKind, q0: Quaternion) -> Result<ErrorReport> {
    ds.validate()?;
    let truth = ds
        .truth_euler()?
        .ok_or_else(|| Error::InvalidParameter("dataset has no ground truth".into()))?;
    let est = estimate_series(kind, &ds.samples, q0)?;
    let est: Vec<(f64, EulerAngles)> = ds.samples.iter().map(|s| s.t).zip(est).collect();
    let pairs = align_ground_truth(&est, &truth)?;
    Ok(ErrorReport::from_pairs(&pairs))
}

/// Writes `t,err_roll,err_pitch,err_yaw`.
pub fn write_errors<W: Write>(writer: W, report: &ErrorReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "err_roll", "err_pitch", "err_yaw"])
        .map_err(|e| csv_error(path, e))?;
    for (t, e) in &report.errors {
        w.write_record([t.to_string(), e[0].to_string(), e[1].to_string(), e[2].to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::Io {
        path: PathBuf::from(path),
        message: e.to_string(),
    })
}
