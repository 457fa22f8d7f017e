//! Result persistence: trajectory CSV, metrics CSV, and the run manifest.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a CSV back yields bit-identical values and reruns of the same config
//! produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use cclf_core::sim::TrajectoryLog;
use serde::{Deserialize, Serialize};

use crate::config::{self, ScenarioFile};
use crate::{CliError, OutputFiles};

pub const TRAJECTORY_HEADER: &str =
    "t,agent,x,y,ux,uy,unom_x,unom_y,V,phi1,phi2,P,Q,status";
pub const METRICS_HEADER: &str = "t,weighted_phi2_sum";

/// Run metadata written alongside the CSVs. The embedded config is the
/// canonical scenario form, so `audit` can rebuild the exact run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub config_hash: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<String>,
    pub config: ScenarioFile,
    pub summary: ManifestSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestSummary {
    pub steps: usize,
    pub arrival_times: Vec<Option<f64>>,
    pub path_lengths: Vec<f64>,
    pub deadlock_time: Option<f64>,
    pub relaxed_steps: usize,
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// Renders the trajectory CSV content (one row per step per agent).
pub fn trajectory_csv(log: &TrajectoryLog) -> String {
    let mut out = String::with_capacity(log.records.len() * log.config.agents.len() * 64);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for record in &log.records {
        for i in 0..log.config.agents.len() {
            let phi = &record.phi[i];
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                record.time,
                i,
                record.positions[i].x,
                record.positions[i].y,
                record.applied[i].x,
                record.applied[i].y,
                record.nominal[i].x,
                record.nominal[i].y,
                phi.v,
                phi.phi1,
                phi.phi2,
                record.productivity[i],
                record.neighbor_effect[i],
                record.filter_status[i].as_str(),
            ));
        }
    }
    out
}

/// Renders the metrics CSV content (one row per step).
pub fn metrics_csv(log: &TrajectoryLog) -> String {
    let mut out = String::with_capacity(log.records.len() * 24);
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for record in &log.records {
        out.push_str(&format!("{},{}\n", record.time, record.weighted_phi2_sum));
    }
    out
}

/// Writes trajectory + metrics + manifest into `out_dir`, creating it if
/// needed. Plot files are written separately and recorded by the caller.
pub fn write_outputs(
    log: &TrajectoryLog,
    out_dir: &Path,
    started_unix_ms: u128,
) -> Result<OutputFiles, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;

    let files = OutputFiles {
        trajectory_csv: out_dir.join("trajectory.csv"),
        metrics_csv: out_dir.join("metrics.csv"),
        manifest_json: out_dir.join("manifest.json"),
        trajectory_svg: out_dir.join("trajectory.svg"),
        phi2_svg: out_dir.join("phi2.svg"),
    };

    write_file(&files.trajectory_csv, &trajectory_csv(log))?;
    write_file(&files.metrics_csv, &metrics_csv(log))?;

    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config::config_hash(&log.config),
        started_unix_ms,
        finished_unix_ms: now_ms(),
        outputs: vec![
            file_name(&files.trajectory_csv),
            file_name(&files.metrics_csv),
            file_name(&files.trajectory_svg),
            file_name(&files.phi2_svg),
        ],
        config: ScenarioFile::from_config(&log.config),
        summary: ManifestSummary {
            steps: log.records.len(),
            arrival_times: log.summary.arrival_times.clone(),
            path_lengths: log.summary.path_lengths.clone(),
            deadlock_time: log.summary.deadlock_time,
            relaxed_steps: log.summary.relaxed_steps,
        },
    };
    let manifest_text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Runtime(format!("manifest serialization: {e}")))?;
    write_file(&files.manifest_json, &manifest_text)?;

    Ok(files)
}

pub fn start_timestamp() -> u128 {
    now_ms()
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// One parsed trajectory row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajRow {
    pub t: f64,
    pub agent: usize,
    pub x: f64,
    pub y: f64,
    pub ux: f64,
    pub uy: f64,
    pub unom_x: f64,
    pub unom_y: f64,
    pub v: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub p: f64,
    pub q: f64,
    pub status: String,
}

/// Parses a trajectory CSV produced by [`trajectory_csv`].
pub fn read_trajectory(path: &Path) -> Result<Vec<TrajRow>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == TRAJECTORY_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "unexpected trajectory header {:?} in {}",
                other,
                path.display()
            )))
        }
    }
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(CliError::Validation(format!(
                "{}: line {}: expected 14 fields, got {}",
                path.display(),
                lineno + 2,
                fields.len()
            )));
        }
        let num = |idx: usize| -> Result<f64, CliError> {
            fields[idx].parse().map_err(|e| {
                CliError::Validation(format!(
                    "{}: line {}: field {}: {e}",
                    path.display(),
                    lineno + 2,
                    idx
                ))
            })
        };
        rows.push(TrajRow {
            t: num(0)?,
            agent: fields[1].parse().map_err(|e| {
                CliError::Validation(format!("{}: line {}: agent: {e}", path.display(), lineno + 2))
            })?,
            x: num(2)?,
            y: num(3)?,
            ux: num(4)?,
            uy: num(5)?,
            unom_x: num(6)?,
            unom_y: num(7)?,
            v: num(8)?,
            phi1: num(9)?,
            phi2: num(10)?,
            p: num(11)?,
            q: num(12)?,
            status: fields[13].to_string(),
        });
    }
    Ok(rows)
}

/// Parses a metrics CSV into `(t, weighted_phi2_sum)` pairs.
pub fn read_metrics(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == METRICS_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "unexpected metrics header {:?} in {}",
                other,
                path.display()
            )))
        }
    }
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| {
            CliError::Validation(format!("{}: line {}: not a pair", path.display(), lineno + 2))
        })?;
        let parse = |s: &str| -> Result<f64, CliError> {
            s.parse().map_err(|e| {
                CliError::Validation(format!("{}: line {}: {e}", path.display(), lineno + 2))
            })
        };
        out.push((parse(a)?, parse(b)?));
    }
    Ok(out)
}

/// Reads a manifest back.
pub fn read_manifest(path: &Path) -> Result<RunManifest, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Finds the sibling path of a trajectory CSV (manifest, metrics).
pub fn sibling(trajectory_csv: &Path, name: &str) -> PathBuf {
    trajectory_csv.parent().unwrap_or_else(|| Path::new(".")).join(name)
}
