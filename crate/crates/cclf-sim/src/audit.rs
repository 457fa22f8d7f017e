//! Offline audit: rebuild the chain values from a logged trajectory and
//! cross-check them against the persisted columns and metric sums.
//!
//! The CSV stores shortest round-trip decimals, so parsed values are
//! bit-identical to what the run computed; the recomputation runs the same
//! pipeline stages from raw positions and applied inputs only.

use std::path::Path;

use cclf_core::dynamics::RepulsionDynamics;
use cclf_core::graph::build_proximity_graph;
use cclf_core::lyapunov::phi_chain;
use cclf_core::altruism::input_rate;
use cclf_core::sim::{neighbor_effect, productivity, ScenarioConfig};
use cclf_core::vec2::Vec2;
use cclf_core::QpStatus;

use crate::csvio::{self, TrajRow};
use crate::CliError;

/// Tolerance for the recomputation round-trip.
pub const AUDIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub steps: usize,
    pub agents: usize,
    /// Largest deviation between logged and recomputed per-agent phi2.
    pub max_phi2_dev: f64,
    /// Largest deviation between the metrics file and recomputed sums.
    pub max_weighted_dev: f64,
    /// Steps (all filters optimal) where the weighted sum exceeded the
    /// scaled collaborative tolerance.
    pub theorem1_violations: Vec<usize>,
    pub audited_steps: usize,
    pub skipped_steps: usize,
}

impl AuditReport {
    pub fn round_trip_ok(&self) -> bool {
        self.max_phi2_dev <= AUDIT_TOL && self.max_weighted_dev <= AUDIT_TOL
    }
}

/// Audits a trajectory CSV; the manifest and metrics files must sit next to
/// it (as `run` writes them).
pub fn audit_trajectory(trajectory_csv: &Path) -> Result<AuditReport, CliError> {
    let manifest = csvio::read_manifest(&csvio::sibling(trajectory_csv, "manifest.json"))?;
    let config = manifest.config.into_config()?;
    let rows = csvio::read_trajectory(trajectory_csv)?;
    let metrics = csvio::read_metrics(&csvio::sibling(trajectory_csv, "metrics.csv"))?;
    audit_rows(&config, &rows, &metrics)
}

/// Core of the audit, separated for testing.
pub fn audit_rows(
    config: &ScenarioConfig,
    rows: &[TrajRow],
    metrics: &[(f64, f64)],
) -> Result<AuditReport, CliError> {
    let n = config.agents.len();
    if n == 0 || rows.len() % n != 0 {
        return Err(CliError::Validation(format!(
            "row count {} is not a multiple of the {} agents",
            rows.len(),
            n
        )));
    }
    let steps = rows.len() / n;
    if metrics.len() != steps {
        return Err(CliError::Validation(format!(
            "metrics rows {} do not match {} steps",
            metrics.len(),
            steps
        )));
    }

    let specs = config.specs();
    let weights: Vec<f64> = config.agents.iter().map(|a| a.weight).collect();
    let dynamics = RepulsionDynamics::new(config.coupling());
    let k = config.class_k();

    let mut max_phi2_dev: f64 = 0.0;
    let mut max_weighted_dev: f64 = 0.0;
    let mut violations = Vec::new();
    let mut audited_steps = 0;
    let mut skipped_steps = 0;
    let mut prev_inputs = vec![Vec2::ZERO; n];

    for step in 0..steps {
        let chunk = &rows[step * n..(step + 1) * n];
        for (i, row) in chunk.iter().enumerate() {
            if row.agent != i {
                return Err(CliError::Validation(format!(
                    "step {step}: expected agent {i}, found {}",
                    row.agent
                )));
            }
        }
        let positions: Vec<Vec2> = chunk.iter().map(|r| Vec2::new(r.x, r.y)).collect();
        let applied: Vec<Vec2> = chunk.iter().map(|r| Vec2::new(r.ux, r.uy)).collect();
        let graph = build_proximity_graph(&positions, config.delta)
            .map_err(CliError::runtime)?;

        let mut weighted = 0.0;
        let mut scale = 0.0;
        for i in 0..n {
            let udot = input_rate(applied[i], prev_inputs[i], config.dt)
                .map_err(CliError::runtime)?;
            let record = phi_chain(
                i,
                &positions,
                &specs,
                &graph,
                &dynamics,
                &k,
                applied[i],
                udot,
                &applied,
                config.mode,
            )
            .map_err(CliError::runtime)?;
            let dev = (record.phi2 - chunk[i].phi2).abs();
            max_phi2_dev = max_phi2_dev.max(dev);
            weighted += weights[i] * record.phi2;
            scale += weights[i] * record.b.abs();

            // Sanity-check the remaining derived columns too.
            let p = productivity(i, &positions, &specs, applied[i]);
            let q = neighbor_effect(i, &positions, &specs, &graph, &dynamics)
                .map_err(CliError::runtime)?;
            max_phi2_dev = max_phi2_dev
                .max((record.v - chunk[i].v).abs())
                .max((record.phi1 - chunk[i].phi1).abs())
                .max((p - chunk[i].p).abs())
                .max((q - chunk[i].q).abs());
        }

        max_weighted_dev = max_weighted_dev.max((weighted - metrics[step].1).abs());

        let all_optimal = chunk.iter().all(|r| r.status == QpStatus::Optimal.as_str());
        if all_optimal {
            audited_steps += 1;
            if weighted > 1e-6 * scale.max(1.0) {
                violations.push(step);
            }
        } else {
            skipped_steps += 1;
        }

        prev_inputs = applied;
    }

    Ok(AuditReport {
        steps,
        agents: n,
        max_phi2_dev,
        max_weighted_dev,
        theorem1_violations: violations,
        audited_steps,
        skipped_steps,
    })
}
