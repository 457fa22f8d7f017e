//! Weight sweep: re-run a scenario varying one agent's importance weight and
//! tabulate path lengths and arrival times.

use cclf_core::sim::{run_scenario, ScenarioConfig};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub weight: f64,
    pub path_lengths: Vec<f64>,
    /// Path length minus the straight start-goal distance, per agent.
    pub detours: Vec<f64>,
    pub arrival_times: Vec<Option<f64>>,
    pub deadlock_time: Option<f64>,
}

/// Runs the scenario once per weight value, overriding `agents[agent]`.
pub fn run_sweep(
    config: &ScenarioConfig,
    agent: usize,
    weights: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    if agent >= config.agents.len() {
        return Err(CliError::Validation(format!(
            "sweep agent {agent} out of range for {} agents",
            config.agents.len()
        )));
    }
    if weights.is_empty() {
        return Err(CliError::Validation("sweep needs at least one weight".to_string()));
    }
    let straight: Vec<f64> =
        config.agents.iter().map(|a| (a.goal - a.start).norm()).collect();

    let mut rows = Vec::with_capacity(weights.len());
    for &weight in weights {
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(CliError::Validation(format!("sweep weight {weight} must be positive")));
        }
        let mut variant = config.clone();
        variant.agents[agent].weight = weight;
        let log = run_scenario(&variant).map_err(CliError::runtime)?;
        let detours = log
            .summary
            .path_lengths
            .iter()
            .zip(&straight)
            .map(|(len, direct)| len - direct)
            .collect();
        rows.push(SweepRow {
            weight,
            path_lengths: log.summary.path_lengths.clone(),
            detours,
            arrival_times: log.summary.arrival_times.clone(),
            deadlock_time: log.summary.deadlock_time,
        });
    }
    Ok(rows)
}

/// Plain-text comparison table.
pub fn format_table(rows: &[SweepRow], agent: usize) -> String {
    let n = rows.first().map(|r| r.path_lengths.len()).unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("sweep over agent {agent} weight\n"));
    out.push_str("weight");
    for i in 0..n {
        out.push_str(&format!(",path_len_{i},detour_{i},arrival_{i}"));
    }
    out.push_str(",deadlock\n");
    for row in rows {
        out.push_str(&format!("{}", row.weight));
        for i in 0..n {
            let arrival = row.arrival_times[i]
                .map(|t| format!("{t:.2}"))
                .unwrap_or_else(|| "-".to_string());
            out.push_str(&format!(
                ",{:.4},{:.4},{arrival}",
                row.path_lengths[i], row.detours[i]
            ));
        }
        let deadlock = row
            .deadlock_time
            .map(|t| format!("{t:.2}"))
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(",{deadlock}\n"));
    }
    out
}
