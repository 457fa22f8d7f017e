//! Closed-loop simulation: rebuild the proximity graph, compute nominal
//! controls, filter each through its altruism constraint, integrate, and
//! record the audit trail.
//!
//! Within one step every agent decides against the same frozen snapshot.
//! The recorded chain values are recomputed with the *applied* inputs, so
//! the logged weighted sum is exactly the quantity the collaborative
//! invariant bounds: whenever every agent's filter reports `optimal` on a
//! symmetric graph, `sum_i w_i phi2_i <= 0` up to floating-point slack.

use alloc::vec;
use alloc::vec::Vec;

use crate::altruism::{
    cclf_altruism_constraint, input_rate, simple_altruism_constraint, AltruismConstraint,
};
use crate::dynamics::{self, AgentSpec, AgentState, CouplingParams, Dynamics, RepulsionDynamics};
use crate::graph::{build_proximity_graph, InteractionGraph};
use crate::lyapunov::{self, ClassKParams, Mode, PhiRecord};
use crate::qpsolve::{self, QpProblem, QpSolution, QpStatus};
use crate::vec2::Vec2;
use crate::{Error, Result, MIN_SEPARATION};

/// An agent is "arrived" within this distance of its goal [m].
pub const ARRIVAL_TOL: f64 = 0.05;
/// Deadlock detection window [s].
pub const DEADLOCK_WINDOW: f64 = 1.0;
/// Mean-speed threshold under which an off-goal agent counts as stalled [m/s].
pub const DEADLOCK_SPEED: f64 = 1e-4;

/// Which constraint filters the nominal input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Condition {
    /// No filter: nominal control applied directly (baseline runs).
    Nominal,
    /// First-order pairwise condition; two-agent scenarios only.
    Simple,
    /// The collaborative (second-order) condition.
    #[default]
    Cclf,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::Nominal => "nominal",
            Condition::Simple => "simple",
            Condition::Cclf => "cclf",
        }
    }
}

/// Initial description of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentInit {
    pub start: Vec2,
    pub goal: Vec2,
    pub weight: f64,
    pub u_max: f64,
}

/// A declarative experiment: agents, coupling, gains, and horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub agents: Vec<AgentInit>,
    pub gamma: f64,
    pub delta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub dt: f64,
    pub t_final: f64,
    pub mode: Mode,
    pub condition: Condition,
    /// Bound on the input-rate estimation error; tightens the CCLF row.
    pub margin: f64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::InvalidConfig { field: "agents", reason: "must be non-empty" });
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig { field: "dt", reason: "must be positive" });
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return Err(Error::InvalidConfig { field: "t_final", reason: "must be >= dt" });
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidConfig { field: "gamma", reason: "must be positive" });
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidConfig { field: "delta", reason: "must be positive" });
        }
        if !(self.sigma1 >= 0.0) || !self.sigma1.is_finite() {
            return Err(Error::InvalidConfig { field: "sigma1", reason: "must be >= 0" });
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return Err(Error::InvalidConfig { field: "sigma2", reason: "must be >= 0" });
        }
        if !(self.margin >= 0.0) || !self.margin.is_finite() {
            return Err(Error::InvalidConfig { field: "margin", reason: "must be >= 0" });
        }
        if self.condition == Condition::Simple && self.agents.len() != 2 {
            return Err(Error::InvalidConfig {
                field: "condition",
                reason: "`simple` is defined for exactly 2 agents",
            });
        }
        for agent in &self.agents {
            if !agent.start.is_finite() || !agent.goal.is_finite() {
                return Err(Error::InvalidConfig { field: "agents", reason: "must be finite" });
            }
            if !(agent.weight > 0.0) || !agent.weight.is_finite() {
                return Err(Error::InvalidConfig { field: "weight", reason: "must be positive" });
            }
            if !(agent.u_max > 0.0) || !agent.u_max.is_finite() {
                return Err(Error::InvalidConfig { field: "u_max", reason: "must be positive" });
            }
        }
        for i in 0..self.agents.len() {
            for j in (i + 1)..self.agents.len() {
                if (self.agents[i].start - self.agents[j].start).norm() < MIN_SEPARATION {
                    return Err(Error::InvalidConfig {
                        field: "agents",
                        reason: "coincident start positions",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn specs(&self) -> Vec<AgentSpec> {
        self.agents
            .iter()
            .map(|a| AgentSpec { goal: a.goal, weight: a.weight, u_max: a.u_max })
            .collect()
    }

    pub fn initial_states(&self) -> Vec<AgentState> {
        self.agents.iter().map(|a| AgentState::at(a.start)).collect()
    }

    pub fn coupling(&self) -> CouplingParams {
        CouplingParams { gamma: self.gamma, delta: self.delta }
    }

    pub fn class_k(&self) -> ClassKParams {
        ClassKParams { sigma1: self.sigma1, sigma2: self.sigma2 }
    }

    /// Number of integration steps; the log holds one more record than this.
    /// The small epsilon keeps `floor` from dropping a step when `t_final/dt`
    /// lands a hair under an integer.
    pub fn step_count(&self) -> usize {
        libm::floor(self.t_final / self.dt + 1e-9) as usize
    }
}

/// Everything recorded at one time step (pre-integration snapshot).
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub positions: Vec<Vec2>,
    pub nominal: Vec<Vec2>,
    pub applied: Vec<Vec2>,
    pub nominal_status: Vec<QpStatus>,
    pub filter_status: Vec<QpStatus>,
    pub phi: Vec<PhiRecord>,
    pub weighted_phi2_sum: f64,
    pub productivity: Vec<f64>,
    pub neighbor_effect: Vec<f64>,
}

impl StepRecord {
    pub fn all_filters_optimal(&self) -> bool {
        self.filter_status.iter().all(|s| *s == QpStatus::Optimal)
    }
}

/// Per-run summary metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// First time each agent came within [`ARRIVAL_TOL`] of its goal.
    pub arrival_times: Vec<Option<f64>>,
    pub path_lengths: Vec<f64>,
    /// First time a full window of stalled off-goal agents was observed.
    pub deadlock_time: Option<f64>,
    /// Steps at which any filter reported something other than `optimal`.
    pub relaxed_steps: usize,
}

/// Full time-indexed simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub config: ScenarioConfig,
    pub records: Vec<StepRecord>,
    pub summary: RunSummary,
}

/// Goal-approach rate `P_i = (x_i* - x_i)^T u_i`.
pub fn productivity(i: usize, positions: &[Vec2], specs: &[AgentSpec], u: Vec2) -> f64 {
    (specs[i].goal - positions[i]).dot(u)
}

/// Net effect of the coupling on agent `i`'s goal approach:
/// `Q_i = (x_i* - x_i)^T fbar_i`. Positive means the neighbors push the
/// agent toward its goal.
pub fn neighbor_effect(
    i: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
) -> Result<f64> {
    let fbar = dynamics.drift(i, positions, graph)?;
    Ok((specs[i].goal - positions[i]).dot(fbar))
}

fn filter_input(
    i: usize,
    config: &ScenarioConfig,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
    nominal: Vec2,
    u_prev: Vec2,
) -> Result<(Vec2, QpStatus)> {
    let u_max = specs[i].u_max;
    let constraint = match config.condition {
        Condition::Nominal => None,
        Condition::Simple => {
            let other = 1 - i; // validated: exactly two agents
            Some(AltruismConstraint::Linear(simple_altruism_constraint(
                i, other, positions, specs, graph, dynamics,
            )?))
        }
        Condition::Cclf => Some(cclf_altruism_constraint(
            i,
            positions,
            specs,
            graph,
            dynamics,
            &config.class_k(),
            config.dt,
            u_prev,
            config.mode,
            config.margin,
        )?),
    };

    let solution: QpSolution = match &constraint {
        None => qpsolve::solve(&QpProblem {
            target: nominal,
            rows: vec![],
            norm_bound: Some(u_max),
        }),
        Some(AltruismConstraint::Linear(row)) => qpsolve::solve(&QpProblem {
            target: nominal,
            rows: vec![*row],
            norm_bound: Some(u_max),
        }),
        Some(AltruismConstraint::Quadratic(qc)) => {
            qpsolve::solve_disc(nominal, qc.center(), qc.radius_sq(), Some(u_max))
        }
    };

    match solution.status {
        QpStatus::Optimal => Ok((solution.u, QpStatus::Optimal)),
        _ => {
            // Altruism row unsatisfiable within the input bound: drop it and
            // keep the ball projection of the nominal, flagged relaxed.
            let fallback = qpsolve::solve(&QpProblem {
                target: nominal,
                rows: vec![],
                norm_bound: Some(u_max),
            });
            Ok((fallback.u, QpStatus::Relaxed))
        }
    }
}

/// Executes one pipeline step against a frozen snapshot and returns the
/// integrated states plus the log record for the snapshot.
pub fn step_once(
    config: &ScenarioConfig,
    states: &[AgentState],
    time: f64,
) -> Result<(Vec<AgentState>, StepRecord)> {
    let n = states.len();
    let specs = config.specs();
    let dynamics = RepulsionDynamics::new(config.coupling());
    let positions: Vec<Vec2> = states.iter().map(|s| s.position).collect();
    let graph = build_proximity_graph(&positions, config.delta)?;

    let mut nominal = Vec::with_capacity(n);
    let mut nominal_status = Vec::with_capacity(n);
    for i in 0..n {
        let (u, status) =
            qpsolve::nominal_control(i, &positions, &specs, &graph, &dynamics, config.sigma1)?;
        nominal.push(u);
        nominal_status.push(status);
    }

    let mut applied = Vec::with_capacity(n);
    let mut filter_status = Vec::with_capacity(n);
    for i in 0..n {
        let (u, status) = filter_input(
            i,
            config,
            &positions,
            &specs,
            &graph,
            &dynamics,
            nominal[i],
            states[i].last_input,
        )?;
        applied.push(u);
        filter_status.push(status);
    }

    // Audit record: chain values recomputed with the applied inputs and the
    // realized input rates.
    let mut phi = Vec::with_capacity(n);
    let mut weighted = 0.0;
    let mut prod = Vec::with_capacity(n);
    let mut effect = Vec::with_capacity(n);
    for i in 0..n {
        let udot = input_rate(applied[i], states[i].last_input, config.dt)?;
        let record = lyapunov::phi_chain(
            i,
            &positions,
            &specs,
            &graph,
            &dynamics,
            &config.class_k(),
            applied[i],
            udot,
            &applied,
            config.mode,
        )?;
        weighted += specs[i].weight * record.phi2;
        phi.push(record);
        prod.push(productivity(i, &positions, &specs, applied[i]));
        effect.push(neighbor_effect(i, &positions, &specs, &graph, &dynamics)?);
    }

    let next = dynamics::step(states, &applied, config.dt, &graph, &dynamics)?;
    let record = StepRecord {
        time,
        positions,
        nominal,
        applied,
        nominal_status,
        filter_status,
        phi,
        weighted_phi2_sum: weighted,
        productivity: prod,
        neighbor_effect: effect,
    };
    Ok((next, record))
}

/// Runs the scenario to `t_final` and produces the full log. Deterministic:
/// identical configs yield identical logs.
pub fn run_scenario(config: &ScenarioConfig) -> Result<TrajectoryLog> {
    config.validate()?;
    let n_steps = config.step_count();
    let mut states = config.initial_states();
    let mut records = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let time = k as f64 * config.dt;
        let (next, record) = step_once(config, &states, time)?;
        records.push(record);
        if k < n_steps {
            states = next;
        }
    }
    let summary = summarize(config, &records);
    Ok(TrajectoryLog { config: config.clone(), records, summary })
}

fn summarize(config: &ScenarioConfig, records: &[StepRecord]) -> RunSummary {
    let n = config.agents.len();
    let mut arrival_times = vec![None; n];
    let mut path_lengths = vec![0.0; n];

    for (k, record) in records.iter().enumerate() {
        for i in 0..n {
            if arrival_times[i].is_none()
                && (record.positions[i] - config.agents[i].goal).norm() <= ARRIVAL_TOL
            {
                arrival_times[i] = Some(record.time);
            }
            if k + 1 < records.len() {
                path_lengths[i] += (records[k + 1].positions[i] - record.positions[i]).norm();
            }
        }
    }

    let relaxed_steps = records.iter().filter(|r| !r.all_filters_optimal()).count();

    // Deadlock: a full window in which every off-goal agent barely moves.
    let window = libm::floor(DEADLOCK_WINDOW / config.dt + 0.5) as usize;
    let mut deadlock_time = None;
    if window >= 1 && records.len() > window {
        'scan: for end in window..records.len() {
            let mut any_off_goal = false;
            for i in 0..n {
                let off_goal = (records[end].positions[i] - config.agents[i].goal).norm()
                    > ARRIVAL_TOL;
                if !off_goal {
                    continue;
                }
                any_off_goal = true;
                let mut travelled = 0.0;
                for k in (end - window)..end {
                    travelled += (records[k + 1].positions[i] - records[k].positions[i]).norm();
                }
                let mean_speed = travelled / (window as f64 * config.dt);
                if mean_speed >= DEADLOCK_SPEED {
                    continue 'scan;
                }
            }
            if any_off_goal {
                deadlock_time = Some(records[end].time);
                break;
            }
        }
    }

    RunSummary { arrival_times, path_lengths, deadlock_time, relaxed_steps }
}

/// Theorem-1 audit over a finished log.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditResult {
    /// Per-step weighted sums, recomputed from the raw chain records.
    pub weighted_sums: Vec<f64>,
    /// Per-step tolerance `1e-6 * max(1, sum_i w_i |b_i|)`.
    pub tolerances: Vec<f64>,
    /// Audited steps (every filter optimal) whose sum exceeded tolerance.
    pub violations: Vec<usize>,
    pub audited_steps: usize,
    pub skipped_steps: usize,
}

/// Recomputes `sum_i w_i phi2_i` per step from the raw per-agent records and
/// flags audited steps that exceed the scaled tolerance. Steps with any
/// non-`optimal` filter status are skipped (counted, not asserted).
pub fn theorem1_audit(log: &TrajectoryLog) -> AuditResult {
    let weights: Vec<f64> = log.config.agents.iter().map(|a| a.weight).collect();
    let mut weighted_sums = Vec::with_capacity(log.records.len());
    let mut tolerances = Vec::with_capacity(log.records.len());
    let mut violations = Vec::new();
    let mut audited_steps = 0;
    let mut skipped_steps = 0;

    for (k, record) in log.records.iter().enumerate() {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (i, phi) in record.phi.iter().enumerate() {
            sum += weights[i] * phi.phi2;
            scale += weights[i] * phi.b.abs();
        }
        let tol = 1e-6 * scale.max(1.0);
        weighted_sums.push(sum);
        tolerances.push(tol);
        if record.all_filters_optimal() {
            audited_steps += 1;
            if sum > tol {
                violations.push(k);
            }
        } else {
            skipped_steps += 1;
        }
    }

    AuditResult { weighted_sums, tolerances, violations, audited_steps, skipped_steps }
}
