//! Control-affine networked dynamics with induced repulsive coupling.
//!
//! Each agent follows `xdot_i = fbar_i(x_i, x_Ni) + g_i * u_i`, where the
//! drift `fbar_i` folds the designed coupling into the uncontrolled motion.
//! The shipped instance is the planar single integrator with identity input
//! matrix and an inverse-square repulsion field between graph neighbors:
//!
//! ```text
//!   fbar_i = gamma * sum_{j in N_i} (x_i - x_j) / ||x_i - x_j||^2
//! ```
//!
//! The field's Jacobians are what price neighbor influence in the
//! second-order CLF terms, so they are part of the dynamics interface.

use alloc::vec::Vec;

use crate::graph::InteractionGraph;
use crate::vec2::{Mat2, Vec2};
use crate::{Error, Result, MIN_SEPARATION};

/// Static description of an agent: goal, importance weight, input bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentSpec {
    /// Waypoint the agent stabilizes to [m].
    pub goal: Vec2,
    /// Positive task-importance weight; relatedness is `r_ij = w_j / w_i`.
    pub weight: f64,
    /// Norm bound on the control input [m/s].
    pub u_max: f64,
}

impl AgentSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.goal.is_finite() {
            return Err(Error::NonFinite { name: "goal" });
        }
        if !(self.weight > 0.0) || !self.weight.is_finite() {
            return Err(Error::InvalidParameter { name: "weight" });
        }
        if !(self.u_max > 0.0) || !self.u_max.is_finite() {
            return Err(Error::InvalidParameter { name: "u_max" });
        }
        Ok(())
    }
}

/// Evolving per-agent state: position plus the input applied at the previous
/// step (the causally available anchor for the input-rate estimate).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AgentState {
    pub position: Vec2,
    pub last_input: Vec2,
}

impl AgentState {
    pub fn at(position: Vec2) -> Self {
        AgentState { position, last_input: Vec2::ZERO }
    }
}

/// Parameters of the induced repulsive coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    /// Repulsion strength [m^2/s].
    pub gamma: f64,
    /// Interaction radius [m].
    pub delta: f64,
}

impl CouplingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter { name: "gamma" });
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidParameter { name: "delta" });
        }
        Ok(())
    }
}

/// Abstract control-affine networked dynamics: drift, input matrix, and the
/// state Jacobians of the drift. The CCLF terms assume the input matrix is
/// constant per agent (position-independent actuation).
pub trait Dynamics {
    /// Uncontrolled velocity `fbar_i` of agent `i` at the given positions.
    fn drift(&self, i: usize, positions: &[Vec2], graph: &InteractionGraph) -> Result<Vec2>;

    /// `d fbar_i / d x_i` — sensitivity of `i`'s drift to its own state.
    fn drift_jacobian_own(
        &self,
        i: usize,
        positions: &[Vec2],
        graph: &InteractionGraph,
    ) -> Result<Mat2>;

    /// `d fbar_i / d x_j` for an in-neighbor `j` of `i`.
    fn drift_jacobian_neighbor(
        &self,
        i: usize,
        j: usize,
        positions: &[Vec2],
        graph: &InteractionGraph,
    ) -> Result<Mat2>;

    /// Constant input matrix `g_i`.
    fn input_matrix(&self, i: usize) -> Mat2;
}

/// The shipped system: single integrators coupled by inverse-square
/// repulsion, identity input matrix.
#[derive(Debug, Clone, Copy)]
pub struct RepulsionDynamics {
    pub params: CouplingParams,
}

impl RepulsionDynamics {
    pub fn new(params: CouplingParams) -> Self {
        RepulsionDynamics { params }
    }
}

impl Dynamics for RepulsionDynamics {
    fn drift(&self, i: usize, positions: &[Vec2], graph: &InteractionGraph) -> Result<Vec2> {
        repulsion_field(i, positions, graph, self.params.gamma)
    }

    fn drift_jacobian_own(
        &self,
        i: usize,
        positions: &[Vec2],
        graph: &InteractionGraph,
    ) -> Result<Mat2> {
        // The field depends on x_i only through the pair displacements, so
        // d/dx_i is the negated sum of the per-neighbor Jacobians.
        let mut acc = Mat2::ZERO;
        for j in graph.in_neighbors(i)? {
            acc = acc - repulsion_jacobian(i, j, positions, self.params.gamma)?;
        }
        Ok(acc)
    }

    fn drift_jacobian_neighbor(
        &self,
        i: usize,
        j: usize,
        positions: &[Vec2],
        graph: &InteractionGraph,
    ) -> Result<Mat2> {
        if !graph.contains_edge(i, j) {
            return Err(Error::NotANeighbor { i, j });
        }
        repulsion_jacobian(i, j, positions, self.params.gamma)
    }

    fn input_matrix(&self, _i: usize) -> Mat2 {
        Mat2::IDENTITY
    }
}

/// Repelling potential-field velocity acting on agent `i`:
/// `gamma * sum_{j in N_i} (x_i - x_j) / ||x_i - x_j||^2`, zero when the
/// neighborhood is empty.
pub fn repulsion_field(
    i: usize,
    positions: &[Vec2],
    graph: &InteractionGraph,
    gamma: f64,
) -> Result<Vec2> {
    let mut field = Vec2::ZERO;
    for j in graph.in_neighbors(i)? {
        let d = positions[i] - positions[j];
        let dist_sq = d.norm_sq();
        if dist_sq < MIN_SEPARATION * MIN_SEPARATION {
            return Err(Error::CoincidentPositions { i, j });
        }
        field += d / dist_sq;
    }
    Ok(field * gamma)
}

/// Jacobian of agent `i`'s repulsion field with respect to neighbor `j`:
/// `gamma * (-I / ||d||^2 + 2 d d^T / ||d||^4)` with `d = x_i - x_j`.
pub fn repulsion_jacobian(i: usize, j: usize, positions: &[Vec2], gamma: f64) -> Result<Mat2> {
    let d = positions[i] - positions[j];
    let dist_sq = d.norm_sq();
    if dist_sq < MIN_SEPARATION * MIN_SEPARATION {
        return Err(Error::CoincidentPositions { i, j });
    }
    let jac = d.outer(d) * (2.0 / (dist_sq * dist_sq)) - Mat2::IDENTITY * (1.0 / dist_sq);
    Ok(jac * gamma)
}

/// Explicit-Euler integration of one step: `x_i <- x_i + dt * (drift_i + u_i)`
/// against a frozen snapshot; `last_input <- u_i`.
pub fn step(
    states: &[AgentState],
    inputs: &[Vec2],
    dt: f64,
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
) -> Result<Vec<AgentState>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter { name: "dt" });
    }
    let positions: Vec<Vec2> = states.iter().map(|s| s.position).collect();
    let mut next = Vec::with_capacity(states.len());
    for (i, state) in states.iter().enumerate() {
        let velocity = dynamics.drift(i, &positions, graph)? + inputs[i];
        next.push(AgentState {
            position: state.position + velocity * dt,
            last_input: inputs[i],
        });
    }
    Ok(next)
}
