//! Altruistic decision-making for networked multi-agent systems.
//!
//! Agents navigate to waypoints under induced repulsive coupling. Each agent
//! computes a nominal goal-seeking input from a control Lyapunov function and
//! then filters it through a Hamilton's-rule constraint: relatedness-weighted
//! benefit to neighbors must outweigh the agent's own cost, both priced in the
//! second-order goal-reaching dynamics of a collaborative CLF.
//!
//! The crate is `no_std` + `alloc` so the control path can run on embedded
//! targets; IO, scenario files, and the CLI live in the companion `cclf-sim`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod altruism;
pub mod dynamics;
pub mod graph;
pub mod lyapunov;
pub mod qpsolve;
pub mod sim;
pub mod vec2;

pub use altruism::{AltruismConstraint, LinearConstraint, QuadraticConstraint};
pub use dynamics::{AgentSpec, AgentState, CouplingParams, Dynamics, RepulsionDynamics};
pub use graph::InteractionGraph;
pub use lyapunov::{ClassKParams, LieTerms, Mode, PhiRecord};
pub use qpsolve::{QpProblem, QpSolution, QpStatus};
pub use sim::{Condition, ScenarioConfig, StepRecord, TrajectoryLog};

use core::fmt;

/// Distances below this are treated as coincident geometry: the inverse-square
/// repulsion field is singular there and every downstream quantity blows up.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Errors surfaced by the control and simulation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two agents are closer than [`MIN_SEPARATION`]; the repulsion field is
    /// undefined at coincidence.
    CoincidentPositions { i: usize, j: usize },
    /// An agent index was outside `[0, n)`.
    IndexOutOfRange { index: usize, n: usize },
    /// An edge or neighbor query referenced a pair that is not in the graph.
    NotANeighbor { i: usize, j: usize },
    /// A scalar parameter violated its domain (named for diagnostics).
    InvalidParameter { name: &'static str },
    /// A value that must be finite was NaN or infinite.
    NonFinite { name: &'static str },
    /// A constraint set admits no solution by construction.
    InfeasibleConstraint,
    /// Scenario configuration violated an invariant.
    InvalidConfig { field: &'static str, reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CoincidentPositions { i, j } => {
                write!(f, "agents {i} and {j} are coincident (singular repulsion geometry)")
            }
            Error::IndexOutOfRange { index, n } => {
                write!(f, "agent index {index} out of range for {n} agents")
            }
            Error::NotANeighbor { i, j } => {
                write!(f, "agent {j} is not an in-neighbor of agent {i}")
            }
            Error::InvalidParameter { name } => write!(f, "parameter `{name}` out of domain"),
            Error::NonFinite { name } => write!(f, "`{name}` must be finite"),
            Error::InfeasibleConstraint => write!(f, "constraint set is infeasible by construction"),
            Error::InvalidConfig { field, reason } => {
                write!(f, "invalid config field `{field}`: {reason}")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
