//! CLF values, Lie-derivative terms, and the collaborative decomposition.
//!
//! Each agent carries the quadratic CLF `V_i = 1/2 ||x_i* - x_i||^2`. Its
//! second time derivative along the networked dynamics exposes neighbors'
//! control inputs, which is what lets cost and benefit be attributed across
//! agents. With linear class-K gains `sigma1, sigma2` the chain
//!
//! ```text
//!   phi0 = V
//!   phi1 = Vdot + sigma1 * V
//!   phi2 = phi1dot + sigma2 * phi1
//! ```
//!
//! splits exactly into `phi2 = sum_j a_ij(u_j) + b_i(u_i, udot_i)`, where
//! `a_ij` collects every term involving neighbor `j`'s state derivative and
//! `b_i` collects the agent's own terms. `-a_ji` is the benefit agent `i`
//! confers on `j`; `b_i` is the cost `i` pays.
//!
//! Derivatives with respect to the agent's own state stay in `b_i`'s
//! ingredients (`Lf2V`, `q`, `c`); all neighbor-state derivatives are routed
//! into `a_ij`. That split is the only one under which the decomposition
//! identity closes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dynamics::{AgentSpec, Dynamics};
use crate::graph::InteractionGraph;
use crate::vec2::{Mat2, Vec2};
use crate::Result;

/// Linear class-K gains for the first- and second-order conditions [1/s].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassKParams {
    pub sigma1: f64,
    pub sigma2: f64,
}

impl ClassKParams {
    pub fn sum(&self) -> f64 {
        self.sigma1 + self.sigma2
    }

    pub fn product(&self) -> f64 {
        self.sigma1 * self.sigma2
    }
}

/// Whether the quadratic input term `u^T Lg2V u` participates.
///
/// For the shipped system (`g = I`, quadratic `V`) that term is exactly
/// `||u||^2`, not zero; `Paper` drops it so the altruism constraint stays a
/// single linear row, `Full` keeps it and the constraint becomes a disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Paper,
    Full,
}

/// Lie-derivative bundle for one agent at one snapshot.
///
/// `cross` is the row `LfLgV^T + LgLfV` multiplying `u_i` in `Vddot`;
/// `lg2_v = g^T g` is reported unconditionally and consumers drop it in
/// [`Mode::Paper`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieTerms {
    pub lf_v: f64,
    pub lg_v: Vec2,
    pub lf2_v: f64,
    pub cross: Vec2,
    pub lg2_v: Mat2,
}

/// Per-agent audit record of the chain values at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiRecord {
    pub v: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub b: f64,
    /// Neighbor-attributable parts of `phi2`, keyed by in-neighbor index.
    pub a_terms: BTreeMap<usize, f64>,
}

/// `V_i = 1/2 ||goal - x||^2`.
pub fn clf_value(x: Vec2, goal: Vec2) -> f64 {
    0.5 * (goal - x).norm_sq()
}

/// Gradient row `dV/dx = (x - goal)^T`.
pub fn clf_gradient(x: Vec2, goal: Vec2) -> Vec2 {
    x - goal
}

/// All Lie-derivative terms of agent `i`'s CLF at the snapshot.
///
/// Own-state derivatives only; neighbor-state derivatives live in [`a_ij`].
pub fn lie_terms(
    i: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
) -> Result<LieTerms> {
    let e = clf_gradient(positions[i], specs[i].goal);
    let fbar = dynamics.drift(i, positions, graph)?;
    let g = dynamics.input_matrix(i);
    let j_own = dynamics.drift_jacobian_own(i, positions, graph)?;

    // d(LfV)/dx_i = fbar^T + e^T * J_own, as a row covector.
    let grad_lfv_own = fbar + j_own.tr_mul_vec(e);

    Ok(LieTerms {
        lf_v: e.dot(fbar),
        lg_v: g.tr_mul_vec(e),
        lf2_v: grad_lfv_own.dot(fbar),
        cross: g.tr_mul_vec(fbar + grad_lfv_own),
        lg2_v: g.transpose() * g,
    })
}

/// Neighbor term `a_ij = LfjLfiVi + LgjLfiVi * u_j`, the full effect of
/// neighbor `j`'s motion on agent `i`'s second-order goal dynamics.
pub fn a_ij(
    i: usize,
    j: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
    u_j: Vec2,
) -> Result<f64> {
    let (coeff, constant) = a_ij_parts(i, j, positions, specs, graph, dynamics)?;
    Ok(constant + coeff.dot(u_j))
}

/// Affine decomposition of `a_ij` in `u_j`: returns `(coeff, constant)` with
/// `a_ij(u_j) = coeff . u_j + constant`.
pub fn a_ij_parts(
    i: usize,
    j: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
) -> Result<(Vec2, f64)> {
    let e = clf_gradient(positions[i], specs[i].goal);
    // Errors with NotANeighbor when (i, j) is absent.
    let j_ij = dynamics.drift_jacobian_neighbor(i, j, positions, graph)?;
    // Row e^T * J_ij.
    let row = j_ij.tr_mul_vec(e);
    let fbar_j = dynamics.drift(j, positions, graph)?;
    let g_j = dynamics.input_matrix(j);
    Ok((g_j.tr_mul_vec(row), row.dot(fbar_j)))
}

/// The self-term ingredients of `b_i`:
/// `q_i = LfLgV^T + LgLfV + (s1+s2) LgV` and
/// `c_i = Lf2V + (s1+s2) LfV + s1*s2*V`.
pub fn q_and_c(
    i: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
    k: &ClassKParams,
) -> Result<(Vec2, f64)> {
    let t = lie_terms(i, positions, specs, graph, dynamics)?;
    let v = clf_value(positions[i], specs[i].goal);
    let q = t.cross + t.lg_v * k.sum();
    let c = t.lf2_v + k.sum() * t.lf_v + k.product() * v;
    Ok((q, c))
}

/// Cost of input `u_i` in agent `i`'s second-order goal dynamics:
/// `b_i = [u^T Lg2V u] + q_i u + LgV udot + c_i` (quadratic term kept only in
/// [`Mode::Full`]).
pub fn b_value(
    i: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
    k: &ClassKParams,
    u_i: Vec2,
    udot_i: Vec2,
    mode: Mode,
) -> Result<f64> {
    let t = lie_terms(i, positions, specs, graph, dynamics)?;
    let (q, c) = q_and_c(i, positions, specs, graph, dynamics, k)?;
    let quad = match mode {
        Mode::Paper => 0.0,
        Mode::Full => t.lg2_v.quad_form(u_i, u_i),
    };
    Ok(quad + q.dot(u_i) + t.lg_v.dot(udot_i) + c)
}

/// Evaluates the full chain for agent `i` and returns the audit record.
/// `u_all` holds every agent's input; only in-neighbors' entries are read.
pub fn phi_chain(
    i: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
    k: &ClassKParams,
    u_i: Vec2,
    udot_i: Vec2,
    u_all: &[Vec2],
    mode: Mode,
) -> Result<PhiRecord> {
    let t = lie_terms(i, positions, specs, graph, dynamics)?;
    let v = clf_value(positions[i], specs[i].goal);
    let phi1 = t.lf_v + t.lg_v.dot(u_i) + k.sigma1 * v;

    let mut a_terms = BTreeMap::new();
    let mut a_sum = 0.0;
    for j in graph.in_neighbors(i)? {
        let term = a_ij(i, j, positions, specs, graph, dynamics, u_all[j])?;
        a_sum += term;
        a_terms.insert(j, term);
    }
    let b = b_value(i, positions, specs, graph, dynamics, k, u_i, udot_i, mode)?;

    Ok(PhiRecord { v, phi1, phi2: a_sum + b, b, a_terms })
}

/// Independent route to `phi2`: assembles `Vddot` from whole velocities
/// (`xdot_j = fbar_j + g_j u_j`) instead of the per-term bookkeeping, then
/// adds the class-K terms. Used to cross-check the decomposition.
pub fn phi2_direct(
    i: usize,
    positions: &[Vec2],
    specs: &[AgentSpec],
    graph: &InteractionGraph,
    dynamics: &dyn Dynamics,
    k: &ClassKParams,
    u_i: Vec2,
    udot_i: Vec2,
    u_all: &[Vec2],
    mode: Mode,
) -> Result<f64> {
    let e = clf_gradient(positions[i], specs[i].goal);
    let v = clf_value(positions[i], specs[i].goal);
    let g = dynamics.input_matrix(i);
    let fbar = dynamics.drift(i, positions, graph)?;
    let own_velocity = fbar + g.mul_vec(u_i);

    // xddot_i = J_own * xdot_i + sum_j J_ij * xdot_j + g * udot_i
    let j_own = dynamics.drift_jacobian_own(i, positions, graph)?;
    let mut accel = j_own.mul_vec(own_velocity) + g.mul_vec(udot_i);
    for j in graph.in_neighbors(i)? {
        let j_ij = dynamics.drift_jacobian_neighbor(i, j, positions, graph)?;
        let velocity_j =
            dynamics.drift(j, positions, graph)? + dynamics.input_matrix(j).mul_vec(u_all[j]);
        accel += j_ij.mul_vec(velocity_j);
    }

    let vdot = e.dot(own_velocity);
    let mut vddot = own_velocity.norm_sq() + e.dot(accel);
    if mode == Mode::Paper {
        // The quadratic input term embedded in ||xdot||^2 is dropped.
        let gu = g.mul_vec(u_i);
        vddot -= gu.norm_sq();
    }
    Ok(vddot + k.sum() * vdot + k.product() * v)
}

/// Collects every agent's position into a scratch vector (helper for
/// callers that hold `AgentState`s).
pub fn positions_of(states: &[crate::dynamics::AgentState]) -> Vec<Vec2> {
    states.iter().map(|s| s.position).collect()
}
