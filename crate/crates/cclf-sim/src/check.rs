//! Built-in invariant suite: Jacobian/Lie-derivative finite-difference
//! checks, QP oracle comparisons, and the chain decomposition identity.
//!
//! Randomized but fully seeded, so a failing trial reproduces exactly. The
//! same routines back the `check` subcommand (small trial counts) and the
//! acceptance suite (the pinned counts).

use cclf_core::altruism::LinearConstraint;
use cclf_core::dynamics::{repulsion_jacobian, AgentSpec, CouplingParams, Dynamics, RepulsionDynamics};
use cclf_core::graph::build_proximity_graph;
use cclf_core::lyapunov::{self, ClassKParams, Mode};
use cclf_core::qpsolve::{self, QpProblem, QpStatus};
use cclf_core::vec2::Vec2;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::CliError;

pub const FD_REL_TOL: f64 = 1e-5;
pub const DECOMP_REL_TOL: f64 = 1e-9;
pub const QP_OBJ_TOL: f64 = 1e-6;
pub const KKT_TOL: f64 = 1e-8;

fn fd_step() -> f64 {
    1e-6
}

fn random_positions(rng: &mut StdRng, n: usize, min_gap: f64) -> Vec<Vec2> {
    'outer: loop {
        let pos: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if (pos[i] - pos[j]).norm() < min_gap {
                    continue 'outer;
                }
            }
        }
        return pos;
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn fd_gradient(f: &dyn Fn(Vec2) -> f64, x: Vec2) -> Vec2 {
    let h = fd_step();
    Vec2::new(
        (f(Vec2::new(x.x + h, x.y)) - f(Vec2::new(x.x - h, x.y))) / (2.0 * h),
        (f(Vec2::new(x.x, x.y + h)) - f(Vec2::new(x.x, x.y - h))) / (2.0 * h),
    )
}

/// Repulsion Jacobian and every Lie-derivative term against central finite
/// differences on randomized non-singular configurations.
pub fn check_jacobians(trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..5);
        let gamma = rng.gen_range(0.2..1.5);
        let pos = random_positions(&mut rng, n, 0.3);
        let specs: Vec<AgentSpec> = (0..n)
            .map(|_| AgentSpec {
                goal: Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                weight: 1.0,
                u_max: 2.0,
            })
            .collect();
        let graph = build_proximity_graph(&pos, 1e9).map_err(|e| e.to_string())?;
        let dynamics = RepulsionDynamics::new(CouplingParams { gamma, delta: 1e9 });
        let i = rng.gen_range(0..n);

        // Pairwise Jacobian columns vs. finite differences of the field.
        for j in graph.in_neighbors(i).map_err(|e| e.to_string())? {
            let analytic = repulsion_jacobian(i, j, &pos, gamma).map_err(|e| e.to_string())?;
            let h = fd_step();
            for axis in 0..2 {
                let mut plus = pos.clone();
                let mut minus = pos.clone();
                if axis == 0 {
                    plus[j].x += h;
                    minus[j].x -= h;
                } else {
                    plus[j].y += h;
                    minus[j].y -= h;
                }
                let fp = cclf_core::dynamics::repulsion_field(i, &plus, &graph, gamma)
                    .map_err(|e| e.to_string())?;
                let fm = cclf_core::dynamics::repulsion_field(i, &minus, &graph, gamma)
                    .map_err(|e| e.to_string())?;
                let col = (fp - fm) / (2.0 * h);
                let (a0, a1) = if axis == 0 {
                    (analytic.m00, analytic.m10)
                } else {
                    (analytic.m01, analytic.m11)
                };
                if rel_err(a0, col.x) > FD_REL_TOL || rel_err(a1, col.y) > FD_REL_TOL {
                    return Err(format!(
                        "trial {trial}: repulsion jacobian fd mismatch (agent {i}, neighbor {j})"
                    ));
                }
            }
        }

        // Lie terms vs. finite differences.
        let terms = lyapunov::lie_terms(i, &pos, &specs, &graph, &dynamics)
            .map_err(|e| e.to_string())?;
        let fbar = dynamics.drift(i, &pos, &graph).map_err(|e| e.to_string())?;
        let grad_v = fd_gradient(&|x| lyapunov::clf_value(x, specs[i].goal), pos[i]);
        if rel_err(terms.lf_v, grad_v.dot(fbar)) > FD_REL_TOL {
            return Err(format!("trial {trial}: LfV fd mismatch"));
        }
        if rel_err(terms.lg_v.x, grad_v.x) > FD_REL_TOL
            || rel_err(terms.lg_v.y, grad_v.y) > FD_REL_TOL
        {
            return Err(format!("trial {trial}: LgV fd mismatch"));
        }
        let lfv_at = |x: Vec2| {
            let mut moved = pos.clone();
            moved[i] = x;
            (x - specs[i].goal).dot(dynamics.drift(i, &moved, &graph).unwrap())
        };
        let grad_lfv = fd_gradient(&lfv_at, pos[i]);
        if rel_err(terms.lf2_v, grad_lfv.dot(fbar)) > FD_REL_TOL {
            return Err(format!("trial {trial}: Lf2V fd mismatch"));
        }
        let cross_fd = fbar + grad_lfv;
        if rel_err(terms.cross.x, cross_fd.x) > FD_REL_TOL
            || rel_err(terms.cross.y, cross_fd.y) > FD_REL_TOL
        {
            return Err(format!("trial {trial}: cross-term fd mismatch"));
        }

        // Neighbor rows vs. finite differences in x_j.
        for j in graph.in_neighbors(i).map_err(|e| e.to_string())? {
            let lfv_move_j = |x: Vec2| {
                let mut moved = pos.clone();
                moved[j] = x;
                (pos[i] - specs[i].goal).dot(dynamics.drift(i, &moved, &graph).unwrap())
            };
            let grad_j = fd_gradient(&lfv_move_j, pos[j]);
            let (coeff, constant) =
                lyapunov::a_ij_parts(i, j, &pos, &specs, &graph, &dynamics)
                    .map_err(|e| e.to_string())?;
            let fbar_j = dynamics.drift(j, &pos, &graph).map_err(|e| e.to_string())?;
            if rel_err(coeff.x, grad_j.x) > FD_REL_TOL
                || rel_err(coeff.y, grad_j.y) > FD_REL_TOL
                || rel_err(constant, grad_j.dot(fbar_j)) > FD_REL_TOL
            {
                return Err(format!("trial {trial}: a_ij row fd mismatch"));
            }
        }
    }
    Ok(())
}

/// Chain decomposition identity in full mode: directly expanded phi2 vs.
/// `sum_j a_ij + b_i`.
pub fn check_decomposition(trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..5);
        let gamma = rng.gen_range(0.2..1.5);
        let pos = random_positions(&mut rng, n, 0.3);
        let specs: Vec<AgentSpec> = (0..n)
            .map(|_| AgentSpec {
                goal: Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                weight: 1.0,
                u_max: 2.0,
            })
            .collect();
        let graph = build_proximity_graph(&pos, 1e9).map_err(|e| e.to_string())?;
        let dynamics = RepulsionDynamics::new(CouplingParams { gamma, delta: 1e9 });
        let k = ClassKParams {
            sigma1: rng.gen_range(0.0..2.0),
            sigma2: rng.gen_range(0.0..2.0),
        };
        let u: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
            .collect();
        for i in 0..n {
            let udot = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let record = lyapunov::phi_chain(
                i, &pos, &specs, &graph, &dynamics, &k, u[i], udot, &u, Mode::Full,
            )
            .map_err(|e| e.to_string())?;
            let direct = lyapunov::phi2_direct(
                i, &pos, &specs, &graph, &dynamics, &k, u[i], udot, &u, Mode::Full,
            )
            .map_err(|e| e.to_string())?;
            if rel_err(record.phi2, direct) > DECOMP_REL_TOL {
                return Err(format!(
                    "trial {trial}: decomposition mismatch {} vs {}",
                    record.phi2, direct
                ));
            }
            // And the record's own invariant.
            let sum: f64 = record.b + record.a_terms.values().sum::<f64>();
            if rel_err(record.phi2, sum) > DECOMP_REL_TOL {
                return Err(format!("trial {trial}: record sum mismatch"));
            }
        }
    }
    Ok(())
}

fn grid_best(problem: &QpProblem, step: f64) -> Option<f64> {
    let bound = problem.norm_bound.expect("oracle needs a bound");
    let n = (bound / step).ceil() as i64;
    let mut best: Option<f64> = None;
    for ix in -n..=n {
        let x = ix as f64 * step;
        for iy in -n..=n {
            let u = Vec2::new(x, iy as f64 * step);
            if u.norm() > bound {
                continue;
            }
            if problem.rows.iter().any(|r| r.residual(u) > 1e-12) {
                continue;
            }
            let obj = (u - problem.target).norm_sq();
            if best.map_or(true, |b| obj < b) {
                best = Some(obj);
            }
        }
    }
    best
}

/// Randomized <=2-row problems with norm bound: solver objective within
/// `QP_OBJ_TOL` of brute-force grid search; KKT residual within `KKT_TOL` on
/// every optimal result.
pub fn check_qp_oracle(trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for trial in 0..trials {
        let bound = rng.gen_range(0.3..0.8);
        let rows: Vec<LinearConstraint> = (0..rng.gen_range(0..=2))
            .map(|_| {
                LinearConstraint::new(
                    Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    rng.gen_range(-0.5..0.5),
                )
            })
            .collect();
        let problem = QpProblem {
            target: Vec2::new(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)),
            rows,
            norm_bound: Some(bound),
        };
        let sol = qpsolve::solve(&problem);
        let oracle = grid_best(&problem, 1e-3);
        match (sol.status, oracle) {
            (QpStatus::Optimal, Some(grid_obj)) => {
                let obj = (sol.u - problem.target).norm_sq();
                if obj > grid_obj + QP_OBJ_TOL {
                    return Err(format!(
                        "trial {trial}: solver objective {obj} exceeds grid {grid_obj}"
                    ));
                }
                check_kkt(trial, &problem, &sol)?;
            }
            (QpStatus::Optimal, None) => {
                // Feasible set thinner than the grid: verify the point.
                if problem.rows.iter().any(|r| r.residual(sol.u) > 1e-9)
                    || sol.u.norm() > bound + 1e-9
                {
                    return Err(format!("trial {trial}: reported optimum infeasible"));
                }
                check_kkt(trial, &problem, &sol)?;
            }
            (QpStatus::Infeasible, Some(_)) => {
                return Err(format!("trial {trial}: solver missed a feasible region"));
            }
            (QpStatus::Infeasible, None) => {}
            (QpStatus::Relaxed, _) => {
                return Err(format!("trial {trial}: solve returned relaxed"));
            }
        }
    }
    Ok(())
}

fn check_kkt(trial: usize, problem: &QpProblem, sol: &qpsolve::QpSolution) -> Result<(), String> {
    let residual = problem.target - sol.u;
    if residual.norm() <= KKT_TOL {
        return Ok(());
    }
    let mut normals: Vec<Vec2> = sol.active_rows.iter().map(|&k| problem.rows[k].coeff).collect();
    if sol.ball_active && sol.u.norm() > 0.0 {
        normals.push(sol.u * (1.0 / sol.u.norm()));
    }
    if normals.is_empty() {
        return Err(format!("trial {trial}: nonzero KKT residual with empty active set"));
    }
    let reconstructed = match normals.len() {
        1 => {
            let n = normals[0];
            let lambda = residual.dot(n) / n.norm_sq();
            if lambda < -KKT_TOL {
                return Err(format!("trial {trial}: negative multiplier {lambda}"));
            }
            n * lambda.max(0.0)
        }
        _ => {
            let (n1, n2) = (normals[0], normals[1]);
            let det = n1.x * n2.y - n1.y * n2.x;
            if det.abs() < 1e-12 {
                let lambda = residual.dot(n1) / n1.norm_sq();
                n1 * lambda.max(0.0)
            } else {
                let l1 = (residual.x * n2.y - residual.y * n2.x) / det;
                let l2 = (n1.x * residual.y - n1.y * residual.x) / det;
                if l1 < -KKT_TOL || l2 < -KKT_TOL {
                    return Err(format!("trial {trial}: negative multipliers {l1} {l2}"));
                }
                n1 * l1.max(0.0) + n2 * l2.max(0.0)
            }
        }
    };
    if (reconstructed - residual).norm() > KKT_TOL * residual.norm().max(1.0) {
        return Err(format!("trial {trial}: KKT residual outside active cone"));
    }
    Ok(())
}

/// CLI-sized invariant suite.
pub fn run_checks() -> Result<(), CliError> {
    let stages: [(&str, Box<dyn Fn() -> Result<(), String>>); 3] = [
        ("jacobian/lie finite differences", Box::new(|| check_jacobians(300, 0xD1CE))),
        ("chain decomposition identity", Box::new(|| check_decomposition(300, 0xFEED))),
        ("qp grid oracle + kkt", Box::new(|| check_qp_oracle(60, 0xBEEF))),
    ];
    for (name, stage) in stages {
        match stage() {
            Ok(()) => println!("check: {name}: ok"),
            Err(e) => {
                println!("check: {name}: FAILED");
                return Err(CliError::CheckFailed(e));
            }
        }
    }
    Ok(())
}
