use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::weights::{initial_feasible, relative_spread, WeightAssignment};
use super::VariationalError;
use crate::configs::JointsConfiguration;

/// Tolerances and budget shared by the balancing solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Target relative spread of the per-joint values.
    pub spread_tol: f64,
    /// Feasibility tolerance on line sums and nonnegativity.
    pub feasibility_tol: f64,
    pub max_iterations: u64,
    /// Joints within this fraction of the current spread below the maximum
    /// are perturbed together.
    pub band: f64,
    /// Give up after this many consecutive iterations without progress.
    pub stall_limit: u64,
    /// Try a damped Newton step before each perturbation.
    pub newton: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            spread_tol: 1e-9,
            feasibility_tol: 1e-12,
            max_iterations: 1_000_000,
            band: 0.5,
            stall_limit: 10_000,
            newton: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverTelemetry {
    /// Accepted iterations.
    pub iterations: u64,
    pub newton_steps: u64,
    pub perturbation_steps: u64,
    pub final_spread: f64,
    /// Maximum per-joint value after each accepted iteration, starting with
    /// the initial point. Non-increasing.
    pub max_trace: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Balanced {
    pub weights: WeightAssignment,
    pub telemetry: SolverTelemetry,
}

/// Equality-form parameterization: `b[p][s] = t_l + a_p` with
/// `t_l = (1 - Σ_{q on l} a_q) / |l|`, which keeps every line sum at 1.
struct EqualityForm {
    members: Vec<Vec<usize>>,
    chosen: Vec<Vec<usize>>,
}

impl EqualityForm {
    fn new(cfg: &JointsConfiguration) -> Self {
        EqualityForm {
            members: (0..cfg.line_count()).map(|l| cfg.members(l).iter().map(|m| m.0).collect()).collect(),
            chosen: cfg.incidence().to_vec(),
        }
    }

    fn weights(&self, a: &[f64]) -> Vec<Vec<f64>> {
        let t: Vec<f64> = self
            .members
            .iter()
            .map(|m| (1.0 - m.iter().map(|&q| a[q]).sum::<f64>()) / m.len() as f64)
            .collect();
        self.chosen
            .iter()
            .enumerate()
            .map(|(p, lines)| lines.iter().map(|&l| t[l] + a[p]).collect())
            .collect()
    }

    /// Newton step for `Σ_l log b[p][l] = λ` at every joint with the gauge
    /// `Σ a = 0`. `None` when the linearization is singular.
    fn newton_step(&self, a: &[f64], b: &[Vec<f64>]) -> Option<Vec<f64>> {
        let j = a.len();
        let logs: Vec<f64> = b.iter().map(|row| row.iter().map(|x| x.ln()).sum()).collect();
        let lambda = logs.iter().sum::<f64>() / j as f64;
        let mut jac = DMatrix::<f64>::zeros(j + 1, j + 1);
        let mut rhs = DVector::<f64>::zeros(j + 1);
        for p in 0..j {
            for (s, &l) in self.chosen[p].iter().enumerate() {
                let inv = 1.0 / b[p][s];
                jac[(p, p)] += inv;
                let share = inv / self.members[l].len() as f64;
                for &q in &self.members[l] {
                    jac[(p, q)] -= share;
                }
            }
            jac[(p, j)] = -1.0;
            rhs[p] = lambda - logs[p];
        }
        for q in 0..j {
            jac[(j, q)] = 1.0;
        }
        rhs[j] = -a.iter().sum::<f64>();
        let delta = jac.lu().solve(&rhs)?;
        let step: Vec<f64> = delta.iter().take(j).copied().collect();
        step.iter().all(|x| x.is_finite()).then_some(step)
    }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

fn products(b: &[Vec<f64>]) -> Vec<f64> {
    b.iter().map(|row| row.iter().product()).collect()
}

/// Balances per-joint products on a connected configuration with default
/// options.
pub fn balance_products(cfg: &JointsConfiguration) -> Result<Balanced, VariationalError> {
    balance_products_with(cfg, &SolverOptions::default())
}

/// Finds weights in equality form whose per-joint products agree to
/// `spread_tol`. Each accepted iteration keeps every weight nonnegative and
/// never increases the maximum product.
///
/// Iterations lower the shift at the joints whose product is (nearly)
/// maximal, which lowers their weights and raises the others on shared
/// lines; a damped Newton step on the log-products is tried first and kept
/// only if it is feasible, does not raise the maximum and shrinks the spread.
pub fn balance_products_with(cfg: &JointsConfiguration, opts: &SolverOptions) -> Result<Balanced, VariationalError> {
    let components = cfg.incidence_graph().component_count();
    if components > 1 {
        return Err(VariationalError::NotConnected { components });
    }
    let start = initial_feasible(cfg)?;
    let form = EqualityForm::new(cfg);
    let mut a = start.a;
    let mut b = form.weights(&a);
    let mut w = products(&b);
    let mut telemetry = SolverTelemetry {
        max_trace: vec![max_of(&w)],
        ..SolverTelemetry::default()
    };
    let mut eps = 1e-3;
    let mut stalled = 0u64;
    let feasible = |b: &[Vec<f64>], strict: bool| {
        b.iter().flatten().all(|&x| if strict { x > 0.0 } else { x >= -opts.feasibility_tol })
    };

    loop {
        let (max, min) = (max_of(&w), min_of(&w));
        let spread = relative_spread(&w);
        if spread <= opts.spread_tol {
            telemetry.final_spread = spread;
            let weights = WeightAssignment { a, b, c: Vec::new() };
            return Ok(Balanced { weights, telemetry });
        }
        if telemetry.iterations >= opts.max_iterations || stalled >= opts.stall_limit {
            return Err(VariationalError::NoConvergence {
                iterations: telemetry.iterations,
                spread,
            });
        }

        let mut accepted = None;
        if opts.newton && feasible(&b, true) {
            if let Some(step) = form.newton_step(&a, &b) {
                let mut t = 1.0;
                for _ in 0..40 {
                    let cand: Vec<f64> = a.iter().zip(&step).map(|(x, d)| x + t * d).collect();
                    let cb = form.weights(&cand);
                    if feasible(&cb, true) {
                        let cw = products(&cb);
                        if max_of(&cw) <= max && relative_spread(&cw) < spread {
                            accepted = Some((cand, cb, cw));
                            telemetry.newton_steps += 1;
                            break;
                        }
                    }
                    t *= 0.5;
                }
            }
        }
        if accepted.is_none() {
            let band = (max - min) * opts.band;
            let top: Vec<bool> = w.iter().map(|&x| x >= max - band).collect();
            let mut e = eps * 2.0;
            while e > 1e-300 {
                let cand: Vec<f64> = a.iter().zip(&top).map(|(&x, &s)| if s { x - e } else { x }).collect();
                let cb = form.weights(&cand);
                if feasible(&cb, false) {
                    let cw = products(&cb);
                    if max_of(&cw) <= max {
                        accepted = Some((cand, cb, cw));
                        telemetry.perturbation_steps += 1;
                        eps = e;
                        break;
                    }
                }
                e *= 0.5;
            }
        }
        let Some((na, nb, nw)) = accepted else {
            return Err(VariationalError::NoConvergence {
                iterations: telemetry.iterations,
                spread,
            });
        };
        let improved = max_of(&nw) < max || relative_spread(&nw) < spread;
        stalled = if improved { 0 } else { stalled + 1 };
        a = na;
        b = nb;
        w = nw;
        telemetry.iterations += 1;
        telemetry.max_trace.push(max_of(&w));
    }
}
