use serde::{Deserialize, Serialize};

use super::VariationalError;
use crate::configs::{FlatJointsConfiguration, JointsConfiguration};

/// Real weights on a configuration: a shift `a` per joint, a weight `b` per
/// (joint, chosen-line slot) and, for flats, a capacity `c` per flat.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightAssignment {
    pub a: Vec<f64>,
    pub b: Vec<Vec<f64>>,
    #[serde(default)]
    pub c: Vec<f64>,
}

impl WeightAssignment {
    /// Per-joint products of line weights.
    pub fn products(&self) -> Vec<f64> {
        self.b.iter().map(|row| row.iter().product()).collect()
    }

    /// Per-joint sums of line weights.
    pub fn sums(&self) -> Vec<f64> {
        self.b.iter().map(|row| row.iter().sum()).collect()
    }
}

/// `(max - min) / max`, or 0 for an empty or all-zero list.
pub fn relative_spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() || max <= 0.0 {
        return 0.0;
    }
    (max - min) / max
}

fn infeasible(detail: String) -> VariationalError {
    VariationalError::InfeasibleInput(detail)
}

fn check_shape(joints: usize, slots: usize, w: &WeightAssignment) -> Result<(), VariationalError> {
    if w.a.len() != joints || w.b.len() != joints || w.b.iter().any(|r| r.len() != slots) {
        return Err(infeasible(format!("weights do not fit {joints} joints with {slots} lines each")));
    }
    Ok(())
}

/// Checks nonnegativity, unit line sums and the line condition on
/// `b - a`, all to `tol`. With `equality` the condition must hold with
/// equality for every pair; otherwise only against joints with `b > tol`.
fn check_lines(members: &[Vec<(usize, usize)>], w: &WeightAssignment, tol: f64, equality: bool) -> Result<(), VariationalError> {
    for (l, m) in members.iter().enumerate() {
        let mut sum = 0.0;
        for &(j, s) in m {
            let b = w.b[j][s];
            if b.is_nan() || b < -tol {
                return Err(infeasible(format!("negative weight {b} at joint {j} on line {l}")));
            }
            sum += b;
        }
        if m.is_empty() || (sum - 1.0).abs() > tol * m.len().max(1) as f64 {
            return Err(infeasible(format!("weights on line {l} sum to {sum}")));
        }
        for &(q, t) in m {
            if !equality && w.b[q][t] <= tol {
                continue;
            }
            let right = w.b[q][t] - w.a[q];
            for &(p, s) in m {
                let left = w.b[p][s] - w.a[p];
                let broken = if equality {
                    (left - right).abs() > tol * (1.0 + left.abs().max(right.abs()))
                } else {
                    left < right - tol * (1.0 + right.abs())
                };
                if broken {
                    return Err(infeasible(format!(
                        "shifted weights {left} at joint {p} and {right} at joint {q} on line {l}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Feasibility of joints weights in equality form, to `tol`.
pub fn check_joint_feasibility(cfg: &JointsConfiguration, w: &WeightAssignment, tol: f64) -> Result<(), VariationalError> {
    check_shape(cfg.joint_count(), cfg.dim(), w)?;
    let members: Vec<Vec<(usize, usize)>> = (0..cfg.line_count()).map(|l| cfg.members(l).to_vec()).collect();
    check_lines(&members, w, tol, true)
}

/// Feasibility of flat weights: inequality form on lines and per-joint sums
/// bounded by the capacity of the joint's flat, to `tol`.
pub fn check_flat_feasibility(cfg: &FlatJointsConfiguration, w: &WeightAssignment, tol: f64) -> Result<(), VariationalError> {
    check_shape(cfg.joint_count(), cfg.m(), w)?;
    if w.c.len() != cfg.flats().len() {
        return Err(infeasible(format!("{} capacities for {} flats", w.c.len(), cfg.flats().len())));
    }
    check_lines(&cfg.line_members(), w, tol, false)?;
    for (j, sum) in w.sums().into_iter().enumerate() {
        let f = cfg.flat_incidence()[j];
        if sum > w.c[f] + tol * (1.0 + w.c[f].abs()) {
            return Err(infeasible(format!("joint {j} has sum {sum} above capacity {} of flat {f}", w.c[f])));
        }
    }
    Ok(())
}

/// Every chosen weight `1 / (joints on the line)`, every shift 0.
pub fn initial_feasible(cfg: &JointsConfiguration) -> Result<WeightAssignment, VariationalError> {
    if let Some(line) = (0..cfg.line_count()).find(|&l| cfg.members(l).is_empty()) {
        return Err(VariationalError::EmptyLine { line });
    }
    let b = (0..cfg.joint_count())
        .map(|j| cfg.chosen_lines(j).iter().map(|&l| 1.0 / cfg.joints_on_line(l) as f64).collect())
        .collect();
    Ok(WeightAssignment {
        a: vec![0.0; cfg.joint_count()],
        b,
        c: Vec::new(),
    })
}
