use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::balance::{SolverOptions, SolverTelemetry};
use super::weights::{relative_spread, WeightAssignment};
use super::VariationalError;
use crate::configs::FlatJointsConfiguration;

const INF: u64 = u64::MAX / 4;

/// Dinic max-flow on a small graph with integer capacities.
struct FlowNetwork {
    to: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: u64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.adj.len()];
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v].is_none() {
                    level[v] = Some(level[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, limit: u64, level: &[Option<usize>], next: &mut [usize]) -> u64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u].map(|x| x + 1) {
                let pushed = self.augment(v, t, limit.min(self.cap[e]), level, next);
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t].is_none() {
                return flow;
            }
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, INF, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }

    /// Nodes that cannot reach `t` in the residual graph.
    fn cut_far_from(&self, t: usize) -> Vec<bool> {
        let mut reaches = vec![false; self.adj.len()];
        reaches[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                // residual edge u -> v is the reverse of e
                let u = self.to[e];
                if self.cap[e ^ 1] > 0 && !reaches[u] {
                    reaches[u] = true;
                    queue.push_back(u);
                }
            }
        }
        reaches.iter().map(|r| !r).collect()
    }
}

fn lines_through(cfg: &FlatJointsConfiguration, joints: &[usize]) -> usize {
    let mut used = vec![false; cfg.lines().len()];
    for &j in joints {
        for &l in &cfg.line_incidence()[j] {
            used[l] = true;
        }
    }
    used.iter().filter(|&&u| u).count()
}

/// The largest nonempty set of joints `S` minimizing `|lines through S| / |S|`,
/// found exactly by Dinkelbach iterations on a min-cut closure problem. Each
/// iteration strictly lowers the ratio. Empty for a configuration without
/// joints.
pub fn densest_joint_subset(cfg: &FlatJointsConfiguration) -> Vec<usize> {
    let jn = cfg.joint_count();
    if jn == 0 {
        return Vec::new();
    }
    let ln = cfg.lines().len();
    let mut current: Vec<usize> = (0..jn).collect();
    let (mut lines, mut size) = (lines_through(cfg, &current) as u64, jn as u64);
    loop {
        // maximize lines·|S| - size·|N(S)| over closed sets S
        let (source, sink) = (jn + ln, jn + ln + 1);
        let mut net = FlowNetwork::new(jn + ln + 2);
        for j in 0..jn {
            net.add_edge(source, j, lines);
            for &l in &cfg.line_incidence()[j] {
                net.add_edge(j, jn + l, INF);
            }
        }
        for l in 0..ln {
            net.add_edge(jn + l, sink, size);
        }
        let value = lines * jn as u64 - net.max_flow(source, sink);
        let far = net.cut_far_from(sink);
        let best: Vec<usize> = (0..jn).filter(|&j| far[j]).collect();
        if value == 0 {
            return if best.is_empty() { current } else { best };
        }
        current = best;
        lines = lines_through(cfg, &current) as u64;
        size = current.len() as u64;
    }
}

/// Weights on a sub-configuration whose per-joint sums all equal `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetBalance {
    /// Indices of the kept joints in the input.
    pub joints: Vec<usize>,
    /// Indices of the kept lines in the input; the lines through `joints`.
    pub lines: Vec<usize>,
    /// `|lines| / |joints|`.
    pub s: f64,
    /// Weights on `restrict_to_joints(joints)`, with every capacity `s`.
    pub weights: WeightAssignment,
    pub telemetry: SolverTelemetry,
}

/// Projection of `u` onto the probability simplex: `max(u_i + tau, 0)` with
/// `tau` making the sum 1.
fn simplex_projection(u: &[f64]) -> (Vec<f64>, f64) {
    let mut sorted = u.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let mut prefix = 0.0;
    let mut tau = 1.0 - sorted[0];
    for (k, &x) in sorted.iter().enumerate() {
        prefix += x;
        let candidate = (1.0 - prefix) / (k + 1) as f64;
        if x + candidate > 0.0 {
            tau = candidate;
        }
    }
    (u.iter().map(|&x| (x + tau).max(0.0)).collect(), tau)
}

/// Convex potential `Φ(a) = Σ_l ψ_l(a) - s Σ a` whose gradient at joint `p`
/// is its weight sum minus `s`; `ψ_l` is the Moreau envelope of the line's
/// simplex, with gradient the simplex projection of its shifts.
struct SumPotential {
    members: Vec<Vec<(usize, usize)>>,
    joints: usize,
    slots: usize,
    s: f64,
}

struct SumState {
    value: f64,
    b: Vec<Vec<f64>>,
    sums: Vec<f64>,
    active: Vec<Vec<usize>>,
}

impl SumPotential {
    fn eval(&self, a: &[f64]) -> SumState {
        let mut b = vec![vec![0.0; self.slots]; self.joints];
        let mut value = -self.s * a.iter().sum::<f64>();
        let mut active = Vec::with_capacity(self.members.len());
        for m in &self.members {
            let u: Vec<f64> = m.iter().map(|&(j, _)| a[j]).collect();
            let (proj, _) = simplex_projection(&u);
            value += u.iter().zip(&proj).map(|(x, y)| x * y - 0.5 * y * y).sum::<f64>();
            active.push(m.iter().zip(&proj).filter(|(_, &y)| y > 0.0).map(|(&(j, _), _)| j).collect());
            for (&(j, slot), y) in m.iter().zip(proj) {
                b[j][slot] = y;
            }
        }
        let sums = b.iter().map(|row| row.iter().sum()).collect();
        SumState { value, b, sums, active }
    }

    fn newton_direction(&self, state: &SumState) -> Option<Vec<f64>> {
        let n = self.joints;
        let grad: Vec<f64> = state.sums.iter().map(|x| x - self.s).collect();
        let gnorm = grad.iter().fold(0.0f64, |acc, g| acc.max(g.abs()));
        let mut hess = DMatrix::<f64>::identity(n, n) * (gnorm.min(1.0) + 1e-12);
        for set in &state.active {
            let share = 1.0 / set.len() as f64;
            for &p in set {
                hess[(p, p)] += 1.0;
                for &q in set {
                    hess[(p, q)] -= share;
                }
            }
        }
        let rhs = DVector::from_iterator(n, grad.iter().map(|g| -g));
        let d = hess.lu().solve(&rhs)?;
        d.iter().all(|x| x.is_finite()).then(|| d.iter().copied().collect())
    }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Balances per-joint sums with default options.
pub fn balance_sums_with_subsets(cfg: &FlatJointsConfiguration) -> Result<SubsetBalance, VariationalError> {
    balance_sums_with_subsets_with(cfg, &SolverOptions::default())
}

/// Restricts to the densest joint subset, then finds weights satisfying the
/// line conditions in inequality form whose per-joint sums agree to
/// `spread_tol`. Each accepted iteration keeps the weights feasible and never
/// increases the maximum sum.
pub fn balance_sums_with_subsets_with(
    cfg: &FlatJointsConfiguration,
    opts: &SolverOptions,
) -> Result<SubsetBalance, VariationalError> {
    let joints = densest_joint_subset(cfg);
    if joints.is_empty() {
        return Err(VariationalError::InfeasibleInput("configuration has no joints".into()));
    }
    let sub = cfg.restrict_to_joints(&joints);
    let mut lines: Vec<usize> = joints.iter().flat_map(|&j| cfg.line_incidence()[j].iter().copied()).collect();
    lines.sort_unstable();
    lines.dedup();
    let s = lines.len() as f64 / joints.len() as f64;
    let potential = SumPotential {
        members: sub.line_members(),
        joints: sub.joint_count(),
        slots: sub.m(),
        s,
    };

    let mut a = vec![0.0; sub.joint_count()];
    let mut state = potential.eval(&a);
    let mut telemetry = SolverTelemetry {
        max_trace: vec![max_of(&state.sums)],
        ..SolverTelemetry::default()
    };
    let mut eps = 1e-3;
    let mut stalled = 0u64;
    loop {
        let (max, min) = (max_of(&state.sums), min_of(&state.sums));
        let spread = relative_spread(&state.sums);
        if spread <= opts.spread_tol {
            telemetry.final_spread = spread;
            let weights = WeightAssignment {
                a,
                b: state.b,
                c: vec![s; cfg.flats().len()],
            };
            return Ok(SubsetBalance {
                joints,
                lines,
                s,
                weights,
                telemetry,
            });
        }
        if telemetry.iterations >= opts.max_iterations || stalled >= opts.stall_limit {
            return Err(VariationalError::NoConvergence {
                iterations: telemetry.iterations,
                spread,
            });
        }

        let grad: Vec<f64> = state.sums.iter().map(|x| x - s).collect();
        let mut accepted = None;
        if let Some(d) = opts.newton.then(|| potential.newton_direction(&state)).flatten() {
            let slope: f64 = grad.iter().zip(&d).map(|(g, x)| g * x).sum();
            let mut t = 1.0;
            for _ in 0..40 {
                if slope >= 0.0 {
                    break;
                }
                let cand: Vec<f64> = a.iter().zip(&d).map(|(x, y)| x + t * y).collect();
                let cs = potential.eval(&cand);
                if cs.value <= state.value + 1e-4 * t * slope && max_of(&cs.sums) <= max {
                    accepted = Some((cand, cs));
                    telemetry.newton_steps += 1;
                    break;
                }
                t *= 0.5;
            }
        }
        if accepted.is_none() {
            let band = (max - min) * opts.band;
            let top: Vec<bool> = state.sums.iter().map(|&x| x >= max - band).collect();
            let mut e = eps * 2.0;
            while e > 1e-300 {
                let cand: Vec<f64> = a.iter().zip(&top).map(|(&x, &t)| if t { x - e } else { x }).collect();
                let cs = potential.eval(&cand);
                if cs.value <= state.value && max_of(&cs.sums) <= max {
                    accepted = Some((cand, cs));
                    telemetry.perturbation_steps += 1;
                    eps = e;
                    break;
                }
                e *= 0.5;
            }
        }
        let Some((na, ns)) = accepted else {
            return Err(VariationalError::NoConvergence {
                iterations: telemetry.iterations,
                spread,
            });
        };
        let improved = max_of(&ns.sums) < max || relative_spread(&ns.sums) < spread;
        stalled = if improved { 0 } else { stalled + 1 };
        a = na;
        state = ns;
        telemetry.iterations += 1;
        telemetry.max_trace.push(max_of(&state.sums));
    }
}
