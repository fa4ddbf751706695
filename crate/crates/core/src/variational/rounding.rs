use super::weights::{check_flat_feasibility, check_joint_feasibility, WeightAssignment};
use super::VariationalError;
use crate::configs::{FlatJointsConfiguration, JointsConfiguration};
use crate::polymethod::{validate_flat_orders, validate_joint_orders, VanishingOrders};

/// Feasibility tolerance for weights handed to the rounding.
pub const ROUNDING_TOLERANCE: f64 = 1e-9;

/// `⌈x⌉`, treating values within `1e-9` of an integer as that integer.
fn ceil_snapped(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * (1.0 + x.abs()) {
        r as i64
    } else {
        x.ceil() as i64
    }
}

/// Integer orders from the per-line offsets: `beta = max(0, c_l + alpha_p)`,
/// raising `c_l` until every line sums to at least `n`.
fn orders_from_offsets(
    members: &[Vec<(usize, usize)>],
    alpha: &[i64],
    offsets: &[i64],
    slots: usize,
    n: u64,
) -> Vec<Vec<u64>> {
    let mut beta = vec![vec![0u64; slots]; alpha.len()];
    for (m, &start) in members.iter().zip(offsets) {
        let mut c = start;
        loop {
            let orders: Vec<u64> = m.iter().map(|&(j, _)| (c + alpha[j]).max(0) as u64).collect();
            if orders.iter().sum::<u64>() >= n {
                for (&(j, s), o) in m.iter().zip(orders) {
                    beta[j][s] = o;
                }
                break;
            }
            c += 1;
        }
    }
    beta
}

/// Rounds joints weights in equality form to integer orders at threshold
/// `n`: `alpha = ⌈a n⌉` and `beta = ⌈t_l n⌉ + alpha` with `t_l = b - a` on
/// the line. The result is validated exactly before it is returned.
pub fn round_to_orders(cfg: &JointsConfiguration, w: &WeightAssignment, n: u64) -> Result<VanishingOrders, VariationalError> {
    check_joint_feasibility(cfg, w, ROUNDING_TOLERANCE)?;
    let nf = n as f64;
    let alpha: Vec<i64> = w.a.iter().map(|&x| ceil_snapped(x * nf)).collect();
    let members: Vec<Vec<(usize, usize)>> = (0..cfg.line_count()).map(|l| cfg.members(l).to_vec()).collect();
    let offsets: Vec<i64> = members
        .iter()
        .map(|m| {
            let t = m.iter().map(|&(j, s)| w.b[j][s] - w.a[j]).sum::<f64>() / m.len() as f64;
            ceil_snapped(t * nf)
        })
        .collect();
    let beta = orders_from_offsets(&members, &alpha, &offsets, cfg.dim(), n);
    let ord = VanishingOrders {
        n,
        alpha,
        beta,
        gamma: Vec::new(),
    };
    validate_joint_orders(cfg, &ord).map_err(|v| VariationalError::InfeasibleInput(v.to_string()))?;
    Ok(ord)
}

/// Rounds flat weights (inequality form) to integer orders at threshold `n`.
/// The line offset is `⌈τ_l n⌉` with `τ_l` the least `b - a` on the line,
/// and each flat gets the largest order sum among its joints.
pub fn round_flat_orders(cfg: &FlatJointsConfiguration, w: &WeightAssignment, n: u64) -> Result<VanishingOrders, VariationalError> {
    check_flat_feasibility(cfg, w, ROUNDING_TOLERANCE)?;
    let nf = n as f64;
    let alpha: Vec<i64> = w.a.iter().map(|&x| ceil_snapped(x * nf)).collect();
    let members = cfg.line_members();
    let offsets: Vec<i64> = members
        .iter()
        .map(|m| {
            let tau = m.iter().map(|&(j, s)| w.b[j][s] - w.a[j]).fold(f64::INFINITY, f64::min);
            ceil_snapped(tau * nf)
        })
        .collect();
    let beta = orders_from_offsets(&members, &alpha, &offsets, cfg.m(), n);
    let mut gamma = vec![0u64; cfg.flats().len()];
    for (j, &f) in cfg.flat_incidence().iter().enumerate() {
        gamma[f] = gamma[f].max(beta[j].iter().sum());
    }
    let ord = VanishingOrders { n, alpha, beta, gamma };
    validate_flat_orders(cfg, &ord).map_err(|v| VariationalError::InfeasibleInput(v.to_string()))?;
    Ok(ord)
}
