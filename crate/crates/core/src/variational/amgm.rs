use serde::{Deserialize, Serialize};

use super::flats::SubsetBalance;
use super::weights::{check_joint_feasibility, relative_spread, WeightAssignment};
use super::VariationalError;
use crate::configs::{FlatJointsConfiguration, JointsConfiguration};

/// Largest relative spread accepted as a common per-joint value.
pub const BALANCE_TOLERANCE: f64 = 1e-6;

/// One inequality `lhs ≤ rhs` of a chain, with `slack = rhs - lhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl ChainLink {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        ChainLink {
            name: name.to_string(),
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    /// The common per-joint product, or the common sum for flats.
    pub common_value: f64,
    pub links: Vec<ChainLink>,
}

impl ChainReport {
    pub fn min_slack(&self) -> f64 {
        self.links.iter().map(|l| l.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.links.iter().all(|l| l.slack >= -tol)
    }
}

fn factorial_f64(d: usize) -> f64 {
    (1..=d).map(|i| i as f64).product()
}

fn balanced_product(cfg: &JointsConfiguration, w: &WeightAssignment) -> Result<f64, VariationalError> {
    check_joint_feasibility(cfg, w, 1e-9)?;
    let products = w.products();
    if products.is_empty() {
        return Err(VariationalError::InfeasibleInput("configuration has no joints".into()));
    }
    let spread = relative_spread(&products);
    if spread > BALANCE_TOLERANCE {
        return Err(VariationalError::InfeasibleInput(format!("products are not balanced (spread {spread})")));
    }
    Ok(products.iter().sum::<f64>() / products.len() as f64)
}

/// Evaluates each step from the common product `W` to the joints bound:
/// `d J W^{1/d} ≤ L`, `W ≤ L^d / (d^d J^d)`, `1/d! ≤ J W` and
/// `J W ≤ L^d / (d^d J^{d-1})`.
pub fn verify_amgm_chain(cfg: &JointsConfiguration, w: &WeightAssignment) -> Result<ChainReport, VariationalError> {
    let wv = balanced_product(cfg, w)?;
    let d = cfg.dim() as f64;
    let j = cfg.joint_count() as f64;
    let l = cfg.line_count() as f64;
    let ratio = (l / (d * j)).powf(d);
    Ok(ChainReport {
        common_value: wv,
        links: vec![
            ChainLink::new("amgm-at-joints", d * j * wv.powf(1.0 / d), l),
            ChainLink::new("product-bound", wv, ratio),
            ChainLink::new("continuous-counting", 1.0 / factorial_f64(cfg.dim()), j * wv),
            ChainLink::new("joints-bound", j * wv, ratio * j),
        ],
    })
}

/// The family-weighted chain for multijoints, on the joints view of the
/// configuration with `family_of_line` as returned alongside it:
/// `d J W^{1/d} / (Π L_i)^{1/d} ≤ d`, `W ≤ Π L_i / J^d`, `1/d! ≤ J W` and
/// `J W ≤ Π L_i / J^{d-1}`.
pub fn verify_multijoint_chain(
    cfg: &JointsConfiguration,
    family_of_line: &[usize],
    w: &WeightAssignment,
) -> Result<ChainReport, VariationalError> {
    if family_of_line.len() != cfg.line_count() {
        return Err(VariationalError::InfeasibleInput("one family per line required".into()));
    }
    let wv = balanced_product(cfg, w)?;
    let d = cfg.dim();
    let mut sizes = vec![0usize; d];
    for &f in family_of_line {
        if f >= d {
            return Err(VariationalError::InfeasibleInput(format!("family {f} out of range")));
        }
        sizes[f] += 1;
    }
    let product: f64 = sizes.iter().map(|&s| s as f64).product();
    let (df, j) = (d as f64, cfg.joint_count() as f64);
    Ok(ChainReport {
        common_value: wv,
        links: vec![
            ChainLink::new("amgm-at-joints", df * j * wv.powf(1.0 / df) / product.powf(1.0 / df), df),
            ChainLink::new("product-bound", wv, product / j.powf(df)),
            ChainLink::new("continuous-counting", 1.0 / factorial_f64(d), j * wv),
            ChainLink::new("multijoints-bound", j * wv, product / j.powf(df - 1.0)),
        ],
    })
}

/// The chain for flats from a subset balance: `s ≤ L / J`,
/// `1/C(d,m) ≤ Σ_f c_f^m` and `Σ_f c_f^m ≤ F L^m / J^m`.
pub fn verify_flat_chain(cfg: &FlatJointsConfiguration, balance: &SubsetBalance) -> ChainReport {
    let (d, m) = (cfg.dim(), cfg.m());
    let j = cfg.joint_count() as f64;
    let l = cfg.lines().len() as f64;
    let f = cfg.flats().len() as f64;
    let capacity: f64 = balance.weights.c.iter().map(|c| c.powi(m as i32)).sum();
    let choose = factorial_f64(d) / (factorial_f64(m) * factorial_f64(d - m));
    ChainReport {
        common_value: balance.s,
        links: vec![
            ChainLink::new("subset-ratio", balance.s, l / j),
            ChainLink::new("continuous-counting", 1.0 / choose, capacity),
            ChainLink::new("flat-joints-bound", capacity, f * (l / j).powi(m as i32)),
        ],
    }
}
