//! Weight assignments on joints and lines, the two balancing procedures,
//! rounding to integer vanishing orders, and exact bound certificates.

mod amgm;
mod balance;
pub mod bounds;
mod flats;
mod rounding;
mod weights;

pub use amgm::{verify_amgm_chain, verify_flat_chain, verify_multijoint_chain, ChainLink, ChainReport, BALANCE_TOLERANCE};
pub use balance::{balance_products, balance_products_with, Balanced, SolverOptions, SolverTelemetry};
pub use bounds::{binomial, certify_bound, factorial, BoundCertificate, BoundClaim};
pub use flats::{balance_sums_with_subsets, balance_sums_with_subsets_with, densest_joint_subset, SubsetBalance};
pub use rounding::{round_flat_orders, round_to_orders, ROUNDING_TOLERANCE};
pub use weights::{check_flat_feasibility, check_joint_feasibility, initial_feasible, relative_spread, WeightAssignment};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error("line {line} contains no chosen joint")]
    EmptyLine { line: usize },
    #[error("configuration has {components} connected components")]
    NotConnected { components: usize },
    #[error("no convergence after {iterations} iterations (best spread {spread:e})")]
    NoConvergence { iterations: u64, spread: f64 },
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
}
