//! Polynomials over exact fields and the linear constraints expressing that a
//! polynomial of degree `< n` vanishes to prescribed orders at joints along
//! their chosen lines, or on flats.

mod constraints;
mod orders;
mod polynomial;

pub use constraints::{
    assemble_flat_constraints, assemble_flat_rows, assemble_joint_constraints, assemble_vanishing_rows, certify_degree_bound,
    check_counting_inequality, check_flat_counting_inequality, counting_sides, default_degree_cap,
    flat_counting_sides, ConstraintSystem, CountingReport, DegreeCertificate, RowSource,
};
pub use orders::{augmented_orders, validate_flat_orders, validate_joint_orders, Validation, VanishingOrders, Violation};
pub use polynomial::{expand_at, vanishes_to_order, Exponent, MonomialBasis, Polynomial};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("directions are linearly dependent")]
    DependentDirections,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid orders: {0}")]
    InvalidOrders(Violation),
    #[error("orders violate the hypotheses: {0}")]
    HypothesesViolated(Violation),
}
