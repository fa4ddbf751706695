use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::orders::{validate_flat_orders, validate_joint_orders, VanishingOrders};
use super::polynomial::{transfer_table, Exponent, ExponentBox, MonomialBasis, Polynomial};
use super::PolyError;
use crate::algebra::{Field, Matrix, Scalar};
use crate::configs::{FlatJointsConfiguration, JointsConfiguration};
use crate::geometry::{flat_frame, Point};
use crate::variational::bounds::binomial;

/// Where a constraint row comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RowSource {
    /// Local coefficient `y^exponent` at a joint along its chosen lines.
    Joint { joint: usize, exponent: Exponent },
    /// Coefficient `z^exponent` in coordinates adapted to a flat.
    Flat { flat: usize, exponent: Exponent },
}

/// Linear conditions on the coefficient vector of a polynomial of degree
/// `< n`. Conditions that are identically zero on this space (local
/// exponents of total degree `≥ n`) are counted but not materialized.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub basis: MonomialBasis,
    pub matrix: Matrix,
    pub provenance: Vec<RowSource>,
    /// All conditions, including the identically zero ones.
    pub declared_rows: BigUint,
}

impl ConstraintSystem {
    pub fn columns(&self) -> usize {
        self.basis.len()
    }

    /// True iff `g` satisfies every condition; `None` if `deg g ≥ n`.
    pub fn is_satisfied_by(&self, g: &Polynomial) -> Option<bool> {
        let coeffs = self.basis.coefficients(g)?;
        Some(self.matrix.mul_vec(&coeffs).expect("coefficient vector matches basis").iter().all(Scalar::is_zero))
    }
}

/// Largest `n` keeping the basis at most `C(14, 3) = 364` monomials in
/// dimension `d`; 12 for `d = 3`.
pub fn default_degree_cap(d: usize) -> u64 {
    let limit = BigUint::from(364u32);
    let mut n = 1u64;
    while binomial(n + d as u64, d as u64) <= limit {
        n += 1;
    }
    n
}

#[allow(clippy::too_many_arguments)]
fn rows_at(
    field: Field,
    basis: &MonomialBasis,
    p: &Point,
    dirs: &[Vec<Scalar>],
    keep: &ExponentBox,
    source: impl Fn(Exponent) -> RowSource,
    rows: &mut Vec<Vec<Scalar>>,
    provenance: &mut Vec<RowSource>,
) {
    let table = transfer_table(field, basis, p, dirs, keep);
    for (w, exponent) in keep.members.iter().enumerate() {
        rows.push(table.iter().map(|t| t[w].clone()).collect());
        provenance.push(source(exponent.clone()));
    }
}

/// Rows for vanishing to order `beta[j]` at every joint along its chosen
/// lines, in joint order, without checking any hypothesis.
pub fn assemble_vanishing_rows(cfg: &JointsConfiguration, beta: &[Vec<u64>], n: u64) -> Result<ConstraintSystem, PolyError> {
    let d = cfg.dim();
    if beta.len() != cfg.joint_count() || beta.iter().any(|b| b.len() != d) {
        return Err(PolyError::Shape(format!("need {d} orders at each of {} joints", cfg.joint_count())));
    }
    let field = cfg.field();
    let n32 = u32::try_from(n).map_err(|_| PolyError::Shape("n too large".into()))?;
    let basis = MonomialBasis::new(d, n32);
    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    let mut declared = BigUint::from(0u32);
    for (j, b) in beta.iter().enumerate() {
        declared += b.iter().fold(BigUint::from(1u32), |acc, &x| acc * x);
        let keep = ExponentBox::new(d, n32, |w| w.iter().zip(b).all(|(&wi, &bi)| u64::from(wi) < bi));
        rows_at(
            field,
            &basis,
            &cfg.joints()[j],
            &cfg.directions_at(j),
            &keep,
            |exponent| RowSource::Joint { joint: j, exponent },
            &mut rows,
            &mut provenance,
        );
    }
    let matrix = Matrix::from_rows(field, basis.len(), rows).expect("rows match the basis");
    Ok(ConstraintSystem {
        basis,
        matrix,
        provenance,
        declared_rows: declared,
    })
}

/// Validates clauses (a) and (b), then assembles the joint conditions.
pub fn assemble_joint_constraints(cfg: &JointsConfiguration, ord: &VanishingOrders) -> Result<ConstraintSystem, PolyError> {
    validate_joint_orders(cfg, ord).map_err(PolyError::InvalidOrders)?;
    assemble_vanishing_rows(cfg, &ord.beta, ord.n)
}

/// Validates clauses (a), (b) and (c), then assembles the flat conditions.
pub fn assemble_flat_constraints(cfg: &FlatJointsConfiguration, ord: &VanishingOrders) -> Result<ConstraintSystem, PolyError> {
    validate_flat_orders(cfg, ord).map_err(PolyError::InvalidOrders)?;
    assemble_flat_rows(cfg, &ord.gamma, ord.n)
}

/// For every flat `f`, the conditions that coefficients of transverse degree
/// `< gamma[f]` vanish in coordinates adapted to `f`. No hypothesis is checked.
pub fn assemble_flat_rows(cfg: &FlatJointsConfiguration, gamma: &[u64], n: u64) -> Result<ConstraintSystem, PolyError> {
    if gamma.len() != cfg.flats().len() {
        return Err(PolyError::Shape(format!("need one order for each of {} flats", cfg.flats().len())));
    }
    let d = cfg.dim();
    let m = cfg.m();
    let field = cfg.field();
    let n32 = u32::try_from(n).map_err(|_| PolyError::Shape("n too large".into()))?;
    let basis = MonomialBasis::new(d, n32);
    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    for (fi, f) in cfg.flats().iter().enumerate() {
        let frame = flat_frame(f);
        let keep = ExponentBox::new(d, n32, |w| u64::from(w[..m].iter().sum::<u32>()) < gamma[fi]);
        rows_at(
            field,
            &basis,
            &frame.origin,
            &frame.columns,
            &keep,
            |exponent| RowSource::Flat { flat: fi, exponent },
            &mut rows,
            &mut provenance,
        );
    }
    let declared = BigUint::from(rows.len());
    let matrix = Matrix::from_rows(field, basis.len(), rows).expect("rows match the basis");
    Ok(ConstraintSystem {
        basis,
        matrix,
        provenance,
        declared_rows: declared,
    })
}

/// Result of the kernel computation.
#[derive(Clone, Debug)]
pub struct DegreeCertificate {
    /// No nonzero polynomial of degree `< n` satisfies the conditions.
    pub kernel_trivial: bool,
    /// A nonzero polynomial in the kernel when it is not trivial.
    pub witness: Option<Polynomial>,
    pub rank: usize,
    pub columns: usize,
}

pub fn certify_degree_bound(cs: &ConstraintSystem) -> DegreeCertificate {
    let kernel = cs.matrix.kernel_basis();
    let witness = kernel.first().map(|v| cs.basis.polynomial(cs.matrix.field(), v));
    DegreeCertificate {
        kernel_trivial: kernel.is_empty(),
        witness,
        rank: cs.columns() - kernel.len(),
        columns: cs.columns(),
    }
}

/// Exact sides of a counting inequality `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingReport {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

/// `(Σ_p Π beta, C(n+d-1, d))`.
pub fn counting_sides(d: usize, ord: &VanishingOrders) -> (BigUint, BigUint) {
    (ord.joint_condition_count(), binomial(ord.n + d as u64 - 1, d as u64))
}

/// `(C(n+d-m-1, d-m) Σ_f C(gamma_f+m-1, m), C(n+d-1, d))`.
pub fn flat_counting_sides(d: usize, m: usize, ord: &VanishingOrders) -> (BigUint, BigUint) {
    let (d, m) = (d as u64, m as u64);
    let per_flat: BigUint = ord.gamma.iter().map(|&g| binomial(g + m - 1, m)).sum();
    let lhs = binomial(ord.n + d - m - 1, d - m) * per_flat;
    (lhs, binomial(ord.n + d - 1, d))
}

/// Checks the joint counting inequality for orders satisfying (a) and (b).
///
/// # Panics
/// If valid orders fail the inequality, which would mean the validation or
/// the arithmetic is wrong.
pub fn check_counting_inequality(cfg: &JointsConfiguration, ord: &VanishingOrders) -> Result<CountingReport, PolyError> {
    validate_joint_orders(cfg, ord).map_err(PolyError::HypothesesViolated)?;
    let (lhs, rhs) = counting_sides(cfg.dim(), ord);
    let holds = lhs >= rhs;
    assert!(holds, "valid orders violate the counting inequality: {lhs} < {rhs}");
    Ok(CountingReport { lhs, rhs, holds })
}

/// Flat counterpart of [`check_counting_inequality`], for orders satisfying
/// (a), (b) and (c).
///
/// # Panics
/// As for [`check_counting_inequality`].
pub fn check_flat_counting_inequality(cfg: &FlatJointsConfiguration, ord: &VanishingOrders) -> Result<CountingReport, PolyError> {
    validate_flat_orders(cfg, ord).map_err(PolyError::HypothesesViolated)?;
    let (lhs, rhs) = flat_counting_sides(cfg.dim(), cfg.m(), ord);
    let holds = lhs >= rhs;
    assert!(holds, "valid orders violate the flat counting inequality: {lhs} < {rhs}");
    Ok(CountingReport { lhs, rhs, holds })
}
