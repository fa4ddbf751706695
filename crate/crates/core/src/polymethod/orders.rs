use std::fmt;

use serde::{Deserialize, Serialize};

use crate::configs::{AugmentedConfig, FlatJointsConfiguration, JointsConfiguration};

/// Integer vanishing data: threshold `n`, a shift `alpha` per joint, an order
/// `beta` per (joint, chosen-line slot) and an order `gamma` per flat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingOrders {
    pub n: u64,
    pub alpha: Vec<i64>,
    pub beta: Vec<Vec<u64>>,
    #[serde(default)]
    pub gamma: Vec<u64>,
}

impl VanishingOrders {
    /// `beta ≡ value`, `alpha ≡ 0`.
    pub fn constant(cfg: &JointsConfiguration, n: u64, value: u64) -> Self {
        VanishingOrders {
            n,
            alpha: vec![0; cfg.joint_count()],
            beta: vec![vec![value; cfg.dim()]; cfg.joint_count()],
            gamma: Vec::new(),
        }
    }

    /// `Σ_p Π_slots beta`, the number of vanishing conditions at joints.
    pub fn joint_condition_count(&self) -> num_bigint::BigUint {
        self.beta
            .iter()
            .map(|b| b.iter().fold(num_bigint::BigUint::from(1u32), |acc, &x| acc * x))
            .sum()
    }
}

/// A failed hypothesis, naming the clause and where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Violation {
    /// Orders do not fit the configuration.
    Shape { detail: String },
    /// Clause (a): `beta[p] - alpha[p] ≥ beta[q] - alpha[q]` fails on a line
    /// where `beta[q] > 0`.
    Shift { line: usize, joint: usize, other: usize, left: i64, right: i64 },
    /// Clause (b): the orders on a line sum to less than `n`.
    Coverage { line: usize, sum: u64, n: u64 },
    /// Clause (c): the orders at a joint exceed its flat's order.
    FlatCapacity { joint: usize, flat: usize, sum: u64, gamma: u64 },
}

impl Violation {
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::Shape { .. } => "shape",
            Violation::Shift { .. } => "a",
            Violation::Coverage { .. } => "b",
            Violation::FlatCapacity { .. } => "c",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "orders do not match the configuration: {detail}"),
            Violation::Shift { line, joint, other, left, right } => write!(
                f,
                "clause (a) fails on line {line}: joint {joint} has shifted order {left} < {right} at joint {other}"
            ),
            Violation::Coverage { line, sum, n } => {
                write!(f, "clause (b) fails on line {line}: orders sum to {sum} < n = {n}")
            }
            Violation::FlatCapacity { joint, flat, sum, gamma } => write!(
                f,
                "clause (c) fails at joint {joint}: orders sum to {sum} > {gamma} on flat {flat}"
            ),
        }
    }
}

/// Outcome of a successful validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    /// `beta - alpha` is constant along every line.
    pub equality_form: bool,
}

fn shape(detail: impl Into<String>) -> Violation {
    Violation::Shape { detail: detail.into() }
}

fn check_lines(
    members: &[Vec<(usize, usize)>],
    ord: &VanishingOrders,
) -> Result<Validation, Violation> {
    let mut equality_form = true;
    for (line, m) in members.iter().enumerate() {
        let shifted = |&(j, s): &(usize, usize)| ord.beta[j][s] as i64 - ord.alpha[j];
        for q in m {
            if ord.beta[q.0][q.1] == 0 {
                continue;
            }
            for p in m {
                let (left, right) = (shifted(p), shifted(q));
                if left < right {
                    return Err(Violation::Shift {
                        line,
                        joint: p.0,
                        other: q.0,
                        left,
                        right,
                    });
                }
            }
        }
        if let Some(first) = m.first() {
            equality_form &= m.iter().all(|p| shifted(p) == shifted(first));
        }
        let sum: u64 = m.iter().map(|&(j, s)| ord.beta[j][s]).sum();
        if sum < ord.n {
            return Err(Violation::Coverage { line, sum, n: ord.n });
        }
    }
    Ok(Validation { equality_form })
}

fn check_shape(joints: usize, slots: usize, ord: &VanishingOrders) -> Result<(), Violation> {
    if ord.alpha.len() != joints || ord.beta.len() != joints {
        return Err(shape(format!(
            "{} shifts and {} order lists for {joints} joints",
            ord.alpha.len(),
            ord.beta.len()
        )));
    }
    if let Some(j) = ord.beta.iter().position(|b| b.len() != slots) {
        return Err(shape(format!("joint {j} needs {slots} orders")));
    }
    Ok(())
}

/// Exact check of clauses (a) and (b) on a joints configuration.
pub fn validate_joint_orders(cfg: &JointsConfiguration, ord: &VanishingOrders) -> Result<Validation, Violation> {
    check_shape(cfg.joint_count(), cfg.dim(), ord)?;
    let members: Vec<Vec<(usize, usize)>> = (0..cfg.line_count()).map(|l| cfg.members(l).to_vec()).collect();
    check_lines(&members, ord)
}

/// Exact check of clauses (a), (b) and (c) on a flat-joints configuration.
pub fn validate_flat_orders(cfg: &FlatJointsConfiguration, ord: &VanishingOrders) -> Result<Validation, Violation> {
    check_shape(cfg.joint_count(), cfg.m(), ord)?;
    if ord.gamma.len() != cfg.flats().len() {
        return Err(shape(format!("{} flat orders for {} flats", ord.gamma.len(), cfg.flats().len())));
    }
    let validation = check_lines(&cfg.line_members(), ord)?;
    for (joint, &flat) in cfg.flat_incidence().iter().enumerate() {
        let sum: u64 = ord.beta[joint].iter().sum();
        if sum > ord.gamma[flat] {
            return Err(Violation::FlatCapacity {
                joint,
                flat,
                sum,
                gamma: ord.gamma[flat],
            });
        }
    }
    Ok(validation)
}

/// Orders on an augmented configuration: the original lines keep their
/// orders and every added line gets order `n`.
pub fn augmented_orders(aug: &AugmentedConfig, ord: &VanishingOrders) -> VanishingOrders {
    let cfg = &aug.config;
    let mut beta = Vec::with_capacity(cfg.joint_count());
    for j in 0..cfg.joint_count() {
        let row = cfg
            .chosen_lines(j)
            .iter()
            .map(|&l| {
                if aug.is_new_line[l] {
                    ord.n
                } else {
                    let slot = aug
                        .original_slots(j)
                        .iter()
                        .position(|&o| o == l)
                        .expect("original line is chosen at this joint");
                    ord.beta[j][slot]
                }
            })
            .collect();
        beta.push(row);
    }
    VanishingOrders {
        n: ord.n,
        alpha: ord.alpha.clone(),
        beta,
        gamma: Vec::new(),
    }
}
