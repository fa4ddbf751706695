//! Exact integer certificates for the joints-type upper bounds.
//!
//! Each real inequality `J ≤ C · (…)^{1/r}` is raised to the `r`-th power so
//! that both sides are integers; since both sides are nonnegative the two
//! forms are equivalent.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// A bound to be checked on concrete counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "bound", rename_all = "kebab-case")]
pub enum BoundClaim {
    /// `J ≤ (d-1)!^{1/(d-1)}/d · L^{d/(d-1)}`, integer form
    /// `d^{d-1} J^{d-1} ≤ (d-1)! L^d`.
    Joints { d: u32, joints: u64, lines: u64 },
    /// `J ≤ (d! L_1⋯L_d)^{1/(d-1)}`, integer form `J^{d-1} ≤ d! L_1⋯L_d`.
    Multijoints { joints: u64, families: Vec<u64> },
    /// `J ≤ C(d,m)^{1/m} L F^{1/m}`, integer form `J^m ≤ C(d,m) L^m F`.
    FlatJoints {
        d: u32,
        m: u32,
        joints: u64,
        lines: u64,
        flats: u64,
    },
    /// Conjectured sharp three-dimensional multijoints constant √2,
    /// integer form `J² ≤ 2 L_1 L_2 L_3`.
    SharpMultijoints3 { joints: u64, families: [u64; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub claim: BoundClaim,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
    pub equality: bool,
    /// `J` divided by the real right-hand side of the bound.
    pub tightness: f64,
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn ratio_from_logs(joints: u64, ln_rhs: f64) -> f64 {
    if joints == 0 {
        0.0
    } else if ln_rhs == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        ((joints as f64).ln() - ln_rhs).exp()
    }
}

fn ln(x: u64) -> f64 {
    if x == 0 {
        f64::NEG_INFINITY
    } else {
        (x as f64).ln()
    }
}

/// Evaluates the integer form of `claim`.
pub fn certify_bound(claim: &BoundClaim) -> BoundCertificate {
    let (lhs, rhs, tightness) = match claim {
        &BoundClaim::Joints { d, joints, lines } => {
            assert!(d >= 2, "joints bound needs d ≥ 2");
            let r = d - 1;
            let lhs = pow(d as u64, r) * pow(joints, r);
            let rhs = factorial(r as u64) * pow(lines, d);
            let ln_rhs = ln_factorial(r as u64) / r as f64 - (d as f64).ln()
                + (d as f64 / r as f64) * ln(lines);
            (lhs, rhs, ratio_from_logs(joints, ln_rhs))
        }
        BoundClaim::Multijoints { joints, families } => {
            let d = families.len() as u32;
            assert!(d >= 2, "multijoints bound needs d ≥ 2");
            let lhs = pow(*joints, d - 1);
            let prod = families.iter().fold(BigUint::one(), |acc, &l| acc * BigUint::from(l));
            let rhs = factorial(d as u64) * prod;
            let ln_prod: f64 = families.iter().map(|&l| ln(l)).sum();
            let ln_rhs = (ln_factorial(d as u64) + ln_prod) / (d - 1) as f64;
            (lhs, rhs, ratio_from_logs(*joints, ln_rhs))
        }
        &BoundClaim::FlatJoints {
            d,
            m,
            joints,
            lines,
            flats,
        } => {
            assert!(m >= 1 && m < d, "flat joints bound needs 1 ≤ m < d");
            let c = binomial(d as u64, m as u64);
            let lhs = pow(joints, m);
            let rhs = c.clone() * pow(lines, m) * BigUint::from(flats);
            let ln_c: f64 = (ln_factorial(d as u64) - ln_factorial(m as u64) - ln_factorial((d - m) as u64))
                / m as f64;
            let ln_rhs = ln_c + ln(lines) + ln(flats) / m as f64;
            (lhs, rhs, ratio_from_logs(joints, ln_rhs))
        }
        BoundClaim::SharpMultijoints3 { joints, families } => {
            let lhs = pow(*joints, 2);
            let prod = families.iter().fold(BigUint::one(), |acc, &l| acc * BigUint::from(l));
            let rhs = BigUint::from(2u32) * prod;
            let ln_rhs = 0.5 * (2f64.ln() + families.iter().map(|&l| ln(l)).sum::<f64>());
            (lhs, rhs, ratio_from_logs(*joints, ln_rhs))
        }
    };
    BoundCertificate {
        claim: claim.clone(),
        holds: lhs <= rhs,
        equality: lhs == rhs,
        lhs,
        rhs,
        tightness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generic_four_planes_in_three_space() {
        let c = certify_bound(&BoundClaim::Joints { d: 3, joints: 4, lines: 6 });
        assert_eq!(c.lhs, BigUint::from(144u32));
        assert_eq!(c.rhs, BigUint::from(432u32));
        assert!(c.holds && !c.equality);
        let direct = 4.0 / (2f64.sqrt() / 3.0 * 6f64.powf(1.5));
        assert!((c.tightness - direct).abs() < 1e-12);
    }

    #[test]
    fn blowup_is_sharp_for_conjectured_constant() {
        let c = certify_bound(&BoundClaim::SharpMultijoints3 {
            joints: 4,
            families: [2, 2, 2],
        });
        assert_eq!(c.lhs, BigUint::from(16u32));
        assert_eq!(c.rhs, BigUint::from(16u32));
        assert!(c.holds && c.equality);
        assert!((c.tightness - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plane_two_lines_one_joint() {
        let c = certify_bound(&BoundClaim::Joints { d: 2, joints: 1, lines: 2 });
        assert_eq!((c.lhs, c.rhs), (BigUint::from(2u32), BigUint::from(4u32)));
        assert!(c.holds);
    }

    #[test]
    fn zero_joints_hold() {
        assert!(certify_bound(&BoundClaim::Joints { d: 3, joints: 0, lines: 0 }).holds);
        assert!(
            certify_bound(&BoundClaim::Multijoints {
                joints: 0,
                families: vec![0, 0, 0]
            })
            .holds
        );
        let c = certify_bound(&BoundClaim::Joints { d: 3, joints: 1, lines: 0 });
        assert!(!c.holds);
        assert!(c.tightness.is_infinite());
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    /// Integer forms agree with direct floating evaluation of the real bound
    /// away from near-ties.
    #[test]
    fn integer_forms_match_real_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..10_000 {
            let d: u32 = rng.gen_range(2..=6);
            let lines: u64 = rng.gen_range(0..=400);
            let joints: u64 = rng.gen_range(0..=3000);
            let fact: f64 = (1..d).map(|i| i as f64).product();
            let real_rhs = fact.powf(1.0 / (d - 1) as f64) / d as f64 * (lines as f64).powf(d as f64 / (d - 1) as f64);
            let gap = joints as f64 - real_rhs;
            if gap.abs() <= 1e-9 * real_rhs.max(1.0) {
                continue;
            }
            checked += 1;
            let cert = certify_bound(&BoundClaim::Joints { d, joints, lines });
            assert_eq!(cert.holds, gap < 0.0, "d={d} J={joints} L={lines}");
        }
        assert!(checked > 9_900);
    }

    #[test]
    fn flat_form_matches_real_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2_000 {
            let d: u32 = rng.gen_range(2..=6);
            let m: u32 = rng.gen_range(1..d);
            let (joints, lines, flats) = (rng.gen_range(0..500u64), rng.gen_range(0..50u64), rng.gen_range(0..50u64));
            let c: f64 = {
                let mut acc = 1.0;
                for i in 0..m {
                    acc = acc * (d - i) as f64 / (i + 1) as f64;
                }
                acc
            };
            let real = c.powf(1.0 / m as f64) * lines as f64 * (flats as f64).powf(1.0 / m as f64);
            let gap = joints as f64 - real;
            if gap.abs() <= 1e-9 * real.max(1.0) {
                continue;
            }
            let cert = certify_bound(&BoundClaim::FlatJoints { d, m, joints, lines, flats });
            assert_eq!(cert.holds, gap < 0.0);
        }
    }
}
