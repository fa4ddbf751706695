//! Verification pipelines: weights, rounding, vanishing systems, counting
//! and the final bounds, per connected component.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use jointslab::configs::{
    augment_with_flat_lines, FlatJointsConfiguration, JointsConfiguration, MultijointsConfiguration,
};
use jointslab::polymethod::{
    assemble_flat_constraints, assemble_joint_constraints, augmented_orders, certify_degree_bound, counting_sides,
    default_degree_cap, flat_counting_sides, validate_flat_orders, validate_joint_orders, PolyError, VanishingOrders,
};
use jointslab::variational::{
    balance_products_with, balance_sums_with_subsets_with, certify_bound, check_flat_feasibility,
    check_joint_feasibility, round_flat_orders, round_to_orders, verify_amgm_chain, verify_flat_chain,
    verify_multijoint_chain, BoundCertificate, BoundClaim, ChainReport, SolverOptions, SolverTelemetry,
    VariationalError,
};

use crate::document::Configuration;
use crate::report::{CheckRecord, ComponentTelemetry, RunReport};

/// Chain links may fail by at most this much.
pub const CHAIN_TOLERANCE: f64 = 1e-9;
/// Allowed error in `s |J'| = |L'|`.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Balance weights and check the AM-GM chain.
    Weights,
    /// Also round to orders, validate them and check the counting inequality.
    Orders,
    /// Weights, then certify that the vanishing system has a trivial kernel.
    Polymethod,
    /// Every stage plus the final bound.
    All,
}

impl Mode {
    fn orders(self) -> bool {
        matches!(self, Mode::Orders | Mode::All)
    }

    fn polymethod(self) -> bool {
        matches!(self, Mode::Polymethod | Mode::All)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Degree bound for rounding; defaults to 10 times the most joints on a line.
    pub n: Option<u64>,
    pub mode: Mode,
    /// Largest degree bound for the exact kernel computation; defaults to
    /// [`default_degree_cap`]. Orders are re-rounded at the capped value.
    pub degree_cap: Option<u64>,
    pub solver: SolverOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: None,
            mode: Mode::All,
            degree_cap: None,
            solver: SolverOptions::default(),
        }
    }
}

mod refs {
    pub const WEIGHTS: &str = "per-joint weight products balanced, line weights summing to one";
    pub const WEIGHT_SUMS: &str = "per-joint weight sums balanced on the densest joint subset";
    pub const SUBSET_RATIO: &str = "kept joints per kept line at least joints per line";
    pub const IDENTITY: &str = "common sum times kept joints equals kept lines";
    pub const CHAIN: &str = "AM-GM chain from the balanced weights to the bound";
    pub const ORDERS: &str = "rounded orders satisfy the shift, coverage and capacity hypotheses";
    pub const AUGMENTED: &str = "orders extended to the flat lines satisfy the joint hypotheses";
    pub const COUNTING: &str = "vanishing conditions at joints at least the dimension of degree < n polynomials";
    pub const KERNEL: &str = "no nonzero polynomial of degree < n meets the vanishing conditions";
    pub const JOINTS_BOUND: &str = "d^(d-1) J^(d-1) <= (d-1)! L^d";
    pub const MULTIJOINTS_BOUND: &str = "J^(d-1) <= d! L_1 ... L_d";
    pub const FLAT_BOUND: &str = "J^m <= C(d,m) L^m F";
    pub const SHARP_MULTIJOINTS: &str = "J^2 <= 2 L_1 L_2 L_3 (conjectured sharp constant)";
}

fn solver_clause(e: &VariationalError) -> &'static str {
    match e {
        VariationalError::EmptyLine { .. } => "empty-line",
        VariationalError::NotConnected { .. } => "connectivity",
        VariationalError::NoConvergence { .. } => "convergence",
        VariationalError::InfeasibleInput(_) => "feasibility",
    }
}

fn poly_clause(e: &PolyError) -> String {
    match e {
        PolyError::InvalidOrders(v) | PolyError::HypothesesViolated(v) => v.clause().to_string(),
        PolyError::DependentDirections => "independence".into(),
        PolyError::Shape(_) => "shape".into(),
    }
}

fn telemetry_of(component: usize, joints: usize, lines: usize, t: &SolverTelemetry) -> ComponentTelemetry {
    ComponentTelemetry {
        component,
        joints,
        lines,
        iterations: t.iterations,
        newton_steps: t.newton_steps,
        perturbation_steps: t.perturbation_steps,
        final_spread: t.final_spread,
    }
}

fn chain_checks(chain: &ChainReport) -> Vec<CheckRecord> {
    chain
        .links
        .iter()
        .map(|link| {
            let name = format!("chain:{}", link.name);
            CheckRecord::compare(&name, refs::CHAIN, link.lhs, link.rhs, link.slack >= -CHAIN_TOLERANCE)
                .with_tolerance(CHAIN_TOLERANCE)
        })
        .collect()
}

pub fn bound_check(cert: &BoundCertificate, reference: &str) -> CheckRecord {
    let detail = format!("tightness {:.6}{}", cert.tightness, if cert.equality { ", equality" } else { "" });
    CheckRecord::compare("bound", reference, &cert.lhs, &cert.rhs, cert.holds).with_detail(detail)
}

/// The capped degree bound used for kernel certification.
fn kernel_degree(n: u64, d: usize, cap: Option<u64>) -> u64 {
    n.min(cap.unwrap_or_else(|| default_degree_cap(d)))
}

struct Outcome {
    checks: Vec<CheckRecord>,
    telemetry: Option<ComponentTelemetry>,
}

/// Splits a joints configuration into components, each with the original
/// indices of its lines (ascending, matching the restriction's numbering).
fn split(cfg: &JointsConfiguration) -> Vec<(JointsConfiguration, Vec<usize>)> {
    cfg.incidence_graph()
        .components()
        .into_iter()
        .map(|joints| {
            let lines: BTreeSet<usize> = joints.iter().flat_map(|&j| cfg.chosen_lines(j).iter().copied()).collect();
            (cfg.restrict_to_joints(&joints), lines.into_iter().collect())
        })
        .collect()
}

fn orders_checks(cfg: &JointsConfiguration, ord: &VanishingOrders) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    match validate_joint_orders(cfg, ord) {
        Ok(v) => out.push(
            CheckRecord::pass("orders", refs::ORDERS)
                .with_detail(format!("n={}, equality form {}", ord.n, v.equality_form)),
        ),
        Err(v) => {
            out.push(CheckRecord::fail("orders", refs::ORDERS, v.clause(), v.to_string()));
            return out;
        }
    }
    let (lhs, rhs) = counting_sides(cfg.dim(), ord);
    let holds = lhs >= rhs;
    out.push(CheckRecord::compare("counting", refs::COUNTING, lhs, rhs, holds).with_detail(format!("n={}", ord.n)));
    out
}

fn kernel_check(n: u64, cs: Result<jointslab::polymethod::ConstraintSystem, PolyError>) -> CheckRecord {
    match cs {
        Err(e) => CheckRecord::fail("kernel", refs::KERNEL, poly_clause(&e), e.to_string()),
        Ok(cs) => {
            let cert = certify_degree_bound(&cs);
            let detail = format!("n={n}, rank {} of {} columns", cert.rank, cert.columns);
            if cert.kernel_trivial {
                CheckRecord::pass("kernel", refs::KERNEL).with_detail(detail)
            } else {
                let degree = cert.witness.as_ref().and_then(|w| w.degree()).unwrap_or(0);
                CheckRecord::fail("kernel", refs::KERNEL, "kernel", format!("{detail}; witness of degree {degree}"))
            }
        }
    }
}

/// Pipeline on one connected joints configuration. `families` selects the
/// multijoints chain.
fn joint_component(
    index: usize,
    cfg: &JointsConfiguration,
    families: Option<&[usize]>,
    n: u64,
    opts: &VerifyOptions,
) -> Outcome {
    let mut checks = Vec::new();
    let balanced = match balance_products_with(cfg, &opts.solver) {
        Ok(b) => b,
        Err(e) => {
            checks.push(CheckRecord::fail("weights", refs::WEIGHTS, solver_clause(&e), e.to_string()));
            return finish(index, checks, None);
        }
    };
    let w = &balanced.weights;
    let t = telemetry_of(index, cfg.joint_count(), cfg.line_count(), &balanced.telemetry);
    let spread = balanced.telemetry.final_spread;
    let mut weights = CheckRecord::compare("weights", refs::WEIGHTS, spread, opts.solver.spread_tol, spread <= opts.solver.spread_tol);
    if let Err(e) = check_joint_feasibility(cfg, w, CHAIN_TOLERANCE) {
        weights = CheckRecord::fail("weights", refs::WEIGHTS, solver_clause(&e), e.to_string());
    }
    checks.push(weights);

    let chain = match families {
        None => verify_amgm_chain(cfg, w),
        Some(f) => verify_multijoint_chain(cfg, f, w),
    };
    match chain {
        Ok(chain) => checks.extend(chain_checks(&chain)),
        Err(e) => checks.push(CheckRecord::fail("chain", refs::CHAIN, solver_clause(&e), e.to_string())),
    }

    if opts.mode.orders() {
        match round_to_orders(cfg, w, n) {
            Ok(ord) => checks.extend(orders_checks(cfg, &ord)),
            Err(e) => checks.push(CheckRecord::fail("orders", refs::ORDERS, solver_clause(&e), e.to_string())),
        }
    }
    if opts.mode.polymethod() {
        let nk = kernel_degree(n, cfg.dim(), opts.degree_cap);
        match round_to_orders(cfg, w, nk) {
            Ok(ord) => checks.push(kernel_check(nk, assemble_joint_constraints(cfg, &ord))),
            Err(e) => checks.push(CheckRecord::fail("kernel", refs::KERNEL, solver_clause(&e), e.to_string())),
        }
    }
    finish(index, checks, Some(t))
}

fn finish(index: usize, checks: Vec<CheckRecord>, telemetry: Option<ComponentTelemetry>) -> Outcome {
    Outcome {
        checks: checks.into_iter().map(|c| c.in_component(index)).collect(),
        telemetry,
    }
}

fn collect(report: &mut RunReport, outcomes: Vec<Outcome>) {
    for o in outcomes {
        for c in o.checks {
            report.push(c);
        }
        report.telemetry.extend(o.telemetry);
    }
}

/// Default degree bound: ten times the most joints on any line.
pub fn default_n(cfg: &Configuration) -> u64 {
    let most = match cfg {
        Configuration::Joints(c) => c.max_joints_per_line(),
        Configuration::Multijoints(c) => c.as_joints().0.max_joints_per_line(),
        Configuration::Flat(c) => c.line_members().iter().map(Vec::len).max().unwrap_or(0),
    };
    10 * most as u64
}

pub fn verify(cfg: &Configuration, opts: &VerifyOptions, input_digest: String) -> RunReport {
    let mut report = RunReport::new("verify", input_digest);
    let n = opts.n.unwrap_or_else(|| default_n(cfg));
    report.notes.push(format!("n={n}, mode={:?}", opts.mode).to_lowercase());
    match cfg {
        Configuration::Joints(c) => verify_joints(c, n, opts, &mut report),
        Configuration::Multijoints(c) => verify_multijoints(c, n, opts, &mut report),
        Configuration::Flat(c) => verify_flats(c, n, opts, &mut report),
    }
    report
}

fn verify_joints(cfg: &JointsConfiguration, n: u64, opts: &VerifyOptions, report: &mut RunReport) {
    let parts = split(cfg);
    report.notes.push(format!("components={}", parts.len()));
    let outcomes: Vec<Outcome> = parts
        .par_iter()
        .enumerate()
        .map(|(i, (c, _))| joint_component(i, c, None, n, opts))
        .collect();
    collect(report, outcomes);
    if opts.mode == Mode::All && cfg.dim() >= 2 {
        let cert = certify_bound(&BoundClaim::Joints {
            d: cfg.dim() as u32,
            joints: cfg.joint_count() as u64,
            lines: cfg.line_count() as u64,
        });
        report.push(bound_check(&cert, refs::JOINTS_BOUND));
    }
}

fn verify_multijoints(cfg: &MultijointsConfiguration, n: u64, opts: &VerifyOptions, report: &mut RunReport) {
    let (joints, family_of) = cfg.as_joints();
    let parts: Vec<(JointsConfiguration, Vec<usize>)> = split(&joints)
        .into_iter()
        .map(|(c, lines)| (c, lines.iter().map(|&l| family_of[l]).collect()))
        .collect();
    report.notes.push(format!("components={}", parts.len()));
    let outcomes: Vec<Outcome> = parts
        .par_iter()
        .enumerate()
        .map(|(i, (c, fam))| joint_component(i, c, Some(fam), n, opts))
        .collect();
    collect(report, outcomes);
    if opts.mode == Mode::All {
        let cert = certify_bound(&BoundClaim::Multijoints {
            joints: cfg.joint_count() as u64,
            families: cfg.family_sizes(),
        });
        report.push(bound_check(&cert, refs::MULTIJOINTS_BOUND));
    }
}

fn verify_flats(cfg: &FlatJointsConfiguration, n: u64, opts: &VerifyOptions, report: &mut RunReport) {
    if cfg.joint_count() == 0 {
        report.notes.push("components=0".into());
    } else {
        report.notes.push("components=1".into());
        collect(report, vec![flat_pipeline(cfg, n, opts)]);
    }
    if opts.mode == Mode::All {
        let cert = certify_bound(&BoundClaim::FlatJoints {
            d: cfg.dim() as u32,
            m: cfg.m() as u32,
            joints: cfg.joint_count() as u64,
            lines: cfg.lines().len() as u64,
            flats: cfg.flats().len() as u64,
        });
        report.push(bound_check(&cert, refs::FLAT_BOUND));
    }
}

fn flat_orders_checks(sub: &FlatJointsConfiguration, ord: &VanishingOrders) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    match validate_flat_orders(sub, ord) {
        Ok(_) => out.push(CheckRecord::pass("orders", refs::ORDERS).with_detail(format!("n={}", ord.n))),
        Err(v) => {
            out.push(CheckRecord::fail("orders", refs::ORDERS, v.clause(), v.to_string()));
            return out;
        }
    }
    let aug = augment_with_flat_lines(sub);
    out.push(match validate_joint_orders(&aug.config, &augmented_orders(&aug, ord)) {
        Ok(_) => CheckRecord::pass("augmented-orders", refs::AUGMENTED),
        Err(v) => CheckRecord::fail("augmented-orders", refs::AUGMENTED, v.clause(), v.to_string()),
    });
    let (lhs, rhs) = flat_counting_sides(sub.dim(), sub.m(), ord);
    let holds = lhs >= rhs;
    out.push(CheckRecord::compare("counting", refs::COUNTING, lhs, rhs, holds).with_detail(format!("n={}", ord.n)));
    out
}

fn flat_pipeline(cfg: &FlatJointsConfiguration, n: u64, opts: &VerifyOptions) -> Outcome {
    let mut checks = Vec::new();
    let balance = match balance_sums_with_subsets_with(cfg, &opts.solver) {
        Ok(b) => b,
        Err(e) => {
            checks.push(CheckRecord::fail("weights", refs::WEIGHT_SUMS, solver_clause(&e), e.to_string()));
            return finish(0, checks, None);
        }
    };
    let sub = cfg.restrict_to_joints(&balance.joints);
    let (j, l) = (cfg.joint_count(), cfg.lines().len());
    let (jp, lp) = (balance.joints.len(), balance.lines.len());
    let t = telemetry_of(0, jp, lp, &balance.telemetry);

    let spread = balance.telemetry.final_spread;
    let mut weights =
        CheckRecord::compare("weights", refs::WEIGHT_SUMS, spread, opts.solver.spread_tol, spread <= opts.solver.spread_tol);
    if let Err(e) = check_flat_feasibility(&sub, &balance.weights, CHAIN_TOLERANCE) {
        weights = CheckRecord::fail("weights", refs::WEIGHT_SUMS, solver_clause(&e), e.to_string());
    }
    checks.push(weights);
    checks.push(CheckRecord::compare(
        "subset-ratio",
        refs::SUBSET_RATIO,
        format!("{j}/{l}"),
        format!("{jp}/{lp}"),
        jp * l >= j * lp,
    ));
    let error = (balance.s * jp as f64 - lp as f64).abs();
    checks.push(
        CheckRecord::compare("identity", refs::IDENTITY, error, IDENTITY_TOLERANCE, error <= IDENTITY_TOLERANCE)
            .with_tolerance(IDENTITY_TOLERANCE),
    );
    checks.extend(chain_checks(&verify_flat_chain(cfg, &balance)));

    if opts.mode.orders() {
        match round_flat_orders(&sub, &balance.weights, n) {
            Ok(ord) => checks.extend(flat_orders_checks(&sub, &ord)),
            Err(e) => checks.push(CheckRecord::fail("orders", refs::ORDERS, solver_clause(&e), e.to_string())),
        }
    }
    if opts.mode.polymethod() {
        let nk = kernel_degree(n, cfg.dim(), opts.degree_cap);
        match round_flat_orders(&sub, &balance.weights, nk) {
            Ok(ord) => checks.push(kernel_check(nk, assemble_flat_constraints(&sub, &ord))),
            Err(e) => checks.push(CheckRecord::fail("kernel", refs::KERNEL, solver_clause(&e), e.to_string())),
        }
    }
    finish(0, checks, Some(t))
}

/// Certificate for the conjectured sharp three-dimensional multijoints bound.
pub fn sharp_multijoints_check(joints: u64, families: [u64; 3]) -> CheckRecord {
    bound_check(&certify_bound(&BoundClaim::SharpMultijoints3 { joints, families }), refs::SHARP_MULTIJOINTS)
}

pub fn joints_bound_check(d: u32, joints: u64, lines: u64) -> CheckRecord {
    bound_check(&certify_bound(&BoundClaim::Joints { d, joints, lines }), refs::JOINTS_BOUND)
}

pub fn multijoints_bound_check(joints: u64, families: Vec<u64>) -> CheckRecord {
    bound_check(&certify_bound(&BoundClaim::Multijoints { joints, families }), refs::MULTIJOINTS_BOUND)
}

pub fn flat_bound_check(d: u32, m: u32, joints: u64, lines: u64, flats: u64) -> CheckRecord {
    bound_check(
        &certify_bound(&BoundClaim::FlatJoints { d, m, joints, lines, flats }),
        refs::FLAT_BOUND,
    )
}
