use jointslab::algebra::Field;
use jointslab::configs::{
    generate_generic_flat_config, generate_generic_hyperplane_config, generate_k4_blowup_multijoints,
    JointsConfiguration,
};
use jointslab::variational::SolverOptions;
use jointslab_cli::document::Configuration;
use jointslab_cli::report::RunReport;
use jointslab_cli::verify::{default_n, verify, Mode, VerifyOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: Field = Field::Prime(10007);

fn joints(k: usize, d: usize) -> Configuration {
    Configuration::Joints(generate_generic_hyperplane_config(P, k, d).unwrap())
}

fn run(cfg: &Configuration, n: Option<u64>, mode: Mode) -> RunReport {
    let opts = VerifyOptions {
        n,
        mode,
        ..VerifyOptions::default()
    };
    verify(cfg, &opts, String::new())
}

fn check<'a>(r: &'a RunReport, name: &str) -> &'a jointslab_cli::report::CheckRecord {
    r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn symmetric_instance_passes_every_stage() {
    let r = run(&joints(4, 3), Some(10), Mode::All);
    assert!(r.passed, "{}", r.to_text());
    assert_eq!(r.telemetry.len(), 1);
    assert!(r.telemetry[0].final_spread <= 1e-9);
    for name in ["weights", "chain:joints-bound", "orders", "counting", "kernel", "bound"] {
        assert!(check(&r, name).passed, "{name}");
    }
    let bound = check(&r, "bound");
    assert_eq!((bound.lhs.as_deref(), bound.rhs.as_deref()), (Some("144"), Some("432")));
}

#[test]
fn five_planes_at_degree_eight() {
    let r = run(&joints(5, 3), Some(8), Mode::All);
    assert!(r.passed, "{}", r.to_text());
    let kernel = check(&r, "kernel");
    assert!(kernel.detail.as_deref().unwrap().starts_with("n=8,"), "kernel certified at N when N is below the cap");
    let counting = check(&r, "counting");
    let lhs: u64 = counting.lhs.as_ref().unwrap().parse().unwrap();
    assert_eq!(counting.rhs.as_deref(), Some("120"));
    assert!(lhs >= 120);
}

#[test]
fn empty_configuration_passes_trivially() {
    let cfg = Configuration::Joints(JointsConfiguration::empty(P, 3));
    let r = run(&cfg, None, Mode::All);
    assert!(r.passed);
    assert!(r.telemetry.is_empty());
    assert!(r.checks.iter().all(|c| c.component.is_none()), "no component checks");
    assert_eq!(default_n(&cfg), 0);
}

#[test]
fn default_n_is_ten_times_most_joints_on_a_line() {
    // k - d + 1 joints on each line
    assert_eq!(default_n(&joints(6, 3)), 40);
    let mj = Configuration::Multijoints(generate_k4_blowup_multijoints(P, 2).unwrap());
    assert_eq!(default_n(&mj), 40);
}

#[test]
fn components_are_verified_separately_and_in_order() {
    let base = generate_generic_hyperplane_config(P, 8, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = (0..200)
        .map(|_| base.random_subconfiguration(&mut rng, 0.12))
        .find(|c| c.incidence_graph().component_count() >= 2)
        .expect("a disconnected sample");
    let components = cfg.incidence_graph().component_count();
    let r = run(&Configuration::Joints(cfg.clone()), Some(6), Mode::Orders);
    assert!(r.passed, "{}", r.to_text());
    assert_eq!(r.telemetry.len(), components);
    let seen: Vec<usize> = r.telemetry.iter().map(|t| t.component).collect();
    assert_eq!(seen, (0..components).collect::<Vec<_>>());
    let total: usize = r.telemetry.iter().map(|t| t.joints).sum();
    assert_eq!(total, cfg.joint_count());
}

#[test]
fn modes_select_stages() {
    let cfg = joints(5, 3);
    let names = |m: Mode| -> Vec<String> { run(&cfg, Some(6), m).checks.into_iter().map(|c| c.name).collect() };
    let weights = names(Mode::Weights);
    assert!(weights.iter().all(|n| n == "weights" || n.starts_with("chain:")));
    let orders = names(Mode::Orders);
    assert!(orders.contains(&"counting".to_string()) && !orders.contains(&"kernel".to_string()));
    let poly = names(Mode::Polymethod);
    assert!(poly.contains(&"kernel".to_string()) && !poly.contains(&"orders".to_string()));
    let all = names(Mode::All);
    assert!(all.contains(&"kernel".to_string()) && all.contains(&"bound".to_string()));
}

#[test]
fn multijoints_pipeline_passes() {
    let cfg = Configuration::Multijoints(generate_k4_blowup_multijoints(P, 1).unwrap());
    let r = run(&cfg, Some(8), Mode::All);
    assert!(r.passed, "{}", r.to_text());
    assert!(check(&r, "chain:multijoints-bound").passed);
    let bound = check(&r, "bound");
    // J^2 vs 3! L1 L2 L3 with J = 4, L_i = 2
    assert_eq!((bound.lhs.as_deref(), bound.rhs.as_deref()), (Some("16"), Some("48")));
}

#[test]
fn flat_pipeline_passes() {
    let cfg = Configuration::Flat(generate_generic_flat_config(P, 6, 4, 2).unwrap());
    let r = run(&cfg, Some(10), Mode::All);
    assert!(r.passed, "{}", r.to_text());
    for name in ["subset-ratio", "identity", "orders", "augmented-orders", "counting", "kernel", "bound"] {
        assert!(check(&r, name).passed, "{name}");
    }
}

#[test]
fn failures_name_the_violated_clause() {
    // a solver with no budget cannot balance a lopsided component
    let base = generate_generic_hyperplane_config(P, 7, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = (0..100)
        .map(|_| base.random_subconfiguration(&mut rng, 0.6))
        .find(|c| c.is_connected() && c.joint_count() > 4 && {
            let b = jointslab::variational::initial_feasible(c).unwrap();
            jointslab::variational::relative_spread(&b.products()) > 0.05
        })
        .expect("an unbalanced connected sample");
    let opts = VerifyOptions {
        n: Some(4),
        mode: Mode::All,
        degree_cap: None,
        solver: SolverOptions {
            max_iterations: 0,
            ..SolverOptions::default()
        },
    };
    let r = verify(&Configuration::Joints(cfg), &opts, String::new());
    assert!(!r.passed);
    let failed: Vec<_> = r.failures().collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c.clause.is_some()));
    assert_eq!(failed[0].clause.as_deref(), Some("convergence"));
    assert!(r.to_text().contains("clause=convergence"));
}

#[test]
fn reports_are_deterministic() {
    let base = generate_generic_hyperplane_config(P, 7, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = Configuration::Joints(base.random_subconfiguration(&mut rng, 0.5));
    let a = run(&cfg, Some(6), Mode::All).to_json();
    let b = run(&cfg, Some(6), Mode::All).to_json();
    assert_eq!(a, b);
}

#[test]
fn report_json_round_trips() {
    let r = run(&joints(4, 3), Some(4), Mode::All);
    let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn bound_checks_report_exact_sides() {
    use jointslab_cli::verify::{joints_bound_check, sharp_multijoints_check};
    let c = joints_bound_check(3, 4, 6);
    assert!(c.passed);
    assert_eq!((c.lhs.as_deref(), c.rhs.as_deref()), (Some("144"), Some("432")));
    let expected = 4.0 / (2f64.sqrt() / 3.0 * 6f64.powf(1.5));
    assert!(c.detail.as_deref().unwrap().contains(&format!("{expected:.6}")));

    let sharp = sharp_multijoints_check(4, [2, 2, 2]);
    assert!(sharp.passed);
    assert!(sharp.detail.as_deref().unwrap().contains("equality"));

    assert!(joints_bound_check(3, 0, 0).passed);
    let bad = joints_bound_check(3, 100, 3);
    assert!(!bad.passed);
    assert_eq!(bad.clause.as_deref(), Some("bound"));
}
