use jointslab::algebra::Field;
use jointslab::combinatorics::{k4_blowup, UniformHypergraph};
use jointslab::configs::{
    generate_generic_flat_config, generate_generic_hyperplane_config, generate_k4_blowup_multijoints,
};
use jointslab_cli::document::{ConfigDocument, Configuration, GraphDocument, Kind};
use jointslab_cli::CliError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: Field = Field::Prime(10007);

fn round_trip(cfg: &Configuration, with_joints: bool) {
    let doc = ConfigDocument::from_configuration(cfg, with_joints);
    let text = doc.to_json();
    let parsed = ConfigDocument::parse(&text).unwrap();
    assert_eq!(parsed, doc);
    assert_eq!(parsed.to_json(), text, "serialization is byte-stable");
    assert_eq!(&parsed.to_configuration().unwrap(), cfg);
}

#[test]
fn joints_round_trip_with_and_without_joints() {
    for field in [P, Field::Rational] {
        let cfg = Configuration::Joints(generate_generic_hyperplane_config(field, 5, 3).unwrap());
        round_trip(&cfg, true);
        // without listed joints the detector must recover the same configuration
        round_trip(&cfg, false);
    }
}

#[test]
fn multijoints_and_flats_round_trip() {
    let mj = Configuration::Multijoints(generate_k4_blowup_multijoints(P, 2).unwrap());
    round_trip(&mj, true);
    round_trip(&mj, false);
    let flat = Configuration::Flat(generate_generic_flat_config(P, 6, 4, 2).unwrap());
    round_trip(&flat, true);
    // flat joints are always listed
    assert!(ConfigDocument::from_configuration(&flat, false).joints.is_some());
}

#[test]
fn rational_coordinates_are_exact_strings() {
    let text = r#"{
      "schema": 1, "field": "rational", "dim": 2, "kind": "joints",
      "lines": [
        {"base": ["1/3", "0"], "direction": ["1", "0"]},
        {"base": ["1/3", "-2/7"], "direction": ["0", "5"]}
      ]
    }"#;
    let cfg = ConfigDocument::parse(text).unwrap().to_configuration().unwrap();
    let Configuration::Joints(c) = &cfg else { panic!("expected joints") };
    assert_eq!(c.joint_count(), 1);
    let coords: Vec<String> = c.joints()[0].coords().iter().map(|s| s.to_literal()).collect();
    assert_eq!(coords, ["1/3", "0"]);
    round_trip(&cfg, true);
}

#[test]
fn malformed_json_reports_line_and_column() {
    let err = ConfigDocument::parse("{\n  \"schema\": 1,\n  \"field\": }").unwrap_err();
    match err {
        CliError::Json { line, column, .. } => {
            assert_eq!(line, 3);
            assert!(column > 0);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn bad_coordinate_reports_its_path() {
    let text = r#"{"schema": 1, "field": "prime:7", "dim": 3, "kind": "joints",
      "lines": [{"base": ["0","0","0"], "direction": ["1","0","0"]},
                {"base": ["0","0","0"], "direction": ["0","1","q"]}]}"#;
    let err = ConfigDocument::parse(text).unwrap().to_configuration().unwrap_err();
    match err {
        CliError::Invalid { path, .. } => assert_eq!(path, "lines[1].direction[2]"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn structural_errors_are_positioned() {
    let wrong_len = r#"{"schema": 1, "field": "rational", "dim": 3, "kind": "joints",
      "lines": [{"base": ["0","0"], "direction": ["1","0","0"]}]}"#;
    let err = ConfigDocument::parse(wrong_len).unwrap().to_configuration().unwrap_err();
    assert!(matches!(err, CliError::Invalid { ref path, .. } if path == "lines[0].base"), "{err:?}");

    let zero_dir = r#"{"schema": 1, "field": "rational", "dim": 2, "kind": "joints",
      "lines": [{"base": ["0","0"], "direction": ["0","0"]}]}"#;
    let err = ConfigDocument::parse(zero_dir).unwrap().to_configuration().unwrap_err();
    assert!(matches!(err, CliError::Invalid { ref path, .. } if path == "lines[0]"), "{err:?}");

    let bad_field = r#"{"schema": 1, "field": "prime:8", "dim": 2, "kind": "joints"}"#;
    let err = ConfigDocument::parse(bad_field).unwrap().to_configuration().unwrap_err();
    assert!(matches!(err, CliError::Invalid { ref path, .. } if path == "field"), "{err:?}");

    let version = r#"{"schema": 2, "field": "rational", "dim": 2, "kind": "joints"}"#;
    assert!(matches!(ConfigDocument::parse(version), Err(CliError::Invalid { ref path, .. }) if path == "schema"));

    let unknown = r#"{"schema": 1, "field": "rational", "dim": 2, "kind": "joints", "extra": 0}"#;
    assert!(matches!(ConfigDocument::parse(unknown), Err(CliError::Json { line: 1, .. })));
}

#[test]
fn listed_joint_off_its_line_is_rejected() {
    let text = r#"{"schema": 1, "field": "rational", "dim": 2, "kind": "joints",
      "lines": [{"base": ["0","0"], "direction": ["1","0"]},
                {"base": ["0","0"], "direction": ["0","1"]}],
      "joints": [{"point": ["1","1"], "lines": [0, 1]}]}"#;
    let err = ConfigDocument::parse(text).unwrap().to_configuration().unwrap_err();
    assert!(matches!(err, CliError::Invalid { ref path, .. } if path == "joints"), "{err:?}");
}

#[test]
fn flat_documents_need_m_and_joints() {
    let flat = Configuration::Flat(generate_generic_flat_config(P, 5, 3, 1).unwrap());
    let mut doc = ConfigDocument::from_configuration(&flat, true);
    assert_eq!(doc.kind, Kind::Flatjoints);
    doc.m = None;
    assert!(matches!(doc.to_configuration(), Err(CliError::Invalid { ref path, .. }) if path == "m"));
    let mut doc = ConfigDocument::from_configuration(&flat, true);
    doc.joints = None;
    assert!(matches!(doc.to_configuration(), Err(CliError::Invalid { ref path, .. }) if path == "joints"));
}

#[test]
fn graph_documents_round_trip() {
    let g = k4_blowup(2);
    let colors = (0..g.color_count())
        .map(|c| g.class(c).iter().map(|&(u, v)| [u, v]).collect())
        .collect();
    let doc = GraphDocument::ColoredGraph {
        vertices: g.vertices(),
        colors,
    };
    let parsed = GraphDocument::parse(&doc.to_json()).unwrap();
    assert_eq!(parsed, doc);
    assert_eq!(parsed.colored_graph().unwrap(), g);
    assert!(parsed.hypergraph().is_err());

    let h = UniformHypergraph::complete(6, 2);
    let doc = GraphDocument::Hypergraph {
        vertices: 6,
        arity: 2,
        edges: h.edges().iter().cloned().collect(),
    };
    let parsed = GraphDocument::parse(&doc.to_json()).unwrap();
    assert_eq!(parsed.hypergraph().unwrap(), h);
    assert!(doc.to_json().contains("\"kind\": \"hypergraph\""));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_configurations_round_trip(k in 3usize..7, d in 2usize..4, keep in 0.0f64..1.0, seed in any::<u64>(), rational in any::<bool>()) {
        prop_assume!(k >= d);
        let field = if rational { Field::Rational } else { P };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = generate_generic_hyperplane_config(field, k, d).unwrap().random_subconfiguration(&mut rng, keep);
        let cfg = Configuration::Joints(cfg);
        let doc = ConfigDocument::from_configuration(&cfg, true);
        let parsed = ConfigDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_configuration().unwrap(), cfg);
    }

    #[test]
    fn sampled_flat_configurations_round_trip(k in 4usize..7, keep in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = generate_generic_flat_config(P, k, 4, 2).unwrap().random_subconfiguration(&mut rng, keep);
        let cfg = Configuration::Flat(cfg);
        let doc = ConfigDocument::from_configuration(&cfg, true);
        let parsed = ConfigDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_configuration().unwrap(), cfg);
    }
}

#[test]
fn shipped_schema_matches_the_parser() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/config-schema.json")).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(schema["properties"]["schema"]["const"], 1);
    let kinds: Vec<Kind> = serde_json::from_value(schema["properties"]["kind"]["enum"].clone()).unwrap();
    assert_eq!(kinds, [Kind::Joints, Kind::Multijoints, Kind::Flatjoints]);
    let mut fields: Vec<&str> = schema["properties"].as_object().unwrap().keys().map(String::as_str).collect();
    fields.sort_unstable();
    let doc = ConfigDocument::from_configuration(&Configuration::Flat(generate_generic_flat_config(P, 5, 3, 1).unwrap()), true);
    let serialized = serde_json::to_value(&doc).unwrap();
    for key in serialized.as_object().unwrap().keys() {
        assert!(fields.contains(&key.as_str()), "{key} missing from schema");
    }
}
