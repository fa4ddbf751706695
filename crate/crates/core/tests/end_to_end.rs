//! Library-level runs of the whole chain through the public API.

use jointslab::algebra::{Field, Matrix};
use jointslab::combinatorics::{count_simplices, UniformHypergraph};
use jointslab::configs::{
    detect_joints, generate_from_hypergraph, generate_generic_hyperplane_config, JointsConfiguration,
};
use jointslab::geometry::AffineMap;
use jointslab::polymethod::{
    assemble_joint_constraints, certify_degree_bound, check_counting_inequality, validate_joint_orders,
};
use jointslab::variational::{balance_products, certify_bound, round_to_orders, verify_amgm_chain, BoundClaim};

const P: Field = Field::Prime(10007);

fn full_chain(cfg: &JointsConfiguration, n: u64) {
    let balanced = balance_products(cfg).unwrap();
    assert!(balanced.telemetry.final_spread <= 1e-9);
    assert!(verify_amgm_chain(cfg, &balanced.weights).unwrap().holds(1e-9));
    let ord = round_to_orders(cfg, &balanced.weights, n).unwrap();
    assert!(validate_joint_orders(cfg, &ord).unwrap().equality_form);
    assert!(check_counting_inequality(cfg, &ord).unwrap().holds);
    let cert = certify_degree_bound(&assemble_joint_constraints(cfg, &ord).unwrap());
    assert!(cert.kernel_trivial);
    assert!(certify_bound(&BoundClaim::Joints {
        d: cfg.dim() as u32,
        joints: cfg.joint_count() as u64,
        lines: cfg.line_count() as u64,
    })
    .holds);
}

#[test]
fn generated_then_detected_configuration_passes_the_chain() {
    let generated = generate_generic_hyperplane_config(P, 5, 3).unwrap();
    let detected = detect_joints(P, 3, generated.lines()).unwrap();
    assert_eq!(detected, generated);
    full_chain(&detected, 6);
}

#[test]
fn chain_is_invariant_under_affine_maps() {
    let cfg = generate_generic_hyperplane_config(P, 4, 3).unwrap();
    let linear = Matrix::from_i64_rows(P, &[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
    let map = AffineMap::new(linear, vec![P.from_i64(5), P.from_i64(-1), P.from_i64(7)]).unwrap();
    let moved = cfg.transformed(&map);
    assert_eq!(moved.joint_count(), cfg.joint_count());
    assert_eq!(detect_joints(P, 3, moved.lines()).unwrap().joint_count(), 4);
    full_chain(&moved, 5);
}

#[test]
fn hypergraph_encoding_counts_simplices_as_joints() {
    let h = UniformHypergraph::new(5, 2, vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3], vec![3, 4], vec![2, 4]])
        .unwrap();
    let cfg = generate_from_hypergraph(P, &h).unwrap();
    assert_eq!(cfg.line_count(), h.edge_count());
    assert_eq!(cfg.joint_count() as u128, count_simplices(&h, 3).unwrap());
    // two triangles sharing vertex 2 form two components
    assert_eq!(cfg.incidence_graph().component_count(), 2);
}
