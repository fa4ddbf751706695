use super::*;
use crate::algebra::{Matrix, DEFAULT_PRIME};
use crate::combinatorics::{count_rainbow_triangles, count_simplices, ColoredGraph, UniformHypergraph};
use crate::geometry::standard_basis;
use num_integer::binomial;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f7() -> Field {
    Field::prime(7).unwrap()
}

fn axes(field: Field, d: usize) -> Vec<Line> {
    standard_basis(field, d)
        .into_iter()
        .map(|e| Line::new(Point::origin(field, d), e).unwrap())
        .collect()
}

#[test]
fn coordinate_axes_form_one_joint() {
    let cfg = detect_joints(f7(), 3, &axes(f7(), 3)).unwrap();
    assert_eq!(cfg.joint_count(), 1);
    assert_eq!(cfg.joints()[0], Point::origin(f7(), 3));
    assert_eq!(cfg.chosen_lines(0), &[0, 1, 2]);
}

#[test]
fn coplanar_concurrent_lines_form_no_joint() {
    let q = Field::Rational;
    let o = Point::origin(q, 3);
    let lines: Vec<Line> = [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
        .iter()
        .map(|v| Line::new(o.clone(), v.iter().map(|&c| q.from_i64(c)).collect()).unwrap())
        .collect();
    assert_eq!(detect_joints(q, 3, &lines).unwrap().joint_count(), 0);
}

#[test]
fn too_few_lines_give_empty_configuration() {
    let lines = axes(Field::Rational, 3)[..2].to_vec();
    assert_eq!(detect_joints(Field::Rational, 3, &lines).unwrap().joint_count(), 0);
}

#[test]
fn extra_lines_through_a_joint_pick_first_spanning_triple() {
    let q = Field::Rational;
    let o = Point::origin(q, 3);
    let mut lines = axes(q, 3);
    lines.push(Line::new(o, vec![q.from_i64(1), q.from_i64(1), q.from_i64(0)]).unwrap());
    let cfg = detect_joints(q, 3, &lines).unwrap();
    assert_eq!(cfg.joint_count(), 1);
    let chosen = cfg.chosen_lines(0).to_vec();
    let dirs = cfg.directions_at(0);
    assert_eq!(dirs.len(), 3);
    assert!(directions_independent(&dirs));
    let all: BTreeSet<usize> = (0..4).collect();
    let skipped: Vec<usize> = all.difference(&chosen.iter().copied().collect()).copied().collect();
    assert_eq!(skipped.len(), 1);
}

#[test]
fn generic_four_planes_in_three_space() {
    let cfg = generate_generic_hyperplane_config(Field::Rational, 4, 3).unwrap();
    assert_eq!((cfg.line_count(), cfg.joint_count()), (6, 4));
    let detected = detect_joints(Field::Rational, 3, cfg.lines()).unwrap();
    assert_eq!(detected, cfg);
}

#[test]
fn generic_counts_match_binomials() {
    for (k, d) in [(4, 3), (5, 3), (6, 3), (5, 4), (6, 4), (3, 3), (4, 2)] {
        for field in [Field::Rational, Field::Prime(DEFAULT_PRIME)] {
            let cfg = generate_generic_hyperplane_config(field, k, d).unwrap();
            assert_eq!(cfg.line_count() as u64, binomial(k as u64, d as u64 - 1));
            assert_eq!(cfg.joint_count() as u64, binomial(k as u64, d as u64));
            for l in 0..cfg.line_count() {
                assert_eq!(cfg.joints_on_line(l), k - d + 1);
            }
            let detected = detect_joints(field, d, cfg.lines()).unwrap();
            assert_eq!(detected.joint_count(), cfg.joint_count());
            for j in 0..detected.joint_count() {
                assert!(directions_independent(&detected.directions_at(j)));
            }
        }
    }
}

#[test]
fn small_field_is_degenerate() {
    assert!(matches!(
        generate_generic_hyperplane_config(f7(), 7, 3),
        Err(ConfigError::DegenerateConstruction(_))
    ));
    assert!(generate_generic_hyperplane_config(f7(), 6, 3).is_ok());
}

#[test]
fn partial_hypergraphs() {
    let q = Field::Rational;
    let h = UniformHypergraph::new(4, 2, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
    let cfg = generate_from_hypergraph(q, &h).unwrap();
    assert_eq!((cfg.line_count(), cfg.joint_count()), (3, 1));
    let h = UniformHypergraph::new(4, 2, vec![vec![0, 1], vec![0, 2], vec![1, 3]]).unwrap();
    let cfg = generate_from_hypergraph(q, &h).unwrap();
    assert_eq!((cfg.line_count(), cfg.joint_count()), (3, 0));
    let complete = generate_from_hypergraph(q, &UniformHypergraph::complete(5, 2)).unwrap();
    assert_eq!(complete, generate_generic_hyperplane_config(q, 5, 3).unwrap());
}

#[test]
fn k4_blowup_counts() {
    let field = Field::Prime(DEFAULT_PRIME);
    for (k, lines, joints) in [(1, 2, 4), (2, 8, 32), (3, 18, 108)] {
        let cfg = generate_k4_blowup_multijoints(field, k).unwrap();
        assert_eq!(cfg.family_sizes(), vec![lines; 3]);
        assert_eq!(cfg.joint_count(), joints);
        let detected = detect_multijoints(field, cfg.families()).unwrap();
        assert_eq!(detected, cfg);
    }
}

#[test]
fn pooled_multijoints_are_joints() {
    let cfg = generate_k4_blowup_multijoints(Field::Rational, 1).unwrap();
    let (joints, family) = cfg.as_joints();
    assert_eq!(joints.joint_count(), 4);
    assert_eq!(joints.line_count(), 6);
    for j in 0..4 {
        let fams: BTreeSet<usize> = joints.chosen_lines(j).iter().map(|&l| family[l]).collect();
        assert_eq!(fams.len(), 3);
    }
}

#[test]
fn multijoint_detection_rejects_doubled_family() {
    let q = Field::Rational;
    let a = axes(q, 3);
    let diag = Line::new(Point::origin(q, 3), vec![q.from_i64(1), q.from_i64(1), q.from_i64(0)]).unwrap();
    let families = vec![vec![a[0].clone(), diag], vec![a[1].clone()], vec![a[2].clone()]];
    assert_eq!(detect_multijoints(q, &families).unwrap().joint_count(), 0);
    let families = vec![vec![a[0].clone()], vec![a[1].clone()], vec![a[2].clone()]];
    assert_eq!(detect_multijoints(q, &families).unwrap().joint_count(), 1);
}

#[test]
fn components_of_generic_and_translated_union() {
    let q = Field::Rational;
    let cfg = generate_generic_hyperplane_config(q, 4, 3).unwrap();
    assert_eq!(connected_components(&cfg).len(), 1);
    let shift = AffineMap::new(Matrix::identity(q, 3), vec![q.from_i64(1000); 3]).unwrap();
    let both = cfg.union(&cfg.transformed(&shift)).unwrap();
    let comps = connected_components(&both);
    assert_eq!(comps.len(), 2);
    assert_eq!(comps.iter().map(|c| c.joint_count()).sum::<usize>(), 8);
    assert!(comps.iter().all(|c| c.line_count() == 6));
    assert!(connected_components(&JointsConfiguration::empty(q, 3)).is_empty());
}

#[test]
fn invalid_configurations_are_rejected() {
    let q = Field::Rational;
    let lines = axes(q, 3);
    let o = Point::origin(q, 3);
    let off = Point::from_i64(q, &[1, 1, 1]);
    assert!(matches!(
        JointsConfiguration::new(q, 3, lines.clone(), vec![off], vec![vec![0, 1, 2]]),
        Err(ConfigError::JointNotOnLine { .. })
    ));
    assert!(matches!(
        JointsConfiguration::new(q, 3, lines.clone(), vec![o.clone()], vec![vec![0, 1, 1]]),
        Err(ConfigError::DependentDirections { .. })
    ));
    assert!(matches!(
        JointsConfiguration::new(q, 3, lines.clone(), vec![o.clone(), o.clone()], vec![vec![0, 1, 2]; 2]),
        Err(ConfigError::DuplicateJoint(_))
    ));
    let mut doubled = lines.clone();
    doubled.push(lines[0].clone());
    assert!(matches!(
        JointsConfiguration::new(q, 3, doubled, vec![o], vec![vec![0, 1, 2]]),
        Err(ConfigError::DuplicateLine(_))
    ));
}

#[test]
fn flat_augmentation_in_three_space() {
    // one joint at the origin on the x and y axes and the z-axis as a 1-flat
    let q = Field::Rational;
    let a = axes(q, 3);
    let flat = Flat::from_line(&a[2]);
    let cfg = FlatJointsConfiguration::new(
        q,
        3,
        2,
        vec![a[0].clone(), a[1].clone()],
        vec![flat],
        vec![Point::origin(q, 3)],
        vec![vec![0, 1]],
        vec![0],
    )
    .unwrap();
    let aug = augment_with_flat_lines(&cfg);
    assert_eq!(aug.config.line_count(), 3);
    assert_eq!(aug.is_new_line.iter().filter(|&&x| x).count(), 1);
    let new = aug.is_new_line.iter().position(|&x| x).unwrap();
    assert_eq!(aug.config.lines()[new], a[2]);
    assert_eq!(aug.config.joint_count(), 1);
}

#[test]
fn generic_flat_configuration() {
    let q = Field::Rational;
    let cfg = generate_generic_flat_config(q, 5, 4, 2).unwrap();
    assert_eq!(cfg.joint_count(), 5);
    assert!(cfg.flats().iter().all(|f| f.dim() == 2));
    let aug = augment_with_flat_lines(&cfg);
    assert_eq!(aug.config.joint_count(), 5);
    assert_eq!(aug.is_new_line.iter().filter(|&&x| x).count(), 10);
    for j in 0..5 {
        assert_eq!(aug.config.chosen_lines(j).len(), 4);
        assert!(directions_independent(&aug.config.directions_at(j)));
        let new_here = aug.config.chosen_lines(j).iter().filter(|&&l| aug.is_new_line[l]).count();
        assert_eq!(new_here, 2);
    }
    for (l, &new) in aug.is_new_line.iter().enumerate() {
        if new {
            assert_eq!(aug.config.joints_on_line(l), 1);
        }
    }
}

#[test]
fn hypergraph_joints_match_simplex_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let k = rng.gen_range(3..=7);
        let d = rng.gen_range(2..=4usize);
        let edges: Vec<Vec<usize>> = crate::combinatorics::subsets(k, d - 1)
            .into_iter()
            .filter(|_| rng.gen_bool(0.7))
            .collect();
        let h = UniformHypergraph::new(k, d - 1, edges).unwrap();
        let cfg = generate_from_hypergraph(Field::Rational, &h).unwrap();
        assert_eq!(cfg.joint_count() as u128, count_simplices(&h, d).unwrap());
        let detected = detect_joints(Field::Rational, d, cfg.lines()).unwrap();
        assert_eq!(detected.joint_count(), cfg.joint_count());
    }
}

#[test]
fn colored_graph_joints_match_rainbow_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let k = rng.gen_range(3..=7);
        // one color per edge, so rainbow triangles and strict detection agree
        let mut classes = vec![Vec::new(); 3];
        for e in crate::combinatorics::subsets(k, 2) {
            if rng.gen_bool(0.8) {
                classes[rng.gen_range(0..3)].push((e[0], e[1]));
            }
        }
        let g = ColoredGraph::new(k, classes).unwrap();
        let cfg = generate_from_colored_graph(Field::Rational, &g).unwrap();
        assert_eq!(cfg.joint_count() as u128, count_rainbow_triangles(&g).unwrap());
        let detected = detect_multijoints(Field::Rational, cfg.families()).unwrap();
        assert_eq!(detected.joint_count(), cfg.joint_count());
    }
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn components_partition_joints(seed in 0u64..1000, keep in 0.2f64..0.9) {
        let cfg = generate_generic_hyperplane_config(Field::Rational, 6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sub = cfg.random_subconfiguration(&mut rng, keep);
        let comps = connected_components(&sub);
        let mut all: Vec<Point> = comps.iter().flat_map(|c| c.joints().to_vec()).collect();
        all.sort();
        prop_assert_eq!(all, sub.joints().to_vec());
        for c in &comps {
            prop_assert!(c.is_connected());
            for l in 0..c.line_count() {
                prop_assert!(c.joints_on_line(l) >= 1);
            }
        }
        for (i, a) in comps.iter().enumerate() {
            for b in comps.iter().skip(i + 1) {
                for l in a.lines() {
                    prop_assert!(!b.lines().contains(l));
                }
            }
        }
    }

    #[test]
    fn subconfigurations_stay_valid(seed in 0u64..1000) {
        let cfg = generate_generic_hyperplane_config(Field::Prime(DEFAULT_PRIME), 5, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sub = cfg.random_subconfiguration(&mut rng, 0.5);
        let rebuilt = JointsConfiguration::new(sub.field(), sub.dim(), sub.lines().to_vec(), sub.joints().to_vec(), sub.incidence().to_vec()).unwrap();
        prop_assert_eq!(rebuilt, sub);
    }
}
