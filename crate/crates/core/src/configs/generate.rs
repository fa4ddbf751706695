//! Generically induced configurations: lines and flats cut out by subsets of
//! hyperplanes whose normals lie on the moment curve.
//!
//! Hyperplane `t` is `x_0 + t x_1 + … + t^{d-1} x_{d-1} = t^d`. A point lies
//! on the hyperplanes of a set `T` iff the monic polynomial
//! `s^d - Σ x_i s^i` vanishes on `T`, so any `d` of them meet in a single
//! point, distinct `d`-sets give distinct points and distinct `(d-1)`-sets
//! give distinct lines, over `Q` and over `F_p` whenever the parameters are
//! distinct mod `p`.

use std::collections::BTreeMap;

use super::{distinct_parameters, ConfigError, FlatJointsConfiguration, JointsConfiguration, MultijointsConfiguration};
use crate::algebra::Field;
use crate::combinatorics::{has_rainbow_assignment, k4_blowup, subsets, ColoredGraph, UniformHypergraph};
use crate::geometry::{intersect_hyperplanes, Flat, Hyperplane, Intersection, Line, Point};

/// `k` hyperplanes in `F^d` with moment-curve normals at parameters `1..=k`.
pub fn moment_curve_hyperplanes(field: Field, k: usize, d: usize) -> Result<Vec<Hyperplane>, ConfigError> {
    Ok(distinct_parameters(field, k)?
        .into_iter()
        .map(|t| {
            let normal: Vec<_> = (0..d as u32).map(|i| t.pow(i)).collect();
            Hyperplane {
                normal,
                offset: t.pow(d as u32),
            }
        })
        .collect())
}

fn cut(field: Field, d: usize, hs: &[Hyperplane], ids: &[usize]) -> Result<Intersection, ConfigError> {
    let chosen: Vec<Hyperplane> = ids.iter().map(|&i| hs[i].clone()).collect();
    Ok(intersect_hyperplanes(field, d, &chosen)?)
}

fn cut_line(field: Field, d: usize, hs: &[Hyperplane], ids: &[usize]) -> Result<Line, ConfigError> {
    cut(field, d, hs, ids)?
        .into_line()
        .ok_or_else(|| ConfigError::DegenerateConstruction(format!("hyperplanes {ids:?} do not meet in a line")))
}

fn cut_point(field: Field, d: usize, hs: &[Hyperplane], ids: &[usize]) -> Result<Point, ConfigError> {
    match cut(field, d, hs, ids)? {
        Intersection::Point(p) => Ok(p),
        _ => Err(ConfigError::DegenerateConstruction(format!(
            "hyperplanes {ids:?} do not meet in a point"
        ))),
    }
}

fn cut_flat(field: Field, d: usize, hs: &[Hyperplane], ids: &[usize]) -> Result<Flat, ConfigError> {
    match cut(field, d, hs, ids)? {
        Intersection::Flat(f) if f.dim() == d - ids.len() => Ok(f),
        _ => Err(ConfigError::DegenerateConstruction(format!(
            "hyperplanes {ids:?} do not meet in a flat of dimension {}",
            d - ids.len()
        ))),
    }
}

fn without(set: &[usize], x: usize) -> Vec<usize> {
    set.iter().copied().filter(|&y| y != x).collect()
}

fn check_distinct<T: Ord>(items: &[T], what: &str) -> Result<(), ConfigError> {
    let unique: std::collections::BTreeSet<&T> = items.iter().collect();
    if unique.len() != items.len() {
        return Err(ConfigError::DegenerateConstruction(format!("two {what} coincide")));
    }
    Ok(())
}

/// Lines from the hypergraph's edges, joints from its simplices; hyperplanes
/// are indexed by the vertices and `d` is one more than the arity.
pub fn generate_from_hypergraph(field: Field, h: &UniformHypergraph) -> Result<JointsConfiguration, ConfigError> {
    let d = h.arity() + 1;
    if d < 2 {
        return Err(ConfigError::InvalidParameters("arity must be at least 1".into()));
    }
    let hs = moment_curve_hyperplanes(field, h.vertices(), d)?;
    let edges: Vec<Vec<usize>> = h.edges().iter().cloned().collect();
    let index: BTreeMap<&Vec<usize>, usize> = edges.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let lines = edges
        .iter()
        .map(|e| cut_line(field, d, &hs, e))
        .collect::<Result<Vec<_>, _>>()?;
    check_distinct(&lines, "lines")?;
    let mut joints = Vec::new();
    let mut incidence = Vec::new();
    for simplex in h.simplices() {
        joints.push(cut_point(field, d, &hs, &simplex)?);
        incidence.push(simplex.iter().map(|&x| index[&without(&simplex, x)]).collect());
    }
    check_distinct(&joints, "joints")?;
    JointsConfiguration::new(field, d, lines, joints, incidence)
        .map_err(|e| ConfigError::DegenerateConstruction(e.to_string()))
}

/// `k` generic hyperplanes: `C(k, d-1)` lines and `C(k, d)` joints.
pub fn generate_generic_hyperplane_config(field: Field, k: usize, d: usize) -> Result<JointsConfiguration, ConfigError> {
    if d < 2 || k < d {
        return Err(ConfigError::InvalidParameters(format!("need 2 ≤ d ≤ k, got k={k}, d={d}")));
    }
    generate_from_hypergraph(field, &UniformHypergraph::complete(k, d - 1))
}

/// Three-dimensional multijoints from a 3-colored graph: an edge `uv` of
/// color `i` is the line where planes `u` and `v` meet, placed in family
/// `i`; joints are the rainbow triangles.
pub fn generate_from_colored_graph(field: Field, g: &ColoredGraph) -> Result<MultijointsConfiguration, ConfigError> {
    if g.color_count() != 3 {
        return Err(ConfigError::InvalidParameters("need exactly three colors".into()));
    }
    let d = 3;
    let hs = moment_curve_hyperplanes(field, g.vertices(), d)?;
    let mut families = Vec::with_capacity(3);
    let mut index: Vec<BTreeMap<(usize, usize), usize>> = Vec::with_capacity(3);
    for c in 0..3 {
        let edges: Vec<(usize, usize)> = g.class(c).iter().copied().collect();
        let lines = edges
            .iter()
            .map(|&(u, v)| cut_line(field, d, &hs, &[u, v]))
            .collect::<Result<Vec<_>, _>>()?;
        check_distinct(&lines, "lines of one color")?;
        index.push(edges.into_iter().enumerate().map(|(i, e)| (e, i)).collect());
        families.push(lines);
    }
    let colors = g.edge_colors();
    let mut joints = Vec::new();
    let mut incidence = Vec::new();
    for tri in subsets(g.vertices(), 3) {
        let (a, b, c) = (tri[0], tri[1], tri[2]);
        let edges = [(a, b), (a, c), (b, c)];
        let masks = edges.map(|e| colors.get(&e).copied().unwrap_or(0));
        if !has_rainbow_assignment(masks) {
            continue;
        }
        // first color-to-edge assignment in a fixed order
        let assignment = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
            .into_iter()
            .find(|perm: &[usize; 3]| (0..3).all(|i| masks[i] >> perm[i] & 1 == 1))
            .expect("rainbow triangle has an assignment");
        let mut chosen = vec![0; 3];
        for (i, &color) in assignment.iter().enumerate() {
            chosen[color] = index[color][&edges[i]];
        }
        joints.push(cut_point(field, d, &hs, &tri)?);
        incidence.push(chosen);
    }
    check_distinct(&joints, "joints")?;
    MultijointsConfiguration::new(field, families, joints, incidence)
        .map_err(|e| ConfigError::DegenerateConstruction(e.to_string()))
}

/// The blow-up of K4 with its three perfect matchings as colors:
/// `2k²` lines per family and `4k³` multijoints.
pub fn generate_k4_blowup_multijoints(field: Field, k: usize) -> Result<MultijointsConfiguration, ConfigError> {
    if k == 0 {
        return Err(ConfigError::InvalidParameters("k must be positive".into()));
    }
    generate_from_colored_graph(field, &k4_blowup(k))
}

/// Flat joints from `k` generic hyperplanes in `F^d`: for each `d`-set `T`
/// (ascending) the joint is the point cut by `T`, its flat is cut by the
/// first `m` members of `T`, and its lines by `T` minus one of those `m`.
pub fn generate_generic_flat_config(
    field: Field,
    k: usize,
    d: usize,
    m: usize,
) -> Result<FlatJointsConfiguration, ConfigError> {
    if m == 0 || m >= d || k < d {
        return Err(ConfigError::InvalidParameters(format!(
            "need 1 ≤ m < d ≤ k, got k={k}, d={d}, m={m}"
        )));
    }
    let hs = moment_curve_hyperplanes(field, k, d)?;
    let mut line_ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut flat_ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut joints = Vec::new();
    let mut line_incidence = Vec::new();
    let mut flat_incidence = Vec::new();
    for t in subsets(k, d) {
        joints.push(cut_point(field, d, &hs, &t)?);
        let head = t[..m].to_vec();
        let next = flat_ids.len();
        flat_incidence.push(*flat_ids.entry(head.clone()).or_insert(next));
        line_incidence.push(
            head.iter()
                .map(|&x| {
                    let next = line_ids.len();
                    *line_ids.entry(without(&t, x)).or_insert(next)
                })
                .collect(),
        );
    }
    let mut lines = vec![None; line_ids.len()];
    for (ids, &i) in &line_ids {
        lines[i] = Some(cut_line(field, d, &hs, ids)?);
    }
    let mut flats = vec![None; flat_ids.len()];
    for (ids, &i) in &flat_ids {
        flats[i] = Some(cut_flat(field, d, &hs, ids)?);
    }
    let lines: Vec<Line> = lines.into_iter().map(Option::unwrap).collect();
    let flats: Vec<Flat> = flats.into_iter().map(Option::unwrap).collect();
    check_distinct(&lines, "lines")?;
    check_distinct(&flats, "flats")?;
    check_distinct(&joints, "joints")?;
    FlatJointsConfiguration::new(field, d, m, lines, flats, joints, line_incidence, flat_incidence)
        .map_err(|e| ConfigError::DegenerateConstruction(e.to_string()))
}
