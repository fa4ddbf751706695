//! Colored graphs and uniform hypergraphs encoding generically induced
//! configurations: rainbow triangles are multijoints, simplices are joints.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::variational::bounds::{certify_bound, BoundCertificate, BoundClaim};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("edge {0:?} has a repeated or out-of-range vertex")]
    BadEdge(Vec<usize>),
    #[error("expected arity {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("expected {expected} colors, found {found}")]
    ColorCount { expected: usize, found: usize },
}

/// Graph whose edges carry any subset (possibly empty) of the colors
/// `0..colors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    vertices: usize,
    classes: Vec<BTreeSet<(usize, usize)>>,
}

impl ColoredGraph {
    pub fn new(vertices: usize, classes: Vec<Vec<(usize, usize)>>) -> Result<Self, CombinatoricsError> {
        let classes = classes
            .into_iter()
            .map(|edges| {
                edges
                    .into_iter()
                    .map(|(u, v)| {
                        if u == v || u >= vertices || v >= vertices {
                            Err(CombinatoricsError::BadEdge(vec![u, v]))
                        } else {
                            Ok((u.min(v), u.max(v)))
                        }
                    })
                    .collect::<Result<BTreeSet<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ColoredGraph { vertices, classes })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn color_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, color: usize) -> &BTreeSet<(usize, usize)> {
        &self.classes[color]
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.len() as u64).collect()
    }

    /// Bitmask of the colors carried by each edge that has at least one.
    pub fn edge_colors(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out = BTreeMap::new();
        for (c, class) in self.classes.iter().enumerate() {
            for &e in class {
                *out.entry(e).or_insert(0u32) |= 1 << c;
            }
        }
        out
    }
}

/// Edge-coloring of the complete 4-partite graph obtained by blowing up each
/// vertex of K4 into `k` vertices, the three perfect matchings of K4 giving
/// the three colors.
pub fn k4_blowup(k: usize) -> ColoredGraph {
    // color of each pair of parts: {01,23} → 0, {02,13} → 1, {03,12} → 2
    let color_of = |a: usize, b: usize| match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        _ => 2,
    };
    let mut classes = vec![Vec::new(); 3];
    for a in 0..4 {
        for b in a + 1..4 {
            for i in 0..k {
                for j in 0..k {
                    classes[color_of(a, b)].push((a * k + i, b * k + j));
                }
            }
        }
    }
    ColoredGraph::new(4 * k, classes).expect("blow-up edges are valid")
}

/// True iff the three color masks admit a system of distinct representatives.
pub fn has_rainbow_assignment(masks: [u32; 3]) -> bool {
    const PERMS: [[u32; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .any(|p| (0..3).all(|i| masks[i] & (1 << p[i]) != 0))
}

/// Number of vertex triples whose three edges can be given three distinct
/// colors, each edge receiving one of its own colors.
pub fn count_rainbow_triangles(g: &ColoredGraph) -> Result<u128, CombinatoricsError> {
    if g.color_count() != 3 {
        return Err(CombinatoricsError::ColorCount {
            expected: 3,
            found: g.color_count(),
        });
    }
    let colors = g.edge_colors();
    let mut forward: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.vertices];
    for &(u, v) in colors.keys() {
        forward[u].insert(v);
    }
    let mut count = 0u128;
    for (&(u, v), &m_uv) in &colors {
        for &w in forward[v].iter() {
            if !forward[u].contains(&w) {
                continue;
            }
            let m_uw = colors[&(u, w)];
            let m_vw = colors[&(v, w)];
            if has_rainbow_assignment([m_uv, m_uw, m_vw]) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Hypergraph whose edges are sorted `arity`-subsets of `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformHypergraph {
    vertices: usize,
    arity: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl UniformHypergraph {
    pub fn new(vertices: usize, arity: usize, edges: Vec<Vec<usize>>) -> Result<Self, CombinatoricsError> {
        let edges = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                let distinct = e.windows(2).all(|w| w[0] < w[1]);
                if e.len() != arity {
                    Err(CombinatoricsError::Arity {
                        expected: arity,
                        found: e.len(),
                    })
                } else if !distinct || e.last().is_some_and(|&x| x >= vertices) {
                    Err(CombinatoricsError::BadEdge(e))
                } else {
                    Ok(e)
                }
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(UniformHypergraph {
            vertices,
            arity,
            edges,
        })
    }

    /// All `arity`-subsets of `0..vertices`.
    pub fn complete(vertices: usize, arity: usize) -> Self {
        UniformHypergraph {
            vertices,
            arity,
            edges: subsets(vertices, arity).into_iter().collect(),
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The `d`-sets all of whose `(d-1)`-subsets are edges.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        let r = self.arity;
        // (r-1)-set → vertices completing it to an edge
        let mut completions: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for e in &self.edges {
            for skip in 0..r {
                completions.entry(drop_index(e, skip)).or_default().push(e[skip]);
            }
        }
        let edge_set: HashSet<&[usize]> = self.edges.iter().map(Vec::as_slice).collect();
        let mut out = Vec::new();
        for e in &self.edges {
            let top = e.last().copied();
            let stem = if e.is_empty() { Vec::new() } else { drop_index(e, 0) };
            let Some(cands) = completions.get(&stem) else {
                continue;
            };
            for &v in cands {
                if top.is_some_and(|t| v <= t) {
                    continue;
                }
                let mut simplex = e.clone();
                simplex.push(v);
                let all_faces = (0..simplex.len()).all(|skip| edge_set.contains(drop_index(&simplex, skip).as_slice()));
                if all_faces {
                    out.push(simplex);
                }
            }
        }
        out.sort();
        out
    }
}

fn drop_index(v: &[usize], skip: usize) -> Vec<usize> {
    v.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect()
}

/// All sorted `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Number of `d`-vertex sets all of whose `(d-1)`-subsets are edges.
pub fn count_simplices(h: &UniformHypergraph, d: usize) -> Result<u128, CombinatoricsError> {
    if d < 2 || h.arity + 1 != d {
        return Err(CombinatoricsError::Arity {
            expected: d.saturating_sub(1),
            found: h.arity,
        });
    }
    Ok(h.simplices().len() as u128)
}

/// Checks the joints bound on the pair (simplex count, edge count).
pub fn check_kruskal_katona_bound(h: &UniformHypergraph, d: usize) -> Result<BoundCertificate, CombinatoricsError> {
    let simplices = count_simplices(h, d)?;
    Ok(certify_bound(&BoundClaim::Joints {
        d: d as u32,
        joints: simplices as u64,
        lines: h.edge_count() as u64,
    }))
}
