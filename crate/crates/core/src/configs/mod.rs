//! Joints, multijoints and flat-joints configurations.
//!
//! A configuration stores the chosen incidence explicitly: each joint names
//! the lines (and, for flat joints, the flat) it is counted on. Everything
//! downstream (weights, vanishing orders, constraint rows) is indexed by
//! these choices rather than by geometric containment.

mod detect;
mod generate;

pub use detect::{detect_joints, detect_multijoints};
pub use generate::{
    generate_from_colored_graph, generate_from_hypergraph, generate_generic_flat_config,
    generate_generic_hyperplane_config, generate_k4_blowup_multijoints, moment_curve_hyperplanes,
};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Field, Scalar};
use crate::geometry::{directions_independent, point_on, AffineMap, Flat, GeometryError, Line, Point, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("joint {joint} is not on its chosen line {line}")]
    JointNotOnLine { joint: usize, line: usize },
    #[error("joint {joint} is not on its chosen flat {flat}")]
    JointNotOnFlat { joint: usize, flat: usize },
    #[error("chosen directions at joint {joint} do not span the space")]
    DependentDirections { joint: usize },
    #[error("joint {joint} lists {found} incidences, expected {expected}")]
    IncidenceCount { joint: usize, expected: usize, found: usize },
    #[error("index {index} out of range at joint {joint}")]
    IndexOutOfRange { joint: usize, index: usize },
    #[error("joint {0} appears twice")]
    DuplicateJoint(usize),
    #[error("line {0} appears twice")]
    DuplicateLine(usize),
    #[error("flat {0} appears twice")]
    DuplicateFlat(usize),
    #[error("object of dimension {found} in a configuration of dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("flat {flat} has dimension {found}, expected {expected}")]
    FlatDimension { flat: usize, expected: usize, found: usize },
    #[error("coordinates outside the configuration field {0}")]
    FieldMismatch(Field),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("degenerate construction: {0}")]
    DegenerateConstruction(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn check_point(field: Field, dim: usize, p: &Point) -> Result<(), ConfigError> {
    if p.dim() != dim {
        return Err(ConfigError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if p.coords().iter().any(|c| c.field() != field) {
        return Err(ConfigError::FieldMismatch(field));
    }
    Ok(())
}

/// Sorts `items` and returns `old index → new index`.
fn sort_with_map<T: Ord>(items: Vec<T>) -> (Vec<T>, Vec<usize>) {
    let mut tagged: Vec<(T, usize)> = items.into_iter().enumerate().map(|(i, x)| (x, i)).collect();
    tagged.sort();
    let mut map = vec![0; tagged.len()];
    let mut out = Vec::with_capacity(tagged.len());
    for (new, (x, old)) in tagged.into_iter().enumerate() {
        map[old] = new;
        out.push(x);
    }
    (out, map)
}

/// Joints with `d` chosen lines each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointsConfiguration {
    field: Field,
    dim: usize,
    lines: Vec<Line>,
    joints: Vec<Point>,
    incidence: Vec<Vec<usize>>,
    members: Vec<Vec<(usize, usize)>>,
}

/// Output of the canonicalizing constructor: the configuration plus where
/// each input line and joint ended up.
#[derive(Clone, Debug)]
pub struct Canonicalized {
    pub config: JointsConfiguration,
    pub line_map: Vec<usize>,
    pub joint_map: Vec<usize>,
}

impl JointsConfiguration {
    /// Validates and canonicalizes: joints are sorted by coordinates, lines
    /// by canonical form, and each joint's chosen lines by index.
    pub fn new(
        field: Field,
        dim: usize,
        lines: Vec<Line>,
        joints: Vec<Point>,
        incidence: Vec<Vec<usize>>,
    ) -> Result<Self, ConfigError> {
        Ok(Self::build(field, dim, lines, joints, incidence, false)?.config)
    }

    /// Like [`JointsConfiguration::new`] but lets several line objects share
    /// one geometric line, each object keeping its own chosen joints.
    pub(crate) fn with_line_objects(
        field: Field,
        dim: usize,
        lines: Vec<Line>,
        joints: Vec<Point>,
        incidence: Vec<Vec<usize>>,
    ) -> Result<Canonicalized, ConfigError> {
        Self::build(field, dim, lines, joints, incidence, true)
    }

    fn build(
        field: Field,
        dim: usize,
        lines: Vec<Line>,
        joints: Vec<Point>,
        incidence: Vec<Vec<usize>>,
        allow_shared_lines: bool,
    ) -> Result<Canonicalized, ConfigError> {
        if dim == 0 {
            return Err(ConfigError::InvalidParameters("dimension must be positive".into()));
        }
        if incidence.len() != joints.len() {
            return Err(ConfigError::InvalidParameters(format!(
                "{} joints but {} incidence lists",
                joints.len(),
                incidence.len()
            )));
        }
        for p in &joints {
            check_point(field, dim, p)?;
        }
        for l in &lines {
            check_point(field, dim, l.base())?;
        }
        for (j, chosen) in incidence.iter().enumerate() {
            if chosen.len() != dim {
                return Err(ConfigError::IncidenceCount {
                    joint: j,
                    expected: dim,
                    found: chosen.len(),
                });
            }
            let mut dirs = Vec::with_capacity(dim);
            for &l in chosen {
                let line = lines.get(l).ok_or(ConfigError::IndexOutOfRange { joint: j, index: l })?;
                if !point_on(&joints[j], line) {
                    return Err(ConfigError::JointNotOnLine { joint: j, line: l });
                }
                dirs.push(line.direction().to_vec());
            }
            if !directions_independent(&dirs) {
                return Err(ConfigError::DependentDirections { joint: j });
            }
        }

        let (joints, joint_map) = sort_with_map(joints);
        if let Some(w) = joints.windows(2).position(|w| w[0] == w[1]) {
            return Err(ConfigError::DuplicateJoint(w));
        }
        let mut chosen_by: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); lines.len()];
        for (old_j, chosen) in incidence.iter().enumerate() {
            for &l in chosen {
                chosen_by[l].insert(joint_map[old_j]);
            }
        }
        let keyed: Vec<(Line, Vec<usize>)> = lines
            .into_iter()
            .zip(chosen_by)
            .map(|(l, s)| (l, s.into_iter().collect()))
            .collect();
        let (keyed, line_map) = sort_with_map(keyed);
        for (i, w) in keyed.windows(2).enumerate() {
            if w[0].0 == w[1].0 && (!allow_shared_lines || w[0].1 == w[1].1) {
                return Err(ConfigError::DuplicateLine(i + 1));
            }
        }
        let lines: Vec<Line> = keyed.into_iter().map(|(l, _)| l).collect();

        let mut new_incidence = vec![Vec::new(); joints.len()];
        for (old_j, chosen) in incidence.into_iter().enumerate() {
            let mut mapped: Vec<usize> = chosen.into_iter().map(|l| line_map[l]).collect();
            mapped.sort_unstable();
            new_incidence[joint_map[old_j]] = mapped;
        }
        let config = Self::assemble(field, dim, lines, joints, new_incidence);
        Ok(Canonicalized {
            config,
            line_map,
            joint_map,
        })
    }

    fn assemble(field: Field, dim: usize, lines: Vec<Line>, joints: Vec<Point>, incidence: Vec<Vec<usize>>) -> Self {
        let mut members = vec![Vec::new(); lines.len()];
        for (j, chosen) in incidence.iter().enumerate() {
            for (slot, &l) in chosen.iter().enumerate() {
                members[l].push((j, slot));
            }
        }
        JointsConfiguration {
            field,
            dim,
            lines,
            joints,
            incidence,
            members,
        }
    }

    pub fn empty(field: Field, dim: usize) -> Self {
        Self::assemble(field, dim, Vec::new(), Vec::new(), Vec::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn joints(&self) -> &[Point] {
        &self.joints
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    /// The `d` chosen line indices at joint `j`, ascending.
    pub fn chosen_lines(&self, j: usize) -> &[usize] {
        &self.incidence[j]
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// `(joint, slot)` pairs choosing line `l`, joints ascending.
    pub fn members(&self, l: usize) -> &[(usize, usize)] {
        &self.members[l]
    }

    /// Number of joints that chose line `l`.
    pub fn joints_on_line(&self, l: usize) -> usize {
        self.members[l].len()
    }

    pub fn max_joints_per_line(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Directions of the chosen lines at joint `j`, in slot order.
    pub fn directions_at(&self, j: usize) -> Vec<Vector> {
        self.incidence[j].iter().map(|&l| self.lines[l].direction().to_vec()).collect()
    }

    pub fn incidence_graph(&self) -> IncidenceGraph {
        IncidenceGraph::from_members(self.joints.len(), &self.members)
    }

    pub fn is_connected(&self) -> bool {
        self.incidence_graph().component_count() <= 1
    }

    /// Keeps the given joints and the lines they chose; other lines are dropped.
    pub fn restrict_to_joints(&self, keep: &[usize]) -> JointsConfiguration {
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        let mut line_ids: BTreeMap<usize, usize> = BTreeMap::new();
        for &j in &keep {
            for &l in &self.incidence[j] {
                let next = line_ids.len();
                line_ids.entry(l).or_insert(next);
            }
        }
        // renumber in ascending order so the result stays canonical
        let ordered: Vec<usize> = line_ids.keys().copied().collect();
        let renumber: BTreeMap<usize, usize> = ordered.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let lines = ordered.iter().map(|&l| self.lines[l].clone()).collect();
        let joints = keep.iter().map(|&j| self.joints[j].clone()).collect();
        let incidence = keep
            .iter()
            .map(|&j| self.incidence[j].iter().map(|l| renumber[l]).collect())
            .collect();
        Self::assemble(self.field, self.dim, lines, joints, incidence)
    }

    /// Random sub-configuration keeping each joint independently with
    /// probability `keep`.
    pub fn random_subconfiguration<R: Rng>(&self, rng: &mut R, keep: f64) -> JointsConfiguration {
        let kept: Vec<usize> = (0..self.joints.len()).filter(|_| rng.gen_bool(keep)).collect();
        self.restrict_to_joints(&kept)
    }

    /// Image under an invertible affine map.
    pub fn transformed(&self, map: &AffineMap) -> JointsConfiguration {
        let lines: Vec<Line> = self
            .lines
            .iter()
            .map(|l| Line::new(map.apply(l.base()), map.apply_linear(l.direction())).expect("invertible map keeps directions nonzero"))
            .collect();
        let joints = self.joints.iter().map(|p| map.apply(p)).collect();
        Self::with_line_objects(self.field, self.dim, lines, joints, self.incidence.clone())
            .expect("affine image of a valid configuration is valid")
            .config
    }

    /// Disjoint union of two configurations with no common joints or lines.
    pub fn union(&self, other: &JointsConfiguration) -> Result<JointsConfiguration, ConfigError> {
        let offset = self.lines.len();
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        let mut joints = self.joints.clone();
        joints.extend(other.joints.iter().cloned());
        let mut incidence = self.incidence.clone();
        incidence.extend(other.incidence.iter().map(|c| c.iter().map(|l| l + offset).collect()));
        Self::new(self.field, self.dim, lines, joints, incidence)
    }
}

/// Joints adjacent when they chose a common line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub adjacency: Vec<BTreeSet<usize>>,
    pub labels: Vec<usize>,
}

impl IncidenceGraph {
    fn from_members(joints: usize, members: &[Vec<(usize, usize)>]) -> Self {
        let mut adjacency = vec![BTreeSet::new(); joints];
        for m in members {
            for &(p, _) in m {
                for &(q, _) in m {
                    if p != q {
                        adjacency[p].insert(q);
                    }
                }
            }
        }
        let mut labels = vec![usize::MAX; joints];
        let mut next = 0;
        for start in 0..joints {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adjacency[v] {
                    if labels[w] == usize::MAX {
                        labels[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        IncidenceGraph { adjacency, labels }
    }

    pub fn component_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m + 1)
    }

    /// Joint indices of each component, components ordered by smallest joint.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count()];
        for (j, &c) in self.labels.iter().enumerate() {
            out[c].push(j);
        }
        out
    }
}

/// Splits into connected components; each keeps only its joints' chosen lines.
pub fn connected_components(cfg: &JointsConfiguration) -> Vec<JointsConfiguration> {
    cfg.incidence_graph()
        .components()
        .iter()
        .map(|joints| cfg.restrict_to_joints(joints))
        .collect()
}

/// Joints each formed by exactly one line of every family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultijointsConfiguration {
    field: Field,
    dim: usize,
    families: Vec<Vec<Line>>,
    joints: Vec<Point>,
    incidence: Vec<Vec<usize>>,
}

impl MultijointsConfiguration {
    /// `incidence[j][i]` indexes the line of family `i` through joint `j`.
    pub fn new(
        field: Field,
        families: Vec<Vec<Line>>,
        joints: Vec<Point>,
        incidence: Vec<Vec<usize>>,
    ) -> Result<Self, ConfigError> {
        let dim = families.len();
        if dim < 2 {
            return Err(ConfigError::InvalidParameters("need at least two families".into()));
        }
        if incidence.len() != joints.len() {
            return Err(ConfigError::InvalidParameters("incidence length differs from joint count".into()));
        }
        let mut sorted_families = Vec::with_capacity(dim);
        let mut maps = Vec::with_capacity(dim);
        for family in families {
            for l in &family {
                check_point(field, dim, l.base())?;
            }
            let (family, map) = sort_with_map(family);
            if let Some(w) = family.windows(2).position(|w| w[0] == w[1]) {
                return Err(ConfigError::DuplicateLine(w + 1));
            }
            sorted_families.push(family);
            maps.push(map);
        }
        for p in &joints {
            check_point(field, dim, p)?;
        }
        for (j, chosen) in incidence.iter().enumerate() {
            if chosen.len() != dim {
                return Err(ConfigError::IncidenceCount {
                    joint: j,
                    expected: dim,
                    found: chosen.len(),
                });
            }
        }
        let remapped: Vec<Vec<usize>> = incidence
            .iter()
            .map(|c| c.iter().enumerate().map(|(i, &l)| maps[i].get(l).copied().unwrap_or(usize::MAX)).collect())
            .collect();
        let mut pairs: Vec<(Point, Vec<usize>)> = joints.into_iter().zip(remapped).collect();
        pairs.sort();
        if let Some(w) = pairs.windows(2).position(|w| w[0].0 == w[1].0) {
            return Err(ConfigError::DuplicateJoint(w + 1));
        }
        for (j, (p, chosen)) in pairs.iter().enumerate() {
            let mut dirs = Vec::with_capacity(dim);
            for (i, &l) in chosen.iter().enumerate() {
                let line = sorted_families[i].get(l).ok_or(ConfigError::IndexOutOfRange { joint: j, index: l })?;
                if !point_on(p, line) {
                    return Err(ConfigError::JointNotOnLine { joint: j, line: l });
                }
                dirs.push(line.direction().to_vec());
            }
            if !directions_independent(&dirs) {
                return Err(ConfigError::DependentDirections { joint: j });
            }
        }
        let (joints, incidence) = pairs.into_iter().unzip();
        Ok(MultijointsConfiguration {
            field,
            dim,
            families: sorted_families,
            joints,
            incidence,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn families(&self) -> &[Vec<Line>] {
        &self.families
    }

    pub fn family_sizes(&self) -> Vec<u64> {
        self.families.iter().map(|f| f.len() as u64).collect()
    }

    pub fn joints(&self) -> &[Point] {
        &self.joints
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// The same joints with all families pooled into one set of line
    /// objects; a line shared by two families becomes two objects. Also
    /// returns the family of each line object.
    pub fn as_joints(&self) -> (JointsConfiguration, Vec<usize>) {
        let mut lines = Vec::new();
        let mut family_of = Vec::new();
        let mut offsets = Vec::with_capacity(self.dim);
        for (i, family) in self.families.iter().enumerate() {
            offsets.push(lines.len());
            lines.extend(family.iter().cloned());
            family_of.extend(std::iter::repeat_n(i, family.len()));
        }
        let incidence = self
            .incidence
            .iter()
            .map(|c| c.iter().enumerate().map(|(i, &l)| offsets[i] + l).collect())
            .collect();
        let canon = JointsConfiguration::with_line_objects(self.field, self.dim, lines, self.joints.clone(), incidence)
            .expect("multijoints are joints of the pooled lines");
        let mut families = vec![0; family_of.len()];
        for (old, &new) in canon.line_map.iter().enumerate() {
            families[new] = family_of[old];
        }
        (canon.config, families)
    }
}

/// Joints each lying on `m` chosen lines and one chosen `(d-m)`-flat whose
/// directions together span the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatJointsConfiguration {
    field: Field,
    dim: usize,
    m: usize,
    lines: Vec<Line>,
    flats: Vec<Flat>,
    joints: Vec<Point>,
    line_incidence: Vec<Vec<usize>>,
    flat_incidence: Vec<usize>,
}

impl FlatJointsConfiguration {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: Field,
        dim: usize,
        m: usize,
        lines: Vec<Line>,
        flats: Vec<Flat>,
        joints: Vec<Point>,
        line_incidence: Vec<Vec<usize>>,
        flat_incidence: Vec<usize>,
    ) -> Result<Self, ConfigError> {
        if m == 0 || m >= dim {
            return Err(ConfigError::InvalidParameters(format!("need 1 ≤ m < d, got m={m}, d={dim}")));
        }
        if line_incidence.len() != joints.len() || flat_incidence.len() != joints.len() {
            return Err(ConfigError::InvalidParameters("incidence length differs from joint count".into()));
        }
        for p in &joints {
            check_point(field, dim, p)?;
        }
        for l in &lines {
            check_point(field, dim, l.base())?;
        }
        for (i, f) in flats.iter().enumerate() {
            check_point(field, dim, f.base())?;
            if f.dim() != dim - m {
                return Err(ConfigError::FlatDimension {
                    flat: i,
                    expected: dim - m,
                    found: f.dim(),
                });
            }
        }
        for (j, p) in joints.iter().enumerate() {
            let chosen = &line_incidence[j];
            if chosen.len() != m {
                return Err(ConfigError::IncidenceCount {
                    joint: j,
                    expected: m,
                    found: chosen.len(),
                });
            }
            let fi = flat_incidence[j];
            let flat = flats.get(fi).ok_or(ConfigError::IndexOutOfRange { joint: j, index: fi })?;
            if !point_on(p, flat) {
                return Err(ConfigError::JointNotOnFlat { joint: j, flat: fi });
            }
            let mut dirs: Vec<Vector> = flat.basis().to_vec();
            for &l in chosen {
                let line = lines.get(l).ok_or(ConfigError::IndexOutOfRange { joint: j, index: l })?;
                if !point_on(p, line) {
                    return Err(ConfigError::JointNotOnLine { joint: j, line: l });
                }
                dirs.push(line.direction().to_vec());
            }
            if !directions_independent(&dirs) {
                return Err(ConfigError::DependentDirections { joint: j });
            }
        }
        let (lines, line_map) = sort_with_map(lines);
        if let Some(w) = lines.windows(2).position(|w| w[0] == w[1]) {
            return Err(ConfigError::DuplicateLine(w + 1));
        }
        let (flats, flat_map) = sort_with_map(flats);
        if let Some(w) = flats.windows(2).position(|w| w[0] == w[1]) {
            return Err(ConfigError::DuplicateFlat(w + 1));
        }
        let mut rows: Vec<(Point, Vec<usize>, usize)> = joints
            .into_iter()
            .zip(line_incidence)
            .zip(flat_incidence)
            .map(|((p, ls), f)| {
                let mut ls: Vec<usize> = ls.into_iter().map(|l| line_map[l]).collect();
                ls.sort_unstable();
                (p, ls, flat_map[f])
            })
            .collect();
        rows.sort();
        if let Some(w) = rows.windows(2).position(|w| w[0].0 == w[1].0) {
            return Err(ConfigError::DuplicateJoint(w + 1));
        }
        let mut joints = Vec::with_capacity(rows.len());
        let mut line_incidence = Vec::with_capacity(rows.len());
        let mut flat_incidence = Vec::with_capacity(rows.len());
        for (p, ls, f) in rows {
            joints.push(p);
            line_incidence.push(ls);
            flat_incidence.push(f);
        }
        Ok(FlatJointsConfiguration {
            field,
            dim,
            m,
            lines,
            flats,
            joints,
            line_incidence,
            flat_incidence,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn joints(&self) -> &[Point] {
        &self.joints
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn line_incidence(&self) -> &[Vec<usize>] {
        &self.line_incidence
    }

    pub fn flat_incidence(&self) -> &[usize] {
        &self.flat_incidence
    }

    /// `(joint, slot)` pairs choosing each line.
    pub fn line_members(&self) -> Vec<Vec<(usize, usize)>> {
        let mut members = vec![Vec::new(); self.lines.len()];
        for (j, chosen) in self.line_incidence.iter().enumerate() {
            for (slot, &l) in chosen.iter().enumerate() {
                members[l].push((j, slot));
            }
        }
        members
    }

    /// Joints choosing each flat.
    pub fn flat_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.flats.len()];
        for (j, &f) in self.flat_incidence.iter().enumerate() {
            members[f].push(j);
        }
        members
    }

    /// Keeps the given joints, the lines they chose and all flats.
    pub fn restrict_to_joints(&self, keep: &[usize]) -> FlatJointsConfiguration {
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        let used: BTreeSet<usize> = keep.iter().flat_map(|&j| self.line_incidence[j].iter().copied()).collect();
        let renumber: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        FlatJointsConfiguration {
            field: self.field,
            dim: self.dim,
            m: self.m,
            lines: used.iter().map(|&l| self.lines[l].clone()).collect(),
            flats: self.flats.clone(),
            joints: keep.iter().map(|&j| self.joints[j].clone()).collect(),
            line_incidence: keep
                .iter()
                .map(|&j| self.line_incidence[j].iter().map(|l| renumber[l]).collect())
                .collect(),
            flat_incidence: keep.iter().map(|&j| self.flat_incidence[j]).collect(),
        }
    }

    pub fn random_subconfiguration<R: Rng>(&self, rng: &mut R, keep: f64) -> FlatJointsConfiguration {
        let kept: Vec<usize> = (0..self.joints.len()).filter(|_| rng.gen_bool(keep)).collect();
        self.restrict_to_joints(&kept)
    }
}

/// A joints configuration obtained from a flat-joints one by adding, at every
/// joint, lines inside its flat along the flat's basis directions.
#[derive(Clone, Debug)]
pub struct AugmentedConfig {
    pub config: JointsConfiguration,
    /// True for the added line objects, each chosen by exactly one joint.
    pub is_new_line: Vec<bool>,
    /// Index in the augmented configuration of each original line.
    pub original_line: Vec<usize>,
    slots: Vec<Vec<usize>>,
}

impl AugmentedConfig {
    /// Augmented indices of the lines joint `j` chose in the flat-joints
    /// configuration, in its slot order. Joint indices agree in both.
    pub fn original_slots(&self, j: usize) -> &[usize] {
        &self.slots[j]
    }
}

pub fn augment_with_flat_lines(cfg: &FlatJointsConfiguration) -> AugmentedConfig {
    let mut lines: Vec<Line> = cfg.lines.clone();
    let mut incidence: Vec<Vec<usize>> = cfg.line_incidence.clone();
    for (j, p) in cfg.joints.iter().enumerate() {
        let flat = &cfg.flats[cfg.flat_incidence[j]];
        for v in flat.basis() {
            incidence[j].push(lines.len());
            lines.push(Line::new(p.clone(), v.clone()).expect("basis vectors are nonzero"));
        }
    }
    let original = cfg.lines.len();
    let canon = JointsConfiguration::with_line_objects(cfg.field, cfg.dim, lines, cfg.joints.clone(), incidence)
        .expect("flat directions complete the chosen lines");
    debug_assert!(canon.joint_map.iter().enumerate().all(|(i, &j)| i == j));
    let mut is_new_line = vec![false; canon.line_map.len()];
    for (old, &new) in canon.line_map.iter().enumerate() {
        is_new_line[new] = old >= original;
    }
    let slots = cfg
        .line_incidence
        .iter()
        .map(|ls| ls.iter().map(|&l| canon.line_map[l]).collect())
        .collect();
    AugmentedConfig {
        config: canon.config,
        is_new_line,
        original_line: canon.line_map[..original].to_vec(),
        slots,
    }
}

/// Scalars `0, 1, …, k-1` embedded in `field`, failing if they collide.
pub(crate) fn distinct_parameters(field: Field, k: usize) -> Result<Vec<Scalar>, ConfigError> {
    let p = field.characteristic();
    if p != 0 && k as u64 >= p {
        return Err(ConfigError::DegenerateConstruction(format!(
            "{k} distinct parameters do not fit in F_{p}"
        )));
    }
    Ok((1..=k as i64).map(|t| field.from_i64(t)).collect())
}

#[cfg(test)]
mod tests;
