use std::collections::{BTreeMap, BTreeSet};

use super::{ConfigError, JointsConfiguration, MultijointsConfiguration};
use crate::algebra::{rank_of, Field};
use crate::geometry::{Line, Point, Vector};

/// Every point where at least two of the lines meet, with the lines through it.
fn meeting_points(lines: &[Line]) -> BTreeMap<Point, BTreeSet<usize>> {
    let mut out: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = lines[i].intersection(&lines[j]) {
                let entry = out.entry(p).or_default();
                entry.insert(i);
                entry.insert(j);
            }
        }
    }
    out
}

/// Greedy scan in index order keeping each line that raises the rank; the
/// result is the lexicographically first spanning `d`-subset, if any.
fn first_spanning_subset(field: Field, d: usize, lines: &[Line], candidates: &BTreeSet<usize>) -> Option<Vec<usize>> {
    let mut chosen = Vec::with_capacity(d);
    let mut dirs: Vec<Vector> = Vec::with_capacity(d);
    for &l in candidates {
        dirs.push(lines[l].direction().to_vec());
        if rank_of(field, d, &dirs) == dirs.len() {
            chosen.push(l);
            if chosen.len() == d {
                return Some(chosen);
            }
        } else {
            dirs.pop();
        }
    }
    None
}

/// All joints of a set of lines in `F^d`. Duplicate lines are merged; at a
/// point with more than `d` lines the chosen lines are the first spanning
/// `d`-subset in canonical line order.
pub fn detect_joints(field: Field, d: usize, lines: &[Line]) -> Result<JointsConfiguration, ConfigError> {
    if d < 2 {
        return Err(ConfigError::InvalidParameters("joints need d ≥ 2".into()));
    }
    for l in lines {
        if l.dim() != d {
            return Err(ConfigError::DimensionMismatch {
                expected: d,
                found: l.dim(),
            });
        }
    }
    let unique: BTreeSet<Line> = lines.iter().cloned().collect();
    let lines: Vec<Line> = unique.into_iter().collect();
    let mut joints = Vec::new();
    let mut incidence = Vec::new();
    for (p, through) in meeting_points(&lines) {
        if through.len() < d {
            continue;
        }
        if let Some(chosen) = first_spanning_subset(field, d, &lines, &through) {
            joints.push(p);
            incidence.push(chosen);
        }
    }
    JointsConfiguration::new(field, d, lines, joints, incidence)
}

/// All multijoints of `d` line families: points lying on exactly one line of
/// each family, those lines spanning `F^d`.
pub fn detect_multijoints(field: Field, families: &[Vec<Line>]) -> Result<MultijointsConfiguration, ConfigError> {
    let d = families.len();
    if d < 2 {
        return Err(ConfigError::InvalidParameters("need at least two families".into()));
    }
    let families: Vec<Vec<Line>> = families
        .iter()
        .map(|f| f.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect())
        .collect();
    let mut pooled = Vec::new();
    let mut owner = Vec::new();
    for (i, family) in families.iter().enumerate() {
        for (k, l) in family.iter().enumerate() {
            if l.dim() != d {
                return Err(ConfigError::DimensionMismatch {
                    expected: d,
                    found: l.dim(),
                });
            }
            pooled.push(l.clone());
            owner.push((i, k));
        }
    }
    let mut joints = Vec::new();
    let mut incidence = Vec::new();
    'points: for (p, through) in meeting_points(&pooled) {
        let mut per_family: Vec<Option<usize>> = vec![None; d];
        for &idx in &through {
            let (i, k) = owner[idx];
            if per_family[i].replace(k).is_some() {
                continue 'points;
            }
        }
        let Some(chosen) = per_family.into_iter().collect::<Option<Vec<usize>>>() else {
            continue;
        };
        let dirs: Vec<Vector> = chosen
            .iter()
            .enumerate()
            .map(|(i, &k)| families[i][k].direction().to_vec())
            .collect();
        if rank_of(field, d, &dirs) == d {
            joints.push(p);
            incidence.push(chosen);
        }
    }
    MultijointsConfiguration::new(field, families, joints, incidence)
}
