//! JSON interchange formats for configurations and graphs.
//!
//! Coordinates are strings: `"3/7"`, `"-2"` or `"42 mod 10007"`.

use jointslab::algebra::{Field, Scalar};
use jointslab::combinatorics::{ColoredGraph, UniformHypergraph};
use jointslab::configs::{
    detect_joints, detect_multijoints, FlatJointsConfiguration, JointsConfiguration, MultijointsConfiguration,
};
use jointslab::geometry::{Flat, Line, Point, Vector};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Joints,
    Multijoints,
    Flatjoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    pub base: Vec<String>,
    pub direction: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatDoc {
    pub base: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

/// A joint with the indices of its chosen lines: into `lines` for joints and
/// flat joints, one per family for multijoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointDoc {
    pub point: Vec<String>,
    pub lines: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema: u32,
    /// `"rational"` or `"prime:p"`.
    pub field: String,
    pub dim: usize,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<LineDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<Vec<LineDoc>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flats: Vec<FlatDoc>,
    /// Omitted joints are detected from the lines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joints: Option<Vec<JointDoc>>,
}

/// A parsed configuration of any kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Configuration {
    Joints(JointsConfiguration),
    Multijoints(MultijointsConfiguration),
    Flat(FlatJointsConfiguration),
}

fn invalid(path: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

pub(crate) fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn literals(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_literal).collect()
}

fn line_doc(l: &Line) -> LineDoc {
    LineDoc {
        base: literals(l.base().coords()),
        direction: literals(l.direction()),
    }
}

struct Reader {
    field: Field,
    dim: usize,
}

impl Reader {
    fn vector(&self, path: &str, raw: &[String]) -> Result<Vector, CliError> {
        if raw.len() != self.dim {
            return Err(invalid(path, format!("expected {} coordinates, found {}", self.dim, raw.len())));
        }
        raw.iter()
            .enumerate()
            .map(|(i, s)| self.field.parse_scalar(s).map_err(|e| invalid(format!("{path}[{i}]"), e)))
            .collect()
    }

    fn line(&self, path: &str, doc: &LineDoc) -> Result<Line, CliError> {
        let base = Point::new(self.vector(&format!("{path}.base"), &doc.base)?);
        let direction = self.vector(&format!("{path}.direction"), &doc.direction)?;
        Line::new(base, direction).map_err(|e| invalid(path, e))
    }

    fn lines(&self, path: &str, docs: &[LineDoc]) -> Result<Vec<Line>, CliError> {
        docs.iter()
            .enumerate()
            .map(|(i, d)| self.line(&format!("{path}[{i}]"), d))
            .collect()
    }

    fn flat(&self, path: &str, doc: &FlatDoc) -> Result<Flat, CliError> {
        let base = Point::new(self.vector(&format!("{path}.base"), &doc.base)?);
        let basis = doc
            .basis
            .iter()
            .enumerate()
            .map(|(i, v)| self.vector(&format!("{path}.basis[{i}]"), v))
            .collect::<Result<Vec<_>, _>>()?;
        Flat::new(base, basis).map_err(|e| invalid(path, e))
    }

    fn points(&self, joints: &[JointDoc]) -> Result<Vec<Point>, CliError> {
        joints
            .iter()
            .enumerate()
            .map(|(i, j)| Ok(Point::new(self.vector(&format!("joints[{i}].point"), &j.point)?)))
            .collect()
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: ConfigDocument = parse_json(text)?;
        if doc.schema != SCHEMA_VERSION {
            return Err(invalid("schema", format!("unsupported schema version {}", doc.schema)));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn field(&self) -> Result<Field, CliError> {
        self.field.parse().map_err(|e| invalid("field", e))
    }

    /// Builds the configuration, detecting joints when none are listed.
    pub fn to_configuration(&self) -> Result<Configuration, CliError> {
        let field = self.field()?;
        let reader = Reader { field, dim: self.dim };
        match self.kind {
            Kind::Joints => {
                let lines = reader.lines("lines", &self.lines)?;
                let cfg = match &self.joints {
                    None => detect_joints(field, self.dim, &lines),
                    Some(joints) => {
                        let points = reader.points(joints)?;
                        let incidence = joints.iter().map(|j| j.lines.clone()).collect();
                        JointsConfiguration::new(field, self.dim, lines, points, incidence)
                    }
                };
                Ok(Configuration::Joints(cfg.map_err(|e| invalid("joints", e))?))
            }
            Kind::Multijoints => {
                let families = self
                    .families
                    .iter()
                    .enumerate()
                    .map(|(i, f)| reader.lines(&format!("families[{i}]"), f))
                    .collect::<Result<Vec<_>, _>>()?;
                if families.len() != self.dim {
                    return Err(invalid("families", format!("need {} families", self.dim)));
                }
                let cfg = match &self.joints {
                    None => detect_multijoints(field, &families),
                    Some(joints) => {
                        let points = reader.points(joints)?;
                        let incidence = joints.iter().map(|j| j.lines.clone()).collect();
                        MultijointsConfiguration::new(field, families, points, incidence)
                    }
                };
                Ok(Configuration::Multijoints(cfg.map_err(|e| invalid("joints", e))?))
            }
            Kind::Flatjoints => {
                let m = self.m.ok_or_else(|| invalid("m", "flat joints need m"))?;
                let lines = reader.lines("lines", &self.lines)?;
                let flats = self
                    .flats
                    .iter()
                    .enumerate()
                    .map(|(i, f)| reader.flat(&format!("flats[{i}]"), f))
                    .collect::<Result<Vec<_>, _>>()?;
                let joints = self
                    .joints
                    .as_ref()
                    .ok_or_else(|| invalid("joints", "flat joints must be listed explicitly"))?;
                let points = reader.points(joints)?;
                let line_incidence = joints.iter().map(|j| j.lines.clone()).collect();
                let flat_incidence = joints
                    .iter()
                    .enumerate()
                    .map(|(i, j)| j.flat.ok_or_else(|| invalid(format!("joints[{i}].flat"), "missing flat")))
                    .collect::<Result<Vec<_>, _>>()?;
                let cfg = FlatJointsConfiguration::new(field, self.dim, m, lines, flats, points, line_incidence, flat_incidence)
                    .map_err(|e| invalid("joints", e))?;
                Ok(Configuration::Flat(cfg))
            }
        }
    }

    /// Document for a configuration, listing joints only if asked.
    pub fn from_configuration(cfg: &Configuration, with_joints: bool) -> Self {
        let empty = |field: Field, dim: usize, kind: Kind| ConfigDocument {
            schema: SCHEMA_VERSION,
            field: field.to_string(),
            dim,
            kind,
            m: None,
            lines: Vec::new(),
            families: Vec::new(),
            flats: Vec::new(),
            joints: None,
        };
        match cfg {
            Configuration::Joints(c) => ConfigDocument {
                lines: c.lines().iter().map(line_doc).collect(),
                joints: with_joints.then(|| {
                    c.joints()
                        .iter()
                        .zip(c.incidence())
                        .map(|(p, inc)| JointDoc {
                            point: literals(p.coords()),
                            lines: inc.clone(),
                            flat: None,
                        })
                        .collect()
                }),
                ..empty(c.field(), c.dim(), Kind::Joints)
            },
            Configuration::Multijoints(c) => ConfigDocument {
                families: c.families().iter().map(|f| f.iter().map(line_doc).collect()).collect(),
                joints: with_joints.then(|| {
                    c.joints()
                        .iter()
                        .zip(c.incidence())
                        .map(|(p, inc)| JointDoc {
                            point: literals(p.coords()),
                            lines: inc.clone(),
                            flat: None,
                        })
                        .collect()
                }),
                ..empty(c.field(), c.dim(), Kind::Multijoints)
            },
            Configuration::Flat(c) => ConfigDocument {
                m: Some(c.m()),
                lines: c.lines().iter().map(line_doc).collect(),
                flats: c
                    .flats()
                    .iter()
                    .map(|f| FlatDoc {
                        base: literals(f.base().coords()),
                        basis: f.basis().iter().map(|v| literals(v)).collect(),
                    })
                    .collect(),
                // flat joints are never detected, so they are always listed
                joints: Some(
                    c.joints()
                        .iter()
                        .enumerate()
                        .map(|(j, p)| JointDoc {
                            point: literals(p.coords()),
                            lines: c.line_incidence()[j].clone(),
                            flat: Some(c.flat_incidence()[j]),
                        })
                        .collect(),
                ),
                ..empty(c.field(), c.dim(), Kind::Flatjoints)
            },
        }
    }
}

/// A colored graph or a uniform hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphDocument {
    /// `colors[c]` lists the edges carrying color `c`.
    ColoredGraph { vertices: usize, colors: Vec<Vec<[usize; 2]>> },
    Hypergraph { vertices: usize, arity: usize, edges: Vec<Vec<usize>> },
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn colored_graph(&self) -> Result<ColoredGraph, CliError> {
        match self {
            GraphDocument::ColoredGraph { vertices, colors } => {
                let classes = colors.iter().map(|c| c.iter().map(|e| (e[0], e[1])).collect()).collect();
                ColoredGraph::new(*vertices, classes).map_err(|e| invalid("colors", e))
            }
            _ => Err(invalid("kind", "expected a colored-graph document")),
        }
    }

    pub fn hypergraph(&self) -> Result<UniformHypergraph, CliError> {
        match self {
            GraphDocument::Hypergraph { vertices, arity, edges } => {
                UniformHypergraph::new(*vertices, *arity, edges.clone()).map_err(|e| invalid("edges", e))
            }
            _ => Err(invalid("kind", "expected a hypergraph document")),
        }
    }
}
