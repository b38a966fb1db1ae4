//! JSON documents for complexes, patterns, singular states and sweep
//! traces. Every document carries `"version": 1`; it may be omitted on
//! input.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{tetrahedron, Complex2, ComplexError};
use crate::pattern::{pattern_from_weights, EdgeWeights, Pattern, PatternError};
use crate::spattern::{PairInsertion, SingularState, Spattern, SpatternError};
use crate::sweep::{SweepEvent, SweepTrace};

pub const FORMAT_VERSION: u32 = 1;

fn version_one() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document version {0}")]
    Version(u32),
    #[error("unknown complex `{0}`")]
    UnknownComplex(String),
    #[error("unrecognized document: {0}")]
    Format(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Spattern(#[from] SpatternError),
}

fn check_version(v: u32) -> Result<(), IoError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(IoError::Version(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitComplex {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub triangles: Vec<[String; 3]>,
}

/// `"tetra"` or an explicit vertex/edge/triangle listing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Named(String),
    Explicit(ExplicitComplex),
}

impl Default for ComplexSpec {
    fn default() -> Self {
        ComplexSpec::Named("tetra".into())
    }
}

impl ComplexSpec {
    /// Builds the complex. An explicit listing of the tetrahedron's
    /// simplices is replaced by the canonical tetrahedron.
    pub fn build(&self) -> Result<Arc<Complex2>, IoError> {
        match self {
            ComplexSpec::Named(n) if n == "tetra" || n == "T" => Ok(tetrahedron()),
            ComplexSpec::Named(n) => Err(IoError::UnknownComplex(n.clone())),
            ComplexSpec::Explicit(x) => {
                let c = Complex2::from_parts(&x.vertices, &x.edges, &x.triangles)?;
                if same_simplices(&c, &crate::complex::canonical_tetrahedron()) {
                    Ok(tetrahedron())
                } else {
                    Ok(Arc::new(c))
                }
            }
        }
    }

    pub fn of(c: &Complex2) -> Self {
        if c.is_tetrahedron() {
            return ComplexSpec::default();
        }
        let name = |v| c.vertex_name(v).to_string();
        ComplexSpec::Explicit(ExplicitComplex {
            vertices: c.vertex_names().to_vec(),
            edges: c.edges().iter().map(|e| [name(e.ends[0]), name(e.ends[1])]).collect(),
            triangles: c.triangles().iter().map(|t| t.orientation.map(name)).collect(),
        })
    }
}

fn same_simplices(a: &Complex2, b: &Complex2) -> bool {
    let verts = |c: &Complex2| c.vertex_names().iter().cloned().collect::<BTreeSet<_>>();
    let edges = |c: &Complex2| c.edges().iter().map(|e| e.id.clone()).collect::<BTreeSet<_>>();
    let tris = |c: &Complex2| c.triangles().iter().map(|t| t.id.clone()).collect::<BTreeSet<_>>();
    verts(a) == verts(b) && edges(a) == edges(b) && tris(a) == tris(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDoc {
    #[serde(default = "version_one")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub complex: ComplexSpec,
    pub weights: BTreeMap<String, u32>,
}

impl PatternDoc {
    pub fn from_pattern(p: &Pattern) -> Self {
        PatternDoc {
            version: FORMAT_VERSION,
            name: None,
            description: None,
            complex: ComplexSpec::of(p.complex()),
            weights: p.weights().named(p.complex()),
        }
    }

    pub fn to_pattern(&self) -> Result<Pattern, IoError> {
        check_version(self.version)?;
        let c = self.complex.build()?;
        let w = EdgeWeights::from_named(&c, self.weights.iter().map(|(k, v)| (k.as_str(), *v)))?;
        Ok(pattern_from_weights(&c, &w)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatternDoc {
    #[serde(default = "version_one")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub complex: ComplexSpec,
    /// Point names per edge, in position order.
    pub points: BTreeMap<String, Vec<String>>,
    pub lines: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, u32>,
    /// Same-edge chords are only accepted when set.
    #[serde(default)]
    pub singular: bool,
}

impl SpatternDoc {
    pub fn from_state(s: &SingularState) -> Self {
        SpatternDoc {
            version: FORMAT_VERSION,
            name: None,
            description: None,
            complex: ComplexSpec::of(s.complex()),
            points: s.named_points(),
            lines: s.named_lines(),
            labels: s.labels(),
            singular: !s.is_spattern(),
        }
    }

    pub fn to_state(&self) -> Result<SingularState, IoError> {
        check_version(self.version)?;
        let c = self.complex.build()?;
        let s = SingularState::from_named(&c, self.points.clone(), self.lines.clone(), &self.labels)?;
        if !self.singular && !s.is_spattern() {
            return Err(IoError::Format("same-edge chords need \"singular\": true".into()));
        }
        Ok(s)
    }

    /// Loads and validates a spattern (no same-edge chords allowed).
    pub fn to_spattern(&self) -> Result<Spattern, IoError> {
        Ok(Spattern::new(self.to_state()?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EventDoc {
    Add {
        edge: String,
        positions: [u32; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<u32>,
        /// Names of the new points; defaults to `{edge}.{event}.a/b`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<[String; 2]>,
        lines: BTreeMap<String, Vec<[String; 2]>>,
    },
    Remove {
        pair: [String; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    #[serde(default = "version_one")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub initial: SpatternDoc,
    #[serde(default)]
    pub sphere: bool,
    pub events: Vec<EventDoc>,
}

impl TraceDoc {
    pub fn to_trace(&self) -> Result<SweepTrace, IoError> {
        check_version(self.version)?;
        let initial = self.initial.to_state()?;
        let c = initial.complex().clone();
        let mut events = Vec::with_capacity(self.events.len());
        for (i, ev) in self.events.iter().enumerate() {
            events.push(match ev {
                EventDoc::Remove { pair } => SweepEvent::Remove { pair: pair.clone() },
                EventDoc::Add { edge, positions, label, points, lines } => {
                    let e = c.edge_by_name(edge).ok_or_else(|| SpatternError::UnknownEdge(edge.clone()))?;
                    let names = points.clone().unwrap_or_else(|| [format!("{edge}.{i}.a"), format!("{edge}.{i}.b")]);
                    let mut by_tri = BTreeMap::new();
                    for (t, list) in lines {
                        let tid = c.triangle_by_name(t).ok_or_else(|| SpatternError::UnknownTriangle(t.clone()))?;
                        by_tri.entry(tid).or_insert_with(Vec::new).extend(list.iter().cloned());
                    }
                    SweepEvent::Add(PairInsertion {
                        edge: e,
                        positions: *positions,
                        names,
                        label: *label,
                        lines: by_tri,
                    })
                }
            });
        }
        Ok(SweepTrace { initial, sphere: self.sphere, events })
    }

    pub fn from_trace(t: &SweepTrace) -> Self {
        let c = t.initial.complex();
        let events = t
            .events
            .iter()
            .map(|ev| match ev {
                SweepEvent::Remove { pair } => EventDoc::Remove { pair: pair.clone() },
                SweepEvent::Add(ins) => EventDoc::Add {
                    edge: c.edge(ins.edge).id.clone(),
                    positions: ins.positions,
                    label: ins.label,
                    points: Some(ins.names.clone()),
                    lines: ins.lines.iter().map(|(t, l)| (c.triangle(*t).id.clone(), l.clone())).collect(),
                },
            })
            .collect();
        TraceDoc {
            version: FORMAT_VERSION,
            name: None,
            description: None,
            initial: SpatternDoc::from_state(&t.initial),
            sphere: t.sphere,
            events,
        }
    }
}

/// Any of the three document kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Pattern(PatternDoc),
    Spattern(SpatternDoc),
    Trace(TraceDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Pattern(_) => "pattern",
            Document::Spattern(_) => "spattern",
            Document::Trace(_) => "trace",
        }
    }
}

/// Parses a document, telling the kinds apart by their keys.
pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| IoError::Format("top level must be an object".into()))?;
    if obj.contains_key("events") {
        Ok(Document::Trace(serde_json::from_value(v)?))
    } else if obj.contains_key("weights") {
        Ok(Document::Pattern(serde_json::from_value(v)?))
    } else if obj.contains_key("points") {
        Ok(Document::Spattern(serde_json::from_value(v)?))
    } else {
        Err(IoError::Format("expected `weights`, `points` or `events`".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::tw;

    #[test]
    fn pattern_doc_round_trip() {
        let p = pattern_from_weights(&tetrahedron(), &tw([3, 3, 2, 2, 1, 1])).unwrap();
        let doc = PatternDoc::from_pattern(&p);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"version\":1"));
        let back: PatternDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_pattern().unwrap(), p);
    }

    #[test]
    fn version_is_optional_but_checked() {
        let doc: PatternDoc = serde_json::from_str(r#"{"complex":"tetra","weights":{"uv":1,"uz":1,"uw":1}}"#).unwrap();
        assert_eq!(doc.version, 1);
        assert!(doc.to_pattern().is_ok());
        let doc: PatternDoc = serde_json::from_str(r#"{"version":2,"weights":{}}"#).unwrap();
        assert!(matches!(doc.to_pattern(), Err(IoError::Version(2))));
    }

    #[test]
    fn explicit_tetrahedron_is_normalized() {
        let text = r#"{"complex":{"vertices":["z","w","v","u"],
            "edges":[["z","w"],["u","v"],["u","w"],["u","z"],["v","w"],["v","z"]],
            "triangles":[["u","v","z"],["u","z","w"],["u","w","v"],["v","w","z"]]},
            "weights":{"uv":2,"wz":2,"uz":1,"vw":1,"uw":1,"vz":1}}"#;
        let doc: PatternDoc = serde_json::from_str(text).unwrap();
        let p = doc.to_pattern().unwrap();
        assert!(p.complex().is_tetrahedron());
        assert_eq!(p.weights(), &tw([2, 2, 1, 1, 1, 1]));
    }

    #[test]
    fn chords_need_singular_flag() {
        let text = r#"{"points":{"uv":["a"],"uz":["b"],"uw":["c"],"vz":["p","q"]},
            "lines":{"uvz":[["a","p"],["q","b"]],"vwz":[["p","q"]],"uwz":[["b","c"]],"uvw":[["c","a"]]}}"#;
        let doc: SpatternDoc = serde_json::from_str(text).unwrap();
        assert!(matches!(doc.to_state(), Err(IoError::Format(_))));
        let mut doc = doc;
        doc.singular = true;
        let s = doc.to_state().unwrap();
        assert!(SpatternDoc::from_state(&s).singular);
    }

    #[test]
    fn document_kinds() {
        assert_eq!(parse_document(r#"{"weights":{}}"#).unwrap().kind(), "pattern");
        assert_eq!(parse_document(r#"{"points":{},"lines":{}}"#).unwrap().kind(), "spattern");
        assert!(parse_document("[]").is_err());
        assert!(parse_document("{").is_err());
    }
}
