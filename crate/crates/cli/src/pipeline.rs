//! Chains library operations over JSON documents.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use tracklab_core::classify::{classify_track, separation};
use tracklab_core::io::{Document, PatternDoc, SpatternDoc, TraceDoc};
use tracklab_core::pattern::Pattern;
use tracklab_core::spattern::{
    find_removable_pairs, remove_pair, remove_pair_named, uncross, underlying_of_state, SingularState, Spattern,
};
use tracklab_core::sweep::{analyze_first_thick, SweepTrace, ThickReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Classify,
    Underlying,
    Uncross,
    /// Removes the named pair, or the first removable pair.
    RemovePair(Option<[String; 2]>),
    Analyze,
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classify" => Ok(Op::Classify),
            "underlying" => Ok(Op::Underlying),
            "uncross" => Ok(Op::Uncross),
            "remove-pair" => Ok(Op::RemovePair(None)),
            "analyze" => Ok(Op::Analyze),
            _ => match s.strip_prefix("remove-pair=").and_then(|r| r.split_once(',')) {
                Some((a, b)) => Ok(Op::RemovePair(Some([a.to_string(), b.to_string()]))),
                None => Err(format!(
                    "unknown op `{s}` (expected classify, underlying, uncross, remove-pair[=A,B] or analyze)"
                )),
            },
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Classify => f.write_str("classify"),
            Op::Underlying => f.write_str("underlying"),
            Op::Uncross => f.write_str("uncross"),
            Op::RemovePair(None) => f.write_str("remove-pair"),
            Op::RemovePair(Some([a, b])) => write!(f, "remove-pair={a},{b}"),
            Op::Analyze => f.write_str("analyze"),
        }
    }
}

/// A value flowing between ops.
#[derive(Clone, Debug)]
pub enum Item {
    Pattern(Pattern),
    /// A state with crossings or same-edge chords.
    State(SingularState),
    Trace(SweepTrace),
    Classification(Value),
    Report(Box<ThickReport>),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Pattern(_) => "pattern",
            Item::State(s) if s.is_spattern() => "spattern",
            Item::State(_) => "singular state",
            Item::Trace(_) => "trace",
            Item::Classification(_) => "classification",
            Item::Report(_) => "report",
        }
    }

    pub fn from_document(doc: &Document) -> Result<Self, tracklab_core::io::IoError> {
        Ok(match doc {
            Document::Pattern(d) => Item::Pattern(d.to_pattern()?),
            Document::Spattern(d) => normalize(d.to_state()?),
            Document::Trace(d) => Item::Trace(d.to_trace()?),
        })
    }

    pub fn to_json(&self) -> Value {
        let v = match self {
            Item::Pattern(p) => serde_json::to_value(PatternDoc::from_pattern(p)),
            Item::State(s) => serde_json::to_value(SpatternDoc::from_state(s)),
            Item::Trace(t) => serde_json::to_value(TraceDoc::from_trace(t)),
            Item::Classification(v) => Ok(v.clone()),
            Item::Report(r) => serde_json::to_value(r),
        };
        v.expect("documents serialize")
    }
}

/// Embedded spatterns become patterns.
fn normalize(s: SingularState) -> Item {
    if s.is_spattern() && s.crossing_count() == 0 {
        if let Ok(p) = underlying_of_state(&s) {
            return Item::Pattern(p);
        }
    }
    Item::State(s)
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("op {position} (`{op}`) cannot take a {got}")]
    Mismatch { position: usize, op: String, got: &'static str },
    #[error("op {position} (`{op}`) failed: {reason}")]
    Failed { position: usize, op: String, reason: String },
}

#[derive(Serialize)]
struct ComponentClass {
    weights: std::collections::BTreeMap<String, u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<tracklab_core::classify::TrackClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    separation: Option<tracklab_core::classify::SeparationPartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Classifies each component of a pattern on the tetrahedron.
pub fn classify_components(p: &Pattern) -> (Value, bool) {
    let mut ok = true;
    let comps: Vec<ComponentClass> = p
        .components()
        .iter()
        .map(|t| {
            let weights = t.pattern.weights().named(p.complex());
            match classify_track(t) {
                Ok(class) => {
                    ComponentClass { weights, class: Some(class), separation: separation(&t.pattern).ok(), error: None }
                }
                Err(e) => {
                    ok = false;
                    ComponentClass { weights, class: None, separation: None, error: Some(e.to_string()) }
                }
            }
        })
        .collect();
    (json!({ "version": 1, "total_weight": p.weights().total(), "components": comps }), ok)
}

fn apply(position: usize, op: &Op, item: Item) -> Result<Item, PipelineError> {
    let mismatch = |got| PipelineError::Mismatch { position, op: op.to_string(), got };
    let failed = |reason: String| PipelineError::Failed { position, op: op.to_string(), reason };
    match (op, item) {
        (Op::Classify, Item::Pattern(p)) => {
            let (v, ok) = classify_components(&p);
            if ok {
                Ok(Item::Classification(v))
            } else {
                Err(failed(format!("unclassifiable component: {v}")))
            }
        }
        (Op::Underlying, Item::Pattern(p)) => Ok(Item::Pattern(p)),
        (Op::Underlying, Item::State(s)) => {
            underlying_of_state(&s).map(Item::Pattern).map_err(|e| failed(e.to_string()))
        }
        (Op::Uncross, Item::Pattern(p)) => Ok(Item::Pattern(p)),
        (Op::Uncross, Item::State(s)) if s.is_spattern() => {
            let sp = Spattern::new(s).map_err(|e| failed(e.to_string()))?;
            let out = uncross(&sp).map_err(|e| failed(e.to_string()))?;
            Ok(normalize(out.result.into_state()))
        }
        (Op::RemovePair(pick), Item::Pattern(p)) => remove(&SingularState::from_pattern(&p), pick).map_err(failed),
        (Op::RemovePair(pick), Item::State(s)) => remove(&s, pick).map_err(failed),
        (Op::Analyze, Item::Trace(t)) => {
            analyze_first_thick(&t).map(|r| Item::Report(Box::new(r))).map_err(|e| failed(e.to_string()))
        }
        (_, other) => Err(mismatch(other.kind())),
    }
}

fn remove(s: &SingularState, pick: &Option<[String; 2]>) -> Result<Item, String> {
    let out = match pick {
        Some([a, b]) => remove_pair_named(s, a, b).map_err(|e| e.to_string())?,
        None => {
            let pairs = find_removable_pairs(s);
            let first = pairs.first().ok_or("no removable pair")?;
            remove_pair(s, first).map_err(|e| e.to_string())?
        }
    };
    Ok(normalize(out))
}

/// Runs `ops` in order. `observe` sees each intermediate value together with
/// the op that produced it.
pub fn run(input: Item, ops: &[Op], mut observe: impl FnMut(usize, &Op, &Item)) -> Result<Item, PipelineError> {
    let mut cur = input;
    for (i, op) in ops.iter().enumerate() {
        cur = apply(i + 1, op, cur)?;
        observe(i + 1, op, &cur);
    }
    Ok(cur)
}
