//! Embedded patterns determined by edge weights.
//!
//! An edge-weight vector fixes, in every triangle, how many arcs cut each
//! corner. Corner arcs take the point slots nearest their corner, which
//! realizes the unique non-crossing matching with those counts. Components of
//! the resulting curve system are the tracks of the pattern.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Complex2, ComplexError, EdgeId, TriangleId, VertexId};
use crate::dsu::DisjointSet;

/// Per-edge intersection counts, indexed by [`EdgeId`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeWeights(Vec<u32>);

impl EdgeWeights {
    pub fn zeros(edges: usize) -> Self {
        EdgeWeights(vec![0; edges])
    }

    pub fn from_vec(w: Vec<u32>) -> Self {
        EdgeWeights(w)
    }

    /// Builds a weight vector from `(edge id, weight)` pairs; missing edges
    /// get weight zero.
    pub fn from_named<'a, I>(c: &Complex2, entries: I) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = (&'a str, u32)>,
    {
        let mut w = EdgeWeights::zeros(c.edge_count());
        for (name, value) in entries {
            let e = c.edge_by_name(name).ok_or_else(|| PatternError::UnknownEdge(name.to_string()))?;
            w.0[e.0] = value;
        }
        Ok(w)
    }

    pub fn get(&self, e: EdgeId) -> u32 {
        self.0[e.0]
    }

    pub fn set(&mut self, e: EdgeId, value: u32) {
        self.0[e.0] = value;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    /// Weights keyed by edge id.
    pub fn named(&self, c: &Complex2) -> BTreeMap<String, u32> {
        c.edges().iter().zip(&self.0).map(|(e, &w)| (e.id.clone(), w)).collect()
    }
}

/// Arc counts inside one triangle: `t[i]` arcs join the two edges other than
/// `edges[i]`, i.e. cut off the corner at `vertices[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CornerArcCounts {
    pub t: [u32; 3],
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq, Serialize)]
pub enum CornerError {
    #[error("odd number of boundary points")]
    ParityViolation,
    #[error("one edge carries more points than the other two together")]
    TriangleInequalityViolation,
}

/// Corner arc counts for a triangle whose edges carry `w_a, w_b, w_c` points.
pub fn corner_counts(w_a: u32, w_b: u32, w_c: u32) -> Result<CornerArcCounts, CornerError> {
    let (a, b, c) = (i64::from(w_a), i64::from(w_b), i64::from(w_c));
    if (a + b + c) % 2 != 0 {
        return Err(CornerError::ParityViolation);
    }
    let t = [(b + c - a) / 2, (a + c - b) / 2, (a + b - c) / 2];
    if t.iter().any(|&x| x < 0) {
        return Err(CornerError::TriangleInequalityViolation);
    }
    Ok(CornerArcCounts { t: t.map(|x| x as u32) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleViolation {
    pub triangle: String,
    pub error: CornerError,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("weight vector has {got} entries, complex has {expected} edges")]
    WeightLength { expected: usize, got: usize },
    #[error("weights are not realizable: {}", describe(.0))]
    Unrealizable(Vec<TriangleViolation>),
    #[error("patterns live on different complexes")]
    ComplexMismatch,
}

fn describe(v: &[TriangleViolation]) -> String {
    v.iter().map(|x| format!("{}: {}", x.triangle, x.error)).collect::<Vec<_>>().join("; ")
}

impl PatternError {
    /// Per-triangle failures, when the weights were unrealizable.
    pub fn triangle_violations(&self) -> &[TriangleViolation] {
        match self {
            PatternError::Unrealizable(v) => v,
            _ => &[],
        }
    }
}

/// A point slot: position `pos` (0-based from the edge's first vertex) on
/// edge `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Slot {
    pub edge: EdgeId,
    pub pos: u32,
}

/// Position of `slot` in the counter-clockwise-by-name boundary walk of
/// triangle `t`: along `ab`, then `bc`, then back along `ca`, where `a<b<c`
/// are the sorted vertex names.
pub fn boundary_index(c: &Complex2, weights: &EdgeWeights, t: TriangleId, slot: Slot) -> usize {
    let [bc, ac, ab] = c.triangle_edges(t);
    let (w_ab, w_bc, w_ac) = (weights.get(ab) as usize, weights.get(bc) as usize, weights.get(ac) as usize);
    let pos = slot.pos as usize;
    if slot.edge == ab {
        pos
    } else if slot.edge == bc {
        w_ab + pos
    } else {
        debug_assert_eq!(slot.edge, ac);
        w_ab + w_bc + (w_ac - 1 - pos)
    }
}

/// Whether two chords of a disc, given by boundary indices, cross.
pub fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = if a.0 < a.1 { a } else { (a.1, a.0) };
    let (b0, b1) = if b.0 < b.1 { b } else { (b.1, b.0) };
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

/// An embedded pattern: the unique non-crossing arc system with given
/// edge weights.
#[derive(Clone, Debug)]
pub struct Pattern {
    complex: Arc<Complex2>,
    weights: EdgeWeights,
    corners: Vec<CornerArcCounts>,
    arcs: Vec<Vec<(Slot, Slot)>>,
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        *self.complex == *other.complex && self.weights == other.weights
    }
}

impl Eq for Pattern {}

/// Realizes the embedded pattern with weights `w` on `c`.
pub fn pattern_from_weights(c: &Arc<Complex2>, w: &EdgeWeights) -> Result<Pattern, PatternError> {
    c.ensure_well_formed()?;
    if w.len() != c.edge_count() {
        return Err(PatternError::WeightLength { expected: c.edge_count(), got: w.len() });
    }
    let mut corners = Vec::with_capacity(c.triangle_count());
    let mut violations = Vec::new();
    for t in c.triangle_ids() {
        let e = c.triangle_edges(t);
        match corner_counts(w.get(e[0]), w.get(e[1]), w.get(e[2])) {
            Ok(cc) => corners.push(cc),
            Err(error) => violations.push(TriangleViolation { triangle: c.triangle(t).id.clone(), error }),
        }
    }
    if !violations.is_empty() {
        return Err(PatternError::Unrealizable(violations));
    }

    let slot_from = |e: EdgeId, corner: VertexId, r: u32| {
        let pos = if c.edge(e).ends[0] == corner { r } else { w.get(e) - 1 - r };
        Slot { edge: e, pos }
    };
    let mut arcs = Vec::with_capacity(c.triangle_count());
    for (ti, cc) in corners.iter().enumerate() {
        let t = TriangleId(ti);
        let edges = c.triangle_edges(t);
        let verts = c.triangle(t).vertices;
        let mut list = Vec::new();
        for i in 0..3 {
            let (e1, e2) = (edges[(i + 1) % 3], edges[(i + 2) % 3]);
            for r in 0..cc.t[i] {
                list.push((slot_from(e1, verts[i], r), slot_from(e2, verts[i], r)));
            }
        }
        arcs.push(list);
    }
    Ok(Pattern { complex: Arc::clone(c), weights: w.clone(), corners, arcs })
}

impl Pattern {
    pub fn complex(&self) -> &Arc<Complex2> {
        &self.complex
    }

    pub fn weights(&self) -> &EdgeWeights {
        &self.weights
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.total()
    }

    pub fn corner_counts(&self, t: TriangleId) -> CornerArcCounts {
        self.corners[t.0]
    }

    /// Arcs inside triangle `t`, corner by corner, innermost last.
    pub fn arcs(&self, t: TriangleId) -> &[(Slot, Slot)] {
        &self.arcs[t.0]
    }

    /// Arcs per triangle with endpoints ordered, sorted; two point-line
    /// structures with the same shape are identical up to point names.
    pub fn shape(&self) -> Vec<Vec<(Slot, Slot)>> {
        self.arcs
            .iter()
            .map(|list| {
                let mut v: Vec<(Slot, Slot)> =
                    list.iter().map(|&(a, b)| if a <= b { (a, b) } else { (b, a) }).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    fn slot_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.weights.len() + 1);
        let mut acc = 0usize;
        for &w in self.weights.as_slice() {
            off.push(acc);
            acc += w as usize;
        }
        off.push(acc);
        off
    }

    fn slot_dsu(&self, off: &[usize]) -> DisjointSet {
        let mut dsu = DisjointSet::new(*off.last().unwrap());
        for list in &self.arcs {
            for (a, b) in list {
                dsu.union(off[a.edge.0] + a.pos as usize, off[b.edge.0] + b.pos as usize);
            }
        }
        dsu
    }

    /// Number of connected components, without building them.
    pub fn component_count(&self) -> usize {
        let off = self.slot_offsets();
        self.slot_dsu(&off).count()
    }

    /// True when the pattern is nonempty and connected, i.e. a track.
    pub fn is_track(&self) -> bool {
        self.total_weight() > 0 && self.component_count() == 1
    }

    /// Slots visited by walking the component through `start`. On closed
    /// surfaces this is the cyclic traversal order.
    fn walk(&self, start: Slot, adjacency: &BTreeMap<Slot, Vec<(TriangleId, Slot)>>) -> Vec<Slot> {
        let mut order = vec![start];
        let mut prev_tri: Option<TriangleId> = None;
        let mut cur = start;
        loop {
            let next = adjacency[&cur].iter().find(|(t, _)| Some(*t) != prev_tri).copied();
            let Some((t, nxt)) = next else { break };
            if nxt == start {
                break;
            }
            order.push(nxt);
            prev_tri = Some(t);
            cur = nxt;
        }
        order
    }

    /// Splits the pattern into its tracks, ordered by their first slot.
    pub fn components(&self) -> Vec<Track> {
        let off = self.slot_offsets();
        let mut dsu = self.slot_dsu(&off);
        let slot_at = |flat: usize| {
            let e = off.partition_point(|&o| o <= flat) - 1;
            Slot { edge: EdgeId(e), pos: (flat - off[e]) as u32 }
        };
        let surface = self.complex.is_closed_surface();
        let mut adjacency: BTreeMap<Slot, Vec<(TriangleId, Slot)>> = BTreeMap::new();
        if surface {
            for (ti, list) in self.arcs.iter().enumerate() {
                for &(a, b) in list {
                    adjacency.entry(a).or_default().push((TriangleId(ti), b));
                    adjacency.entry(b).or_default().push((TriangleId(ti), a));
                }
            }
        }
        dsu.groups()
            .into_iter()
            .map(|group| {
                let slots: Vec<Slot> = if surface {
                    self.walk(slot_at(group[0]), &adjacency)
                } else {
                    group.iter().map(|&f| slot_at(f)).collect()
                };
                let mut w = EdgeWeights::zeros(self.weights.len());
                for s in &slots {
                    w.0[s.edge.0] += 1;
                }
                let pattern = pattern_from_weights(&self.complex, &w).expect("a component of a pattern is a pattern");
                Track { pattern, slots }
            })
            .collect()
    }

    /// Weights of the components, in component order.
    pub fn component_weights(&self) -> Vec<EdgeWeights> {
        self.components().into_iter().map(|t| t.pattern.weights).collect()
    }

    /// Groups of mutually parallel components (equal weight vectors).
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: BTreeMap<EdgeWeights, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.component_weights().into_iter().enumerate() {
            classes.entry(w).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = classes.into_values().collect();
        out.sort();
        out
    }
}

/// A connected component of a pattern.
#[derive(Clone, Debug)]
pub struct Track {
    /// The component realized as a pattern of its own.
    pub pattern: Pattern,
    /// The component's slots in the parent pattern, in traversal order when
    /// the complex is a closed surface.
    pub slots: Vec<Slot>,
}

impl Track {
    pub fn weight(&self) -> u64 {
        self.pattern.total_weight()
    }
}

/// Free-function form of [`Pattern::components`].
pub fn components(p: &Pattern) -> Vec<Track> {
    p.components()
}

/// Patterns are equivalent when they meet every edge equally often.
pub fn equivalent(p: &Pattern, q: &Pattern) -> Result<bool, PatternError> {
    if *p.complex != *q.complex {
        return Err(PatternError::ComplexMismatch);
    }
    Ok(p.weights == q.weights)
}

/// Every component is a 3-track or a 4-track.
pub fn is_normal(p: &Pattern) -> bool {
    p.components().iter().all(|t| matches!(t.weight(), 3 | 4))
}
