//! Singular patterns: point/line structures on a 2-complex whose lines may
//! cross.
//!
//! A [`SingularState`] keeps its points in one arena ordered by
//! `(edge, position)`, so an arena index doubles as a [`Slot`] of the pattern
//! with the same weights. Lines are stored per triangle as sorted index
//! pairs; every operation rebuilds the arena, which keeps equality
//! structural.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::{Complex2, ComplexError, EdgeId, TriangleId};
use crate::dsu::DisjointSet;
use crate::pattern::{boundary_index, chords_cross, pattern_from_weights, EdgeWeights, Pattern, PatternError, Slot};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatePoint {
    pub name: String,
    pub label: Option<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpatternError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown triangle `{0}`")]
    UnknownTriangle(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point `{0}` listed twice")]
    DuplicatePoint(String),
    #[error("edge `{0}` listed twice")]
    DuplicateEdge(String),
    #[error("line in {triangle} ends at `{point}`, which is not on an edge of that triangle")]
    LineOffTriangle { triangle: String, point: String },
    #[error("line in {triangle} joins `{point}` to itself")]
    DegenerateLine { triangle: String, point: String },
    #[error("invalid state: {}", join(.0))]
    Invalid(Vec<StateViolation>),
    #[error("complex is not a closed surface")]
    NonSurfaceComplex,
    #[error("strack through `{0}` does not close up")]
    OpenStrack(String),
    #[error("`{0}`/`{1}` is not a removable pair")]
    NotRemovable(String, String),
    #[error("edge permutation: {0}")]
    BadPermutation(String),
    #[error("pair insertion: {0}")]
    BadInsertion(String),
    #[error("uncrossing obstructed: {0}")]
    Obstructed(Box<ObstructionCertificate>),
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One failed incidence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateViolation {
    LineCount { point: String, triangle: String, count: usize },
    SameEdgeChord { triangle: String, points: [String; 2] },
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::LineCount { point, triangle, count } => {
                write!(f, "point {point} has {count} lines in {triangle}")
            }
            StateViolation::SameEdgeChord { triangle, points } => {
                write!(f, "same-edge chord {}-{} in {triangle}", points[0], points[1])
            }
        }
    }
}

/// A point/line structure in which a line may join two points of one edge.
#[derive(Clone, Debug)]
pub struct SingularState {
    complex: Arc<Complex2>,
    /// `offsets[e]..offsets[e+1]` are the arena indices on edge `e`.
    offsets: Vec<usize>,
    points: Vec<StatePoint>,
    lines: Vec<Vec<[usize; 2]>>,
}

impl PartialEq for SingularState {
    fn eq(&self, other: &Self) -> bool {
        *self.complex == *other.complex
            && self.offsets == other.offsets
            && self.points == other.points
            && self.lines == other.lines
    }
}

impl Eq for SingularState {}

/// Builds a state from an arena, a per-edge order of arena indices and lines
/// in arena indices. Points missing from `order` must not appear in `lines`.
fn assemble(
    complex: &Arc<Complex2>,
    arena: &[StatePoint],
    order: &[Vec<usize>],
    lines: &[Vec<[usize; 2]>],
) -> SingularState {
    let mut remap = vec![NONE; arena.len()];
    let mut offsets = Vec::with_capacity(order.len() + 1);
    let mut points = Vec::with_capacity(arena.len());
    for list in order {
        offsets.push(points.len());
        for &a in list {
            remap[a] = points.len();
            points.push(arena[a].clone());
        }
    }
    offsets.push(points.len());
    let lines = lines
        .iter()
        .map(|list| {
            let mut v: Vec<[usize; 2]> = list
                .iter()
                .map(|&[a, b]| {
                    let (x, y) = (remap[a], remap[b]);
                    debug_assert!(x != NONE && y != NONE, "line references a dropped point");
                    if x <= y {
                        [x, y]
                    } else {
                        [y, x]
                    }
                })
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    SingularState { complex: Arc::clone(complex), offsets, points, lines }
}

impl SingularState {
    /// Builds a state from named points (per edge, in position order) and
    /// named lines (per triangle). Incidence is not checked here; see
    /// [`validate_state`].
    pub fn from_named<P, L>(
        complex: &Arc<Complex2>,
        points: P,
        lines: L,
        labels: &BTreeMap<String, u32>,
    ) -> Result<Self, SpatternError>
    where
        P: IntoIterator<Item = (String, Vec<String>)>,
        L: IntoIterator<Item = (String, Vec<[String; 2]>)>,
    {
        complex.ensure_well_formed()?;
        let mut order = vec![Vec::new(); complex.edge_count()];
        let mut seen_edge = vec![false; complex.edge_count()];
        let mut arena = Vec::new();
        let mut edge_of = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (edge, names) in points {
            let e = complex.edge_by_name(&edge).ok_or_else(|| SpatternError::UnknownEdge(edge.clone()))?;
            if std::mem::replace(&mut seen_edge[e.0], true) {
                return Err(SpatternError::DuplicateEdge(edge));
            }
            for n in names {
                if index.insert(n.clone(), arena.len()).is_some() {
                    return Err(SpatternError::DuplicatePoint(n));
                }
                order[e.0].push(arena.len());
                edge_of.push(e);
                let label = labels.get(&n).copied();
                arena.push(StatePoint { name: n, label });
            }
        }
        if let Some(stray) = labels.keys().find(|k| !index.contains_key(*k)) {
            return Err(SpatternError::UnknownPoint(stray.clone()));
        }
        let mut tri_lines = vec![Vec::new(); complex.triangle_count()];
        for (tri, list) in lines {
            let t = complex.triangle_by_name(&tri).ok_or_else(|| SpatternError::UnknownTriangle(tri.clone()))?;
            let edges = complex.triangle_edges(t);
            let tname = &complex.triangle(t).id;
            for [a, b] in list {
                let ia = *index.get(&a).ok_or_else(|| SpatternError::UnknownPoint(a.clone()))?;
                let ib = *index.get(&b).ok_or_else(|| SpatternError::UnknownPoint(b.clone()))?;
                if ia == ib {
                    return Err(SpatternError::DegenerateLine { triangle: tname.clone(), point: a });
                }
                for (i, n) in [(ia, &a), (ib, &b)] {
                    if !edges.contains(&edge_of[i]) {
                        return Err(SpatternError::LineOffTriangle { triangle: tname.clone(), point: n.clone() });
                    }
                }
                tri_lines[t.0].push([ia, ib]);
            }
        }
        Ok(assemble(complex, &arena, &order, &tri_lines))
    }

    /// The embedded pattern as a state; the point at position `i` of edge
    /// `xy` is named `xy{i}`.
    pub fn from_pattern(p: &Pattern) -> Self {
        let c = p.complex();
        let mut offsets = Vec::with_capacity(c.edge_count() + 1);
        let mut points = Vec::new();
        for e in c.edge_ids() {
            offsets.push(points.len());
            for i in 0..p.weights().get(e) {
                points.push(StatePoint { name: format!("{}{i}", c.edge(e).id), label: None });
            }
        }
        offsets.push(points.len());
        let idx = |s: Slot| offsets[s.edge.0] + s.pos as usize;
        let lines =
            p.shape().into_iter().map(|list| list.into_iter().map(|(a, b)| [idx(a), idx(b)]).collect()).collect();
        SingularState { complex: Arc::clone(c), offsets, points, lines }
    }

    pub fn complex(&self) -> &Arc<Complex2> {
        &self.complex
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[StatePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &StatePoint {
        &self.points[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.points[i].name
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p.name == name)
    }

    pub fn edge_of(&self, i: usize) -> EdgeId {
        EdgeId(self.offsets.partition_point(|&o| o <= i) - 1)
    }

    pub fn position(&self, i: usize) -> u32 {
        (i - self.offsets[self.edge_of(i).0]) as u32
    }

    pub fn slot(&self, i: usize) -> Slot {
        Slot { edge: self.edge_of(i), pos: self.position(i) }
    }

    /// Arena indices on edge `e`, in position order.
    pub fn edge_points(&self, e: EdgeId) -> std::ops::Range<usize> {
        self.offsets[e.0]..self.offsets[e.0 + 1]
    }

    pub fn weights(&self) -> EdgeWeights {
        EdgeWeights::from_vec(self.offsets.windows(2).map(|w| (w[1] - w[0]) as u32).collect())
    }

    pub fn total_weight(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn lines(&self, t: TriangleId) -> &[[usize; 2]] {
        &self.lines[t.0]
    }

    pub fn line_count(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }

    /// Lines whose endpoints share an edge.
    pub fn returning_arcs(&self) -> Vec<(TriangleId, [usize; 2])> {
        let mut out = Vec::new();
        for (ti, list) in self.lines.iter().enumerate() {
            for &l in list {
                if self.edge_of(l[0]) == self.edge_of(l[1]) {
                    out.push((TriangleId(ti), l));
                }
            }
        }
        out
    }

    pub fn is_spattern(&self) -> bool {
        self.returning_arcs().is_empty()
    }

    /// Points per edge by name, keyed by edge id.
    pub fn named_points(&self) -> BTreeMap<String, Vec<String>> {
        self.complex
            .edge_ids()
            .filter(|&e| !self.edge_points(e).is_empty())
            .map(|e| {
                (self.complex.edge(e).id.clone(), self.edge_points(e).map(|i| self.points[i].name.clone()).collect())
            })
            .collect()
    }

    /// Lines per triangle by name, keyed by triangle id.
    pub fn named_lines(&self) -> BTreeMap<String, Vec<[String; 2]>> {
        self.complex
            .triangle_ids()
            .filter(|t| !self.lines[t.0].is_empty())
            .map(|t| {
                let list =
                    self.lines[t.0].iter().map(|&[a, b]| [self.points[a].name.clone(), self.points[b].name.clone()]);
                (self.complex.triangle(t).id.clone(), list.collect())
            })
            .collect()
    }

    pub fn labels(&self) -> BTreeMap<String, u32> {
        self.points.iter().filter_map(|p| p.label.map(|l| (p.name.clone(), l))).collect()
    }

    fn order(&self) -> Vec<Vec<usize>> {
        (0..self.offsets.len() - 1).map(|e| (self.offsets[e]..self.offsets[e + 1]).collect()).collect()
    }

    /// `partners[t][i]` is the other end of the line at point `i` in
    /// triangle `t`, or `usize::MAX`.
    fn partners(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![NONE; self.points.len()]; self.lines.len()];
        for (t, list) in self.lines.iter().enumerate() {
            for &[a, b] in list {
                out[t][a] = b;
                out[t][b] = a;
            }
        }
        out
    }

    /// Arena indices grouped into connected components, ordered by least
    /// index.
    fn point_groups(&self) -> Vec<Vec<usize>> {
        let mut dsu = DisjointSet::new(self.points.len());
        for list in &self.lines {
            for &[a, b] in list {
                dsu.union(a, b);
            }
        }
        dsu.groups()
    }

    /// Lines per triangle as sorted slot pairs; comparable with
    /// [`Pattern::shape`].
    pub fn shape(&self) -> Vec<Vec<(Slot, Slot)>> {
        self.lines.iter().map(|list| list.iter().map(|&[a, b]| (self.slot(a), self.slot(b))).collect()).collect()
    }

    /// Pairs of lines that cross inside triangle `t`.
    pub fn crossings(&self, t: TriangleId) -> Vec<([usize; 2], [usize; 2])> {
        let w = self.weights();
        let chords: Vec<(usize, usize)> = self.lines[t.0]
            .iter()
            .map(|&[a, b]| {
                (boundary_index(&self.complex, &w, t, self.slot(a)), boundary_index(&self.complex, &w, t, self.slot(b)))
            })
            .collect();
        let list = &self.lines[t.0];
        let mut out = Vec::new();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if chords_cross(chords[i], chords[j]) {
                    out.push((list[i], list[j]));
                }
            }
        }
        out
    }

    pub fn crossing_count(&self) -> usize {
        self.complex.triangle_ids().map(|t| self.crossings(t).len()).sum()
    }

    /// Moves the points of one edge by `nu`; lines follow their endpoints.
    pub fn permute_edge(&self, nu: &EdgePermutation) -> Result<SingularState, SpatternError> {
        let e = nu.edge;
        if e.0 >= self.complex.edge_count() {
            return Err(SpatternError::BadPermutation(format!("edge index {} out of range", e.0)));
        }
        let range = self.edge_points(e);
        if nu.images.len() != range.len() {
            return Err(SpatternError::BadPermutation(format!(
                "edge {} carries {} points, permutation has {}",
                self.complex.edge(e).id,
                range.len(),
                nu.images.len()
            )));
        }
        let mut order = self.order();
        let mut moved = vec![NONE; range.len()];
        for (i, &img) in nu.images.iter().enumerate() {
            moved[img as usize] = range.start + i;
        }
        order[e.0] = moved;
        Ok(assemble(&self.complex, &self.points, &order, &self.lines))
    }

    /// Deletes `p` and `q` (on one edge) and splices the lines through them
    /// in every triangle of that edge. No removability check.
    fn splice_out(&self, p: usize, q: usize) -> SingularState {
        let e = self.edge_of(p);
        let mut lines = self.lines.clone();
        for &t in self.complex.triangles_of_edge(e) {
            let list = &mut lines[t.0];
            let lp = list.iter().position(|l| l.contains(&p));
            let lq = list.iter().position(|l| l.contains(&q));
            match (lp, lq) {
                (Some(i), Some(j)) if i == j => {
                    list.remove(i);
                }
                (Some(i), Some(j)) => {
                    let other = |l: [usize; 2], x: usize| if l[0] == x { l[1] } else { l[0] };
                    let (x, y) = (other(list[i], p), other(list[j], q));
                    list.remove(i.max(j));
                    list.remove(i.min(j));
                    list.push([x, y]);
                }
                _ => {}
            }
        }
        let mut order = self.order();
        order[e.0].retain(|&i| i != p && i != q);
        assemble(&self.complex, &self.points, &order, &lines)
    }
}

/// Incidence check: each point meets exactly one line in every triangle of
/// its edge.
pub fn validate_state(s: &SingularState) -> Vec<StateViolation> {
    let c = &s.complex;
    let mut count: Vec<Vec<usize>> = vec![vec![0; s.points.len()]; s.lines.len()];
    for (t, list) in s.lines.iter().enumerate() {
        for &[a, b] in list {
            count[t][a] += 1;
            count[t][b] += 1;
        }
    }
    let mut out = Vec::new();
    for (i, pt) in s.points.iter().enumerate() {
        for &t in c.triangles_of_edge(s.edge_of(i)) {
            let n = count[t.0][i];
            if n != 1 {
                out.push(StateViolation::LineCount {
                    point: pt.name.clone(),
                    triangle: c.triangle(t).id.clone(),
                    count: n,
                });
            }
        }
    }
    out
}

/// [`validate_state`] plus a violation for every same-edge chord.
pub fn validate_spattern(s: &SingularState) -> Vec<StateViolation> {
    let mut out = validate_state(s);
    for (t, [a, b]) in s.returning_arcs() {
        out.push(StateViolation::SameEdgeChord {
            triangle: s.complex.triangle(t).id.clone(),
            points: [s.points[a].name.clone(), s.points[b].name.clone()],
        });
    }
    out
}

/// A valid singular state without same-edge chords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spattern(SingularState);

impl Spattern {
    pub fn new(state: SingularState) -> Result<Self, SpatternError> {
        let v = validate_spattern(&state);
        if v.is_empty() {
            Ok(Spattern(state))
        } else {
            Err(SpatternError::Invalid(v))
        }
    }

    pub fn from_pattern(p: &Pattern) -> Self {
        Spattern(SingularState::from_pattern(p))
    }

    pub fn state(&self) -> &SingularState {
        &self.0
    }

    pub fn into_state(self) -> SingularState {
        self.0
    }
}

impl Deref for Spattern {
    type Target = SingularState;
    fn deref(&self) -> &SingularState {
        &self.0
    }
}

/// A connected component of a state. On a closed surface `points` is the
/// cyclic traversal and `via[i]` is the triangle of the line from
/// `points[i]` to the next point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strack {
    pub points: Vec<usize>,
    pub via: Vec<TriangleId>,
}

impl Strack {
    pub fn weight(&self) -> usize {
        self.points.len()
    }

    pub fn edge_weights(&self, s: &SingularState) -> EdgeWeights {
        let mut w = EdgeWeights::zeros(s.complex.edge_count());
        for &p in &self.points {
            let e = s.edge_of(p);
            w.set(e, w.get(e) + 1);
        }
        w
    }

    /// The same strack traversed the other way, from the same start point.
    pub fn reversed(&self) -> Strack {
        let n = self.points.len();
        if self.via.len() != n {
            return self.clone();
        }
        Strack {
            points: (0..n).map(|i| self.points[(n - i) % n]).collect(),
            via: (0..n).map(|i| self.via[(2 * n - i - 1) % n]).collect(),
        }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.contains(&p)
    }
}

fn traverse(s: &SingularState, partners: &[Vec<usize>], start: usize) -> Strack {
    let c = &s.complex;
    let mut points = vec![start];
    let mut via = Vec::new();
    let mut cur = start;
    let mut leave = c.triangles_of_edge(s.edge_of(start))[0];
    loop {
        let next = partners[leave.0][cur];
        if next == NONE {
            break;
        }
        via.push(leave);
        if next == start || points.len() > s.points.len() {
            break;
        }
        points.push(next);
        let tris = c.triangles_of_edge(s.edge_of(next));
        leave = if tris[0] == leave { tris[1] } else { tris[0] };
        cur = next;
    }
    Strack { points, via }
}

/// Splits a state into stracks, ordered by least point (edge, position).
pub fn strack_decomposition(s: &SingularState) -> Vec<Strack> {
    let groups = s.point_groups();
    if !s.complex.is_closed_surface() {
        return groups.into_iter().map(|points| Strack { points, via: Vec::new() }).collect();
    }
    let partners = s.partners();
    groups
        .into_iter()
        .map(|g| {
            let t = traverse(s, &partners, g[0]);
            if t.points.len() == g.len() {
                t
            } else {
                Strack { points: g, via: Vec::new() }
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Crossing direction at each point of `t`: `+` when the traversal enters
/// the point from the edge's first triangle (by id) and leaves into the
/// second.
pub fn crossing_signs(s: &SingularState, t: &Strack) -> Result<Vec<(usize, Sign)>, SpatternError> {
    if !s.complex.is_closed_surface() {
        return Err(SpatternError::NonSurfaceComplex);
    }
    let n = t.points.len();
    if t.via.len() != n {
        return Err(SpatternError::OpenStrack(t.points.first().map(|&p| s.points[p].name.clone()).unwrap_or_default()));
    }
    Ok((0..n)
        .map(|i| {
            let p = t.points[i];
            let arrive = t.via[(i + n - 1) % n];
            let first = s.complex.triangles_of_edge(s.edge_of(p))[0];
            (p, if arrive == first { Sign::Plus } else { Sign::Minus })
        })
        .collect())
}

/// Two points of one strack on one edge with opposite signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusMinusPair {
    pub edge: EdgeId,
    /// Arena indices, lower position first.
    pub points: [usize; 2],
    pub strack: usize,
    /// Some traversal arc between the two points meets the edge only at
    /// its ends.
    pub clean: bool,
}

pub fn find_plus_minus_pairs(s: &SingularState) -> Result<Vec<PlusMinusPair>, SpatternError> {
    let mut out = Vec::new();
    for (k, t) in strack_decomposition(s).iter().enumerate() {
        let signs = crossing_signs(s, t)?;
        let mut by_edge: BTreeMap<EdgeId, Vec<(usize, Sign)>> = BTreeMap::new();
        for &(p, sign) in &signs {
            by_edge.entry(s.edge_of(p)).or_default().push((p, sign));
        }
        for (e, list) in by_edge {
            let m = list.len();
            for i in 0..m {
                for j in i + 1..m {
                    if list[i].1 == list[j].1 {
                        continue;
                    }
                    let gap = j - i;
                    let (a, b) = (list[i].0, list[j].0);
                    out.push(PlusMinusPair {
                        edge: e,
                        points: [a.min(b), a.max(b)],
                        strack: k,
                        clean: gap == 1 || m - gap == 1,
                    });
                }
            }
        }
    }
    out.sort_by_key(|x| pair_key(s, x.edge, x.points));
    Ok(out)
}

fn pair_key(s: &SingularState, e: EdgeId, points: [usize; 2]) -> (String, usize, usize) {
    (s.complex.edge(e).id.clone(), points[0], points[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    ReturningArc,
    PlusMinus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovablePair {
    pub edge: EdgeId,
    /// Arena indices, lower position first.
    pub points: [usize; 2],
    pub kind: PairKind,
}

impl RemovablePair {
    pub fn names(&self, s: &SingularState) -> [String; 2] {
        [s.points[self.points[0]].name.clone(), s.points[self.points[1]].name.clone()]
    }
}

/// Returning-arc endpoint pairs and clean `+/-` pairs, ordered by edge id
/// then position. A pair that is both is reported as a returning arc. On a
/// complex that is not a closed surface only returning arcs are reported.
pub fn find_removable_pairs(s: &SingularState) -> Vec<RemovablePair> {
    let mut found: BTreeMap<(String, usize, usize), RemovablePair> = BTreeMap::new();
    for (_, [a, b]) in s.returning_arcs() {
        let e = s.edge_of(a);
        found.insert(pair_key(s, e, [a, b]), RemovablePair { edge: e, points: [a, b], kind: PairKind::ReturningArc });
    }
    if let Ok(pm) = find_plus_minus_pairs(s) {
        for p in pm.into_iter().filter(|p| p.clean) {
            found.entry(pair_key(s, p.edge, p.points)).or_insert(RemovablePair {
                edge: p.edge,
                points: p.points,
                kind: PairKind::PlusMinus,
            });
        }
    }
    found.into_values().collect()
}

/// Removes a removable pair, splicing the lines through its points.
pub fn remove_pair(s: &SingularState, pair: &RemovablePair) -> Result<SingularState, SpatternError> {
    let ok = find_removable_pairs(s).iter().any(|r| r.edge == pair.edge && r.points == pair.points);
    if !ok {
        let name = |i: usize| s.points.get(i).map(|p| p.name.clone()).unwrap_or_else(|| format!("#{i}"));
        return Err(SpatternError::NotRemovable(name(pair.points[0]), name(pair.points[1])));
    }
    Ok(s.splice_out(pair.points[0], pair.points[1]))
}

/// Removes the pair with the given point names, in either order.
pub fn remove_pair_named(s: &SingularState, a: &str, b: &str) -> Result<SingularState, SpatternError> {
    let (ia, ib) = match (s.point_index(a), s.point_index(b)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(SpatternError::NotRemovable(a.to_string(), b.to_string())),
    };
    let key = [ia.min(ib), ia.max(ib)];
    match find_removable_pairs(s).into_iter().find(|r| r.points == key) {
        Some(r) => Ok(s.splice_out(r.points[0], r.points[1])),
        None => Err(SpatternError::NotRemovable(a.to_string(), b.to_string())),
    }
}

/// The embedded pattern with the same edge weights; its slots coincide with
/// the spattern's arena indices.
pub fn underlying_pattern(s: &Spattern) -> Pattern {
    pattern_from_weights(s.complex(), &s.weights()).expect("lines between distinct edges satisfy the corner conditions")
}

/// Underlying pattern of an arbitrary state, when its weights are
/// realizable.
pub fn underlying_of_state(s: &SingularState) -> Result<Pattern, PatternError> {
    pattern_from_weights(s.complex(), &s.weights())
}

/// A bijection on the positions of one edge: the point at position `i`
/// moves to `images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePermutation {
    pub edge: EdgeId,
    pub images: Vec<u32>,
}

impl EdgePermutation {
    pub fn new(edge: EdgeId, images: Vec<u32>) -> Result<Self, SpatternError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            match seen.get_mut(i as usize) {
                Some(flag) if !*flag => *flag = true,
                _ => return Err(SpatternError::BadPermutation(format!("{images:?} is not a bijection"))),
            }
        }
        Ok(EdgePermutation { edge, images })
    }

    pub fn identity(edge: EdgeId, k: usize) -> Self {
        EdgePermutation { edge, images: (0..k as u32).collect() }
    }

    pub fn transposition(edge: EdgeId, k: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(edge, k);
        p.images.swap(i, j);
        p
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` after `first`, on the same edge.
    pub fn compose(&self, first: &EdgePermutation) -> Result<EdgePermutation, SpatternError> {
        if self.edge != first.edge || self.images.len() != first.images.len() {
            return Err(SpatternError::BadPermutation("composing permutations of different edges".into()));
        }
        Ok(EdgePermutation { edge: self.edge, images: first.images.iter().map(|&i| self.images[i as usize]).collect() })
    }
}

pub fn apply_edge_permutation(s: &Spattern, nu: &EdgePermutation) -> Result<Spattern, SpatternError> {
    Ok(Spattern(s.permute_edge(nu)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub connected: bool,
}

/// Points and lines viewed as a graph.
pub fn graph_stats(s: &SingularState) -> GraphStats {
    let components = s.point_groups().len();
    GraphStats { vertices: s.points.len(), edges: s.line_count(), components, connected: components == 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub strack_weights: Vec<usize>,
    pub pattern_component_weights: Vec<usize>,
    /// Stracks for which no component of the underlying pattern was left
    /// with the same point-line structure.
    pub unmatched_strack_weights: Vec<usize>,
}

impl fmt::Display for ObstructionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stracks {:?} against pattern components {:?}; unmatched {:?}",
            self.strack_weights, self.pattern_component_weights, self.unmatched_strack_weights
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uncrossed {
    pub mu: Vec<EdgePermutation>,
    pub result: Spattern,
}

/// Extends `x0 -> y0` to a structure-preserving injection from the
/// component of `x0` in `s` into the component of `y0` in the pattern.
fn align(s: &SingularState, sp: &[Vec<usize>], pp: &[Vec<usize>], x0: usize, y0: usize) -> Option<Vec<(usize, usize)>> {
    let mut map: HashMap<usize, usize> = HashMap::from([(x0, y0)]);
    let mut taken: HashSet<usize> = HashSet::from([y0]);
    let mut stack = vec![x0];
    while let Some(x) = stack.pop() {
        let y = map[&x];
        for &t in s.complex.triangles_of_edge(s.edge_of(x)) {
            let (xn, yn) = (sp[t.0][x], pp[t.0][y]);
            if xn == NONE || yn == NONE || s.edge_of(xn) != s.edge_of(yn) {
                return None;
            }
            match map.get(&xn) {
                Some(&m) if m != yn => return None,
                Some(_) => {}
                None => {
                    if !taken.insert(yn) {
                        return None;
                    }
                    map.insert(xn, yn);
                    stack.push(xn);
                }
            }
        }
    }
    let mut v: Vec<(usize, usize)> = map.into_iter().collect();
    v.sort_unstable();
    Some(v)
}

type PointMap = Vec<(usize, usize)>;

/// Finds edge permutations carrying `s` onto its underlying pattern.
///
/// Per-edge permutations only move points, so they preserve the point-line
/// graph with its edge and triangle labels. `s` can therefore be uncrossed
/// exactly when each strack is isomorphic, as a labelled graph, to its own
/// component of the underlying pattern. Fixing the image of one point of a
/// strack forces all the others, so the search below is exhaustive. Among
/// the valid choices the one fixing the most points is kept.
pub fn uncross(s: &Spattern) -> Result<Uncrossed, SpatternError> {
    if s.crossing_count() == 0 {
        return Ok(Uncrossed { mu: Vec::new(), result: s.clone() });
    }
    let p = underlying_pattern(s);
    let ps = SingularState::from_pattern(&p);
    let (sp, pp) = (s.partners(), ps.partners());
    let s_groups = s.point_groups();
    let p_groups = ps.point_groups();
    let mut p_comp = vec![0usize; ps.points.len()];
    for (k, g) in p_groups.iter().enumerate() {
        for &x in g {
            p_comp[x] = k;
        }
    }

    let mut used = vec![false; p_groups.len()];
    let mut sigma = vec![NONE; s.points.len()];
    let mut unmatched = Vec::new();
    for g in &s_groups {
        let x0 = g[0];
        // (fixed points, image of g[0], point map)
        let mut best: Option<(usize, usize, PointMap)> = None;
        for y0 in s.edge_points(s.edge_of(x0)) {
            let d = p_comp[y0];
            if used[d] || p_groups[d].len() != g.len() {
                continue;
            }
            if let Some(map) = align(s, &sp, &pp, x0, y0) {
                if map.len() != g.len() {
                    continue;
                }
                let fixed = map.iter().filter(|(a, b)| a == b).count();
                if best.as_ref().is_none_or(|b| fixed > b.0) {
                    best = Some((fixed, d, map));
                }
            }
        }
        match best {
            Some((_, d, map)) => {
                used[d] = true;
                for (a, b) in map {
                    sigma[a] = b;
                }
            }
            None => unmatched.push(g.len()),
        }
    }
    if !unmatched.is_empty() {
        return Err(SpatternError::Obstructed(Box::new(ObstructionCertificate {
            strack_weights: s_groups.iter().map(Vec::len).collect(),
            pattern_component_weights: p_groups.iter().map(Vec::len).collect(),
            unmatched_strack_weights: unmatched,
        })));
    }

    let mut mu = Vec::new();
    for e in s.complex.edge_ids() {
        let range = s.edge_points(e);
        let images: Vec<u32> = range.clone().map(|x| (sigma[x] - range.start) as u32).collect();
        let nu = EdgePermutation { edge: e, images };
        if !nu.is_identity() {
            let min_label = range.filter_map(|x| s.points[x].label).min().unwrap_or(u32::MAX);
            mu.push((min_label, s.complex.edge(e).id.clone(), nu));
        }
    }
    mu.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mu: Vec<EdgePermutation> = mu.into_iter().map(|(_, _, nu)| nu).collect();
    let mut result = s.state().clone();
    for nu in &mu {
        result = result.permute_edge(nu)?;
    }
    debug_assert_eq!(result.shape(), p.shape());
    Ok(Uncrossed { mu, result: Spattern(result) })
}

/// Inserts two new points on one edge together with their lines.
///
/// `lines` lists, per triangle, the lines to add. Old points touched by a
/// new line lose their previous line in that triangle; such an old line
/// must have both ends among the touched points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInsertion {
    pub edge: EdgeId,
    /// Positions of the two new points in the resulting edge order.
    pub positions: [u32; 2],
    pub names: [String; 2],
    pub label: Option<u32>,
    pub lines: BTreeMap<TriangleId, Vec<[String; 2]>>,
}

pub fn insert_pair(s: &SingularState, ins: &PairInsertion) -> Result<SingularState, SpatternError> {
    let c = &s.complex;
    let bad = |m: String| SpatternError::BadInsertion(m);
    if ins.edge.0 >= c.edge_count() {
        return Err(bad(format!("edge index {} out of range", ins.edge.0)));
    }
    let range = s.edge_points(ins.edge);
    let [i, j] = ins.positions;
    if i >= j || j as usize > range.len() + 1 {
        return Err(bad(format!("positions {i},{j} do not fit an edge with {} points", range.len())));
    }
    if ins.names[0] == ins.names[1] {
        return Err(bad(format!("both new points are named `{}`", ins.names[0])));
    }
    for n in &ins.names {
        if s.point_index(n).is_some() {
            return Err(SpatternError::DuplicatePoint(n.clone()));
        }
    }
    let n = s.points.len();
    let mut arena = s.points.clone();
    for name in &ins.names {
        arena.push(StatePoint { name: name.clone(), label: ins.label });
    }
    let mut order = s.order();
    let mut old = range.clone();
    order[ins.edge.0] = (0..range.len() as u32 + 2)
        .map(|k| {
            if k == i {
                n
            } else if k == j {
                n + 1
            } else {
                old.next().expect("slots add up")
            }
        })
        .collect();
    let resolve = |name: &String| {
        if *name == ins.names[0] {
            Ok(n)
        } else if *name == ins.names[1] {
            Ok(n + 1)
        } else {
            s.point_index(name).ok_or_else(|| SpatternError::UnknownPoint(name.clone()))
        }
    };
    let edge_of = |x: usize| if x >= n { ins.edge } else { s.edge_of(x) };

    let mut lines = s.lines.clone();
    for (&t, new_lines) in &ins.lines {
        if t.0 >= c.triangle_count() {
            return Err(bad(format!("triangle index {} out of range", t.0)));
        }
        let tname = &c.triangle(t).id;
        let edges = c.triangle_edges(t);
        let mut resolved = Vec::with_capacity(new_lines.len());
        for [a, b] in new_lines {
            let (ia, ib) = (resolve(a)?, resolve(b)?);
            if ia == ib {
                return Err(SpatternError::DegenerateLine { triangle: tname.clone(), point: a.clone() });
            }
            for (x, name) in [(ia, a), (ib, b)] {
                if !edges.contains(&edge_of(x)) {
                    return Err(SpatternError::LineOffTriangle { triangle: tname.clone(), point: name.clone() });
                }
            }
            resolved.push([ia, ib]);
        }
        let touched: BTreeSet<usize> = resolved.iter().flatten().copied().filter(|&x| x < n).collect();
        let list = &mut lines[t.0];
        for l in list.iter().filter(|l| l.iter().any(|x| touched.contains(x))) {
            if let Some(&loose) = l.iter().find(|x| !touched.contains(x)) {
                return Err(bad(format!(
                    "replacing {}-{} in {tname} would leave {} without a line",
                    s.points[l[0]].name, s.points[l[1]].name, s.points[loose].name
                )));
            }
        }
        list.retain(|l| !l.iter().any(|x| touched.contains(x)));
        list.extend(resolved);
    }
    let out = assemble(c, &arena, &order, &lines);
    let v = validate_state(&out);
    if !v.is_empty() {
        return Err(bad(join(&v)));
    }
    Ok(out)
}

fn named_line_sets(s: &SingularState) -> Vec<BTreeSet<[String; 2]>> {
    s.lines
        .iter()
        .map(|list| {
            list.iter()
                .map(|&[a, b]| {
                    let (x, y) = (s.points[a].name.clone(), s.points[b].name.clone());
                    if x <= y {
                        [x, y]
                    } else {
                        [y, x]
                    }
                })
                .collect()
        })
        .collect()
}

/// The insertion turning `before` into `after`, when `after` has exactly
/// two extra points on one edge and applying the insertion reproduces it.
pub fn derive_insertion(before: &SingularState, after: &SingularState) -> Option<PairInsertion> {
    if *before.complex != *after.complex {
        return None;
    }
    let old: HashSet<&str> = before.points.iter().map(|p| p.name.as_str()).collect();
    let fresh: Vec<usize> = (0..after.points.len()).filter(|&i| !old.contains(after.points[i].name.as_str())).collect();
    if fresh.len() != 2 || after.points.len() != before.points.len() + 2 {
        return None;
    }
    let edge = after.edge_of(fresh[0]);
    if after.edge_of(fresh[1]) != edge {
        return None;
    }
    let (sb, sa) = (named_line_sets(before), named_line_sets(after));
    let mut lines = BTreeMap::new();
    for t in after.complex.triangle_ids() {
        let added: Vec<[String; 2]> = sa[t.0].difference(&sb[t.0]).cloned().collect();
        if !added.is_empty() {
            lines.insert(t, added);
        }
    }
    let ins = PairInsertion {
        edge,
        positions: [after.position(fresh[0]), after.position(fresh[1])],
        names: [after.points[fresh[0]].name.clone(), after.points[fresh[1]].name.clone()],
        label: after.points[fresh[0]].label,
        lines,
    };
    match insert_pair(before, &ins) {
        Ok(ref s) if s == after => Some(ins),
        _ => None,
    }
}
