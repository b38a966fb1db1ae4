//! Finite triangulated 2-complexes with vertex/edge/triangle incidence.
//!
//! Simplices carry canonical string ids built from their sorted vertex names
//! (`"uv"`, `"uvw"`), so fixtures and reports stay stable and diffable. The
//! complex is immutable once built and is shared behind an [`Arc`] by every
//! pattern and state that lives on it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TriangleId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// Endpoints, lexicographically smaller name first. Point slots on the
    /// edge are indexed from `ends[0]` towards `ends[1]`.
    pub ends: [VertexId; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub id: String,
    /// Vertices sorted by name.
    pub vertices: [VertexId; 3],
    /// Cyclic vertex order chosen for this triangle.
    pub orientation: [VertexId; 3],
    /// `edges[i]` is the edge opposite `vertices[i]`, when it exists.
    pub edges: [Option<EdgeId>; 3],
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate simplex `{0}`")]
    DuplicateSimplex(String),
    #[error("edge `{0}` must join two vertices")]
    BadEdge(String),
    #[error("complex is not well formed: {0}")]
    NotWellFormed(String),
}

/// A finite triangulated 2-complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex2 {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
    /// Incident triangles per edge, ordered by triangle id.
    edge_triangles: Vec<Vec<TriangleId>>,
    edge_index: BTreeMap<String, EdgeId>,
    triangle_index: BTreeMap<String, TriangleId>,
    tetrahedron: bool,
}

/// Vertex names of the canonical tetrahedron.
pub const TETRA_VERTICES: [&str; 4] = ["u", "v", "w", "z"];

/// Edge order used for tetrahedron weight vectors: opposite pairs adjacent.
pub const TETRA_EDGES: [&str; 6] = ["uv", "wz", "uz", "vw", "uw", "vz"];

/// Triangles of the tetrahedron, each listed in its outward cyclic order.
const TETRA_TRIANGLES: [[&str; 3]; 4] = [["u", "v", "z"], ["u", "z", "w"], ["u", "w", "v"], ["v", "w", "z"]];

/// Face-centre names used when describing separations on the tetrahedron.
const TETRA_CENTRES: [(&str, &str); 4] = [("uvz", "e"), ("uvw", "f"), ("uwz", "g"), ("vwz", "h")];

/// Canonical id of a simplex given its vertex names.
pub fn simplex_id<S: AsRef<str>>(names: &[S]) -> String {
    let mut sorted: Vec<&str> = names.iter().map(AsRef::as_ref).collect();
    sorted.sort_unstable();
    if sorted.iter().all(|n| n.chars().count() == 1) {
        sorted.concat()
    } else {
        sorted.join("-")
    }
}

/// Returns the canonical tetrahedron `T`.
pub fn canonical_tetrahedron() -> Complex2 {
    let edges: Vec<[&str; 2]> = TETRA_EDGES.iter().map(|e| [&e[0..1], &e[1..2]]).collect();
    let mut c =
        Complex2::from_parts(&TETRA_VERTICES, &edges, &TETRA_TRIANGLES).expect("canonical tetrahedron is well formed");
    c.tetrahedron = true;
    c
}

/// The canonical tetrahedron behind a shared pointer.
pub fn tetrahedron() -> Arc<Complex2> {
    Arc::new(canonical_tetrahedron())
}

impl Complex2 {
    /// Builds a complex from named parts. Edges keep the given order; the
    /// given vertex order of each triangle becomes its orientation.
    ///
    /// Only referential problems are rejected here. Degenerate triangles and
    /// triangles whose edges are missing are kept so that
    /// [`validate_complex`] can report them.
    pub fn from_parts<V, E, T>(vertices: &[V], edges: &[E], triangles: &[T]) -> Result<Self, ComplexError>
    where
        V: AsRef<str>,
        E: AsRef<[V]>,
        T: AsRef<[V]>,
    {
        let mut names: Vec<String> = Vec::with_capacity(vertices.len());
        let mut vertex_index = BTreeMap::new();
        for v in vertices {
            let name = v.as_ref().to_string();
            if vertex_index.insert(name.clone(), VertexId(names.len())).is_some() {
                return Err(ComplexError::DuplicateVertex(name));
            }
            names.push(name);
        }
        let lookup = |n: &str| vertex_index.get(n).copied().ok_or_else(|| ComplexError::UnknownVertex(n.to_string()));

        let mut edge_list = Vec::with_capacity(edges.len());
        let mut edge_index = BTreeMap::new();
        let mut edge_by_ends = BTreeMap::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != 2 {
                let ns: Vec<&str> = e.iter().map(AsRef::as_ref).collect();
                return Err(ComplexError::BadEdge(ns.join(",")));
            }
            let (a, b) = (lookup(e[0].as_ref())?, lookup(e[1].as_ref())?);
            let id = simplex_id(&[&names[a.0], &names[b.0]]);
            if a == b {
                return Err(ComplexError::BadEdge(id));
            }
            let ends = if names[a.0] <= names[b.0] { [a, b] } else { [b, a] };
            let eid = EdgeId(edge_list.len());
            if edge_index.insert(id.clone(), eid).is_some() {
                return Err(ComplexError::DuplicateSimplex(id));
            }
            edge_by_ends.insert(ends, eid);
            edge_list.push(Edge { id, ends });
        }

        let mut tri_list = Vec::with_capacity(triangles.len());
        let mut triangle_index = BTreeMap::new();
        for t in triangles {
            let t = t.as_ref();
            if t.len() != 3 {
                let ns: Vec<&str> = t.iter().map(AsRef::as_ref).collect();
                return Err(ComplexError::BadEdge(ns.join(",")));
            }
            let orientation = [lookup(t[0].as_ref())?, lookup(t[1].as_ref())?, lookup(t[2].as_ref())?];
            let mut sorted = orientation;
            sorted.sort_by(|x, y| names[x.0].cmp(&names[y.0]));
            let id = simplex_id(&[&names[sorted[0].0], &names[sorted[1].0], &names[sorted[2].0]]);
            let edge_of = |x: VertexId, y: VertexId| {
                let ends = if names[x.0] <= names[y.0] { [x, y] } else { [y, x] };
                edge_by_ends.get(&ends).copied()
            };
            let edges = [edge_of(sorted[1], sorted[2]), edge_of(sorted[0], sorted[2]), edge_of(sorted[0], sorted[1])];
            let tid = TriangleId(tri_list.len());
            if triangle_index.insert(id.clone(), tid).is_some() {
                return Err(ComplexError::DuplicateSimplex(id));
            }
            tri_list.push(Triangle { id, vertices: sorted, orientation, edges });
        }

        let mut edge_triangles = vec![Vec::new(); edge_list.len()];
        for (ti, t) in tri_list.iter().enumerate() {
            let distinct: BTreeSet<EdgeId> = t.edges.iter().flatten().copied().collect();
            for e in distinct {
                edge_triangles[e.0].push(TriangleId(ti));
            }
        }
        for list in &mut edge_triangles {
            list.sort_by(|a, b| tri_list[a.0].id.cmp(&tri_list[b.0].id));
        }

        let mut c = Complex2 {
            vertices: names,
            edges: edge_list,
            triangles: tri_list,
            edge_triangles,
            edge_index,
            triangle_index,
            tetrahedron: false,
        };
        c.tetrahedron = c.looks_like_tetrahedron();
        Ok(c)
    }

    fn looks_like_tetrahedron(&self) -> bool {
        let mut names: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        names.sort_unstable();
        names == TETRA_VERTICES
            && self.edges.len() == 6
            && self.triangles.len() == 4
            && self.triangles.iter().all(|t| t.edges.iter().all(Option::is_some))
            && TETRA_EDGES.iter().enumerate().all(|(i, e)| self.edges[i].id == *e)
    }

    /// True for the canonical tetrahedron (and for complexes loaded with
    /// exactly its vertex names and canonical edge order).
    pub fn is_tetrahedron(&self) -> bool {
        self.tetrahedron
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_by_name(&self, id: &str) -> Option<EdgeId> {
        self.edge_index.get(id).copied().or_else(|| {
            // accept either vertex order, e.g. "vu" for "uv"
            let chars: Vec<char> = id.chars().collect();
            if chars.len() == 2 {
                let alt: String = [chars[1], chars[0]].iter().collect();
                self.edge_index.get(&alt).copied()
            } else {
                let parts: Vec<&str> = id.split('-').collect();
                (parts.len() == 2).then(|| self.edge_index.get(&simplex_id(&parts)).copied()).flatten()
            }
        })
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, t: TriangleId) -> &Triangle {
        &self.triangles[t.0]
    }

    pub fn triangle_by_name(&self, id: &str) -> Option<TriangleId> {
        if let Some(t) = self.triangle_index.get(id) {
            return Some(*t);
        }
        let parts: Vec<String> = if id.contains('-') {
            id.split('-').map(str::to_string).collect()
        } else {
            id.chars().map(String::from).collect()
        };
        self.triangle_index.get(&simplex_id(&parts)).copied()
    }

    pub fn triangle_ids(&self) -> impl Iterator<Item = TriangleId> {
        (0..self.triangles.len()).map(TriangleId)
    }

    /// Triangles containing `e`, ordered by triangle id.
    pub fn triangles_of_edge(&self, e: EdgeId) -> &[TriangleId] {
        &self.edge_triangles[e.0]
    }

    /// The three edges of a well-formed triangle, `edges[i]` opposite
    /// `vertices[i]`.
    ///
    /// Panics if the triangle is degenerate or references a missing edge;
    /// callers guard with [`Complex2::ensure_well_formed`].
    pub fn triangle_edges(&self, t: TriangleId) -> [EdgeId; 3] {
        let tri = &self.triangles[t.0];
        tri.edges.map(|e| e.expect("triangle edges resolved in a well-formed complex"))
    }

    /// The vertex shared by two distinct edges of one triangle.
    pub fn common_vertex(&self, a: EdgeId, b: EdgeId) -> Option<VertexId> {
        let ea = self.edges[a.0].ends;
        let eb = self.edges[b.0].ends;
        ea.iter().copied().find(|v| eb.contains(v))
    }

    /// True when every edge has exactly two incident triangles.
    pub fn is_closed_surface(&self) -> bool {
        self.edge_triangles.iter().all(|t| t.len() == 2)
    }

    /// Pairs of edges sharing no vertex. On the tetrahedron these are the
    /// three axes `{uv,wz}`, `{uz,vw}`, `{uw,vz}`.
    pub fn opposite_edge_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                let (a, b) = (self.edges[i].ends, self.edges[j].ends);
                if !a.iter().any(|v| b.contains(v)) {
                    out.push((EdgeId(i), EdgeId(j)));
                }
            }
        }
        out
    }

    /// Name of the face centre of `t`: `e,f,g,h` on the tetrahedron, the
    /// triangle id elsewhere.
    pub fn centre_name(&self, t: TriangleId) -> String {
        let id = &self.triangles[t.0].id;
        if self.tetrahedron {
            if let Some((_, c)) = TETRA_CENTRES.iter().find(|(tri, _)| tri == id) {
                return (*c).to_string();
            }
        }
        id.clone()
    }

    /// Errors unless [`validate_complex`] finds no structural violation.
    pub fn ensure_well_formed(&self) -> Result<(), ComplexError> {
        match validate_complex(self).into_iter().find(ComplexViolation::is_structural) {
            None => Ok(()),
            Some(v) => Err(ComplexError::NotWellFormed(v.to_string())),
        }
    }

    /// Whether an edge of the triangle `t` is traversed from `ends[0]` to
    /// `ends[1]` by the triangle's orientation.
    pub fn orientation_agrees(&self, t: TriangleId, e: EdgeId) -> Option<bool> {
        let tri = &self.triangles[t.0];
        let [a, b] = self.edges[e.0].ends;
        let o = tri.orientation;
        (0..3).find_map(|i| {
            let (x, y) = (o[i], o[(i + 1) % 3]);
            if x == a && y == b {
                Some(true)
            } else if x == b && y == a {
                Some(false)
            } else {
                None
            }
        })
    }
}

/// A single problem found by [`validate_complex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexViolation {
    EdgeWithoutTriangle { edge: String },
    DegenerateTriangle { triangle: String },
    MissingTriangleEdge { triangle: String, edge: String },
    EdgeTriangleCount { edge: String, triangles: usize },
    InconsistentOrientation { edge: String },
}

impl ComplexViolation {
    /// Structural violations make incidence queries meaningless; the others
    /// only say the complex is not a closed oriented surface.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            ComplexViolation::EdgeWithoutTriangle { .. }
                | ComplexViolation::DegenerateTriangle { .. }
                | ComplexViolation::MissingTriangleEdge { .. }
        )
    }
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexViolation::EdgeWithoutTriangle { edge } => write!(f, "edge {edge} in no triangle"),
            ComplexViolation::DegenerateTriangle { triangle } => write!(f, "triangle {triangle} is degenerate"),
            ComplexViolation::MissingTriangleEdge { triangle, edge } => {
                write!(f, "triangle {triangle} needs missing edge {edge}")
            }
            ComplexViolation::EdgeTriangleCount { edge, triangles } => write!(f, "edge {edge} in {triangles} triangle"),
            ComplexViolation::InconsistentOrientation { edge } => {
                write!(f, "orientations disagree along edge {edge}")
            }
        }
    }
}

/// Lists every invariant violation of `c`. An empty list means `c` is a
/// well-formed, closed, consistently oriented surface.
pub fn validate_complex(c: &Complex2) -> Vec<ComplexViolation> {
    let mut out = Vec::new();
    for t in &c.triangles {
        let [a, b, d] = t.vertices;
        if a == b || b == d || a == d {
            out.push(ComplexViolation::DegenerateTriangle { triangle: t.id.clone() });
            continue;
        }
        for (i, e) in t.edges.iter().enumerate() {
            if e.is_none() {
                let others: Vec<&str> =
                    (0..3).filter(|&j| j != i).map(|j| c.vertices[t.vertices[j].0].as_str()).collect();
                out.push(ComplexViolation::MissingTriangleEdge { triangle: t.id.clone(), edge: simplex_id(&others) });
            }
        }
    }
    for (i, e) in c.edges.iter().enumerate() {
        let n = c.edge_triangles[i].len();
        if n == 0 {
            out.push(ComplexViolation::EdgeWithoutTriangle { edge: e.id.clone() });
        } else if n != 2 {
            out.push(ComplexViolation::EdgeTriangleCount { edge: e.id.clone(), triangles: n });
        } else {
            let dirs: Vec<Option<bool>> =
                c.edge_triangles[i].iter().map(|&t| c.orientation_agrees(t, EdgeId(i))).collect();
            if let [Some(x), Some(y)] = dirs[..] {
                if x == y {
                    out.push(ComplexViolation::InconsistentOrientation { edge: e.id.clone() });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_counts() {
        let t = canonical_tetrahedron();
        assert_eq!((t.vertex_count(), t.edge_count(), t.triangle_count()), (4, 6, 4));
        assert_eq!(t.euler_characteristic(), 2);
        assert!(t.is_closed_surface());
        assert!(t.is_tetrahedron());
        let ids: Vec<&str> = t.triangles().iter().map(|x| x.id.as_str()).collect();
        assert_eq!(ids, ["uvz", "uwz", "uvw", "vwz"]);
    }

    #[test]
    fn uv_lies_in_uvz_and_uvw() {
        let t = canonical_tetrahedron();
        let uv = t.edge_by_name("uv").unwrap();
        let tris: Vec<&str> = t.triangles_of_edge(uv).iter().map(|&x| t.triangle(x).id.as_str()).collect();
        assert_eq!(tris, ["uvw", "uvz"]);
        assert_eq!(t.edge_by_name("vu"), Some(uv));
    }

    #[test]
    fn opposite_pairs() {
        let t = canonical_tetrahedron();
        let pairs: Vec<(String, String)> =
            t.opposite_edge_pairs().into_iter().map(|(a, b)| (t.edge(a).id.clone(), t.edge(b).id.clone())).collect();
        let expect = [("uv", "wz"), ("uz", "vw"), ("uw", "vz")];
        assert_eq!(pairs.len(), 3);
        for (a, b) in expect {
            assert!(pairs.contains(&(a.to_string(), b.to_string())));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(canonical_tetrahedron(), canonical_tetrahedron());
    }

    #[test]
    fn canonical_is_valid() {
        assert!(validate_complex(&canonical_tetrahedron()).is_empty());
    }

    #[test]
    fn missing_triangle_leaves_three_open_edges() {
        let edges: Vec<Vec<&str>> = TETRA_EDGES.iter().map(|e| vec![&e[0..1], &e[1..2]]).collect();
        let tris = vec![vec!["u", "v", "z"], vec!["u", "z", "w"], vec!["u", "w", "v"]];
        let c = Complex2::from_parts(&TETRA_VERTICES, &edges, &tris).unwrap();
        let report = validate_complex(&c);
        assert_eq!(report.len(), 3);
        for v in &report {
            assert!(matches!(v, ComplexViolation::EdgeTriangleCount { triangles: 1, .. }));
            assert_eq!(
                v.to_string(),
                format!(
                    "edge {} in 1 triangle",
                    match v {
                        ComplexViolation::EdgeTriangleCount { edge, .. } => edge,
                        _ => unreachable!(),
                    }
                )
            );
        }
        let mut open: Vec<String> = report
            .iter()
            .map(|v| match v {
                ComplexViolation::EdgeTriangleCount { edge, .. } => edge.clone(),
                _ => unreachable!(),
            })
            .collect();
        open.sort();
        assert_eq!(open, ["vw", "vz", "wz"]);
    }

    #[test]
    fn degenerate_triangle_is_named() {
        let c = Complex2::from_parts(&["a", "b"], &[["a", "b"]], &[["a", "a", "b"]]).unwrap();
        let report = validate_complex(&c);
        assert!(report.contains(&ComplexViolation::DegenerateTriangle { triangle: "aab".into() }));
        assert!(c.ensure_well_formed().is_err());
    }

    #[test]
    fn flipped_triangle_breaks_orientation() {
        let edges: Vec<Vec<&str>> = TETRA_EDGES.iter().map(|e| vec![&e[0..1], &e[1..2]]).collect();
        let tris = vec![vec!["u", "v", "z"], vec!["u", "z", "w"], vec!["u", "v", "w"], vec!["v", "w", "z"]];
        let c = Complex2::from_parts(&TETRA_VERTICES, &edges, &tris).unwrap();
        let report = validate_complex(&c);
        assert!(!report.is_empty());
        assert!(report.iter().all(|v| matches!(v, ComplexViolation::InconsistentOrientation { .. })));
    }
}
