//! Classification of tracks on the tetrahedron.
//!
//! A track on `T` is either a 3-track linking one vertex, or a `4n`-track.
//! For a `4n`-track the three opposite-edge pairs carry weights `n`, `a`,
//! `b` with `a + b = n` and `gcd(a, b) = 1`; both edges of a pair always
//! carry the same weight. The pair of weight `n` is the axis.
//!
//! Which of the other two pairs is called the `a` pair is a labelling
//! convention. We pick it so that the parity rule reads the same way for
//! every axis:
//!
//! * `n` odd: the `a` pair is the one of even weight (so `a` is even);
//! * `n` even: `a` and `b` are both odd and the `a` pair is the one after the
//!   axis in the cyclic order `{uv,wz} -> {uz,vw} -> {uw,vz}`.
//!
//! For `n = 1` two pairs have weight 1; the axis is the first of them in that
//! order and the `a` pair is the empty one.
//!
//! The rule was fitted against the exhaustive table produced by
//! [`enumerate_and_verify`]; the tests keep that table as the regression
//! oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::{canonical_tetrahedron, Complex2, EdgeId, TETRA_EDGES};
use crate::dsu::DisjointSet;
use crate::pattern::{corner_counts, pattern_from_weights, EdgeWeights, Pattern, Track};

/// Weight vector on `T` in the order `(uv, wz, uz, vw, uw, vz)`.
pub type TetraWeights = [u32; 6];

pub fn tetra_weights(w: TetraWeights) -> EdgeWeights {
    EdgeWeights::from_vec(w.to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OppositeEdgePair {
    UvWz,
    UzVw,
    UwVz,
}

impl OppositeEdgePair {
    pub const ALL: [OppositeEdgePair; 3] = [OppositeEdgePair::UvWz, OppositeEdgePair::UzVw, OppositeEdgePair::UwVz];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 3]
    }

    /// The next pair in the cyclic order.
    pub fn next(self) -> Self {
        Self::from_index(self.index() + 1)
    }

    pub fn edge_names(self) -> [&'static str; 2] {
        [TETRA_EDGES[2 * self.index()], TETRA_EDGES[2 * self.index() + 1]]
    }

    /// Edge ids on the canonical tetrahedron.
    pub fn edges(self) -> [EdgeId; 2] {
        [EdgeId(2 * self.index()), EdgeId(2 * self.index() + 1)]
    }
}

impl fmt::Display for OppositeEdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.edge_names();
        write!(f, "{{{a},{b}}}")
    }
}

impl Serialize for OppositeEdgePair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.edge_names().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(x: u32) -> Self {
        if x.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum TrackClass {
    ThreeTrack { vertex: String },
    FourN { n: u32, a: u32, b: u32, axis: OppositeEdgePair, a_pair: OppositeEdgePair, a_parity: Parity },
}

impl TrackClass {
    pub fn total_weight(&self) -> u64 {
        match self {
            TrackClass::ThreeTrack { .. } => 3,
            TrackClass::FourN { n, .. } => 4 * u64::from(*n),
        }
    }

    /// The weight vector this class stands for.
    pub fn weights(&self) -> TetraWeights {
        let mut w = [0u32; 6];
        match self {
            TrackClass::ThreeTrack { vertex } => {
                for (i, e) in TETRA_EDGES.iter().enumerate() {
                    if e.contains(vertex.as_str()) {
                        w[i] = 1;
                    }
                }
            }
            TrackClass::FourN { n, a, b, axis, a_pair, .. } => {
                let b_pair = OppositeEdgePair::ALL.into_iter().find(|p| p != axis && p != a_pair).unwrap();
                for (pair, value) in [(*axis, *n), (*a_pair, *a), (b_pair, *b)] {
                    for e in pair.edges() {
                        w[e.0] = value;
                    }
                }
            }
        }
        w
    }
}

impl fmt::Display for TrackClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrackClass::ThreeTrack { vertex } => write!(f, "3-track at {vertex}"),
            TrackClass::FourN { n, a, b, axis, .. } => write!(f, "{}-track (n={n}, a={a}, b={b}, axis {axis})", 4 * n),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("pattern is not a single connected track")]
    NotATrack,
    #[error("classification needs the canonical tetrahedron")]
    NotTetrahedron,
    #[error("no track class fits weights {0:?}")]
    UnclassifiableWeights(TetraWeights),
    #[error("track does not separate the surface")]
    NonSeparating,
}

fn as_tetra(p: &Pattern) -> Result<TetraWeights, ClassifyError> {
    if !p.complex().is_tetrahedron() {
        return Err(ClassifyError::NotTetrahedron);
    }
    let mut w = [0u32; 6];
    w.copy_from_slice(p.weights().as_slice());
    Ok(w)
}

/// Classifies a weight vector assumed to come from a connected pattern.
pub fn classify_weights(w: &TetraWeights) -> Result<TrackClass, ClassifyError> {
    let unfit = || ClassifyError::UnclassifiableWeights(*w);
    let total: u64 = w.iter().map(|&x| u64::from(x)).sum();
    if total == 3 {
        let c = canonical_tetrahedron();
        let hit: Vec<usize> = (0..6).filter(|&i| w[i] == 1).collect();
        if hit.len() != 3 || w.iter().any(|&x| x > 1) {
            return Err(unfit());
        }
        let ends: Vec<[_; 2]> = hit.iter().map(|&i| c.edge(EdgeId(i)).ends).collect();
        let shared = ends[0].iter().copied().find(|v| ends.iter().all(|e| e.contains(v))).ok_or_else(unfit)?;
        return Ok(TrackClass::ThreeTrack { vertex: c.vertex_name(shared).to_string() });
    }
    let pw: Vec<u32> = (0..3).map(|k| w[2 * k]).collect();
    if (0..3).any(|k| w[2 * k] != w[2 * k + 1]) {
        return Err(unfit());
    }
    let n = *pw.iter().max().unwrap();
    if n == 0 || total != 4 * u64::from(n) {
        return Err(unfit());
    }
    let axis_idx = (0..3).find(|&k| pw[k] == n && (n > 1 || pw.contains(&0))).ok_or_else(unfit)?;
    let axis = OppositeEdgePair::from_index(axis_idx);
    let others = [axis.next(), axis.next().next()];
    let a_pair = if n % 2 == 1 {
        *others.iter().find(|p| pw[p.index()].is_multiple_of(2)).ok_or_else(unfit)?
    } else {
        axis.next()
    };
    let b_pair = if a_pair == others[0] { others[1] } else { others[0] };
    let (a, b) = (pw[a_pair.index()], pw[b_pair.index()]);
    if a + b != n || a.gcd(&b) != 1 || b == 0 {
        return Err(unfit());
    }
    Ok(TrackClass::FourN { n, a, b, axis, a_pair, a_parity: Parity::of(a) })
}

/// Classifies a track on the canonical tetrahedron.
pub fn classify(t: &Pattern) -> Result<TrackClass, ClassifyError> {
    let w = as_tetra(t)?;
    if !t.is_track() {
        return Err(ClassifyError::NotATrack);
    }
    classify_weights(&w)
}

pub fn classify_track(t: &Track) -> Result<TrackClass, ClassifyError> {
    classify(&t.pattern)
}

/// True when the weights are 2 on both edges of one opposite pair and 1 on
/// the other four edges.
pub fn is_octagon(t: &Pattern) -> bool {
    match as_tetra(t) {
        Ok(w) => is_octagon_weights(&w),
        Err(_) => false,
    }
}

pub fn is_octagon_weights(w: &TetraWeights) -> bool {
    OppositeEdgePair::ALL.iter().any(|p| {
        let axis = p.edges();
        (0..6).all(|i| w[i] == if axis.contains(&EdgeId(i)) { 2 } else { 1 })
    })
}

/// Normal except for exactly one octagon: one component is an 8-track of
/// octagon type and every other component has weight 3 or 4.
pub fn is_almost_normal(p: &Pattern) -> bool {
    let comps = p.components();
    let octagons = comps.iter().filter(|t| is_octagon(&t.pattern)).count();
    octagons == 1 && comps.iter().all(|t| is_octagon(&t.pattern) || matches!(t.weight(), 3 | 4))
}

/// How a separating track splits vertices and face centres. Side 0 holds the
/// complex's first vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationPartition {
    pub vertices: [Vec<String>; 2],
    pub centres: [Vec<String>; 2],
}

impl SeparationPartition {
    /// Whether two named points (vertices or centres) lie on the same side.
    pub fn same_side(&self, x: &str, y: &str) -> bool {
        let side = |n: &str| (0..2).find(|&s| self.vertices[s].iter().chain(&self.centres[s]).any(|m| m == n));
        side(x).is_some() && side(x) == side(y)
    }

    /// The vertex split as an unordered pair of sorted sets.
    pub fn vertex_split(&self) -> BTreeSet<Vec<String>> {
        self.vertices.iter().cloned().collect()
    }

    pub fn centre_split(&self) -> BTreeSet<Vec<String>> {
        self.centres.iter().cloned().collect()
    }
}

/// Region labels for the complement of an embedded pattern.
struct Regions {
    dsu: DisjointSet,
    seg_offset: Vec<usize>,
}

impl Regions {
    fn seg(&self, e: EdgeId, j: u32) -> usize {
        self.seg_offset[e.0] + j as usize
    }

    fn compute(p: &Pattern) -> Self {
        let c = p.complex();
        let w = p.weights();
        let mut seg_offset = Vec::with_capacity(c.edge_count());
        let mut acc = 0usize;
        for e in c.edge_ids() {
            seg_offset.push(acc);
            acc += w.get(e) as usize + 1;
        }
        let mut r = Regions { dsu: DisjointSet::new(acc), seg_offset };

        for t in c.triangle_ids() {
            let [bc, ac, ab] = c.triangle_edges(t);
            // boundary walk a -> b -> c -> a, recording the segment before
            // and after each point slot
            let mut around: BTreeMap<(EdgeId, u32), (usize, usize)> = BTreeMap::new();
            for e in [ab, bc] {
                for k in 0..w.get(e) {
                    around.insert((e, k), (r.seg(e, k), r.seg(e, k + 1)));
                }
            }
            for k in 0..w.get(ac) {
                around.insert((ac, k), (r.seg(ac, k + 1), r.seg(ac, k)));
            }
            let (s1, s2) = (r.seg(ab, w.get(ab)), r.seg(bc, 0));
            r.dsu.union(s1, s2);
            let (s1, s2) = (r.seg(bc, w.get(bc)), r.seg(ac, w.get(ac)));
            r.dsu.union(s1, s2);
            let (s1, s2) = (r.seg(ac, 0), r.seg(ab, 0));
            r.dsu.union(s1, s2);

            for &(x, y) in p.arcs(t) {
                let (ix, iy) = (crate::pattern::boundary_index(c, w, t, x), crate::pattern::boundary_index(c, w, t, y));
                let (first, second) = if ix < iy { (x, y) } else { (y, x) };
                let (bf, af) = around[&(first.edge, first.pos)];
                let (bs, as_) = around[&(second.edge, second.pos)];
                r.dsu.union(af, bs);
                r.dsu.union(bf, as_);
            }
        }
        r
    }
}

/// Splits vertices and face centres by the complement regions of a track.
pub fn separation(t: &Pattern) -> Result<SeparationPartition, ClassifyError> {
    if !t.is_track() {
        return Err(ClassifyError::NotATrack);
    }
    let c: &Arc<Complex2> = t.complex();
    let w = t.weights();
    let mut regions = Regions::compute(t);

    let mut vertex_region = Vec::with_capacity(c.vertex_count());
    for v in 0..c.vertex_count() {
        let e = c.edge_ids().find(|&e| c.edge(e).ends.contains(&crate::complex::VertexId(v)));
        let region = e.map(|e| {
            let j = if c.edge(e).ends[0].0 == v { 0 } else { w.get(e) };
            let s = regions.seg(e, j);
            regions.dsu.find(s)
        });
        vertex_region.push(region);
    }
    let mut centre_region = Vec::with_capacity(c.triangle_count());
    for tr in c.triangle_ids() {
        let ab = c.triangle_edges(tr)[2];
        let around_a = t.corner_counts(tr).t[0];
        let s = regions.seg(ab, around_a);
        centre_region.push(regions.dsu.find(s));
    }

    let mut roots: Vec<usize> = vertex_region.iter().flatten().copied().chain(centre_region.iter().copied()).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() != 2 {
        return Err(ClassifyError::NonSeparating);
    }
    let side0 = vertex_region.iter().flatten().copied().next().unwrap_or(centre_region[0]);
    let mut out = SeparationPartition { vertices: [Vec::new(), Vec::new()], centres: [Vec::new(), Vec::new()] };
    for (v, r) in vertex_region.iter().enumerate() {
        if let Some(r) = r {
            out.vertices[usize::from(*r != side0)].push(c.vertex_name(crate::complex::VertexId(v)).to_string());
        }
    }
    for (ti, r) in centre_region.iter().enumerate() {
        out.centres[usize::from(*r != side0)].push(c.centre_name(crate::complex::TriangleId(ti)));
    }
    for side in out.vertices.iter_mut().chain(out.centres.iter_mut()) {
        side.sort();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrackRecord {
    pub weights: TetraWeights,
    pub total: u64,
    pub class: TrackClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationViolation {
    pub weights: TetraWeights,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub max_total_weight: u64,
    pub vectors_examined: u64,
    pub patterns_realized: u64,
    pub tracks: Vec<TrackRecord>,
    pub violations: Vec<ClassificationViolation>,
    pub realized_track_weights: BTreeSet<u64>,
}

impl EnumerationReport {
    pub fn count_with_weight(&self, total: u64) -> usize {
        self.tracks.iter().filter(|t| t.total == total).count()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerationOptions {
    /// Test connectivity on one representative per tetrahedral-symmetry
    /// orbit and expand the orbit afterwards.
    pub symmetry_reduction: bool,
    /// Split the search space across the rayon pool.
    pub parallel: bool,
}

/// The 24 vertex permutations of `T` acting on weight vectors.
pub fn tetra_symmetries() -> Vec<[usize; 6]> {
    let c = canonical_tetrahedron();
    let edge_of = |a: usize, b: usize| {
        (0..6)
            .find(|&e| {
                let ends = c.edge(EdgeId(e)).ends;
                (ends[0].0 == a && ends[1].0 == b) || (ends[0].0 == b && ends[1].0 == a)
            })
            .unwrap()
    };
    let mut out = Vec::with_capacity(24);
    let mut perm = [0usize, 1, 2, 3];
    permutations(&mut perm, 0, &mut |p| {
        let mut map = [0usize; 6];
        for (e, slot) in map.iter_mut().enumerate() {
            let ends = c.edge(EdgeId(e)).ends;
            *slot = edge_of(p[ends[0].0], p[ends[1].0]);
        }
        out.push(map);
    });
    out
}

fn permutations(p: &mut [usize; 4], k: usize, f: &mut dyn FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Image of `w` under an edge map from [`tetra_symmetries`].
pub fn apply_symmetry(map: &[usize; 6], w: &TetraWeights) -> TetraWeights {
    let mut out = [0u32; 6];
    for e in 0..6 {
        out[map[e]] = w[e];
    }
    out
}

/// Whether the weights pass the corner conditions in all four triangles.
pub fn tetra_realizable(w: &TetraWeights) -> bool {
    // triangles uvz, uwz, uvw, vwz as (uv,wz,uz,vw,uw,vz) indices
    const TRIS: [[usize; 3]; 4] = [[0, 5, 2], [4, 1, 2], [0, 3, 4], [3, 1, 5]];
    TRIS.iter().all(|t| corner_counts(w[t[0]], w[t[1]], w[t[2]]).is_ok())
}

/// Checks one connected track against every classification claim.
fn check_track(c: &Arc<Complex2>, w: &TetraWeights, out: &mut Vec<ClassificationViolation>) -> Option<TrackRecord> {
    let total: u64 = w.iter().map(|&x| u64::from(x)).sum();
    let mut flag = |m: String| out.push(ClassificationViolation { weights: *w, message: m });
    if !(total == 3 || total.is_multiple_of(4)) {
        flag(format!("track weight {total} is neither 3 nor a multiple of 4"));
    }
    let class = match classify_weights(w) {
        Ok(cl) => cl,
        Err(e) => {
            flag(e.to_string());
            return None;
        }
    };
    if class.weights() != *w {
        flag(format!("class {class} does not reproduce the weights"));
    }
    let pattern = pattern_from_weights(c, &tetra_weights(*w)).expect("realizable");
    let sep = match separation(&pattern) {
        Ok(s) => s,
        Err(e) => {
            flag(format!("separation failed: {e}"));
            return Some(TrackRecord { weights: *w, total, class });
        }
    };
    // parity oracle: the endpoints of an edge lie on one side iff the edge
    // meets the track an even number of times
    for (i, name) in crate::complex::TETRA_EDGES.iter().enumerate() {
        let (x, y) = (&name[0..1], &name[1..2]);
        if sep.same_side(x, y) != w[i].is_multiple_of(2) {
            flag(format!("separation disagrees with parity on edge {name}"));
        }
    }
    match &class {
        TrackClass::ThreeTrack { vertex } => {
            let alone = sep.vertices.iter().any(|s| s.len() == 1 && s[0] == *vertex);
            if !alone {
                flag(format!("3-track does not isolate {vertex}"));
            }
        }
        TrackClass::FourN { n, a, b, axis, a_pair, .. } => {
            if a + b != *n {
                flag(format!("a + b = {} differs from n = {n}", a + b));
            }
            if a.gcd(b) != 1 {
                flag(format!("a = {a} and b = {b} are not coprime"));
            }
            if n % 2 == 0 && !(a % 2 == 1 && b % 2 == 1) {
                flag(format!("n = {n} even but a = {a}, b = {b} not both odd"));
            }
            if n % 2 == 1 && (a % 2 == 0) == (b % 2 == 0) {
                flag(format!("n = {n} odd but a = {a}, b = {b} same parity"));
            }
            let together = if a % 2 == 1 { *axis } else { *a_pair };
            let [e1, e2] = together.edge_names();
            let ok = sep.same_side(&e1[0..1], &e1[1..2])
                && sep.same_side(&e2[0..1], &e2[1..2])
                && !sep.same_side(&e1[0..1], &e2[0..1]);
            if !ok {
                flag(format!("separation {:?} breaks the a-parity rule for {class}", sep.vertices));
            }
        }
    }
    Some(TrackRecord { weights: *w, total, class })
}

fn vectors_with_first(first: u32, max: u32, mut f: impl FnMut(TetraWeights)) {
    let rest = max - first;
    for b in 0..=rest {
        for c in 0..=rest - b {
            for d in 0..=rest - b - c {
                for e in 0..=rest - b - c - d {
                    for g in 0..=rest - b - c - d - e {
                        f([first, b, c, d, e, g]);
                    }
                }
            }
        }
    }
}

#[derive(Default)]
struct Partial {
    examined: u64,
    realized: u64,
    tracks: Vec<TrackRecord>,
    violations: Vec<ClassificationViolation>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.examined += other.examined;
        self.realized += other.realized;
        self.tracks.extend(other.tracks);
        self.violations.extend(other.violations);
        self
    }
}

fn scan_slice(c: &Arc<Complex2>, first: u32, max: u32, opts: EnumerationOptions, syms: &[[usize; 6]]) -> Partial {
    let mut part = Partial::default();
    vectors_with_first(first, max, |w| {
        part.examined += 1;
        if !tetra_realizable(&w) {
            return;
        }
        part.realized += 1;
        if w.iter().all(|&x| x == 0) {
            return;
        }
        if opts.symmetry_reduction {
            let orbit: BTreeSet<TetraWeights> = syms.iter().map(|m| apply_symmetry(m, &w)).collect();
            if orbit.first() != Some(&w) {
                return;
            }
            let p = pattern_from_weights(c, &tetra_weights(w)).expect("realizable");
            if p.component_count() != 1 {
                return;
            }
            for image in orbit {
                if let Some(rec) = check_track(c, &image, &mut part.violations) {
                    part.tracks.push(rec);
                }
            }
        } else {
            let p = pattern_from_weights(c, &tetra_weights(w)).expect("realizable");
            if p.component_count() == 1 {
                if let Some(rec) = check_track(c, &w, &mut part.violations) {
                    part.tracks.push(rec);
                }
            }
        }
    });
    part
}

/// Enumerates every weight vector on `T` with total at most
/// `max_total_weight`, classifies the connected ones and collects every
/// breach of the classification claims.
///
/// In symmetry-reduced mode a track is recorded when its orbit
/// representative is scanned, so `vectors_examined` and `patterns_realized`
/// still count the full space while the track list is identical.
pub fn enumerate_and_verify(max_total_weight: u32, opts: EnumerationOptions) -> EnumerationReport {
    let c = Arc::new(canonical_tetrahedron());
    let syms = tetra_symmetries();
    let firsts: Vec<u32> = (0..=max_total_weight).collect();
    let part = if opts.parallel {
        firsts
            .par_iter()
            .map(|&f| scan_slice(&c, f, max_total_weight, opts, &syms))
            .reduce(Partial::default, Partial::merge)
    } else {
        firsts
            .iter()
            .map(|&f| scan_slice(&c, f, max_total_weight, opts, &syms))
            .fold(Partial::default(), Partial::merge)
    };
    let mut tracks = part.tracks;
    tracks.sort_by_key(|x| (x.total, x.weights));
    let mut violations = part.violations;
    violations.sort_by(|x, y| (x.weights, &x.message).cmp(&(y.weights, &y.message)));
    let realized_track_weights = tracks.iter().map(|t| t.total).collect();
    EnumerationReport {
        max_total_weight: u64::from(max_total_weight),
        vectors_examined: part.examined,
        patterns_realized: part.realized,
        tracks,
        violations,
        realized_track_weights,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tetrahedron;

    fn track(w: TetraWeights) -> Pattern {
        pattern_from_weights(&tetrahedron(), &tetra_weights(w)).unwrap()
    }

    fn split(sets: &[&[&str]]) -> BTreeSet<Vec<String>> {
        sets.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&track([1, 0, 1, 0, 1, 0])).unwrap(), TrackClass::ThreeTrack { vertex: "u".into() });
        match classify(&track([2, 2, 1, 1, 1, 1])).unwrap() {
            TrackClass::FourN { n, a, b, axis, .. } => assert_eq!((n, a, b, axis), (2, 1, 1, OppositeEdgePair::UvWz)),
            other => panic!("{other:?}"),
        }
        match classify(&track([3, 3, 2, 2, 1, 1])).unwrap() {
            TrackClass::FourN { n, a, b, axis, a_pair, a_parity } => {
                assert_eq!(
                    (n, a, b, axis, a_pair, a_parity),
                    (3, 2, 1, OppositeEdgePair::UvWz, OppositeEdgePair::UzVw, Parity::Even)
                )
            }
            other => panic!("{other:?}"),
        }
        match classify(&track([0, 0, 1, 1, 1, 1])).unwrap() {
            TrackClass::FourN { n, a, b, a_pair, .. } => {
                assert_eq!((n, a, b, a_pair), (1, 0, 1, OppositeEdgePair::UvWz));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_rejects_disconnected() {
        assert_eq!(classify(&track([2, 0, 2, 0, 2, 0])), Err(ClassifyError::NotATrack));
        assert_eq!(separation(&track([2, 0, 2, 0, 2, 0])), Err(ClassifyError::NotATrack));
    }

    #[test]
    fn octagon_flags() {
        assert!(is_octagon(&track([2, 2, 1, 1, 1, 1])));
        assert!(is_octagon(&track([1, 1, 2, 2, 1, 1])));
        assert!(!is_octagon(&track([1, 0, 1, 0, 1, 0])));
        assert!(!is_octagon(&track([3, 3, 2, 2, 1, 1])));
    }

    #[test]
    fn separations_of_octagon_and_twelve_track() {
        let s = separation(&track([1, 0, 1, 0, 1, 0])).unwrap();
        assert_eq!(s.vertex_split(), split(&[&["u"], &["v", "w", "z"]]));

        let s = separation(&track([2, 2, 1, 1, 1, 1])).unwrap();
        assert_eq!(s.vertex_split(), split(&[&["u", "v"], &["w", "z"]]));
        assert_eq!(s.centre_split(), split(&[&["e", "f"], &["g", "h"]]));

        let s = separation(&track([3, 3, 2, 2, 1, 1])).unwrap();
        assert_eq!(s.vertex_split(), split(&[&["u", "z"], &["v", "w"]]));
        assert_eq!(s.centre_split(), split(&[&["e", "g"], &["f", "h"]]));
    }

    #[test]
    fn class_weights_round_trip() {
        for w in [[2, 2, 1, 1, 1, 1], [3, 3, 2, 2, 1, 1], [5, 5, 2, 2, 3, 3], [1, 1, 4, 4, 3, 3], [0, 0, 1, 1, 1, 1]] {
            assert_eq!(classify_weights(&w).unwrap().weights(), w);
        }
    }

    #[test]
    fn unfit_weights_are_reported() {
        assert_eq!(classify_weights(&[2, 2, 2, 2, 2, 2]), Err(ClassifyError::UnclassifiableWeights([2; 6])));
        assert!(classify_weights(&[2, 2, 0, 0, 2, 2]).is_err());
    }

    #[test]
    fn symmetries_form_group_of_24() {
        let syms = tetra_symmetries();
        let distinct: BTreeSet<[usize; 6]> = syms.iter().copied().collect();
        assert_eq!(distinct.len(), 24);
    }

    /// Independent oracle for the classification table: enumerate connected
    /// patterns by brute force (slot-level traversal on the pattern) and
    /// compare against the fitted (n, a, b, axis) rule for n <= 6.
    #[test]
    fn fitted_rule_matches_enumeration_table() {
        let c = tetrahedron();
        let mut table: BTreeMap<TetraWeights, bool> = BTreeMap::new();
        let max = 24u32;
        for first in 0..=max {
            vectors_with_first(first, max, |w| {
                if let Ok(p) = pattern_from_weights(&c, &tetra_weights(w)) {
                    if p.components().len() == 1 {
                        table.insert(w, true);
                    }
                }
            });
        }
        // every connected vector is predicted by the rule
        let mut predicted: BTreeSet<TetraWeights> = BTreeSet::new();
        for v in ["u", "v", "w", "z"] {
            predicted.insert(TrackClass::ThreeTrack { vertex: v.into() }.weights());
        }
        for n in 1..=6u32 {
            for axis in OppositeEdgePair::ALL {
                for a in 0..=n {
                    let b = n - a;
                    if a.gcd(&b) != 1 {
                        continue;
                    }
                    let others = [axis.next(), axis.next().next()];
                    let mut w = [0u32; 6];
                    for e in axis.edges() {
                        w[e.0] = n;
                    }
                    for e in others[0].edges() {
                        w[e.0] = a;
                    }
                    for e in others[1].edges() {
                        w[e.0] = b;
                    }
                    predicted.insert(w);
                }
            }
        }
        let found: BTreeSet<TetraWeights> = table.keys().copied().collect();
        assert_eq!(found, predicted);
        for w in &found {
            let class = classify_weights(w).unwrap();
            assert_eq!(class.weights(), *w);
        }
    }
}
