//! Discrete sweep traces: a starting state and a list of pair insertions and
//! removals, with the width bookkeeping used to put a sweep in thin
//! position.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::classify::is_almost_normal;
use crate::pattern::is_normal;
use crate::spattern::{
    derive_insertion, find_removable_pairs, graph_stats, insert_pair, remove_pair_named, strack_decomposition, uncross,
    underlying_of_state, validate_state, ObstructionCertificate, PairInsertion, SingularState, Spattern, SpatternError,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepEvent {
    Add(PairInsertion),
    Remove { pair: [String; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepTrace {
    pub initial: SingularState,
    /// Every state must be a single connected strack.
    pub sphere: bool,
    pub events: Vec<SweepEvent>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("initial state is invalid: {0}")]
    InvalidInitial(String),
    #[error("event {index}: {reason}")]
    InvalidEvent { index: usize, reason: String },
    #[error("state {index} has {components} components in a sphere trace")]
    NotConnected { index: usize, components: usize },
    #[error("trace has no thick sphere")]
    NoThickSphere,
}

#[derive(Clone, Debug)]
pub struct Replay {
    pub states: Vec<SingularState>,
    pub weights: Vec<u64>,
}

fn starts_normal(s: &SingularState) -> bool {
    s.is_spattern() && s.crossing_count() == 0 && underlying_of_state(s).map(|p| is_normal(&p)).unwrap_or(false)
}

fn check_connected(trace: &SweepTrace, index: usize, s: &SingularState) -> Result<(), SweepError> {
    if trace.sphere {
        let stats = graph_stats(s);
        if stats.components != 1 {
            return Err(SweepError::NotConnected { index, components: stats.components });
        }
    }
    Ok(())
}

/// Applies every event in order, checking each precondition.
pub fn replay(trace: &SweepTrace) -> Result<Replay, SweepError> {
    let v = validate_state(&trace.initial);
    if !v.is_empty() {
        let text = v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Err(SweepError::InvalidInitial(text));
    }
    check_connected(trace, 0, &trace.initial)?;
    let normal_start = starts_normal(&trace.initial);
    let mut states = vec![trace.initial.clone()];
    let mut weights = vec![trace.initial.total_weight()];
    for (index, ev) in trace.events.iter().enumerate() {
        let cur = states.last().expect("at least the initial state");
        let next = match ev {
            SweepEvent::Add(ins) => insert_pair(cur, ins),
            SweepEvent::Remove { pair } => remove_pair_named(cur, &pair[0], &pair[1]),
        }
        .map_err(|e| SweepError::InvalidEvent { index, reason: e.to_string() })?;
        let (w0, w1) = (cur.total_weight(), next.total_weight());
        if w0.abs_diff(w1) != 2 {
            return Err(SweepError::InvalidEvent { index, reason: format!("weight moves from {w0} to {w1}") });
        }
        if index == 0 && normal_start && w1 != w0 + 2 {
            return Err(SweepError::InvalidEvent { index, reason: "a normal start must first gain weight".into() });
        }
        check_connected(trace, index + 1, &next)?;
        weights.push(w1);
        states.push(next);
    }
    Ok(Replay { states, weights })
}

/// A weight multiset sorted non-increasing; compares lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WidthRecord(pub Vec<u64>);

impl WidthRecord {
    pub fn from_weights(weights: &[u64]) -> Self {
        let mut v = weights.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        WidthRecord(v)
    }
}

pub fn width(trace: &SweepTrace) -> Result<WidthRecord, SweepError> {
    Ok(WidthRecord::from_weights(&replay(trace)?.weights))
}

pub fn compare(a: &WidthRecord, b: &WidthRecord) -> Ordering {
    a.cmp(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereKind {
    Thick,
    Thin,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SphereClass {
    pub index: usize,
    pub kind: SphereKind,
}

/// Thick and thin positions of a weight sequence; the two ends are neither.
pub fn classify_weight_sequence(weights: &[u64]) -> Vec<SphereClass> {
    let n = weights.len();
    (0..n)
        .map(|i| {
            let kind = if i == 0 || i + 1 == n {
                SphereKind::Neither
            } else {
                let (a, w, b) = (weights[i - 1], weights[i], weights[i + 1]);
                if a == b && a + 2 == w {
                    SphereKind::Thick
                } else if a == b && w + 2 == a {
                    SphereKind::Thin
                } else {
                    SphereKind::Neither
                }
            };
            SphereClass { index: i, kind }
        })
        .collect()
}

pub fn classify_spheres(trace: &SweepTrace) -> Result<Vec<SphereClass>, SweepError> {
    Ok(classify_weight_sequence(&replay(trace)?.weights))
}

fn thick_indices(weights: &[u64]) -> Vec<usize> {
    classify_weight_sequence(weights).into_iter().filter(|c| c.kind == SphereKind::Thick).map(|c| c.index).collect()
}

#[derive(Clone, Debug)]
pub struct SwapOutcome {
    pub trace: SweepTrace,
    pub reduced: bool,
    /// Thick index that was resolved.
    pub index: Option<usize>,
    /// The added pair was the removed pair, so both events were dropped.
    pub cancelled: bool,
}

fn strack_of(s: &SingularState, tracks: &[crate::spattern::Strack], name: &str) -> Option<usize> {
    let p = s.point_index(name)?;
    tracks.iter().position(|t| t.contains(p))
}

/// Whether removing `pair` from `s` keeps the two points of `other` in one
/// strack.
fn keeps_together(s: &SingularState, pair: &[String; 2], other: &[String; 2]) -> bool {
    let Ok(r) = remove_pair_named(s, &pair[0], &pair[1]) else { return false };
    let tracks = strack_decomposition(&r);
    match (strack_of(&r, &tracks, &other[0]), strack_of(&r, &tracks, &other[1])) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// The two pairs at a thick state may be exchanged: they lie in different
/// stracks, or removing one of them leaves the other inside one strack.
fn swappable(f_k: &SingularState, added: &[String; 2], removed: &[String; 2]) -> bool {
    let tracks = strack_decomposition(f_k);
    if strack_of(f_k, &tracks, &added[0]) != strack_of(f_k, &tracks, &removed[0]) {
        return true;
    }
    keeps_together(f_k, removed, added) || keeps_together(f_k, added, removed)
}

/// Resolves the first thick index whose peak can be lowered by doing the
/// removal before the insertion.
pub fn swap_reduce(trace: &SweepTrace) -> Result<SwapOutcome, SweepError> {
    let rep = replay(trace)?;
    let before = WidthRecord::from_weights(&rep.weights);
    for k in thick_indices(&rep.weights) {
        let (SweepEvent::Add(ins), SweepEvent::Remove { pair }) = (&trace.events[k - 1], &trace.events[k]) else {
            continue;
        };
        let same = (ins.names[0] == pair[0] && ins.names[1] == pair[1])
            || (ins.names[0] == pair[1] && ins.names[1] == pair[0]);
        let mut events = trace.events.clone();
        let cancelled = same;
        if same {
            events.drain(k - 1..=k);
        } else {
            let f_prev = &rep.states[k - 1];
            if pair.iter().any(|n| f_prev.point_index(n).is_none()) || !swappable(&rep.states[k], &ins.names, pair) {
                continue;
            }
            let Ok(g) = remove_pair_named(f_prev, &pair[0], &pair[1]) else { continue };
            let Some(add) = derive_insertion(&g, &rep.states[k + 1]) else { continue };
            events[k - 1] = SweepEvent::Remove { pair: pair.clone() };
            events[k] = SweepEvent::Add(add);
        }
        let candidate = SweepTrace { initial: trace.initial.clone(), sphere: trace.sphere, events };
        match width(&candidate) {
            Ok(after) if after < before => {
                return Ok(SwapOutcome { trace: candidate, reduced: true, index: Some(k), cancelled });
            }
            _ => continue,
        }
    }
    Ok(SwapOutcome { trace: trace.clone(), reduced: false, index: None, cancelled: false })
}

/// Applies [`swap_reduce`] until nothing changes; returns the final trace
/// and the number of swaps.
pub fn reduce_to_fixpoint(trace: &SweepTrace) -> Result<(SweepTrace, usize), SweepError> {
    let mut cur = trace.clone();
    let mut steps = 0;
    loop {
        let out = swap_reduce(&cur)?;
        if !out.reduced {
            return Ok((cur, steps));
        }
        cur = out.trace;
        steps += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UncrossSummary {
    Succeeded { permutations: usize },
    Obstructed { certificate: ObstructionCertificate },
    NotASpattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceSummary {
    pub strack: usize,
    pub weight: usize,
    pub edge_weights: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickReport {
    pub index: usize,
    pub weight: u64,
    pub thick_indices: Vec<usize>,
    pub added_pair: [String; 2],
    pub removed_pair: [String; 2],
    pub exceptional_piece: PieceSummary,
    /// Both pairs lie in the exceptional piece.
    pub same_piece: bool,
    pub removable_pairs_in_piece: Vec<[String; 2]>,
    pub removable_pairs_elsewhere: usize,
    /// Strack weights left by the piece after removing each pair; empty
    /// when that pair is not removable.
    pub piece_after_removing_added: Vec<usize>,
    pub piece_after_removing_removed: Vec<usize>,
    pub disconnects: bool,
    pub uncross: UncrossSummary,
    pub underlying_almost_normal: bool,
    pub almost_normal_after_uncross: bool,
}

fn piece_after(s: &SingularState, piece: &[String], pair: &[String; 2]) -> Vec<usize> {
    let Ok(r) = remove_pair_named(s, &pair[0], &pair[1]) else { return Vec::new() };
    let left: Vec<usize> = piece.iter().filter(|n| !pair.contains(n)).filter_map(|n| r.point_index(n)).collect();
    let mut out: Vec<usize> = strack_decomposition(&r)
        .into_iter()
        .filter(|t| left.iter().any(|&p| t.contains(p)))
        .map(|t| t.weight())
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Examines the first thick state: the strack carrying the pair just
/// removed, what removing either pair does to it, and whether uncrossing
/// the state leaves an almost normal pattern.
///
/// An obstructed uncrossing is part of the report rather than an error.
pub fn analyze_first_thick(trace: &SweepTrace) -> Result<ThickReport, SweepError> {
    let rep = replay(trace)?;
    let thick = thick_indices(&rep.weights);
    let &k = thick.first().ok_or(SweepError::NoThickSphere)?;
    let (SweepEvent::Add(ins), SweepEvent::Remove { pair }) = (&trace.events[k - 1], &trace.events[k]) else {
        unreachable!("a thick index sits between an insertion and a removal");
    };
    let f = &rep.states[k];
    let tracks = strack_decomposition(f);
    let piece_idx = strack_of(f, &tracks, &pair[0]).expect("removed point exists in the thick state");
    let piece = &tracks[piece_idx];
    let same_piece = ins.names.iter().all(|n| strack_of(f, &tracks, n) == Some(piece_idx));
    let piece_names: Vec<String> = piece.points.iter().map(|&p| f.name(p).to_string()).collect();

    let mut in_piece = Vec::new();
    let mut elsewhere = 0;
    for r in find_removable_pairs(f) {
        if piece.contains(r.points[0]) {
            in_piece.push(r.names(f));
        } else {
            elsewhere += 1;
        }
    }
    let after_added = piece_after(f, &piece_names, &ins.names);
    let after_removed = piece_after(f, &piece_names, pair);
    let disconnects = after_added.len() >= 2 && after_removed.len() >= 2;

    let underlying_almost_normal = underlying_of_state(f).map(|p| is_almost_normal(&p)).unwrap_or(false);
    let uncross_summary = match Spattern::new(f.clone()) {
        Err(_) => UncrossSummary::NotASpattern,
        Ok(s) => match uncross(&s) {
            Ok(u) => UncrossSummary::Succeeded { permutations: u.mu.len() },
            Err(SpatternError::Obstructed(c)) => UncrossSummary::Obstructed { certificate: *c },
            Err(e) => unreachable!("uncross on a valid spattern only fails by obstruction: {e}"),
        },
    };
    let succeeded = matches!(uncross_summary, UncrossSummary::Succeeded { .. });

    Ok(ThickReport {
        index: k,
        weight: rep.weights[k],
        thick_indices: thick,
        added_pair: ins.names.clone(),
        removed_pair: pair.clone(),
        exceptional_piece: PieceSummary {
            strack: piece_idx,
            weight: piece.weight(),
            edge_weights: piece.edge_weights(f).named(f.complex()),
        },
        same_piece,
        removable_pairs_in_piece: in_piece,
        removable_pairs_elsewhere: elsewhere,
        piece_after_removing_added: after_added,
        piece_after_removing_removed: after_removed,
        disconnects,
        uncross: uncross_summary,
        underlying_almost_normal,
        almost_normal_after_uncross: succeeded && underlying_almost_normal,
    })
}
