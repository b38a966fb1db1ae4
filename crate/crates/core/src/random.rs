//! Seeded generators for property tests and the randomized verify suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{tetra_realizable, tetra_weights, TetraWeights};
use crate::complex::{tetrahedron, EdgeId};
use crate::pattern::{corner_counts, pattern_from_weights};
use crate::spattern::{insert_pair, EdgePermutation, PairInsertion, SingularState, Spattern};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Realizable weights on the tetrahedron with total at most `max_total`.
pub fn random_weights<R: Rng>(rng: &mut R, max_total: u32) -> TetraWeights {
    let cap = (max_total / 3).max(1);
    loop {
        let w: TetraWeights = std::array::from_fn(|_| rng.gen_range(0..=cap));
        if w.iter().sum::<u32>() <= max_total && tetra_realizable(&w) {
            return w;
        }
    }
}

/// A spattern with random weights and, in every triangle, a uniformly
/// shuffled matching with the forced number of lines per corner.
pub fn random_spattern<R: Rng>(rng: &mut R, max_total: u32) -> Spattern {
    let c = tetrahedron();
    let w = random_weights(rng, max_total);
    let base = SingularState::from_pattern(&pattern_from_weights(&c, &tetra_weights(w)).expect("realizable"));
    let mut lines = Vec::new();
    for t in c.triangle_ids() {
        let edges = c.triangle_edges(t);
        let cc = corner_counts(w[edges[0].0], w[edges[1].0], w[edges[2].0]).expect("realizable");
        let mut pools: Vec<Vec<String>> = edges
            .iter()
            .map(|&e| {
                let mut v: Vec<String> = base.edge_points(e).map(|i| base.name(i).to_string()).collect();
                v.shuffle(rng);
                v
            })
            .collect();
        let mut list = Vec::new();
        for i in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            for _ in 0..cc.t[i] {
                let x = pools[a].pop().expect("corner counts add up");
                let y = pools[b].pop().expect("corner counts add up");
                list.push([x, y]);
            }
        }
        lines.push((c.triangle(t).id.clone(), list));
    }
    let s = SingularState::from_named(&c, base.named_points(), lines, &BTreeMap::new()).expect("names are consistent");
    Spattern::new(s).expect("shuffled matchings are valid")
}

/// Pushes a small bump across a random edge: a returning arc on one side,
/// and on the other side a random line is cut through the two new points.
pub fn push_bump<R: Rng>(rng: &mut R, s: &SingularState, tag: usize) -> SingularState {
    let c = s.complex().clone();
    let e = EdgeId(rng.gen_range(0..c.edge_count()));
    let mut tris = c.triangles_of_edge(e).to_vec();
    tris.shuffle(rng);
    let k = s.edge_points(e).len() as u32;
    let i = rng.gen_range(0..=k);
    let j = rng.gen_range(i + 1..=k + 1);
    let names = [format!("x{tag}a"), format!("x{tag}b")];
    let mut lines = BTreeMap::new();
    lines.insert(tris[0], vec![names.clone()]);
    let other = s.lines(tris[1]);
    let cut = if other.is_empty() {
        vec![names.clone()]
    } else {
        let [x, y] = other[rng.gen_range(0..other.len())];
        let (x, y) = if rng.gen_bool(0.5) { (x, y) } else { (y, x) };
        vec![[s.name(x).to_string(), names[0].clone()], [names[1].clone(), s.name(y).to_string()]]
    };
    lines.insert(tris[1], cut);
    let ins = PairInsertion { edge: e, positions: [i, j], names, label: Some(tag as u32), lines };
    insert_pair(s, &ins).expect("bump insertion keeps the state valid")
}

/// A random singular state of total weight at most `max_total`: a random
/// spattern with up to three bumps pushed across edges.
pub fn random_singular_state<R: Rng>(rng: &mut R, max_total: u32) -> SingularState {
    let bumps = rng.gen_range(0..=3u32).min(max_total / 2);
    let mut s = random_spattern(rng, max_total - 2 * bumps).into_state();
    for tag in 0..bumps as usize {
        s = push_bump(rng, &s, tag);
    }
    s
}

pub fn random_permutation<R: Rng>(rng: &mut R, edge: EdgeId, k: usize) -> EdgePermutation {
    let mut images: Vec<u32> = (0..k as u32).collect();
    images.shuffle(rng);
    EdgePermutation { edge, images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spattern::validate_state;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let a = random_singular_state(&mut seeded(7), 40);
        let b = random_singular_state(&mut seeded(7), 40);
        assert_eq!(a, b);
        for seed in 0..50 {
            let s = random_singular_state(&mut seeded(seed), 40);
            assert!(s.total_weight() <= 40);
            assert!(validate_state(&s).is_empty(), "seed {seed}");
        }
    }
}
