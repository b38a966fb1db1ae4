//! Verification suites behind `tracklab verify`.

use std::collections::BTreeSet;

use serde::Serialize;
use tracklab_core::classify::{
    classify, enumerate_and_verify, is_octagon, is_octagon_weights, separation, tetra_weights, EnumerationOptions,
    TrackClass,
};
use tracklab_core::complex::{tetrahedron, EdgeId};
use tracklab_core::fixtures;
use tracklab_core::pattern::pattern_from_weights;
use tracklab_core::random::{random_permutation, random_singular_state, random_spattern, seeded};
use tracklab_core::spattern::{
    apply_edge_permutation, find_plus_minus_pairs, find_removable_pairs, graph_stats, remove_pair,
    strack_decomposition, uncross, underlying_pattern, validate_state, PairKind, SingularState, Spattern,
};
use tracklab_core::sweep::{analyze_first_thick, replay, swap_reduce, width, SweepTrace, WidthRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Classification,
    Spattern,
    Sweep,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_weight: u32,
    pub seed: u64,
    pub cases: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_weight: 24, seed: 0, cases: 500 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub version: u32,
    pub suite: Suite,
    pub max_weight: u32,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Outcome = Result<String, String>;
type NamedCheck = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn strack_weights(s: &SingularState) -> Vec<usize> {
    sorted(strack_decomposition(s).iter().map(|t| t.weight()).collect())
}

fn totals(p: &tracklab_core::pattern::Pattern) -> Vec<u64> {
    sorted(p.component_weights().iter().map(|w| w.total()).collect())
}

fn split(parts: &[&[&str]]) -> BTreeSet<Vec<String>> {
    parts.iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect()
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> VerifyReport {
    let checks: Vec<NamedCheck> = match suite {
        Suite::Classification => vec![
            ("enumeration", Box::new(move || enumeration(opts.max_weight))),
            ("symmetry reduction agrees", Box::new(move || symmetry_agrees(opts.max_weight.min(16)))),
            ("octagon", Box::new(octagon)),
            ("12-track", Box::new(twelve_track)),
        ],
        Suite::Spattern => vec![
            ("11-strack", Box::new(eleven_strack)),
            ("12-strack with link", Box::new(twelve_strack)),
            ("removal on random states", Box::new(move || random_removal(opts.seed, opts.cases))),
            ("embedded tracks are reducible", Box::new(embedded_reducible)),
            ("permutation invariance", Box::new(move || permutation_invariance(opts.seed, opts.cases))),
        ],
        Suite::Sweep => vec![
            ("bundled documents load", Box::new(documents_load)),
            ("octagon sweep", Box::new(octagon_sweep)),
            ("12-strack sweep", Box::new(twelve_strack_sweep)),
            ("swaps lower width", Box::new(swaps_lower_width)),
            ("width is permutation-invariant", Box::new(move || width_invariance(opts.seed))),
        ],
    };
    let checks: Vec<Check> = checks
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check { name: name.to_string(), passed, detail }
        })
        .collect();
    VerifyReport {
        version: 1,
        suite,
        max_weight: opts.max_weight,
        seed: opts.seed,
        cases: opts.cases,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn enumeration(max: u32) -> Outcome {
    let r = enumerate_and_verify(max, EnumerationOptions { symmetry_reduction: true, parallel: true });
    ensure(r.violations.is_empty(), format!("{} violations, first {:?}", r.violations.len(), r.violations.first()))?;
    let bad: Vec<u64> = r.realized_track_weights.iter().copied().filter(|&w| w != 3 && w % 4 != 0).collect();
    ensure(bad.is_empty(), format!("track weights {bad:?}"))?;
    Ok(format!("{} tracks, weights {:?}", r.tracks.len(), r.realized_track_weights))
}

fn symmetry_agrees(max: u32) -> Outcome {
    let key = |o| sorted(enumerate_and_verify(max, o).tracks.iter().map(|t| t.weights).collect::<Vec<_>>());
    let plain = key(EnumerationOptions::default());
    let fast = key(EnumerationOptions { symmetry_reduction: true, parallel: true });
    ensure(plain == fast, "track lists differ")?;
    Ok(format!("{} tracks up to weight {max}", plain.len()))
}

fn octagon() -> Outcome {
    let p = fixtures::pattern(fixtures::OCTAGON).map_err(|e| e.to_string())?;
    ensure(p.component_count() == 1 && p.weights().total() == 8 && is_octagon(&p), "not an octagon")?;
    let sep = separation(&p).map_err(|e| e.to_string())?;
    ensure(sep.vertex_split() == split(&[&["u", "v"], &["w", "z"]]), format!("vertices {:?}", sep.vertices))?;
    ensure(sep.centre_split() == split(&[&["e", "f"], &["g", "h"]]), format!("centres {:?}", sep.centres))?;
    let n = enumerate_and_verify(8, EnumerationOptions::default())
        .tracks
        .iter()
        .filter(|t| is_octagon_weights(&t.weights))
        .count();
    ensure(n == 3, format!("{n} octagon classes"))?;
    Ok("separates {u,v}|{w,z} and {e,f}|{g,h}; 3 octagon classes".into())
}

fn twelve_track() -> Outcome {
    let p = fixtures::pattern(fixtures::TWELVE_TRACK).map_err(|e| e.to_string())?;
    let class = classify(&p).map_err(|e| e.to_string())?;
    ensure(matches!(class, TrackClass::FourN { n: 3, a: 2, b: 1, .. }), format!("classified as {class}"))?;
    let sep = separation(&p).map_err(|e| e.to_string())?;
    ensure(sep.vertex_split() == split(&[&["u", "z"], &["v", "w"]]), format!("vertices {:?}", sep.vertices))?;
    Ok(class.to_string())
}

fn eleven_strack() -> Outcome {
    let s = fixtures::spattern(fixtures::ELEVEN_STRACK).map_err(|e| e.to_string())?;
    ensure(strack_weights(&s) == [11], format!("stracks {:?}", strack_weights(&s)))?;
    let pm = find_plus_minus_pairs(&s).map_err(|e| e.to_string())?;
    ensure(pm.is_empty(), format!("{} +/- pairs", pm.len()))?;
    let u = totals(&underlying_pattern(&s));
    ensure(u == [3, 4, 4], format!("underlying {u:?}"))?;
    let obstructed = uncross(&s).is_err();
    Ok(format!("no +/- pairs, underlying {{4,4,3}}, uncross obstructed: {obstructed}"))
}

fn twelve_strack() -> Outcome {
    let s = fixtures::spattern(fixtures::TWELVE_STRACK_WITH_LINK).map_err(|e| e.to_string())?;
    ensure(strack_weights(&s) == [3, 12], format!("stracks {:?}", strack_weights(&s)))?;
    let u = underlying_pattern(&s);
    let expected = fixtures::pattern(fixtures::TWELVE_STRACK_UNDERLYING).map_err(|e| e.to_string())?;
    ensure(u == expected, "underlying pattern differs from the bundled one")?;
    let out = uncross(&s).map_err(|e| e.to_string())?;
    ensure(
        out.result.crossing_count() == 0 && out.result.shape() == u.shape(),
        "uncrossed state is not the underlying pattern",
    )?;
    Ok(format!("stracks {{12,3}}, uncrossed by {} permutations", out.mu.len()))
}

fn random_removal(seed: u64, cases: usize) -> Outcome {
    let mut rng = seeded(seed);
    let mut removals = 0usize;
    for case in 0..cases {
        let mut s = random_singular_state(&mut rng, 40);
        let limit = s.total_weight() / 2;
        let mut steps = 0;
        while let Some(first) = find_removable_pairs(&s).first().cloned() {
            for p in find_removable_pairs(&s) {
                let r = remove_pair(&s, &p).map_err(|e| format!("case {case}: {e}"))?;
                ensure(r.total_weight() + 2 == s.total_weight(), format!("case {case}: weight step"))?;
                ensure(validate_state(&r).is_empty(), format!("case {case}: invalid after removal"))?;
                removals += 1;
            }
            s = remove_pair(&s, &first).map_err(|e| e.to_string())?;
            steps += 1;
            ensure(steps <= limit, format!("case {case}: reduction does not terminate"))?;
        }
    }
    Ok(format!("{cases} states, {removals} removals"))
}

fn embedded_reducible() -> Outcome {
    let c = tetrahedron();
    let mut n = 0;
    for t in enumerate_and_verify(16, EnumerationOptions::default()).tracks.iter().filter(|t| t.total > 4) {
        let p = pattern_from_weights(&c, &tetra_weights(t.weights)).map_err(|e| e.to_string())?;
        let s = Spattern::from_pattern(&p);
        ensure(
            !find_plus_minus_pairs(&s).map_err(|e| e.to_string())?.is_empty(),
            format!("{:?}: no +/- pair", t.weights),
        )?;
        ensure(
            find_removable_pairs(&s).iter().any(|r| r.kind == PairKind::PlusMinus),
            format!("{:?}: no clean removable pair", t.weights),
        )?;
        n += 1;
    }
    Ok(format!("{n} tracks of weight 8 to 16"))
}

fn permutation_invariance(seed: u64, cases: usize) -> Outcome {
    let mut rng = seeded(seed);
    for case in 0..cases {
        let s = random_spattern(&mut rng, 40);
        let e = EdgeId(case % 6);
        let nu = random_permutation(&mut rng, e, s.edge_points(e).len());
        let t = apply_edge_permutation(&s, &nu).map_err(|e| format!("case {case}: {e}"))?;
        ensure(
            t.weights() == s.weights()
                && underlying_pattern(&t) == underlying_pattern(&s)
                && strack_weights(&t) == strack_weights(&s)
                && graph_stats(&t) == graph_stats(&s),
            format!("case {case}: invariants changed"),
        )?;
    }
    Ok(format!("{cases} spatterns"))
}

fn trace(text: &str) -> Result<SweepTrace, String> {
    fixtures::trace(text).map_err(|e| e.to_string())
}

fn documents_load() -> Outcome {
    for (name, text) in fixtures::ALL {
        fixtures::load_checked(text).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} documents", fixtures::ALL.len()))
}

fn octagon_sweep() -> Outcome {
    let t = trace(fixtures::OCTAGON_SWEEP)?;
    let r = replay(&t).map_err(|e| e.to_string())?;
    ensure(r.weights[1] == r.weights[0] + 2, "first step must gain weight")?;
    ensure(!swap_reduce(&t).map_err(|e| e.to_string())?.reduced, "not at a fixpoint")?;
    let rep = analyze_first_thick(&t).map_err(|e| e.to_string())?;
    ensure(rep.removable_pairs_in_piece.len() == 2, format!("{} removable pairs", rep.removable_pairs_in_piece.len()))?;
    ensure(rep.disconnects, "removal does not disconnect the piece")?;
    ensure(rep.almost_normal_after_uncross, "not almost normal after uncrossing")?;
    Ok(format!("weights {:?}, thick at {}", r.weights, rep.index))
}

fn twelve_strack_sweep() -> Outcome {
    let t = trace(fixtures::TWELVE_STRACK_SWEEP)?;
    let rep = analyze_first_thick(&t).map_err(|e| e.to_string())?;
    let left = sorted(rep.piece_after_removing_removed.clone());
    ensure(left == [3, 7], format!("removal leaves {left:?}"))?;
    Ok("removal leaves {3,7}".into())
}

fn swaps_lower_width() -> Outcome {
    let mut total = 0;
    for text in fixtures::REDUCIBLE.iter().chain([&fixtures::OCTAGON_SWEEP, &fixtures::TWELVE_STRACK_SWEEP]) {
        let mut cur = trace(text)?;
        let mut steps = 0;
        loop {
            let before = width(&cur).map_err(|e| e.to_string())?;
            let out = swap_reduce(&cur).map_err(|e| e.to_string())?;
            if !out.reduced {
                break;
            }
            let after = width(&out.trace).map_err(|e| e.to_string())?;
            ensure(after < before, format!("width {:?} -> {:?}", before.0, after.0))?;
            cur = out.trace;
            steps += 1;
        }
        if fixtures::REDUCIBLE.contains(text) {
            ensure(steps > 0, "reducible fixture did not reduce")?;
        }
        total += steps;
    }
    Ok(format!("{total} strict reductions"))
}

fn width_invariance(seed: u64) -> Outcome {
    let mut rng = seeded(seed);
    for text in fixtures::REDUCIBLE.iter().chain([&fixtures::OCTAGON_SWEEP]) {
        let t = trace(text)?;
        let w = width(&t).map_err(|e| e.to_string())?;
        let states = replay(&t).map_err(|e| e.to_string())?.states;
        for round in 0..20 {
            let weights: Result<Vec<u64>, String> = states
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let e = EdgeId((round + i) % 6);
                    let nu = random_permutation(&mut rng, e, s.edge_points(e).len());
                    s.permute_edge(&nu).map(|p| p.total_weight()).map_err(|e| e.to_string())
                })
                .collect();
            ensure(WidthRecord::from_weights(&weights?) == w, "width changed under permutation")?;
        }
    }
    Ok("3 traces, 20 rounds each".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_with_few_cases() {
        let opts = VerifyOptions { max_weight: 12, seed: 3, cases: 20 };
        for suite in [Suite::Classification, Suite::Spattern, Suite::Sweep] {
            let r = run_suite(suite, opts);
            assert!(r.passed, "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }
}
