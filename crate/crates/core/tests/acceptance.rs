//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tracklab_core::classify::{
    classify, enumerate_and_verify, is_octagon, is_octagon_weights, separation, EnumerationOptions, Parity, TrackClass,
};
use tracklab_core::complex::{tetrahedron, EdgeId};
use tracklab_core::fixtures;
use tracklab_core::pattern::{pattern_from_weights, Pattern};
use tracklab_core::random::{random_permutation, random_singular_state, random_spattern, seeded};
use tracklab_core::spattern::{
    apply_edge_permutation, find_plus_minus_pairs, find_removable_pairs, graph_stats, remove_pair,
    strack_decomposition, uncross, underlying_pattern, validate_state, PairKind, SingularState, Spattern,
    SpatternError,
};
use tracklab_core::sweep::{analyze_first_thick, replay, swap_reduce, width, SweepTrace, UncrossSummary, WidthRecord};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

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

fn split(parts: &[&[&str]]) -> BTreeSet<Vec<String>> {
    parts.iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect()
}

fn component_totals(p: &Pattern) -> Vec<u64> {
    sorted(p.component_weights().iter().map(|w| w.total()).collect())
}

fn strack_weights(s: &SingularState) -> Vec<usize> {
    sorted(strack_decomposition(s).iter().map(|t| t.weight()).collect())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = enumerate_and_verify(24, EnumerationOptions::default());
    let elapsed = start.elapsed();
    ensure(
        report.violations.is_empty(),
        format!("{} violations, first {:?}", report.violations.len(), report.violations.first()),
    )?;
    let allowed: BTreeSet<u64> = [3, 4, 8, 12, 16, 20, 24].into();
    ensure(
        report.realized_track_weights.is_subset(&allowed),
        format!("track weights {:?}", report.realized_track_weights),
    )?;
    for t in &report.tracks {
        if let TrackClass::FourN { n, a, b, a_parity, .. } = t.class {
            ensure(a + b == n && num_gcd(a, b) == 1, format!("{:?}: a={a} b={b} n={n}", t.weights))?;
            if n % 2 == 0 {
                ensure(a % 2 == 1 && b % 2 == 1 && a_parity == Parity::Odd, format!("{:?}: parity", t.weights))?;
            }
        }
    }
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} tracks from {} realizable vectors, weights {:?}, {:.1?} single-threaded",
        report.tracks.len(),
        report.patterns_realized,
        report.realized_track_weights,
        elapsed
    ))
}

fn num_gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn criterion_2() -> Outcome {
    let c = tetrahedron();
    let p = pattern_from_weights(&c, &tracklab_core::classify::tetra_weights([2, 2, 1, 1, 1, 1]))
        .map_err(|e| e.to_string())?;
    ensure(p.component_count() == 1 && p.weights().total() == 8, "not a single 8-track")?;
    ensure(is_octagon(&p), "is_octagon false")?;
    let sep = separation(&p).map_err(|e| e.to_string())?;
    ensure(sep.vertex_split() == split(&[&["u", "v"], &["w", "z"]]), format!("vertices {:?}", sep.vertices))?;
    ensure(sep.centre_split() == split(&[&["e", "f"], &["g", "h"]]), format!("centres {:?}", sep.centres))?;
    let fixture = fixtures::pattern(fixtures::OCTAGON).map_err(|e| e.to_string())?;
    ensure(fixture == p, "fixture differs from (2,2,1,1,1,1)")?;
    let report = enumerate_and_verify(8, EnumerationOptions::default());
    let octagons: Vec<_> = report.tracks.iter().filter(|t| is_octagon_weights(&t.weights)).collect();
    ensure(octagons.len() == 3, format!("{} octagon classes", octagons.len()))?;
    let axes: BTreeSet<_> = octagons
        .iter()
        .filter_map(|t| match t.class {
            TrackClass::FourN { axis, .. } => Some(axis),
            _ => None,
        })
        .collect();
    ensure(axes.len() == 3, "octagons do not cover three axes")?;
    Ok("single 8-track, {u,v}|{w,z}, {e,f}|{g,h}, 3 octagon classes".into())
}

fn criterion_3() -> Outcome {
    let p = fixtures::pattern(fixtures::TWELVE_TRACK).map_err(|e| e.to_string())?;
    ensure(p.weights().as_slice() == [3, 3, 2, 2, 1, 1], format!("weights {:?}", p.weights()))?;
    let class = classify(&p).map_err(|e| e.to_string())?;
    match class {
        TrackClass::FourN { n: 3, a: 2, b: 1, .. } => {}
        other => return Err(format!("classified as {other}")),
    }
    let sep = separation(&p).map_err(|e| e.to_string())?;
    ensure(sep.vertex_split() == split(&[&["u", "z"], &["v", "w"]]), format!("vertices {:?}", sep.vertices))?;
    Ok(format!("{class}, {{u,z}}|{{v,w}}"))
}

fn criterion_4() -> Outcome {
    let s = fixtures::spattern(fixtures::ELEVEN_STRACK).map_err(|e| e.to_string())?;
    ensure(validate_state(&s).is_empty(), "invalid")?;
    ensure(strack_weights(&s) == [11], format!("stracks {:?}", strack_weights(&s)))?;
    let pm = find_plus_minus_pairs(&s).map_err(|e| e.to_string())?;
    ensure(pm.is_empty(), format!("{} +/- pairs", pm.len()))?;
    let u = underlying_pattern(&s);
    ensure(component_totals(&u) == [3, 4, 4], format!("underlying {:?}", component_totals(&u)))?;
    Ok("valid 11-strack, no +/- pairs, underlying {4,4,3}".into())
}

fn criterion_5() -> Outcome {
    let s = fixtures::spattern(fixtures::TWELVE_STRACK_WITH_LINK).map_err(|e| e.to_string())?;
    ensure(strack_weights(&s) == [3, 12], format!("stracks {:?}", strack_weights(&s)))?;
    let u = underlying_pattern(&s);
    ensure(component_totals(&u) == [3, 12], format!("underlying {:?}", component_totals(&u)))?;
    let expected = fixtures::pattern(fixtures::TWELVE_STRACK_UNDERLYING).map_err(|e| e.to_string())?;
    ensure(u == expected, "underlying pattern differs from the bundled one")?;
    let out = uncross(&s).map_err(|e| e.to_string())?;
    ensure(out.result.crossing_count() == 0, "crossings remain")?;
    ensure(out.result.shape() == u.shape(), "uncrossed shape differs from underlying pattern")?;
    Ok(format!("stracks {{12,3}}, uncrossed by {} edge permutations", out.mu.len()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(6);
    let mut removals = 0usize;
    for case in 0..500 {
        let mut s = random_singular_state(&mut rng, 40);
        let mut steps = 0;
        loop {
            let pairs = find_removable_pairs(&s);
            let Some(pair) = pairs.first() else { break };
            for p in &pairs {
                let r = remove_pair(&s, p).map_err(|e| format!("case {case}: {e}"))?;
                ensure(r.total_weight() + 2 == s.total_weight(), format!("case {case}: weight step"))?;
                ensure(validate_state(&r).is_empty(), format!("case {case}: invalid after removal"))?;
                removals += 1;
            }
            s = remove_pair(&s, pair).map_err(|e| e.to_string())?;
            steps += 1;
            ensure(steps <= 20, format!("case {case}: reduction does not terminate"))?;
        }
    }
    let report = enumerate_and_verify(16, EnumerationOptions::default());
    let mut checked = 0;
    for t in report.tracks.iter().filter(|t| t.total > 4) {
        let p = pattern_from_weights(&tetrahedron(), &tracklab_core::classify::tetra_weights(t.weights))
            .map_err(|e| e.to_string())?;
        let s = Spattern::from_pattern(&p);
        let pm = find_plus_minus_pairs(&s).map_err(|e| e.to_string())?;
        ensure(!pm.is_empty(), format!("{:?}: no +/- pair", t.weights))?;
        let clean = find_removable_pairs(&s).iter().any(|r| r.kind == PairKind::PlusMinus);
        ensure(clean, format!("{:?}: no clean removable pair", t.weights))?;
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("500 random states, {removals} removals; {checked} embedded tracks of weight 8..16 reducible"))
}

fn criterion_7() -> Outcome {
    let mut rng = seeded(7);
    let c = tetrahedron();
    for case in 0..500 {
        let s = random_spattern(&mut rng, 40);
        let e = EdgeId(case % c.edge_count());
        let nu = random_permutation(&mut rng, e, s.edge_points(e).len());
        let t = apply_edge_permutation(&s, &nu).map_err(|e| format!("case {case}: {e}"))?;
        ensure(t.weights() == s.weights(), format!("case {case}: weights"))?;
        ensure(underlying_pattern(&t) == underlying_pattern(&s), format!("case {case}: underlying pattern"))?;
        ensure(strack_weights(&t) == strack_weights(&s), format!("case {case}: strack weights"))?;
        ensure(graph_stats(&t) == graph_stats(&s), format!("case {case}: graph stats"))?;
    }
    Ok("500 random spatterns and permutations".into())
}

fn criterion_8() -> Outcome {
    let trace = fixtures::trace(fixtures::OCTAGON_SWEEP).map_err(|e| e.to_string())?;
    let r = replay(&trace).map_err(|e| e.to_string())?;
    ensure(r.weights.windows(2).all(|w| w[0].abs_diff(w[1]) == 2), "steps of 2")?;
    ensure(r.weights[1] == r.weights[0] + 2, "first step must gain weight")?;
    let out = swap_reduce(&trace).map_err(|e| e.to_string())?;
    ensure(!out.reduced, "octagon trace is not at a fixpoint")?;
    let rep = analyze_first_thick(&trace).map_err(|e| e.to_string())?;
    ensure(rep.same_piece, "pairs are in different pieces")?;
    ensure(
        rep.removable_pairs_in_piece.len() == 2,
        format!("{} removable pairs in piece", rep.removable_pairs_in_piece.len()),
    )?;
    ensure(rep.disconnects, "removal does not disconnect the piece")?;
    ensure(rep.almost_normal_after_uncross, "not almost normal after uncrossing")?;

    let trace = fixtures::trace(fixtures::TWELVE_STRACK_SWEEP).map_err(|e| e.to_string())?;
    replay(&trace).map_err(|e| e.to_string())?;
    let rep = analyze_first_thick(&trace).map_err(|e| e.to_string())?;
    ensure(
        sorted(rep.piece_after_removing_removed.clone()) == [3, 7],
        format!("removal leaves {:?}", rep.piece_after_removing_removed),
    )?;
    let rest = match &rep.uncross {
        UncrossSummary::Succeeded { .. } => "uncrossable",
        UncrossSummary::Obstructed { .. } => "obstructed",
        UncrossSummary::NotASpattern => "singular",
    };
    Ok(format!(
        "octagon sweep: 2 removable pairs, disconnects, almost normal; second sweep: removal gives {{3,7}}, {rest}"
    ))
}

fn reduce_checked(trace: &SweepTrace) -> Result<usize, String> {
    let mut cur = trace.clone();
    let mut steps = 0;
    loop {
        let before = width(&cur).map_err(|e| e.to_string())?;
        let out = swap_reduce(&cur).map_err(|e| e.to_string())?;
        if !out.reduced {
            return Ok(steps);
        }
        let after = width(&out.trace).map_err(|e| e.to_string())?;
        ensure(after < before, format!("width {:?} -> {:?}", before.0, after.0))?;
        cur = out.trace;
        steps += 1;
    }
}

fn criterion_9() -> Outcome {
    let mut reductions = 0;
    for text in fixtures::REDUCIBLE {
        let trace = fixtures::trace(text).map_err(|e| e.to_string())?;
        let n = reduce_checked(&trace)?;
        ensure(n > 0, "reducible fixture did not reduce")?;
        reductions += n;
    }
    for text in [fixtures::OCTAGON_SWEEP, fixtures::TWELVE_STRACK_SWEEP] {
        reductions += reduce_checked(&fixtures::trace(text).map_err(|e| e.to_string())?)?;
    }
    let mut rng = seeded(9);
    for text in fixtures::REDUCIBLE.iter().chain([&fixtures::OCTAGON_SWEEP]) {
        let trace = fixtures::trace(text).map_err(|e| e.to_string())?;
        let w = width(&trace).map_err(|e| e.to_string())?;
        let states = replay(&trace).map_err(|e| e.to_string())?.states;
        for _ in 0..20 {
            let mut weights = Vec::new();
            for s in &states {
                let e = EdgeId(rand::Rng::gen_range(&mut rng, 0..6));
                let nu = random_permutation(&mut rng, e, s.edge_points(e).len());
                let t = s.permute_edge(&nu).map_err(|e: SpatternError| e.to_string())?;
                weights.push(t.total_weight());
            }
            ensure(WidthRecord::from_weights(&weights) == w, "width changed under permutation")?;
        }
    }
    Ok(format!("{reductions} strict reductions, width invariant under permutations"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classification of tracks up to weight 24", criterion_1),
        ("octagon", criterion_2),
        ("12-track", criterion_3),
        ("11-strack", criterion_4),
        ("12-strack with link", criterion_5),
        ("reduction properties", criterion_6),
        ("permutation invariance", criterion_7),
        ("sweep analysis", criterion_8),
        ("width mechanics", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
