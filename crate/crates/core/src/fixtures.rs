//! Bundled example documents, validated by the test suite.

use crate::io::{parse_document, Document, IoError, PatternDoc, SpatternDoc, TraceDoc};
use crate::pattern::Pattern;
use crate::spattern::Spattern;
use crate::sweep::SweepTrace;

pub const OCTAGON: &str = include_str!("../fixtures/octagon.json");
pub const TWELVE_TRACK: &str = include_str!("../fixtures/twelve_track.json");
pub const ELEVEN_STRACK: &str = include_str!("../fixtures/eleven_strack.json");
pub const TWELVE_STRACK_WITH_LINK: &str = include_str!("../fixtures/twelve_strack_with_link.json");
pub const TWELVE_STRACK_UNDERLYING: &str = include_str!("../fixtures/twelve_strack_underlying.json");
pub const OCTAGON_SWEEP: &str = include_str!("../fixtures/octagon_sweep.json");
pub const TWELVE_STRACK_SWEEP: &str = include_str!("../fixtures/twelve_strack_sweep.json");
pub const REDUCIBLE_PARALLEL: &str = include_str!("../fixtures/reducible_parallel.json");
pub const REDUCIBLE_BUMP: &str = include_str!("../fixtures/reducible_bump.json");

/// File name and contents of every bundled document.
pub const ALL: [(&str, &str); 9] = [
    ("octagon.json", OCTAGON),
    ("twelve_track.json", TWELVE_TRACK),
    ("eleven_strack.json", ELEVEN_STRACK),
    ("twelve_strack_with_link.json", TWELVE_STRACK_WITH_LINK),
    ("twelve_strack_underlying.json", TWELVE_STRACK_UNDERLYING),
    ("octagon_sweep.json", OCTAGON_SWEEP),
    ("twelve_strack_sweep.json", TWELVE_STRACK_SWEEP),
    ("reducible_parallel.json", REDUCIBLE_PARALLEL),
    ("reducible_bump.json", REDUCIBLE_BUMP),
];

/// Traces whose first thick peak can be lowered.
pub const REDUCIBLE: [&str; 2] = [REDUCIBLE_PARALLEL, REDUCIBLE_BUMP];

pub fn pattern(text: &str) -> Result<Pattern, IoError> {
    serde_json::from_str::<PatternDoc>(text)?.to_pattern()
}

pub fn spattern(text: &str) -> Result<Spattern, IoError> {
    serde_json::from_str::<SpatternDoc>(text)?.to_spattern()
}

pub fn trace(text: &str) -> Result<SweepTrace, IoError> {
    serde_json::from_str::<TraceDoc>(text)?.to_trace()
}

/// Loads a document of any kind and checks it: patterns must be
/// realizable, spatterns valid, traces replayable.
pub fn load_checked(text: &str) -> Result<Document, String> {
    let doc = parse_document(text).map_err(|e| e.to_string())?;
    match &doc {
        Document::Pattern(d) => d.to_pattern().map(|_| ()).map_err(|e| e.to_string())?,
        Document::Spattern(d) => {
            let s = d.to_state().map_err(|e| e.to_string())?;
            let v = crate::spattern::validate_state(&s);
            if !v.is_empty() {
                return Err(format!("{} violations, first: {}", v.len(), v[0]));
            }
        }
        Document::Trace(d) => {
            let t = d.to_trace().map_err(|e| e.to_string())?;
            crate::sweep::replay(&t).map_err(|e| e.to_string())?;
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tetrahedron;
    use crate::pattern::pattern_from_weights;
    use crate::spattern::SingularState;
    use crate::testutil::tw;

    #[test]
    fn every_fixture_loads() {
        for (name, text) in ALL {
            let doc = load_checked(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let n = match doc {
                Document::Pattern(d) => d.name,
                Document::Spattern(d) => d.name,
                Document::Trace(d) => d.name,
            };
            assert!(n.is_some(), "{name} has no name");
        }
    }

    #[test]
    fn parallel_fixture_starts_from_the_embedded_octagon() {
        let t = trace(REDUCIBLE_PARALLEL).unwrap();
        let oct = pattern_from_weights(&tetrahedron(), &tw([2, 2, 1, 1, 1, 1])).unwrap();
        assert_eq!(t.initial, SingularState::from_pattern(&oct));
    }
}
