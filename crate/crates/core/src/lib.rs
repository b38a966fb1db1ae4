//! Tracks and singular patterns on triangulated 2-complexes, with a focus on
//! the tetrahedron: classification, singular-state manipulation, and checks
//! of sweep-outs between normal patterns.

pub mod classify;
pub mod complex;
pub mod dsu;
pub mod fixtures;
pub mod io;
pub mod pattern;
pub mod random;
pub mod spattern;
pub mod sweep;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::pattern::EdgeWeights;

    /// Weights on the tetrahedron in the order `(uv, wz, uz, vw, uw, vz)`.
    pub fn tw(w: [u32; 6]) -> EdgeWeights {
        EdgeWeights::from_vec(w.to_vec())
    }
}
