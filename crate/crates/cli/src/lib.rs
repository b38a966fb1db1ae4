//! Library side of the `tracklab` command: rendering, pipelines and the
//! verification suites.

pub mod pipeline;
pub mod render;
pub mod verify;
