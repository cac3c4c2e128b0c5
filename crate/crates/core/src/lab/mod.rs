//! Benchmark generation, experiment drivers, file formats and drawings.

pub mod experiment;
pub mod generate;
pub mod io;
pub mod render;
