//! Randomized list coloring by iterated wasteful nibble rounds, with a lab
//! for checking the probabilistic tools behind it on small instances.

pub mod error;
pub mod finisher;
pub mod formats;
pub mod generators;
pub mod graph;
pub mod lab;
pub mod nibble;
pub mod partition;
pub mod pipeline;
pub mod rng;
pub mod sparsify;
pub mod wcp;

pub use error::{Error, Result};
pub use graph::{Color, Graph, ListAssignment, PairParams, PartialColoring};
