//! Pattern-based procedural content generation with classical, quantum
//! (statevector-simulated) and hybrid samplers.
//!
//! Segments, values and directions are 0-based throughout.

pub mod content;
pub mod corpus;
pub mod cwfc;
pub mod error;
pub mod hwfc;
pub mod pipcg;
pub mod qwfc;
pub mod topology;

pub use error::{Error, Result};
