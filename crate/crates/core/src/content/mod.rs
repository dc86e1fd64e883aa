//! Segments, alphabets, adjacency graphs and the pattern-based value model
//! shared by the classical, quantum and hybrid generators.

mod adjacency;
mod alphabet;
mod distribution;
mod instance;
mod rules;

pub use adjacency::{build_grid2d, build_grid3d_columns, build_hexgrid, AdjacencyConfig};
pub use alphabet::{bits_for, Alphabet, Symbol};
pub use distribution::{canonical_integer, decode_canonical, Distribution};
pub use instance::{ContentInstance, Overlay, Pairs, Placement};
pub use rules::{
    pattern_matches, value_distribution, value_weights, FactorKind, FunctionalFactor, Pattern,
    Rule, RuleModel, Ruleset, Weight,
};
