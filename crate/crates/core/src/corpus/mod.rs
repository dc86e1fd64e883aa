//! Built-in use cases: rules, default orders and partitions, and validators
//! for finished content.

mod checkerboard;
mod hexmap;
mod pipes;
mod platformer;
mod voxel;

use crate::content::{value_weights, AdjacencyConfig, Alphabet, Pattern, Rule, Ruleset};
use crate::error::Result;
use crate::hwfc::Partitioning;
use crate::topology::{OrderSpec, PartitionSpec, Topology};

pub use checkerboard::checkerboard_usecase;
pub use hexmap::{generate_hexmap_ruleset, hexmap_alphabet, hexmap_usecase, DEFAULT_BLUE_WEIGHT};
pub use pipes::{generate_pipes_ruleset, pipes_alphabet, pipes_usecase, PIPE_PORTS};
pub use platformer::{platformer_alphabet, platformer_ruleset, platformer_usecase};
pub use voxel::{voxel_alphabet, voxel_ruleset, voxel_skyline_usecase};

/// Predicate over complete instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validator {
    /// Adjacent segments differ.
    Checkerboard,
    /// Facing pipe ports agree across every edge.
    Pipes,
    /// Adjacent terrains are equal or consecutive in the chain.
    Hexmap,
    /// Ground at the bottom, stacking rules, trees and blocks clear of the top.
    Platformer,
    /// No present voxel above an absent one.
    Voxel,
    /// Every segment's value has positive weight given all its neighbours.
    RuleConsistency,
}

impl Validator {
    pub fn name(&self) -> &'static str {
        match self {
            Validator::Checkerboard => "checkerboard",
            Validator::Pipes => "pipes",
            Validator::Hexmap => "hexmap",
            Validator::Platformer => "platformer",
            Validator::Voxel => "voxel",
            Validator::RuleConsistency => "rule-consistency",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Validator::Checkerboard,
            Validator::Pipes,
            Validator::Hexmap,
            Validator::Platformer,
            Validator::Voxel,
            Validator::RuleConsistency,
        ]
        .into_iter()
        .find(|v| v.name() == name)
    }

    /// Human-readable violations; empty when `values` passes.
    pub fn check(
        &self,
        topology: &Topology,
        adjacency: &AdjacencyConfig,
        ruleset: &Ruleset,
        alphabet_size: usize,
        values: &[usize],
    ) -> Vec<String> {
        if values.len() != adjacency.segment_count() {
            return vec![format!(
                "instance has {} values for {} segments",
                values.len(),
                adjacency.segment_count()
            )];
        }
        match self {
            Validator::Checkerboard => pairs_where(adjacency, values, |_, a, b| a == b, "equal colours"),
            Validator::Pipes => pipes::violations(adjacency, values),
            Validator::Hexmap => pairs_where(adjacency, values, |_, a, b| a.abs_diff(b) > 1, "terrains too far apart"),
            Validator::Platformer => platformer::violations(topology, values),
            Validator::Voxel => voxel::violations(adjacency, values),
            Validator::RuleConsistency => rule_consistency(adjacency, ruleset, alphabet_size, values),
        }
    }
}

fn pairs_where(
    adjacency: &AdjacencyConfig,
    values: &[usize],
    bad: impl Fn(usize, usize, usize) -> bool,
    what: &str,
) -> Vec<String> {
    let mut out = Vec::new();
    for d in 0..adjacency.direction_count() {
        for (i, j) in adjacency.edges(d) {
            if i < j && bad(d, values[i], values[j]) {
                out.push(format!("segments {i} and {j}: {what} ({} / {})", values[i], values[j]));
            }
        }
    }
    out
}

fn rule_consistency(
    adjacency: &AdjacencyConfig,
    ruleset: &Ruleset,
    alphabet_size: usize,
    values: &[usize],
) -> Vec<String> {
    let context: Vec<Option<usize>> = values.iter().map(|&v| Some(v)).collect();
    let mut out = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if v >= alphabet_size {
            out.push(format!("segment {i}: value {v} outside the alphabet"));
            continue;
        }
        let weights = value_weights(i, adjacency, ruleset, alphabet_size, context.as_slice());
        if weights[v] <= 0.0 {
            out.push(format!("segment {i}: no rule supports value {v} in its neighbourhood"));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct UseCase {
    pub name: String,
    pub topology: Topology,
    pub alphabet: Alphabet,
    pub ruleset: Ruleset,
    pub order: OrderSpec,
    pub partition: PartitionSpec,
    pub validator: Validator,
}

impl UseCase {
    pub fn adjacency(&self) -> AdjacencyConfig {
        self.topology.adjacency()
    }

    pub fn segment_count(&self) -> usize {
        self.topology.segment_count()
    }

    pub fn order(&self) -> Result<Vec<usize>> {
        self.topology.order(&self.order)
    }

    pub fn partitioning(&self) -> Result<Partitioning> {
        self.topology.partition(&self.partition, &self.order()?)
    }

    pub fn validate(&self, values: &[usize]) -> Vec<String> {
        self.validator.check(
            &self.topology,
            &self.adjacency(),
            &self.ruleset,
            self.alphabet.size(),
            values,
        )
    }
}

/// One rule per full-neighbourhood assignment whose neighbours are allowed
/// by `allowed(center, direction)`; the last direction varies fastest.
pub(crate) fn full_neighbourhood_rules(
    values: usize,
    directions: usize,
    allowed: impl Fn(usize, usize) -> Vec<usize>,
    weight: impl Fn(usize) -> f64,
) -> Vec<Rule> {
    let mut rules = Vec::new();
    for center in 0..values {
        let options: Vec<Vec<usize>> = (0..directions).map(|d| allowed(center, d)).collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let mut pick = vec![0usize; directions];
        'odometer: loop {
            let pairs = (0..directions).map(|d| (d, options[d][pick[d]])).collect();
            rules.push(Rule::new(
                center,
                weight(center),
                Pattern::new(pairs).expect("distinct directions"),
            ));
            for d in (0..directions).rev() {
                pick[d] += 1;
                if pick[d] < options[d].len() {
                    continue 'odometer;
                }
                pick[d] = 0;
            }
            break;
        }
    }
    rules
}
