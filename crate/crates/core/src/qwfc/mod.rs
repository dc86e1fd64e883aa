//! Quantum wave function collapse.
//!
//! Segments are prepared one at a time in a fixed order. Each step is a set of
//! conditional loads: for every reachable assignment of the already prepared
//! neighbours that the target's rules can see, the target's qubit group is
//! rotated from the ground state into the square roots of its value
//! distribution under that assignment. Measuring all groups samples the same
//! distribution as classical generation in that order.

mod lower;
mod qasm;
mod simulator;

use std::collections::{BTreeMap, BTreeSet};

use crate::content::{AdjacencyConfig, Alphabet, ContentInstance, Overlay, Placement, RuleModel, Ruleset};
use crate::error::{Error, Result};

pub use lower::{lower_to_gates, simulate_gates, Gate, GateList};
pub use qasm::export_qasm;
pub use simulator::{
    apply_load, exact_distribution, sample, simulate, simulate_with_cap, Statevector,
    DEFAULT_QUBIT_CAP, PROBABILITY_FLOOR,
};

/// Segments that own qubits, `bits` qubits each.
///
/// The group of the segment at position `p` of `segments` (ascending) holds
/// qubits `p*bits .. (p+1)*bits`; value `v` is stored little-endian. For a
/// layout over all segments the basis index is the canonical integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLayout {
    segments: Vec<usize>,
    bits: usize,
    total_segments: usize,
    position: Vec<Option<usize>>,
}

impl QubitLayout {
    pub fn new(mut segments: Vec<usize>, bits: usize, total_segments: usize) -> Result<Self> {
        segments.sort_unstable();
        segments.dedup();
        if segments.last().is_some_and(|&s| s >= total_segments) {
            return Err(Error::Invalid(format!(
                "layout segment outside 0..{total_segments}"
            )));
        }
        let mut position = vec![None; total_segments];
        for (p, &s) in segments.iter().enumerate() {
            position[s] = Some(p);
        }
        Ok(Self {
            segments,
            bits,
            total_segments,
            position,
        })
    }

    /// Layout over all segments `0..n`.
    pub fn full(n: usize, bits: usize) -> Self {
        Self::new((0..n).collect(), bits, n).expect("segments in range")
    }

    pub fn segments(&self) -> &[usize] {
        &self.segments
    }

    pub fn bits_per_segment(&self) -> usize {
        self.bits
    }

    pub fn total_segments(&self) -> usize {
        self.total_segments
    }

    pub fn qubit_count(&self) -> usize {
        self.segments.len() * self.bits
    }

    pub fn position(&self, segment: usize) -> Option<usize> {
        self.position.get(segment).copied().flatten()
    }

    /// Global index of `bit` of `segment`'s group.
    pub fn qubit(&self, segment: usize, bit: usize) -> usize {
        self.position(segment).expect("segment has a qubit group") * self.bits + bit
    }

    /// Values of all layout segments in basis state `index`.
    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mask = (1usize << self.bits) - 1;
        (0..self.segments.len())
            .map(|p| (index >> (p * self.bits)) & mask)
            .collect()
    }

    /// Basis index of a value vector aligned with `segments()`.
    pub fn encode(&self, values: &[usize]) -> usize {
        values
            .iter()
            .enumerate()
            .map(|(p, &v)| v << (p * self.bits))
            .sum()
    }
}

/// Rotates the target group into `amplitudes` on the subspace where every
/// control segment holds its required value.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalLoad {
    pub controls: Vec<(usize, usize)>,
    pub target: usize,
    pub amplitudes: Vec<f64>,
}

/// All loads of one segment; their control assignments are pairwise distinct
/// over the same dependency set.
#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    pub target: usize,
    pub dependencies: Vec<usize>,
    pub loads: Vec<ConditionalLoad>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCircuit {
    pub layout: QubitLayout,
    pub alphabet_size: usize,
    pub iterations: Vec<Iteration>,
}

impl QuantumCircuit {
    pub fn qubit_count(&self) -> usize {
        self.layout.qubit_count()
    }

    pub fn loads(&self) -> impl Iterator<Item = &ConditionalLoad> {
        self.iterations.iter().flat_map(|it| it.loads.iter())
    }

    pub fn load_count(&self) -> usize {
        self.iterations.iter().map(|it| it.loads.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitOptions {
    /// Limit on reachable dependency assignments (loads) per iteration.
    pub max_loads: usize,
    /// Limit on tracked reachable assignments of the propagation frontier.
    pub max_frontier: usize,
}

impl Default for CircuitOptions {
    fn default() -> Self {
        Self {
            max_loads: 4096,
            max_frontier: 1 << 18,
        }
    }
}

/// Segments before position `k` of `order` that `order[k]`'s patterns can see.
pub fn dependency_set(
    k: usize,
    order: &[usize],
    adjacency: &AdjacencyConfig,
    ruleset: &Ruleset,
) -> Vec<usize> {
    let target = order[k];
    let earlier: BTreeSet<usize> = order[..k].iter().copied().collect();
    let mut deps: BTreeSet<usize> = BTreeSet::new();
    for d in ruleset.pattern_directions() {
        for &s in adjacency.neighbors(d, target) {
            if earlier.contains(&s) {
                deps.insert(s);
            }
        }
    }
    deps.into_iter().collect()
}

/// Compiles the circuit preparing `order`'s segments, with `frozen` as fixed
/// classical context.
///
/// `order` must be disjoint from the frozen segments. Only dependency
/// assignments reachable from the ground state are loaded; the reachable set
/// is tracked exactly by propagating the support over the segments that later
/// iterations still depend on.
pub fn build_circuit(
    adjacency: &AdjacencyConfig,
    alphabet: &Alphabet,
    ruleset: &Ruleset,
    order: &[usize],
    frozen: &ContentInstance,
    options: CircuitOptions,
) -> Result<QuantumCircuit> {
    let n = adjacency.segment_count();
    let w = alphabet.size();
    ruleset.check(w, adjacency)?;
    if frozen.segment_count() != n {
        return Err(Error::Invalid(format!(
            "frozen context covers {} segments, adjacency has {n}",
            frozen.segment_count()
        )));
    }
    let mut seen = vec![false; n];
    for &s in order {
        if s >= n || seen[s] || frozen.is_placed(s) {
            return Err(Error::Invalid(format!(
                "segment {s} in the order is out of range, repeated or frozen"
            )));
        }
        seen[s] = true;
    }
    let model = RuleModel::new(adjacency, ruleset, w);
    let layout = QubitLayout::new(order.to_vec(), alphabet.bits_per_segment(), n)?;

    // last iteration whose target watches each segment
    let mut last_use = vec![None; n];
    for (k, &t) in order.iter().enumerate() {
        for &s in model.watched(t) {
            last_use[s] = Some(k);
        }
    }

    let mut frontier: Vec<usize> = Vec::new();
    let mut states: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
    let mut slots: Vec<Option<usize>> = vec![None; n];
    let mut iterations = Vec::with_capacity(order.len());

    for (k, &target) in order.iter().enumerate() {
        let dependencies = dependency_set(k, order, adjacency, ruleset);
        let project: Vec<usize> = dependencies
            .iter()
            .map(|d| frontier.binary_search(d).expect("dependencies stay on the frontier"))
            .collect();

        let mut assignments: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
        for state in &states {
            let a: Vec<usize> = project.iter().map(|&i| state[i]).collect();
            if assignments.contains_key(&a) {
                continue;
            }
            for (&s, &v) in dependencies.iter().zip(&a) {
                slots[s] = Some(v);
            }
            let dist = model.distribution(target, &Overlay::new(slots.as_slice(), frozen));
            for &s in &dependencies {
                slots[s] = None;
            }
            let dist = dist.map_err(|_| Error::Conflict {
                segment: target,
                context: dependencies
                    .iter()
                    .copied()
                    .zip(a.iter().copied())
                    .chain(frozen.placed_pairs())
                    .collect(),
            })?;
            assignments.insert(a, dist.to_vec());
            if assignments.len() > options.max_loads {
                return Err(Error::Capacity(format!(
                    "segment {target} has more than {} reachable dependency assignments",
                    options.max_loads
                )));
            }
        }

        let mut next_frontier: Vec<usize> = frontier
            .iter()
            .copied()
            .chain(std::iter::once(target))
            .filter(|&s| last_use[s].is_some_and(|l| l > k))
            .collect();
        next_frontier.sort_unstable();
        let keep: Vec<Option<usize>> = next_frontier
            .iter()
            .map(|s| frontier.binary_search(s).ok())
            .collect();
        let mut next_states = BTreeSet::new();
        for state in &states {
            let a: Vec<usize> = project.iter().map(|&i| state[i]).collect();
            for (v, &p) in assignments[&a].iter().enumerate() {
                if p > 0.0 {
                    next_states.insert(
                        keep.iter()
                            .map(|slot| slot.map_or(v, |i| state[i]))
                            .collect::<Vec<_>>(),
                    );
                }
            }
            if next_states.len() > options.max_frontier {
                return Err(Error::Capacity(format!(
                    "more than {} reachable frontier assignments after segment {target}",
                    options.max_frontier
                )));
            }
        }
        frontier = next_frontier;
        states = next_states;

        let loads = assignments
            .into_iter()
            .map(|(a, dist)| ConditionalLoad {
                controls: dependencies.iter().copied().zip(a).collect(),
                target,
                amplitudes: dist.iter().map(|p| p.sqrt()).collect(),
            })
            .collect();
        iterations.push(Iteration {
            target,
            dependencies,
            loads,
        });
    }

    Ok(QuantumCircuit {
        layout,
        alphabet_size: w,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{build_grid2d, Pattern, Rule, Symbol};

    fn two_colors() -> Alphabet {
        Alphabet::new(vec![
            Symbol::new("white", '.', [255; 3]),
            Symbol::new("black", '#', [0; 3]),
        ])
        .unwrap()
    }

    fn checkerboard_rules() -> Ruleset {
        let all = |v| Pattern::new((0..4).map(|d| (d, v)).collect()).unwrap();
        Ruleset::new(vec![Rule::new(1, 1.0, all(0)), Rule::new(0, 1.0, all(1))]).unwrap()
    }

    const SNAKE: [usize; 9] = [0, 1, 2, 5, 4, 3, 6, 7, 8];

    #[test]
    fn dependency_sets_follow_the_order() {
        let adj = build_grid2d(3, 3);
        let rules = checkerboard_rules();
        assert!(dependency_set(0, &SNAKE, &adj, &rules).is_empty());
        assert_eq!(dependency_set(3, &SNAKE, &adj, &rules), vec![2]);
        assert_eq!(dependency_set(4, &SNAKE, &adj, &rules), vec![1, 5]);
        let free = Ruleset::new(vec![Rule::new(0, 1.0, Pattern::empty())]).unwrap();
        assert!((0..9).all(|k| dependency_set(k, &SNAKE, &adj, &free).is_empty()));
    }

    #[test]
    fn checkerboard_circuit_shape() {
        let adj = build_grid2d(3, 3);
        let circuit = build_circuit(
            &adj,
            &two_colors(),
            &checkerboard_rules(),
            &SNAKE,
            &ContentInstance::new(9),
            CircuitOptions::default(),
        )
        .unwrap();
        assert_eq!(circuit.qubit_count(), 9);
        assert_eq!(circuit.iterations.len(), 9);
        let first = &circuit.iterations[0].loads;
        assert_eq!(first.len(), 1);
        assert!(first[0].controls.is_empty());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(first[0].amplitudes.iter().all(|a| (a - h).abs() < 1e-15));
        for it in &circuit.iterations[1..] {
            for load in &it.loads {
                let mut a = load.amplitudes.clone();
                a.sort_by(f64::total_cmp);
                assert_eq!(a, vec![0.0, 1.0]);
            }
        }
        // one load per reachable colour of the single dependency
        assert_eq!(circuit.iterations[1].loads.len(), 2);
    }

    #[test]
    fn unreachable_assignments_are_skipped() {
        // segment 4 sees 1 and 5, which always share a colour on a checkerboard
        let adj = build_grid2d(3, 3);
        let circuit = build_circuit(
            &adj,
            &two_colors(),
            &checkerboard_rules(),
            &SNAKE,
            &ContentInstance::new(9),
            CircuitOptions::default(),
        )
        .unwrap();
        let loads = &circuit.iterations[4].loads;
        assert_eq!(loads.len(), 2);
        assert!(loads.iter().all(|l| l.controls[0].1 == l.controls[1].1));
    }

    #[test]
    fn conflicts_name_the_segment() {
        // value 0 needs a left neighbour of value 1, which can never be placed
        let adj = build_grid2d(2, 1);
        let rules = Ruleset::new(vec![Rule::new(0, 1.0, Pattern::new(vec![(2, 1)]).unwrap())])
            .unwrap();
        let err = build_circuit(
            &adj,
            &two_colors(),
            &rules,
            &[0, 1],
            &ContentInstance::new(2),
            CircuitOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Conflict { segment: 1, .. }), "{err:?}");
    }

    #[test]
    fn frozen_segments_become_classical_context() {
        let adj = build_grid2d(3, 1);
        let frozen = ContentInstance::from_entries(3, &[(1, 1)]).unwrap();
        let circuit = build_circuit(
            &adj,
            &two_colors(),
            &checkerboard_rules(),
            &[0, 2],
            &frozen,
            CircuitOptions::default(),
        )
        .unwrap();
        assert_eq!(circuit.layout.segments(), &[0, 2]);
        for it in &circuit.iterations {
            assert!(it.dependencies.is_empty());
            assert_eq!(it.loads[0].amplitudes, vec![1.0, 0.0]);
        }
        let err = build_circuit(
            &adj,
            &two_colors(),
            &checkerboard_rules(),
            &[0, 1],
            &frozen,
            CircuitOptions::default(),
        );
        assert!(matches!(err, Err(Error::Invalid(_))));
    }

    #[test]
    fn load_limit_is_a_capacity_error() {
        let adj = build_grid2d(3, 1);
        let free = |v| Rule::new(v, 1.0, Pattern::new(vec![(0, 0)]).unwrap());
        let rules = Ruleset::new(vec![free(0), free(1), Rule::new(1, 1.0, Pattern::new(vec![(0, 1)]).unwrap())]).unwrap();
        let options = CircuitOptions {
            max_loads: 1,
            ..CircuitOptions::default()
        };
        let err = build_circuit(&adj, &two_colors(), &rules, &[2, 1, 0], &ContentInstance::new(3), options)
            .unwrap_err();
        assert!(matches!(err, Error::Capacity(_)), "{err:?}");
    }

    #[test]
    fn layout_encoding_round_trips() {
        let layout = QubitLayout::new(vec![4, 1], 2, 6).unwrap();
        assert_eq!(layout.segments(), &[1, 4]);
        assert_eq!(layout.qubit(4, 1), 3);
        assert_eq!(layout.encode(&[2, 3]), 0b11_10);
        assert_eq!(layout.decode(0b11_10), vec![2, 3]);
        assert_eq!(QubitLayout::full(9, 1).qubit_count(), 9);
        assert_eq!(QubitLayout::full(40, 3).qubit_count(), 120);
    }
}
