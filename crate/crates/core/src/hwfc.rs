//! Hybrid generation: one quantum circuit per partition, with the values
//! sampled for earlier partitions frozen as classical context.

use std::collections::BTreeMap;
use std::fmt;

use crate::content::{bits_for, AdjacencyConfig, Alphabet, ContentInstance, Distribution, Ruleset};
use crate::error::{Error, Result};
use crate::pipcg::{Budget, RandomSource};
use crate::qwfc::{
    build_circuit, exact_distribution, sample, simulate_with_cap, CircuitOptions, QuantumCircuit,
    DEFAULT_QUBIT_CAP,
};

/// Ordered partitions; each list is both the partition's segment set and its
/// preparation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    parts: Vec<Vec<usize>>,
}

impl Partitioning {
    pub fn new(parts: Vec<Vec<usize>>) -> Self {
        Self { parts }
    }

    /// A single partition in `order`.
    pub fn single(order: Vec<usize>) -> Self {
        Self { parts: vec![order] }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The partition orders concatenated.
    pub fn concatenated(&self) -> Vec<usize> {
        self.parts.iter().flatten().copied().collect()
    }

    pub fn largest(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    EmptyPartition { partition: usize },
    OutOfRange { partition: usize, segment: usize },
    Duplicate { segment: usize, first: usize, second: usize },
    Uncovered { segment: usize },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyPartition { partition } => write!(f, "partition {partition} is empty"),
            Self::OutOfRange { partition, segment } => {
                write!(f, "partition {partition} names segment {segment}, which does not exist")
            }
            Self::Duplicate {
                segment,
                first,
                second,
            } => write!(f, "segment {segment} appears in partitions {first} and {second}"),
            Self::Uncovered { segment } => write!(f, "segment {segment} is in no partition"),
        }
    }
}

/// Empty iff the partitions are nonempty, disjoint and cover `0..n`.
pub fn validate_partitioning(partitioning: &Partitioning, n: usize) -> Vec<PartitionViolation> {
    let mut report = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (h, part) in partitioning.parts().iter().enumerate() {
        if part.is_empty() {
            report.push(PartitionViolation::EmptyPartition { partition: h });
        }
        for &s in part {
            match owner.get(s) {
                None => report.push(PartitionViolation::OutOfRange {
                    partition: h,
                    segment: s,
                }),
                Some(Some(first)) => report.push(PartitionViolation::Duplicate {
                    segment: s,
                    first: *first,
                    second: h,
                }),
                Some(None) => owner[s] = Some(h),
            }
        }
    }
    for (s, o) in owner.iter().enumerate() {
        if o.is_none() {
            report.push(PartitionViolation::Uncovered { segment: s });
        }
    }
    report
}

fn check_partitioning(partitioning: &Partitioning, n: usize) -> Result<()> {
    let report = validate_partitioning(partitioning, n);
    if report.is_empty() {
        Ok(())
    } else {
        let text: Vec<String> = report.iter().map(ToString::to_string).collect();
        Err(Error::Invalid(text.join("; ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HwfcOptions {
    pub circuit: CircuitOptions,
    pub qubit_cap: usize,
}

impl Default for HwfcOptions {
    fn default() -> Self {
        Self {
            circuit: CircuitOptions::default(),
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HwfcRun {
    pub instance: ContentInstance,
    /// Largest number of qubits simulated for one partition.
    pub max_qubits: usize,
}

fn partition_circuit(
    adjacency: &AdjacencyConfig,
    alphabet: &Alphabet,
    ruleset: &Ruleset,
    part: &[usize],
    frozen: &ContentInstance,
    options: HwfcOptions,
) -> Result<QuantumCircuit> {
    let circuit = build_circuit(adjacency, alphabet, ruleset, part, frozen, options.circuit)?;
    if circuit.qubit_count() > options.qubit_cap {
        return Err(Error::Capacity(format!(
            "{} qubits exceed the simulator cap of {}",
            circuit.qubit_count(),
            options.qubit_cap
        )));
    }
    Ok(circuit)
}

/// Draws one instance: one measurement per partition, in partition order.
pub fn hwfc_generate(
    adjacency: &AdjacencyConfig,
    alphabet: &Alphabet,
    ruleset: &Ruleset,
    partitioning: &Partitioning,
    rng: &mut RandomSource,
    options: HwfcOptions,
) -> Result<HwfcRun> {
    let n = adjacency.segment_count();
    check_partitioning(partitioning, n)?;
    let mut instance = ContentInstance::new(n);
    let mut max_qubits = 0;
    for (h, part) in partitioning.parts().iter().enumerate() {
        let wrap = |e| Error::Partition {
            partition: h,
            source: Box::new(e),
        };
        let circuit =
            partition_circuit(adjacency, alphabet, ruleset, part, &instance, options).map_err(wrap)?;
        max_qubits = max_qubits.max(circuit.qubit_count());
        let sv = simulate_with_cap(&circuit, options.qubit_cap).map_err(wrap)?;
        let shot = sample(&sv, &circuit.layout, 1, rng).pop().expect("one shot");
        instance.extend_from(&shot).map_err(wrap)?;
    }
    Ok(HwfcRun {
        instance,
        max_qubits,
    })
}

/// Exact joint distribution: every partition's conditional distribution,
/// simulated once per reachable outcome of the earlier partitions.
pub fn hwfc_exact_distribution(
    adjacency: &AdjacencyConfig,
    alphabet: &Alphabet,
    ruleset: &Ruleset,
    partitioning: &Partitioning,
    budget: Budget,
    options: HwfcOptions,
) -> Result<Distribution> {
    let n = adjacency.segment_count();
    check_partitioning(partitioning, n)?;
    budget.check_candidates(alphabet.size(), n)?;
    let mut level: Vec<(ContentInstance, f64)> = vec![(ContentInstance::new(n), 1.0)];
    for (h, part) in partitioning.parts().iter().enumerate() {
        let wrap = |e| Error::Partition {
            partition: h,
            source: Box::new(e),
        };
        let mut next = Vec::new();
        for (prior, mass) in &level {
            let circuit =
                partition_circuit(adjacency, alphabet, ruleset, part, prior, options).map_err(wrap)?;
            let sv = simulate_with_cap(&circuit, options.qubit_cap).map_err(wrap)?;
            for (values, p) in exact_distribution(&sv, &circuit.layout).iter() {
                let mut joint = prior.clone();
                for (&s, &v) in circuit.layout.segments().iter().zip(values) {
                    joint.push(s, v).map_err(wrap)?;
                }
                next.push((joint, mass * p));
            }
            budget.check_states(next.len())?;
        }
        level = next;
    }
    let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (instance, p) in level {
        *merged.entry(instance.values().expect("partitions cover all segments")).or_insert(0.0) += p;
    }
    let mut dist = Distribution::complete(n, bits_for(alphabet.size()));
    for (values, p) in merged {
        dist.add(values, p);
    }
    Ok(dist)
}
