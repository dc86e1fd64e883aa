use num_complex::Complex64;

use super::{ConditionalLoad, QuantumCircuit, QubitLayout};
use crate::content::{ContentInstance, Distribution};
use crate::error::{Error, Result};
use crate::pipcg::RandomSource;

/// 26 qubits of double-precision complex amplitudes take 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Basis states with less probability are dropped from exact distributions.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

/// Dense amplitude vector; bit `j` of a basis index is qubit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0...0>` on `qubits` qubits.
    pub fn ground(qubits: usize, cap: usize) -> Result<Self> {
        if qubits > cap {
            return Err(Error::Capacity(format!(
                "{qubits} qubits exceed the simulator cap of {cap}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn simulate(circuit: &QuantumCircuit) -> Result<Statevector> {
    simulate_with_cap(circuit, DEFAULT_QUBIT_CAP)
}

pub fn simulate_with_cap(circuit: &QuantumCircuit, cap: usize) -> Result<Statevector> {
    let mut sv = Statevector::ground(circuit.qubit_count(), cap)?;
    for load in circuit.loads() {
        apply_load(&mut sv, &circuit.layout, load)?;
    }
    Ok(sv)
}

/// Expands the target group of every basis state matching the controls.
///
/// Fails if such a state already has amplitude outside the target's ground
/// state.
pub fn apply_load(sv: &mut Statevector, layout: &QubitLayout, load: &ConditionalLoad) -> Result<()> {
    let q = layout.bits_per_segment();
    let group = (1usize << q) - 1;
    let shift = layout.qubit(load.target, 0);
    let target_mask = group << shift;
    let mut fixed_mask = target_mask;
    let mut fixed_value = 0usize;
    for &(segment, value) in &load.controls {
        let s = layout.qubit(segment, 0);
        fixed_mask |= group << s;
        fixed_value |= value << s;
    }
    let free = (sv.amplitudes.len() - 1) & !fixed_mask;

    let mut sub = 0usize;
    loop {
        let base = fixed_value | sub;
        for v in 1..=group {
            if sv.amplitudes[base | (v << shift)].norm_sqr() != 0.0 {
                return Err(Error::Contract(format!(
                    "load on segment {} found basis state {} outside the target ground state",
                    load.target,
                    base | (v << shift)
                )));
            }
        }
        let a = sv.amplitudes[base];
        if a.norm_sqr() != 0.0 {
            for (v, &amp) in load.amplitudes.iter().enumerate() {
                sv.amplitudes[base | (v << shift)] = a * amp;
            }
        }
        sub = sub.wrapping_sub(free) & free;
        if sub == 0 {
            break;
        }
    }
    Ok(())
}

/// Probabilities of the layout segments' joint assignments.
pub fn exact_distribution(sv: &Statevector, layout: &QubitLayout) -> Distribution {
    let mut dist = Distribution::new(layout.segments().to_vec(), layout.bits_per_segment());
    for (index, a) in sv.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p >= PROBABILITY_FLOOR {
            dist.add(layout.decode(index), p);
        }
    }
    dist
}

/// Independent measurements of all qubits, as instances over the layout segments.
pub fn sample(
    sv: &Statevector,
    layout: &QubitLayout,
    shots: usize,
    rng: &mut RandomSource,
) -> Vec<ContentInstance> {
    let mut indices = Vec::new();
    let mut cdf = Vec::new();
    let mut acc = 0.0;
    for (index, a) in sv.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            acc += p;
            indices.push(index);
            cdf.push(acc);
        }
    }
    (0..shots)
        .map(|_| {
            let u = rng.uniform() * acc;
            let k = cdf.partition_point(|&c| c <= u).min(indices.len() - 1);
            let entries: Vec<(usize, usize)> = layout
                .segments()
                .iter()
                .copied()
                .zip(layout.decode(indices[k]))
                .collect();
            ContentInstance::from_entries(layout.total_segments(), &entries)
                .expect("layout segments are distinct and in range")
        })
        .collect()
}
