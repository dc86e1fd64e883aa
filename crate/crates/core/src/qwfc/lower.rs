use super::simulator::Statevector;
use super::{ConditionalLoad, QuantumCircuit, QubitLayout};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    /// RY on `target`, active when every `(qubit, polarity)` control reads `polarity`.
    Ry {
        controls: Vec<(usize, bool)>,
        target: usize,
        angle: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl GateList {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// Lowers every load to X-conjugated controls around a binary tree of
/// multi-controlled RY rotations, most significant target bit first.
pub fn lower_to_gates(circuit: &QuantumCircuit) -> GateList {
    let layout = &circuit.layout;
    let mut gates = Vec::new();
    for load in circuit.loads() {
        lower_load(layout, load, &mut gates);
    }
    GateList {
        qubits: layout.qubit_count(),
        gates,
    }
}

fn lower_load(layout: &QubitLayout, load: &ConditionalLoad, gates: &mut Vec<Gate>) {
    let q = layout.bits_per_segment();
    let mut controls = Vec::new();
    let mut flips = Vec::new();
    for &(segment, value) in &load.controls {
        for b in 0..q {
            let qubit = layout.qubit(segment, b);
            controls.push((qubit, true));
            if (value >> b) & 1 == 0 {
                flips.push(qubit);
            }
        }
    }
    let mut masses = vec![0.0; 1 << q];
    for (v, a) in load.amplitudes.iter().enumerate() {
        masses[v] = a * a;
    }
    gates.extend(flips.iter().map(|&qubit| Gate::X(qubit)));
    if q > 0 {
        tree(layout, load.target, &masses, q - 1, 0, &mut controls, gates);
    }
    gates.extend(flips.iter().map(|&qubit| Gate::X(qubit)));
}

/// Splits the values with high bits `prefix` (above `bit`) on `bit`.
fn tree(
    layout: &QubitLayout,
    target: usize,
    masses: &[f64],
    bit: usize,
    prefix: usize,
    controls: &mut Vec<(usize, bool)>,
    gates: &mut Vec<Gate>,
) {
    let span = 1 << bit;
    let start = prefix << (bit + 1);
    let left: f64 = masses[start..start + span].iter().sum();
    let right: f64 = masses[start + span..start + 2 * span].iter().sum();
    if left + right <= 0.0 {
        return;
    }
    let angle = 2.0 * right.sqrt().atan2(left.sqrt());
    let qubit = layout.qubit(target, bit);
    if angle != 0.0 {
        gates.push(Gate::Ry {
            controls: controls.clone(),
            target: qubit,
            angle,
        });
    }
    if bit == 0 {
        return;
    }
    for (branch, polarity) in [(0, false), (1, true)] {
        controls.push((qubit, polarity));
        tree(layout, target, masses, bit - 1, prefix * 2 + branch, controls, gates);
        controls.pop();
    }
}

/// Executes a gate list from `|0...0>`.
pub fn simulate_gates(list: &GateList, cap: usize) -> Result<Statevector> {
    let mut sv = Statevector::ground(list.qubits, cap)?;
    let amps = sv.amplitudes_mut();
    for gate in &list.gates {
        match gate {
            Gate::X(q) => {
                let m = 1usize << q;
                for i in 0..amps.len() {
                    if i & m == 0 {
                        amps.swap(i, i | m);
                    }
                }
            }
            Gate::Ry {
                controls,
                target,
                angle,
            } => {
                let m = 1usize << target;
                let (s, c) = (angle / 2.0).sin_cos();
                let (mut on, mut want) = (0usize, 0usize);
                for &(q, polarity) in controls {
                    on |= 1 << q;
                    if polarity {
                        want |= 1 << q;
                    }
                }
                for i in 0..amps.len() {
                    if i & m == 0 && i & on == want {
                        let (a0, a1) = (amps[i], amps[i | m]);
                        amps[i] = a0 * c - a1 * s;
                        amps[i | m] = a0 * s + a1 * c;
                    }
                }
            }
        }
    }
    Ok(sv)
}
