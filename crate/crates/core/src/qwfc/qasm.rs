use std::fmt::Write;

use super::lower::{Gate, GateList};
use super::QubitLayout;

/// OpenQASM 3 program: the gates in order, then a measurement of every qubit.
///
/// Negative-polarity controls use `negctrl @`; angles print as shortest
/// round-trip decimals so output is byte-stable.
pub fn export_qasm(list: &GateList, layout: &QubitLayout) -> String {
    let mut out = String::new();
    let q = layout.bits_per_segment();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let _ = writeln!(
        out,
        "// segments: {}, bits per segment: {q}, qubits: {}",
        layout.segments().len(),
        list.qubits
    );
    let _ = writeln!(out, "// value v of a segment is stored little-endian in its group");
    for &s in layout.segments() {
        if q > 0 {
            let first = layout.qubit(s, 0);
            let _ = writeln!(out, "// segment {s}: q[{first}..{}]", first + q - 1);
        }
    }
    let _ = writeln!(out, "qubit[{}] q;", list.qubits);
    let _ = writeln!(out, "bit[{}] c;", list.qubits);
    for gate in &list.gates {
        match gate {
            Gate::X(t) => {
                let _ = writeln!(out, "x q[{t}];");
            }
            Gate::Ry {
                controls,
                target,
                angle,
            } => {
                for &(_, polarity) in controls {
                    out.push_str(if polarity { "ctrl @ " } else { "negctrl @ " });
                }
                let _ = write!(out, "ry({angle:?})");
                for &(c, _) in controls {
                    let _ = write!(out, " q[{c}],");
                }
                let _ = writeln!(out, " q[{target}];");
            }
        }
    }
    out.push_str("c = measure q;\n");
    out
}
