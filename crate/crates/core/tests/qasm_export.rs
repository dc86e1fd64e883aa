use qwfc_core::content::{Alphabet, ContentInstance, Pattern, Rule, Ruleset, Symbol};
use qwfc_core::corpus::checkerboard_usecase;
use qwfc_core::qwfc::{build_circuit, export_qasm, lower_to_gates, CircuitOptions};

fn n1_uniform_qasm() -> String {
    let adj = qwfc_core::content::build_grid2d(1, 1);
    let alphabet = Alphabet::new(vec![
        Symbol::new("white", '.', [255; 3]),
        Symbol::new("black", '#', [0; 3]),
    ])
    .unwrap();
    let rules = Ruleset::new(vec![
        Rule::new(0, 1.0, Pattern::empty()),
        Rule::new(1, 1.0, Pattern::empty()),
    ])
    .unwrap();
    let circuit =
        build_circuit(&adj, &alphabet, &rules, &[0], &ContentInstance::new(1), CircuitOptions::default())
            .unwrap();
    export_qasm(&lower_to_gates(&circuit), &circuit.layout)
}

#[test]
fn single_uniform_segment_matches_golden_file() {
    let golden = include_str!("golden/n1_uniform.qasm");
    assert_eq!(n1_uniform_qasm(), golden);
}

#[test]
fn checkerboard_program_has_one_statement_per_gate() {
    let uc = checkerboard_usecase(3, 3);
    let circuit = build_circuit(
        &uc.adjacency(),
        &uc.alphabet,
        &uc.ruleset,
        &uc.order().unwrap(),
        &ContentInstance::new(9),
        CircuitOptions::default(),
    )
    .unwrap();
    let gates = lower_to_gates(&circuit);
    let text = export_qasm(&gates, &circuit.layout);
    let statements = text
        .lines()
        .filter(|l| l.starts_with("x ") || l.contains("ry("))
        .count();
    assert_eq!(statements, gates.len());
    assert!(text.contains("qubit[9] q;"));
    assert!(text.ends_with("c = measure q;\n"));
}
