mod common;

use proptest::prelude::*;

use common::random_case;
use qwfc_core::content::{ContentInstance, RuleModel};
use qwfc_core::pipcg::{exact_distribution_oracle, Budget, OrderSelector, PatternValueSelector};
use qwfc_core::qwfc::{
    apply_load, build_circuit, exact_distribution, lower_to_gates, simulate, simulate_gates,
    CircuitOptions, QubitLayout, Statevector, DEFAULT_QUBIT_CAP,
};

fn circuit_for(case: &common::Case) -> qwfc_core::qwfc::QuantumCircuit {
    build_circuit(
        &case.adjacency,
        &case.alphabet,
        &case.ruleset,
        &case.order,
        &ContentInstance::new(case.adjacency.segment_count()),
        CircuitOptions::default(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simulator_matches_chain_rule_oracle(seed in any::<u64>()) {
        let case = random_case(seed);
        let n = case.adjacency.segment_count();
        let circuit = circuit_for(&case);
        let quantum = exact_distribution(&simulate(&circuit).unwrap(), &circuit.layout);

        let model = RuleModel::new(&case.adjacency, &case.ruleset, case.alphabet.size());
        let classical = exact_distribution_oracle(
            n,
            &OrderSelector::new(case.order.clone(), n),
            &PatternValueSelector::new(&model),
            Budget::default(),
        )
        .unwrap();
        prop_assert!(quantum.max_abs_diff(&classical) < 1e-10);
    }

    #[test]
    fn every_load_preserves_the_norm(seed in any::<u64>()) {
        let case = random_case(seed);
        let circuit = circuit_for(&case);
        let mut sv = Statevector::ground(circuit.qubit_count(), DEFAULT_QUBIT_CAP).unwrap();
        for load in circuit.loads() {
            let total: f64 = load.amplitudes.iter().map(|a| a * a).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(load.controls.iter().all(|c| c.0 != load.target));
            apply_load(&mut sv, &circuit.layout, load).unwrap();
            prop_assert!((sv.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lowered_gates_reproduce_the_circuit(seed in any::<u64>()) {
        let case = random_case(seed);
        let circuit = circuit_for(&case);
        let want = exact_distribution(&simulate(&circuit).unwrap(), &circuit.layout);
        let gates = lower_to_gates(&circuit);
        let got = exact_distribution(&simulate_gates(&gates, DEFAULT_QUBIT_CAP).unwrap(), &circuit.layout);
        prop_assert!(got.max_abs_diff(&want) < 1e-9);
    }

    #[test]
    fn qubit_count_is_segments_times_bits(seed in any::<u64>()) {
        let case = random_case(seed);
        let circuit = circuit_for(&case);
        let n = case.adjacency.segment_count();
        let q = (case.alphabet.size() as f64).log2().ceil() as usize;
        prop_assert_eq!(circuit.qubit_count(), n * q);
        prop_assert_eq!(circuit.layout, QubitLayout::full(n, q));
    }

    #[test]
    fn loads_within_an_iteration_are_exclusive(seed in any::<u64>()) {
        let case = random_case(seed);
        let circuit = circuit_for(&case);
        for (k, it) in circuit.iterations.iter().enumerate() {
            prop_assert_eq!(it.target, case.order[k]);
            let earlier = &case.order[..k];
            prop_assert!(it.dependencies.iter().all(|d| earlier.contains(d)));
            let mut seen = std::collections::BTreeSet::new();
            for load in &it.loads {
                prop_assert_eq!(load.controls.iter().map(|c| c.0).collect::<Vec<_>>(), it.dependencies.clone());
                prop_assert!(seen.insert(load.controls.clone()));
            }
        }
    }
}
