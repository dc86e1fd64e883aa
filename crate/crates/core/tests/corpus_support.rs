use std::collections::BTreeSet;

use qwfc_core::content::{bits_for, ContentInstance, Distribution, RuleModel};
use qwfc_core::corpus::{
    checkerboard_usecase, generate_hexmap_ruleset, generate_pipes_ruleset, hexmap_usecase,
    pipes_usecase, platformer_usecase, voxel_skyline_usecase, UseCase, PIPE_PORTS,
};
use qwfc_core::cwfc::entropy_of;
use qwfc_core::hwfc::{hwfc_exact_distribution, HwfcOptions, Partitioning};
use qwfc_core::pipcg::{
    exact_distribution_oracle, validate_selectors, Budget, OrderSelector, PatternValueSelector,
};
use qwfc_core::qwfc::{build_circuit, dependency_set, exact_distribution, simulate, CircuitOptions};
use qwfc_core::topology::PartitionSpec;

fn oracle(uc: &UseCase) -> Distribution {
    let adj = uc.adjacency();
    let n = adj.segment_count();
    let model = RuleModel::new(&adj, &uc.ruleset, uc.alphabet.size());
    exact_distribution_oracle(
        n,
        &OrderSelector::new(uc.order().unwrap(), n),
        &PatternValueSelector::new(&model),
        Budget::default(),
    )
    .unwrap()
}

fn quantum(uc: &UseCase) -> Distribution {
    let adj = uc.adjacency();
    let circuit = build_circuit(
        &adj,
        &uc.alphabet,
        &uc.ruleset,
        &uc.order().unwrap(),
        &ContentInstance::new(adj.segment_count()),
        CircuitOptions::default(),
    )
    .unwrap();
    exact_distribution(&simulate(&circuit).unwrap(), &circuit.layout)
}

/// Every instance in `0..W^N`, in canonical order.
fn all_instances(w: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = w.pow(n as u32);
    (0..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let v = k % w;
                k /= w;
                v
            })
            .collect()
    })
}

fn assert_validator_matches_support(uc: &UseCase) {
    let dist = oracle(uc);
    let support: BTreeSet<Vec<usize>> = dist.support().cloned().collect();
    let accepted: BTreeSet<Vec<usize>> = all_instances(uc.alphabet.size(), uc.segment_count())
        .filter(|v| uc.validate(v).is_empty())
        .collect();
    assert_eq!(accepted, support, "{}", uc.name);
    assert!((dist.total_mass() - 1.0).abs() < 1e-10);
}

#[test]
fn validators_accept_exactly_the_support() {
    assert_validator_matches_support(&checkerboard_usecase(3, 3));
    assert_validator_matches_support(&checkerboard_usecase(1, 1));
    assert_validator_matches_support(&pipes_usecase(2, 2));
    assert_validator_matches_support(&hexmap_usecase(1, 5.0));
    assert_validator_matches_support(&voxel_skyline_usecase(2, 1, 3));
    assert_validator_matches_support(&platformer_usecase(2, 3));
    assert_validator_matches_support(&platformer_usecase(1, 5));
}

#[test]
fn documented_orders_satisfy_the_selector_conditions() {
    for uc in [
        checkerboard_usecase(3, 3),
        pipes_usecase(2, 2),
        hexmap_usecase(1, 5.0),
        voxel_skyline_usecase(2, 1, 3),
        platformer_usecase(2, 3),
    ] {
        let adj = uc.adjacency();
        let n = adj.segment_count();
        let model = RuleModel::new(&adj, &uc.ruleset, uc.alphabet.size());
        let report = validate_selectors(
            n,
            &OrderSelector::new(uc.order().unwrap(), n),
            &PatternValueSelector::new(&model),
            Budget::default(),
        )
        .unwrap();
        assert!(report.is_empty(), "{}: {report:?}", uc.name);
    }
}

#[test]
fn quantum_matches_oracle_on_small_corpus_cases() {
    for uc in [
        checkerboard_usecase(3, 3),
        checkerboard_usecase(2, 2),
        pipes_usecase(2, 2),
        hexmap_usecase(1, 5.0),
        voxel_skyline_usecase(1, 1, 4),
        platformer_usecase(2, 3),
    ] {
        assert!(quantum(&uc).max_abs_diff(&oracle(&uc)) < 1e-10, "{}", uc.name);
    }
}

#[test]
fn checkerboard_two_by_two_support() {
    let d = quantum(&checkerboard_usecase(2, 2));
    let support: Vec<_> = d.support().cloned().collect();
    assert_eq!(support, vec![vec![0, 1, 1, 0], vec![1, 0, 0, 1]]);
    let single = quantum(&checkerboard_usecase(1, 1));
    assert!((single.get(&[0]) - 0.5).abs() < 1e-12);
    assert!((single.get(&[1]) - 0.5).abs() < 1e-12);
}

#[test]
fn pipes_rule_count_matches_brute_force() {
    // every (centre, right, up, left, down) tuple with matching facing ports
    let port = |t: usize, d: usize| PIPE_PORTS[t] >> d & 1;
    let mut count = 0;
    for t in all_instances(8, 5) {
        if (0..4).all(|d| port(t[0], d) == port(t[1 + d], (d + 2) % 4)) {
            count += 1;
        }
    }
    assert_eq!(count, 2048);
    assert_eq!(generate_pipes_ruleset().len(), count);
}

#[test]
fn hexmap_rule_count_and_single_cell_weights_match_brute_force() {
    let mut count = 0;
    let mut weight = [0.0f64; 4];
    for t in all_instances(4, 7) {
        if t[1..].iter().all(|&v| v.abs_diff(t[0]) <= 1) {
            count += 1;
            weight[t[0]] += if t[0] == 0 { 5.0 } else { 1.0 };
        }
    }
    assert_eq!(count, 1586);
    assert_eq!(generate_hexmap_ruleset(5.0).len(), count);
    assert_eq!(weight, [320.0, 729.0, 729.0, 64.0]);

    let d = quantum(&hexmap_usecase(0, 5.0));
    let total: f64 = weight.iter().sum();
    for (v, w) in weight.iter().enumerate() {
        assert!((d.get(&[v]) - w / total).abs() < 1e-12);
    }
    let p: Vec<f64> = weight.iter().map(|x| x / total).collect();
    let h = entropy_of(&p);
    let direct = -(320.0 / 1842.0f64) * (320.0 / 1842.0f64).ln()
        - 2.0 * (729.0 / 1842.0f64) * (729.0 / 1842.0f64).ln()
        - (64.0 / 1842.0f64) * (64.0 / 1842.0f64).ln();
    assert!((h - direct).abs() < 1e-12);
}

#[test]
fn pipes_load_count_matches_reachable_projections() {
    let uc = pipes_usecase(2, 2);
    let adj = uc.adjacency();
    let order = uc.order().unwrap();
    let circuit = build_circuit(
        &adj,
        &uc.alphabet,
        &uc.ruleset,
        &order,
        &ContentInstance::new(4),
        CircuitOptions::default(),
    )
    .unwrap();
    let dist = oracle(&uc);
    let mut expected = 0;
    for k in 0..order.len() {
        let deps = dependency_set(k, &order, &adj, &uc.ruleset);
        let projections: BTreeSet<Vec<usize>> = dist
            .support()
            .map(|values| deps.iter().map(|&s| values[s]).collect())
            .collect();
        expected += projections.len();
    }
    assert_eq!(circuit.load_count(), expected);
    // the last cell's left and upper neighbours only meet through the first
    // cell, whose four port combinations leave every pair of tiles reachable
    assert_eq!(circuit.iterations[3].loads.len(), 64);
}

#[test]
fn hybrid_factorisation_identity() {
    let opts = HwfcOptions::default();
    for (uc, spec) in [
        (checkerboard_usecase(2, 2), PartitionSpec::Rows(2)),
        (hexmap_usecase(1, 5.0), PartitionSpec::Chunks(2)),
        (hexmap_usecase(1, 5.0), PartitionSpec::Rows(3)),
        (platformer_usecase(2, 3), PartitionSpec::Layers(6)),
    ] {
        let adj = uc.adjacency();
        let order = uc.order().unwrap();
        let parts = uc.topology.partition(&spec, &order).unwrap();
        let plain = {
            let circuit = build_circuit(
                &adj,
                &uc.alphabet,
                &uc.ruleset,
                &parts.concatenated(),
                &ContentInstance::new(adj.segment_count()),
                CircuitOptions::default(),
            )
            .unwrap();
            exact_distribution(&simulate(&circuit).unwrap(), &circuit.layout)
        };
        let hybrid =
            hwfc_exact_distribution(&adj, &uc.alphabet, &uc.ruleset, &parts, Budget::default(), opts)
                .unwrap();
        assert!(hybrid.max_abs_diff(&plain) < 1e-12, "{} {spec}", uc.name);
        assert!((hybrid.total_mass() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn single_partition_hybrid_equals_plain_support() {
    let uc = hexmap_usecase(1, 5.0);
    let adj = uc.adjacency();
    let single = Partitioning::single(uc.order().unwrap());
    let hybrid = hwfc_exact_distribution(
        &adj,
        &uc.alphabet,
        &uc.ruleset,
        &single,
        Budget::default(),
        HwfcOptions::default(),
    )
    .unwrap();
    let plain = quantum(&uc);
    let a: Vec<_> = hybrid.support().collect();
    let b: Vec<_> = plain.support().collect();
    assert_eq!(a, b);
    assert_eq!(bits_for(uc.alphabet.size()), 2);
}

#[test]
fn voxel_column_can_stay_empty() {
    let d = oracle(&voxel_skyline_usecase(1, 1, 3));
    assert!(d.get(&[0, 0, 0]) > 0.0);
    assert!((d.get(&[0, 0, 0]) - 0.5).abs() < 1e-12);
    assert_eq!(d.get(&[0, 1, 0]), 0.0);
}

#[test]
fn corpus_rule_counts() {
    assert_eq!(checkerboard_usecase(3, 3).ruleset.len(), 2);
    assert_eq!(pipes_usecase(10, 4).ruleset.len(), 2048);
    assert_eq!(hexmap_usecase(3, 5.0).ruleset.len(), 1586);
    assert_eq!(platformer_usecase(10, 10).ruleset.len(), 15);
    assert_eq!(voxel_skyline_usecase(4, 4, 4).ruleset.len(), 4);
}
