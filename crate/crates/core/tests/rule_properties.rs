mod common;

use proptest::prelude::*;

use common::{pick, random_case, shuffled};
use qwfc_core::content::{pattern_matches, value_distribution, value_weights, Rule, Ruleset, Weight};
use qwfc_core::pipcg::RandomSource;
use qwfc_core::Error;

/// Random partial context over `n` segments.
fn context(rng: &mut RandomSource, n: usize, w: usize) -> Vec<Option<usize>> {
    (0..n)
        .map(|_| (rng.uniform() < 0.5).then(|| pick(rng, w)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn distributions_are_normalised_or_conflict(seed in any::<u64>(), ctx_seed in any::<u64>()) {
        let case = random_case(seed);
        let n = case.adjacency.segment_count();
        let w = case.alphabet.size();
        // drop the empty-pattern rule so conflicts can occur
        let rules: Vec<Rule> = case.ruleset.rules()[1..].to_vec();
        prop_assume!(!rules.is_empty());
        let ruleset = Ruleset::new(rules).unwrap();
        let mut rng = RandomSource::new(ctx_seed);
        let ctx = context(&mut rng, n, w);
        let segment = pick(&mut rng, n);
        let weights = value_weights(segment, &case.adjacency, &ruleset, w, ctx.as_slice());
        match value_distribution(segment, &case.adjacency, &ruleset, w, ctx.as_slice()) {
            Ok(p) => {
                prop_assert_eq!(p.len(), w);
                prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(p.iter().all(|&x| x >= 0.0));
            }
            Err(Error::Conflict { segment: s, .. }) => {
                prop_assert_eq!(s, segment);
                prop_assert!(weights.iter().all(|&x| x == 0.0));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn rule_order_does_not_matter(seed in any::<u64>(), ctx_seed in any::<u64>()) {
        let case = random_case(seed);
        let n = case.adjacency.segment_count();
        let w = case.alphabet.size();
        let mut rng = RandomSource::new(ctx_seed);
        let ctx = context(&mut rng, n, w);
        let segment = pick(&mut rng, n);
        let rules = case.ruleset.rules();
        let permuted = Ruleset::new(shuffled(&mut rng, rules.len()).into_iter().map(|i| rules[i].clone()).collect()).unwrap();
        let a = value_distribution(segment, &case.adjacency, &case.ruleset, w, ctx.as_slice()).unwrap();
        let b = value_distribution(segment, &case.adjacency, &permuted, w, ctx.as_slice()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn common_weight_scale_cancels(seed in any::<u64>(), ctx_seed in any::<u64>(), scale in 0.01f64..100.0) {
        let case = random_case(seed);
        let n = case.adjacency.segment_count();
        let w = case.alphabet.size();
        let mut rng = RandomSource::new(ctx_seed);
        let ctx = context(&mut rng, n, w);
        let segment = pick(&mut rng, n);
        let scaled = Ruleset::new(
            case.ruleset
                .rules()
                .iter()
                .map(|r| match r.weight {
                    Weight::Constant(u) => Rule::new(r.value, u * scale, r.pattern.clone()),
                    _ => unreachable!(),
                })
                .collect(),
        )
        .unwrap();
        let a = value_distribution(segment, &case.adjacency, &case.ruleset, w, ctx.as_slice()).unwrap();
        let b = value_distribution(segment, &case.adjacency, &scaled, w, ctx.as_slice()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn placing_more_neighbours_never_fulfils_a_pattern(seed in any::<u64>(), ctx_seed in any::<u64>()) {
        let case = random_case(seed);
        let n = case.adjacency.segment_count();
        let w = case.alphabet.size();
        let mut rng = RandomSource::new(ctx_seed);
        let ctx = context(&mut rng, n, w);
        let segment = pick(&mut rng, n);
        let extra = pick(&mut rng, n);
        let mut wider = ctx.clone();
        if wider[extra].is_none() {
            wider[extra] = Some(pick(&mut rng, w));
        }
        for rule in case.ruleset.rules() {
            let after = pattern_matches(segment, &case.adjacency, wider.as_slice(), &rule.pattern);
            let before = pattern_matches(segment, &case.adjacency, ctx.as_slice(), &rule.pattern);
            prop_assert!(!after || before);
        }
    }
}

#[test]
fn unplaced_and_missing_neighbours_are_vacuous() {
    use qwfc_core::content::{build_grid2d, Pattern};
    let adj = build_grid2d(2, 1);
    let p = Pattern::new(vec![(0, 1), (1, 1), (2, 1), (3, 1)]).unwrap();
    assert!(pattern_matches(0, &adj, [None, None].as_slice(), &p));
    assert!(pattern_matches(0, &adj, [None, Some(1)].as_slice(), &p));
    assert!(!pattern_matches(0, &adj, [None, Some(0)].as_slice(), &p));
}
