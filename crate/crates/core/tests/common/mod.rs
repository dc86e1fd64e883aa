#![allow(dead_code)]

use qwfc_core::content::{AdjacencyConfig, Alphabet, Pattern, Rule, Ruleset, Symbol};
use qwfc_core::pipcg::RandomSource;

pub struct Case {
    pub adjacency: AdjacencyConfig,
    pub alphabet: Alphabet,
    pub ruleset: Ruleset,
    pub order: Vec<usize>,
}

pub fn pick(rng: &mut RandomSource, n: usize) -> usize {
    ((rng.uniform() * n as f64) as usize).min(n - 1)
}

pub fn alphabet(w: usize) -> Alphabet {
    Alphabet::new(
        (0..w)
            .map(|v| Symbol::new(format!("v{v}"), char::from(b'a' + v as u8), [v as u8; 3]))
            .collect(),
    )
    .unwrap()
}

pub fn shuffled(rng: &mut RandomSource, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, pick(rng, i + 1));
    }
    order
}

/// Random adjacency with two directions over at most four segments, random
/// patterned rules, and one empty-pattern rule so that no context conflicts.
pub fn random_case(seed: u64) -> Case {
    let mut rng = RandomSource::new(seed);
    let n = 1 + pick(&mut rng, 4);
    let w = 2 + pick(&mut rng, 3);
    let mut edges = vec![Vec::new(), Vec::new()];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for dir in &mut edges {
                    if rng.uniform() < 0.4 {
                        dir.push((i, j));
                    }
                }
            }
        }
    }
    let adjacency = AdjacencyConfig::from_edges(n, &edges).unwrap();
    let mut rules = vec![Rule::new(pick(&mut rng, w), 0.05 + rng.uniform(), Pattern::empty())];
    for _ in 0..1 + pick(&mut rng, 6) {
        let mut pairs = Vec::new();
        for d in 0..2 {
            if rng.uniform() < 0.6 {
                pairs.push((d, pick(&mut rng, w)));
            }
        }
        rules.push(Rule::new(pick(&mut rng, w), 0.1 + 3.0 * rng.uniform(), Pattern::new(pairs).unwrap()));
    }
    Case {
        adjacency,
        alphabet: alphabet(w),
        ruleset: Ruleset::new(rules).unwrap(),
        order: shuffled(&mut rng, n),
    }
}
