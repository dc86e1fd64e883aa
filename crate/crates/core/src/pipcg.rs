//! Probabilistic iterative content generation.
//!
//! Each iteration draws an unplaced segment from an identifier selector, then a
//! value from a value selector, and appends the pair. The probability of a
//! complete instance is the sum, over every selection order that reaches it, of
//! the product of the per-step probabilities; [`exact_distribution_oracle`]
//! computes it by expanding partial instances level by level and merging equal
//! ones, which is the same sum without enumerating permutations.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::content::{
    AdjacencyConfig, ContentInstance, Distribution, Overlay, Placement, RuleModel, Ruleset,
};
use crate::error::{Error, Result};

/// Chooses which segment to place next.
///
/// Must put zero mass on placed segments and positive mass on at least one
/// unplaced segment. The iteration number is `content.len() + 1`.
pub trait IdentifierSelector {
    fn identifier_distribution(&self, content: &ContentInstance) -> Result<Vec<f64>>;
}

/// Chooses the value of the selected segment; returns `W` probabilities.
pub trait ValueSelector {
    fn alphabet_size(&self) -> usize;

    fn value_distribution(&self, segment: usize, content: &ContentInstance) -> Result<Vec<f64>>;
}

/// Seedable pseudo-random stream with an inverse-CDF categorical draw.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` derived from `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Index drawn with probability proportional to `weights`, scanning in
    /// ascending order. `None` if no weight is positive.
    pub fn categorical(&mut self, weights: &[f64]) -> Option<usize> {
        let total: f64 = weights.iter().filter(|w| **w > 0.0).sum();
        if total <= 0.0 {
            return None;
        }
        let target = self.uniform() * total;
        let mut acc = 0.0;
        let mut last = None;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                acc += w;
                last = Some(i);
                if target < acc {
                    return Some(i);
                }
            }
        }
        last
    }
}

/// Runs `segments` iterations and returns the complete instance.
pub fn pipcg_generate(
    segments: usize,
    identifiers: &dyn IdentifierSelector,
    values: &dyn ValueSelector,
    rng: &mut RandomSource,
) -> Result<ContentInstance> {
    let mut content = ContentInstance::new(segments);
    for k in 1..=segments {
        let ps = identifiers.identifier_distribution(&content)?;
        if let Some(v) = identifier_violation(&ps, &content) {
            return Err(Error::SelectorContract {
                iteration: k,
                detail: v.detail,
            });
        }
        let segment = rng.categorical(&ps).expect("checked for positive mass");
        let pv = values.value_distribution(segment, &content)?;
        if pv.len() != values.alphabet_size() {
            return Err(Error::SelectorContract {
                iteration: k,
                detail: format!(
                    "value distribution has {} entries for an alphabet of {}",
                    pv.len(),
                    values.alphabet_size()
                ),
            });
        }
        let value = rng.categorical(&pv).ok_or_else(|| Error::Conflict {
            segment,
            context: content.placed_pairs(),
        })?;
        content.push(segment, value)?;
    }
    Ok(content)
}

/// Guard on the size of exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Limit on `W^N` and on the number of partial instances kept per level.
    pub max_leaves: u64,
    /// Skip the up-front `W^N` check and rely on the per-level limit only.
    pub skip_candidate_check: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_leaves: 1_000_000,
            skip_candidate_check: false,
        }
    }
}

impl Budget {
    pub fn with_limit(max_leaves: u64) -> Self {
        Self {
            max_leaves,
            ..Self::default()
        }
    }

    /// Only the reachable-state limit applies.
    pub fn reachable_only(max_leaves: u64) -> Self {
        Self {
            max_leaves,
            skip_candidate_check: true,
        }
    }

    pub(crate) fn check_candidates(&self, alphabet_size: usize, segments: usize) -> Result<()> {
        if self.skip_candidate_check {
            return Ok(());
        }
        let mut leaves: u64 = 1;
        for _ in 0..segments {
            leaves = leaves.saturating_mul(alphabet_size as u64);
        }
        if leaves > self.max_leaves {
            return Err(Error::BudgetExceeded(format!(
                "{alphabet_size}^{segments} candidate instances exceed the limit of {}",
                self.max_leaves
            )));
        }
        Ok(())
    }

    pub(crate) fn check_states(&self, states: usize) -> Result<()> {
        if states as u64 > self.max_leaves {
            return Err(Error::BudgetExceeded(format!(
                "{states} reachable partial instances exceed the limit of {}",
                self.max_leaves
            )));
        }
        Ok(())
    }
}

/// Exact probability of every complete instance the selectors can produce.
///
/// Selectors are queried with partial instances whose entries are listed in
/// ascending segment order, so they must depend on the placed set only.
pub fn exact_distribution_oracle(
    segments: usize,
    identifiers: &dyn IdentifierSelector,
    values: &dyn ValueSelector,
    budget: Budget,
) -> Result<Distribution> {
    let w = values.alphabet_size();
    budget.check_candidates(w, segments)?;
    let mut level: BTreeMap<Vec<Option<usize>>, f64> = BTreeMap::new();
    level.insert(vec![None; segments], 1.0);
    for k in 1..=segments {
        let mut next: BTreeMap<Vec<Option<usize>>, f64> = BTreeMap::new();
        for (slots, mass) in &level {
            let content = ContentInstance::from_slots(slots);
            let ps = identifiers.identifier_distribution(&content)?;
            if let Some(v) = identifier_violation(&ps, &content) {
                return Err(Error::SelectorContract {
                    iteration: k,
                    detail: v.detail,
                });
            }
            for (segment, &p_s) in ps.iter().enumerate() {
                if p_s <= 0.0 {
                    continue;
                }
                let pv = values.value_distribution(segment, &content)?;
                if pv.iter().all(|&p| p <= 0.0) {
                    return Err(Error::Conflict {
                        segment,
                        context: content.placed_pairs(),
                    });
                }
                for (value, &p_v) in pv.iter().enumerate() {
                    if p_v <= 0.0 {
                        continue;
                    }
                    let mut child = slots.clone();
                    child[segment] = Some(value);
                    *next.entry(child).or_insert(0.0) += mass * p_s * p_v;
                }
            }
        }
        budget.check_states(next.len())?;
        level = next;
    }
    let bits = crate::content::bits_for(w);
    let mut dist = Distribution::complete(segments, bits);
    for (slots, mass) in level {
        dist.add(slots.into_iter().map(|v| v.expect("complete")).collect(), mass);
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// No identifier can be chosen twice.
    S1,
    /// At least one unplaced identifier has positive mass.
    S2,
    /// Only values from the alphabet.
    V1,
    /// At least one value has positive mass.
    V2,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    /// 1-based iteration.
    pub iteration: usize,
    pub context: Vec<(usize, usize)>,
    pub detail: String,
}

fn identifier_violation(ps: &[f64], content: &ContentInstance) -> Option<Violation> {
    let iteration = content.len() + 1;
    let fail = |condition, detail: String| {
        Some(Violation {
            condition,
            iteration,
            context: content.entries().to_vec(),
            detail,
        })
    };
    if ps.len() != content.segment_count() {
        return fail(
            Condition::S2,
            format!(
                "identifier distribution has {} entries for {} segments",
                ps.len(),
                content.segment_count()
            ),
        );
    }
    if let Some(s) = (0..ps.len()).find(|&s| content.is_placed(s) && ps[s] != 0.0) {
        return fail(
            Condition::S1,
            format!("mass {} on placed segment {s}", ps[s]),
        );
    }
    if !ps.iter().any(|&p| p > 0.0) {
        return fail(Condition::S2, "no unplaced segment has positive mass".into());
    }
    None
}

/// Walks every reachable branch and reports each condition violation.
///
/// Violating branches are reported and not expanded further.
pub fn validate_selectors(
    segments: usize,
    identifiers: &dyn IdentifierSelector,
    values: &dyn ValueSelector,
    budget: Budget,
) -> Result<Vec<Violation>> {
    let w = values.alphabet_size();
    budget.check_candidates(w, segments)?;
    let mut report = Vec::new();
    let mut level: Vec<Vec<Option<usize>>> = vec![vec![None; segments]];
    for k in 1..=segments {
        let mut next = std::collections::BTreeSet::new();
        for slots in &level {
            let content = ContentInstance::from_slots(slots);
            let ps = match identifiers.identifier_distribution(&content) {
                Ok(ps) => ps,
                Err(e) => {
                    report.push(Violation {
                        condition: Condition::S2,
                        iteration: k,
                        context: content.entries().to_vec(),
                        detail: e.to_string(),
                    });
                    continue;
                }
            };
            if let Some(v) = identifier_violation(&ps, &content) {
                report.push(v);
                continue;
            }
            for (segment, &p_s) in ps.iter().enumerate() {
                if p_s <= 0.0 {
                    continue;
                }
                let violation = |condition, detail| Violation {
                    condition,
                    iteration: k,
                    context: content.entries().to_vec(),
                    detail,
                };
                let pv = match values.value_distribution(segment, &content) {
                    Ok(pv) => pv,
                    Err(Error::Conflict { .. }) => {
                        report.push(violation(
                            Condition::V2,
                            format!("no value available for segment {segment}"),
                        ));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if pv.len() != w || pv.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                    report.push(violation(
                        Condition::V1,
                        format!("segment {segment}: malformed value distribution {pv:?}"),
                    ));
                    continue;
                }
                if !pv.iter().any(|&p| p > 0.0) {
                    report.push(violation(
                        Condition::V2,
                        format!("no value available for segment {segment}"),
                    ));
                    continue;
                }
                for (value, &p_v) in pv.iter().enumerate() {
                    if p_v > 0.0 {
                        let mut child = slots.clone();
                        child[segment] = Some(value);
                        next.insert(child);
                    }
                }
            }
        }
        budget.check_states(next.len())?;
        level = next.into_iter().collect();
    }
    Ok(report)
}

/// Places segments in a fixed order.
#[derive(Debug, Clone)]
pub struct OrderSelector {
    order: Vec<usize>,
    segments: usize,
}

impl OrderSelector {
    pub fn new(order: Vec<usize>, segments: usize) -> Self {
        Self { order, segments }
    }
}

impl IdentifierSelector for OrderSelector {
    fn identifier_distribution(&self, content: &ContentInstance) -> Result<Vec<f64>> {
        let mut ps = vec![0.0; self.segments];
        let next = self.order.get(content.len()).ok_or_else(|| Error::SelectorContract {
            iteration: content.len() + 1,
            detail: "order exhausted".into(),
        })?;
        ps[*next] = 1.0;
        Ok(ps)
    }
}

/// Pattern-based value selection, optionally conditioned on frozen content.
pub struct PatternValueSelector<'a> {
    model: &'a RuleModel<'a>,
    frozen: Option<&'a ContentInstance>,
}

impl<'a> PatternValueSelector<'a> {
    pub fn new(model: &'a RuleModel<'a>) -> Self {
        Self {
            model,
            frozen: None,
        }
    }

    pub fn with_frozen(model: &'a RuleModel<'a>, frozen: &'a ContentInstance) -> Self {
        Self {
            model,
            frozen: Some(frozen),
        }
    }

    pub fn adjacency(&self) -> &AdjacencyConfig {
        self.model.adjacency()
    }

    pub fn ruleset(&self) -> &Ruleset {
        self.model.ruleset()
    }
}

impl ValueSelector for PatternValueSelector<'_> {
    fn alphabet_size(&self) -> usize {
        self.model.alphabet_size()
    }

    fn value_distribution(&self, segment: usize, content: &ContentInstance) -> Result<Vec<f64>> {
        let dist = match self.frozen {
            Some(frozen) => self.model.distribution(segment, &Overlay::new(content, frozen))?,
            None => self.model.distribution(segment, content)?,
        };
        Ok(dist.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Uniform(usize);

    impl ValueSelector for Uniform {
        fn alphabet_size(&self) -> usize {
            self.0
        }

        fn value_distribution(&self, _: usize, _: &ContentInstance) -> Result<Vec<f64>> {
            Ok(vec![1.0 / self.0 as f64; self.0])
        }
    }

    struct Forced(usize);

    impl ValueSelector for Forced {
        fn alphabet_size(&self) -> usize {
            2
        }

        fn value_distribution(&self, _: usize, _: &ContentInstance) -> Result<Vec<f64>> {
            let mut p = vec![0.0; 2];
            p[self.0] = 1.0;
            Ok(p)
        }
    }

    /// Always offers segment 0, placed or not.
    struct Stuck(usize);

    impl IdentifierSelector for Stuck {
        fn identifier_distribution(&self, _: &ContentInstance) -> Result<Vec<f64>> {
            let mut ps = vec![0.0; self.0];
            ps[0] = 1.0;
            Ok(ps)
        }
    }

    #[test]
    fn single_forced_segment() {
        let mut rng = RandomSource::new(1);
        let c = pipcg_generate(1, &OrderSelector::new(vec![0], 1), &Forced(1), &mut rng).unwrap();
        assert_eq!(c.entries(), &[(0, 1)]);
    }

    #[test]
    fn same_seed_same_instance() {
        let ids = OrderSelector::new(vec![2, 0, 1, 3], 4);
        let a = pipcg_generate(4, &ids, &Uniform(3), &mut RandomSource::new(9)).unwrap();
        let b = pipcg_generate(4, &ids, &Uniform(3), &mut RandomSource::new(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries().iter().map(|e| e.0).collect::<Vec<_>>(), vec![2, 0, 1, 3]);
    }

    #[test]
    fn uniform_single_segment_oracle() {
        let d = exact_distribution_oracle(
            1,
            &OrderSelector::new(vec![0], 1),
            &Uniform(2),
            Budget::default(),
        )
        .unwrap();
        assert_eq!(d.get(&[0]), 0.5);
        assert_eq!(d.get(&[1]), 0.5);
    }

    #[test]
    fn placed_identifier_is_an_s1_violation_at_iteration_two() {
        let report = validate_selectors(2, &Stuck(2), &Uniform(2), Budget::default()).unwrap();
        assert!(!report.is_empty());
        assert!(report.iter().all(|v| v.condition == Condition::S1 && v.iteration == 2));
        assert!(matches!(
            pipcg_generate(2, &Stuck(2), &Uniform(2), &mut RandomSource::new(0)),
            Err(Error::SelectorContract { iteration: 2, .. })
        ));
    }

    #[test]
    fn categorical_follows_ascending_cdf() {
        let mut rng = RandomSource::new(3);
        assert_eq!(rng.categorical(&[0.0, 0.0]), None);
        assert_eq!(rng.categorical(&[0.0, 2.0, 0.0]), Some(1));
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            counts[rng.categorical(&[1.0, 0.0, 3.0]).unwrap()] += 1;
        }
        assert_eq!(counts[1], 0);
        let f = counts[2] as f64 / 30_000.0;
        assert!((f - 0.75).abs() < 0.02, "{f}");
    }

    #[test]
    fn substreams_differ_and_repeat() {
        let a: Vec<f64> = (0..4).map(|_| RandomSource::substream(5, 0).uniform()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x = RandomSource::substream(5, 0).uniform();
        let y = RandomSource::substream(5, 1).uniform();
        assert_ne!(x, y);
    }

    #[test]
    fn budget_guard_trips() {
        let ids = OrderSelector::new((0..21).collect(), 21);
        let err = exact_distribution_oracle(21, &ids, &Uniform(2), Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
        let err = exact_distribution_oracle(21, &ids, &Uniform(2), Budget::reachable_only(1000))
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
    }
}
