//! Classical wave function collapse: place a segment of minimal Shannon
//! entropy, draw its value from the pattern rules, restart on conflict.

use crate::content::{Alphabet, AdjacencyConfig, ContentInstance, Placement, RuleModel, Ruleset};
use crate::error::{Error, Result};
use crate::pipcg::{pipcg_generate, IdentifierSelector, PatternValueSelector, RandomSource};

/// Entropies closer than this count as equal when collecting minimisers.
pub const ENTROPY_TIE_TOLERANCE: f64 = 1e-12;

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy_of(probabilities: &[f64]) -> f64 {
    -probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Entropy of an unplaced segment's value distribution.
pub fn shannon_entropy<P: Placement + ?Sized>(
    segment: usize,
    model: &RuleModel<'_>,
    context: &P,
) -> Result<f64> {
    Ok(entropy_of(&model.distribution(segment, context)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    /// `(segment, entropy)` for every unplaced segment, ascending by segment.
    pub entropies: Vec<(usize, f64)>,
    /// Segments attaining the minimum.
    pub minimizers: Vec<usize>,
}

pub fn entropy_report(model: &RuleModel<'_>, content: &ContentInstance) -> Result<EntropyReport> {
    let mut entropies = Vec::new();
    for segment in 0..content.segment_count() {
        if !content.is_placed(segment) {
            entropies.push((segment, shannon_entropy(segment, model, content)?));
        }
    }
    let min = entropies
        .iter()
        .map(|&(_, h)| h)
        .fold(f64::INFINITY, f64::min);
    let minimizers = entropies
        .iter()
        .filter(|&&(_, h)| h - min <= ENTROPY_TIE_TOLERANCE)
        .map(|&(s, _)| s)
        .collect();
    Ok(EntropyReport {
        entropies,
        minimizers,
    })
}

/// Uniform over the unplaced segments of minimal entropy.
pub struct EntropySelector<'a> {
    model: &'a RuleModel<'a>,
}

impl<'a> EntropySelector<'a> {
    pub fn new(model: &'a RuleModel<'a>) -> Self {
        Self { model }
    }
}

impl IdentifierSelector for EntropySelector<'_> {
    fn identifier_distribution(&self, content: &ContentInstance) -> Result<Vec<f64>> {
        let report = entropy_report(self.model, content)?;
        let mut ps = vec![0.0; content.segment_count()];
        let share = 1.0 / report.minimizers.len() as f64;
        for s in report.minimizers {
            ps[s] = share;
        }
        Ok(ps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwfcRun {
    pub instance: ContentInstance,
    /// Conflicts that forced a fresh start before success.
    pub restarts: usize,
}

pub const DEFAULT_MAX_RESTARTS: usize = 100;

/// Generates one instance, restarting from scratch after a conflict at most
/// `max_restarts` times.
pub fn cwfc_generate(
    adjacency: &AdjacencyConfig,
    alphabet: &Alphabet,
    ruleset: &Ruleset,
    rng: &mut RandomSource,
    max_restarts: usize,
) -> Result<CwfcRun> {
    ruleset.check(alphabet.size(), adjacency)?;
    let model = RuleModel::new(adjacency, ruleset, alphabet.size());
    let identifiers = EntropySelector::new(&model);
    let values = PatternValueSelector::new(&model);
    let mut restarts = 0;
    loop {
        match pipcg_generate(adjacency.segment_count(), &identifiers, &values, rng) {
            Ok(instance) => return Ok(CwfcRun { instance, restarts }),
            Err(e) if e.is_conflict() => {
                if restarts == max_restarts {
                    return Err(Error::ExhaustedRestarts {
                        restarts,
                        last: Box::new(e),
                    });
                }
                restarts += 1;
            }
            Err(e) => return Err(e),
        }
    }
}
