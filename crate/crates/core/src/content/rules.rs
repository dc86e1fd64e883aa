use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::adjacency::AdjacencyConfig;
use super::instance::Placement;
use crate::error::{Error, Result};

/// A set of `(direction, value)` requirements on a segment's neighbours.
///
/// Directions are pairwise distinct; pairs are kept sorted by direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Pattern {
    pairs: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid(format!(
                "pattern {pairs:?} repeats a direction"
            )));
        }
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn requirement(&self, direction: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|(d, _)| *d == direction)
            .map(|&(_, v)| v)
    }
}

/// Named segment-dependent weight `u(i, C')`.
///
/// The registry entries depend on the segment's layer only (layer 0 is the
/// bottom row of a picture or the ground layer of a voxel grid):
///
/// * `bottom_rows_only(u, rows)`: `u` on the lowest `rows` layers, zero above.
/// * `band(u, bottom, top)`: `u` except on the lowest `bottom` and the highest
///   `top` layers, where it vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalFactor {
    kind: FactorKind,
    u: f64,
    active: Arc<[bool]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    BottomRowsOnly { rows: usize },
    Band { bottom: usize, top: usize },
}

impl FunctionalFactor {
    /// `layers[i]` is the layer of segment `i`, `height` the number of layers.
    pub fn new(kind: FactorKind, u: f64, layers: &[usize], height: usize) -> Result<Self> {
        if !(u.is_finite() && u >= 0.0) {
            return Err(Error::Invalid(format!("functional factor weight {u} must be finite and >= 0")));
        }
        let active = layers
            .iter()
            .map(|&layer| match kind {
                FactorKind::BottomRowsOnly { rows } => layer < rows,
                FactorKind::Band { bottom, top } => layer >= bottom && layer + top < height,
            })
            .collect();
        Ok(Self { kind, u, active })
    }

    /// Parses the textual form, e.g. `"band(0.1, 1, 1)"`.
    pub fn parse(spec: &str, layers: &[usize], height: usize) -> Result<Self> {
        let bad = || Error::Invalid(format!("unrecognised functional factor '{spec}'"));
        let spec_trim = spec.trim();
        let open = spec_trim.find('(').ok_or_else(bad)?;
        if !spec_trim.ends_with(')') {
            return Err(bad());
        }
        let name = spec_trim[..open].trim();
        let args: Vec<&str> = spec_trim[open + 1..spec_trim.len() - 1]
            .split(',')
            .map(str::trim)
            .collect();
        let u: f64 = args.first().and_then(|a| a.parse().ok()).ok_or_else(bad)?;
        let int = |k: usize| -> Result<usize> {
            args.get(k).and_then(|a| a.parse().ok()).ok_or_else(bad)
        };
        let kind = match (name, args.len()) {
            ("bottom_rows_only", 2) => FactorKind::BottomRowsOnly { rows: int(1)? },
            ("band", 3) => FactorKind::Band {
                bottom: int(1)?,
                top: int(2)?,
            },
            _ => return Err(bad()),
        };
        Self::new(kind, u, layers, height)
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn base(&self) -> f64 {
        self.u
    }

    pub fn segment_count(&self) -> usize {
        self.active.len()
    }

    pub fn eval<P: Placement + ?Sized>(&self, segment: usize, _context: &P) -> f64 {
        if self.active[segment] {
            self.u
        } else {
            0.0
        }
    }
}

impl fmt::Display for FunctionalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::BottomRowsOnly { rows } => write!(f, "bottom_rows_only({:?}, {rows})", self.u),
            FactorKind::Band { bottom, top } => write!(f, "band({:?}, {bottom}, {top})", self.u),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Constant(f64),
    Functional(FunctionalFactor),
}

impl Weight {
    pub fn eval<P: Placement + ?Sized>(&self, segment: usize, context: &P) -> f64 {
        match self {
            Weight::Constant(u) => *u,
            Weight::Functional(f) => f.eval(segment, context),
        }
    }
}

/// Selects `value` with weight `u` whenever `pattern` is fulfilled.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub value: usize,
    pub weight: Weight,
    pub pattern: Pattern,
}

impl Rule {
    pub fn new(value: usize, u: f64, pattern: Pattern) -> Self {
        Self {
            value,
            weight: Weight::Constant(u),
            pattern,
        }
    }

    pub fn functional(value: usize, factor: FunctionalFactor, pattern: Pattern) -> Self {
        Self {
            value,
            weight: Weight::Functional(factor),
            pattern,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ruleset {
    rules: Vec<Rule>,
}

impl Ruleset {
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::Invalid("a ruleset needs at least one rule".into()));
        }
        Ok(Self { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Union of the directions referenced by any pattern, ascending.
    pub fn pattern_directions(&self) -> Vec<usize> {
        self.rules
            .iter()
            .flat_map(|r| r.pattern.pairs().iter().map(|&(d, _)| d))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Checks values, directions and weights against an alphabet size and adjacency.
    pub fn check(&self, alphabet_size: usize, adjacency: &AdjacencyConfig) -> Result<()> {
        for (k, rule) in self.rules.iter().enumerate() {
            if rule.value >= alphabet_size {
                return Err(Error::Invalid(format!(
                    "rule {k}: value {} outside alphabet of size {alphabet_size}",
                    rule.value
                )));
            }
            for &(d, v) in rule.pattern.pairs() {
                if d >= adjacency.direction_count() {
                    return Err(Error::Invalid(format!(
                        "rule {k}: direction {d} outside 0..{}",
                        adjacency.direction_count()
                    )));
                }
                if v >= alphabet_size {
                    return Err(Error::Invalid(format!(
                        "rule {k}: pattern value {v} outside alphabet of size {alphabet_size}"
                    )));
                }
            }
            match &rule.weight {
                Weight::Constant(u) if !(u.is_finite() && *u > 0.0) => {
                    return Err(Error::Invalid(format!(
                        "rule {k}: constant weight {u} must be finite and > 0"
                    )));
                }
                Weight::Functional(f) if f.segment_count() != adjacency.segment_count() => {
                    return Err(Error::Invalid(format!(
                        "rule {k}: functional factor covers {} segments, adjacency has {}",
                        f.segment_count(),
                        adjacency.segment_count()
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Pattern indicator: `true` iff every placed neighbour referenced by the
/// pattern carries the required value. Unplaced or missing neighbours impose
/// no constraint.
pub fn pattern_matches<P: Placement + ?Sized>(
    segment: usize,
    adjacency: &AdjacencyConfig,
    context: &P,
    pattern: &Pattern,
) -> bool {
    pattern.pairs().iter().all(|&(d, v)| {
        adjacency
            .neighbors(d, segment)
            .iter()
            .all(|&s| context.value_of(s).is_none_or(|placed| placed == v))
    })
}

/// Unnormalised weights `F(v)`: the summed weights of all fulfilled rules per value.
pub fn value_weights<P: Placement + ?Sized>(
    segment: usize,
    adjacency: &AdjacencyConfig,
    ruleset: &Ruleset,
    alphabet_size: usize,
    context: &P,
) -> Vec<f64> {
    let mut weights = vec![0.0; alphabet_size];
    for rule in ruleset.rules() {
        if pattern_matches(segment, adjacency, context, &rule.pattern) {
            weights[rule.value] += rule.weight.eval(segment, context);
        }
    }
    weights
}

/// Pattern-based value distribution `F(v) / sum F` for an unplaced segment.
///
/// The context is everything already placed, including any frozen content
/// (compose with [`Overlay`](super::Overlay)). Fails with `Conflict` if no
/// value has positive weight.
pub fn value_distribution<P: Placement + ?Sized>(
    segment: usize,
    adjacency: &AdjacencyConfig,
    ruleset: &Ruleset,
    alphabet_size: usize,
    context: &P,
) -> Result<Vec<f64>> {
    let weights = value_weights(segment, adjacency, ruleset, alphabet_size, context);
    normalize(weights).ok_or_else(|| Error::Conflict {
        segment,
        context: context.placed_pairs(),
    })
}

fn normalize(mut weights: Vec<f64>) -> Option<Vec<f64>> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return None;
    }
    for w in &mut weights {
        *w /= total;
    }
    Some(weights)
}

/// Value distributions of one ruleset on one adjacency, memoised on the
/// values of each segment's pattern-relevant neighbours.
///
/// Registry factors depend on the segment only, so the neighbourhood is a
/// complete cache key.
/// Cached distribution per segment and watched-neighbour values; `None` marks a conflict.
type DistributionCache = Mutex<HashMap<(usize, Vec<Option<usize>>), Option<Arc<[f64]>>>>;

pub struct RuleModel<'a> {
    adjacency: &'a AdjacencyConfig,
    ruleset: &'a Ruleset,
    alphabet_size: usize,
    watched: Vec<Vec<usize>>,
    cache: DistributionCache,
}

impl<'a> RuleModel<'a> {
    pub fn new(adjacency: &'a AdjacencyConfig, ruleset: &'a Ruleset, alphabet_size: usize) -> Self {
        let directions = ruleset.pattern_directions();
        let watched = (0..adjacency.segment_count())
            .map(|i| {
                directions
                    .iter()
                    .flat_map(|&d| adjacency.neighbors(d, i).iter().copied())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            })
            .collect();
        Self {
            adjacency,
            ruleset,
            alphabet_size,
            watched,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn adjacency(&self) -> &'a AdjacencyConfig {
        self.adjacency
    }

    pub fn ruleset(&self) -> &'a Ruleset {
        self.ruleset
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Segments whose values can influence `segment`'s distribution.
    pub fn watched(&self, segment: usize) -> &[usize] {
        &self.watched[segment]
    }

    pub fn distribution<P: Placement + ?Sized>(
        &self,
        segment: usize,
        context: &P,
    ) -> Result<Arc<[f64]>> {
        let key = (
            segment,
            self.watched[segment]
                .iter()
                .map(|&s| context.value_of(s))
                .collect::<Vec<_>>(),
        );
        let cached = self.cache.lock().unwrap().get(&key).cloned();
        let entry = match cached {
            Some(entry) => entry,
            None => {
                let weights = value_weights(
                    segment,
                    self.adjacency,
                    self.ruleset,
                    self.alphabet_size,
                    context,
                );
                let entry: Option<Arc<[f64]>> = normalize(weights).map(Into::into);
                self.cache.lock().unwrap().insert(key, entry.clone());
                entry
            }
        };
        entry.ok_or_else(|| Error::Conflict {
            segment,
            context: context.placed_pairs(),
        })
    }
}
