use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::instance::ContentInstance;

/// Canonical integer of an assignment: segment `k` of the list owns bits
/// `k*q .. (k+1)*q` and stores its 0-based value little-endian.
pub fn canonical_integer(values: &[usize], bits_per_segment: usize) -> BigUint {
    let mut n = BigUint::default();
    for (k, &v) in values.iter().enumerate() {
        for b in 0..bits_per_segment {
            if (v >> b) & 1 == 1 {
                n.set_bit((k * bits_per_segment + b) as u64, true);
            }
        }
    }
    n
}

/// Inverse of [`canonical_integer`] for `count` segments.
pub fn decode_canonical(n: &BigUint, count: usize, bits_per_segment: usize) -> Vec<usize> {
    (0..count)
        .map(|k| {
            (0..bits_per_segment)
                .filter(|&b| n.bit((k * bits_per_segment + b) as u64))
                .map(|b| 1usize << b)
                .sum()
        })
        .collect()
}

/// Probability mass over assignments of a fixed list of segments.
///
/// Keys are value vectors aligned with `segments()`. A distribution over all
/// segments `0..N` describes complete content instances.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    segments: Vec<usize>,
    bits_per_segment: usize,
    probs: BTreeMap<Vec<usize>, f64>,
}

impl Distribution {
    pub fn new(segments: Vec<usize>, bits_per_segment: usize) -> Self {
        Self {
            segments,
            bits_per_segment,
            probs: BTreeMap::new(),
        }
    }

    /// Distribution over all segments `0..n`.
    pub fn complete(n: usize, bits_per_segment: usize) -> Self {
        Self::new((0..n).collect(), bits_per_segment)
    }

    /// Relative frequencies of complete instances.
    pub fn empirical<'a>(
        n: usize,
        bits_per_segment: usize,
        samples: impl IntoIterator<Item = &'a ContentInstance>,
    ) -> Self {
        let mut dist = Self::complete(n, bits_per_segment);
        let mut count = 0usize;
        for s in samples {
            let values = s.values().expect("empirical distribution needs complete instances");
            *dist.probs.entry(values).or_insert(0.0) += 1.0;
            count += 1;
        }
        for p in dist.probs.values_mut() {
            *p /= count as f64;
        }
        dist
    }

    pub fn segments(&self) -> &[usize] {
        &self.segments
    }

    pub fn bits_per_segment(&self) -> usize {
        self.bits_per_segment
    }

    pub fn add(&mut self, values: Vec<usize>, p: f64) {
        debug_assert_eq!(values.len(), self.segments.len());
        *self.probs.entry(values).or_insert(0.0) += p;
    }

    pub fn get(&self, values: &[usize]) -> f64 {
        self.probs.get(values).copied().unwrap_or(0.0)
    }

    /// Probability by canonical integer.
    pub fn get_integer(&self, n: u64) -> f64 {
        let values = decode_canonical(&BigUint::from(n), self.segments.len(), self.bits_per_segment);
        self.get(&values)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, f64)> {
        self.probs.iter().map(|(k, &p)| (k, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.probs.iter().filter(|(_, &p)| p > 0.0).map(|(k, _)| k)
    }

    /// `(canonical integer, values, probability)` sorted by integer.
    pub fn by_integer(&self) -> Vec<(BigUint, &[usize], f64)> {
        let mut rows: Vec<_> = self
            .probs
            .iter()
            .map(|(k, &p)| (canonical_integer(k, self.bits_per_segment), k.as_slice(), p))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows
    }

    /// Largest elementwise difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &p) in &self.probs {
            worst = worst.max((p - other.get(k)).abs());
        }
        for (k, &p) in &other.probs {
            if !self.probs.contains_key(k) {
                worst = worst.max(p.abs());
            }
        }
        worst
    }

    /// The complete instance for a key of a distribution over `0..N`.
    pub fn instance(&self, values: &[usize]) -> ContentInstance {
        let n = self.segments.iter().max().map_or(0, |m| m + 1);
        let entries: Vec<_> = self.segments.iter().copied().zip(values.iter().copied()).collect();
        ContentInstance::from_entries(n, &entries).expect("distribution keys are consistent")
    }
}
