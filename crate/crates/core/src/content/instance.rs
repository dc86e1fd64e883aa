use crate::error::{Error, Result};

/// Read access to a (partial) assignment of values to segments.
pub trait Placement {
    fn value_of(&self, segment: usize) -> Option<usize>;

    /// Placed `(segment, value)` pairs, used for diagnostics.
    fn placed_pairs(&self) -> Vec<(usize, usize)>;
}

/// A partial or complete content instance: an ordered list of `(segment, value)`
/// pairs plus a direct lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContentInstance {
    entries: Vec<(usize, usize)>,
    values: Vec<Option<usize>>,
}

impl ContentInstance {
    /// Empty instance over `segments` segments.
    pub fn new(segments: usize) -> Self {
        Self {
            entries: Vec::new(),
            values: vec![None; segments],
        }
    }

    pub fn from_entries(segments: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut instance = Self::new(segments);
        for &(segment, value) in entries {
            instance.push(segment, value)?;
        }
        Ok(instance)
    }

    /// Complete instance with entries in ascending segment order.
    pub fn from_values(values: &[usize]) -> Self {
        Self {
            entries: values.iter().copied().enumerate().collect(),
            values: values.iter().map(|&v| Some(v)).collect(),
        }
    }

    /// Partial instance from a lookup table, entries in ascending segment order.
    pub fn from_slots(slots: &[Option<usize>]) -> Self {
        Self {
            entries: slots
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (i, v)))
                .collect(),
            values: slots.to_vec(),
        }
    }

    pub fn push(&mut self, segment: usize, value: usize) -> Result<()> {
        match self.values.get(segment) {
            None => Err(Error::Invalid(format!(
                "segment {segment} outside 0..{}",
                self.values.len()
            ))),
            Some(Some(_)) => Err(Error::Invalid(format!("segment {segment} placed twice"))),
            Some(None) => {
                self.values[segment] = Some(value);
                self.entries.push((segment, value));
                Ok(())
            }
        }
    }

    /// Adds all entries of `other`, which must be disjoint from `self`.
    pub fn extend_from(&mut self, other: &ContentInstance) -> Result<()> {
        for &(segment, value) in other.entries() {
            self.push(segment, value)?;
        }
        Ok(())
    }

    pub fn segment_count(&self) -> usize {
        self.values.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.len() == self.values.len()
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn slots(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn is_placed(&self, segment: usize) -> bool {
        self.values[segment].is_some()
    }

    /// Values in segment order, or `None` while incomplete.
    pub fn values(&self) -> Option<Vec<usize>> {
        self.values.iter().copied().collect()
    }
}

impl Placement for ContentInstance {
    fn value_of(&self, segment: usize) -> Option<usize> {
        self.values.get(segment).copied().flatten()
    }

    fn placed_pairs(&self) -> Vec<(usize, usize)> {
        self.entries.clone()
    }
}

impl Placement for [Option<usize>] {
    fn value_of(&self, segment: usize) -> Option<usize> {
        self.get(segment).copied().flatten()
    }

    fn placed_pairs(&self) -> Vec<(usize, usize)> {
        self.iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect()
    }
}

/// A short list of `(segment, value)` pairs, searched linearly.
#[derive(Debug, Clone, Copy)]
pub struct Pairs<'a>(pub &'a [(usize, usize)]);

impl Placement for Pairs<'_> {
    fn value_of(&self, segment: usize) -> Option<usize> {
        self.0.iter().find(|(s, _)| *s == segment).map(|&(_, v)| v)
    }

    fn placed_pairs(&self) -> Vec<(usize, usize)> {
        self.0.to_vec()
    }
}

/// Union of two disjoint placements; `front` wins on overlap.
#[derive(Debug, Clone, Copy)]
pub struct Overlay<'a, A: ?Sized, B: ?Sized> {
    pub front: &'a A,
    pub back: &'a B,
}

impl<'a, A: Placement + ?Sized, B: Placement + ?Sized> Overlay<'a, A, B> {
    pub fn new(front: &'a A, back: &'a B) -> Self {
        Self { front, back }
    }
}

impl<A: Placement + ?Sized, B: Placement + ?Sized> Placement for Overlay<'_, A, B> {
    fn value_of(&self, segment: usize) -> Option<usize> {
        self.front
            .value_of(segment)
            .or_else(|| self.back.value_of(segment))
    }

    fn placed_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = self.back.placed_pairs();
        pairs.extend(self.front.placed_pairs());
        pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_rejects_duplicates_and_out_of_range() {
        let mut c = ContentInstance::new(3);
        c.push(1, 0).unwrap();
        assert!(c.push(1, 1).is_err());
        assert!(c.push(3, 0).is_err());
        assert_eq!(c.len(), 1);
        assert!(!c.is_complete());
        assert_eq!(c.values(), None);
    }

    #[test]
    fn overlay_prefers_front() {
        let front = [(0usize, 1usize)];
        let back = ContentInstance::from_values(&[0, 2]);
        let pairs = Pairs(&front);
        let o = Overlay::new(&pairs, &back);
        assert_eq!(o.value_of(0), Some(1));
        assert_eq!(o.value_of(1), Some(2));
        assert_eq!(o.value_of(5), None);
    }
}
