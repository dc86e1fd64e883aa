use std::collections::HashSet;

use crate::error::{Error, Result};

/// One value of the alphabet with the information needed to draw it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub glyph: char,
    pub color: [u8; 3],
}

impl Symbol {
    pub fn new(name: impl Into<String>, glyph: char, color: [u8; 3]) -> Self {
        Self {
            name: name.into(),
            glyph,
            color,
        }
    }
}

/// The `W` values a segment may take. Values are 0-based indices into `symbols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Invalid("alphabet must contain at least one symbol".into()));
        }
        let mut seen = HashSet::new();
        for symbol in &symbols {
            if !seen.insert(symbol.name.as_str()) {
                return Err(Error::Invalid(format!("duplicate symbol name '{}'", symbol.name)));
            }
        }
        Ok(Self { symbols })
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// Qubits per segment, `ceil(log2 W)`.
    pub fn bits_per_segment(&self) -> usize {
        bits_for(self.size())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, value: usize) -> &Symbol {
        &self.symbols[value]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

/// `ceil(log2 w)` for `w >= 1`.
pub fn bits_for(w: usize) -> usize {
    assert!(w >= 1, "alphabet size must be positive");
    (usize::BITS - (w - 1).leading_zeros()) as usize
}
