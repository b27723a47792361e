use std::collections::HashSet;

use crate::error::{Error, Result};

/// An injective map between index sets, `source index -> target index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    map: Vec<usize>,
    target_len: usize,
}

impl Injection {
    pub fn new(map: Vec<usize>, target_len: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        for (x, &y) in map.iter().enumerate() {
            if y >= target_len {
                return Err(Error::Structural(format!(
                    "image {y} of source point {x} is outside the target ({target_len} points)"
                )));
            }
            if !seen.insert(y) {
                return Err(Error::Structural(format!("map is not injective: {y} is hit twice")));
            }
        }
        Ok(Self { map, target_len })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect(), target_len: n }
    }

    /// The inclusion of `0..n` as the first `n` of `target_len` points.
    pub fn identity_into(n: usize, target_len: usize) -> Self {
        assert!(n <= target_len);
        Self { map: (0..n).collect(), target_len }
    }

    /// Matches source identifiers to equal target identifiers.
    pub fn by_identifier(source: &[String], target: &[String]) -> Result<Self> {
        let map = source
            .iter()
            .map(|id| {
                target
                    .iter()
                    .position(|t| t == id)
                    .ok_or_else(|| Error::Structural(format!("point `{id}` has no image")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(map, target.len())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn source_len(&self) -> usize {
        self.map.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    /// Preimage of `y`, if any.
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.map.iter().position(|&v| v == y)
    }
}
