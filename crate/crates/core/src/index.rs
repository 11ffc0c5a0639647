use std::fmt;

use crate::error::{Error, Result};

/// Ordered list of distinct 1-based slice indices, each in `1..=bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
    bound: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, bound: usize) -> Result<Self> {
        let mut seen = vec![false; bound + 1];
        for &i in &indices {
            if i == 0 || i > bound {
                return Err(Error::Index(format!("index {i} outside 1..={bound}")));
            }
            if seen[i] {
                return Err(Error::Index(format!("duplicate index {i}")));
            }
            seen[i] = true;
        }
        Ok(Self { indices, bound })
    }

    /// Builds a set from 0-based positions.
    pub fn from_zero_based(positions: &[usize], bound: usize) -> Result<Self> {
        Self::new(positions.iter().map(|p| p + 1).collect(), bound)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i - 1).collect()
    }

    /// Same indices in ascending order.
    pub fn sorted(&self) -> IndexSet {
        let mut indices = self.indices.clone();
        indices.sort_unstable();
        IndexSet { indices, bound: self.bound }
    }

    pub(crate) fn check_within(&self, dim: usize, what: &str) -> Result<()> {
        match self.indices.iter().find(|&&i| i > dim) {
            Some(i) => Err(Error::Index(format!("{what} index {i} exceeds dimension {dim}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(IndexSet::new(vec![1, 2, 1], 3).is_err());
        assert!(IndexSet::new(vec![0], 3).is_err());
        assert!(IndexSet::new(vec![4], 3).is_err());
        let s = IndexSet::new(vec![3, 1], 3).unwrap();
        assert_eq!(s.zero_based(), vec![2, 0]);
        assert_eq!(s.sorted().indices(), &[1, 3]);
        assert_eq!(s.to_string(), "[3 1]");
    }
}
