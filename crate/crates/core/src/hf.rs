//! Hereditarily finite pure sets.

use std::fmt;
use std::sync::Arc;

/// A hereditarily finite set over the empty set.
///
/// Elements are kept sorted and deduplicated, so derived equality is
/// extensional equality and the derived order is a total structural order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HfSet(Arc<[HfSet]>);

impl HfSet {
    pub fn empty() -> Self {
        HfSet(Arc::from(Vec::new()))
    }

    pub fn from_elements(elements: impl IntoIterator<Item = HfSet>) -> Self {
        let mut v: Vec<HfSet> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        HfSet(Arc::from(v))
    }

    /// The von Neumann natural `n = {0, ..., n-1}`.
    pub fn nat(n: usize) -> Self {
        let mut acc: Vec<HfSet> = Vec::with_capacity(n);
        for _ in 0..n {
            let next = HfSet(Arc::from(acc.clone()));
            acc.push(next);
        }
        HfSet(Arc::from(acc))
    }

    pub fn singleton(x: HfSet) -> Self {
        HfSet(Arc::from(vec![x]))
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn pair(a: HfSet, b: HfSet) -> Self {
        let left = HfSet::singleton(a.clone());
        let right = HfSet::from_elements([a, b]);
        HfSet::from_elements([left, right])
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    /// Von Neumann rank.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// Returns `Some(n)` when this set is the von Neumann natural `n`.
    pub fn as_nat(&self) -> Option<usize> {
        // Naturals sort in increasing order, so `n` lists `0, ..., n-1` in place.
        for (i, e) in self.0.iter().enumerate() {
            if e.len() != i || e.as_nat() != Some(i) {
                return None;
            }
        }
        Some(self.0.len())
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_nat() {
            return write!(f, "{n}");
        }
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
