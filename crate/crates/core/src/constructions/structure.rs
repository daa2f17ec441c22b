//! Finite relational structures and brute-force homogeneity.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest universe accepted; automorphism and homogeneity checks enumerate all permutations.
pub const MAX_STRUCTURE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite relational structure on `{0, …, size-1}` with its automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinStructure {
    size: usize,
    relations: Vec<Relation>,
    automorphisms: Vec<Vec<usize>>,
}

impl FinStructure {
    pub fn new(size: usize, relations: Vec<Relation>) -> Result<Self> {
        if size == 0 || size > MAX_STRUCTURE {
            return Err(Error::InvalidSpec(format!(
                "structure size must be between 1 and {MAX_STRUCTURE}, got {size}"
            )));
        }
        let mut names = BTreeSet::new();
        for r in &relations {
            if !names.insert(r.name.as_str()) {
                return Err(Error::InvalidSpec(format!("relation {} declared twice", r.name)));
            }
            if r.arity == 0 {
                return Err(Error::InvalidSpec(format!("relation {} has arity 0", r.name)));
            }
            for t in &r.tuples {
                if t.len() != r.arity || t.iter().any(|&m| m >= size) {
                    return Err(Error::InvalidSpec(format!("relation {} has a malformed tuple {t:?}", r.name)));
                }
            }
        }
        let automorphisms = (0..size)
            .permutations(size)
            .filter(|perm| {
                relations.iter().all(|r| {
                    r.tuples.iter().all(|t| r.tuples.contains(&t.iter().map(|&m| perm[m]).collect::<Vec<_>>()))
                })
            })
            .collect();
        Ok(FinStructure { size, relations, automorphisms })
    }

    /// The structure with no relations.
    pub fn pure_set(size: usize) -> Result<Self> {
        Self::new(size, Vec::new())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Every automorphism as a permutation of the universe, identity first.
    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// `f` (given as pairs) preserves and reflects every relation on its domain.
    pub fn is_partial_isomorphism(&self, f: &[(usize, usize)]) -> bool {
        let image = |m: usize| f.iter().find(|(a, _)| *a == m).map(|(_, b)| *b);
        if f.iter().map(|(_, b)| b).collect::<BTreeSet<_>>().len() != f.len() {
            return false;
        }
        let domain: Vec<usize> = f.iter().map(|(a, _)| *a).collect();
        self.relations.iter().all(|r| {
            std::iter::repeat_n(domain.iter().copied(), r.arity).multi_cartesian_product().all(|t| {
                let ft: Vec<usize> = t.iter().map(|&m| image(m).expect("in domain")).collect();
                r.tuples.contains(&t) == r.tuples.contains(&ft)
            })
        })
    }

    /// Every isomorphism between induced substructures of size below `k`
    /// extends to an automorphism. On failure, returns a partial isomorphism
    /// that does not extend.
    pub fn check_homogeneous(&self, k: usize) -> Result<Option<Vec<(usize, usize)>>> {
        if k > self.size {
            return Err(Error::InvalidSpec(format!("k = {k} exceeds the structure size {}", self.size)));
        }
        for n in 0..k {
            for domain in (0..self.size).combinations(n) {
                for image in (0..self.size).permutations(n) {
                    let f: Vec<(usize, usize)> = domain.iter().copied().zip(image).collect();
                    if !self.is_partial_isomorphism(&f) {
                        continue;
                    }
                    let extends = self.automorphisms.iter().any(|a| f.iter().all(|&(x, y)| a[x] == y));
                    if !extends {
                        return Ok(Some(f));
                    }
                }
            }
        }
        Ok(None)
    }
}
