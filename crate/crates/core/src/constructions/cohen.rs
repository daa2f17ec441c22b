//! Finite Cohen systems: partial functions `I × N → 2` with bounded support,
//! permuted by `Sym(I)`, with the pointwise-stabilizer filter.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groups::{Automorphism, FinGroup};
use crate::limits::Limits;
use crate::names::PName;
use crate::poset::{Cond, FinPoset};
use crate::symmetric::{FilterBase, SymSystem};

use super::{count_conditions, render_set};
use crate::suites::SuiteReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohenSpec {
    pub indices: usize,
    pub bits: usize,
    pub support: usize,
    /// Replaces the default base `{fix(E) : |E| ≤ support}`.
    pub base: Option<Vec<BTreeSet<usize>>>,
}

impl CohenSpec {
    pub fn new(indices: usize, bits: usize, support: usize) -> Self {
        CohenSpec { indices, bits, support, base: None }
    }

    pub fn with_base(mut self, base: Vec<BTreeSet<usize>>) -> Self {
        self.base = Some(base);
        self
    }
}

/// A condition: sorted `(index, bit, value)` triples.
pub type CohenCond = Vec<(usize, usize, u8)>;

/// The finite Cohen poset; `support` may equal `indices` here.
pub fn cohen_poset(spec: &CohenSpec, limits: &Limits) -> Result<(FinPoset, Vec<CohenCond>)> {
    if spec.indices == 0 || spec.bits == 0 {
        return Err(Error::InvalidSpec("a Cohen poset needs at least one index and one bit".into()));
    }
    if spec.support > spec.indices {
        return Err(Error::InvalidSpec(format!("support {} exceeds the {} indices", spec.support, spec.indices)));
    }
    partial_function_poset(spec.indices, spec.bits, spec.support, render_cond, limits)
}

/// Partial functions `rows × width → 2` touching at most `support` rows, by reverse inclusion.
pub(crate) fn partial_function_poset(
    rows: usize,
    width: usize,
    support: usize,
    label: impl Fn(&CohenCond) -> String,
    limits: &Limits,
) -> Result<(FinPoset, Vec<CohenCond>)> {
    let size = count_conditions(rows, width, support);
    if size > limits.max_poset as u128 {
        return Err(Error::PosetTooLarge { size: size.min(usize::MAX as u128) as usize, cap: limits.max_poset });
    }
    let mut conds: Vec<CohenCond> = vec![Vec::new()];
    let functions = row_functions(width);
    for k in 1..=support {
        for touched in (0..rows).combinations(k) {
            for choice in touched.iter().map(|_| functions.iter()).multi_cartesian_product() {
                let mut c = Vec::new();
                for (&i, f) in touched.iter().zip(choice) {
                    c.extend(f.iter().map(|&(n, b)| (i, n, b)));
                }
                conds.push(c);
            }
        }
    }
    let labels: Vec<String> = conds.iter().map(label).collect();
    let sets: Vec<BTreeSet<(usize, usize, u8)>> = conds.iter().map(|c| c.iter().copied().collect()).collect();
    let poset = FinPoset::from_order(labels, |q, p| sets[p].is_subset(&sets[q]), limits)?;
    Ok((poset, conds))
}

fn row_functions(bits: usize) -> Vec<Vec<(usize, u8)>> {
    std::iter::repeat_n([None, Some(0u8), Some(1u8)].into_iter(), bits)
        .multi_cartesian_product()
        .filter(|f| f.iter().any(Option::is_some))
        .map(|f| f.into_iter().enumerate().filter_map(|(n, b)| b.map(|b| (n, b))).collect())
        .collect()
}

/// `[(i,n)=b,...]`; the top is `[]`.
pub fn render_cond(c: &CohenCond) -> String {
    let parts: Vec<String> = c.iter().map(|(i, n, b)| format!("({i},{n})={b}")).collect();
    format!("[{}]", parts.join(","))
}

/// A Cohen system together with its generic-subset names.
pub struct CohenSystem {
    pub spec: CohenSpec,
    pub system: SymSystem,
    conds: Vec<CohenCond>,
    cond_index: HashMap<CohenCond, Cond>,
    index_perms: Vec<Vec<usize>>,
    gens: Vec<PName>,
}

/// Builds the system; requires `1 ≤ support < indices` unless a base is given.
pub fn cohen_system(spec: CohenSpec, limits: Limits) -> Result<CohenSystem> {
    if spec.base.is_none() && (spec.support == 0 || spec.support >= spec.indices) {
        return Err(Error::InvalidSpec(format!(
            "support must satisfy 1 <= s < {}, got {}",
            spec.indices, spec.support
        )));
    }
    let (poset, conds) = cohen_poset(&spec, &limits)?;
    let poset = Arc::new(poset);
    let order: usize = (1..=spec.indices).product();
    if order > limits.max_group {
        return Err(Error::GroupTooLarge { size: order, cap: limits.max_group });
    }
    let cond_index: HashMap<CohenCond, Cond> =
        conds.iter().cloned().enumerate().map(|(i, c)| (c, Cond::from(i))).collect();
    let index_perms: Vec<Vec<usize>> = (0..spec.indices).permutations(spec.indices).collect();
    let elements: Vec<Automorphism> = index_perms
        .iter()
        .map(|sigma| {
            let perm = conds
                .iter()
                .map(|c| {
                    let mut image: CohenCond = c.iter().map(|&(i, n, b)| (sigma[i], n, b)).collect();
                    image.sort_unstable();
                    cond_index[&image].0
                })
                .collect();
            Automorphism::from_perm_unchecked(perm)
        })
        .collect();
    debug_assert!(elements.iter().all(|e| Automorphism::new(&poset, e.perm().to_vec()).is_ok()));
    let group = FinGroup::from_elements_unchecked(poset.clone(), elements);

    let fix = |e: &BTreeSet<usize>| {
        group.restrict_to(|pi| {
            let sigma = &index_perms[group.index_of(pi).expect("member")];
            e.iter().all(|&i| sigma[i] == i)
        })
    };
    let base_sets: Vec<BTreeSet<usize>> = match &spec.base {
        Some(b) => {
            for e in b {
                if let Some(&i) = e.iter().find(|&&i| i >= spec.indices) {
                    return Err(Error::InvalidSpec(format!("base index {i} is out of range")));
                }
            }
            b.clone()
        }
        None => (0..=spec.support)
            .flat_map(|k| (0..spec.indices).combinations(k))
            .map(|e| e.into_iter().collect())
            .collect(),
    };
    let base = base_sets.iter().map(|e| (format!("fix({})", render_set(e)), fix(e))).collect();
    let catalogue = (0..=spec.indices)
        .flat_map(|k| (0..spec.indices).combinations(k))
        .map(|e| {
            let e: BTreeSet<usize> = e.into_iter().collect();
            (format!("fix({})", render_set(&e)), fix(&e))
        })
        .collect();
    let filter = FilterBase::new(group, base)?;
    let system = SymSystem::build(poset, filter, limits)?.with_catalogue(catalogue);

    let store = system.names().clone();
    let mut gens = Vec::with_capacity(spec.indices);
    for i in 0..spec.indices {
        let mut entries = Vec::new();
        for (k, c) in conds.iter().enumerate() {
            for &(j, n, b) in c {
                if j == i && b == 1 {
                    entries.push((Cond::from(k), store.nat(n)?));
                }
            }
        }
        gens.push(store.canonicalize(entries)?);
    }
    Ok(CohenSystem { spec, system, conds, cond_index, index_perms, gens })
}

impl CohenSystem {
    pub fn system(&self) -> &SymSystem {
        &self.system
    }

    /// The canonical name for the `i`-th generic subset of `N`.
    pub fn gen(&self, i: usize) -> Result<PName> {
        self.gens
            .get(i)
            .cloned()
            .ok_or_else(|| Error::InvalidSpec(format!("gen({i}) is out of range for {} indices", self.spec.indices)))
    }

    pub fn gens(&self) -> &[PName] {
        &self.gens
    }

    pub fn condition(&self, p: Cond) -> &CohenCond {
        &self.conds[p.index()]
    }

    /// Looks up a condition from its triples in any order.
    pub fn cond_of(&self, triples: &[(usize, usize, u8)]) -> Result<Cond> {
        let mut c = triples.to_vec();
        c.sort_unstable();
        c.dedup();
        self.cond_index.get(&c).copied().ok_or_else(|| Error::UnknownCondition(render_cond(&c)))
    }

    /// The index permutation behind group element `k` (ambient index).
    pub fn index_perm(&self, k: usize) -> &[usize] {
        &self.index_perms[k]
    }

    /// `fix(E)`.
    pub fn fix(&self, e: &BTreeSet<usize>) -> FinGroup {
        let group = self.system.group();
        group.restrict_to(|pi| {
            let k = group.index_of(pi).expect("member");
            e.iter().all(|&i| self.index_perms[k][i] == i)
        })
    }

    /// `π gen(i) = gen(π(i))` for every element and index.
    pub fn equivariance(&self) -> Result<SuiteReport> {
        let mut report = SuiteReport::default();
        let group = self.system.group();
        for k in group.indices() {
            let pi = group.element(k);
            for i in 0..self.spec.indices {
                report.checks += 1;
                let moved = self.system.apply(pi, &self.gens[i])?;
                if moved != self.gens[self.index_perms[k][i]] {
                    report.failures.push(format!(
                        "{} gen({i}) != gen({})",
                        self.system.render_element(k),
                        self.index_perms[k][i]
                    ));
                }
            }
        }
        Ok(report)
    }
}
