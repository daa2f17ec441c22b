//! Automorphism groups of finite posets and their action on names.
//!
//! Groups are enumerated eagerly into a shared table; subgroups are bitsets
//! over that table, so inclusion and intersection are word operations.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::formula::Formula;
use crate::names::{NameId, NameStore, PName};
use crate::poset::{Cond, FinPoset};

static NEXT_TABLE_ID: AtomicU64 = AtomicU64::new(1);

/// An order automorphism of a finite poset, as a permutation of condition indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism(Arc<[u32]>);

impl Automorphism {
    /// Checks that `perm` is a bijection preserving `≤` in both directions.
    pub fn new(poset: &FinPoset, perm: Vec<u32>) -> Result<Self> {
        let n = poset.len();
        if perm.len() != n {
            return Err(Error::NotAutomorphism(format!("permutation has {} points, poset has {n}", perm.len())));
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            let i = i as usize;
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAutomorphism("not a bijection".into()));
            }
        }
        for q in poset.conds() {
            for p in poset.conds() {
                let image = poset.le(Cond(perm[q.index()]), Cond(perm[p.index()]));
                if poset.le(q, p) != image {
                    return Err(Error::NotAutomorphism(format!(
                        "order between `{}` and `{}` is not preserved",
                        poset.label(q),
                        poset.label(p)
                    )));
                }
            }
        }
        Ok(Automorphism(Arc::from(perm)))
    }

    pub(crate) fn from_perm_unchecked(perm: Vec<u32>) -> Self {
        Automorphism(Arc::from(perm))
    }

    pub fn identity(n: usize) -> Self {
        Automorphism((0..n as u32).collect())
    }

    /// Builds an automorphism from cycles of condition labels; unlisted points are fixed.
    pub fn from_cycles<S: AsRef<str>>(poset: &FinPoset, cycles: &[Vec<S>]) -> Result<Self> {
        let mut perm: Vec<u32> = (0..poset.len() as u32).collect();
        let mut moved = vec![false; poset.len()];
        for cycle in cycles {
            let conds = cycle.iter().map(|l| poset.cond(l.as_ref())).collect::<Result<Vec<_>>>()?;
            for (i, c) in conds.iter().enumerate() {
                if std::mem::replace(&mut moved[c.index()], true) {
                    return Err(Error::NotAutomorphism(format!(
                        "`{}` occurs in more than one cycle position",
                        poset.label(*c)
                    )));
                }
                perm[c.index()] = conds[(i + 1) % conds.len()].0;
            }
        }
        Automorphism::new(poset, perm)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn perm(&self) -> &[u32] {
        &self.0
    }

    /// `πp`.
    pub fn image(&self, p: Cond) -> Cond {
        Cond(self.0[p.index()])
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Automorphism(Arc::from(inv))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Cycle notation over condition labels, `id` for the identity.
    pub fn render(&self, poset: &FinPoset) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(poset.label(Cond::from(i)).to_string());
                i = self.0[i] as usize;
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "id".into()
        } else {
            out
        }
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

struct GroupTable {
    id: u64,
    poset: Arc<FinPoset>,
    elements: Vec<Automorphism>,
    index: HashMap<Automorphism, usize>,
}

/// A finite group of poset automorphisms, or a subgroup of one.
///
/// Subgroups share the enumerated table of their ambient group. Two groups
/// are equal when they have the same ambient group and the same elements.
#[derive(Clone)]
pub struct FinGroup {
    table: Arc<GroupTable>,
    members: FixedBitSet,
}

impl FinGroup {
    /// Closes `generators` under composition, failing once more than `cap` elements appear.
    ///
    /// Elements are listed identity first, then in breadth-first order.
    pub fn generate(poset: Arc<FinPoset>, generators: &[Automorphism], cap: usize) -> Result<FinGroup> {
        for g in generators {
            if g.len() != poset.len() {
                return Err(Error::ForeignGroup);
            }
        }
        let id = Automorphism::identity(poset.len());
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = g.compose(&elements[i]);
                if !index.contains_key(&next) {
                    if elements.len() == cap {
                        return Err(Error::GroupTooLarge { size: cap + 1, cap });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        Ok(Self::from_table(poset, elements, index))
    }

    /// Wraps a list that is known to be a group, with the identity first.
    pub(crate) fn from_elements_unchecked(poset: Arc<FinPoset>, elements: Vec<Automorphism>) -> FinGroup {
        debug_assert!(elements.first().is_some_and(|e| e.is_identity()));
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self::from_table(poset, elements, index)
    }

    fn from_table(poset: Arc<FinPoset>, elements: Vec<Automorphism>, index: HashMap<Automorphism, usize>) -> FinGroup {
        let n = elements.len();
        let mut members = FixedBitSet::with_capacity(n);
        members.insert_range(..);
        FinGroup {
            table: Arc::new(GroupTable { id: NEXT_TABLE_ID.fetch_add(1, Ordering::Relaxed), poset, elements, index }),
            members,
        }
    }

    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.table.poset
    }

    /// Number of elements of this (sub)group.
    pub fn order(&self) -> usize {
        self.members.count_ones(..)
    }

    /// Number of elements of the ambient group.
    pub fn ambient_order(&self) -> usize {
        self.table.elements.len()
    }

    pub fn ambient(&self) -> FinGroup {
        let mut members = FixedBitSet::with_capacity(self.ambient_order());
        members.insert_range(..);
        FinGroup { table: self.table.clone(), members }
    }

    /// Element by ambient index.
    pub fn element(&self, i: usize) -> &Automorphism {
        &self.table.elements[i]
    }

    /// Ambient indices of the members, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Automorphism> + '_ {
        self.members.ones().map(|i| &self.table.elements[i])
    }

    pub fn index_of(&self, pi: &Automorphism) -> Option<usize> {
        self.table.index.get(pi).copied()
    }

    pub fn contains(&self, pi: &Automorphism) -> bool {
        self.index_of(pi).is_some_and(|i| self.members.contains(i))
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn same_ambient(&self, other: &FinGroup) -> bool {
        self.table.id == other.table.id
    }

    pub fn is_subgroup_of(&self, other: &FinGroup) -> bool {
        self.same_ambient(other) && self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &FinGroup) -> Result<FinGroup> {
        if !self.same_ambient(other) {
            return Err(Error::ForeignGroup);
        }
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Ok(FinGroup { table: self.table.clone(), members })
    }

    /// Members satisfying `pred`. The caller is responsible for the result being a subgroup.
    pub fn restrict_to(&self, pred: impl Fn(&Automorphism) -> bool) -> FinGroup {
        let mut members = FixedBitSet::with_capacity(self.ambient_order());
        for i in self.members.ones() {
            if pred(&self.table.elements[i]) {
                members.insert(i);
            }
        }
        FinGroup { table: self.table.clone(), members }
    }

    /// The trivial subgroup.
    pub fn trivial(&self) -> FinGroup {
        let mut members = FixedBitSet::with_capacity(self.ambient_order());
        members.insert(self.identity_index());
        FinGroup { table: self.table.clone(), members }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity_index(&self) -> usize {
        self.table.index[&Automorphism::identity(self.table.poset.len())]
    }

    /// The subgroup of the ambient group generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[Automorphism]) -> Result<FinGroup> {
        let mut members = FixedBitSet::with_capacity(self.ambient_order());
        let id = self.identity_index();
        members.insert(id);
        let mut queue = VecDeque::from([id]);
        let gen_idx = gens.iter().map(|g| self.index_of(g).ok_or(Error::ForeignGroup)).collect::<Result<Vec<_>>>()?;
        while let Some(i) = queue.pop_front() {
            for &g in &gen_idx {
                let next = self.table.elements[g].compose(&self.table.elements[i]);
                let j = self.table.index[&next];
                if !members.contains(j) {
                    members.insert(j);
                    queue.push_back(j);
                }
            }
        }
        Ok(FinGroup { table: self.table.clone(), members })
    }

    /// `πHπ⁻¹` for `π` in the ambient group.
    pub fn conjugate_by(&self, pi: &Automorphism) -> Result<FinGroup> {
        if self.index_of(pi).is_none() {
            return Err(Error::ForeignGroup);
        }
        let inv = pi.inverse();
        let mut members = FixedBitSet::with_capacity(self.ambient_order());
        for h in self.elements() {
            let c = pi.compose(&h.compose(&inv));
            members.insert(self.table.index[&c]);
        }
        Ok(FinGroup { table: self.table.clone(), members })
    }

    /// Checks closure under composition; used by tests and explicit constructions.
    pub fn is_closed(&self) -> bool {
        self.members.contains(self.identity_index())
            && self.elements().all(|a| {
                self.elements().all(|b| self.index_of(&a.compose(b)).is_some_and(|i| self.members.contains(i)))
            })
    }
}

impl PartialEq for FinGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.members == other.members
    }
}

impl Eq for FinGroup {}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinGroup({} of {})", self.order(), self.ambient_order())
    }
}

/// `πẋ = {⟨πp, πẏ⟩ | ⟨p, ẏ⟩ ∈ ẋ}`.
pub fn apply(pi: &Automorphism, x: &PName, store: &NameStore) -> Result<PName> {
    store.ensure_owned(x)?;
    if pi.len() != store.poset().len() {
        return Err(Error::ForeignGroup);
    }
    if pi.is_identity() {
        return Ok(x.clone());
    }
    let mut memo = HashMap::new();
    apply_memo(pi, x, store, &mut memo)
}

fn apply_memo(pi: &Automorphism, x: &PName, store: &NameStore, memo: &mut HashMap<NameId, PName>) -> Result<PName> {
    if let Some(y) = memo.get(&x.id()) {
        return Ok(y.clone());
    }
    let mut entries = Vec::with_capacity(x.entries().len());
    for (p, y) in x.entries() {
        entries.push((pi.image(*p), apply_memo(pi, y, store, memo)?));
    }
    let out = store.canonicalize(entries)?;
    memo.insert(x.id(), out.clone());
    Ok(out)
}

/// Applies `π` to every name parameter of `φ`.
pub fn apply_formula(pi: &Automorphism, phi: &Formula, store: &NameStore) -> Result<Formula> {
    let mut memo = HashMap::new();
    phi.map_names(&mut |x| {
        store.ensure_owned(x)?;
        apply_memo(pi, x, store, &mut memo)
    })
}

/// `sym_𝒢(ẋ) = {π ∈ 𝒢 | πẋ = ẋ}`.
pub fn stabilizer(group: &FinGroup, x: &PName, store: &NameStore) -> Result<FinGroup> {
    check_acts(group, store)?;
    let mut fixed = Vec::new();
    for i in group.indices() {
        if &apply(group.element(i), x, store)? == x {
            fixed.push(i);
        }
    }
    let ambient = group.ambient();
    Ok(ambient.restrict_to(|pi| ambient.index_of(pi).is_some_and(|i| fixed.binary_search(&i).is_ok())))
}

/// `{π ∈ 𝒢 | πp = p}`.
pub fn condition_stabilizer(group: &FinGroup, p: Cond) -> FinGroup {
    group.restrict_to(|pi| pi.image(p) == p)
}

/// `πHπ⁻¹`.
pub fn conjugate(pi: &Automorphism, h: &FinGroup) -> Result<FinGroup> {
    h.conjugate_by(pi)
}

fn check_acts(group: &FinGroup, store: &NameStore) -> Result<()> {
    if group.poset().id() != store.poset().id() {
        return Err(Error::ForeignGroup);
    }
    Ok(())
}

/// Every automorphism of `poset`, identity first, by backtracking search.
pub fn poset_automorphisms(poset: &FinPoset, cap: usize) -> Result<Vec<Automorphism>> {
    let n = poset.len();
    let up: Vec<usize> = poset.conds().map(|p| poset.conds().filter(|&r| poset.le(p, r)).count()).collect();
    let down: Vec<usize> = poset.conds().map(|p| poset.below(p).len()).collect();
    let mut out = Vec::new();
    let mut img: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n];

    struct Search<'a> {
        poset: &'a FinPoset,
        up: &'a [usize],
        down: &'a [usize],
        cap: usize,
    }
    fn go(s: &Search<'_>, img: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Automorphism>) -> Result<()> {
        let i = img.len();
        if i == s.poset.len() {
            if out.len() == s.cap {
                return Err(Error::GroupTooLarge { size: s.cap + 1, cap: s.cap });
            }
            out.push(Automorphism::from_perm_unchecked(img.clone()));
            return Ok(());
        }
        // try the identity image first so the identity is listed first
        let order = std::iter::once(i).chain((0..s.poset.len()).filter(|&c| c != i));
        for c in order {
            if used[c] || s.up[c] != s.up[i] || s.down[c] != s.down[i] {
                continue;
            }
            let consistent = (0..i).all(|j| {
                let cj = Cond(img[j]);
                s.poset.le(Cond::from(i), Cond::from(j)) == s.poset.le(Cond::from(c), cj)
                    && s.poset.le(Cond::from(j), Cond::from(i)) == s.poset.le(cj, Cond::from(c))
            });
            if consistent {
                used[c] = true;
                img.push(c as u32);
                go(s, img, used, out)?;
                img.pop();
                used[c] = false;
            }
        }
        Ok(())
    }
    let search = Search { poset, up: &up, down: &down, cap };
    go(&search, &mut img, &mut used, &mut out)?;
    Ok(out)
}

/// One failure of `p ⊩ φ ⟺ πp ⊩ πφ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub formula: usize,
    pub element: usize,
    pub condition: Cond,
    pub forces: bool,
    pub image_forces: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymmetryReport {
    pub checks: usize,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the symmetry lemma for every condition, every element of `group`
/// and every formula in `formulas`.
pub fn symmetry_lemma_check(forcing: &Forcing, group: &FinGroup, formulas: &[Formula]) -> Result<SymmetryReport> {
    let store = forcing.names();
    check_acts(group, store)?;
    let poset = forcing.poset();
    let elements: Vec<usize> = group.indices().collect();
    let per_formula: Vec<Result<(usize, Vec<SymmetryViolation>)>> = formulas
        .par_iter()
        .enumerate()
        .map(|(fi, phi)| {
            let mut checks = 0;
            let mut violations = Vec::new();
            for &e in &elements {
                let pi = group.element(e);
                let moved = apply_formula(pi, phi, store)?;
                for p in poset.conds() {
                    let lhs = forcing.forces(p, phi)?;
                    let rhs = forcing.forces(pi.image(p), &moved)?;
                    checks += 1;
                    if lhs != rhs {
                        violations.push(SymmetryViolation {
                            formula: fi,
                            element: e,
                            condition: p,
                            forces: lhs,
                            image_forces: rhs,
                        });
                    }
                }
            }
            Ok((checks, violations))
        })
        .collect();
    let mut report = SymmetryReport::default();
    for r in per_formula {
        let (c, v) = r?;
        report.checks += c;
        report.violations.extend(v);
    }
    Ok(report)
}
