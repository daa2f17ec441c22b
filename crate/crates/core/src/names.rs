//! Hereditarily finite P-names, hash-consed per poset.
//!
//! Every [`PName`] is interned in the [`NameStore`] of its poset, so two names
//! with the same entry set are the same allocation and share a [`NameId`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::formula::Formula;
use crate::hf::HfSet;
use crate::limits::Limits;
use crate::poset::{Cond, FinPoset};

static NEXT_STORE_ID: AtomicU64 = AtomicU64::new(1);

/// Canonical identifier of a name inside its store.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NameId(pub u32);

struct NameNode {
    id: NameId,
    store: u64,
    rank: u32,
    entries: Box<[(Cond, PName)]>,
}

/// A P-name: a finite set of pairs `⟨condition, name⟩`.
#[derive(Clone)]
pub struct PName(Arc<NameNode>);

impl PName {
    pub fn id(&self) -> NameId {
        self.0.id
    }

    pub fn store_id(&self) -> u64 {
        self.0.store
    }

    /// 0 for the empty name, otherwise one more than the largest appearing rank.
    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    /// Entries sorted by condition, then by the child's id.
    pub fn entries(&self) -> &[(Cond, PName)] {
        &self.0.entries
    }

    pub fn is_empty(&self) -> bool {
        self.0.entries.is_empty()
    }

    /// `self` appears in `x`: some pair `⟨p, self⟩ ∈ x`.
    pub fn appears_in(&self, x: &PName) -> bool {
        x.entries().iter().any(|(_, y)| y == self)
    }

    /// Some pair `⟨p, y⟩ ∈ self`.
    pub fn condition_appears(&self, p: Cond) -> bool {
        self.entries().iter().any(|(q, _)| *q == p)
    }

    /// The names appearing in `self`, deduplicated, in entry order.
    pub fn appearing(&self) -> Vec<PName> {
        let mut seen = BTreeSet::new();
        self.entries().iter().filter(|(_, y)| seen.insert(y.id())).map(|(_, y)| y.clone()).collect()
    }

    /// Every name in the hereditary closure of `self`, including `self`.
    pub fn closure(&self) -> Vec<PName> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(x) = stack.pop() {
            if seen.insert(x.id()) {
                for (_, y) in x.entries() {
                    stack.push(y.clone());
                }
                out.push(x);
            }
        }
        out
    }
}

impl PartialEq for PName {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id && self.0.store == other.0.store
    }
}

impl Eq for PName {}

impl Hash for PName {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.store.hash(state);
        self.0.id.hash(state);
    }
}

impl PartialOrd for PName {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PName {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.store, self.0.id).cmp(&(other.0.store, other.0.id))
    }
}

impl fmt::Debug for PName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0.id.0)
    }
}

type Key = Box<[(Cond, NameId)]>;

/// The per-poset hash-cons table.
///
/// Insertion is safe from several threads; when two threads intern the same
/// entry set concurrently, the first insertion wins and both receive it.
pub struct NameStore {
    id: u64,
    poset: Arc<FinPoset>,
    limits: Limits,
    table: DashMap<Key, PName>,
    next: AtomicU32,
    empty: PName,
}

impl NameStore {
    pub fn new(poset: Arc<FinPoset>, limits: Limits) -> Self {
        let id = NEXT_STORE_ID.fetch_add(1, Ordering::Relaxed);
        let empty = PName(Arc::new(NameNode { id: NameId(0), store: id, rank: 0, entries: Box::new([]) }));
        let table = DashMap::new();
        table.insert(Box::from([]) as Key, empty.clone());
        NameStore { id, poset, limits, table, next: AtomicU32::new(1), empty }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.poset
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Number of distinct names interned so far.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn owns(&self, x: &PName) -> bool {
        x.store_id() == self.id
    }

    pub fn ensure_owned(&self, x: &PName) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::MixedPoset)
        }
    }

    /// The empty name.
    pub fn empty(&self) -> PName {
        self.empty.clone()
    }

    /// Deduplicates and sorts `entries`, then returns the interned name.
    pub fn canonicalize(&self, entries: impl IntoIterator<Item = (Cond, PName)>) -> Result<PName> {
        let mut v: Vec<(Cond, PName)> = entries.into_iter().collect();
        for (p, y) in &v {
            self.poset.check_cond(*p)?;
            self.ensure_owned(y)?;
        }
        v.sort_by_key(|a| (a.0, a.1.id()));
        v.dedup();
        if v.len() > self.limits.max_entries {
            return Err(Error::EntryCap { count: v.len(), cap: self.limits.max_entries });
        }
        let rank = v.iter().map(|(_, y)| y.rank() + 1).max().unwrap_or(0);
        if rank > self.limits.rank_cap {
            return Err(Error::RankCap { rank, cap: self.limits.rank_cap });
        }
        let key: Key = v.iter().map(|(p, y)| (*p, y.id())).collect();
        if let Some(found) = self.table.get(&key) {
            return Ok(found.clone());
        }
        let store = self.id;
        let next = &self.next;
        let name = self
            .table
            .entry(key)
            .or_insert_with(|| {
                PName(Arc::new(NameNode {
                    id: NameId(next.fetch_add(1, Ordering::Relaxed)),
                    store,
                    rank,
                    entries: v.into_boxed_slice(),
                }))
            })
            .clone();
        Ok(name)
    }

    /// The check name `x̌ = {y̌ | y ∈ x}•`.
    pub fn check(&self, x: &HfSet) -> Result<PName> {
        let mut memo = HashMap::new();
        self.check_memo(x, &mut memo)
    }

    fn check_memo(&self, x: &HfSet, memo: &mut HashMap<HfSet, PName>) -> Result<PName> {
        if let Some(n) = memo.get(x) {
            return Ok(n.clone());
        }
        let top = self.poset.top();
        let mut entries = Vec::with_capacity(x.len());
        for y in x.elements() {
            entries.push((top, self.check_memo(y, memo)?));
        }
        let name = self.canonicalize(entries)?;
        memo.insert(x.clone(), name.clone());
        Ok(name)
    }

    /// `ň` for the von Neumann natural `n`.
    pub fn nat(&self, n: usize) -> Result<PName> {
        self.check(&HfSet::nat(n))
    }

    /// `{ẏ_i | i ∈ I}• = {⟨1, ẏ_i⟩}`.
    pub fn bullet_set(&self, names: impl IntoIterator<Item = PName>) -> Result<PName> {
        let top = self.poset.top();
        self.canonicalize(names.into_iter().map(|y| (top, y)))
    }

    /// `⟨ẋ, ẏ⟩• = {{ẋ}•, {ẋ, ẏ}•}•`.
    pub fn bullet_pair(&self, x: &PName, y: &PName) -> Result<PName> {
        let left = self.bullet_set([x.clone()])?;
        let right = self.bullet_set([x.clone(), y.clone()])?;
        self.bullet_set([left, right])
    }

    /// Recognizes check names: every entry carries the top condition and a check name.
    pub fn as_check(&self, x: &PName) -> Option<HfSet> {
        let top = self.poset.top();
        let mut elems = Vec::with_capacity(x.entries().len());
        for (p, y) in x.entries() {
            if *p != top {
                return None;
            }
            elems.push(self.as_check(y)?);
        }
        Some(HfSet::from_elements(elems))
    }

    /// Deterministic textual form, independent of interning order.
    pub fn render(&self, x: &PName) -> String {
        let mut memo = HashMap::new();
        self.render_memo(x, &mut memo)
    }

    fn render_memo(&self, x: &PName, memo: &mut HashMap<NameId, String>) -> String {
        if let Some(s) = memo.get(&x.id()) {
            return s.clone();
        }
        let s = if x.is_empty() {
            "empty".to_string()
        } else if let Some(h) = self.as_check(x) {
            format!("check {h}")
        } else {
            let top = self.poset.top();
            let all_top = x.entries().iter().all(|(p, _)| *p == top);
            let mut parts: Vec<String> = x
                .entries()
                .iter()
                .map(|(p, y)| {
                    let child = self.render_memo(y, memo);
                    if all_top {
                        child
                    } else {
                        format!("{}: {}", self.poset.label(*p), child)
                    }
                })
                .collect();
            parts.sort();
            if all_top {
                format!("bullet{{{}}}", parts.join(", "))
            } else {
                format!("{{{}}}", parts.join(", "))
            }
        };
        memo.insert(x.id(), s.clone());
        s
    }
}

impl fmt::Debug for NameStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NameStore").field("id", &self.id).field("names", &self.len()).finish()
    }
}

/// `ẋ↾p = {⟨q, ẏ⟩ | q ≤ p, ẏ appears in ẋ, q ⊩ ẏ ∈ ẋ}`, computed against the
/// recursive forcing relation.
pub fn restrict(forcing: &Forcing, x: &PName, p: Cond) -> Result<PName> {
    let names = forcing.names();
    names.ensure_owned(x)?;
    let poset = names.poset();
    poset.check_cond(p)?;
    let mut entries = Vec::new();
    for y in x.appearing() {
        let member = Formula::member(y.clone(), x.clone());
        for &q in poset.below(p) {
            if forcing.forces(q, &member)? {
                entries.push((q, y.clone()));
            }
        }
    }
    names.canonicalize(entries)
}
