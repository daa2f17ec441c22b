//! Finite forcing notions.
//!
//! Conditions are opaque indices into a [`FinPoset`]; stronger conditions are
//! lower, and `q ≤ p` reads "q extends p". The full order relation is stored
//! as one down-set bitset per condition.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::limits::Limits;

static NEXT_POSET_ID: AtomicU64 = AtomicU64::new(1);

/// A condition of some [`FinPoset`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cond(pub u32);

impl Cond {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Cond {
    fn from(i: usize) -> Self {
        Cond(i as u32)
    }
}

/// A finite partial order with a top element.
pub struct FinPoset {
    id: u64,
    labels: Vec<String>,
    index: HashMap<String, Cond>,
    /// `down[p]` holds every `q` with `q ≤ p`.
    down: Vec<FixedBitSet>,
    below: Vec<Vec<Cond>>,
    minimal: Vec<Cond>,
    top: Cond,
}

/// Result of [`FinPoset::is_antichain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntichainCheck {
    pub antichain: bool,
    pub maximal: bool,
}

impl FinPoset {
    /// Builds a poset from labels and an order predicate `le(q, p)` meaning `q ≤ p`.
    ///
    /// The predicate must already be a partial order; it is checked, not closed.
    pub fn from_order(labels: Vec<String>, le: impl Fn(usize, usize) -> bool, limits: &Limits) -> Result<Self> {
        let n = labels.len();
        check_size(n, limits)?;
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (p, row) in down.iter_mut().enumerate() {
            for q in 0..n {
                if le(q, p) {
                    row.insert(q);
                }
            }
        }
        Self::build(labels, down)
    }

    /// Builds a poset from generating pairs `(lower, upper)` by reflexive-transitive closure.
    pub fn from_covers(labels: Vec<String>, pairs: &[(usize, usize)], limits: &Limits) -> Result<Self> {
        let n = labels.len();
        check_size(n, limits)?;
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (p, row) in down.iter_mut().enumerate() {
            row.insert(p);
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::ConditionOutOfRange { index: a.max(b), len: n });
            }
        }
        loop {
            let mut changed = false;
            for &(a, b) in pairs {
                if !down[a].is_subset(&down[b]) {
                    let src = down[a].clone();
                    down[b].union_with(&src);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Self::build(labels, down)
    }

    /// Convenience constructor: `pairs` lists `(lower, upper)` by label; labels
    /// are numbered in order of first appearance.
    pub fn from_labeled_covers<'a>(pairs: &[(&'a str, &'a str)], limits: &Limits) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut idx: HashMap<&'a str, usize> = HashMap::new();
        let mut numbered = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let mut get = |s: &'a str| -> usize {
                *idx.entry(s).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                })
            };
            let ia = get(a);
            let ib = get(b);
            numbered.push((ia, ib));
        }
        Self::from_covers(labels, &numbered, limits)
    }

    /// The one-element poset.
    pub fn singleton(label: &str) -> Self {
        Self::from_covers(vec![label.to_string()], &[], &Limits::default()).expect("one-element poset is valid")
    }

    fn build(labels: Vec<String>, down: Vec<FixedBitSet>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), Cond::from(i)).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for p in 0..n {
            if !down[p].contains(p) {
                return Err(Error::NotPartialOrder(format!("`{}` is not below itself", labels[p])));
            }
            for q in down[p].ones() {
                if q != p && down[q].contains(p) {
                    return Err(Error::NotPartialOrder(format!(
                        "`{}` and `{}` are below each other",
                        labels[p], labels[q]
                    )));
                }
                if !down[q].is_subset(&down[p]) {
                    return Err(Error::NotPartialOrder(format!(
                        "order is not transitive through `{}` ≤ `{}`",
                        labels[q], labels[p]
                    )));
                }
            }
        }
        let top = (0..n).find(|&p| down[p].count_ones(..) == n).ok_or(Error::NoTop)?;
        let below: Vec<Vec<Cond>> = down.iter().map(|d| d.ones().map(Cond::from).collect()).collect();
        let minimal = (0..n).filter(|&p| below[p].len() == 1).map(Cond::from).collect();
        Ok(FinPoset {
            id: NEXT_POSET_ID.fetch_add(1, Ordering::Relaxed),
            labels,
            index,
            down,
            below,
            minimal,
            top: Cond::from(top),
        })
    }

    /// Process-unique identity of this poset.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> Cond {
        self.top
    }

    pub fn conds(&self) -> impl Iterator<Item = Cond> + '_ {
        (0..self.len()).map(Cond::from)
    }

    pub fn label(&self, p: Cond) -> &str {
        &self.labels[p.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks a condition up by label.
    pub fn cond(&self, label: &str) -> Result<Cond> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownCondition(label.to_string()))
    }

    pub fn check_cond(&self, p: Cond) -> Result<Cond> {
        if p.index() < self.len() {
            Ok(p)
        } else {
            Err(Error::ConditionOutOfRange { index: p.index(), len: self.len() })
        }
    }

    /// `q ≤ p`.
    pub fn le(&self, q: Cond, p: Cond) -> bool {
        self.down[p.index()].contains(q.index())
    }

    /// All `q ≤ p` (including `p`), ascending.
    pub fn below(&self, p: Cond) -> &[Cond] {
        &self.below[p.index()]
    }

    pub fn down_set(&self, p: Cond) -> &FixedBitSet {
        &self.down[p.index()]
    }

    pub fn minimal(&self) -> &[Cond] {
        &self.minimal
    }

    /// Some `r` extends both `p` and `q`.
    pub fn compatible(&self, p: Cond, q: Cond) -> bool {
        !self.down[p.index()].is_disjoint(&self.down[q.index()])
    }

    /// Label-level compatibility query.
    pub fn compatible_labels(&self, p: &str, q: &str) -> Result<bool> {
        Ok(self.compatible(self.cond(p)?, self.cond(q)?))
    }

    /// Every `q ≤ below` has an extension in `set`.
    pub fn is_dense(&self, set: &[Cond], below: Cond) -> bool {
        let mut members = FixedBitSet::with_capacity(self.len());
        for s in set {
            members.insert(s.index());
        }
        self.is_dense_where(below, |s| members.contains(s.index()))
    }

    /// Density below `below` of the set described by `pred`.
    pub fn is_dense_where(&self, below: Cond, pred: impl Fn(Cond) -> bool) -> bool {
        let mut cache: Vec<Option<bool>> = vec![None; self.len()];
        self.below(below)
            .iter()
            .all(|&q| self.below(q).iter().any(|&s| *cache[s.index()].get_or_insert_with(|| pred(s))))
    }

    pub fn is_antichain(&self, set: &[Cond]) -> AntichainCheck {
        let antichain =
            set.iter().enumerate().all(|(i, &p)| set[i + 1..].iter().all(|&q| p != q && !self.compatible(p, q)));
        let maximal = self.conds().all(|r| set.iter().any(|&p| self.compatible(p, r)));
        AntichainCheck { antichain, maximal }
    }

    /// All antichains of size `1..=max_size`, each listed in ascending order.
    pub fn antichains(&self, max_size: usize) -> Vec<Vec<Cond>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_antichains(0, max_size, &mut current, &mut out);
        out
    }

    fn extend_antichains(&self, from: usize, max: usize, cur: &mut Vec<Cond>, out: &mut Vec<Vec<Cond>>) {
        if cur.len() == max {
            return;
        }
        for i in from..self.len() {
            let c = Cond::from(i);
            if cur.iter().all(|&p| !self.compatible(p, c)) {
                cur.push(c);
                out.push(cur.clone());
                self.extend_antichains(i + 1, max, cur, out);
                cur.pop();
            }
        }
    }

    /// Size of the largest antichain, by exhaustive search.
    pub fn antichain_width(&self) -> usize {
        fn grow(poset: &FinPoset, from: usize, cur: &mut Vec<Cond>, best: &mut usize) {
            *best = (*best).max(cur.len());
            if cur.len() + (poset.len() - from) <= *best {
                return;
            }
            for i in from..poset.len() {
                let c = Cond::from(i);
                if cur.iter().all(|&p| !poset.compatible(p, c)) {
                    cur.push(c);
                    grow(poset, i + 1, cur, best);
                    cur.pop();
                }
            }
        }
        let mut best = 0;
        grow(self, 0, &mut Vec::new(), &mut best);
        best
    }

    /// The generic filters: exactly the up-sets of minimal elements.
    pub fn generic_filters(&self) -> Vec<GenericFilter> {
        self.minimal
            .iter()
            .map(|&m| {
                let mut members = FixedBitSet::with_capacity(self.len());
                for p in 0..self.len() {
                    if self.down[p].contains(m.index()) {
                        members.insert(p);
                    }
                }
                GenericFilter { poset_id: self.id, generator: m, members }
            })
            .collect()
    }

    /// Componentwise product; pair `(a, b)` has index `a * right.len() + b`.
    pub fn product(left: &FinPoset, right: &FinPoset, limits: &Limits) -> Result<FinPoset> {
        let (n1, n2) = (left.len(), right.len());
        let size = n1.saturating_mul(n2);
        check_size(size, limits)?;
        let mut labels = Vec::with_capacity(size);
        for a in 0..n1 {
            for b in 0..n2 {
                labels.push(format!("({},{})", left.labels[a], right.labels[b]));
            }
        }
        FinPoset::from_order(
            labels,
            |q, p| left.down[p / n2].contains(q / n2) && right.down[p % n2].contains(q % n2),
            limits,
        )
    }
}

fn check_size(n: usize, limits: &Limits) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyPoset);
    }
    if n > limits.max_poset {
        return Err(Error::PosetTooLarge { size: n, cap: limits.max_poset });
    }
    Ok(())
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinPoset")
            .field("id", &self.id)
            .field("len", &self.len())
            .field("top", &self.label(self.top))
            .finish()
    }
}

/// A generic filter of a finite poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericFilter {
    poset_id: u64,
    generator: Cond,
    members: FixedBitSet,
}

impl GenericFilter {
    pub fn poset_id(&self) -> u64 {
        self.poset_id
    }

    /// The minimal condition whose up-set this filter is.
    pub fn generator(&self) -> Cond {
        self.generator
    }

    pub fn contains(&self, p: Cond) -> bool {
        self.members.contains(p.index())
    }

    pub fn members(&self) -> impl Iterator<Item = Cond> + '_ {
        self.members.ones().map(Cond::from)
    }

    pub fn meets(&self, set: &[Cond]) -> bool {
        set.iter().any(|&p| self.contains(p))
    }

    /// Checks the filter axioms against `poset`: contains top, upward closed,
    /// and any two members have a common lower bound inside the filter.
    pub fn is_filter_of(&self, poset: &FinPoset) -> bool {
        if self.poset_id != poset.id() || !self.contains(poset.top()) {
            return false;
        }
        let members: Vec<Cond> = self.members().collect();
        let upward = members.iter().all(|&p| poset.conds().filter(|&r| poset.le(p, r)).all(|r| self.contains(r)));
        let directed =
            members.iter().all(|&p| members.iter().all(|&q| members.iter().any(|&r| poset.le(r, p) && poset.le(r, q))));
        upward && directed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> FinPoset {
        FinPoset::from_labeled_covers(&[("a", "1"), ("b", "1")], &Limits::default()).unwrap()
    }

    fn c(p: &FinPoset, l: &str) -> Cond {
        p.cond(l).unwrap()
    }

    #[test]
    fn p3_shape() {
        let p = p3();
        assert_eq!(p.len(), 3);
        assert_eq!(p.label(p.top()), "1");
        assert!(!p.compatible(c(&p, "a"), c(&p, "b")));
        for q in p.conds() {
            assert!(p.compatible(q, q));
        }
        assert_eq!(p.minimal().len(), 2);
    }

    #[test]
    fn unknown_condition_is_an_error() {
        let p = p3();
        assert_eq!(p.cond("z"), Err(Error::UnknownCondition("z".into())));
        assert!(p.compatible_labels("a", "z").is_err());
    }

    #[test]
    fn density_in_p3() {
        let p = p3();
        let (a, b, top) = (c(&p, "a"), c(&p, "b"), p.top());
        let all: Vec<Cond> = p.conds().collect();
        assert!(p.is_dense(&all, top));
        assert!(!p.is_dense(&[a], top));
        assert!(p.is_dense(&[a, b], top));
        assert!(p.is_dense(&[a], a));
    }

    #[test]
    fn antichains_in_p3() {
        let p = p3();
        let (a, b, top) = (c(&p, "a"), c(&p, "b"), p.top());
        assert_eq!(p.is_antichain(&[a, b]), AntichainCheck { antichain: true, maximal: true });
        assert!(!p.is_antichain(&[top, a]).antichain);
        assert_eq!(p.is_antichain(&[]), AntichainCheck { antichain: true, maximal: false });
        assert_eq!(p.antichain_width(), 2);
        assert_eq!(p.antichains(4).len(), 4);
    }

    #[test]
    fn generic_filters_of_p3() {
        let p = p3();
        let gs = p.generic_filters();
        let mut sets: Vec<Vec<&str>> = gs
            .iter()
            .map(|g| {
                let mut v: Vec<&str> = g.members().map(|q| p.label(q)).collect();
                v.sort();
                v
            })
            .collect();
        sets.sort();
        assert_eq!(sets, vec![vec!["1", "a"], vec!["1", "b"]]);
        assert!(gs.iter().all(|g| g.is_filter_of(&p)));
    }

    #[test]
    fn singleton_poset_has_one_filter() {
        let p = FinPoset::singleton("1");
        let gs = p.generic_filters();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].members().collect::<Vec<_>>(), vec![p.top()]);
    }

    #[test]
    fn rejects_non_orders() {
        let l = Limits::default();
        let cyc = FinPoset::from_labeled_covers(&[("a", "b"), ("b", "a")], &l);
        assert!(matches!(cyc, Err(Error::NotPartialOrder(_))));
        let two_max = FinPoset::from_covers(vec!["x".into(), "y".into()], &[], &l);
        assert_eq!(two_max.unwrap_err(), Error::NoTop);
        let not_refl = FinPoset::from_order(vec!["x".into()], |_, _| false, &l);
        assert!(matches!(not_refl, Err(Error::NotPartialOrder(_))));
        let broken = FinPoset::from_order(
            vec!["t".into(), "m".into(), "b".into()],
            |q, p| q == p || (p == 0 && q == 1) || (p == 1 && q == 2),
            &l,
        );
        assert!(matches!(broken, Err(Error::NotPartialOrder(_))));
        assert_eq!(FinPoset::from_covers(vec![], &[], &l).unwrap_err(), Error::EmptyPoset);
    }

    #[test]
    fn size_cap_is_enforced() {
        let l = Limits { max_poset: 2, ..Limits::default() };
        let err = FinPoset::from_labeled_covers(&[("a", "1"), ("b", "1")], &l).unwrap_err();
        assert_eq!(err, Error::PosetTooLarge { size: 3, cap: 2 });
        assert!(err.is_cap());
    }

    #[test]
    fn product_of_p3_with_itself() {
        let p = p3();
        let l = Limits::default();
        let pp = FinPoset::product(&p, &p, &l).unwrap();
        assert_eq!(pp.len(), 9);
        assert_eq!(pp.minimal().len(), 4);
        assert_eq!(pp.label(pp.top()), "(1,1)");
        // componentwise compatibility
        for x in 0..9usize {
            for y in 0..9usize {
                let expect = p.compatible(Cond::from(x / 3), Cond::from(y / 3))
                    && p.compatible(Cond::from(x % 3), Cond::from(y % 3));
                assert_eq!(pp.compatible(Cond::from(x), Cond::from(y)), expect);
            }
        }
    }

    #[test]
    fn product_with_trivial_factor_is_isomorphic() {
        let p = p3();
        let one = FinPoset::singleton("1");
        let pp = FinPoset::product(&p, &one, &Limits::default()).unwrap();
        assert_eq!(pp.len(), p.len());
        for q in p.conds() {
            for r in p.conds() {
                assert_eq!(pp.le(q, r), p.le(q, r));
            }
        }
    }
}
