//! Symmetric systems: a poset, a group acting on it, and a normal filter
//! base of subgroups. HS membership, tenacity, sequence names and mixing.

use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::groups::{self, condition_stabilizer, Automorphism, FinGroup};
use crate::limits::Limits;
use crate::names::{NameId, NameStore, PName};
use crate::poset::{Cond, FinPoset};

/// A finite base for a filter of subgroups of `ambient`.
///
/// The generated filter is every subgroup containing some base element.
#[derive(Clone, Debug)]
pub struct FilterBase {
    ambient: FinGroup,
    base: Vec<FinGroup>,
    labels: Vec<String>,
}

impl FilterBase {
    pub fn new(ambient: FinGroup, base: Vec<(String, FinGroup)>) -> Result<Self> {
        let mut groups = Vec::with_capacity(base.len());
        let mut labels = Vec::with_capacity(base.len());
        for (label, b) in base {
            if !b.is_subgroup_of(&ambient) {
                return Err(Error::InvalidSpec(format!("base element {label} is not a subgroup of the group")));
            }
            groups.push(b);
            labels.push(label);
        }
        Ok(FilterBase { ambient, base: groups, labels })
    }

    pub fn ambient(&self) -> &FinGroup {
        &self.ambient
    }

    pub fn base(&self) -> &[FinGroup] {
        &self.base
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the first base element contained in `h`.
    pub fn witness_for(&self, h: &FinGroup) -> Option<usize> {
        self.base.iter().position(|b| b.is_subgroup_of(h))
    }

    /// `h` is in the generated filter.
    pub fn contains(&self, h: &FinGroup) -> bool {
        self.witness_for(h).is_some()
    }

    /// First pair of base elements whose intersection contains no base element.
    pub fn directedness_failure(&self) -> Option<(usize, usize)> {
        for i in 0..self.base.len() {
            for j in i + 1..self.base.len() {
                let meet = self.base[i].intersection(&self.base[j]).expect("same ambient");
                if !self.contains(&meet) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_directed(&self) -> bool {
        self.directedness_failure().is_none()
    }

    /// The filter contains the trivial group, so every subgroup is in it.
    pub fn is_degenerate(&self) -> bool {
        self.contains(&self.ambient.trivial())
    }
}

/// A conjugate of a base element that falls outside the filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityWitness {
    /// Ambient index of `π`.
    pub element: usize,
    /// Index of `B` in the base.
    pub base: usize,
    /// `πBπ⁻¹`.
    pub conjugate: FinGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TenacityReport {
    pub tenacious: Vec<Cond>,
    pub dense: bool,
    pub all: bool,
}

/// Output of [`SymSystem::seq_name`].
#[derive(Clone, Debug)]
pub struct SeqName {
    pub name: PName,
    /// `⋂ sym(ẏ_i)`, or the whole group for the empty sequence.
    pub intersection: FinGroup,
    /// Base element inside `intersection`, present when every `ẏ_i` is in HS
    /// and the intersection is in the filter.
    pub certificate: Option<usize>,
}

/// Why a mixed name carries no HS certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MixDiagnostic {
    NotHs(Cond),
    NotTenacious(Cond),
    IntersectionNotInFilter,
}

/// Output of [`SymSystem::mix`].
#[derive(Clone, Debug)]
pub struct Mix {
    pub name: PName,
    /// `⋂_p (sym(ẏ_p) ∩ stab(p))`.
    pub subgroup: FinGroup,
    /// Base element inside `subgroup`, when the certificate goes through.
    pub certificate: Option<usize>,
    pub diagnostics: Vec<MixDiagnostic>,
}

/// A symmetric system `⟨P, 𝒢, ℱ⟩`.
pub struct SymSystem {
    forcing: Arc<Forcing>,
    group: FinGroup,
    filter: FilterBase,
    catalogue: Vec<(String, FinGroup)>,
    sym_memo: DashMap<NameId, FinGroup>,
    hs_memo: DashMap<NameId, bool>,
}

impl SymSystem {
    pub fn new(forcing: Arc<Forcing>, filter: FilterBase) -> Result<Self> {
        let group = filter.ambient().clone();
        if group.poset().id() != forcing.poset().id() {
            return Err(Error::ForeignGroup);
        }
        Ok(SymSystem {
            forcing,
            group,
            filter,
            catalogue: Vec::new(),
            sym_memo: DashMap::new(),
            hs_memo: DashMap::new(),
        })
    }

    /// Builds the system on a fresh name store for `poset`.
    pub fn build(poset: Arc<FinPoset>, filter: FilterBase, limits: Limits) -> Result<Self> {
        let store = Arc::new(NameStore::new(poset, limits));
        SymSystem::new(Arc::new(Forcing::new(store)), filter)
    }

    /// Labelled subgroups used when rendering witnesses.
    pub fn with_catalogue(mut self, catalogue: Vec<(String, FinGroup)>) -> Self {
        self.catalogue = catalogue;
        self
    }

    pub fn forcing(&self) -> &Arc<Forcing> {
        &self.forcing
    }

    pub fn names(&self) -> &Arc<NameStore> {
        self.forcing.names()
    }

    pub fn poset(&self) -> &FinPoset {
        self.forcing.poset()
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn filter(&self) -> &FilterBase {
        &self.filter
    }

    /// A label for `h`: a base or catalogue label when one matches, else its elements.
    pub fn describe(&self, h: &FinGroup) -> String {
        if let Some(i) = self.filter.base.iter().position(|b| b == h) {
            return self.filter.labels[i].clone();
        }
        if let Some((l, _)) = self.catalogue.iter().find(|(_, g)| g == h) {
            return l.clone();
        }
        let parts: Vec<String> = h.elements().map(|e| e.render(self.poset())).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn render_element(&self, i: usize) -> String {
        self.group.element(i).render(self.poset())
    }

    pub fn filter_contains(&self, h: &FinGroup) -> bool {
        self.filter.contains(h)
    }

    /// First `(π, B)` with `πBπ⁻¹` outside the filter, scanning elements then base.
    pub fn normality_witness(&self) -> Option<NormalityWitness> {
        for e in self.group.indices() {
            let pi = self.group.element(e);
            for (bi, b) in self.filter.base.iter().enumerate() {
                let c = b.conjugate_by(pi).expect("base lies in the group");
                if !self.filter.contains(&c) {
                    return Some(NormalityWitness { element: e, base: bi, conjugate: c });
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    pub fn is_degenerate(&self) -> bool {
        self.filter.is_degenerate()
    }

    pub fn apply(&self, pi: &Automorphism, x: &PName) -> Result<PName> {
        groups::apply(pi, x, self.names())
    }

    /// `sym(ẋ)`, memoized.
    pub fn sym(&self, x: &PName) -> Result<FinGroup> {
        if let Some(g) = self.sym_memo.get(&x.id()) {
            return Ok(g.clone());
        }
        let g = groups::stabilizer(&self.group, x, self.names())?;
        self.sym_memo.insert(x.id(), g.clone());
        Ok(g)
    }

    /// Hereditary symmetry, memoized.
    pub fn in_hs(&self, x: &PName) -> Result<bool> {
        self.names().ensure_owned(x)?;
        if let Some(b) = self.hs_memo.get(&x.id()) {
            return Ok(*b);
        }
        let mut ok = self.filter.contains(&self.sym(x)?);
        if ok {
            for y in x.appearing() {
                if !self.in_hs(&y)? {
                    ok = false;
                    break;
                }
            }
        }
        self.hs_memo.insert(x.id(), ok);
        Ok(ok)
    }

    /// A name in the hereditary closure of `ẋ` whose stabilizer is outside the filter.
    pub fn hs_failure(&self, x: &PName) -> Result<Option<PName>> {
        if self.in_hs(x)? {
            return Ok(None);
        }
        let mut closure = x.closure();
        closure.sort_by_key(|y| std::cmp::Reverse(y.rank()));
        for y in closure {
            if !self.filter.contains(&self.sym(&y)?) {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    pub fn is_tenacious(&self, p: Cond) -> Result<bool> {
        self.poset().check_cond(p)?;
        Ok(self.filter.contains(&condition_stabilizer(&self.group, p)))
    }

    pub fn tenacity_report(&self) -> TenacityReport {
        let poset = self.poset();
        let tenacious: Vec<Cond> =
            poset.conds().filter(|&p| self.filter.contains(&condition_stabilizer(&self.group, p))).collect();
        let dense = poset.is_dense(&tenacious, poset.top());
        let all = tenacious.len() == poset.len();
        TenacityReport { tenacious, dense, all }
    }

    /// `{⟨ǐ, ẏ_i⟩•}•` with the stabilizer-intersection certificate.
    pub fn seq_name(&self, entries: &[(usize, PName)]) -> Result<SeqName> {
        let store = self.names();
        let mut seen = std::collections::BTreeSet::new();
        for (i, y) in entries {
            if !seen.insert(*i) {
                return Err(Error::DuplicateIndex(*i));
            }
            store.ensure_owned(y)?;
        }
        let mut pairs = Vec::with_capacity(entries.len());
        let mut intersection = self.group.clone();
        let mut all_hs = true;
        for (i, y) in entries {
            pairs.push(store.bullet_pair(&store.nat(*i)?, y)?);
            intersection = intersection.intersection(&self.sym(y)?)?;
            all_hs &= self.in_hs(y)?;
        }
        let name = store.bullet_set(pairs)?;
        let certificate = if all_hs { self.filter.witness_for(&intersection) } else { None };
        debug_assert!(intersection.is_subgroup_of(&self.sym(&name)?));
        Ok(SeqName { name, intersection, certificate })
    }

    /// `⋃_{p ∈ D} ẏ_p↾p` over an antichain `D`, with the HS certificate when available.
    pub fn mix(&self, assignment: &[(Cond, PName)]) -> Result<Mix> {
        let poset = self.poset();
        for (i, (p, y)) in assignment.iter().enumerate() {
            poset.check_cond(*p)?;
            self.names().ensure_owned(y)?;
            for (q, _) in &assignment[..i] {
                if poset.compatible(*p, *q) {
                    return Err(Error::NotAntichain(poset.label(*q).into(), poset.label(*p).into()));
                }
            }
        }
        let mut entries = Vec::new();
        let mut subgroup = self.group.clone();
        let mut diagnostics = Vec::new();
        for (p, y) in assignment {
            let r = self.forcing.restrict(y, *p)?;
            entries.extend(r.entries().iter().cloned());
            let stab = condition_stabilizer(&self.group, *p);
            if !self.in_hs(y)? {
                diagnostics.push(MixDiagnostic::NotHs(*p));
            }
            if !self.filter.contains(&stab) {
                diagnostics.push(MixDiagnostic::NotTenacious(*p));
            }
            subgroup = subgroup.intersection(&self.sym(y)?)?.intersection(&stab)?;
        }
        let name = self.names().canonicalize(entries)?;
        let mut certificate = None;
        if diagnostics.is_empty() {
            certificate = self.filter.witness_for(&subgroup);
            if certificate.is_none() {
                diagnostics.push(MixDiagnostic::IntersectionNotInFilter);
            }
        }
        debug_assert!(subgroup.is_subgroup_of(&self.sym(&name)?));
        Ok(Mix { name, subgroup, certificate, diagnostics })
    }
}

impl std::fmt::Debug for SymSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymSystem")
            .field("poset", &self.poset().len())
            .field("group", &self.group.order())
            .field("base", &self.filter.labels)
            .finish()
    }
}

/// A product system with the bookkeeping to lift factor automorphisms.
pub struct ProductSystem {
    pub system: SymSystem,
    left_len: usize,
    right_len: usize,
    left_elements: Vec<Automorphism>,
    right_elements: Vec<Automorphism>,
}

impl ProductSystem {
    /// Condition `(a, b)` of the product.
    pub fn pair(&self, a: Cond, b: Cond) -> Cond {
        Cond::from(a.index() * self.right_len + b.index())
    }

    pub fn left_len(&self) -> usize {
        self.left_len
    }

    pub fn right_len(&self) -> usize {
        self.right_len
    }

    /// `(π₁, π₂)` as an automorphism of the product poset.
    pub fn lift(&self, left: &Automorphism, right: &Automorphism) -> Automorphism {
        lift_pair(left, right, self.right_len)
    }

    /// `(id, π₂)` for every `π₂` of the right factor's group.
    pub fn right_lifts(&self) -> Vec<Automorphism> {
        let id = Automorphism::identity(self.left_len);
        self.right_elements.iter().map(|r| self.lift(&id, r)).collect()
    }

    /// `(π₁, id)` for every `π₁` of the left factor's group.
    pub fn left_lifts(&self) -> Vec<Automorphism> {
        let id = Automorphism::identity(self.right_len);
        self.left_elements.iter().map(|l| self.lift(l, &id)).collect()
    }
}

fn lift_pair(left: &Automorphism, right: &Automorphism, right_len: usize) -> Automorphism {
    let mut perm = Vec::with_capacity(left.len() * right_len);
    for &a in left.perm() {
        for &b in right.perm() {
            perm.push(a * right_len as u32 + b);
        }
    }
    Automorphism::from_perm_unchecked(perm)
}

/// Product poset, componentwise group, base `{B₁ × B₂}`.
pub fn product_system(left: &SymSystem, right: &SymSystem, limits: &Limits) -> Result<ProductSystem> {
    let poset = Arc::new(FinPoset::product(left.poset(), right.poset(), limits)?);
    let (n1, n2) = (left.poset().len(), right.poset().len());
    let order = left.group.order() * right.group.order();
    if order > limits.max_group {
        return Err(Error::GroupTooLarge { size: order, cap: limits.max_group });
    }
    let left_elements: Vec<Automorphism> = left.group.elements().cloned().collect();
    let right_elements: Vec<Automorphism> = right.group.elements().cloned().collect();
    let li: Vec<usize> = left.group.indices().collect();
    let ri: Vec<usize> = right.group.indices().collect();
    // identity first in each factor, so the product identity comes first
    let lid = li.iter().position(|&i| i == left.group.identity_index()).expect("identity");
    let rid = ri.iter().position(|&i| i == right.group.identity_index()).expect("identity");
    let lorder = reorder_identity_first(li.len(), lid);
    let rorder = reorder_identity_first(ri.len(), rid);
    let mut elements = Vec::with_capacity(order);
    let mut factors = std::collections::HashMap::with_capacity(order);
    for &a in &lorder {
        for &b in &rorder {
            let e = lift_pair(&left_elements[a], &right_elements[b], n2);
            factors.insert(e.clone(), (li[a], ri[b]));
            elements.push(e);
        }
    }
    let group = FinGroup::from_elements_unchecked(poset.clone(), elements);
    let mut base = Vec::new();
    for (b1, l1) in left.filter.base.iter().zip(&left.filter.labels) {
        for (b2, l2) in right.filter.base.iter().zip(&right.filter.labels) {
            let h = group.restrict_to(|pi| {
                let (a, b) = factors[pi];
                b1.contains_index(a) && b2.contains_index(b)
            });
            base.push((format!("{l1} x {l2}"), h));
        }
    }
    let filter = FilterBase::new(group, base)?;
    let system = SymSystem::build(poset, filter, *left.names().limits())?;
    Ok(ProductSystem { system, left_len: n1, right_len: n2, left_elements, right_elements })
}

fn reorder_identity_first(len: usize, id: usize) -> Vec<usize> {
    std::iter::once(id).chain((0..len).filter(|&i| i != id)).collect()
}

/// `⟨P, aut(P), {aut(P)}⟩`.
pub fn trivial_full_system(poset: Arc<FinPoset>, limits: Limits) -> Result<SymSystem> {
    let auts = groups::poset_automorphisms(&poset, limits.max_group)?;
    let group = FinGroup::from_elements_unchecked(poset.clone(), auts);
    let filter = FilterBase::new(group.clone(), vec![("aut(P)".into(), group)])?;
    SymSystem::build(poset, filter, limits)
}
