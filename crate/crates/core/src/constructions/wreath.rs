//! Wreath-product systems over a finite structure `M`: conditions are
//! partial functions `M × A × B → 2`, the group is `aut(M) ≀ Sym(A)`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::groups::{Automorphism, FinGroup};
use crate::limits::Limits;
use crate::names::PName;
use crate::poset::Cond;
use crate::symmetric::{FilterBase, SymSystem};

use super::cohen::{partial_function_poset, CohenCond};
use super::render_set;
use super::structure::FinStructure;
use crate::suites::SuiteReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathSpec {
    pub structure: FinStructure,
    /// `|A|`.
    pub columns: usize,
    /// `|B|`.
    pub values: usize,
    /// Most cells `(m, α)` a condition may touch.
    pub support: usize,
    /// Bound on `|N|` in the base elements `fix(N, E)`.
    pub fix_rows: usize,
    /// Bound on `|E|` in the base elements `fix(N, E)`.
    pub fix_columns: usize,
}

impl WreathSpec {
    pub fn new(structure: FinStructure, columns: usize, values: usize, support: usize) -> Self {
        WreathSpec { structure, columns, values, support, fix_rows: 1, fix_columns: 1 }
    }
}

/// `(π*, (π_m)_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub star: Vec<usize>,
    pub columns: Vec<Vec<usize>>,
}

impl WreathElement {
    /// `(m, α) ↦ (π*(m), π_m(α))`.
    pub fn cell(&self, m: usize, alpha: usize) -> (usize, usize) {
        (self.star[m], self.columns[m][alpha])
    }

    pub fn render(&self) -> String {
        let cols: Vec<String> =
            self.columns.iter().map(|c| c.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("")).collect();
        format!("<{}; {}>", self.star.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(""), cols.join(","))
    }
}

/// A lift of a structure automorphism produced by [`WreathSystem::disjointify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointLift {
    /// Ambient index of the lift.
    pub element: usize,
    /// `πp`.
    pub image: Cond,
    /// `πp` and `p` agree wherever both are defined.
    pub agree: bool,
    /// `πp` and `p` have a common extension inside the support-bounded poset.
    pub compatible_in_poset: bool,
}

/// A forcing pattern `p ⊩ ȧ_m ∈ Ḃ`, `p ⊩ ȧ_m' ∉ Ḃ` with its disjointified lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportWitness {
    pub condition: Cond,
    pub row: usize,
    pub image_row: usize,
    pub lift: DisjointLift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportVerdict {
    /// No witness pattern exists.
    Supported,
    /// A witness whose lift fixes `N` pointwise but moves `Ḃ`.
    NotSupported(SupportWitness),
    /// A witness whose lift fixes `Ḃ`; `p ∪ πp` is a function but exceeds the
    /// support bound, so the pattern comes from truncation.
    Artifact(SupportWitness),
    /// A witness whose lift fixes `Ḃ` and is compatible in the poset. Cannot
    /// happen for a sound forcing relation.
    Contradiction(SupportWitness),
    /// Every candidate failed to disjointify.
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportReport {
    pub verdict: SupportVerdict,
    /// Some `fix(N, E)` with `|E|` within the configured bound lies in `sym(Ḃ)`.
    pub precondition: bool,
    /// `fix(N, A) ≤ sym(Ḃ)`.
    pub fixed: bool,
    pub candidates: usize,
}

/// `(m, α, β, value)` tuples, sorted.
pub type WreathCond = Vec<(usize, usize, usize, u8)>;

pub struct WreathSystem {
    pub spec: WreathSpec,
    pub system: SymSystem,
    conds: Vec<CohenCond>,
    cond_index: HashMap<CohenCond, Cond>,
    elements: Vec<WreathElement>,
    element_index: HashMap<WreathElement, usize>,
    gens: Vec<Vec<PName>>,
    rows: Vec<PName>,
    all_rows: PName,
    relation_names: Vec<(String, PName)>,
}

pub fn wreath_system(spec: WreathSpec, limits: Limits) -> Result<WreathSystem> {
    let (m, a, b) = (spec.structure.size(), spec.columns, spec.values);
    if a < 2 {
        return Err(Error::InvalidSpec(format!("at least 2 columns are needed, got {a}")));
    }
    if b == 0 {
        return Err(Error::InvalidSpec("at least one value is needed".into()));
    }
    if spec.support == 0 || spec.support > m * a {
        return Err(Error::InvalidSpec(format!("support must satisfy 1 <= s <= {}, got {}", m * a, spec.support)));
    }
    let (poset, conds) = partial_function_poset(m * a, b, spec.support, |c| render(c, a), &limits)?;
    let poset = Arc::new(poset);
    let col_perms: Vec<Vec<usize>> = (0..a).permutations(a).collect();
    let order = (spec.structure.automorphisms().len() as u128)
        .saturating_mul((col_perms.len() as u128).saturating_pow(m as u32));
    if order > limits.max_group as u128 {
        return Err(Error::GroupTooLarge { size: order.min(usize::MAX as u128) as usize, cap: limits.max_group });
    }
    let cond_index: HashMap<CohenCond, Cond> =
        conds.iter().cloned().enumerate().map(|(i, c)| (c, Cond::from(i))).collect();
    let mut elements = Vec::with_capacity(order as usize);
    for star in spec.structure.automorphisms() {
        for columns in (0..m).map(|_| col_perms.iter().cloned()).multi_cartesian_product() {
            elements.push(WreathElement { star: star.clone(), columns });
        }
    }
    let automorphisms: Vec<Automorphism> = elements
        .iter()
        .map(|e| {
            let perm = conds
                .iter()
                .map(|c| {
                    let mut image: CohenCond = c
                        .iter()
                        .map(|&(cell, beta, v)| {
                            let (m2, a2) = e.cell(cell / a, cell % a);
                            (m2 * a + a2, beta, v)
                        })
                        .collect();
                    image.sort_unstable();
                    cond_index[&image].0
                })
                .collect();
            Automorphism::from_perm_unchecked(perm)
        })
        .collect();
    debug_assert!(automorphisms.iter().all(|e| Automorphism::new(&poset, e.perm().to_vec()).is_ok()));
    let group = FinGroup::from_elements_unchecked(poset.clone(), automorphisms);
    let element_index: HashMap<WreathElement, usize> =
        elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();

    let fix = |n: &BTreeSet<usize>, e: &BTreeSet<usize>| {
        group.restrict_to(|pi| {
            let el = &elements[group.index_of(pi).expect("member")];
            n.iter().all(|&r| el.star[r] == r && e.iter().all(|&c| el.columns[r][c] == c))
        })
    };
    let subsets = |size: usize, bound: usize| -> Vec<BTreeSet<usize>> {
        (0..=bound.min(size)).flat_map(|k| (0..size).combinations(k)).map(|s| s.into_iter().collect()).collect()
    };
    let mut base: Vec<(String, FinGroup)> = Vec::new();
    for n in subsets(m, spec.fix_rows) {
        for e in subsets(a, spec.fix_columns) {
            let h = fix(&n, &e);
            if !base.iter().any(|(_, g)| *g == h) {
                base.push((format!("fix({},{})", render_set(&n), render_set(&e)), h));
            }
        }
    }
    let mut catalogue: Vec<(String, FinGroup)> = Vec::new();
    for n in subsets(m, m) {
        for e in subsets(a, a) {
            let h = fix(&n, &e);
            if !catalogue.iter().any(|(_, g)| *g == h) {
                catalogue.push((format!("fix({},{})", render_set(&n), render_set(&e)), h));
            }
        }
    }
    let filter = FilterBase::new(group, base)?;
    let system = SymSystem::build(poset, filter, limits)?.with_catalogue(catalogue);

    let store = system.names().clone();
    let mut gens = vec![Vec::with_capacity(a); m];
    for (row, gens_row) in gens.iter_mut().enumerate() {
        for alpha in 0..a {
            let cell = row * a + alpha;
            let mut entries = Vec::new();
            for (k, c) in conds.iter().enumerate() {
                for &(c2, beta, v) in c {
                    if c2 == cell && v == 1 {
                        entries.push((Cond::from(k), store.nat(beta)?));
                    }
                }
            }
            gens_row.push(store.canonicalize(entries)?);
        }
    }
    let rows: Vec<PName> = gens.iter().map(|g| store.bullet_set(g.iter().cloned())).collect::<Result<_>>()?;
    let all_rows = store.bullet_set(rows.iter().cloned())?;
    let mut relation_names = Vec::new();
    for r in spec.structure.relations() {
        let mut members = Vec::new();
        for t in &r.tuples {
            if r.arity == 1 {
                members.push(rows[t[0]].clone());
            } else {
                let mut pairs = Vec::new();
                for (i, &mi) in t.iter().enumerate() {
                    pairs.push(store.bullet_pair(&store.nat(i)?, &rows[mi])?);
                }
                members.push(store.bullet_set(pairs)?);
            }
        }
        relation_names.push((r.name.clone(), store.bullet_set(members)?));
    }
    Ok(WreathSystem { spec, system, conds, cond_index, elements, element_index, gens, rows, all_rows, relation_names })
}

fn render(c: &CohenCond, columns: usize) -> String {
    let parts: Vec<String> =
        c.iter().map(|(cell, beta, v)| format!("({},{},{beta})={v}", cell / columns, cell % columns)).collect();
    format!("[{}]", parts.join(","))
}

impl WreathSystem {
    pub fn system(&self) -> &SymSystem {
        &self.system
    }

    fn rows_len(&self) -> usize {
        self.spec.structure.size()
    }

    /// `ẋ_{m,α}`.
    pub fn gen(&self, m: usize, alpha: usize) -> Result<PName> {
        self.gens
            .get(m)
            .and_then(|r| r.get(alpha))
            .cloned()
            .ok_or_else(|| Error::InvalidSpec(format!("gen({m},{alpha}) is out of range")))
    }

    /// `ȧ_m`.
    pub fn a(&self, m: usize) -> Result<PName> {
        self.rows.get(m).cloned().ok_or_else(|| Error::InvalidSpec(format!("a({m}) is out of range")))
    }

    /// `Ȧ`.
    pub fn a_name(&self) -> PName {
        self.all_rows.clone()
    }

    pub fn relation_name(&self, name: &str) -> Result<PName> {
        self.relation_names
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, x)| x.clone())
            .ok_or_else(|| Error::InvalidSpec(format!("unknown relation {name}")))
    }

    pub fn relation_names(&self) -> &[(String, PName)] {
        &self.relation_names
    }

    pub fn element(&self, k: usize) -> &WreathElement {
        &self.elements[k]
    }

    pub fn element_index(&self, e: &WreathElement) -> Option<usize> {
        self.element_index.get(e).copied()
    }

    pub fn condition(&self, p: Cond) -> WreathCond {
        let a = self.spec.columns;
        self.conds[p.index()].iter().map(|&(cell, beta, v)| (cell / a, cell % a, beta, v)).collect()
    }

    pub fn cond_of(&self, tuples: &[(usize, usize, usize, u8)]) -> Result<Cond> {
        let a = self.spec.columns;
        let mut c: CohenCond = tuples.iter().map(|&(m, alpha, beta, v)| (m * a + alpha, beta, v)).collect();
        c.sort_unstable();
        c.dedup();
        self.cond_index.get(&c).copied().ok_or_else(|| Error::UnknownCondition(render(&c, a)))
    }

    /// `fix(N, E)`.
    pub fn fix(&self, n: &BTreeSet<usize>, e: &BTreeSet<usize>) -> FinGroup {
        let group = self.system.group();
        group.restrict_to(|pi| {
            let el = &self.elements[group.index_of(pi).expect("member")];
            n.iter().all(|&r| el.star[r] == r && e.iter().all(|&c| el.columns[r][c] == c))
        })
    }

    /// The displayed identities for `ẋ_{m,α}`, `ȧ_m`, `Ȧ` and the relation names,
    /// over every group element.
    pub fn equivariance(&self) -> Result<SuiteReport> {
        let mut report = SuiteReport::default();
        let group = self.system.group();
        let (m, a) = (self.rows_len(), self.spec.columns);
        for k in group.indices() {
            let pi = group.element(k);
            let el = &self.elements[k];
            let mut check = |ok: bool, what: String| {
                report.checks += 1;
                if !ok {
                    report.failures.push(format!("{}: {what}", el.render()));
                }
            };
            for row in 0..m {
                for alpha in 0..a {
                    let (r2, a2) = el.cell(row, alpha);
                    let moved = self.system.apply(pi, &self.gens[row][alpha])?;
                    check(moved == self.gens[r2][a2], format!("gen({row},{alpha}) -> gen({r2},{a2})"));
                }
                let moved = self.system.apply(pi, &self.rows[row])?;
                check(moved == self.rows[el.star[row]], format!("a({row}) -> a({})", el.star[row]));
            }
            check(self.system.apply(pi, &self.all_rows)? == self.all_rows, "A fixed".into());
            for (name, x) in &self.relation_names {
                check(self.system.apply(pi, x)? == *x, format!("{name} fixed"));
            }
        }
        Ok(report)
    }

    /// Lifts `π*` to `π` so that `πp` and `p` use disjoint columns on every moved row.
    ///
    /// Rows fixed by `π*` get the identity column permutation.
    pub fn disjointify(&self, star: &[usize], p: Cond) -> Result<DisjointLift> {
        let (m, a) = (self.rows_len(), self.spec.columns);
        self.system.poset().check_cond(p)?;
        if !self.spec.structure.automorphisms().iter().any(|s| s == star) {
            return Err(Error::NotAutomorphism(format!("{star:?} is not an automorphism of the structure")));
        }
        let mut used = vec![BTreeSet::new(); m];
        for &(cell, _, _) in &self.conds[p.index()] {
            used[cell / a].insert(cell % a);
        }
        let mut columns = Vec::with_capacity(m);
        for row in 0..m {
            let target = star[row];
            if target == row {
                columns.push((0..a).collect());
                continue;
            }
            let free: Vec<usize> = (0..a).filter(|c| !used[target].contains(c)).collect();
            if free.len() < used[row].len() {
                return Err(Error::InsufficientColumns {
                    row,
                    needed: used[row].len(),
                    blocked: used[target].len(),
                    columns: a,
                });
            }
            let mut perm = vec![usize::MAX; a];
            for (&c, &f) in used[row].iter().zip(&free) {
                perm[c] = f;
            }
            let taken: BTreeSet<usize> = perm.iter().copied().filter(|&x| x != usize::MAX).collect();
            let mut rest = (0..a).filter(|c| !taken.contains(c));
            for slot in perm.iter_mut().filter(|x| **x == usize::MAX) {
                *slot = rest.next().expect("bijection");
            }
            columns.push(perm);
        }
        let el = WreathElement { star: star.to_vec(), columns };
        let element = self.element_index[&el];
        let image = self.system.group().element(element).image(p);
        let mut values = HashMap::new();
        let mut agree = true;
        for c in [&self.conds[p.index()], &self.conds[image.index()]] {
            for &(cell, beta, v) in c {
                agree &= *values.entry((cell, beta)).or_insert(v) == v;
            }
        }
        let compatible_in_poset = self.system.poset().compatible(p, image);
        Ok(DisjointLift { element, image, agree, compatible_in_poset })
    }

    /// Searches for the forcing pattern that rules out `N` as a support of `Ḃ`.
    pub fn support_check(&self, b: &PName, n: &BTreeSet<usize>) -> Result<SupportReport> {
        let m = self.rows_len();
        if let Some(&r) = n.iter().find(|&&r| r >= m) {
            return Err(Error::InvalidSpec(format!("row {r} is out of range")));
        }
        let system = &self.system;
        let forcing = system.forcing();
        let poset = system.poset();
        let sym = system.sym(b)?;
        let all_columns: BTreeSet<usize> = (0..self.spec.columns).collect();
        let fixed = self.fix(n, &all_columns).is_subgroup_of(&sym);
        let precondition = (0..=self.spec.fix_columns.min(self.spec.columns))
            .flat_map(|k| (0..self.spec.columns).combinations(k))
            .any(|e| self.fix(n, &e.into_iter().collect()).is_subgroup_of(&sym));

        let mut inside = Vec::with_capacity(m);
        let mut outside = Vec::with_capacity(m);
        for row in 0..m {
            let atom = Formula::member(self.rows[row].clone(), b.clone());
            let neg = atom.clone().not();
            let mut i = Vec::with_capacity(poset.len());
            let mut o = Vec::with_capacity(poset.len());
            for p in poset.conds() {
                i.push(forcing.forces(p, &atom)?);
                o.push(forcing.forces(p, &neg)?);
            }
            inside.push(i);
            outside.push(o);
        }

        let mut candidates = 0;
        let (mut not_supported, mut artifact, mut contradiction, mut inconclusive) = (None, None, None, None);
        for star in self.spec.structure.automorphisms() {
            if n.iter().any(|&r| star[r] != r) {
                continue;
            }
            for row in 0..m {
                let image_row = star[row];
                if image_row == row {
                    continue;
                }
                for p in poset.conds() {
                    if !(inside[row][p.index()] && outside[image_row][p.index()]) {
                        continue;
                    }
                    candidates += 1;
                    let lift = match self.disjointify(star, p) {
                        Ok(lift) => lift,
                        Err(e @ Error::InsufficientColumns { .. }) => {
                            inconclusive.get_or_insert_with(|| e.to_string());
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    let moves = !sym.contains_index(lift.element);
                    let compatible = lift.compatible_in_poset;
                    let w = SupportWitness { condition: p, row, image_row, lift };
                    if moves {
                        not_supported.get_or_insert(w);
                    } else if compatible {
                        contradiction.get_or_insert(w);
                    } else {
                        artifact.get_or_insert(w);
                    }
                }
            }
        }
        let verdict = if let Some(w) = contradiction {
            SupportVerdict::Contradiction(w)
        } else if let Some(w) = not_supported {
            SupportVerdict::NotSupported(w)
        } else if let Some(w) = artifact {
            SupportVerdict::Artifact(w)
        } else if let Some(reason) = inconclusive {
            SupportVerdict::Inconclusive(reason)
        } else {
            SupportVerdict::Supported
        };
        Ok(SupportReport { verdict, precondition, fixed, candidates })
    }
}
