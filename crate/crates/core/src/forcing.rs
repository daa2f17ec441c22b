//! The forcing relation over a finite poset, computed two independent ways.
//!
//! [`Forcing::forces`] follows the recursive clauses (density below `p` for
//! `∈`, `∨` and `∃`; pointwise for `=`, `∧` and `∀`) and memoizes every
//! subformula. [`Forcing::forces_oracle`] instead evaluates the formula in the
//! interpretation under each generic filter containing `p`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::error::Result;
use crate::formula::{Formula, Term};
use crate::hf::HfSet;
use crate::names::{restrict, NameId, NameStore, PName};
use crate::poset::{Cond, FinPoset, GenericFilter};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    In(Cond, NameId, NameId),
    Eq(Cond, NameId, NameId),
    Other(Cond, Formula),
}

/// Forcing engine for one poset, with its memo table.
pub struct Forcing {
    names: Arc<NameStore>,
    memo: DashMap<Key, bool>,
    generics: OnceLock<Vec<GenericFilter>>,
}

impl Forcing {
    pub fn new(names: Arc<NameStore>) -> Self {
        Forcing { names, memo: DashMap::new(), generics: OnceLock::new() }
    }

    pub fn names(&self) -> &Arc<NameStore> {
        &self.names
    }

    pub fn poset(&self) -> &FinPoset {
        self.names.poset()
    }

    pub fn generic_filters(&self) -> &[GenericFilter] {
        self.generics.get_or_init(|| self.poset().generic_filters())
    }

    /// Number of memoized `(condition, formula)` pairs.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn validate(&self, p: Cond, phi: &Formula) -> Result<()> {
        self.poset().check_cond(p)?;
        phi.ensure_closed()?;
        for x in phi.names() {
            self.names.ensure_owned(&x)?;
        }
        Ok(())
    }

    /// `p ⊩ φ` by the recursive definition.
    pub fn forces(&self, p: Cond, phi: &Formula) -> Result<bool> {
        self.validate(p, phi)?;
        Ok(self.force(p, phi))
    }

    /// `p ⊩ φ` by evaluation in every generic filter containing `p`.
    pub fn forces_oracle(&self, p: Cond, phi: &Formula) -> Result<bool> {
        self.validate(p, phi)?;
        Ok(self
            .generic_filters()
            .iter()
            .filter(|g| g.contains(p))
            .all(|g| Evaluator::new(g).eval(phi, &mut Vec::new())))
    }

    /// Truth of a closed formula in the interpretation by `g`.
    pub fn holds(&self, phi: &Formula, g: &GenericFilter) -> Result<bool> {
        phi.ensure_closed()?;
        for x in phi.names() {
            self.names.ensure_owned(&x)?;
        }
        Ok(Evaluator::new(g).eval(phi, &mut Vec::new()))
    }

    /// `p` forces `φ` or forces `¬φ`.
    pub fn decides(&self, p: Cond, phi: &Formula) -> Result<bool> {
        self.validate(p, phi)?;
        Ok(self.force(p, phi) || self.force_not(p, phi))
    }

    /// `ẋ↾p`.
    pub fn restrict(&self, x: &PName, p: Cond) -> Result<PName> {
        restrict(self, x, p)
    }

    fn force(&self, p: Cond, phi: &Formula) -> bool {
        match phi {
            Formula::In(Term::Name(x), Term::Name(y)) => self.force_in(p, x, y),
            Formula::Eq(Term::Name(x), Term::Name(y)) => self.force_eq(p, x, y),
            Formula::In(..) | Formula::Eq(..) => unreachable!("validated formulas are closed"),
            Formula::And(f, g) => self.force(p, f) && self.force(p, g),
            _ => {
                let key = Key::Other(p, phi.clone());
                if let Some(v) = self.memo.get(&key) {
                    return *v;
                }
                let v = self.force_compound(p, phi);
                self.memo.insert(key, v);
                v
            }
        }
    }

    fn force_not(&self, p: Cond, phi: &Formula) -> bool {
        let poset = self.poset();
        !poset.below(p).iter().any(|&q| self.force(q, phi))
    }

    fn force_compound(&self, p: Cond, phi: &Formula) -> bool {
        let poset = self.poset();
        match phi {
            Formula::Not(f) => self.force_not(p, f),
            Formula::Or(f, g) => poset.is_dense_where(p, |q| self.force(q, f) || self.force(q, g)),
            Formula::Exists(v, t, body) => {
                let Term::Name(t) = t else { unreachable!("validated formulas are closed") };
                let instances: Vec<(Cond, Formula)> =
                    t.entries().iter().map(|(r, z)| (*r, body.substitute(v, z))).collect();
                poset.is_dense_where(p, |q| instances.iter().any(|(r, inst)| poset.le(q, *r) && self.force(q, inst)))
            }
            Formula::Forall(v, t, body) => {
                let Term::Name(t) = t else { unreachable!("validated formulas are closed") };
                t.entries().iter().all(|(r, z)| {
                    let inst = body.substitute(v, z);
                    poset.below(p).iter().filter(|&&q| poset.le(q, *r)).all(|&q| self.force(q, &inst))
                })
            }
            Formula::In(..) | Formula::Eq(..) | Formula::And(..) => unreachable!(),
        }
    }

    /// `p ⊩ ẋ ∈ ẏ` iff `{q ≤ p : ∃⟨r, ż⟩ ∈ ẏ, q ≤ r, q ⊩ ẋ = ż}` is dense below `p`.
    fn force_in(&self, p: Cond, x: &PName, y: &PName) -> bool {
        let key = Key::In(p, x.id(), y.id());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let poset = self.poset();
        let v = poset.is_dense_where(p, |q| y.entries().iter().any(|(r, z)| poset.le(q, *r) && self.force_eq(q, x, z)));
        self.memo.insert(key, v);
        v
    }

    /// `p ⊩ ẋ = ẏ` iff every `⟨r, ż⟩` in either side has `q ⊩ ż ∈` (other side)
    /// for all `q ≤ p, r`.
    fn force_eq(&self, p: Cond, x: &PName, y: &PName) -> bool {
        if x == y {
            return true;
        }
        let (a, b) = if x.id() <= y.id() { (x, y) } else { (y, x) };
        let key = Key::Eq(p, a.id(), b.id());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let poset = self.poset();
        let included = |from: &PName, into: &PName| {
            from.entries()
                .iter()
                .all(|(r, z)| poset.below(p).iter().filter(|&&q| poset.le(q, *r)).all(|&q| self.force_in(q, z, into)))
        };
        let v = included(a, b) && included(b, a);
        self.memo.insert(key, v);
        v
    }
}

/// `ẋ^G = {ẏ^G : ∃p ∈ G, ⟨p, ẏ⟩ ∈ ẋ}`.
pub fn interpret(x: &PName, g: &GenericFilter) -> HfSet {
    Evaluator::new(g).value(x)
}

struct Evaluator<'a> {
    g: &'a GenericFilter,
    cache: HashMap<NameId, HfSet>,
}

impl<'a> Evaluator<'a> {
    fn new(g: &'a GenericFilter) -> Self {
        Evaluator { g, cache: HashMap::new() }
    }

    fn value(&mut self, x: &PName) -> HfSet {
        if let Some(v) = self.cache.get(&x.id()) {
            return v.clone();
        }
        let mut elems = Vec::new();
        for (p, y) in x.entries() {
            if self.g.contains(*p) {
                elems.push(self.value(y));
            }
        }
        let v = HfSet::from_elements(elems);
        self.cache.insert(x.id(), v.clone());
        v
    }

    fn term(&mut self, t: &Term, env: &[(String, HfSet)]) -> HfSet {
        match t {
            Term::Name(x) => self.value(x),
            Term::Var(v) => {
                env.iter().rev().find(|(name, _)| name == v).map(|(_, val)| val.clone()).expect("closed formula")
            }
        }
    }

    fn eval(&mut self, phi: &Formula, env: &mut Vec<(String, HfSet)>) -> bool {
        match phi {
            Formula::In(a, b) => {
                let (a, b) = (self.term(a, env), self.term(b, env));
                b.contains(&a)
            }
            Formula::Eq(a, b) => self.term(a, env) == self.term(b, env),
            Formula::Not(f) => !self.eval(f, env),
            Formula::And(f, g) => self.eval(f, env) && self.eval(g, env),
            Formula::Or(f, g) => self.eval(f, env) || self.eval(g, env),
            Formula::Exists(v, t, body) => {
                let domain = self.term(t, env);
                domain.elements().iter().any(|e| {
                    env.push((v.clone(), e.clone()));
                    let r = self.eval(body, env);
                    env.pop();
                    r
                })
            }
            Formula::Forall(v, t, body) => {
                let domain = self.term(t, env);
                domain.elements().iter().all(|e| {
                    env.push((v.clone(), e.clone()));
                    let r = self.eval(body, env);
                    env.pop();
                    r
                })
            }
        }
    }
}
