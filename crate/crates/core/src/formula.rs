//! Bounded formulas in the forcing language.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::names::PName;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Name(PName),
    Var(String),
}

impl From<PName> for Term {
    fn from(x: PName) -> Self {
        Term::Name(x)
    }
}

impl Term {
    pub fn var(v: &str) -> Term {
        Term::Var(v.to_string())
    }

    fn substitute(&self, var: &str, value: &PName) -> Term {
        match self {
            Term::Var(v) if v == var => Term::Name(value.clone()),
            t => t.clone(),
        }
    }

    fn map_names(&self, f: &mut impl FnMut(&PName) -> Result<PName>) -> Result<Term> {
        Ok(match self {
            Term::Name(x) => Term::Name(f(x)?),
            Term::Var(v) => Term::Var(v.clone()),
        })
    }
}

/// Atoms `∈` and `=`, the connectives `¬ ∧ ∨`, and quantifiers bounded by a term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    In(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Term, Box<Formula>),
    Forall(String, Term, Box<Formula>),
}

impl Formula {
    /// `x ∈ y` between names.
    pub fn member(x: PName, y: PName) -> Formula {
        Formula::In(Term::Name(x), Term::Name(y))
    }

    /// `x = y` between names.
    pub fn equal(x: PName, y: PName) -> Formula {
        Formula::Eq(Term::Name(x), Term::Name(y))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn exists(var: &str, bound: impl Into<Term>, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), bound.into(), Box::new(body))
    }

    pub fn forall(var: &str, bound: impl Into<Term>, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), bound.into(), Box::new(body))
    }

    /// Replaces free occurrences of `var` by `value`.
    pub fn substitute(&self, var: &str, value: &PName) -> Formula {
        match self {
            Formula::In(a, b) => Formula::In(a.substitute(var, value), b.substitute(var, value)),
            Formula::Eq(a, b) => Formula::Eq(a.substitute(var, value), b.substitute(var, value)),
            Formula::Not(f) => Formula::Not(Box::new(f.substitute(var, value))),
            Formula::And(f, g) => Formula::And(Box::new(f.substitute(var, value)), Box::new(g.substitute(var, value))),
            Formula::Or(f, g) => Formula::Or(Box::new(f.substitute(var, value)), Box::new(g.substitute(var, value))),
            Formula::Exists(v, t, body) => {
                let body = if v == var { body.clone() } else { Box::new(body.substitute(var, value)) };
                Formula::Exists(v.clone(), t.substitute(var, value), body)
            }
            Formula::Forall(v, t, body) => {
                let body = if v == var { body.clone() } else { Box::new(body.substitute(var, value)) };
                Formula::Forall(v.clone(), t.substitute(var, value), body)
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::In(a, b) | Formula::Eq(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g) | Formula::Or(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Exists(v, t, body) | Formula::Forall(v, t, body) => {
                term(t, bound, out);
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn ensure_closed(&self) -> Result<()> {
        match self.free_vars().into_iter().next() {
            Some(v) => Err(Error::OpenFormula(v)),
            None => Ok(()),
        }
    }

    /// Rewrites every name parameter with `f`.
    pub fn map_names(&self, f: &mut impl FnMut(&PName) -> Result<PName>) -> Result<Formula> {
        Ok(match self {
            Formula::In(a, b) => Formula::In(a.map_names(f)?, b.map_names(f)?),
            Formula::Eq(a, b) => Formula::Eq(a.map_names(f)?, b.map_names(f)?),
            Formula::Not(g) => Formula::Not(Box::new(g.map_names(f)?)),
            Formula::And(g, h) => Formula::And(Box::new(g.map_names(f)?), Box::new(h.map_names(f)?)),
            Formula::Or(g, h) => Formula::Or(Box::new(g.map_names(f)?), Box::new(h.map_names(f)?)),
            Formula::Exists(v, t, body) => Formula::Exists(v.clone(), t.map_names(f)?, Box::new(body.map_names(f)?)),
            Formula::Forall(v, t, body) => Formula::Forall(v.clone(), t.map_names(f)?, Box::new(body.map_names(f)?)),
        })
    }

    /// Every name parameter, in order of occurrence.
    pub fn names(&self) -> Vec<PName> {
        let mut out = Vec::new();
        let _ = self.map_names(&mut |x| {
            out.push(x.clone());
            Ok(x.clone())
        });
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Name(x) => write!(f, "{x:?}"),
            Term::Var(v) => f.write_str(v),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::In(a, b) => write!(f, "{a} in {b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => write!(f, "not ({g})"),
            Formula::And(g, h) => write!(f, "({g}) and ({h})"),
            Formula::Or(g, h) => write!(f, "({g}) or ({h})"),
            Formula::Exists(v, t, g) => write!(f, "exists {v} in {t} ({g})"),
            Formula::Forall(v, t, g) => write!(f, "forall {v} in {t} ({g})"),
        }
    }
}
