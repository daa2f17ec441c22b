//! Executes a parsed document against the core library.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use symext_core::constructions::{
    cohen_system, wreath_system, CohenSpec, CohenSystem, FinStructure, Relation, SupportVerdict, WreathSpec,
    WreathSystem,
};
use symext_core::family::{atomic_formulas, formula_family, name_family, FamilyConfig, FormulaConfig};
use symext_core::suites::{oracle_equivalence, restriction_identities};
use symext_core::{
    product_system, symmetry_lemma_check, trivial_full_system, Automorphism, Cond, FilterBase, FinGroup, FinPoset,
    Formula, Limits, MixDiagnostic, NameStore, PName, ProductSystem, SymSystem, Term,
};

use crate::ast::*;
use crate::render::render_statement;
use crate::report::{ConfigEcho, Outcome, Report, StatementReport, Stats};

/// Caps, the sampling seed and the worker count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Config {
    pub limits: Limits,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    /// Record per-statement wall time. Off by default so reports stay bit-identical.
    pub timing: bool,
}

impl Config {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            seed: self.seed,
            max_poset: self.limits.max_poset,
            max_group: self.limits.max_group,
            rank_cap: self.limits.rank_cap,
            max_entries: self.limits.max_entries,
        }
    }
}

const CLIP: usize = 240;

fn clip(s: String) -> String {
    if s.chars().count() <= CLIP {
        s
    } else {
        let mut t: String = s.chars().take(CLIP).collect();
        t.push_str("...");
        t
    }
}

pub(crate) enum Sys {
    Cohen(CohenSystem),
    Wreath(WreathSystem),
    Product(ProductSystem),
    Plain(SymSystem),
}

impl Sys {
    pub(crate) fn system(&self) -> &SymSystem {
        match self {
            Sys::Cohen(c) => c.system(),
            Sys::Wreath(w) => w.system(),
            Sys::Product(p) => &p.system,
            Sys::Plain(s) => s,
        }
    }

    fn render_element(&self, k: usize) -> String {
        match self {
            Sys::Wreath(w) => w.element(k).render(),
            _ => self.system().render_element(k),
        }
    }
}

pub(crate) struct Failure {
    cap: bool,
    message: String,
}

impl From<symext_core::Error> for Failure {
    fn from(e: symext_core::Error) -> Self {
        Failure { cap: e.is_cap(), message: e.to_string() }
    }
}

fn fail<T>(message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { cap: false, message: message.into() })
}

type Witness = BTreeMap<String, String>;

struct Out {
    outcome: Outcome,
    message: String,
    witness: Witness,
    stats: Option<Stats>,
}

impl Out {
    fn new(outcome: Outcome, message: impl Into<String>) -> Out {
        Out { outcome, message: message.into(), witness: Witness::new(), stats: None }
    }
}

/// A predicate's value; `None` when the check could not decide.
struct Verdict {
    value: Option<bool>,
    message: String,
    witness: Witness,
}

pub(crate) struct Env {
    config: Config,
    systems: HashMap<String, Arc<Sys>>,
    names: HashMap<String, PName>,
    /// Bindings whose declaration failed, and whether a cap caused it.
    broken_systems: HashMap<String, bool>,
    broken_names: HashMap<String, bool>,
    active: Option<String>,
}

/// Runs every statement in order and collects the outcomes.
pub fn run(doc: &SpecDocument, config: &Config) -> Report {
    with_pool(config.jobs, || run_env(doc, config).0)
}

pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

pub(crate) fn run_env(doc: &SpecDocument, config: &Config) -> (Report, Env) {
    let mut env = Env {
        config: *config,
        systems: HashMap::new(),
        names: HashMap::new(),
        broken_systems: HashMap::new(),
        broken_names: HashMap::new(),
        active: None,
    };
    let mut reports = Vec::with_capacity(doc.statements.len());
    for (index, st) in doc.statements.iter().enumerate() {
        let start = Instant::now();
        let out = match env.exec(&st.kind) {
            Ok(out) => out,
            Err(f) if f.cap => Out::new(Outcome::Inconclusive, f.message),
            Err(f) => Out::new(Outcome::Error, f.message),
        };
        reports.push(StatementReport {
            index,
            line: st.pos.line,
            column: st.pos.column,
            kind: kind_of(&st.kind),
            statement: render_statement(&st.kind),
            outcome: out.outcome,
            message: out.message,
            witness: out.witness,
            stats: out.stats,
            elapsed_ms: config.timing.then(|| start.elapsed().as_millis() as u64),
        });
    }
    (Report::new(config.echo(), reports), env)
}

fn kind_of(s: &Stmt) -> &'static str {
    match s {
        Stmt::System { .. } => "system",
        Stmt::Name { .. } => "name",
        Stmt::Use(_) => "use",
        Stmt::Assert { .. } => "assert",
        Stmt::Query(_) => "query",
        Stmt::Suite { .. } => "suite",
    }
}

/// Renders a core formula with canonical name text.
pub(crate) fn render_core_formula(store: &NameStore, f: &Formula) -> String {
    let t = |t: &Term| match t {
        Term::Name(x) => store.render(x),
        Term::Var(v) => v.clone(),
    };
    let r = |g: &Formula| render_core_formula(store, g);
    match f {
        Formula::In(a, b) => format!("{} in {}", t(a), t(b)),
        Formula::Eq(a, b) => format!("{} = {}", t(a), t(b)),
        Formula::Not(g) => format!("not ({})", r(g)),
        Formula::And(g, h) => format!("({}) and ({})", r(g), r(h)),
        Formula::Or(g, h) => format!("({}) or ({})", r(g), r(h)),
        Formula::Exists(v, b, g) => format!("exists {v} in {} ({})", t(b), r(g)),
        Formula::Forall(v, b, g) => format!("forall {v} in {} ({})", t(b), r(g)),
    }
}

impl Env {
    pub(crate) fn active_sys(&self) -> Result<Arc<Sys>, Failure> {
        let Some(name) = &self.active else { return fail("no active system") };
        self.sys(name)
    }

    fn sys(&self, name: &str) -> Result<Arc<Sys>, Failure> {
        match self.systems.get(name) {
            Some(s) => Ok(s.clone()),
            None => Err(Failure {
                cap: self.broken_systems.get(name).copied().unwrap_or(false),
                message: format!("system `{name}` is unavailable because its declaration failed"),
            }),
        }
    }

    fn exec(&mut self, st: &Stmt) -> Result<Out, Failure> {
        match st {
            Stmt::System { name, expr } => {
                self.systems.remove(name);
                self.active = Some(name.clone());
                let sys = self.build_system(expr).inspect_err(|f| {
                    self.broken_systems.insert(name.clone(), f.cap);
                })?;
                let s = sys.system();
                let msg = format!(
                    "{} conditions, group of order {}, {} base subgroups",
                    s.poset().len(),
                    s.group().order(),
                    s.filter().base().len()
                );
                self.systems.insert(name.clone(), Arc::new(sys));
                Ok(Out::new(Outcome::Ok, msg))
            }
            Stmt::Use(name) => {
                self.active = Some(name.clone());
                self.sys(name)?;
                Ok(Out::new(Outcome::Ok, ""))
            }
            Stmt::Name { name, expr } => {
                self.names.remove(name);
                let x = self.active_sys().and_then(|sys| self.eval_name(&sys, expr)).inspect_err(|f| {
                    self.broken_names.insert(name.clone(), f.cap);
                })?;
                let msg = format!("rank {}, {} entries", x.rank(), x.entries().len());
                self.names.insert(name.clone(), x);
                Ok(Out::new(Outcome::Ok, msg))
            }
            Stmt::Assert { negated, pred } => {
                let v = self.predicate(pred)?;
                let outcome = match v.value {
                    None => Outcome::Inconclusive,
                    Some(b) if b != *negated => Outcome::Pass,
                    Some(_) => Outcome::Fail,
                };
                Ok(Out { outcome, message: v.message, witness: v.witness, stats: None })
            }
            Stmt::Query(q) => self.query(q),
            Stmt::Suite { kind, params } => self.suite(*kind, params),
        }
    }

    fn build_system(&self, expr: &SystemExpr) -> Result<Sys, Failure> {
        let limits = self.config.limits;
        Ok(match expr {
            SystemExpr::Cohen { indices, bits, support, base } => {
                let mut spec = CohenSpec::new(*indices, *bits, *support);
                if let Some(b) = base {
                    spec = spec.with_base(b.iter().map(|e| e.iter().copied().collect()).collect());
                }
                Sys::Cohen(cohen_system(spec, limits)?)
            }
            SystemExpr::Wreath { structure, columns, values, support, fix_rows, fix_columns } => {
                let relations = structure
                    .relations
                    .iter()
                    .map(|r| Relation {
                        name: r.name.clone(),
                        arity: r.arity,
                        tuples: r.tuples.iter().cloned().collect(),
                    })
                    .collect();
                let m = FinStructure::new(structure.size, relations)?;
                let mut spec = WreathSpec::new(m, *columns, *values, *support);
                if let Some(v) = fix_rows {
                    spec.fix_rows = *v;
                }
                if let Some(v) = fix_columns {
                    spec.fix_columns = *v;
                }
                Sys::Wreath(wreath_system(spec, limits)?)
            }
            SystemExpr::Product(a, b) => {
                let (a, b) = (self.sys(a)?, self.sys(b)?);
                Sys::Product(product_system(a.system(), b.system(), &limits)?)
            }
            SystemExpr::TrivialFull(p) => Sys::Plain(trivial_full_system(Arc::new(build_poset(p, &limits)?), limits)?),
            SystemExpr::Explicit { poset, group, base } => {
                let poset = Arc::new(build_poset(poset, &limits)?);
                let perms = |ps: &[Perm]| -> Result<Vec<Automorphism>, Failure> {
                    ps.iter().map(|c| Ok(Automorphism::from_cycles(&poset, c)?)).collect()
                };
                let gens = perms(group)?;
                let g = FinGroup::generate(poset.clone(), &gens, limits.max_group)?;
                let mut subgroups = Vec::new();
                for b in base {
                    let label = if b.is_empty() {
                        "<id>".to_string()
                    } else {
                        let parts: Vec<String> = perms(b)?.iter().map(|a| a.render(&poset)).collect();
                        format!("<{}>", parts.join(", "))
                    };
                    subgroups.push((label, g.subgroup_generated(&perms(b)?)?));
                }
                let filter = FilterBase::new(g, subgroups)?;
                Sys::Plain(SymSystem::build(poset, filter, limits)?)
            }
        })
    }

    pub(crate) fn cond(&self, sys: &Sys, c: &CondExpr) -> Result<Cond, Failure> {
        let poset = sys.system().poset();
        match c.label() {
            None => Ok(poset.top()),
            Some(l) => Ok(poset.cond(&l)?),
        }
    }

    fn eval_name(&self, sys: &Sys, x: &NameExpr) -> Result<PName, Failure> {
        let s = sys.system();
        let store = s.names();
        Ok(match x {
            NameExpr::Empty => store.empty(),
            NameExpr::Check(h) => store.check(h)?,
            NameExpr::Bullet(xs) => {
                let ys = xs.iter().map(|y| self.eval_name(sys, y)).collect::<Result<Vec<_>, _>>()?;
                store.bullet_set(ys)?
            }
            NameExpr::Pair(a, b) => store.bullet_pair(&self.eval_name(sys, a)?, &self.eval_name(sys, b)?)?,
            NameExpr::Restrict(a, c) => s.forcing().restrict(&self.eval_name(sys, a)?, self.cond(sys, c)?)?,
            NameExpr::Gen(args) => match (sys, args.as_slice()) {
                (Sys::Cohen(c), [i]) => c.gen(*i)?,
                (Sys::Wreath(w), [m, a]) => w.gen(*m, *a)?,
                _ => return fail("gen does not fit the active system"),
            },
            NameExpr::Atom(m) => match sys {
                Sys::Wreath(w) => w.a(*m)?,
                _ => return fail("atom needs a wreath system"),
            },
            NameExpr::Atoms => match sys {
                Sys::Wreath(w) => w.a_name(),
                _ => return fail("atoms needs a wreath system"),
            },
            NameExpr::Rel(r) => match sys {
                Sys::Wreath(w) => w.relation_name(r)?,
                _ => return fail("rel needs a wreath system"),
            },
            NameExpr::Seq(es) => s.seq_name(&self.eval_pairs(sys, es)?)?.name,
            NameExpr::Mix(es) => s.mix(&self.eval_mix(sys, es)?)?.name,
            NameExpr::Ref(n) => match self.names.get(n) {
                Some(x) if store.owns(x) => x.clone(),
                Some(_) => return fail(format!("name `{n}` belongs to a different system")),
                None => {
                    return Err(Failure {
                        cap: self.broken_names.get(n).copied().unwrap_or(false),
                        message: format!("name `{n}` is unavailable because its declaration failed"),
                    })
                }
            },
        })
    }

    fn eval_pairs(&self, sys: &Sys, es: &[(usize, NameExpr)]) -> Result<Vec<(usize, PName)>, Failure> {
        es.iter().map(|(i, y)| Ok((*i, self.eval_name(sys, y)?))).collect()
    }

    fn eval_mix(&self, sys: &Sys, es: &[(CondExpr, NameExpr)]) -> Result<Vec<(Cond, PName)>, Failure> {
        es.iter().map(|(c, y)| Ok((self.cond(sys, c)?, self.eval_name(sys, y)?))).collect()
    }

    pub(crate) fn eval_formula(&self, sys: &Sys, f: &FormulaExpr) -> Result<Formula, Failure> {
        let term = |t: &TermExpr| -> Result<Term, Failure> {
            Ok(match t {
                TermExpr::Var(v) => Term::Var(v.clone()),
                TermExpr::Name(x) => Term::Name(self.eval_name(sys, x)?),
            })
        };
        let sub = |g: &FormulaExpr| self.eval_formula(sys, g).map(Box::new);
        Ok(match f {
            FormulaExpr::In(a, b) => Formula::In(term(a)?, term(b)?),
            FormulaExpr::Eq(a, b) => Formula::Eq(term(a)?, term(b)?),
            FormulaExpr::Not(g) => Formula::Not(sub(g)?),
            FormulaExpr::And(g, h) => Formula::And(sub(g)?, sub(h)?),
            FormulaExpr::Or(g, h) => Formula::Or(sub(g)?, sub(h)?),
            FormulaExpr::Exists(v, t, g) => Formula::Exists(v.clone(), term(t)?, sub(g)?),
            FormulaExpr::Forall(v, t, g) => Formula::Forall(v.clone(), term(t)?, sub(g)?),
        })
    }

    fn predicate(&self, p: &Predicate) -> Result<Verdict, Failure> {
        let decided = |b: bool, yes: &str, no: &str| Verdict {
            value: Some(b),
            message: if b { yes.to_string() } else { no.to_string() },
            witness: Witness::new(),
        };
        Ok(match p {
            Predicate::Hs(x) => {
                let sys = self.active_sys()?;
                let s = sys.system();
                let y = self.eval_name(&sys, x)?;
                let hs = s.in_hs(&y)?;
                let mut v = decided(hs, "hereditarily symmetric", "not hereditarily symmetric");
                if let Some(bad) = s.hs_failure(&y)? {
                    v.witness.insert("offender".into(), clip(s.names().render(&bad)));
                    v.witness.insert("offender_stabilizer".into(), clip(s.describe(&s.sym(&bad)?)));
                }
                match x {
                    NameExpr::Seq(es) => {
                        let seq = s.seq_name(&self.eval_pairs(&sys, es)?)?;
                        v.witness.insert("intersection".into(), clip(s.describe(&seq.intersection)));
                        let cert = seq.certificate.map_or("none".to_string(), |i| s.filter().label(i).to_string());
                        v.witness.insert("certificate".into(), cert);
                    }
                    NameExpr::Mix(es) => {
                        let mix = s.mix(&self.eval_mix(&sys, es)?)?;
                        let cert = mix.certificate.map_or("none".to_string(), |i| s.filter().label(i).to_string());
                        v.witness.insert("certificate".into(), cert);
                        let diags: Vec<String> = mix
                            .diagnostics
                            .iter()
                            .map(|d| match d {
                                MixDiagnostic::NotHs(c) => format!("not hs at {}", s.poset().label(*c)),
                                MixDiagnostic::NotTenacious(c) => format!("not tenacious: {}", s.poset().label(*c)),
                                MixDiagnostic::IntersectionNotInFilter => "intersection outside the filter".into(),
                            })
                            .collect();
                        if !diags.is_empty() {
                            v.witness.insert("diagnostics".into(), diags.join("; "));
                        }
                    }
                    _ => {}
                }
                v
            }
            Predicate::Normal(name) => {
                let sys = self.sys(name)?;
                let s = sys.system();
                match s.normality_witness() {
                    None => decided(true, "normal", ""),
                    Some(w) => {
                        let mut v = decided(false, "", "not normal: a conjugate of a base subgroup leaves the filter");
                        v.witness.insert("element".into(), sys.render_element(w.element));
                        v.witness.insert("base".into(), s.filter().label(w.base).to_string());
                        v.witness.insert("conjugate".into(), clip(s.describe(&w.conjugate)));
                        v
                    }
                }
            }
            Predicate::Directed(name) => {
                let sys = self.sys(name)?;
                let f = sys.system().filter();
                match f.directedness_failure() {
                    None => decided(true, "directed", ""),
                    Some((i, j)) => {
                        let mut v = decided(false, "", "not directed");
                        v.witness.insert("left".into(), f.label(i).to_string());
                        v.witness.insert("right".into(), f.label(j).to_string());
                        v
                    }
                }
            }
            Predicate::Degenerate(name) => {
                let sys = self.sys(name)?;
                decided(
                    sys.system().is_degenerate(),
                    "the filter contains the trivial group",
                    "the filter omits the trivial group",
                )
            }
            Predicate::Tenacious(name, c) => {
                let sys = self.sys(name)?;
                let s = sys.system();
                match c {
                    Some(c) => {
                        let p = self.cond(&sys, c)?;
                        let mut v = decided(s.is_tenacious(p)?, "tenacious", "not tenacious");
                        v.witness.insert(
                            "stabilizer".into(),
                            clip(s.describe(&symext_core::condition_stabilizer(s.group(), p))),
                        );
                        v
                    }
                    None => {
                        let r = s.tenacity_report();
                        let mut v = decided(r.all, "every condition is tenacious", "some condition is not tenacious");
                        if let Some(p) = s.poset().conds().find(|p| !r.tenacious.contains(p)) {
                            v.witness.insert("condition".into(), s.poset().label(p).to_string());
                            v.witness.insert("dense".into(), r.dense.to_string());
                        }
                        v
                    }
                }
            }
            Predicate::Forces(c, f) => {
                let sys = self.active_sys()?;
                let s = sys.system();
                let p = self.cond(&sys, c)?;
                let phi = self.eval_formula(&sys, f)?;
                let yes = s.forcing().forces(p, &phi)?;
                let mut v = decided(yes, "forced", "not forced");
                if !yes {
                    let neg = s.forcing().forces(p, &phi.clone().not())?;
                    v.witness.insert("negation_forced".into(), neg.to_string());
                }
                v
            }
            Predicate::Equal(a, b) => {
                let sys = self.active_sys()?;
                let (x, y) = (self.eval_name(&sys, a)?, self.eval_name(&sys, b)?);
                decided(x == y, "identical names", "different names")
            }
            Predicate::Supported(x, n) => {
                let sys = self.active_sys()?;
                let Sys::Wreath(w) = &*sys else { return fail("supported needs a wreath system") };
                let b = self.eval_name(&sys, x)?;
                let n: BTreeSet<usize> = n.iter().copied().collect();
                let r = w.support_check(&b, &n)?;
                let label = |p: Cond| w.system().poset().label(p).to_string();
                let mut witness = Witness::new();
                witness.insert("candidates".into(), r.candidates.to_string());
                witness.insert("precondition".into(), r.precondition.to_string());
                witness.insert("fixed".into(), r.fixed.to_string());
                let (value, message, sw) = match &r.verdict {
                    SupportVerdict::Supported => (Some(true), "supported".to_string(), None),
                    SupportVerdict::NotSupported(sw) => (Some(false), "not supported".to_string(), Some(sw)),
                    SupportVerdict::Artifact(sw) => {
                        (None, "witness pattern only exists because of the support bound".to_string(), Some(sw))
                    }
                    SupportVerdict::Contradiction(sw) => {
                        (None, "contradiction: a lift fixing the name separates it".to_string(), Some(sw))
                    }
                    SupportVerdict::Inconclusive(why) => (None, format!("inconclusive: {why}"), None),
                };
                if let Some(sw) = sw {
                    witness.insert("condition".into(), label(sw.condition));
                    witness.insert("row".into(), sw.row.to_string());
                    witness.insert("image_row".into(), sw.image_row.to_string());
                    witness.insert("lift".into(), w.element(sw.lift.element).render());
                    witness.insert("compatible".into(), sw.lift.compatible_in_poset.to_string());
                }
                Verdict { value, message, witness }
            }
            Predicate::Homogeneous(k) => {
                let sys = self.active_sys()?;
                let Sys::Wreath(w) = &*sys else { return fail("homogeneous needs a wreath system") };
                match w.spec.structure.check_homogeneous(*k)? {
                    None => decided(true, "homogeneous", ""),
                    Some(f) => {
                        let mut v = decided(false, "", "a partial isomorphism does not extend");
                        let parts: Vec<String> = f.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                        v.witness.insert("partial_isomorphism".into(), format!("{{{}}}", parts.join(", ")));
                        v
                    }
                }
            }
        })
    }

    fn query(&self, q: &Query) -> Result<Out, Failure> {
        let mut out = Out::new(Outcome::Info, "");
        match q {
            Query::Pred(p) => {
                let v = self.predicate(p)?;
                out.message = match v.value {
                    Some(b) => format!("{b}: {}", v.message),
                    None => format!("undecided: {}", v.message),
                };
                out.witness = v.witness;
            }
            Query::Sym(x) => {
                let sys = self.active_sys()?;
                let s = sys.system();
                let h = s.sym(&self.eval_name(&sys, x)?)?;
                out.message = format!("order {}", h.order());
                out.witness.insert("stabilizer".into(), clip(s.describe(&h)));
                out.witness.insert("in_filter".into(), s.filter_contains(&h).to_string());
            }
            Query::Show(x) => {
                let sys = self.active_sys()?;
                let y = self.eval_name(&sys, x)?;
                out.message = clip(sys.system().names().render(&y));
                out.witness.insert("rank".into(), y.rank().to_string());
            }
            Query::Tenacity(name) => {
                let sys = self.sys(name)?;
                let s = sys.system();
                let r = s.tenacity_report();
                out.message = format!("{} of {} conditions tenacious", r.tenacious.len(), s.poset().len());
                out.witness.insert("dense".into(), r.dense.to_string());
                out.witness.insert("all".into(), r.all.to_string());
            }
            Query::Generics => {
                let sys = self.active_sys()?;
                let poset = sys.system().poset();
                let gens: Vec<&str> = poset.generic_filters().iter().map(|g| poset.label(g.generator())).collect();
                out.message = format!("{} generic filters", gens.len());
                out.witness.insert("generators".into(), clip(gens.join(", ")));
            }
            Query::Width => {
                let sys = self.active_sys()?;
                out.message = format!("largest antichain has {} conditions", sys.system().poset().antichain_width());
            }
        }
        Ok(out)
    }

    fn suite(&self, kind: SuiteKind, params: &SuiteParams) -> Result<Out, Failure> {
        let sys = self.active_sys()?;
        let s = sys.system();
        let defaults = FamilyConfig::default();
        let family = FamilyConfig {
            max_rank: params.rank.map_or(defaults.max_rank, |r| r.min(u32::MAX as usize) as u32),
            max_entries: params.entries.unwrap_or(defaults.max_entries),
            per_rank_limit: params.limit.unwrap_or(defaults.per_rank_limit),
            seed: self.config.seed,
        };
        let (checks, failures) = match kind {
            SuiteKind::SymmetryLemma => {
                let names = name_family(s.names(), &family)?;
                let formulas = atomic_formulas(&names);
                let r = symmetry_lemma_check(s.forcing(), s.group(), &formulas)?;
                let failures: Vec<String> = r
                    .violations
                    .iter()
                    .map(|v| {
                        format!(
                            "{} at {} under {}",
                            render_core_formula(s.names(), &formulas[v.formula]),
                            s.poset().label(v.condition),
                            sys.render_element(v.element)
                        )
                    })
                    .collect();
                (r.checks, failures)
            }
            SuiteKind::OracleEquivalence => {
                let names = name_family(s.names(), &family)?;
                let formulas =
                    formula_family(&names, &FormulaConfig { seed: self.config.seed, ..FormulaConfig::default() });
                let r = oracle_equivalence(s.forcing(), &formulas)?;
                (r.checks, r.failures)
            }
            SuiteKind::Restriction => {
                let names = name_family(s.names(), &family)?;
                let r = restriction_identities(s.forcing(), &names)?;
                (r.checks, r.failures)
            }
            SuiteKind::Equivariance => {
                let r = match &*sys {
                    Sys::Cohen(c) => c.equivariance()?,
                    Sys::Wreath(w) => w.equivariance()?,
                    _ => return fail("equivariance needs a cohen or wreath system"),
                };
                (r.checks, r.failures)
            }
        };
        let mut out = Out::new(
            if failures.is_empty() { Outcome::Pass } else { Outcome::Fail },
            format!("{} checks, {} failures", checks, failures.len()),
        );
        out.stats = Some(Stats { checks, failures: failures.len() });
        if let Some(first) = failures.first() {
            out.witness.insert("first_failure".into(), clip(first.clone()));
        }
        Ok(out)
    }
}

fn build_poset(p: &PosetExpr, limits: &Limits) -> Result<FinPoset, Failure> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut covers = Vec::new();
    let mut id = |s: &str, labels: &mut Vec<String>| -> usize {
        *index.entry(s.to_string()).or_insert_with(|| {
            labels.push(s.to_string());
            labels.len() - 1
        })
    };
    for item in &p.items {
        match item {
            PosetItem::Point(a) => {
                id(a, &mut labels);
            }
            PosetItem::Cover(a, b) => {
                let (i, j) = (id(a, &mut labels), id(b, &mut labels));
                covers.push((i, j));
            }
        }
    }
    if labels.len() > limits.max_poset {
        return Err(symext_core::Error::PosetTooLarge { size: labels.len(), cap: limits.max_poset }.into());
    }
    Ok(FinPoset::from_covers(labels, &covers, limits)?)
}

/// Answer of a single forcing query.
#[derive(serde::Serialize, Clone, Debug, PartialEq, Eq)]
pub struct ForceAnswer {
    pub condition: String,
    pub formula: String,
    pub forces: bool,
    pub forces_negation: bool,
}

/// Runs `doc`, then decides `formula` at `condition` in the active system.
pub fn force_query(doc: &SpecDocument, config: &Config, condition: &str, formula: &str) -> Result<ForceAnswer, String> {
    let c = crate::parser::parse_condition(condition).map_err(|e| format!("condition {e}"))?;
    let f = crate::parser::parse_formula(doc, formula).map_err(|e| format!("formula {e}"))?;
    with_pool(config.jobs, || {
        let (_, env) = run_env(doc, config);
        let sys = env.active_sys().map_err(|e| e.message)?;
        let s = sys.system();
        let p = env.cond(&sys, &c).map_err(|e| e.message)?;
        let phi = env.eval_formula(&sys, &f).map_err(|e| e.message)?;
        let forces = s.forcing().forces(p, &phi).map_err(|e| e.to_string())?;
        let forces_negation = s.forcing().forces(p, &phi.clone().not()).map_err(|e| e.to_string())?;
        Ok(ForceAnswer {
            condition: s.poset().label(p).to_string(),
            formula: render_core_formula(s.names(), &phi),
            forces,
            forces_negation,
        })
    })
}
