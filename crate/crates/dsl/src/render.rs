//! Canonical text for documents; parsing the output yields the same tree.

use std::fmt::Write;

use crate::ast::*;
use crate::parser::RESERVED;

pub fn render_document(doc: &SpecDocument) -> String {
    let mut out = String::new();
    for s in &doc.statements {
        out.push_str(&render_statement(&s.kind));
        out.push('\n');
    }
    out
}

pub fn render_statement(s: &Stmt) -> String {
    match s {
        Stmt::System { name, expr } => format!("system {name} = {};", render_system(expr)),
        Stmt::Name { name, expr } => format!("name {name} = {};", render_name(expr)),
        Stmt::Use(s) => format!("use {s};"),
        Stmt::Assert { negated, pred } => {
            format!("assert {}{};", if *negated { "!" } else { "" }, render_predicate(pred))
        }
        Stmt::Query(q) => format!("query {};", render_query(q)),
        Stmt::Suite { kind, params } => {
            let mut ps = Vec::new();
            for (k, v) in [("rank", params.rank), ("entries", params.entries), ("limit", params.limit)] {
                if let Some(v) = v {
                    ps.push(format!("{k}={v}"));
                }
            }
            if ps.is_empty() {
                format!("suite {};", kind.keyword())
            } else {
                format!("suite {}({});", kind.keyword(), ps.join(", "))
            }
        }
    }
}

fn join<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(", ")
}

fn nums(xs: &[usize]) -> String {
    join(xs, |x| x.to_string())
}

pub fn render_system(e: &SystemExpr) -> String {
    match e {
        SystemExpr::Cohen { indices, bits, support, base } => {
            let mut s = format!("cohen(indices={indices}, bits={bits}, support={support}");
            if let Some(b) = base {
                let _ = write!(s, ", base=[{}]", join(b, |e| format!("{{{}}}", nums(e))));
            }
            s.push(')');
            s
        }
        SystemExpr::Wreath { structure, columns, values, support, fix_rows, fix_columns } => {
            let mut s = format!(
                "wreath(structure={}, columns={columns}, values={values}, support={support}",
                render_structure(structure)
            );
            if let Some(v) = fix_rows {
                let _ = write!(s, ", fix_rows={v}");
            }
            if let Some(v) = fix_columns {
                let _ = write!(s, ", fix_columns={v}");
            }
            s.push(')');
            s
        }
        SystemExpr::Product(a, b) => format!("product({a}, {b})"),
        SystemExpr::TrivialFull(p) => format!("trivial_full(poset={})", render_poset(p)),
        SystemExpr::Explicit { poset, group, base } => format!(
            "explicit(poset={}, group=[{}], base=[{}])",
            render_poset(poset),
            join(group, render_perm),
            join(base, |b| format!("[{}]", join(b, render_perm)))
        ),
    }
}

fn render_structure(s: &StructureExpr) -> String {
    let mut out = format!("structure(size={}", s.size);
    for r in &s.relations {
        let _ = write!(out, ", {}/{}={{{}}}", r.name, r.arity, join(&r.tuples, |t| format!("({})", nums(t))));
    }
    out.push(')');
    out
}

/// Bare identifiers and canonical numbers print as-is; anything else is quoted.
pub fn render_label(s: &str) -> String {
    let ident = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s);
    let number = s.parse::<u64>().is_ok_and(|n| n.to_string() == s);
    if ident || number {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

fn render_poset(p: &PosetExpr) -> String {
    let items = join(&p.items, |i| match i {
        PosetItem::Point(a) => render_label(a),
        PosetItem::Cover(a, b) => format!("{} < {}", render_label(a), render_label(b)),
    });
    format!("poset({items})")
}

fn render_perm(p: &Perm) -> String {
    if p.is_empty() {
        return "()".into();
    }
    p.iter().map(|c| format!("({})", c.iter().map(|l| render_label(l)).collect::<Vec<_>>().join(" "))).collect()
}

pub fn render_cond(c: &CondExpr) -> String {
    match c {
        CondExpr::Top => "top".into(),
        CondExpr::Label(s) => render_label(s),
        CondExpr::Cells(cells) => {
            let cells: Vec<String> = cells
                .iter()
                .map(|(k, v)| format!("({})={v}", k.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", cells.join(","))
        }
    }
}

pub fn render_name(x: &NameExpr) -> String {
    match x {
        NameExpr::Empty => "empty".into(),
        NameExpr::Check(h) => format!("check {h}"),
        NameExpr::Bullet(xs) => format!("bullet{{{}}}", join(xs, render_name)),
        NameExpr::Pair(a, b) => format!("pair({}, {})", render_name(a), render_name(b)),
        NameExpr::Restrict(a, c) => format!("restrict({}, {})", render_name(a), render_cond(c)),
        NameExpr::Gen(args) => format!("gen({})", nums(args)),
        NameExpr::Atom(m) => format!("atom({m})"),
        NameExpr::Atoms => "atoms".into(),
        NameExpr::Rel(r) => format!("rel({r})"),
        NameExpr::Seq(es) => format!("seq[{}]", join(es, |(i, x)| format!("({i}, {})", render_name(x)))),
        NameExpr::Mix(es) => format!("mix{{{}}}", join(es, |(c, x)| format!("{}: {}", render_cond(c), render_name(x)))),
        NameExpr::Ref(s) => s.clone(),
    }
}

fn render_term(t: &TermExpr) -> String {
    match t {
        TermExpr::Var(v) => v.clone(),
        TermExpr::Name(x) => render_name(x),
    }
}

pub fn render_formula(f: &FormulaExpr) -> String {
    match f {
        FormulaExpr::In(a, b) => format!("{} in {}", render_term(a), render_term(b)),
        FormulaExpr::Eq(a, b) => format!("{} = {}", render_term(a), render_term(b)),
        FormulaExpr::Not(g) => format!("not ({})", render_formula(g)),
        FormulaExpr::And(a, b) => format!("({}) and ({})", render_formula(a), render_formula(b)),
        FormulaExpr::Or(a, b) => format!("({}) or ({})", render_formula(a), render_formula(b)),
        FormulaExpr::Exists(v, t, g) => format!("exists {v} in {} ({})", render_term(t), render_formula(g)),
        FormulaExpr::Forall(v, t, g) => format!("forall {v} in {} ({})", render_term(t), render_formula(g)),
    }
}

pub fn render_predicate(p: &Predicate) -> String {
    match p {
        Predicate::Hs(x) => format!("hs({})", render_name(x)),
        Predicate::Normal(s) => format!("normal({s})"),
        Predicate::Directed(s) => format!("directed({s})"),
        Predicate::Degenerate(s) => format!("degenerate({s})"),
        Predicate::Tenacious(s, None) => format!("tenacious({s})"),
        Predicate::Tenacious(s, Some(c)) => format!("tenacious({s}, {})", render_cond(c)),
        Predicate::Forces(c, f) => {
            let text = render_formula(f).replace('\\', "\\\\").replace('"', "\\\"");
            format!("forces({}, \"{text}\")", render_cond(c))
        }
        Predicate::Equal(a, b) => format!("equal({}, {})", render_name(a), render_name(b)),
        Predicate::Supported(x, n) => format!("supported({}, {{{}}})", render_name(x), nums(n)),
        Predicate::Homogeneous(k) => format!("homogeneous({k})"),
    }
}

fn render_query(q: &Query) -> String {
    match q {
        Query::Pred(p) => render_predicate(p),
        Query::Sym(x) => format!("sym({})", render_name(x)),
        Query::Show(x) => format!("show({})", render_name(x)),
        Query::Tenacity(s) => format!("tenacity({s})"),
        Query::Generics => "generics".into(),
        Query::Width => "width".into(),
    }
}
