//! Recursive-descent parser with binding resolution.

use std::collections::BTreeMap;

use symext_core::HfSet;

use crate::ast::*;
use crate::error::{ErrorKind, ParseError, Pos};
use crate::lexer::{lex, Tok, Token};

const MAX_DEPTH: usize = 48;
/// Largest natural number accepted inside a `check` literal.
pub const MAX_HF_NAT: u64 = 32;

pub(crate) const RESERVED: &[&str] = &[
    "system", "name", "use", "assert", "query", "suite", "empty", "check", "bullet", "pair", "restrict", "gen", "atom",
    "atoms", "rel", "seq", "mix", "top", "in", "and", "or", "not", "exists", "forall",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum SystemInfo {
    Cohen { indices: usize },
    Wreath { size: usize, columns: usize, relations: Vec<String> },
    Other,
}

/// Bindings visible at a point of the document.
#[derive(Clone, Debug, Default)]
pub(crate) struct SymbolTable {
    pub systems: BTreeMap<String, SystemInfo>,
    /// name -> owning system
    pub names: BTreeMap<String, String>,
    pub active: Option<String>,
}

pub fn parse_spec(text: &str) -> Result<SpecDocument, ParseError> {
    let tokens = lex(text, Pos { line: 1, column: 1 })?;
    let mut p = Parser { tokens, i: 0, symbols: SymbolTable::default(), depth: 0 };
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(SpecDocument { statements, symbols: p.symbols })
}

/// Parses a formula against the bindings in force at the end of `doc`.
pub fn parse_formula(doc: &SpecDocument, text: &str) -> Result<FormulaExpr, ParseError> {
    let mut p = Parser::standalone(doc, text)?;
    let f = p.formula(&mut Vec::new())?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a condition expression: `top`, a label, or `[(i,n)=b, ...]`.
pub fn parse_condition(text: &str) -> Result<CondExpr, ParseError> {
    let tokens = lex(text, Pos { line: 1, column: 1 })?;
    let mut p = Parser { tokens, i: 0, symbols: SymbolTable::default(), depth: 0 };
    let c = p.cond()?;
    p.expect_eof()?;
    Ok(c)
}

/// Parses a hereditarily finite set literal such as `{0, {1}}` or `2`.
pub fn parse_hf(text: &str) -> Result<HfSet, ParseError> {
    let tokens = lex(text, Pos { line: 1, column: 1 })?;
    let mut p = Parser { tokens, i: 0, symbols: SymbolTable::default(), depth: 0 };
    let h = p.hf()?;
    p.expect_eof()?;
    Ok(h)
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    symbols: SymbolTable,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn standalone(doc: &SpecDocument, text: &str) -> PResult<Parser> {
        let tokens = lex(text, Pos { line: 1, column: 1 })?;
        Ok(Parser { tokens, i: 0, symbols: doc.symbols.clone(), depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.i].clone();
        if self.i + 1 < self.tokens.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, kind: ErrorKind, pos: Pos, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(kind, pos, msg))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.err(ErrorKind::Syntax, self.pos(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let want = tok.describe();
            self.unexpected(&want)
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => self.unexpected(what),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    /// A fresh identifier for a binding.
    fn binder(&mut self, what: &str) -> PResult<String> {
        let (s, pos) = self.ident(what)?;
        if RESERVED.contains(&s.as_str()) {
            return self.err(ErrorKind::Syntax, pos, format!("`{s}` is a reserved word"));
        }
        Ok(s)
    }

    fn num(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                usize::try_from(n).map_err(|_| ParseError::new(ErrorKind::Lexical, self.pos(), "number too large"))
            }
            _ => self.unexpected("a number"),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err(ErrorKind::Syntax, self.pos(), "expression nested too deeply");
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    /// `open item (, item)* close`, allowing an empty list.
    fn list<T>(&mut self, open: Tok, close: Tok, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&close) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                let want = format!("`,` or {}", close.describe());
                return self.unexpected(&want);
            }
        }
    }

    fn system_ref(&mut self) -> PResult<String> {
        let (s, pos) = self.ident("a system name")?;
        if !self.symbols.systems.contains_key(&s) {
            return self.err(ErrorKind::Unbound, pos, format!("unbound system `{s}`"));
        }
        Ok(s)
    }

    fn active(&self, pos: Pos) -> PResult<(String, SystemInfo)> {
        match &self.symbols.active {
            Some(s) => Ok((s.clone(), self.symbols.systems[s].clone())),
            None => self.err(ErrorKind::Unbound, pos, "no active system; declare one with `system`"),
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let pos = self.pos();
        let (kw, kw_pos) = self.ident("a statement keyword")?;
        let kind = match kw.as_str() {
            "system" => {
                let name = self.binder("a system name")?;
                self.expect(Tok::Eq)?;
                let (expr, info) = self.system_expr()?;
                self.symbols.systems.insert(name.clone(), info);
                self.symbols.active = Some(name.clone());
                Stmt::System { name, expr }
            }
            "name" => {
                let name = self.binder("a name")?;
                self.expect(Tok::Eq)?;
                let (sys, _) = self.active(pos)?;
                let expr = self.name_expr(&[])?;
                self.symbols.names.insert(name.clone(), sys);
                Stmt::Name { name, expr }
            }
            "use" => {
                let s = self.system_ref()?;
                self.symbols.active = Some(s.clone());
                Stmt::Use(s)
            }
            "assert" => {
                let negated = self.eat(&Tok::Bang);
                Stmt::Assert { negated, pred: self.predicate()? }
            }
            "query" => Stmt::Query(self.query()?),
            "suite" => {
                self.active(pos)?;
                let (k, kpos) = self.ident("a suite name")?;
                let Some(kind) = SuiteKind::from_keyword(&k) else {
                    return self.err(
                        ErrorKind::Syntax,
                        kpos,
                        format!("unknown suite `{k}`; expected symmetry_lemma, oracle_equivalence, equivariance or restriction"),
                    );
                };
                let params = self.suite_params()?;
                Stmt::Suite { kind, params }
            }
            _ => {
                return self.err(
                    ErrorKind::Syntax,
                    kw_pos,
                    format!("unknown statement `{kw}`; expected system, name, use, assert, query or suite"),
                );
            }
        };
        self.expect(Tok::Semi)?;
        Ok(Statement { pos, kind })
    }

    fn suite_params(&mut self) -> PResult<SuiteParams> {
        let mut params = SuiteParams::default();
        if *self.peek() != Tok::LParen {
            return Ok(params);
        }
        self.list(Tok::LParen, Tok::RParen, |p| {
            let (k, pos) = p.ident("a suite parameter")?;
            p.expect(Tok::Eq)?;
            let v = p.num()?;
            let slot = match k.as_str() {
                "rank" => &mut params.rank,
                "entries" => &mut params.entries,
                "limit" => &mut params.limit,
                _ => return p.err(ErrorKind::Syntax, pos, format!("unknown suite parameter `{k}`")),
            };
            if slot.replace(v).is_some() {
                return p.err(ErrorKind::Syntax, pos, format!("parameter `{k}` given twice"));
            }
            Ok(())
        })?;
        Ok(params)
    }

    fn system_expr(&mut self) -> PResult<(SystemExpr, SystemInfo)> {
        let (kind, pos) = self.ident("a system constructor")?;
        match kind.as_str() {
            "cohen" => {
                let (mut indices, mut bits, mut support, mut base) = (None, None, None, None);
                self.list(Tok::LParen, Tok::RParen, |p| {
                    let (k, kpos) = p.ident("a cohen parameter")?;
                    p.expect(Tok::Eq)?;
                    let dup = match k.as_str() {
                        "indices" => indices.replace(p.num()?).is_some(),
                        "bits" => bits.replace(p.num()?).is_some(),
                        "support" => support.replace(p.num()?).is_some(),
                        "base" => {
                            let b =
                                p.list(Tok::LBracket, Tok::RBracket, |p| p.list(Tok::LBrace, Tok::RBrace, Self::num))?;
                            base.replace(b).is_some()
                        }
                        _ => return p.err(ErrorKind::Syntax, kpos, format!("unknown cohen parameter `{k}`")),
                    };
                    if dup {
                        return p.err(ErrorKind::Syntax, kpos, format!("parameter `{k}` given twice"));
                    }
                    Ok(())
                })?;
                let need = |v: Option<usize>, k: &str| {
                    v.ok_or_else(|| ParseError::new(ErrorKind::Arity, pos, format!("cohen needs `{k}`")))
                };
                let indices = need(indices, "indices")?;
                let expr =
                    SystemExpr::Cohen { indices, bits: need(bits, "bits")?, support: need(support, "support")?, base };
                Ok((expr, SystemInfo::Cohen { indices }))
            }
            "wreath" => {
                let (mut structure, mut columns, mut values, mut support, mut fix_rows, mut fix_columns) =
                    (None, None, None, None, None, None);
                self.list(Tok::LParen, Tok::RParen, |p| {
                    let (k, kpos) = p.ident("a wreath parameter")?;
                    p.expect(Tok::Eq)?;
                    let dup = match k.as_str() {
                        "structure" => {
                            let s = p.structure()?;
                            structure.replace(s).is_some()
                        }
                        "columns" => columns.replace(p.num()?).is_some(),
                        "values" => values.replace(p.num()?).is_some(),
                        "support" => support.replace(p.num()?).is_some(),
                        "fix_rows" => fix_rows.replace(p.num()?).is_some(),
                        "fix_columns" => fix_columns.replace(p.num()?).is_some(),
                        _ => return p.err(ErrorKind::Syntax, kpos, format!("unknown wreath parameter `{k}`")),
                    };
                    if dup {
                        return p.err(ErrorKind::Syntax, kpos, format!("parameter `{k}` given twice"));
                    }
                    Ok(())
                })?;
                let need = |v: Option<usize>, k: &str| {
                    v.ok_or_else(|| ParseError::new(ErrorKind::Arity, pos, format!("wreath needs `{k}`")))
                };
                let structure =
                    structure.ok_or_else(|| ParseError::new(ErrorKind::Arity, pos, "wreath needs `structure`"))?;
                let columns = need(columns, "columns")?;
                let info = SystemInfo::Wreath {
                    size: structure.size,
                    columns,
                    relations: structure.relations.iter().map(|r| r.name.clone()).collect(),
                };
                let expr = SystemExpr::Wreath {
                    structure,
                    columns,
                    values: need(values, "values")?,
                    support: need(support, "support")?,
                    fix_rows,
                    fix_columns,
                };
                Ok((expr, info))
            }
            "product" => {
                self.expect(Tok::LParen)?;
                let a = self.system_ref()?;
                self.expect(Tok::Comma)?;
                let b = self.system_ref()?;
                self.expect(Tok::RParen)?;
                Ok((SystemExpr::Product(a, b), SystemInfo::Other))
            }
            "trivial_full" => {
                self.expect(Tok::LParen)?;
                self.keyword("poset")?;
                self.expect(Tok::Eq)?;
                let poset = self.poset()?;
                self.expect(Tok::RParen)?;
                Ok((SystemExpr::TrivialFull(poset), SystemInfo::Other))
            }
            "explicit" => {
                self.expect(Tok::LParen)?;
                self.keyword("poset")?;
                self.expect(Tok::Eq)?;
                let poset = self.poset()?;
                self.expect(Tok::Comma)?;
                self.keyword("group")?;
                self.expect(Tok::Eq)?;
                let group = self.list(Tok::LBracket, Tok::RBracket, Self::perm)?;
                self.expect(Tok::Comma)?;
                self.keyword("base")?;
                self.expect(Tok::Eq)?;
                let base =
                    self.list(Tok::LBracket, Tok::RBracket, |p| p.list(Tok::LBracket, Tok::RBracket, Self::perm))?;
                self.expect(Tok::RParen)?;
                Ok((SystemExpr::Explicit { poset, group, base }, SystemInfo::Other))
            }
            _ => self.err(
                ErrorKind::Syntax,
                pos,
                format!(
                    "unknown system constructor `{kind}`; expected cohen, wreath, product, trivial_full or explicit"
                ),
            ),
        }
    }

    fn structure(&mut self) -> PResult<StructureExpr> {
        self.keyword("structure")?;
        self.expect(Tok::LParen)?;
        self.keyword("size")?;
        self.expect(Tok::Eq)?;
        let size = self.num()?;
        let mut relations = Vec::new();
        while self.eat(&Tok::Comma) {
            let name = self.binder("a relation name")?;
            self.expect(Tok::Slash)?;
            let arity = self.num()?;
            self.expect(Tok::Eq)?;
            let tuples = self.list(Tok::LBrace, Tok::RBrace, |p| p.list(Tok::LParen, Tok::RParen, Self::num))?;
            relations.push(RelationExpr { name, arity, tuples });
        }
        self.expect(Tok::RParen)?;
        Ok(StructureExpr { size, relations })
    }

    fn label(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Num(n) => {
                self.bump();
                Ok(n.to_string())
            }
            _ => self.unexpected("a condition label"),
        }
    }

    fn poset(&mut self) -> PResult<PosetExpr> {
        self.keyword("poset")?;
        let items = self.list(Tok::LParen, Tok::RParen, |p| {
            let a = p.label()?;
            if p.eat(&Tok::Lt) {
                Ok(PosetItem::Cover(a, p.label()?))
            } else {
                Ok(PosetItem::Point(a))
            }
        })?;
        Ok(PosetExpr { items })
    }

    /// One or more cycles `(a b c)`; `()` alone is the identity.
    fn perm(&mut self) -> PResult<Perm> {
        let mut cycles = Vec::new();
        if *self.peek() != Tok::LParen {
            return self.unexpected("a permutation in cycle notation");
        }
        while self.eat(&Tok::LParen) {
            let mut cycle = Vec::new();
            while !self.eat(&Tok::RParen) {
                cycle.push(self.label()?);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }

    fn hf(&mut self) -> PResult<HfSet> {
        self.enter()?;
        let out = match self.peek().clone() {
            Tok::Num(n) if n <= MAX_HF_NAT => {
                self.bump();
                HfSet::nat(n as usize)
            }
            Tok::Num(n) => {
                return self.err(ErrorKind::Syntax, self.pos(), format!("{n} is larger than {MAX_HF_NAT}"));
            }
            Tok::LBrace => HfSet::from_elements(self.list(Tok::LBrace, Tok::RBrace, Self::hf)?),
            _ => return self.unexpected("a number or `{`"),
        };
        self.leave();
        Ok(out)
    }

    fn cond(&mut self) -> PResult<CondExpr> {
        if self.is_kw("top") {
            self.bump();
            return Ok(CondExpr::Top);
        }
        if *self.peek() == Tok::LBracket {
            let cells = self.list(Tok::LBracket, Tok::RBracket, |p| {
                let key = p.list(Tok::LParen, Tok::RParen, Self::num)?;
                p.expect(Tok::Eq)?;
                Ok((key, p.num()?))
            })?;
            return Ok(CondExpr::Cells(cells));
        }
        Ok(CondExpr::Label(self.label()?))
    }

    fn factory_arity(&self, pos: Pos, what: &str, args: &[usize]) -> PResult<()> {
        let (_, info) = self.active(pos)?;
        let bad = |msg: String| Err(ParseError::new(ErrorKind::Arity, pos, msg));
        match (what, info) {
            ("gen", SystemInfo::Cohen { indices }) => {
                if args.len() != 1 {
                    return bad(format!("gen takes 1 argument in a cohen system, got {}", args.len()));
                }
                if args[0] >= indices {
                    return bad(format!("gen({}) is out of range for {indices} indices", args[0]));
                }
                Ok(())
            }
            ("gen", SystemInfo::Wreath { size, columns, .. }) => {
                if args.len() != 2 {
                    return bad(format!("gen takes 2 arguments in a wreath system, got {}", args.len()));
                }
                if args[0] >= size || args[1] >= columns {
                    return bad(format!("gen({},{}) is out of range", args[0], args[1]));
                }
                Ok(())
            }
            ("atom", SystemInfo::Wreath { size, .. }) => {
                if args[0] >= size {
                    return bad(format!("atom({}) is out of range for a structure of size {size}", args[0]));
                }
                Ok(())
            }
            ("atoms", SystemInfo::Wreath { .. }) => Ok(()),
            ("gen", _) => bad("gen needs an active cohen or wreath system".into()),
            _ => bad(format!("{what} needs an active wreath system")),
        }
    }

    fn name_expr(&mut self, vars: &[String]) -> PResult<NameExpr> {
        self.enter()?;
        let out = self.name_expr_inner(vars)?;
        self.leave();
        Ok(out)
    }

    fn name_expr_inner(&mut self, vars: &[String]) -> PResult<NameExpr> {
        let (word, pos) = self.ident("a name expression")?;
        Ok(match word.as_str() {
            "empty" => NameExpr::Empty,
            "check" => NameExpr::Check(self.hf()?),
            "bullet" => NameExpr::Bullet(self.list(Tok::LBrace, Tok::RBrace, |p| p.name_expr(vars))?),
            "pair" => {
                self.expect(Tok::LParen)?;
                let a = self.name_expr(vars)?;
                self.expect(Tok::Comma)?;
                let b = self.name_expr(vars)?;
                self.expect(Tok::RParen)?;
                NameExpr::Pair(Box::new(a), Box::new(b))
            }
            "restrict" => {
                self.expect(Tok::LParen)?;
                let a = self.name_expr(vars)?;
                self.expect(Tok::Comma)?;
                let c = self.cond()?;
                self.expect(Tok::RParen)?;
                NameExpr::Restrict(Box::new(a), c)
            }
            "gen" => {
                let args = self.list(Tok::LParen, Tok::RParen, Self::num)?;
                self.factory_arity(pos, "gen", &args)?;
                NameExpr::Gen(args)
            }
            "atom" => {
                self.expect(Tok::LParen)?;
                let m = self.num()?;
                self.expect(Tok::RParen)?;
                self.factory_arity(pos, "atom", &[m])?;
                NameExpr::Atom(m)
            }
            "atoms" => {
                self.factory_arity(pos, "atoms", &[])?;
                NameExpr::Atoms
            }
            "rel" => {
                self.expect(Tok::LParen)?;
                let (r, rpos) = self.ident("a relation name")?;
                self.expect(Tok::RParen)?;
                match self.active(pos)?.1 {
                    SystemInfo::Wreath { relations, .. } if relations.contains(&r) => {}
                    SystemInfo::Wreath { .. } => {
                        return self.err(ErrorKind::Unbound, rpos, format!("unknown relation `{r}`"));
                    }
                    _ => return self.err(ErrorKind::Arity, pos, "rel needs an active wreath system"),
                }
                NameExpr::Rel(r)
            }
            "seq" => NameExpr::Seq(self.list(Tok::LBracket, Tok::RBracket, |p| {
                p.expect(Tok::LParen)?;
                let i = p.num()?;
                p.expect(Tok::Comma)?;
                let x = p.name_expr(vars)?;
                p.expect(Tok::RParen)?;
                Ok((i, x))
            })?),
            "mix" => NameExpr::Mix(self.list(Tok::LBrace, Tok::RBrace, |p| {
                let c = p.cond()?;
                p.expect(Tok::Colon)?;
                Ok((c, p.name_expr(vars)?))
            })?),
            _ if RESERVED.contains(&word.as_str()) => {
                return self.err(ErrorKind::Syntax, pos, format!("`{word}` cannot start a name expression"));
            }
            _ => {
                if vars.contains(&word) {
                    return self.err(
                        ErrorKind::Syntax,
                        pos,
                        format!("variable `{word}` used inside a name expression"),
                    );
                }
                let (active, _) = self.active(pos)?;
                match self.symbols.names.get(&word) {
                    None => return self.err(ErrorKind::Unbound, pos, format!("unbound name `{word}`")),
                    Some(s) if *s != active => {
                        return self.err(
                            ErrorKind::Unbound,
                            pos,
                            format!("name `{word}` belongs to system `{s}`, not the active system `{active}`"),
                        );
                    }
                    Some(_) => NameExpr::Ref(word),
                }
            }
        })
    }

    fn string(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Str(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => self.unexpected("a quoted formula"),
        }
    }

    fn quoted_formula(&mut self) -> PResult<FormulaExpr> {
        let (text, pos) = self.string()?;
        let tokens = lex(&text, Pos { line: pos.line, column: pos.column + 1 })?;
        let mut sub = Parser { tokens, i: 0, symbols: self.symbols.clone(), depth: self.depth };
        let f = sub.formula(&mut Vec::new())?;
        sub.expect_eof()?;
        Ok(f)
    }

    fn formula(&mut self, vars: &mut Vec<String>) -> PResult<FormulaExpr> {
        self.enter()?;
        let mut f = self.conjunction(vars)?;
        while self.is_kw("or") {
            self.bump();
            let g = self.conjunction(vars)?;
            f = FormulaExpr::Or(Box::new(f), Box::new(g));
        }
        self.leave();
        Ok(f)
    }

    fn conjunction(&mut self, vars: &mut Vec<String>) -> PResult<FormulaExpr> {
        let mut f = self.unary(vars)?;
        while self.is_kw("and") {
            self.bump();
            let g = self.unary(vars)?;
            f = FormulaExpr::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary(&mut self, vars: &mut Vec<String>) -> PResult<FormulaExpr> {
        self.enter()?;
        let out = if self.is_kw("not") {
            self.bump();
            FormulaExpr::Not(Box::new(self.unary(vars)?))
        } else if self.is_kw("exists") || self.is_kw("forall") {
            let (q, _) = self.ident("a quantifier")?;
            let v = self.binder("a variable")?;
            self.keyword("in")?;
            let bound = self.term(vars)?;
            self.expect(Tok::LParen)?;
            vars.push(v.clone());
            let body = self.formula(vars);
            vars.pop();
            let body = Box::new(body?);
            self.expect(Tok::RParen)?;
            if q == "exists" {
                FormulaExpr::Exists(v, bound, body)
            } else {
                FormulaExpr::Forall(v, bound, body)
            }
        } else if self.eat(&Tok::LParen) {
            let f = self.formula(vars)?;
            self.expect(Tok::RParen)?;
            f
        } else {
            let a = self.term(vars)?;
            if self.is_kw("in") {
                self.bump();
                FormulaExpr::In(a, self.term(vars)?)
            } else if self.eat(&Tok::Eq) {
                FormulaExpr::Eq(a, self.term(vars)?)
            } else {
                return self.unexpected("`in` or `=`");
            }
        };
        self.leave();
        Ok(out)
    }

    fn term(&mut self, vars: &[String]) -> PResult<TermExpr> {
        if let Tok::Ident(s) = self.peek() {
            if vars.contains(s) {
                let s = s.clone();
                self.bump();
                return Ok(TermExpr::Var(s));
            }
        }
        Ok(TermExpr::Name(self.name_expr(vars)?))
    }

    fn predicate(&mut self) -> PResult<Predicate> {
        let (word, pos) = self.ident("a predicate")?;
        let pred = match word.as_str() {
            "hs" => {
                self.expect(Tok::LParen)?;
                self.active(pos)?;
                let x = self.name_expr(&[])?;
                self.expect(Tok::RParen)?;
                Predicate::Hs(x)
            }
            "normal" | "directed" | "degenerate" => {
                self.expect(Tok::LParen)?;
                let s = self.system_ref()?;
                self.expect(Tok::RParen)?;
                match word.as_str() {
                    "normal" => Predicate::Normal(s),
                    "directed" => Predicate::Directed(s),
                    _ => Predicate::Degenerate(s),
                }
            }
            "tenacious" => {
                self.expect(Tok::LParen)?;
                let s = self.system_ref()?;
                let c = if self.eat(&Tok::Comma) { Some(self.cond()?) } else { None };
                self.expect(Tok::RParen)?;
                Predicate::Tenacious(s, c)
            }
            "forces" => {
                self.expect(Tok::LParen)?;
                self.active(pos)?;
                let c = self.cond()?;
                self.expect(Tok::Comma)?;
                let f = self.quoted_formula()?;
                self.expect(Tok::RParen)?;
                Predicate::Forces(c, f)
            }
            "equal" => {
                self.expect(Tok::LParen)?;
                self.active(pos)?;
                let a = self.name_expr(&[])?;
                self.expect(Tok::Comma)?;
                let b = self.name_expr(&[])?;
                self.expect(Tok::RParen)?;
                Predicate::Equal(a, b)
            }
            "supported" => {
                self.expect(Tok::LParen)?;
                if !matches!(self.active(pos)?.1, SystemInfo::Wreath { .. }) {
                    return self.err(ErrorKind::Arity, pos, "supported needs an active wreath system");
                }
                let x = self.name_expr(&[])?;
                self.expect(Tok::Comma)?;
                let n = self.list(Tok::LBrace, Tok::RBrace, Self::num)?;
                self.expect(Tok::RParen)?;
                Predicate::Supported(x, n)
            }
            "homogeneous" => {
                self.expect(Tok::LParen)?;
                if !matches!(self.active(pos)?.1, SystemInfo::Wreath { .. }) {
                    return self.err(ErrorKind::Arity, pos, "homogeneous needs an active wreath system");
                }
                let k = self.num()?;
                self.expect(Tok::RParen)?;
                Predicate::Homogeneous(k)
            }
            _ => {
                return self.err(
                    ErrorKind::Syntax,
                    pos,
                    format!(
                        "unknown predicate `{word}`; expected hs, normal, tenacious, directed, degenerate, forces, equal, supported or homogeneous"
                    ),
                );
            }
        };
        Ok(pred)
    }

    fn query(&mut self) -> PResult<Query> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(w) if w == "sym" || w == "show" => {
                self.bump();
                self.expect(Tok::LParen)?;
                self.active(pos)?;
                let x = self.name_expr(&[])?;
                self.expect(Tok::RParen)?;
                Ok(if w == "sym" { Query::Sym(x) } else { Query::Show(x) })
            }
            Tok::Ident(w) if w == "tenacity" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let s = self.system_ref()?;
                self.expect(Tok::RParen)?;
                Ok(Query::Tenacity(s))
            }
            Tok::Ident(w) if w == "generics" || w == "width" => {
                self.bump();
                self.active(pos)?;
                Ok(if w == "generics" { Query::Generics } else { Query::Width })
            }
            _ => Ok(Query::Pred(self.predicate()?)),
        }
    }
}
