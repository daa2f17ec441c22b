//! Syntax tree of symext documents.

use symext_core::HfSet;

use crate::error::Pos;
use crate::parser::SymbolTable;

/// A parsed document: statements in order plus the bindings they introduce.
#[derive(Clone, Debug)]
pub struct SpecDocument {
    pub statements: Vec<Statement>,
    pub(crate) symbols: SymbolTable,
}

impl PartialEq for SpecDocument {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

/// A statement and where it starts. Equality ignores the position.
#[derive(Clone, Debug)]
pub struct Statement {
    pub pos: Pos,
    pub kind: Stmt,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    System { name: String, expr: SystemExpr },
    Name { name: String, expr: NameExpr },
    Use(String),
    Assert { negated: bool, pred: Predicate },
    Query(Query),
    Suite { kind: SuiteKind, params: SuiteParams },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemExpr {
    Cohen {
        indices: usize,
        bits: usize,
        support: usize,
        base: Option<Vec<Vec<usize>>>,
    },
    Wreath {
        structure: StructureExpr,
        columns: usize,
        values: usize,
        support: usize,
        fix_rows: Option<usize>,
        fix_columns: Option<usize>,
    },
    Product(String, String),
    TrivialFull(PosetExpr),
    Explicit {
        poset: PosetExpr,
        group: Vec<Perm>,
        base: Vec<Vec<Perm>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureExpr {
    pub size: usize,
    pub relations: Vec<RelationExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationExpr {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
}

/// Either a lone label or a pair `lower < upper`.
#[derive(Clone, Debug, PartialEq)]
pub enum PosetItem {
    Point(String),
    Cover(String, String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosetExpr {
    pub items: Vec<PosetItem>,
}

/// A product of cycles over condition labels; the empty product is the identity.
pub type Perm = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq)]
pub enum NameExpr {
    Empty,
    Check(HfSet),
    Bullet(Vec<NameExpr>),
    Pair(Box<NameExpr>, Box<NameExpr>),
    Restrict(Box<NameExpr>, CondExpr),
    Gen(Vec<usize>),
    Atom(usize),
    Atoms,
    Rel(String),
    Seq(Vec<(usize, NameExpr)>),
    Mix(Vec<(CondExpr, NameExpr)>),
    Ref(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondExpr {
    Top,
    Label(String),
    /// `[(i,n)=b, ...]` for Cohen and `[(m,a,b)=v, ...]` for wreath conditions.
    Cells(Vec<(Vec<usize>, usize)>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermExpr {
    Var(String),
    Name(NameExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FormulaExpr {
    In(TermExpr, TermExpr),
    Eq(TermExpr, TermExpr),
    Not(Box<FormulaExpr>),
    And(Box<FormulaExpr>, Box<FormulaExpr>),
    Or(Box<FormulaExpr>, Box<FormulaExpr>),
    Exists(String, TermExpr, Box<FormulaExpr>),
    Forall(String, TermExpr, Box<FormulaExpr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Predicate {
    Hs(NameExpr),
    Normal(String),
    Tenacious(String, Option<CondExpr>),
    Directed(String),
    Degenerate(String),
    Forces(CondExpr, FormulaExpr),
    Equal(NameExpr, NameExpr),
    Supported(NameExpr, Vec<usize>),
    Homogeneous(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Pred(Predicate),
    Sym(NameExpr),
    Show(NameExpr),
    Tenacity(String),
    Generics,
    Width,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    SymmetryLemma,
    OracleEquivalence,
    Equivariance,
    Restriction,
}

impl SuiteKind {
    pub fn keyword(self) -> &'static str {
        match self {
            SuiteKind::SymmetryLemma => "symmetry_lemma",
            SuiteKind::OracleEquivalence => "oracle_equivalence",
            SuiteKind::Equivariance => "equivariance",
            SuiteKind::Restriction => "restriction",
        }
    }

    pub fn from_keyword(s: &str) -> Option<SuiteKind> {
        [SuiteKind::SymmetryLemma, SuiteKind::OracleEquivalence, SuiteKind::Equivariance, SuiteKind::Restriction]
            .into_iter()
            .find(|k| k.keyword() == s)
    }
}

/// Overrides for the sampled name family used by a suite.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteParams {
    pub rank: Option<usize>,
    pub entries: Option<usize>,
    pub limit: Option<usize>,
}

impl CondExpr {
    /// The condition label this expression denotes, if not the top.
    pub fn label(&self) -> Option<String> {
        match self {
            CondExpr::Top => None,
            CondExpr::Label(s) => Some(s.clone()),
            CondExpr::Cells(cells) => {
                let mut cells = cells.clone();
                cells.sort();
                let parts: Vec<String> = cells
                    .iter()
                    .map(|(k, v)| {
                        let k: Vec<String> = k.iter().map(|x| x.to_string()).collect();
                        format!("({})={v}", k.join(","))
                    })
                    .collect();
                Some(format!("[{}]", parts.join(",")))
            }
        }
    }
}
