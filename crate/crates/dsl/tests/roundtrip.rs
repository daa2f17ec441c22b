use proptest::prelude::*;
use symext_core::HfSet;
use symext_dsl::ast::*;
use symext_dsl::render::render_statement;
use symext_dsl::{parse_spec, render_document};

const PREAMBLE: &str = "system W = wreath(structure=structure(size=3, P/1={(0)}, E/2={(0,1),(1,2)}), columns=2, values=2, support=1, fix_rows=1);
system E = explicit(poset=poset(a < 1, b < 1, \"(c)\" < a), group=[(a b), ()], base=[[], [(a b)(1)]]);
system T = trivial_full(poset=poset(1));
system X = product(E, T);
system C = cohen(indices=3, bits=1, support=1, base=[{}, {0, 2}]);
name x = empty;
";

fn hf() -> impl Strategy<Value = HfSet> {
    (0usize..4)
        .prop_map(HfSet::nat)
        .prop_recursive(3, 12, 3, |inner| prop::collection::vec(inner, 0..3).prop_map(HfSet::from_elements))
}

fn label() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "1", "12", "(c)", "top", "b_2", "[(0,0)=1]", "it's", "q\\\"x"])
        .prop_map(String::from)
}

fn cond() -> impl Strategy<Value = CondExpr> {
    prop_oneof![
        Just(CondExpr::Top),
        label().prop_map(CondExpr::Label),
        prop::collection::vec((prop::collection::vec(0usize..3, 1..3), 0usize..2), 0..3).prop_map(CondExpr::Cells),
    ]
}

fn name() -> impl Strategy<Value = NameExpr> {
    let leaf = prop_oneof![
        Just(NameExpr::Empty),
        hf().prop_map(NameExpr::Check),
        (0usize..3).prop_map(|i| NameExpr::Gen(vec![i])),
        Just(NameExpr::Ref("x".into())),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..3).prop_map(NameExpr::Bullet),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| NameExpr::Pair(Box::new(a), Box::new(b))),
            (inner.clone(), cond()).prop_map(|(a, c)| NameExpr::Restrict(Box::new(a), c)),
            prop::collection::vec((0usize..4, inner.clone()), 0..3).prop_map(NameExpr::Seq),
            prop::collection::vec((cond(), inner), 0..3).prop_map(NameExpr::Mix),
        ]
    })
}

fn term(vars: usize) -> BoxedStrategy<TermExpr> {
    if vars == 0 {
        name().prop_map(TermExpr::Name).boxed()
    } else {
        prop_oneof![name().prop_map(TermExpr::Name), (0..vars).prop_map(|i| TermExpr::Var(format!("v{i}")))].boxed()
    }
}

fn formula(vars: usize, depth: u32) -> BoxedStrategy<FormulaExpr> {
    let atom = prop_oneof![
        (term(vars), term(vars)).prop_map(|(a, b)| FormulaExpr::In(a, b)),
        (term(vars), term(vars)).prop_map(|(a, b)| FormulaExpr::Eq(a, b)),
    ];
    if depth == 0 {
        return atom.boxed();
    }
    let sub = formula(vars, depth - 1);
    let bound = formula(vars + 1, depth - 1);
    let v = format!("v{vars}");
    prop_oneof![
        atom,
        sub.clone().prop_map(|f| FormulaExpr::Not(Box::new(f))),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| FormulaExpr::And(Box::new(a), Box::new(b))),
        (sub.clone(), sub).prop_map(|(a, b)| FormulaExpr::Or(Box::new(a), Box::new(b))),
        (term(vars), bound.clone(), any::<bool>()).prop_map(move |(t, f, ex)| if ex {
            FormulaExpr::Exists(v.clone(), t, Box::new(f))
        } else {
            FormulaExpr::Forall(v.clone(), t, Box::new(f))
        }),
    ]
    .boxed()
}

fn statement() -> impl Strategy<Value = Stmt> {
    prop_oneof![
        name().prop_map(|e| Stmt::Name { name: "y".into(), expr: e }),
        (any::<bool>(), name()).prop_map(|(negated, e)| Stmt::Assert { negated, pred: Predicate::Hs(e) }),
        (cond(), formula(0, 3)).prop_map(|(c, f)| Stmt::Assert { negated: false, pred: Predicate::Forces(c, f) }),
        (name(), name()).prop_map(|(a, b)| Stmt::Query(Query::Pred(Predicate::Equal(a, b)))),
        name().prop_map(|e| Stmt::Query(Query::Sym(e))),
        prop::option::of(cond())
            .prop_map(|c| Stmt::Assert { negated: true, pred: Predicate::Tenacious("C".into(), c) }),
        (prop::option::of(0usize..5), prop::option::of(0usize..5)).prop_map(|(rank, limit)| Stmt::Suite {
            kind: SuiteKind::SymmetryLemma,
            params: SuiteParams { rank, entries: None, limit },
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_inverts_render(stmts in prop::collection::vec(statement(), 0..6)) {
        let mut text = PREAMBLE.to_string();
        for s in &stmts {
            text.push_str(&render_statement(s));
            text.push('\n');
        }
        let doc = parse_spec(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let parsed: Vec<Stmt> = doc.statements.iter().skip(6).map(|s| s.kind.clone()).collect();
        prop_assert_eq!(&parsed, &stmts);
        let rendered = render_document(&doc);
        let again = parse_spec(&rendered).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(render_document(&again), rendered);
    }
}

#[test]
fn canonical_scenario_round_trips() {
    let text = include_str!("../../../docs/scenarios/generic_structures.symext");
    let doc = parse_spec(text).unwrap();
    let canonical = render_document(&doc);
    assert_eq!(parse_spec(&canonical).unwrap(), doc);
    assert_eq!(render_document(&parse_spec(&canonical).unwrap()), canonical);
}
