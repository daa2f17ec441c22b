use std::collections::BTreeSet;
use std::sync::Arc;

use symext_core::constructions::*;
use symext_core::family::{name_family, FamilyConfig};
use symext_core::*;

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn rel(name: &str, arity: usize, tuples: &[&[usize]]) -> Relation {
    Relation { name: name.into(), arity, tuples: tuples.iter().map(|t| t.to_vec()).collect() }
}

fn pure_wreath(support: usize) -> WreathSystem {
    let spec = WreathSpec::new(FinStructure::pure_set(2).unwrap(), 2, 2, support);
    wreath_system(spec, Limits { max_entries: 8192, ..Limits::default() }).unwrap()
}

#[test]
fn cohen_factories_are_normal_and_tenacious() {
    for (i, n, s) in [(2, 1, 1), (2, 2, 1), (3, 1, 1), (3, 2, 1), (3, 1, 2), (4, 1, 1), (4, 1, 2), (4, 1, 3)] {
        let c = cohen_system(CohenSpec::new(i, n, s), Limits::default()).unwrap();
        let sys = c.system();
        assert!(sys.is_normal(), "cohen({i},{n},{s})");
        assert!(sys.tenacity_report().all, "cohen({i},{n},{s})");
        assert!(c.equivariance().unwrap().passed());
        let ids: BTreeSet<_> = c.gens().iter().map(|g| g.id()).collect();
        assert_eq!(ids.len(), i);
        assert!(c.gens().iter().all(|g| sys.in_hs(g).unwrap()));
        let st = sys.names();
        let pairs: Vec<PName> =
            (0..i).map(|k| st.bullet_pair(&st.nat(k).unwrap(), &c.gen(k).unwrap()).unwrap()).collect();
        let enumeration = st.bullet_set(pairs).unwrap();
        // fixing i-1 indices fixes all of them, so s = i-1 makes the filter degenerate
        assert_eq!(sys.is_degenerate(), s + 1 >= i, "cohen({i},{n},{s})");
        assert_eq!(sys.in_hs(&enumeration).unwrap(), sys.is_degenerate(), "cohen({i},{n},{s})");
    }
}

#[test]
fn wreath_factories_are_normal_and_tenacious() {
    let structures = [
        FinStructure::pure_set(2).unwrap(),
        FinStructure::pure_set(3).unwrap(),
        FinStructure::new(3, vec![rel("P", 1, &[&[0], &[1]])]).unwrap(),
        FinStructure::new(3, vec![rel("E", 2, &[&[0, 1], &[1, 2], &[2, 0]])]).unwrap(),
    ];
    for m in structures {
        let w = wreath_system(WreathSpec::new(m.clone(), 2, 1, 1), Limits::default()).unwrap();
        let s = w.system();
        assert!(s.is_normal(), "{m:?}");
        assert!(s.tenacity_report().all, "{m:?}");
        let r = w.equivariance().unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        for (_, x) in w.relation_names() {
            assert!(s.in_hs(x).unwrap());
        }
        assert!(s.in_hs(&w.a_name()).unwrap());
    }
}

#[test]
fn wreath_default_equivariance() {
    let w = pure_wreath(1);
    let r = w.equivariance().unwrap();
    assert!(r.passed());
    assert_eq!(r.checks, 8 * (2 * (2 + 1) + 1));
    let s = w.system();
    for k in s.group().indices() {
        let el = w.element(k);
        let pi = s.group().element(k);
        for m in 0..2 {
            for a in 0..2 {
                let (m2, a2) = el.cell(m, a);
                assert_eq!(s.apply(pi, &w.gen(m, a).unwrap()).unwrap(), w.gen(m2, a2).unwrap());
            }
        }
    }
}

#[test]
fn homogeneity_examples() {
    for n in 1..=5 {
        assert_eq!(FinStructure::pure_set(n).unwrap().check_homogeneous(n).unwrap(), None);
    }
    let unary = FinStructure::new(2, vec![rel("P", 1, &[&[0]])]).unwrap();
    assert_eq!(unary.check_homogeneous(2).unwrap(), None);
    assert!(!unary.is_partial_isomorphism(&[(0, 1), (1, 0)]));
    let cycle = FinStructure::new(3, vec![rel("E", 2, &[&[0, 1], &[1, 2], &[2, 0]])]).unwrap();
    assert_eq!(cycle.check_homogeneous(2).unwrap(), None);
    assert!(!cycle.is_partial_isomorphism(&[(0, 1), (1, 0)]));
    let four_cycle = FinStructure::new(
        4,
        vec![rel("E", 2, &[&[0, 1], &[1, 0], &[1, 2], &[2, 1], &[2, 3], &[3, 2], &[3, 0], &[0, 3]])],
    )
    .unwrap();
    assert_eq!(four_cycle.check_homogeneous(3).unwrap(), None);
    let disjoint_edges = FinStructure::new(3, vec![rel("E", 2, &[&[0, 1], &[1, 0]])]).unwrap();
    let w = disjoint_edges.check_homogeneous(2).unwrap().unwrap();
    assert!(disjoint_edges.is_partial_isomorphism(&w));
}

#[test]
fn disjointify_examples() {
    let w = pure_wreath(1);
    let top = w.system().poset().top();
    let id = w.disjointify(&[0, 1], top).unwrap();
    assert!(w.system().group().element(id.element).is_identity());
    let any = w.disjointify(&[1, 0], top).unwrap();
    assert!(any.agree && any.compatible_in_poset);

    let wide = pure_wreath(4);
    let p = wide.cond_of(&[(0, 0, 0, 1), (1, 0, 1, 0)]).unwrap();
    let lift = wide.disjointify(&[1, 0], p).unwrap();
    let el = wide.element(lift.element);
    assert_eq!(el.star, [1, 0]);
    assert_eq!(el.columns[0][0], 1);
    assert_eq!(el.columns[1][0], 1);
    assert!(lift.agree && lift.compatible_in_poset);
    assert!(wide.system().poset().compatible(p, lift.image));
}

#[test]
fn disjointify_output_always_agrees() {
    let w = pure_wreath(2);
    let poset = w.system().poset();
    for p in poset.conds() {
        for star in w.spec.structure.automorphisms() {
            match w.disjointify(star, p) {
                Ok(lift) => {
                    assert!(lift.agree);
                    assert_eq!(&w.element(lift.element).star, star);
                    let touched: BTreeSet<(usize, usize)> =
                        w.condition(p).iter().chain(&w.condition(lift.image)).map(|&(m, a, _, _)| (m, a)).collect();
                    assert_eq!(lift.compatible_in_poset, touched.len() <= 2);
                }
                Err(e) => assert!(matches!(e, Error::InsufficientColumns { .. })),
            }
        }
    }
}

#[test]
fn support_examples() {
    let w = pure_wreath(2);
    let st = w.system().names();
    let a0 = st.bullet_set([w.a(0).unwrap()]).unwrap();
    let both = st.bullet_set([w.a(0).unwrap(), w.a(1).unwrap()]).unwrap();
    let r = w.support_check(&both, &set(&[0, 1])).unwrap();
    assert_eq!(r.verdict, SupportVerdict::Supported);
    let r = w.support_check(&w.a_name(), &set(&[])).unwrap();
    assert_eq!(r.verdict, SupportVerdict::Supported);
    assert!(r.precondition && r.fixed);
    let r = w.support_check(&a0, &set(&[0])).unwrap();
    assert_eq!(r.verdict, SupportVerdict::Supported);
    assert!(r.precondition);
    let r = w.support_check(&a0, &set(&[])).unwrap();
    assert!(!r.precondition && !r.fixed);
    let SupportVerdict::NotSupported(witness) = r.verdict else { panic!("{:?}", r.verdict) };
    let f = w.system().forcing();
    let p = witness.condition;
    assert!(f.forces(p, &Formula::member(w.a(witness.row).unwrap(), a0.clone())).unwrap());
    assert!(f.forces(p, &Formula::member(w.a(witness.image_row).unwrap(), a0.clone()).not()).unwrap());
    assert!(witness.lift.agree);
    assert!(!w.system().sym(&a0).unwrap().contains_index(witness.lift.element));
}

#[test]
fn support_check_out_of_columns_is_inconclusive() {
    // with one column per row any lift of the swap must keep column 0
    let m = FinStructure::pure_set(2).unwrap();
    let spec = WreathSpec { fix_columns: 0, ..WreathSpec::new(m, 2, 1, 2) };
    let w = wreath_system(spec, Limits::default()).unwrap();
    let st = w.system().names();
    let a0 = st.bullet_set([w.a(0).unwrap()]).unwrap();
    let r = w.support_check(&a0, &set(&[])).unwrap();
    assert!(!matches!(r.verdict, SupportVerdict::Contradiction(_)));
}

#[test]
fn product_names_are_fixed_by_the_right_factor() {
    let c = cohen_system(CohenSpec::new(2, 1, 1), Limits::default()).unwrap();
    let p3 = FinPoset::from_labeled_covers(&[("a", "1"), ("b", "1")], &Limits::default()).unwrap();
    let t = trivial_full_system(Arc::new(p3), Limits::default()).unwrap();
    let prod = product_system(c.system(), &t, &Limits::default()).unwrap();
    let s = &prod.system;
    assert_eq!(s.poset().len(), 15);
    assert_eq!(s.group().order(), 4);
    assert!(s.is_normal());
    assert!(!s.is_degenerate());
    let fam = name_family(s.names(), &FamilyConfig { per_rank_limit: 64, ..FamilyConfig::default() }).unwrap();
    let lifts = prod.right_lifts();
    let mut hs = 0;
    for x in &fam {
        if s.in_hs(x).unwrap() {
            hs += 1;
            for pi in &lifts {
                assert_eq!(s.apply(pi, x).unwrap(), *x);
            }
        }
    }
    assert!(hs > 0);
}
