use std::sync::Arc;

use itertools::Itertools;

use symext_core::constructions::{cohen_poset, CohenSpec};
use symext_core::*;

fn p3() -> Arc<FinPoset> {
    Arc::new(FinPoset::from_labeled_covers(&[("a", "1"), ("b", "1")], &Limits::default()).unwrap())
}

fn conds(p: &FinPoset, labels: &[&str]) -> Vec<Cond> {
    labels.iter().map(|l| p.cond(l).unwrap()).collect()
}

#[test]
fn compatibility_in_p3() {
    let p = p3();
    assert!(!p.compatible_labels("a", "b").unwrap());
    for c in p.conds() {
        assert!(p.compatible(c, c));
    }
    assert!(p.compatible_labels("a", "1").unwrap());
    assert_eq!(p.compatible_labels("a", "z").unwrap_err(), Error::UnknownCondition("z".into()));
}

#[test]
fn cohen_compatibility_is_agreement_within_support() {
    let spec = CohenSpec::new(3, 1, 2);
    let (p, raw) = cohen_poset(&spec, &Limits::default()).unwrap();
    for q in p.conds() {
        for r in p.conds() {
            let (a, b) = (&raw[q.index()], &raw[r.index()]);
            let agree = a.iter().all(|&(i, n, v)| b.iter().all(|&(j, m, w)| (i, n) != (j, m) || v == w));
            let mut touched: Vec<usize> = a.iter().chain(b).map(|t| t.0).collect();
            touched.sort_unstable();
            touched.dedup();
            assert_eq!(p.compatible(q, r), agree && touched.len() <= spec.support, "{q:?} {r:?}");
        }
    }
}

#[test]
fn density_examples() {
    let p = p3();
    let top = p.top();
    let all: Vec<Cond> = p.conds().collect();
    assert!(p.is_dense(&all, top));
    assert!(!p.is_dense(&conds(&p, &["a"]), top));
    assert!(p.is_dense(&conds(&p, &["a", "b"]), top));
    assert!(p.is_dense(&conds(&p, &["a"]), p.cond("a").unwrap()));
}

#[test]
fn antichain_examples() {
    let p = p3();
    let ab = p.is_antichain(&conds(&p, &["a", "b"]));
    assert!(ab.antichain && ab.maximal);
    assert!(!p.is_antichain(&conds(&p, &["1", "a"])).antichain);
    let empty = p.is_antichain(&[]);
    assert!(empty.antichain && !empty.maximal);
    assert_eq!(p.antichain_width(), 2);
}

#[test]
fn generic_filter_examples() {
    let p = p3();
    let gs = p.generic_filters();
    let members: Vec<Vec<&str>> = gs.iter().map(|g| g.members().map(|c| p.label(c)).sorted().collect()).collect();
    assert_eq!(members, vec![vec!["1", "a"], vec!["1", "b"]]);
    assert_eq!(FinPoset::singleton("1").generic_filters().len(), 1);
    let (c, _) = cohen_poset(&CohenSpec::new(1, 1, 1), &Limits::default()).unwrap();
    let gs = c.generic_filters();
    assert_eq!(gs.len(), 2);
    let gens: Vec<&str> = gs.iter().map(|g| c.label(g.generator())).collect();
    assert_eq!(gens, ["[(0,0)=0]", "[(0,0)=1]"]);
}

#[test]
fn product_examples() {
    let l = Limits::default();
    let p = p3();
    let trivial = FinPoset::product(&p, &FinPoset::singleton("1"), &l).unwrap();
    assert_eq!(trivial.len(), 3);
    for a in p.conds() {
        for b in p.conds() {
            assert_eq!(trivial.le(a, b), p.le(a, b));
        }
    }
    let sq = FinPoset::product(&p, &p, &l).unwrap();
    assert_eq!(sq.len(), 9);
    assert_eq!(sq.minimal().len(), 4);
    let n = p.len();
    for x in sq.conds() {
        for y in sq.conds() {
            let (x1, x2) = (Cond::from(x.index() / n), Cond::from(x.index() % n));
            let (y1, y2) = (Cond::from(y.index() / n), Cond::from(y.index() % n));
            assert_eq!(sq.compatible(x, y), p.compatible(x1, y1) && p.compatible(x2, y2));
        }
    }
}

fn store() -> NameStore {
    NameStore::new(p3(), Limits::default())
}

#[test]
fn canonicalize_examples() {
    let s = store();
    let a = s.poset().cond("a").unwrap();
    let b = s.poset().cond("b").unwrap();
    let e = s.empty();
    let x = s.canonicalize([(a, e.clone()), (a, e.clone())]).unwrap();
    assert_eq!(x.entries().len(), 1);
    let y1 = s.canonicalize([(a, e.clone()), (b, x.clone())]).unwrap();
    let y2 = s.canonicalize([(b, x.clone()), (a, e.clone())]).unwrap();
    assert_eq!(y1.id(), y2.id());
    let x2 = s.canonicalize([(a, e.clone())]).unwrap();
    let deep1 = s.canonicalize([(b, x.clone()), (b, x2.clone())]).unwrap();
    let deep2 = s.canonicalize([(b, x2)]).unwrap();
    assert_eq!(deep1, deep2);
    assert_eq!(deep1.entries().len(), 1);
}

#[test]
fn appears_examples() {
    let s = store();
    let a = s.poset().cond("a").unwrap();
    let b = s.poset().cond("b").unwrap();
    let x = s.canonicalize([(a, s.empty())]).unwrap();
    assert!(s.empty().appears_in(&x));
    assert!(!x.appears_in(&x));
    assert!(!x.condition_appears(b));
    assert!(x.condition_appears(a));
}

#[test]
fn check_and_bullet_examples() {
    let s = store();
    let top = s.poset().top();
    assert_eq!(s.check(&HfSet::empty()).unwrap(), s.empty());
    let one = s.check(&HfSet::singleton(HfSet::empty())).unwrap();
    assert_eq!(one.entries(), &[(top, s.empty())]);
    assert_eq!(s.bullet_set([]).unwrap(), s.empty());
    assert_eq!(s.bullet_set([s.empty()]).unwrap(), one);
    let f = Forcing::new(Arc::new(store()));
    let st = f.names();
    let a = st.poset().cond("a").unwrap();
    let x = st.canonicalize([(a, st.empty())]).unwrap();
    let bx = st.bullet_set([x.clone()]).unwrap();
    let (zero, onev) = (st.nat(0).unwrap(), st.nat(1).unwrap());
    let pair = st.bullet_pair(&zero, &onev).unwrap();
    let diag = st.bullet_pair(&x, &x).unwrap();
    for g in f.generic_filters() {
        assert_eq!(interpret(&bx, g), HfSet::singleton(interpret(&x, g)));
        assert_eq!(interpret(&pair, g), HfSet::pair(HfSet::nat(0), HfSet::nat(1)));
        let v = interpret(&x, g);
        assert_eq!(interpret(&diag, g), HfSet::singleton(HfSet::singleton(v)));
    }
}

#[test]
fn check_names_interpret_to_themselves() {
    let f = Forcing::new(Arc::new(store()));
    let s = f.names();
    let mut samples = vec![HfSet::empty()];
    for n in 0..4 {
        samples.push(HfSet::nat(n));
    }
    samples.push(HfSet::pair(HfSet::nat(2), HfSet::nat(0)));
    samples.push(HfSet::from_elements([HfSet::nat(3), HfSet::singleton(HfSet::nat(1))]));
    for x in &samples {
        let c = s.check(x).unwrap();
        assert_eq!(s.as_check(&c).as_ref(), Some(x));
        for g in f.generic_filters() {
            assert_eq!(&interpret(&c, g), x);
        }
    }
}

#[test]
fn restriction_examples() {
    let f = Forcing::new(Arc::new(store()));
    let s = f.names();
    let a = s.poset().cond("a").unwrap();
    let b = s.poset().cond("b").unwrap();
    let x = s.canonicalize([(a, s.empty())]).unwrap();
    assert_eq!(f.restrict(&x, a).unwrap(), x);
    assert_eq!(f.restrict(&x, b).unwrap(), s.empty());
    assert_eq!(restrict(&f, &x, a).unwrap(), x);
}
