use std::collections::BTreeSet;
use std::sync::Arc;

use symext_core::constructions::*;
use symext_core::family::{atomic_formulas, name_family, FamilyConfig};
use symext_core::*;

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn cohen(i: usize, n: usize, s: usize) -> CohenSystem {
    cohen_system(CohenSpec::new(i, n, s), Limits::default()).unwrap()
}

fn p3() -> Arc<FinPoset> {
    Arc::new(FinPoset::from_labeled_covers(&[("a", "1"), ("b", "1")], &Limits::default()).unwrap())
}

#[test]
fn apply_examples() {
    let c = cohen(2, 1, 1);
    let s = c.system();
    let st = s.names();
    let fam = name_family(st, &FamilyConfig { per_rank_limit: 16, ..FamilyConfig::default() }).unwrap();
    let id = Automorphism::identity(s.poset().len());
    for x in &fam {
        assert_eq!(s.apply(&id, x).unwrap(), *x);
    }
    for pi in s.group().elements() {
        for n in 0..4 {
            let x = st.nat(n).unwrap();
            assert_eq!(s.apply(pi, &x).unwrap(), x);
        }
        for x in &fam {
            for y in &fam {
                let moved = s.apply(pi, &st.bullet_pair(x, y).unwrap()).unwrap();
                let pair = st.bullet_pair(&s.apply(pi, x).unwrap(), &s.apply(pi, y).unwrap()).unwrap();
                assert_eq!(moved, pair);
            }
        }
    }
    let p = p3();
    let store = NameStore::new(p.clone(), Limits::default());
    let sigma = Automorphism::from_cycles(&p, &[vec!["a", "b"]]).unwrap();
    let x = store.canonicalize([(p.cond("a").unwrap(), store.empty())]).unwrap();
    let y = store.canonicalize([(p.cond("b").unwrap(), store.empty())]).unwrap();
    assert_eq!(apply(&sigma, &x, &store).unwrap(), y);
}

#[test]
fn action_laws_and_conjugation_identity() {
    let c = cohen(3, 1, 1);
    let s = c.system();
    let fam = name_family(s.names(), &FamilyConfig { per_rank_limit: 24, ..FamilyConfig::default() }).unwrap();
    let g = s.group();
    for x in &fam {
        let sym = s.sym(x).unwrap();
        for pi in g.elements() {
            let px = s.apply(pi, x).unwrap();
            assert_eq!(px.rank(), x.rank());
            assert_eq!(px.entries().len(), x.entries().len());
            assert_eq!(s.sym(&px).unwrap(), conjugate(pi, &sym).unwrap());
            assert_eq!(s.in_hs(&px).unwrap(), s.in_hs(x).unwrap());
            for rho in g.elements() {
                let lhs = s.apply(&pi.compose(rho), x).unwrap();
                assert_eq!(lhs, s.apply(pi, &s.apply(rho, x).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn symmetry_lemma_on_small_cohen() {
    let c = cohen(2, 1, 1);
    let s = c.system();
    let fam = name_family(s.names(), &FamilyConfig { per_rank_limit: 24, ..FamilyConfig::default() }).unwrap();
    let r = symmetry_lemma_check(s.forcing(), s.group(), &atomic_formulas(&fam)).unwrap();
    assert!(r.passed());
    assert_eq!(r.checks, 2 * fam.len() * fam.len() * 2 * s.poset().len());
}

#[test]
fn stabilizer_examples() {
    let c = cohen(2, 1, 1);
    let s = c.system();
    let st = s.names();
    assert_eq!(s.sym(&st.nat(2).unwrap()).unwrap(), *s.group());
    assert_eq!(s.sym(&c.gen(0).unwrap()).unwrap(), c.fix(&set(&[0])));
    let all = st.bullet_set(c.gens().to_vec()).unwrap();
    assert_eq!(s.sym(&all).unwrap(), *s.group());
    let c3 = cohen(3, 1, 1);
    assert_eq!(c3.system().sym(&c3.gen(1).unwrap()).unwrap(), c3.fix(&set(&[1])));
}

#[test]
fn conjugate_and_condition_stabilizer_examples() {
    let c = cohen(2, 1, 1);
    let s = c.system();
    let g = s.group();
    let id = Automorphism::identity(s.poset().len());
    let h = c.fix(&set(&[0]));
    assert_eq!(conjugate(&id, &h).unwrap(), h);
    let c3 = cohen(3, 1, 1);
    let g3 = c3.system().group();
    let swap01 = g3.elements().find(|pi| g3.index_of(pi).map(|k| c3.index_perm(k) == [1, 0, 2]).unwrap()).unwrap();
    assert_eq!(conjugate(swap01, &c3.fix(&set(&[0]))).unwrap(), c3.fix(&set(&[1])));
    assert_eq!(condition_stabilizer(g, s.poset().top()), *g);
    let p = c3.cond_of(&[(0, 0, 1)]).unwrap();
    let stab = condition_stabilizer(g3, p);
    assert!(c3.fix(&set(&[0])).is_subgroup_of(&stab));
    let t = trivial_full_system(p3(), Limits::default()).unwrap();
    let a = t.poset().cond("a").unwrap();
    assert!(condition_stabilizer(t.group(), a).is_trivial());
}

#[test]
fn filter_membership() {
    let c = cohen(3, 1, 1);
    let s = c.system();
    assert!(s.filter_contains(s.group()));
    assert!(!s.filter_contains(&c.fix(&set(&[0, 1]))));
    assert!(!s.filter_contains(&s.group().trivial()));
    let c4 = cohen(4, 1, 2);
    assert!(c4.system().filter_contains(&c4.fix(&set(&[0, 1]))));
    assert!(!c4.system().filter_contains(&c4.system().group().trivial()));
    assert!(!c4.system().filter().is_directed());
}

#[test]
fn normality_examples() {
    let c = cohen(2, 1, 1);
    assert!(c.system().is_normal());
    let full = cohen_system(CohenSpec::new(2, 1, 1).with_base(vec![set(&[])]), Limits::default()).unwrap();
    assert!(full.system().is_normal());
    let c3 = cohen_system(CohenSpec::new(3, 1, 1).with_base(vec![set(&[0])]), Limits::default()).unwrap();
    let w = c3.system().normality_witness().unwrap();
    assert_eq!(c3.system().describe(&w.conjugate), "fix({1})");
}

#[test]
fn hs_examples() {
    let c = cohen(3, 1, 1);
    let s = c.system();
    let st = s.names();
    for n in 0..4 {
        assert!(s.in_hs(&st.nat(n).unwrap()).unwrap());
    }
    for g in c.gens() {
        assert!(s.in_hs(g).unwrap());
    }
    assert!(s.in_hs(&st.bullet_set(c.gens().to_vec()).unwrap()).unwrap());
    let pairs: Vec<PName> = (0..3).map(|i| st.bullet_pair(&st.nat(i).unwrap(), &c.gen(i).unwrap()).unwrap()).collect();
    let f = st.bullet_set(pairs).unwrap();
    assert!(!s.in_hs(&f).unwrap());
    assert!(s.sym(&f).unwrap().is_trivial());
    assert!(s.hs_failure(&f).unwrap().is_some());
}

#[test]
fn tenacity_examples() {
    let c = cohen(3, 1, 1);
    let r = c.system().tenacity_report();
    assert!(r.all && r.dense);
    assert!(c.system().is_tenacious(c.system().poset().top()).unwrap());
    let spec = CohenSpec::new(3, 1, 3).with_base((0..3).map(|i| set(&[i])).chain([set(&[])]).collect());
    let unbounded = cohen_system(spec, Limits::default()).unwrap();
    let s = unbounded.system();
    let p = unbounded.cond_of(&[(0, 0, 0), (1, 0, 1)]).unwrap();
    assert!(!s.is_tenacious(p).unwrap());
    let r = s.tenacity_report();
    assert!(!r.all);
    assert!(r.dense);
}

#[test]
fn seq_name_examples() {
    let c2 = cohen(3, 1, 2);
    let seq = c2.system().seq_name(&[(0, c2.gen(0).unwrap()), (1, c2.gen(1).unwrap())]).unwrap();
    assert!(seq.certificate.is_some());
    assert!(c2.system().in_hs(&seq.name).unwrap());
    let c1 = cohen(3, 1, 1);
    let seq = c1.system().seq_name(&[(0, c1.gen(0).unwrap()), (1, c1.gen(1).unwrap())]).unwrap();
    assert!(seq.certificate.is_none());
    assert!(!c1.system().in_hs(&seq.name).unwrap());
    assert_eq!(c1.system().seq_name(&[]).unwrap().name, c1.system().names().empty());
    let c4 = cohen(4, 1, 2);
    let seq = c4.system().seq_name(&[(0, c4.gen(0).unwrap()), (1, c4.gen(1).unwrap())]).unwrap();
    assert_eq!(seq.intersection, c4.fix(&set(&[0, 1])));
    assert_eq!(c4.system().filter().label(seq.certificate.unwrap()), "fix({0,1})");
    assert!(c4.system().in_hs(&seq.name).unwrap());
}

#[test]
fn mix_examples() {
    let c = cohen(3, 1, 1);
    let s = c.system();
    let st = s.names();
    let f = s.forcing();
    let p0 = c.cond_of(&[(0, 0, 0)]).unwrap();
    let p1 = c.cond_of(&[(0, 0, 1)]).unwrap();
    let (zero, one) = (st.nat(0).unwrap(), st.nat(1).unwrap());
    let m = s.mix(&[(p0, zero.clone()), (p1, one.clone())]).unwrap();
    assert!(f.forces(p0, &Formula::equal(m.name.clone(), zero.clone())).unwrap());
    assert!(f.forces(p1, &Formula::equal(m.name.clone(), one.clone())).unwrap());
    assert!(m.certificate.is_some());
    assert!(s.in_hs(&m.name).unwrap());
    let top = s.poset().top();
    let single = s.mix(&[(top, c.gen(2).unwrap())]).unwrap();
    assert_eq!(single.name, f.restrict(&c.gen(2).unwrap(), top).unwrap());
    assert!(f.forces(top, &Formula::equal(single.name, c.gen(2).unwrap())).unwrap());
    let q = c.cond_of(&[(1, 0, 0)]).unwrap();
    let off = s.mix(&[(p0, one.clone())]).unwrap();
    assert!(f.forces(q, &Formula::equal(off.name, st.empty())).unwrap());
    assert!(matches!(s.mix(&[(p0, zero.clone()), (top, zero)]), Err(Error::NotAntichain(..))));
}

fn lift_left(x: &PName, product: &ProductSystem, memo: &mut std::collections::HashMap<NameId, PName>) -> PName {
    if let Some(y) = memo.get(&x.id()) {
        return y.clone();
    }
    let st = product.system.names();
    let top = Cond::from(0);
    let entries: Vec<(Cond, PName)> =
        x.entries().iter().map(|(p, y)| (product.pair(*p, top), lift_left(y, product, memo))).collect();
    let out = st.canonicalize(entries).unwrap();
    memo.insert(x.id(), out.clone());
    out
}

#[test]
fn product_with_a_point_keeps_hs() {
    let c = cohen(3, 1, 1);
    let point = trivial_full_system(Arc::new(FinPoset::singleton("1")), Limits::default()).unwrap();
    let prod = product_system(c.system(), &point, &Limits::default()).unwrap();
    assert_eq!(prod.system.poset().len(), c.system().poset().len());
    assert_eq!(prod.system.group().order(), 6);
    let fam = name_family(c.system().names(), &FamilyConfig { per_rank_limit: 32, ..FamilyConfig::default() }).unwrap();
    let mut memo = Default::default();
    let extra = [c.gen(0).unwrap(), c.system().names().bullet_set(c.gens().to_vec()).unwrap()];
    for x in fam.iter().chain(&extra) {
        let y = lift_left(x, &prod, &mut memo);
        assert_eq!(c.system().in_hs(x).unwrap(), prod.system.in_hs(&y).unwrap());
    }
}

#[test]
fn trivial_full_hs_is_full_invariance() {
    let t = trivial_full_system(p3(), Limits::default()).unwrap();
    let fam = name_family(t.names(), &FamilyConfig { per_rank_limit: 64, ..FamilyConfig::default() }).unwrap();
    for x in &fam {
        let fixed = x.closure().iter().all(|y| t.group().elements().all(|pi| t.apply(pi, y).unwrap() == *y));
        assert_eq!(t.in_hs(x).unwrap(), fixed);
    }
}
