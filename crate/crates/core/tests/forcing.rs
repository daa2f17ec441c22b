use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symext_core::family::*;
use symext_core::suites::{oracle_equivalence, restriction_identities};
use symext_core::*;

fn p3_forcing() -> Forcing {
    let p = FinPoset::from_labeled_covers(&[("a", "1"), ("b", "1")], &Limits::default()).unwrap();
    Forcing::new(Arc::new(NameStore::new(Arc::new(p), Limits::default())))
}

fn small_family(f: &Forcing, seed: u64) -> Vec<PName> {
    let cfg = FamilyConfig { per_rank_limit: 12, seed, ..FamilyConfig::default() };
    name_family(f.names(), &cfg).unwrap()
}

#[test]
fn p3_forcing_examples() {
    let f = p3_forcing();
    let s = f.names();
    let p = f.poset();
    let (a, b, top) = (p.cond("a").unwrap(), p.cond("b").unwrap(), p.top());
    let x = s.canonicalize([(a, s.empty())]).unwrap();
    let zero = s.nat(0).unwrap();
    let zero_in_x = Formula::member(zero.clone(), x.clone());
    assert!(f.forces(a, &zero_in_x).unwrap());
    assert!(!f.forces(top, &zero_in_x).unwrap());
    assert!(f.forces(b, &Formula::equal(x.clone(), zero.clone())).unwrap());
    for c in p.conds() {
        assert!(f.forces(c, &Formula::equal(x.clone(), x.clone())).unwrap());
    }
    assert!(f.forces(top, &Formula::member(zero.clone(), s.empty()).not()).unwrap());
    let either = Formula::equal(x.clone(), zero.clone()).or(zero_in_x.clone());
    assert!(f.forces_oracle(top, &either).unwrap());
    assert!(f.forces(top, &either).unwrap());
    // a minimal condition lies in exactly one generic filter
    let g = f.generic_filters().iter().find(|g| g.generator() == a).unwrap().clone();
    assert_eq!(f.forces_oracle(a, &zero_in_x).unwrap(), f.holds(&zero_in_x, &g).unwrap());
}

#[test]
fn interpretation_examples() {
    let f = p3_forcing();
    let s = f.names();
    let a = f.poset().cond("a").unwrap();
    let x = s.canonicalize([(a, s.empty())]).unwrap();
    for g in f.generic_filters() {
        assert_eq!(interpret(&s.empty(), g), HfSet::empty());
        let expect = if g.contains(a) { HfSet::singleton(HfSet::empty()) } else { HfSet::empty() };
        assert_eq!(interpret(&x, g), expect);
    }
}

#[test]
fn oracle_equivalence_on_random_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..25 {
        let p = random_poset(&mut rng, 6, &Limits::default()).unwrap();
        let f = Forcing::new(Arc::new(NameStore::new(Arc::new(p), Limits::default())));
        let names = small_family(&f, round);
        let formulas = formula_family(&names, &FormulaConfig { seed: round, connectives: 32, quantifiers: 32 });
        let r = oracle_equivalence(&f, &formulas).unwrap();
        assert!(r.passed(), "round {round}: {:?}", &r.failures[..r.failures.len().min(5)]);
    }
}

#[test]
fn monotone_decided_and_truthful() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..10 {
        let p = random_poset(&mut rng, 7, &Limits::default()).unwrap();
        let f = Forcing::new(Arc::new(NameStore::new(Arc::new(p), Limits::default())));
        let names = small_family(&f, round);
        let formulas = formula_family(&names, &FormulaConfig { seed: round, connectives: 16, quantifiers: 16 });
        let poset = f.poset();
        for phi in formulas.iter().step_by(7) {
            for p in poset.conds() {
                let forced = f.forces(p, phi).unwrap();
                if forced {
                    assert!(poset.below(p).iter().all(|&q| f.forces(q, phi).unwrap()));
                }
                assert!(poset.below(p).iter().any(|&q| f.decides(q, phi).unwrap()));
            }
            for g in f.generic_filters() {
                let truth = f.holds(phi, g).unwrap();
                let some = g.members().any(|p| f.forces(p, phi).unwrap());
                assert_eq!(truth, some);
            }
        }
    }
}

#[test]
fn restriction_identities_on_p3() {
    let f = p3_forcing();
    let names = small_family(&f, 3);
    let r = restriction_identities(&f, &names).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.checks > names.len() * 3);
}

#[test]
fn restriction_shrinks_and_is_idempotent() {
    let f = p3_forcing();
    for x in small_family(&f, 9) {
        for p in f.poset().conds() {
            let r = f.restrict(&x, p).unwrap();
            assert!(r.rank() <= x.rank());
            let rr = f.restrict(&r, p).unwrap();
            assert!(f.forces(p, &Formula::equal(r.clone(), rr)).unwrap());
        }
    }
}
