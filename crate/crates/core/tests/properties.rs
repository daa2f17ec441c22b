use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symext_core::family::{name_family, random_poset, FamilyConfig};
use symext_core::*;

fn poset_from_seed(seed: u64, max: usize) -> FinPoset {
    random_poset(&mut ChaCha8Rng::seed_from_u64(seed), max, &Limits::default()).unwrap()
}

fn small_store(seed: u64) -> NameStore {
    NameStore::new(Arc::new(poset_from_seed(seed, 4)), Limits::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_names_ignore_entry_order(seed in any::<u64>(), picks in prop::collection::vec((0usize..8, 0usize..8), 0..10), shift in 0usize..10) {
        let store = small_store(seed);
        let fam = name_family(&store, &FamilyConfig { max_rank: 1, ..FamilyConfig::default() }).unwrap();
        let n = store.poset().len();
        let entries: Vec<(Cond, PName)> =
            picks.iter().map(|&(c, x)| (Cond::from(c % n), fam[x % fam.len()].clone())).collect();
        let mut rotated = entries.clone();
        if !rotated.is_empty() {
            let k = shift % rotated.len();
            rotated.rotate_left(k);
        }
        rotated.reverse();
        let doubled: Vec<_> = entries.iter().chain(&entries).cloned().collect();
        let a = store.canonicalize(entries).unwrap();
        prop_assert_eq!(&a, &store.canonicalize(rotated).unwrap());
        prop_assert_eq!(&a, &store.canonicalize(doubled).unwrap());
    }

    #[test]
    fn compatibility_is_symmetric_and_reflexive(seed in any::<u64>()) {
        let p = poset_from_seed(seed, 8);
        for a in p.conds() {
            prop_assert!(p.compatible(a, a));
            for b in p.conds() {
                prop_assert_eq!(p.compatible(a, b), p.compatible(b, a));
                if p.le(a, b) {
                    prop_assert!(p.compatible(a, b));
                }
            }
        }
    }

    #[test]
    fn generic_filters_meet_dense_sets(seed in any::<u64>(), mask in any::<u16>()) {
        let p = poset_from_seed(seed, 8);
        let set: Vec<Cond> = p.conds().filter(|c| mask & (1 << c.index()) != 0).collect();
        let filters = p.generic_filters();
        prop_assert!(!filters.is_empty());
        for g in &filters {
            prop_assert!(g.is_filter_of(&p));
        }
        if p.is_dense(&set, p.top()) {
            for g in &filters {
                prop_assert!(g.meets(&set));
            }
        }
        // the minimal elements are themselves dense, so every generic contains one
        let mins = p.minimal().to_vec();
        prop_assert!(p.is_dense(&mins, p.top()));
    }

    #[test]
    fn product_minimal_elements_are_pairs(s1 in any::<u64>(), s2 in any::<u64>()) {
        let l = poset_from_seed(s1, 5);
        let r = poset_from_seed(s2, 5);
        let prod = FinPoset::product(&l, &r, &Limits::default()).unwrap();
        let width = r.len();
        let mut expected: Vec<usize> = l
            .minimal()
            .iter()
            .flat_map(|a| r.minimal().iter().map(move |b| a.index() * width + b.index()))
            .collect();
        expected.sort_unstable();
        let mut got: Vec<usize> = prod.minimal().iter().map(|c| c.index()).collect();
        got.sort_unstable();
        prop_assert_eq!(got, expected);
        prop_assert_eq!(prod.top().index(), l.top().index() * r.len() + r.top().index());
    }

    #[test]
    fn group_action_laws(seed in any::<u64>()) {
        let poset = Arc::new(poset_from_seed(seed, 5));
        let store = NameStore::new(poset.clone(), Limits::default());
        let auts = poset_automorphisms(&poset, 200).unwrap();
        let group = FinGroup::generate(poset.clone(), &auts, 200).unwrap();
        let fam = name_family(&store, &FamilyConfig { per_rank_limit: 12, ..FamilyConfig::default() }).unwrap();
        let id = Automorphism::identity(poset.len());
        for x in &fam {
            prop_assert_eq!(&apply(&id, x, &store).unwrap(), x);
            for s in group.elements() {
                let sx = apply(s, x, &store).unwrap();
                prop_assert_eq!(sx.rank(), x.rank());
                prop_assert_eq!(&apply(&s.inverse(), &sx, &store).unwrap(), x);
                for t in group.elements() {
                    let lhs = apply(&t.compose(s), x, &store).unwrap();
                    prop_assert_eq!(lhs, apply(t, &sx, &store).unwrap());
                }
            }
        }
    }
}
