//! Deterministic sample families of names, formulas and posets for the suites.
//!
//! A rank layer is enumerated exhaustively when it has at most
//! `per_rank_limit` candidates and sampled with a seeded ChaCha stream otherwise.

use std::collections::HashSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::formula::{Formula, Term};
use crate::limits::Limits;
use crate::names::{NameStore, PName};
use crate::poset::{Cond, FinPoset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyConfig {
    pub max_rank: u32,
    /// Most entries per generated name.
    pub max_entries: usize,
    pub per_rank_limit: usize,
    pub seed: u64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig { max_rank: 2, max_entries: 2, per_rank_limit: 48, seed: 0 }
    }
}

fn layer_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i + 1) as u128)
}

/// Names of rank `0..=max_rank`, grouped by rank in increasing order.
///
/// Each name of rank `r > 0` has an entry whose name has rank `r - 1`.
pub fn name_family(store: &NameStore, cfg: &FamilyConfig) -> Result<Vec<PName>> {
    let conds: Vec<Cond> = store.poset().conds().collect();
    let mut out = vec![store.empty()];
    let mut seen: HashSet<_> = out.iter().map(|x| x.id()).collect();
    for r in 1..=cfg.max_rank {
        let pairs: Vec<(Cond, PName)> = conds.iter().flat_map(|&p| out.iter().map(move |y| (p, y.clone()))).collect();
        let fresh = pairs.iter().filter(|(_, y)| y.rank() + 1 == r).count();
        let stale = pairs.len() - fresh;
        let candidates: u128 = (1..=cfg.max_entries).map(|k| binomial(pairs.len(), k) - binomial(stale, k)).sum();
        let mut layer = Vec::new();
        if candidates <= cfg.per_rank_limit as u128 {
            for k in 1..=cfg.max_entries {
                for combo in pairs.iter().combinations(k) {
                    if combo.iter().any(|(_, y)| y.rank() + 1 == r) {
                        let x = store.canonicalize(combo.into_iter().cloned())?;
                        if seen.insert(x.id()) {
                            layer.push(x);
                        }
                    }
                }
            }
        } else {
            let mut rng = layer_rng(cfg.seed, r as u64);
            let fresh_pairs: Vec<&(Cond, PName)> = pairs.iter().filter(|(_, y)| y.rank() + 1 == r).collect();
            let mut attempts = 0;
            while layer.len() < cfg.per_rank_limit && attempts < cfg.per_rank_limit * 20 {
                attempts += 1;
                let k = rng.random_range(1..=cfg.max_entries);
                let mut entries = vec![fresh_pairs[rng.random_range(0..fresh_pairs.len())].clone()];
                for _ in 1..k {
                    entries.push(pairs[rng.random_range(0..pairs.len())].clone());
                }
                let x = store.canonicalize(entries)?;
                if seen.insert(x.id()) {
                    layer.push(x);
                }
            }
        }
        out.extend(layer);
    }
    Ok(out)
}

/// `x ∈ y` and `x = y` for every ordered pair.
pub fn atomic_formulas(names: &[PName]) -> Vec<Formula> {
    let mut out = Vec::with_capacity(2 * names.len() * names.len());
    for x in names {
        for y in names {
            out.push(Formula::member(x.clone(), y.clone()));
            out.push(Formula::equal(x.clone(), y.clone()));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaConfig {
    pub seed: u64,
    /// Sampled `¬`, `∧`, `∨` formulas over atoms.
    pub connectives: usize,
    /// Sampled bounded `∃`/`∀` formulas.
    pub quantifiers: usize,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        FormulaConfig { seed: 0, connectives: 64, quantifiers: 64 }
    }
}

/// All atoms over `names`, one sampled connective layer and one sampled quantifier layer.
pub fn formula_family(names: &[PName], cfg: &FormulaConfig) -> Vec<Formula> {
    let atoms = atomic_formulas(names);
    let mut out = atoms.clone();
    if atoms.is_empty() {
        return out;
    }
    let mut rng = layer_rng(cfg.seed, 0xf0);
    for _ in 0..cfg.connectives {
        let a = atoms[rng.random_range(0..atoms.len())].clone();
        let b = atoms[rng.random_range(0..atoms.len())].clone();
        out.push(match rng.random_range(0..3) {
            0 => a.not(),
            1 => a.and(b),
            _ => a.or(b),
        });
    }
    let var = || Term::var("v");
    for _ in 0..cfg.quantifiers {
        let t = names[rng.random_range(0..names.len())].clone();
        let y = Term::Name(names[rng.random_range(0..names.len())].clone());
        let body = match rng.random_range(0..4) {
            0 => Formula::In(var(), y),
            1 => Formula::Eq(var(), y),
            2 => Formula::In(y, var()),
            _ => Formula::In(var(), y).not(),
        };
        out.push(if rng.random_bool(0.5) { Formula::exists("v", t, body) } else { Formula::forall("v", t, body) });
    }
    out
}

/// A random poset with at most `max_size` elements; element 0 is the top.
pub fn random_poset(rng: &mut impl Rng, max_size: usize, limits: &Limits) -> Result<FinPoset> {
    let n = rng.random_range(1..=max_size.max(1));
    let labels: Vec<String> = (0..n).map(|i| if i == 0 { "1".into() } else { format!("c{i}") }).collect();
    let mut covers = Vec::new();
    for i in 1..n {
        let mut any = false;
        for j in 0..i {
            if rng.random_bool(0.4) {
                covers.push((i, j));
                any = true;
            }
        }
        if !any {
            covers.push((i, rng.random_range(0..i)));
        }
    }
    FinPoset::from_covers(labels, &covers, limits)
}
