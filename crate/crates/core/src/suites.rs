//! Exhaustive cross-checks over a poset and a sample of names or formulas.

use rayon::prelude::*;

use crate::error::Result;
use crate::forcing::Forcing;
use crate::formula::Formula;
use crate::names::PName;

/// Number of checks run and a description of each failure, in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

fn collect(parts: Vec<Result<SuiteReport>>) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for part in parts {
        report.merge(part?);
    }
    Ok(report)
}

/// Recursive forcing against the generic-filter oracle, at every condition.
pub fn oracle_equivalence(forcing: &Forcing, formulas: &[Formula]) -> Result<SuiteReport> {
    let poset = forcing.poset();
    let parts = formulas
        .par_iter()
        .enumerate()
        .map(|(i, phi)| {
            let mut r = SuiteReport::default();
            for p in poset.conds() {
                let rec = forcing.forces(p, phi)?;
                let orc = forcing.forces_oracle(p, phi)?;
                r.checks += 1;
                if rec != orc {
                    r.failures.push(format!("formula #{i} at {}: recursive {rec}, oracle {orc}", poset.label(p)));
                }
            }
            Ok(r)
        })
        .collect();
    collect(parts)
}

/// `p ⊩ ẋ = ẋ↾p`, and `q ⊩ ẋ↾p = ∅` for every `q` incompatible with `p`.
pub fn restriction_identities(forcing: &Forcing, names: &[PName]) -> Result<SuiteReport> {
    let poset = forcing.poset();
    let empty = forcing.names().empty();
    let parts = names
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = SuiteReport::default();
            for p in poset.conds() {
                let restricted = forcing.restrict(x, p)?;
                r.checks += 1;
                if !forcing.forces(p, &Formula::equal(x.clone(), restricted.clone()))? {
                    r.failures.push(format!("name #{i}: {} does not force x = x|p", poset.label(p)));
                }
                for q in poset.conds().filter(|&q| !poset.compatible(p, q)) {
                    r.checks += 1;
                    if !forcing.forces(q, &Formula::equal(restricted.clone(), empty.clone()))? {
                        r.failures.push(format!(
                            "name #{i}: {} does not force x|{} = empty",
                            poset.label(q),
                            poset.label(p)
                        ));
                    }
                }
            }
            Ok(r)
        })
        .collect();
    collect(parts)
}
