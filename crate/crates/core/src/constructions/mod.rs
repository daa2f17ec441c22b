//! Factories for concrete symmetric systems.

pub mod cohen;
pub mod structure;
pub mod wreath;

use std::collections::BTreeSet;

pub use crate::suites::SuiteReport;

pub use cohen::{cohen_poset, cohen_system, CohenSpec, CohenSystem};
pub use structure::{FinStructure, Relation};
pub use wreath::{wreath_system, DisjointLift, SupportVerdict, WreathSpec, WreathSystem};

/// Number of partial functions on `rows × width → 2` touching at most `support` rows.
pub(crate) fn count_conditions(rows: usize, width: usize, support: usize) -> u128 {
    let per_row = 3u128.saturating_pow(width as u32).saturating_sub(1);
    (0..=support.min(rows))
        .map(|k| binomial(rows, k).saturating_mul(per_row.saturating_pow(k as u32)))
        .fold(0u128, u128::saturating_add)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub(crate) fn render_set(e: &BTreeSet<usize>) -> String {
    format!("{{{}}}", e.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
}
