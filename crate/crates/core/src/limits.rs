/// Size budgets for the exhaustive machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest poset that may be constructed.
    pub max_poset: usize,
    /// Largest group that may be enumerated.
    pub max_group: usize,
    /// Largest name rank that may be interned.
    pub rank_cap: u32,
    /// Largest number of entries in a single name.
    pub max_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_poset: 20_000, max_group: 10_080, rank_cap: 6, max_entries: 4_096 }
    }
}
