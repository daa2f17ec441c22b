use thiserror::Error;

/// Errors raised by the workbench.
///
/// Cap violations (`PosetTooLarge`, `GroupTooLarge`, `RankCap`, `EntryCap`)
/// mean the requested object is legitimate but outside the configured
/// exhaustive budget; see [`Error::is_cap`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),

    #[error("condition index {index} is out of range for a poset of {len} elements")]
    ConditionOutOfRange { index: usize, len: usize },

    #[error("a poset needs at least one element")]
    EmptyPoset,

    #[error("duplicate condition label `{0}`")]
    DuplicateLabel(String),

    #[error("not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("the order has no top element")]
    NoTop,

    #[error("poset has {size} elements, the cap is {cap}")]
    PosetTooLarge { size: usize, cap: usize },

    #[error("group has at least {size} elements, the cap is {cap}")]
    GroupTooLarge { size: usize, cap: usize },

    #[error("name of rank {rank} exceeds the rank cap {cap}")]
    RankCap { rank: u32, cap: u32 },

    #[error("name with {count} entries exceeds the entry cap {cap}")]
    EntryCap { count: usize, cap: usize },

    #[error("name belongs to a different poset")]
    MixedPoset,

    #[error("group does not act on this poset")]
    ForeignGroup,

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("formula is not closed: free variable `{0}`")]
    OpenFormula(String),

    #[error("not an antichain: `{0}` and `{1}` are compatible")]
    NotAntichain(String, String),

    #[error("duplicate sequence index {0}")]
    DuplicateIndex(usize),

    #[error("invalid construction: {0}")]
    InvalidSpec(String),

    #[error(
        "row {row}: {needed} columns must avoid {blocked} used ones, but only {columns} exist; widen the column set"
    )]
    InsufficientColumns { row: usize, needed: usize, blocked: usize, columns: usize },
}

impl Error {
    /// True for errors that only report an exceeded size budget.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::PosetTooLarge { .. } | Error::GroupTooLarge { .. } | Error::RankCap { .. } | Error::EntryCap { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
