//! Finite forcing with symmetric systems.
//!
//! Posets, hash-consed names, a recursive forcing relation with an
//! independent generic-filter oracle, automorphism groups acting on names,
//! normal filter bases, hereditary symmetry, and factories for Cohen and
//! wreath-product systems. Everything is small enough to check exhaustively.

pub mod constructions;
pub mod error;
pub mod family;
pub mod forcing;
pub mod formula;
pub mod groups;
pub mod hf;
pub mod limits;
pub mod names;
pub mod poset;
pub mod suites;
pub mod symmetric;

pub use error::{Error, Result};
pub use forcing::{interpret, Forcing};
pub use formula::{Formula, Term};
pub use groups::{
    apply, apply_formula, condition_stabilizer, conjugate, poset_automorphisms, stabilizer, symmetry_lemma_check,
    Automorphism, FinGroup, SymmetryReport, SymmetryViolation,
};
pub use hf::HfSet;
pub use limits::Limits;
pub use names::{restrict, NameId, NameStore, PName};
pub use poset::{AntichainCheck, Cond, FinPoset, GenericFilter};
pub use suites::SuiteReport;
pub use symmetric::{
    product_system, trivial_full_system, FilterBase, Mix, MixDiagnostic, NormalityWitness, ProductSystem, SeqName,
    SymSystem, TenacityReport,
};
