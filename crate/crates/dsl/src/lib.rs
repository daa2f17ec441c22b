//! A small document language for the symext workbench.
//!
//! Documents declare symmetric systems, bind names, and state assertions,
//! queries and suites; [`run`] executes them in order and produces a
//! [`Report`] whose JSON form is deterministic for a given document and seed.
//!
//! ```
//! let doc = symext_dsl::parse_spec(
//!     "system C = cohen(indices=3, bits=1, support=1);
//!      name A = bullet{ gen(0), gen(1), gen(2) };
//!      assert hs(A);
//!      assert !hs(seq[(0, gen(0)), (1, gen(1)), (2, gen(2))]);",
//! )
//! .unwrap();
//! let report = symext_dsl::run(&doc, &symext_dsl::Config::default());
//! assert_eq!(report.exit_code(), 0);
//! ```

pub mod ast;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod render;
pub mod report;
pub mod run;

pub use ast::SpecDocument;
pub use error::{ErrorKind, ParseError, Pos};
pub use parser::{parse_condition, parse_formula, parse_hf, parse_spec};
pub use render::render_document;
pub use report::{Outcome, Report, StatementReport};
pub use run::{force_query, run, Config, ForceAnswer};
pub use symext_core::Limits;
