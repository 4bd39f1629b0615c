//! Fuzzy quantification of Pandora temporal fault trees.
//!
//! Basic events fail exponentially with rates given as triangular fuzzy
//! numbers. Trees combine them with AND, OR, PAND (ordered AND) and POR
//! (priority OR) gates, and the engine produces the fuzzy top-event
//! probability over a mission-time grid together with a fuzzy importance
//! ranking of the basic events.
//!
//! ```
//! use fuzzy_tft::{engine::{sweep, AnalysisConfig}, tree::parse_tree};
//!
//! let tree = parse_tree(
//!     "event pump rate=2e-4\n\
//!      event valve rate=1e-3\n\
//!      gate sequence = pump PAND valve\n\
//!      top = sequence\n",
//! )?;
//! let report = sweep(&tree, &AnalysisConfig::at(&[100.0, 1000.0])?)?;
//! assert!(report.points[0].defuzzified < report.points[1].defuzzified);
//! # Ok::<(), fuzzy_tft::Error>(())
//! ```

pub mod engine;
mod error;
pub mod fixtures;
pub mod fuzzy;
pub mod gates;
pub mod mc;
pub mod quad;
pub mod report;
pub mod tree;

pub use error::{Error, Result};
pub use fuzzy::{fuzzify, Spread, Tfn};
pub use gates::MissionTime;
pub use tree::{parse_tree, FaultTree, GateKind};

/// Runs every snippet of the guide as a doc-test.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tree-documents.md")]
    mod tree_documents {}
    #[doc = include_str!("../../../book/src/fuzzy-numbers.md")]
    mod fuzzy_numbers {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/case-study.md")]
    mod case_study {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
