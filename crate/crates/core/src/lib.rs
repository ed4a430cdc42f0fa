//! Coefficient operators and numerical class checks for normalized
//! analytic functions `f(z) = z + a_2 z^2 + ...` on the unit disk.
//!
//! * [`series`]: truncated power series, normalization, evaluation, CSV.
//! * [`operators`]: the diagonal operators `D^n`, `I^sigma`, `L_n^sigma`
//!   and `F_c`, with residual checks for their identities.
//! * [`zoo`]: functions with known geometry and constructors for class
//!   members.
//! * [`membership`]: grid checks for `B_n^sigma(gamma)` and
//!   `K_n^sigma(beta, gamma)`.
//! * [`lemma_lab`]: admissibility checks for test functions `psi(u, v)`.
//! * [`harness`]: theorem suites and randomized counterexample search.
//!
//! ```
//! use univalent::operators::bernardi;
//! use univalent::zoo::koebe_general;
//!
//! let libera = bernardi(&koebe_general(0.0, 8).unwrap(), 1.0).unwrap();
//! assert_eq!(libera.coeff(3).re, 1.5);
//! ```

pub mod error;
pub mod grid;
pub mod harness;
pub mod lemma_lab;
pub mod membership;
pub mod operators;
pub mod series;
pub mod zoo;

pub use error::{Error, Result};
pub use grid::DiskGrid;
pub use harness::{CaseStatus, SuiteReport, Theorem};
pub use membership::{ClassSpec, MembershipReport, Verdict};
pub use operators::OperatorSpec;
pub use series::{NormalizedSeries, TruncatedSeries};

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/lemma.md")]
    mod lemma {}
    #[doc = include_str!("../../../book/src/theorems.md")]
    mod theorems {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
