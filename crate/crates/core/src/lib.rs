//! Exact-arithmetic engine for Verma modules over quantum `sl(n+1)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`qscalars`] — rational scalars, q-brackets and weights.
//! * [`linalg`] — exact linear algebra used throughout.
//! * [`freealg`] — the free algebra on the negative generators, the Serre
//!   ideal and straightening into the PBW basis.
//! * [`verma`] — the Verma module: generator actions, pairings, Gram matrices.
//! * [`dynamical`] — the dynamical root vectors and their monomials.
//! * [`formulas`] — closed-form norms, factor identities and criteria.
//! * [`suites`] — verification suites comparing formulas with the engine.
//! * [`report`] — run configuration and rendering used by the command-line tool.

pub mod dynamical;
pub mod error;
pub mod formulas;
pub mod freealg;
pub mod linalg;
pub mod qscalars;
pub mod report;
pub mod suites;
pub mod verma;

pub use error::{Error, Result};
pub use formulas::FormulaDiscrepancy;
pub use freealg::{FreeElement, TriangularArray, WeightSpace, Word};
pub use qscalars::{Params, Rational, WeightContent};
pub use verma::{EScript, Verma, VermaVector};
