//! Computational order theory for valuation calculus.
//!
//! Build finite posets and lattices, assign valuations and bi-valuations,
//! and check the sum rule, the product rules, the chain rule and the Bayes
//! identity exhaustively over a lattice.

pub mod bivaluation;
pub mod builders;
pub mod document;
pub mod dot;
pub mod error;
pub mod ident;
pub mod lattice;
pub mod number_theory;
pub mod poset;
pub mod valuation;

pub use bivaluation::BiValuation;
pub use builders::{Builder, ProductLattice};
pub use document::PosetDocument;
pub use error::{Error, Result};
pub use lattice::{certify_lattice, Lattice, LatticeDiagnostic};
pub use number_theory::DivisorLattice;
pub use poset::{Elem, Poset, Shape};
pub use valuation::{RuleReport, Valuation};

/// Absolute tolerance used by every floating-point rule check unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default cap on the number of elements a builder may produce.
pub const DEFAULT_MAX_ELEMENTS: usize = 4096;
