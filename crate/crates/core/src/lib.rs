//! Inconsistency indices for triads (3x3 pairwise comparison matrices) and an
//! engine that searches for violations of the standard inconsistency axioms.
//!
//! ```
//! use triadic_core::{indices, Triad};
//!
//! let t = Triad::new(1.0, 3.0, 2.0).unwrap();
//! assert_eq!(indices::natural_index(&t), 1.5);
//! assert_eq!(t.canonicalize().ratio, 1.5);
//! ```

pub mod analysis;
pub mod axioms;
pub mod cli;
pub mod error;
pub mod indices;
pub mod io;
pub mod matrix;
pub mod report;
pub mod triad;

pub use axioms::{audit, check_axiom, AuditConfig, AuditReport, Axiom, AxiomVerdict, Verdict, Witness};
pub use error::{Error, Result};
pub use indices::{catalog, eval_catalog, lookup, IndexDescriptor};
pub use matrix::{Completion, Permutation, ReciprocalMatrix};
pub use triad::{CanonicalForm, Entry, Triad};
