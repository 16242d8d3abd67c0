//! Milnor link invariants from diagrams.
//!
//! Diagrams (PD codes, braid words or generated string links) are turned into
//! Wirtinger presentations; longitudes are expanded in the Magnus ring and
//! their coefficients give `μ(I)` and the residues `μ̄(I)`. On top of that sit
//! link-homotopy normal forms for string links and self-Δ-equivalence
//! decisions for links.

pub mod classify;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod freegroup;
pub mod invariants;
pub mod magnus;
pub mod multiindex;
pub mod wirtinger;

pub use diagram::{BraidWord, Diagram, LinkDiagram, StringLinkDiagram};
pub use error::{Error, Result};
pub use freegroup::{GroupWord, Letter};
pub use invariants::{DeltaMode, InvariantTable, MilnorEngine, Residue};
pub use magnus::TruncatedSeries;
pub use multiindex::{InjectionPi, MultiIndex, SurjectionTau};
