//! Finite universal algebra: operation tables, subalgebras, congruences,
//! first-order definability checks and a catalogue of Heyting-algebra examples.

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod congruence;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod logic;

pub use algebra::{Elem, FiniteAlgebra, OpSymbol, Signature, Term};
pub use congruence::{CongruenceLattice, Partition};
pub use error::{Error, Result};
pub use logic::{Formula, OpDefinition, Vars};
