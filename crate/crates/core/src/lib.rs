//! Pure finite sets under the constituency order.
//!
//! Sets are interned ([`SetHandle`]) so equality is a word compare. On top of
//! the kernel sit the replacement algebra, constituent-structure graphs,
//! numeral and tuple encodings, and the fusion calculus of top, bottom and
//! middle structures.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod fusion;
pub mod numerals;
pub mod set;
pub mod structure;
pub mod tuples;

pub use error::{Error, Result};
pub use set::{parse, SetHandle};
pub use structure::{CanonicalCert, IsoWitness, StructureGraph};
