//! Finite bounded ordered sets, their lattices of principal congruences, and
//! the lattice constructions that realize a bounded ordered set (and an
//! isotone map between two of them) as ordered sets of principal congruences.
//!
//! Every construction is certified after the fact: lattices are re-derived
//! from their orders, congruences are computed by closure and can be checked
//! against a brute-force partition oracle, and the representing maps are
//! verified as order-isomorphisms.

pub mod congruence;
pub mod construction;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod order;

pub use congruence::{Congruence, CongruenceOrder, ExtMap};
pub use construction::{Gadget, Theorem1Build, Theorem2Build};
pub use error::{Error, Result};
pub use lattice::{FiniteLattice, FrameLabeling, Role};
pub use order::{BoundedPoset, ElementId, IsotoneMap};
