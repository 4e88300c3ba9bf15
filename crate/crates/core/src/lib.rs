//! Finite lattices, involutions and their congruence lattices.

pub mod bits;
pub mod canon;
pub mod census;
pub mod congruence;
pub mod constructions;
pub mod involution;
pub mod io;
pub mod lattice;
pub mod partition;

pub use lattice::{FiniteLattice, Interval, LatticeError};
