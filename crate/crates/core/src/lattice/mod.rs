//! Definable sets, Galois closure and the lattices of closed filters.

mod definable;
mod filter;

pub use definable::{closure, generate_definable_algebra, DefinableAlgebra, DefinableSet};
pub use filter::{lattice_invariants, s_tilde_filter, ClosedFilter, FilterLattice, LatticeInvariants};

#[cfg(test)]
mod tests;
