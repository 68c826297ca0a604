//! Algebraic logical geometry over finite models.
//!
//! A finite model `𝓗 = (H, Ψ, f)` determines, for every finite variable set
//! `X`, the boolean algebra of definable subsets of `H^X` and dually the
//! lattice of `𝓗`-closed formula filters. This crate computes both exactly,
//! builds the knowledge functors between them and decides, within explicit
//! bounds, whether two knowledge bases are isomorphic, logically
//! automorphically equivalent or informationally equivalent.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod category;
pub mod config;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod formula;
pub mod lattice;
pub mod par;
pub mod report;
pub mod semantics;
pub(crate) mod syntax;

pub use config::{Bounds, Exec};
pub use error::{Error, Result};
