#![no_std]

//! Latin squares, their row/column/symbol parities, and the row-cycle
//! switching machinery that relates squares of different parity.
//!
//! Everything here is allocation-backed but IO-free. Indices and symbols are
//! 0-based throughout the API; the text formats in the companion crate add 1
//! on the way out.
//!
//! - [`perm`]: permutations, signs and cycle types.
//! - [`square`]: [`LatinSquare`], the parity triple, class predicates,
//!   reduction and row inversion.
//! - [`cycles`]: row cycles, switching and the parity-reversing involutions.
//! - [`enumerate`]: exhaustive enumeration of small classes and parity censuses.
//! - [`partitions`]: derangement cycle types and the exact formulas built on them.
//! - [`sampler`]: a Jacobson–Matthews chain and last-two-rows statistics.

extern crate alloc;

pub mod cycles;
pub mod enumerate;
mod error;
pub mod partitions;
pub mod perm;
pub mod sampler;
pub mod square;

pub use crate::error::{Error, Result};
pub use crate::perm::Permutation;
pub use crate::square::{LatinSquare, ParityTriple, Properties};
