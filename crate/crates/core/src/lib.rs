//! Exact computations around the index of varieties: hypersurface index
//! bounds, Chern and Todd calculus on products of projective spaces and
//! Milnor hypersurfaces, the degree-`d` complex cobordism lattice and its
//! dual lattice of integral characteristic classes.

pub mod charclass;
pub mod chow;
pub mod cobordism;
pub mod error;
pub mod exactalg;
pub mod hrr;
pub mod index;
pub mod parse;
pub mod symfun;

pub use error::{Error, Result};
