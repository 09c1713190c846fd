//! Combinatorics of Sturm global attractors under Neumann and periodic
//! boundary conditions: permutations, full lap signatures, connection graphs.

pub mod bijection;
pub mod census;
pub mod conngraph;
pub mod error;
pub mod lapsig;
pub mod perm;
pub mod pitchfork;
pub mod render;

pub use error::{Error, Result};
pub use lapsig::FullLapSignature;
pub use perm::Permutation;
