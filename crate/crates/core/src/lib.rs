//! Snake graphs, string modules, their matching and submodule lattices, weak
//! Bruhat intervals, and the crossing/grafting calculus.

pub mod bruhat;
pub mod calculus;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod matchings;
pub mod modules;
pub mod snake;
pub mod strings;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::{Cover, CoverLattice, Poset};
pub use matchings::PerfectMatching;
pub use modules::{StringModule, Submodule};
pub use snake::SnakeGraph;
pub use strings::{ArrowWord, Letter};
