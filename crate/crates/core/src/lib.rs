//! Minimum-hazing restart equilibria for infinitely repeated symmetric games.
//!
//! A symmetric game is reduced to a hazing instance (see
//! [`game::SymmetricGame::to_hazing_instance`]), which the [`solvers`] turn
//! into a cheapest stable punishment sequence. Stability can be verified at a
//! fixed discount factor or in the patient limit.

pub mod bench;
pub mod cli;
pub mod error;
pub mod game;
pub mod io;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result};
pub use game::{HazingAction, HazingInstance, HazingSequence, SymmetricGame};
pub use solvers::{solve, Algo, Epsilon, SolveResult, SolveStatus};
