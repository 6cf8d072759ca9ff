//! Equilibrium solver for the Game of Pure Strategy (Goofspiel).
//!
//! The crate computes the value and optimal mixed strategies of every
//! subgame `(V, Y, P)` by dynamic programming over matrix games, persists
//! the resulting value tables, and drives live matches against an
//! equilibrium bot.
//!
//! All numeric code is generic over [`Scalar`]; [`FloatTable`] and
//! [`ExactTable`] are the two concrete instantiations.

pub mod dp;
pub mod error;
pub mod matgame;
pub mod model;
pub mod play;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{Card, CardSet, GameState, PayoffMatrix};
pub use scalar::Scalar;

/// Arbitrary-precision rational used by exact mode.
pub type Rational = num_rational::BigRational;

pub type FloatMatrix = PayoffMatrix<f64>;
pub type ExactMatrix = PayoffMatrix<Rational>;
pub type FloatSolution = matgame::GameSolution<f64>;
pub type ExactSolution = matgame::GameSolution<Rational>;


pub type FloatTable = dp::ValueTable<f64>;
pub type ExactTable = dp::ValueTable<Rational>;
