//! Cards, card sets, subgame states and stage-game payoff matrices.

mod cards;
mod payoff;
mod rank;

pub use cards::{sign, Card, CardSet, Cards, GameState};
pub use payoff::{payoff_matrix, PayoffMatrix};
pub use rank::{binomial, rank, rank_subset, subsets_by_rank, unrank_subset};

/// Largest deck the binomial table and bitmask layout support.
pub const MAX_CARDS: usize = 16;
