//! Live matches against the equilibrium bot, plus deterministic policies.

mod policy;
mod rng;
mod session;

pub use policy::{
    counter_deterministic, self_play, AlwaysMatch, AlwaysMax, AlwaysMin, Bids, Counter, DeterministicPolicy,
    PlayerView, Transcript,
};
pub use rng::Rng;
pub use session::{
    sample_bid, sample_index, shuffled_deck, winning_threshold_half_points, BotPolicy, MatchResult, PointsTo,
    RoundRecord, Session, Winner,
};
