//! JSON shapes exchanged with the browser client.

use gops::play::{MatchResult, PointsTo, RoundRecord, Session, Winner};
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
pub struct CreateSession {
    pub n: usize,
    pub seed: Option<u64>,
    #[serde(default)]
    pub hints: bool,
}

#[derive(Debug, Deserialize)]
pub struct BidRequest {
    pub card: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub you: f64,
    pub bot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiRound {
    pub round: usize,
    pub upcard: u8,
    pub your_bid: u8,
    pub bot_bid: u8,
    /// `"you"`, `"bot"` or `"split"`.
    pub points_to: String,
}

impl From<&RoundRecord> for ApiRound {
    fn from(r: &RoundRecord) -> Self {
        let points_to = match r.points_to {
            PointsTo::Human => "you",
            PointsTo::Bot => "bot",
            PointsTo::Split => "split",
        };
        ApiRound {
            round: r.round,
            upcard: r.upcard.value(),
            your_bid: r.human_bid.value(),
            bot_bid: r.bot_bid.value(),
            points_to: points_to.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiResult {
    /// `"you"`, `"bot"` or `"draw"`.
    pub winner: String,
    pub scores: Scores,
    /// Your zero-sum margin: upcards won minus upcards lost.
    pub margin: i64,
}

impl From<&MatchResult> for ApiResult {
    fn from(r: &MatchResult) -> Self {
        let winner = match r.winner {
            Winner::Human => "you",
            Winner::Bot => "bot",
            Winner::Draw => "draw",
        };
        ApiResult {
            winner: winner.into(),
            scores: Scores { you: r.human_points(), bot: r.bot_points() },
            margin: r.margin,
        }
    }
}

/// Public view of a session. Remaining hands are common knowledge in this
/// game; the deck order and the bot's committed bid are not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiSession {
    pub id: String,
    pub n: usize,
    pub round: usize,
    pub upcard: Option<u8>,
    pub your_hand: Vec<u8>,
    pub bot_hand: Vec<u8>,
    pub scores: Scores,
    pub history: Vec<ApiRound>,
    pub finished: bool,
    pub hints: bool,
    pub result: Option<ApiResult>,
}

impl ApiSession {
    pub fn project(session: &Session, hints: bool) -> Self {
        let values = |s: gops::CardSet| s.iter().map(|c| c.value()).collect();
        ApiSession {
            id: session.id().to_string(),
            n: session.n(),
            round: session.round(),
            upcard: session.upcard().map(|c| c.value()),
            your_hand: values(session.human_hand()),
            bot_hand: values(session.bot_hand()),
            scores: Scores {
                you: session.human_half_points() as f64 / 2.0,
                bot: session.bot_half_points() as f64 / 2.0,
            },
            history: session.history().iter().map(ApiRound::from).collect(),
            finished: session.is_finished(),
            hints,
            result: session.final_result().ok().as_ref().map(ApiResult::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidResponse {
    pub round_record: ApiRound,
    pub session: ApiSession,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardProb {
    pub card: u8,
    pub p: f64,
}

/// A mixture over your hand plus the stage value, used by advice and strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    pub probs: Vec<CardProb>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueResponse {
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use gops::play::BotPolicy;
    use gops::Card;

    #[test]
    fn split_round_projects_half_points() {
        let bids = vec![Card::of(2), Card::of(1)];
        let mut s = Session::with_deck(vec![Card::of(2), Card::of(1)], 0, BotPolicy::Scripted(bids)).unwrap();
        s.submit_bid(Card::of(2)).unwrap();
        let view = ApiSession::project(&s, false);
        assert_eq!(view.scores, Scores { you: 1.0, bot: 1.0 });
        assert_eq!(view.history[0].points_to, "split");
        assert_eq!(view.upcard, Some(1));
        assert!(view.result.is_none());
        s.submit_bid(Card::of(1)).unwrap();
        let done = ApiSession::project(&s, false);
        assert_eq!(done.result.unwrap().winner, "draw");
        assert_eq!(done.upcard, None);
    }
}
