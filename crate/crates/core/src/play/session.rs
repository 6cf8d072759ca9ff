use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::dp::strategy_for;
use crate::error::{Error, Result};
use crate::model::{Card, CardSet, GameState};
use crate::FloatTable;

use super::rng::Rng;

/// How the bot picks its bid.
#[derive(Clone)]
pub enum BotPolicy {
    /// Sample the equilibrium mixture recomputed from a value table.
    Equilibrium(Arc<FloatTable>),
    /// Fixed bids, one per round.
    Scripted(Vec<Card>),
}

impl fmt::Debug for BotPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BotPolicy::Equilibrium(t) => write!(f, "Equilibrium(n={})", t.n()),
            BotPolicy::Scripted(bids) => f.debug_tuple("Scripted").field(bids).finish(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointsTo {
    Human,
    Bot,
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub upcard: Card,
    pub human_bid: Card,
    pub bot_bid: Card,
    pub points_to: PointsTo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Human,
    Bot,
    Draw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub winner: Winner,
    /// Split-scoring totals in half points.
    pub human_half_points: u32,
    pub bot_half_points: u32,
    /// Human's zero-sum margin: upcards won minus upcards lost, ties count 0.
    pub margin: i64,
}

impl MatchResult {
    pub fn human_points(&self) -> f64 {
        self.human_half_points as f64 / 2.0
    }

    pub fn bot_points(&self) -> f64 {
        self.bot_half_points as f64 / 2.0
    }
}

/// Score (in half points) that guarantees a win: more than half the deck total.
pub fn winning_threshold_half_points(n: usize) -> u32 {
    let total = (n * (n + 1) / 2) as u32;
    total + 1
}

static SESSION_COUNTER: AtomicU64 = AtomicU64::new(1);

/// One live match: the human holds player one's hand, the bot player two's.
///
/// The bot's bid for the visible upcard is drawn as soon as the upcard is
/// revealed, before the human bids.
#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    n: usize,
    human_hand: CardSet,
    bot_hand: CardSet,
    deck_order: Vec<Card>,
    round: usize,
    human_half: u32,
    bot_half: u32,
    history: Vec<RoundRecord>,
    policy: BotPolicy,
    rng: Rng,
    pending_bot_bid: Option<Card>,
}

/// Fisher-Yates shuffle of `1..=n`, from the top index down.
pub fn shuffled_deck(n: usize, rng: &mut Rng) -> Vec<Card> {
    let mut deck: Vec<Card> = (1..=n as u8).map(Card::of).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        deck.swap(i, j);
    }
    deck
}

impl Session {
    pub fn new(n: usize, seed: u64, policy: BotPolicy) -> Result<Session> {
        if n == 0 || n > 13 {
            return Err(Error::BadDeckSize(n));
        }
        let mut rng = Rng::new(seed);
        let deck = shuffled_deck(n, &mut rng);
        Session::start(n, deck, rng, policy)
    }

    /// A session with a chosen deck order; `seed` only drives the bot.
    pub fn with_deck(deck_order: Vec<Card>, seed: u64, policy: BotPolicy) -> Result<Session> {
        let n = deck_order.len();
        if n == 0 || n > 13 {
            return Err(Error::BadDeckSize(n));
        }
        let set: CardSet = deck_order.iter().copied().collect();
        if set != CardSet::full(n) {
            return Err(Error::InvalidConfig(format!("deck order must be a permutation of 1..={n}")));
        }
        Session::start(n, deck_order, Rng::new(seed), policy)
    }

    fn start(n: usize, deck_order: Vec<Card>, rng: Rng, policy: BotPolicy) -> Result<Session> {
        match &policy {
            BotPolicy::Equilibrium(table) => {
                if table.n() != n || !table.is_complete() {
                    return Err(Error::MissingTable(n));
                }
            }
            BotPolicy::Scripted(bids) => {
                let mut hand = CardSet::full(n);
                for round in 1..=n {
                    match bids.get(round - 1) {
                        Some(&c) if hand.contains(c) => hand.remove(c),
                        _ => return Err(Error::ScriptExhausted(round)),
                    }
                }
            }
        }
        let salt = SESSION_COUNTER.fetch_add(1, Ordering::Relaxed);
        let id = format!("{:016x}", Rng::new(rng.state() ^ salt.rotate_left(32)).next_u64());
        let mut session = Session {
            id,
            n,
            human_hand: CardSet::full(n),
            bot_hand: CardSet::full(n),
            deck_order,
            round: 1,
            human_half: 0,
            bot_half: 0,
            history: Vec::new(),
            policy,
            rng,
            pending_bot_bid: None,
        };
        session.commit_bot_bid()?;
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: String) {
        self.id = id;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Current round, 1-based; `n + 1` once finished.
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn is_finished(&self) -> bool {
        self.round > self.n
    }

    pub fn upcard(&self) -> Option<Card> {
        self.deck_order.get(self.round - 1).copied()
    }

    pub fn human_hand(&self) -> CardSet {
        self.human_hand
    }

    pub fn bot_hand(&self) -> CardSet {
        self.bot_hand
    }

    /// Cards not yet resolved, including the visible upcard.
    pub fn remaining_deck(&self) -> CardSet {
        self.deck_order[self.round.min(self.n + 1) - 1..].iter().copied().collect()
    }

    /// Current subgame from the human's side: `(human, bot, deck)`.
    pub fn state(&self) -> GameState {
        GameState::new(self.human_hand, self.bot_hand, self.remaining_deck()).expect("hands stay balanced")
    }

    pub fn human_half_points(&self) -> u32 {
        self.human_half
    }

    pub fn bot_half_points(&self) -> u32 {
        self.bot_half
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn policy(&self) -> &BotPolicy {
        &self.policy
    }

    fn commit_bot_bid(&mut self) -> Result<()> {
        let Some(upcard) = self.upcard() else {
            self.pending_bot_bid = None;
            return Ok(());
        };
        let bid = match &self.policy {
            BotPolicy::Scripted(bids) => match bids.get(self.round - 1) {
                Some(&c) if self.bot_hand.contains(c) => c,
                _ => return Err(Error::ScriptExhausted(self.round)),
            },
            BotPolicy::Equilibrium(table) => {
                let bot_view = GameState::new(self.bot_hand, self.human_hand, self.remaining_deck())?;
                let sol = strategy_for(table, &bot_view, upcard)?;
                sample_bid(sol.row.probs(), self.bot_hand, &mut self.rng)?
            }
        };
        self.pending_bot_bid = Some(bid);
        Ok(())
    }

    /// Resolve the current round with the human's card.
    pub fn submit_bid(&mut self, human_card: Card) -> Result<RoundRecord> {
        if self.is_finished() {
            return Err(Error::SessionFinished);
        }
        if !self.human_hand.contains(human_card) {
            return Err(Error::CardNotInHand(human_card.value()));
        }
        let upcard = self.upcard().expect("active round has an upcard");
        let bot_card = self.pending_bot_bid.expect("bot bid committed at reveal");
        let prize = 2 * upcard.value() as u32;
        let points_to = match human_card.cmp(&bot_card) {
            std::cmp::Ordering::Greater => {
                self.human_half += prize;
                PointsTo::Human
            }
            std::cmp::Ordering::Less => {
                self.bot_half += prize;
                PointsTo::Bot
            }
            std::cmp::Ordering::Equal => {
                self.human_half += prize / 2;
                self.bot_half += prize / 2;
                PointsTo::Split
            }
        };
        self.human_hand.remove(human_card);
        self.bot_hand.remove(bot_card);
        let record = RoundRecord { round: self.round, upcard, human_bid: human_card, bot_bid: bot_card, points_to };
        self.history.push(record.clone());
        self.round += 1;
        self.commit_bot_bid()?;
        Ok(record)
    }

    pub fn final_result(&self) -> Result<MatchResult> {
        if !self.is_finished() {
            return Err(Error::SessionNotFinished);
        }
        let margin = self
            .history
            .iter()
            .map(|r| match r.points_to {
                PointsTo::Human => r.upcard.value() as i64,
                PointsTo::Bot => -(r.upcard.value() as i64),
                PointsTo::Split => 0,
            })
            .sum();
        let winner = match self.human_half.cmp(&self.bot_half) {
            std::cmp::Ordering::Greater => Winner::Human,
            std::cmp::Ordering::Less => Winner::Bot,
            std::cmp::Ordering::Equal => Winner::Draw,
        };
        Ok(MatchResult { winner, human_half_points: self.human_half, bot_half_points: self.bot_half, margin })
    }
}

/// Index chosen by inverse-CDF sampling at `u` in `[0, 1)`.
///
/// Picks the first entry whose cumulative probability exceeds `u`; if
/// rounding leaves the total at or below `u`, the last positive entry wins.
pub fn sample_index(probs: &[f64], u: f64) -> Option<usize> {
    let mut cumulative = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cumulative += p;
        if cumulative > u {
            return Some(i);
        }
    }
    probs.iter().rposition(|&p| p > 0.0)
}

/// Draw a card from `hand` (ascending order) according to `strategy`.
pub fn sample_bid<S: crate::Scalar>(strategy: &[S], hand: CardSet, rng: &mut Rng) -> Result<Card> {
    if strategy.len() != hand.len() {
        return Err(Error::DimensionMismatch { expected: hand.len(), actual: strategy.len() });
    }
    let probs: Vec<f64> = strategy.iter().map(|p| p.to_f64()).collect();
    let u = rng.next_unit();
    let i = sample_index(&probs, u).ok_or(Error::DimensionMismatch { expected: hand.len(), actual: 0 })?;
    Ok(hand.iter().nth(i).expect("index within hand"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cards(values: &[u8]) -> Vec<Card> {
        values.iter().map(|&v| Card::of(v)).collect()
    }

    #[test]
    fn initial_state() {
        let s = Session::new(5, 42, BotPolicy::Scripted(cards(&[1, 2, 3, 4, 5]))).unwrap();
        assert_eq!(s.human_hand(), CardSet::full(5));
        assert_eq!(s.bot_hand(), CardSet::full(5));
        assert_eq!((s.human_half_points(), s.bot_half_points()), (0, 0));
        assert_eq!(s.round(), 1);
        assert!(s.upcard().is_some());
        assert_eq!(s.remaining_deck(), CardSet::full(5));
    }

    #[test]
    fn shuffle_is_deterministic_permutation() {
        let a = Session::new(13, 9, BotPolicy::Scripted(vec![])).err();
        assert!(matches!(a, Some(Error::ScriptExhausted(1))));
        let mut r1 = Rng::new(77);
        let mut r2 = Rng::new(77);
        let d1 = shuffled_deck(13, &mut r1);
        assert_eq!(d1, shuffled_deck(13, &mut r2));
        assert_eq!(d1.iter().copied().collect::<CardSet>(), CardSet::full(13));
        assert_ne!(d1, shuffled_deck(13, &mut Rng::new(78)));
    }

    #[test]
    fn shuffle_reference() {
        // hand-run of the swap sequence for n = 3, seed 1234567:
        // i = 2: j = 6457827717110365317 % 3 = 0 -> [3, 2, 1]
        // i = 1: j = 3203168211198807973 % 2 = 1 -> [3, 2, 1]
        let mut r = Rng::new(1234567);
        assert_eq!(shuffled_deck(3, &mut r), cards(&[3, 2, 1]));
    }

    #[test]
    fn scoring_rules() {
        let mut s = Session::with_deck(cards(&[13, 5, 1, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12]), 0, BotPolicy::Scripted(cards(&[1, 3, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13]))).unwrap();
        let r = s.submit_bid(Card::of(4)).unwrap();
        assert_eq!(r.points_to, PointsTo::Human);
        assert_eq!(s.human_half_points(), 26);
        let r = s.submit_bid(Card::of(3)).unwrap();
        assert_eq!(r.points_to, PointsTo::Split);
        assert_eq!((s.human_half_points(), s.bot_half_points()), (31, 5));
        assert!(matches!(s.submit_bid(Card::of(4)), Err(Error::CardNotInHand(4))));
        for c in [1, 2, 5, 6, 7, 8, 9, 10, 11, 12, 13] {
            s.submit_bid(Card::of(c)).unwrap();
        }
        assert!(s.is_finished());
        assert_eq!(s.human_half_points() + s.bot_half_points(), 2 * 91);
        assert!(matches!(s.submit_bid(Card::of(1)), Err(Error::SessionFinished)));
        let res = s.final_result().unwrap();
        assert_eq!(res.human_points() + res.bot_points(), 91.0);
        assert_eq!(res.margin, (res.human_half_points as i64 - res.bot_half_points as i64) / 2);
    }

    #[test]
    fn final_result_needs_finished_session() {
        let s = Session::new(3, 1, BotPolicy::Scripted(cards(&[1, 2, 3]))).unwrap();
        assert!(matches!(s.final_result(), Err(Error::SessionNotFinished)));
    }

    #[test]
    fn threshold() {
        assert_eq!(winning_threshold_half_points(13), 92);
    }

    #[test]
    fn inverse_cdf() {
        assert_eq!(sample_index(&[1.0], 0.999), Some(0));
        assert_eq!(sample_index(&[0.5, 0.5], 0.25), Some(0));
        assert_eq!(sample_index(&[0.48, 0.52], 0.50), Some(1));
        assert_eq!(sample_index(&[0.48, 0.52], 0.479), Some(0));
        assert_eq!(sample_index(&[0.3, 0.3, 0.0], 0.9), Some(1));

        let mut rng = Rng::new(3);
        let hand = CardSet::from_bits(1 << 6);
        assert_eq!(sample_bid(&[1.0], hand, &mut rng).unwrap(), Card::of(7));
        assert!(sample_bid(&[0.5, 0.5], hand, &mut rng).is_err());
    }

    #[test]
    fn bad_sizes() {
        assert!(matches!(Session::new(0, 1, BotPolicy::Scripted(vec![])), Err(Error::BadDeckSize(0))));
        assert!(matches!(Session::new(14, 1, BotPolicy::Scripted(vec![])), Err(Error::BadDeckSize(14))));
    }
}
