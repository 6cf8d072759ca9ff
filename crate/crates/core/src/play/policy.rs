//! Deterministic bidding policies and the counterstrategy that beats them.

use crate::error::{Error, Result};
use crate::model::{Card, CardSet};

/// One resolved round from a player's own perspective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bids {
    pub upcard: Card,
    pub own: Card,
    pub opp: Card,
}

/// Everything a player can observe when bidding.
#[derive(Debug, Clone, Copy)]
pub struct PlayerView<'a> {
    pub n: usize,
    pub own_hand: CardSet,
    pub opp_hand: CardSet,
    pub upcard: Card,
    pub history: &'a [Bids],
}

/// A bid chosen as a function of the observable history and upcard.
pub trait DeterministicPolicy {
    fn bid(&self, view: &PlayerView<'_>) -> Card;
}

impl<F: Fn(&PlayerView<'_>) -> Card> DeterministicPolicy for F {
    fn bid(&self, view: &PlayerView<'_>) -> Card {
        self(view)
    }
}

/// Bid the upcard's value when holding it, else the lowest card.
pub struct AlwaysMatch;

impl DeterministicPolicy for AlwaysMatch {
    fn bid(&self, view: &PlayerView<'_>) -> Card {
        if view.own_hand.contains(view.upcard) {
            view.upcard
        } else {
            view.own_hand.iter().next().expect("non-empty hand")
        }
    }
}

pub struct AlwaysMax;

impl DeterministicPolicy for AlwaysMax {
    fn bid(&self, view: &PlayerView<'_>) -> Card {
        view.own_hand.iter().last().expect("non-empty hand")
    }
}

pub struct AlwaysMin;

impl DeterministicPolicy for AlwaysMin {
    fn bid(&self, view: &PlayerView<'_>) -> Card {
        view.own_hand.iter().next().expect("non-empty hand")
    }
}

/// Predicts the opponent by running its policy, then plays one higher, or
/// the ace when the opponent is about to play the top card.
pub struct Counter<P> {
    opponent: P,
}

pub fn counter_deterministic<P: DeterministicPolicy>(opponent: P) -> Counter<P> {
    Counter { opponent }
}

impl<P: DeterministicPolicy> DeterministicPolicy for Counter<P> {
    fn bid(&self, view: &PlayerView<'_>) -> Card {
        let mirrored: Vec<Bids> =
            view.history.iter().map(|b| Bids { upcard: b.upcard, own: b.opp, opp: b.own }).collect();
        let theirs = PlayerView {
            n: view.n,
            own_hand: view.opp_hand,
            opp_hand: view.own_hand,
            upcard: view.upcard,
            history: &mirrored,
        };
        let predicted = self.opponent.bid(&theirs);
        if predicted.value() as usize == view.n {
            Card::of(1)
        } else {
            Card::of(predicted.value() + 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    /// Rounds from player one's perspective.
    pub rounds: Vec<Bids>,
}

impl Transcript {
    /// Player one's zero-sum margin.
    pub fn margin(&self) -> i64 {
        self.rounds
            .iter()
            .map(|b| b.upcard.value() as i64 * (b.own.cmp(&b.opp) as i64))
            .sum()
    }

    pub fn rounds_won(&self) -> usize {
        self.rounds.iter().filter(|b| b.own > b.opp).count()
    }

    pub fn rounds_lost(&self) -> usize {
        self.rounds.iter().filter(|b| b.own < b.opp).count()
    }
}

/// Play a full game between two deterministic policies.
pub fn self_play(
    deck_order: &[Card],
    one: &dyn DeterministicPolicy,
    two: &dyn DeterministicPolicy,
) -> Result<Transcript> {
    let n = deck_order.len();
    let (mut hand1, mut hand2) = (CardSet::full(n), CardSet::full(n));
    let mut hist1: Vec<Bids> = Vec::with_capacity(n);
    let mut hist2: Vec<Bids> = Vec::with_capacity(n);
    for &upcard in deck_order {
        let b1 = one.bid(&PlayerView { n, own_hand: hand1, opp_hand: hand2, upcard, history: &hist1 });
        let b2 = two.bid(&PlayerView { n, own_hand: hand2, opp_hand: hand1, upcard, history: &hist2 });
        if !hand1.contains(b1) {
            return Err(Error::CardNotInHand(b1.value()));
        }
        if !hand2.contains(b2) {
            return Err(Error::CardNotInHand(b2.value()));
        }
        hand1.remove(b1);
        hand2.remove(b2);
        hist1.push(Bids { upcard, own: b1, opp: b2 });
        hist2.push(Bids { upcard, own: b2, opp: b1 });
    }
    Ok(Transcript { rounds: hist1 })
}
