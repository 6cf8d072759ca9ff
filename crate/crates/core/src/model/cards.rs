use std::fmt;

use crate::error::{Error, Result};

use super::MAX_CARDS;

/// A card value, ace = 1 up to king = 13 in the standard game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card(u8);

impl Card {
    pub fn new(value: u32, n: usize) -> Result<Card> {
        if value == 0 || value as usize > n || n > MAX_CARDS {
            return Err(Error::CardOutOfRange { card: value, n });
        }
        Ok(Card(value as u8))
    }

    /// Construct without a deck-size check; `value` must be in 1..=16.
    pub const fn of(value: u8) -> Card {
        assert!(value >= 1 && value as usize <= MAX_CARDS);
        Card(value)
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bitmask over card values: bit `i - 1` is set iff card `i` is present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CardSet(u32);

impl CardSet {
    pub const EMPTY: CardSet = CardSet(0);

    #[inline]
    pub const fn from_bits(bits: u32) -> CardSet {
        CardSet(bits)
    }

    /// All cards `1..=n`.
    pub fn full(n: usize) -> CardSet {
        debug_assert!(n <= MAX_CARDS);
        CardSet(((1u64 << n) - 1) as u32)
    }

    /// Build from card values, checking each against the deck size.
    pub fn from_values(values: &[u32], n: usize) -> Result<CardSet> {
        let mut set = CardSet::EMPTY;
        for &v in values {
            set.insert(Card::new(v, n)?);
        }
        Ok(set)
    }

    /// Parse a comma-separated list such as `"2,4,13"`; empty text is the
    /// empty set. Duplicates and values outside `1..=n` are rejected.
    pub fn parse(text: &str, n: usize) -> Result<CardSet> {
        let mut set = CardSet::EMPTY;
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let value: u32 = part.parse().map_err(|_| Error::BadCardList(text.to_string()))?;
            let card = Card::new(value, n)?;
            if set.contains(card) {
                return Err(Error::BadCardList(text.to_string()));
            }
            set.insert(card);
        }
        Ok(set)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, card: Card) -> bool {
        self.0 & (1 << (card.0 - 1)) != 0
    }

    #[inline]
    pub fn insert(&mut self, card: Card) {
        self.0 |= 1 << (card.0 - 1);
    }

    #[inline]
    pub fn remove(&mut self, card: Card) {
        self.0 &= !(1 << (card.0 - 1));
    }

    #[inline]
    pub fn without(self, card: Card) -> CardSet {
        CardSet(self.0 & !(1 << (card.0 - 1)))
    }

    /// Highest card value present, or 0 when empty.
    pub fn max_value(self) -> u8 {
        (32 - self.0.leading_zeros()) as u8
    }

    pub fn sum(self) -> u32 {
        self.iter().map(|c| c.0 as u32).sum()
    }

    /// Cards in ascending order.
    pub fn iter(self) -> Cards {
        Cards(self.0)
    }

    pub fn to_vec(self) -> Vec<Card> {
        self.iter().collect()
    }

    /// Position of `card` in ascending order, if present.
    pub fn index_of(self, card: Card) -> Option<usize> {
        if !self.contains(card) {
            return None;
        }
        let below = self.0 & ((1u32 << (card.0 - 1)) - 1);
        Some(below.count_ones() as usize)
    }
}

impl fmt::Debug for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

impl fmt::Display for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromIterator<Card> for CardSet {
    fn from_iter<I: IntoIterator<Item = Card>>(iter: I) -> Self {
        let mut set = CardSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

pub struct Cards(u32);

impl Iterator for Cards {
    type Item = Card;

    #[inline]
    fn next(&mut self) -> Option<Card> {
        if self.0 == 0 {
            return None;
        }
        let low = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Card(low as u8 + 1))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Cards {}

/// A subgame: player one's hand, player two's hand and the face-down deck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameState {
    v: CardSet,
    y: CardSet,
    p: CardSet,
}

impl GameState {
    pub fn new(v: CardSet, y: CardSet, p: CardSet) -> Result<GameState> {
        if v.len() != y.len() || v.len() != p.len() {
            return Err(Error::UnequalSizes { v: v.len(), y: y.len(), p: p.len() });
        }
        Ok(GameState { v, y, p })
    }

    /// The opening position `(1..=n, 1..=n, 1..=n)`.
    pub fn start(n: usize) -> GameState {
        let full = CardSet::full(n);
        GameState { v: full, y: full, p: full }
    }

    #[inline]
    pub fn v(&self) -> CardSet {
        self.v
    }

    #[inline]
    pub fn y(&self) -> CardSet {
        self.y
    }

    #[inline]
    pub fn p(&self) -> CardSet {
        self.p
    }

    /// Number of cards in each hand (and in the deck).
    #[inline]
    pub fn size(&self) -> usize {
        self.v.len()
    }

    /// Same subgame seen from player two's side.
    pub fn swapped(&self) -> GameState {
        GameState { v: self.y, y: self.v, p: self.p }
    }

    /// Subgame after one round where the given cards were played.
    pub fn after(&self, v_card: Card, y_card: Card, upcard: Card) -> GameState {
        GameState {
            v: self.v.without(v_card),
            y: self.y.without(y_card),
            p: self.p.without(upcard),
        }
    }

    /// Highest card value mentioned anywhere in the state.
    pub fn max_value(&self) -> u8 {
        self.v.max_value().max(self.y.max_value()).max(self.p.max_value())
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{{}}}, {{{}}}, {{{}}})", self.v, self.y, self.p)
    }
}

/// Sign of a card difference: 1, 0 or -1.
#[inline]
pub fn sign(x: i64) -> i64 {
    match x {
        x if x > 0 => 1,
        0 => 0,
        _ => -1,
    }
}
