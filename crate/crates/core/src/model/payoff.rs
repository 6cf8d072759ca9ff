use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::cards::{sign, Card, GameState};

/// Dense row-major payoff matrix; entries are the row player's margin.
#[derive(Clone, PartialEq)]
pub struct PayoffMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> PayoffMatrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, actual: entries.len() });
        }
        Ok(PayoffMatrix { rows, cols, entries })
    }

    pub fn from_rows<T: Into<i64> + Copy>(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            entries.extend(row.iter().map(|&v| S::from_int(v.into())));
        }
        PayoffMatrix { rows: r, cols: c, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PayoffMatrix { rows, cols, entries }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// `-M^T`: the same game seen by the column player.
    pub fn negated_transpose(&self) -> Self {
        PayoffMatrix::from_fn(self.cols, self.rows, |i, j| -self.get(j, i).clone())
    }

    /// `alpha * M + beta` entry-wise.
    pub fn affine(&self, alpha: &S, beta: &S) -> Self {
        let entries = self.entries.iter().map(|e| alpha.clone() * e.clone() + beta.clone()).collect();
        PayoffMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn min_entry(&self) -> Option<S> {
        self.entries.iter().cloned().reduce(S::min_of)
    }

    pub fn max_entry(&self) -> Option<S> {
        self.entries.iter().cloned().reduce(S::max_of)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PayoffMatrix<T> {
        PayoffMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
}

impl<S> Index<(usize, usize)> for PayoffMatrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.entries[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Debug for PayoffMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Payoff matrix of the stage game after `upcard` is revealed.
///
/// Entry `(i, j)` is `upcard * sign(v_i - y_j) + f(v - v_i, y - y_j, p - upcard)`
/// with rows and columns in ascending card order. `lookup` supplies the
/// values of the one-card-smaller subgames.
pub fn payoff_matrix<S, F>(state: &GameState, upcard: Card, mut lookup: F) -> Result<PayoffMatrix<S>>
where
    S: Scalar,
    F: FnMut(&GameState) -> Option<S>,
{
    if !state.p().contains(upcard) {
        return Err(Error::UpcardNotInDeck(upcard.value()));
    }
    let k = state.size();
    let prize = upcard.value() as i64;
    let mut entries = Vec::with_capacity(k * k);
    for vi in state.v().iter() {
        for yj in state.y().iter() {
            let next = state.after(vi, yj, upcard);
            let rest = lookup(&next).ok_or_else(|| Error::LookupMiss(next.to_string()))?;
            let won = S::from_int(prize * sign(vi.value() as i64 - yj.value() as i64));
            entries.push(won + rest);
        }
    }
    Ok(PayoffMatrix { rows: k, cols: k, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CardSet;

    fn set(values: &[u32]) -> CardSet {
        CardSet::from_values(values, 13).unwrap()
    }

    /// Values of one-card subgames: the larger card takes the deck card.
    fn one_card(s: &GameState) -> Option<f64> {
        match s.size() {
            0 => Some(0.0),
            1 => {
                let (a, b) = (s.v().max_value() as i64, s.y().max_value() as i64);
                Some((s.p().max_value() as i64 * sign(a - b)) as f64)
            }
            _ => None,
        }
    }

    #[test]
    fn queen_king_endgame_matrix() {
        let state = GameState::new(set(&[2, 4]), set(&[1, 3]), set(&[12, 13])).unwrap();
        let m = payoff_matrix(&state, Card::of(13), one_card).unwrap();
        assert_eq!(m, PayoffMatrix::from_rows(&[&[25, -1], &[1, 25]]));
    }

    #[test]
    fn one_by_one_matrices() {
        let state = GameState::new(set(&[2]), set(&[1]), set(&[5])).unwrap();
        let m = payoff_matrix(&state, Card::of(5), one_card).unwrap();
        assert_eq!(m, PayoffMatrix::from_rows(&[&[5]]));

        for a in 1..=13 {
            let state = GameState::new(set(&[a]), set(&[a]), set(&[7])).unwrap();
            let m = payoff_matrix(&state, Card::of(7), one_card).unwrap();
            assert_eq!(m, PayoffMatrix::from_rows(&[&[0]]));
        }
    }

    #[test]
    fn upcard_must_be_in_deck() {
        let state = GameState::new(set(&[2]), set(&[1]), set(&[5])).unwrap();
        let err = payoff_matrix(&state, Card::of(4), one_card).unwrap_err();
        assert!(matches!(err, Error::UpcardNotInDeck(4)));
    }

    #[test]
    fn lookup_miss_is_reported() {
        let state = GameState::new(set(&[1, 2, 3]), set(&[1, 2, 3]), set(&[1, 2, 3])).unwrap();
        let err = payoff_matrix(&state, Card::of(1), one_card).unwrap_err();
        assert!(matches!(err, Error::LookupMiss(_)));
    }
}
