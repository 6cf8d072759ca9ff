//! Two-player zero-sum matrix games.
//!
//! The row player maximizes. [`solve`] dispatches to the cheapest exact
//! method: 1x1 games, pure saddle points, the 2x2 closed form, and finally
//! a tableau simplex with Bland's rule. All routes are generic over
//! [`Scalar`], so the same code solves games in `f64` or exactly.
//!
//! Games often have several equilibria. Which one is returned depends on the
//! pivot path; results are checked by [`exploitability`], never by
//! comparing mixtures.

mod closed;
mod response;
mod saddle;
mod simplex;

use std::ops::Deref;

use crate::model::PayoffMatrix;
use crate::scalar::Scalar;

pub use closed::solve_2x2;
pub use response::{best_response_value, exploitability, Side};
pub use saddle::{find_saddle, Saddle};
pub use simplex::solve_lp;

/// Probability distribution over a player's options, ascending card order.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy<S> {
    probs: Vec<S>,
}

impl<S: Scalar> MixedStrategy<S> {
    pub fn new(probs: Vec<S>) -> Self {
        MixedStrategy { probs }
    }

    pub fn pure(len: usize, index: usize) -> Self {
        let probs = (0..len).map(|i| if i == index { S::one() } else { S::zero() }).collect();
        MixedStrategy { probs }
    }

    pub fn uniform(len: usize) -> Self {
        let p = S::one() / S::from_int(len as i64);
        MixedStrategy { probs: vec![p; len] }
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<S> {
        self.probs
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(Scalar::to_f64).collect()
    }

    /// Nonnegative entries summing to one (within tolerance for floats).
    pub fn is_distribution(&self) -> bool {
        let zero = S::zero();
        let sum = self.probs.iter().cloned().fold(S::zero(), |a, b| a + b);
        self.probs.iter().all(|p| !p.definitely_lt(&zero)) && sum.approx_eq(&S::one())
    }

    /// Clamp tiny negatives and renormalize. No-op for exact scalars.
    fn cleaned(mut self) -> Self {
        if S::EXACT {
            return self;
        }
        let zero = S::zero();
        for p in &mut self.probs {
            if *p < zero {
                debug_assert!(!p.definitely_lt(&zero), "negative probability {p}");
                *p = S::zero();
            }
        }
        let sum = self.probs.iter().cloned().fold(S::zero(), |a, b| a + b);
        if sum > zero {
            for p in &mut self.probs {
                *p = p.clone() / sum.clone();
            }
        }
        self
    }
}

impl<S> Deref for MixedStrategy<S> {
    type Target = [S];

    fn deref(&self) -> &[S] {
        &self.probs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Trivial,
    Saddle,
    Closed2x2,
    Simplex,
}

/// Value (to the row player) plus an equilibrium strategy pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution<S> {
    pub value: S,
    pub row: MixedStrategy<S>,
    pub col: MixedStrategy<S>,
    pub method: Method,
}

/// Solve any matrix game, picking the cheapest applicable method.
pub fn solve<S: Scalar>(m: &PayoffMatrix<S>) -> GameSolution<S> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        // Empty game: nothing left to play.
        return GameSolution {
            value: S::zero(),
            row: MixedStrategy::new(Vec::new()),
            col: MixedStrategy::new(Vec::new()),
            method: Method::Trivial,
        };
    }
    if rows == 1 && cols == 1 {
        return GameSolution {
            value: m.get(0, 0).clone(),
            row: MixedStrategy::pure(1, 0),
            col: MixedStrategy::pure(1, 0),
            method: Method::Trivial,
        };
    }
    if let Some(s) = find_saddle(m) {
        return GameSolution {
            value: s.value,
            row: MixedStrategy::pure(rows, s.row),
            col: MixedStrategy::pure(cols, s.col),
            method: Method::Saddle,
        };
    }
    if rows == 2 && cols == 2 {
        if let Ok(sol) = solve_2x2(m) {
            return sol;
        }
    }
    solve_lp(m).expect("non-empty matrix game is always solvable")
}
