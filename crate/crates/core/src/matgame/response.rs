use crate::error::{Error, Result};
use crate::model::PayoffMatrix;
use crate::scalar::Scalar;

use super::GameSolution;

/// Which player is best-responding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Row,
    Col,
}

/// Best pure response to `opponent`, ties broken toward the smallest index.
///
/// For `Side::Row`, `opponent` is a column mixture and the result is
/// `max_i sum_j M[i][j] * opp[j]`; for `Side::Col` it is a row mixture and
/// the result is `min_j sum_i M[i][j] * opp[i]`.
pub fn best_response_value<S: Scalar>(
    m: &PayoffMatrix<S>,
    opponent: &[S],
    side: Side,
) -> Result<(S, usize)> {
    let payoffs = match side {
        Side::Row => row_payoffs(m, opponent)?,
        Side::Col => col_payoffs(m, opponent)?,
    };
    let mut best = 0;
    for (i, p) in payoffs.iter().enumerate().skip(1) {
        let better = match side {
            Side::Row => p.definitely_gt(&payoffs[best]),
            Side::Col => p.definitely_lt(&payoffs[best]),
        };
        if better {
            best = i;
        }
    }
    let value = payoffs.into_iter().nth(best).ok_or(Error::BadShape { rows: m.rows(), cols: m.cols() })?;
    Ok((value, best))
}

/// Best-response gap `max_i (M y)_i - min_j (x^T M)_j` of a strategy pair.
///
/// Zero exactly at an equilibrium.
pub fn exploitability<S: Scalar>(m: &PayoffMatrix<S>, sol: &GameSolution<S>) -> Result<S> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(S::zero());
    }
    let best_row = row_payoffs(m, sol.col.probs())?.into_iter().reduce(S::max_of).unwrap();
    let best_col = col_payoffs(m, sol.row.probs())?.into_iter().reduce(S::min_of).unwrap();
    let gap = best_row - best_col;
    if !S::EXACT && gap < S::zero() {
        // rounding only
        return Ok(S::zero());
    }
    Ok(gap)
}

/// `M * y`: each row's expected payoff against a column mixture.
pub(crate) fn row_payoffs<S: Scalar>(m: &PayoffMatrix<S>, col: &[S]) -> Result<Vec<S>> {
    if col.len() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.cols(), actual: col.len() });
    }
    Ok((0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(col)
                .fold(S::zero(), |acc, (a, q)| acc + a.clone() * q.clone())
        })
        .collect())
}

/// `x^T * M`: each column's expected payoff against a row mixture.
pub(crate) fn col_payoffs<S: Scalar>(m: &PayoffMatrix<S>, row: &[S]) -> Result<Vec<S>> {
    if row.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), actual: row.len() });
    }
    let mut out = vec![S::zero(); m.cols()];
    for (i, p) in row.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(m.row(i)) {
            *o = o.clone() + a.clone() * p.clone();
        }
    }
    Ok(out)
}
