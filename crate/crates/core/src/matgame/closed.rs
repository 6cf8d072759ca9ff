use crate::error::{Error, Result};
use crate::model::PayoffMatrix;
use crate::scalar::Scalar;

use super::{find_saddle, GameSolution, Method, MixedStrategy};

/// Closed-form solution of a 2x2 game without a saddle point.
///
/// For `[[a, b], [c, d]]` with `D = a - b - c + d`, the value is
/// `(ad - bc) / D`, the row mix is `((d - c)/D, (a - b)/D)` and the column
/// mix is `((d - b)/D, (a - c)/D)`.
pub fn solve_2x2<S: Scalar>(m: &PayoffMatrix<S>) -> Result<GameSolution<S>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::BadShape { rows: m.rows(), cols: m.cols() });
    }
    if let Some(s) = find_saddle(m) {
        return Err(Error::HasSaddle { row: s.row, col: s.col });
    }
    let (a, b) = (m.get(0, 0).clone(), m.get(0, 1).clone());
    let (c, d) = (m.get(1, 0).clone(), m.get(1, 1).clone());
    let delta = a.clone() - b.clone() - c.clone() + d.clone();
    if delta.approx_eq(&S::zero()) {
        // Unreachable without a saddle, but keep the division safe.
        return Err(Error::HasSaddle { row: 0, col: 0 });
    }
    let value = (a.clone() * d.clone() - b.clone() * c.clone()) / delta.clone();
    let row = MixedStrategy::new(vec![
        (d.clone() - c.clone()) / delta.clone(),
        (a.clone() - b.clone()) / delta.clone(),
    ]);
    let col = MixedStrategy::new(vec![(d - b) / delta.clone(), (a - c) / delta]);
    Ok(GameSolution { value, row: row.cleaned(), col: col.cleaned(), method: Method::Closed2x2 })
}
