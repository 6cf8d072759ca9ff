//! Tableau simplex for matrix games.
//!
//! The payoff matrix is shifted so every entry is at least one. The column
//! player's problem then becomes `max sum(w)` subject to `K w <= 1, w >= 0`,
//! whose slack basis is feasible at the origin. At the optimum `sum(w) = 1/v`
//! for the shifted value `v`; the column mix is `w * v` and the row mix is
//! read from the reduced costs of the slack columns (the dual solution).
//! Pivoting follows Bland's rule, which cannot cycle.

use crate::error::{Error, Result};
use crate::model::PayoffMatrix;
use crate::scalar::Scalar;

use super::{GameSolution, Method, MixedStrategy};

struct Tableau<S> {
    // constraint rows followed by the objective row
    cells: Vec<S>,
    width: usize,
    rows: usize,
    basis: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    #[inline]
    fn at(&self, r: usize, c: usize) -> &S {
        &self.cells[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> &S {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = S::one() / self.cells[pr * w + pc].clone();
        for c in 0..w {
            let cell = &mut self.cells[pr * w + c];
            if !cell.is_zero() {
                *cell = cell.clone() * inv.clone();
            }
        }
        // exact 1 avoids drift in the pivot column
        self.cells[pr * w + pc] = S::one();
        let (before, rest) = self.cells.split_at_mut(pr * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (cell, p) in row.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *cell = cell.clone() - factor.clone() * p.clone();
                }
            }
            row[pc] = S::zero();
        }
        self.basis[pr] = pc;
    }
}

/// Solve a matrix game by linear programming.
pub fn solve_lp<S: Scalar>(m: &PayoffMatrix<S>) -> Result<GameSolution<S>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return Err(Error::BadShape { rows, cols });
    }
    let min = m.min_entry().expect("non-empty");
    let shift = if min >= S::one() { S::zero() } else { S::one() - min };

    let vars = cols + rows;
    let width = vars + 1;
    let mut cells = vec![S::zero(); (rows + 1) * width];
    for i in 0..rows {
        let line = &mut cells[i * width..(i + 1) * width];
        for j in 0..cols {
            line[j] = m.get(i, j).clone() + shift.clone();
        }
        line[cols + i] = S::one();
        line[vars] = S::one();
    }
    for cell in &mut cells[rows * width..rows * width + cols] {
        *cell = -S::one();
    }
    let mut t = Tableau { cells, width, rows, basis: (cols..cols + rows).collect() };

    let zero = S::zero();
    let obj = t.rows;
    // Bland's rule terminates in exact arithmetic; the cap only guards
    // against tolerance artefacts in float mode.
    let max_pivots = 50 * (rows + cols) + 100;
    for _ in 0..max_pivots {
        let Some(enter) = (0..vars).find(|&c| t.at(obj, c).definitely_lt(&zero)) else {
            break;
        };
        let mut leave: Option<(usize, S)> = None;
        for r in 0..rows {
            let a = t.at(r, enter);
            if !a.definitely_gt(&zero) {
                continue;
            }
            let ratio = t.rhs(r).clone() / a.clone();
            leave = match leave {
                None => Some((r, ratio)),
                Some((br, best)) => {
                    if ratio.definitely_lt(&best)
                        || (ratio.approx_eq(&best) && t.basis[r] < t.basis[br])
                    {
                        Some((r, ratio))
                    } else {
                        Some((br, best))
                    }
                }
            };
        }
        // Shifted entries are positive, so every entering column has a
        // positive coefficient somewhere and the problem stays bounded.
        let Some((pr, _)) = leave else {
            debug_assert!(false, "unbounded matrix-game LP");
            break;
        };
        t.pivot(pr, enter);
    }

    let total = t.rhs(obj).clone();
    let mut w = vec![S::zero(); cols];
    for r in 0..rows {
        let b = t.basis[r];
        if b < cols {
            w[b] = t.rhs(r).clone();
        }
    }
    let col: Vec<S> = w.into_iter().map(|wj| wj / total.clone()).collect();
    let row: Vec<S> = (0..rows).map(|i| t.at(obj, cols + i).clone() / total.clone()).collect();
    let value = S::one() / total - shift;

    Ok(GameSolution {
        value,
        row: MixedStrategy::new(row).cleaned(),
        col: MixedStrategy::new(col).cleaned(),
        method: Method::Simplex,
    })
}
