use crate::model::PayoffMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Saddle<S> {
    pub row: usize,
    pub col: usize,
    pub value: S,
}

/// First pure equilibrium in row-major order, if any.
///
/// With the row player maximizing, a pure equilibrium is an entry that is
/// the minimum of its row and the maximum of its column.
pub fn find_saddle<S: Scalar>(m: &PayoffMatrix<S>) -> Option<Saddle<S>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return None;
    }
    let row_min: Vec<S> = (0..rows)
        .map(|i| m.row(i).iter().cloned().reduce(S::min_of).unwrap())
        .collect();
    let col_max: Vec<S> = (0..cols)
        .map(|j| (0..rows).map(|i| m.get(i, j).clone()).reduce(S::max_of).unwrap())
        .collect();
    for i in 0..rows {
        for j in 0..cols {
            let e = m.get(i, j);
            if e.approx_eq(&row_min[i]) && e.approx_eq(&col_max[j]) {
                return Some(Saddle { row: i, col: j, value: e.clone() });
            }
        }
    }
    None
}
