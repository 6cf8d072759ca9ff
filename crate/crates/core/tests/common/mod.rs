//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the crate's solvers: matrix games are solved by
//! support enumeration and subgame values by plain recursion.

#![allow(dead_code)]

use gops::model::{sign, CardSet, GameState, PayoffMatrix};
use gops::Scalar;

/// Solve `a x = b` by Gaussian elimination; `None` when singular.
fn solve_linear<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        // partial pivoting on magnitude
        let mut best = None;
        for r in col..n {
            if a[r][col].abs() > S::tolerance() && best.is_none_or(|p: usize| a[r][col].abs() > a[p][col].abs()) {
                best = Some(r);
            }
        }
        let p = best?;
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let sub = f.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
            b[r] = b[r].clone() - f * b[col].clone();
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Equilibrium by support enumeration over equal-size supports.
///
/// Every matrix game has an extreme equilibrium on a square kernel whose
/// bordered system is nonsingular, so this always finds one.
pub fn support_enumeration<S: Scalar>(m: &PayoffMatrix<S>) -> (S, Vec<S>, Vec<S>) {
    let (rows, cols) = (m.rows(), m.cols());
    let zero = S::zero();
    for k in 1..=rows.min(cols) {
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                // row mix x on rs: sum_i x_i m[i][j] - v = 0 for j in cs, sum x = 1
                let mut a = Vec::new();
                let mut b = Vec::new();
                for &j in &cs {
                    let mut line: Vec<S> = rs.iter().map(|&i| m[(i, j)].clone()).collect();
                    line.push(-S::one());
                    a.push(line);
                    b.push(S::zero());
                }
                let mut line = vec![S::one(); k];
                line.push(S::zero());
                a.push(line);
                b.push(S::one());
                let Some(xs) = solve_linear(a, b) else { continue };

                let mut a = Vec::new();
                let mut b = Vec::new();
                for &i in &rs {
                    let mut line: Vec<S> = cs.iter().map(|&j| m[(i, j)].clone()).collect();
                    line.push(-S::one());
                    a.push(line);
                    b.push(S::zero());
                }
                let mut line = vec![S::one(); k];
                line.push(S::zero());
                a.push(line);
                b.push(S::one());
                let Some(ys) = solve_linear(a, b) else { continue };

                let v = xs[k].clone();
                if !v.approx_eq(&ys[k]) {
                    continue;
                }
                if xs[..k].iter().chain(&ys[..k]).any(|p| p.definitely_lt(&zero)) {
                    continue;
                }
                let mut x = vec![S::zero(); rows];
                for (t, &i) in rs.iter().enumerate() {
                    x[i] = xs[t].clone();
                }
                let mut y = vec![S::zero(); cols];
                for (t, &j) in cs.iter().enumerate() {
                    y[j] = ys[t].clone();
                }
                let col_ok = (0..cols).all(|j| {
                    let pay = (0..rows).fold(S::zero(), |acc, i| acc + x[i].clone() * m[(i, j)].clone());
                    !pay.definitely_lt(&v)
                });
                let row_ok = (0..rows).all(|i| {
                    let pay = (0..cols).fold(S::zero(), |acc, j| acc + y[j].clone() * m[(i, j)].clone());
                    !pay.definitely_gt(&v)
                });
                if col_ok && row_ok {
                    return (v, x, y);
                }
            }
        }
    }
    panic!("support enumeration found no equilibrium for {m:?}");
}

/// `f(V, Y, P)` by direct recursion without any memoization.
pub fn recursive_value<S: Scalar>(state: &GameState) -> S {
    let k = state.size();
    if k == 0 {
        return S::zero();
    }
    let mut total = S::zero();
    for upcard in state.p().iter() {
        let prize = upcard.value() as i64;
        let mut entries = Vec::with_capacity(k * k);
        for vi in state.v().iter() {
            for yj in state.y().iter() {
                let rest = recursive_value::<S>(&state.after(vi, yj, upcard));
                entries.push(S::from_int(prize * sign(vi.value() as i64 - yj.value() as i64)) + rest);
            }
        }
        let m = PayoffMatrix::new(k, k, entries).unwrap();
        total = total + support_enumeration(&m).0;
    }
    total / S::from_int(k as i64)
}

/// All `k`-subsets of `1..=n` by brute-force filtering of bitmasks.
pub fn all_subsets(n: usize, k: usize) -> Vec<CardSet> {
    (0u32..(1 << n)).map(CardSet::from_bits).filter(|s| s.len() == k).collect()
}

/// Every permutation of `1..=n`.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn rec(rest: &mut Vec<u8>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let c = rest.remove(i);
            cur.push(c);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, c);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..=n as u8).collect(), &mut Vec::new(), &mut out);
    out
}
