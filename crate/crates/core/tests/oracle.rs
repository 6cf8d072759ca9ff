mod common;

use common::{all_subsets, recursive_value, support_enumeration};
use gops::dp::{solve_all, SolveConfig};
use gops::matgame::{exploitability, solve, solve_2x2, solve_lp};
use gops::model::GameState;
use gops::scalar::ratio;
use gops::{ExactMatrix, ExactTable, FloatMatrix, FloatTable, Rational};
use proptest::prelude::*;

fn exact(rows: &[Vec<i64>]) -> ExactMatrix {
    let r = rows.len();
    let c = rows[0].len();
    ExactMatrix::from_fn(r, c, |i, j| ratio(rows[i][j], 1))
}

fn float(rows: &[Vec<i64>]) -> FloatMatrix {
    let r = rows.len();
    let c = rows[0].len();
    FloatMatrix::from_fn(r, c, |i, j| rows[i][j] as f64)
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    sized_matrix(8)
}

fn sized_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=max, 1usize..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-50i64..=50, c), r))
}

#[test]
fn oracle_self_check() {
    // matching pennies and the classic rock-paper-scissors
    let (v, x, y) = support_enumeration(&exact(&[vec![1, -1], vec![-1, 1]]));
    assert_eq!(v, ratio(0, 1));
    assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]);
    assert_eq!(y, vec![ratio(1, 2), ratio(1, 2)]);
    let (v, x, _) = support_enumeration(&exact(&[vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]));
    assert_eq!(v, ratio(0, 1));
    assert_eq!(x, vec![ratio(1, 3); 3]);
}

#[test]
fn three_by_three_against_support_enumeration() {
    let rows = vec![vec![1, -2, 3], vec![-4, 5, -6], vec![7, -8, 9]];
    let m = exact(&rows);
    let sol = solve_lp(&m).unwrap();
    assert_eq!(sol.value, support_enumeration(&m).0);
    assert_eq!(exploitability(&m, &sol).unwrap(), ratio(0, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn float_solver_matches_oracle(rows in int_matrix()) {
        let m = float(&rows);
        let sol = solve(&m);
        prop_assert!(sol.row.is_distribution() && sol.col.is_distribution());
        prop_assert!(exploitability(&m, &sol).unwrap() <= 1e-9);
        let (v, _, _) = support_enumeration(&m);
        prop_assert!((sol.value - v).abs() <= 1e-9, "{} vs {}", sol.value, v);
    }

    // rational support enumeration is slow beyond 6x6
    #[test]
    fn exact_solver_matches_oracle(rows in sized_matrix(6)) {
        let m = exact(&rows);
        let sol = solve(&m);
        prop_assert_eq!(exploitability(&m, &sol).unwrap(), ratio(0, 1));
        prop_assert_eq!(sol.value, support_enumeration(&m).0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn negated_transpose_flips_value(rows in int_matrix()) {
        let m = exact(&rows);
        let flipped = m.negated_transpose();
        prop_assert_eq!(solve(&flipped).value, -solve(&m).value);
    }

    #[test]
    fn affine_covariance(rows in int_matrix(), a in 1i64..=7, b in -20i64..=20) {
        let m = exact(&rows);
        let scaled = m.affine(&ratio(a, 1), &ratio(b, 1));
        let v = solve(&m).value;
        prop_assert_eq!(solve(&scaled).value, v * ratio(a, 1) + ratio(b, 1));
    }

    #[test]
    fn closed_form_agrees_with_simplex(a in -50i64..=50, b in -50i64..=50, c in -50i64..=50, d in -50i64..=50) {
        let m = exact(&[vec![a, b], vec![c, d]]);
        if let Ok(closed) = solve_2x2(&m) {
            let lp = solve_lp(&m).unwrap();
            prop_assert_eq!(&closed.value, &lp.value);
            prop_assert_eq!(exploitability(&m, &closed).unwrap(), ratio(0, 1));
        }
    }

    #[test]
    fn skew_symmetric_games_are_fair(upper in prop::collection::vec(-50i64..=50, 28), k in 1usize..=8) {
        let mut rows = vec![vec![0i64; k]; k];
        let mut it = upper.iter();
        for i in 0..k {
            for j in i + 1..k {
                let v = *it.next().unwrap();
                rows[i][j] = v;
                rows[j][i] = -v;
            }
        }
        prop_assert_eq!(solve(&exact(&rows)).value, ratio(0, 1));
    }
}

fn every_state(n: usize) -> impl Iterator<Item = GameState> {
    (0..=n).flat_map(move |j| {
        let sets = all_subsets(n, j);
        let mut out = Vec::new();
        for &v in &sets {
            for &y in &sets {
                for &p in &sets {
                    out.push(GameState::new(v, y, p).unwrap());
                }
            }
        }
        out
    })
}

#[test]
fn dp_matches_recursion_exactly() {
    for n in 1..=4 {
        let table: ExactTable = solve_all(&SolveConfig::new(n).exact().keep_all(true)).unwrap();
        let mut checked = 0u64;
        for state in every_state(n) {
            let expected: Rational = recursive_value(&state);
            assert_eq!(table.value(&state).unwrap(), expected, "n={n} {state}");
            checked += 1;
        }
        assert_eq!(checked, gops::dp::stored_value_count(n));
    }
}

#[test]
fn float_dp_matches_recursion() {
    for n in 1..=4 {
        let table: FloatTable = solve_all(&SolveConfig::new(n).keep_all(true)).unwrap();
        for state in every_state(n) {
            let expected: f64 = recursive_value(&state);
            let got = table.value(&state).unwrap();
            assert!((got - expected).abs() <= 1e-9, "n={n} {state}: {got} vs {expected}");
        }
    }
}

#[test]
fn halving_is_invisible() {
    for n in 1..=4 {
        let full: ExactTable = solve_all(&SolveConfig::new(n).exact().keep_all(true).symmetry(false)).unwrap();
        let half: ExactTable = solve_all(&SolveConfig::new(n).exact().keep_all(true)).unwrap();
        assert_eq!(full, half);
    }
}
