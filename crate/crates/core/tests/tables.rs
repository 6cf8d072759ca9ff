use std::io::Cursor;

use gops::dp::{
    file_len, layer_len, load_table, load_table_for, read_table, save_table, solve_all, stage_matrix, verify_table,
    write_table, SolveConfig, VerifyOptions, ViolationKind,
};
use gops::model::{binomial, payoff_matrix, rank_subset, unrank_subset, CardSet, GameState};
use gops::{Card, Error, ExactTable, FloatTable};
use proptest::prelude::*;

fn float_table(n: usize) -> FloatTable {
    solve_all(&SolveConfig::new(n).keep_all(true)).unwrap()
}

proptest! {
    #[test]
    fn rank_roundtrip(bits in 0u32..(1 << 13)) {
        let s = CardSet::from_bits(bits);
        let r = rank_subset(s, s.len()).unwrap();
        prop_assert!(r < binomial(13, s.len()));
        prop_assert_eq!(unrank_subset(r, s.len(), 13).unwrap(), s);
    }

    #[test]
    fn swapped_stage_matrix_is_negated_transpose(n in 2usize..=5, seed in any::<u64>()) {
        let table = float_table(n);
        let mut rng = gops::play::Rng::new(seed);
        let j = 1 + rng.below(n as u64) as usize;
        let c = binomial(n, j) as usize;
        let idx = rng.below((c * c * c) as u64) as usize;
        let state = table.state_at(j, idx).unwrap();
        let up = state.p().iter().nth(rng.below(j as u64) as usize).unwrap();
        let m = stage_matrix(&table, &state, up).unwrap();
        let w = stage_matrix(&table, &state.swapped(), up).unwrap();
        let flipped = m.negated_transpose();
        for i in 0..j {
            for k in 0..j {
                prop_assert!((w[(i, k)] - flipped[(i, k)]).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn state_at_inverts_index_of() {
    let table = float_table(4);
    for j in 0..=4 {
        for idx in 0..layer_len(4, j) as usize {
            let s = table.state_at(j, idx).unwrap();
            assert_eq!(table.index_of(&s), idx);
        }
    }
}

#[test]
fn payoff_lookup_miss_is_reported() {
    let state = GameState::start(3);
    let err = payoff_matrix::<f64, _>(&state, Card::of(2), |_| None).unwrap_err();
    assert!(matches!(err, Error::LookupMiss(_)));
}

#[test]
fn gvt_roundtrip_is_bit_identical() {
    let table = float_table(5);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t5.gvt");
    save_table(&table, &path).unwrap();
    assert_eq!(std::fs::metadata(&path).unwrap().len(), file_len(5));
    let back = load_table(&path).unwrap();
    for j in 0..=5 {
        let (a, b) = (table.layer(j).unwrap(), back.layer(j).unwrap());
        assert_eq!(a.len() as u64, layer_len(5, j));
        assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
    assert_eq!(layer_len(5, 2), 1000);
    assert!(matches!(load_table_for(&path, 6), Err(Error::TableSizeMismatch { table: 5, requested: 6 })));
}

#[test]
fn gvt_rejects_corruption() {
    let bytes = write_table(&float_table(3), Vec::new()).unwrap();

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(read_table(Cursor::new(bad)), Err(Error::BadMagic(_))));

    let mut bad = bytes.clone();
    bad[4] = 2;
    assert!(matches!(read_table(Cursor::new(bad)), Err(Error::UnsupportedVersion(2))));

    let mut bad = bytes.clone();
    bad[6] = 1;
    assert!(matches!(read_table(Cursor::new(bad)), Err(Error::UnsupportedArithmetic(1))));

    let short = bytes[..bytes.len() - 3].to_vec();
    assert!(matches!(read_table(Cursor::new(short)), Err(Error::Truncated { .. })));

    let mut long = bytes.clone();
    long.extend_from_slice(&[0; 8]);
    assert!(matches!(read_table(Cursor::new(long)), Err(Error::TrailingData(_))));
}

#[test]
fn partial_tables_cannot_be_saved() {
    let table: FloatTable = solve_all(&SolveConfig::new(4)).unwrap();
    assert!(!table.is_complete());
    assert!(matches!(write_table(&table, Vec::new()), Err(Error::LayerMissing { .. })));
}

#[test]
fn fresh_table_verifies_clean() {
    let report = verify_table(&float_table(5), &VerifyOptions::default());
    assert!(report.is_clean(), "{:?}", report.violations);
    assert!(report.stage_games_sampled >= 1000);
    assert!(report.max_exploitability <= 1e-6);
}

#[test]
fn injected_fault_is_located() {
    let n = 5;
    let mut table = float_table(n);
    let j = n - 1;
    let c = binomial(n, j) as usize;
    // an off-diagonal entry with a nonzero value
    let idx = (0..c * c * c)
        .find(|&i| {
            let (rv, ry) = (i / (c * c), (i / c) % c);
            rv != ry && table.layer(j).unwrap()[i].abs() > 0.5
        })
        .unwrap();
    let slot = &mut table.layer_mut(j).unwrap()[idx];
    *slot = -*slot;
    let report = verify_table(&table, &VerifyOptions { samples: 0, ..Default::default() });
    let antisym: Vec<_> = report.violations.iter().filter(|v| v.kind == ViolationKind::Antisymmetry).collect();
    assert_eq!(antisym.len(), 1, "{:?}", report.violations);
    assert_eq!((antisym[0].layer, antisym[0].index), (j, idx));
    assert!(report.violations.iter().all(|v| v.index == idx && v.layer == j));
}

#[test]
fn exact_table_verifies_with_zero_slack() {
    let table: ExactTable = solve_all(&SolveConfig::new(4).exact().keep_all(true)).unwrap();
    let opts = VerifyOptions { samples: 1000, value_tol: 0.0, exploit_tol: 0.0, ..Default::default() };
    let report = verify_table(&table, &opts);
    assert!(report.is_clean(), "{:?}", report.violations);
    assert_eq!(report.max_exploitability, 0.0);
    assert_eq!(report.max_antisymmetry_error, 0.0);
}

#[test]
fn every_entry_obeys_table_invariants() {
    for n in 1..=6 {
        let table = float_table(n);
        assert!(table.value(&GameState::start(n)).unwrap().abs() <= 1e-9);
        for j in 0..=n {
            for (idx, v) in table.layer(j).unwrap().iter().enumerate() {
                let s = table.state_at(j, idx).unwrap();
                let mirror = table.value(&s.swapped()).unwrap();
                assert!((v + mirror).abs() <= 1e-9);
                assert!(v.abs() <= s.p().sum() as f64 + 1e-9);
                if s.v() == s.y() {
                    assert!(v.abs() <= 1e-9);
                }
            }
        }
    }
}
