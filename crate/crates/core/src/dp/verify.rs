//! Invariant audit for solved tables.

use std::fmt;

use crate::matgame::{exploitability, solve};
use crate::model::binomial;
use crate::play::Rng;
use crate::scalar::Scalar;

use super::table::ValueTable;
use super::LayerIndex;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Minimum number of stage games to re-solve.
    pub samples: usize,
    pub seed: u64,
    /// Float slack for antisymmetry, diagonal and bound checks.
    pub value_tol: f64,
    /// Float slack for exploitability and recomputed values.
    pub exploit_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 1000, seed: 0x5EED_CAFE, value_tol: 1e-9, exploit_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    MissingLayer,
    Antisymmetry,
    Diagonal,
    Bound,
    Exploitability,
    Consistency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub layer: usize,
    pub index: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at layer {} index {}: {}", self.kind, self.layer, self.index, self.detail)
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
    pub entries_checked: u64,
    pub stage_games_sampled: u64,
    pub states_sampled: u64,
    pub max_exploitability: f64,
    pub max_antisymmetry_error: f64,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check antisymmetry, zero diagonal and the `|f| <= sum(P)` bound on every
/// entry, then re-solve a seeded sample of stage games and check their
/// exploitability and that stored values equal the recomputed averages.
///
/// Antisymmetry failures are attributed by recomputing both entries of the
/// pair from the layer below, so a single corrupted entry is reported at its
/// own index only.
pub fn verify_table<S: Scalar>(table: &ValueTable<S>, opts: &VerifyOptions) -> VerifyReport {
    let n = table.n();
    let mut report = VerifyReport::default();
    let value_tol = S::slack(opts.value_tol);
    let recompute_tol = S::slack(opts.exploit_tol);
    let zero = S::zero();

    for j in 0..=n {
        let Some(layer) = table.layer(j) else {
            report.violations.push(Violation {
                layer: j,
                index: 0,
                kind: ViolationKind::MissingLayer,
                detail: "layer not present".into(),
            });
            continue;
        };
        let c = binomial(n, j) as usize;
        let index = (j > 0).then(|| LayerIndex::new(n, j));
        let prev = j.checked_sub(1).and_then(|p| table.layer(p));
        let mut scratch = Vec::new();
        let sums: Vec<S> = match &index {
            Some(ix) => ix.subsets.iter().map(|s| S::from_int(s.sum() as i64)).collect(),
            None => vec![S::zero()],
        };

        for rv in 0..c {
            for ry in 0..c {
                for rp in 0..c {
                    let idx = (rv * c + ry) * c + rp;
                    let value = &layer[idx];
                    report.entries_checked += 1;

                    if value.abs() - sums[rp].clone() > value_tol {
                        report.violations.push(Violation {
                            layer: j,
                            index: idx,
                            kind: ViolationKind::Bound,
                            detail: format!("|{value}| exceeds deck sum {}", sums[rp]),
                        });
                    }
                    if rv == ry {
                        if value.abs() > value_tol {
                            report.violations.push(Violation {
                                layer: j,
                                index: idx,
                                kind: ViolationKind::Diagonal,
                                detail: format!("f(V,V,P) = {value}"),
                            });
                        }
                        continue;
                    }
                    if ry < rv {
                        continue;
                    }
                    let mirror_idx = (ry * c + rv) * c + rp;
                    let mirror = &layer[mirror_idx];
                    let err = (value.clone() + mirror.clone()).abs();
                    report.max_antisymmetry_error = report.max_antisymmetry_error.max(err.to_f64());
                    if err <= value_tol {
                        continue;
                    }
                    let mut blamed = Vec::new();
                    if let (Some(ix), Some(prev)) = (&index, prev) {
                        let truth = ix.entry(prev, rv, ry, rp, &mut scratch);
                        if (truth.clone() - value.clone()).abs() > recompute_tol {
                            blamed.push((idx, value.clone(), mirror.clone()));
                        }
                        if (-truth - mirror.clone()).abs() > recompute_tol {
                            blamed.push((mirror_idx, mirror.clone(), value.clone()));
                        }
                    }
                    if blamed.is_empty() {
                        blamed.push((idx, value.clone(), mirror.clone()));
                    }
                    for (at, own, other) in blamed {
                        report.violations.push(Violation {
                            layer: j,
                            index: at,
                            kind: ViolationKind::Antisymmetry,
                            detail: format!("f = {own} but swapped-hands entry is {other}"),
                        });
                    }
                }
            }
        }
    }

    sample_stage_games(table, opts, &mut report, &recompute_tol, &zero);
    report
}

fn sample_stage_games<S: Scalar>(
    table: &ValueTable<S>,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
    recompute_tol: &S,
    zero: &S,
) {
    let n = table.n();
    // Diagonal states are covered by the zero check and never sampled.
    let eligible: Vec<usize> = (1..=n)
        .filter(|&j| binomial(n, j) >= 2 && table.layer(j).is_some() && table.layer(j - 1).is_some())
        .collect();
    if eligible.is_empty() {
        return;
    }
    let indices: Vec<LayerIndex> = eligible.iter().map(|&j| LayerIndex::new(n, j)).collect();
    let exploit_tol = S::slack(opts.exploit_tol);
    let mut rng = Rng::new(opts.seed);

    while (report.stage_games_sampled as usize) < opts.samples {
        let pick = rng.below(eligible.len() as u64) as usize;
        let (j, ix) = (eligible[pick], &indices[pick]);
        let c = ix.c as u64;
        let rv = rng.below(c) as usize;
        let mut ry = rng.below(c - 1) as usize;
        if ry >= rv {
            ry += 1;
        }
        let rp = rng.below(c) as usize;
        let prev = table.layer(j - 1).unwrap();
        let stored = &table.layer(j).unwrap()[(rv * ix.c + ry) * ix.c + rp];
        let idx = (rv * ix.c + ry) * ix.c + rp;

        let mut total = S::zero();
        for k in 0..j {
            let m = ix.stage_matrix(prev, rv, ry, rp, k);
            let sol = solve(&m);
            let gap = exploitability(&m, &sol).unwrap_or_else(|_| zero.clone());
            report.max_exploitability = report.max_exploitability.max(gap.to_f64());
            if gap > exploit_tol {
                report.violations.push(Violation {
                    layer: j,
                    index: idx,
                    kind: ViolationKind::Exploitability,
                    detail: format!("upcard #{k}: exploitability {gap}"),
                });
            }
            total = total + sol.value;
            report.stage_games_sampled += 1;
        }
        report.states_sampled += 1;
        let mean = total / S::from_int(j as i64);
        if (mean.clone() - stored.clone()).abs() > *recompute_tol {
            report.violations.push(Violation {
                layer: j,
                index: idx,
                kind: ViolationKind::Consistency,
                detail: format!("stored {stored}, recomputed {mean}"),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::{solve_all, SolveConfig};
    use crate::Rational;

    #[test]
    fn clean_float_table() {
        let t: ValueTable<f64> = solve_all(&SolveConfig::new(5).keep_all(true)).unwrap();
        let r = verify_table(&t, &VerifyOptions::default());
        assert!(r.is_clean(), "{:?}", r.violations);
        assert!(r.stage_games_sampled >= 1000);
        assert_eq!(r.entries_checked, crate::dp::stored_value_count(5));
    }

    #[test]
    fn clean_exact_table() {
        let t: ValueTable<Rational> = solve_all(&SolveConfig::new(3).exact().keep_all(true)).unwrap();
        let r = verify_table(&t, &VerifyOptions { samples: 200, ..Default::default() });
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.max_exploitability, 0.0);
    }

    #[test]
    fn diagonal_fault() {
        let mut t: ValueTable<f64> = solve_all(&SolveConfig::new(3).keep_all(true)).unwrap();
        // (rv, ry, rp) = (1, 1, 2) in layer 2
        t.layer_mut(2).unwrap()[(1 * 3 + 1) * 3 + 2] = 0.5;
        let r = verify_table(&t, &VerifyOptions { samples: 0, ..Default::default() });
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::Diagonal);
        assert_eq!(r.violations[0].index, 14);
    }

    #[test]
    fn missing_layer_reported() {
        let t: ValueTable<f64> = solve_all(&SolveConfig::new(3)).unwrap();
        let r = verify_table(&t, &VerifyOptions { samples: 10, ..Default::default() });
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::MissingLayer && v.layer == 0));
    }
}
