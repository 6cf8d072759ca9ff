//! Bottom-up dynamic programming over all subgames of the N-card game.
//!
//! Layer `j` holds `f(V, Y, P)` for every triple of `j`-card sets, stored
//! densely at `(rank(V) * C + rank(Y)) * C + rank(P)` with `C = C(n, j)`.
//! Each layer is computed from the one below it; entries with
//! `rank(V) > rank(Y)` are filled by antisymmetry and the diagonal is zero.

mod gvt;
mod table;
mod verify;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matgame::{solve, GameSolution};
use crate::model::{binomial, payoff_matrix, sign, subsets_by_rank, Card, CardSet, GameState, PayoffMatrix};
use crate::scalar::Scalar;

pub use gvt::{
    file_len, load_table, load_table_for, read_table, save_table, write_table, GvtWriter, GVT_MAGIC, GVT_VERSION,
    HEADER_LEN,
};
pub use table::{layer_len, ValueTable};
pub use verify::{verify_table, VerifyOptions, VerifyReport, Violation, ViolationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Float64,
    Rational,
}

impl Arithmetic {
    pub fn of<S: Scalar>() -> Arithmetic {
        if S::EXACT {
            Arithmetic::Rational
        } else {
            Arithmetic::Float64
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Deck size.
    pub n: usize,
    pub arithmetic: Arithmetic,
    pub workers: usize,
    pub tolerance: f64,
    /// Retain every layer instead of only the last two.
    pub keep_all_layers: bool,
    /// Solve only `rank(V) < rank(Y)` and mirror the rest.
    pub use_symmetry: bool,
    /// Stop after this layer (defaults to `n`).
    pub max_layer: Option<usize>,
    /// Exact mode is refused above this deck size.
    pub max_exact_n: usize,
}

impl SolveConfig {
    pub const MAX_N: usize = 13;

    pub fn new(n: usize) -> Self {
        SolveConfig {
            n,
            arithmetic: Arithmetic::Float64,
            workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
            tolerance: crate::scalar::FLOAT_TOLERANCE,
            keep_all_layers: false,
            use_symmetry: true,
            max_layer: None,
            max_exact_n: 5,
        }
    }

    pub fn exact(mut self) -> Self {
        self.arithmetic = Arithmetic::Rational;
        self
    }

    pub fn keep_all(mut self, keep: bool) -> Self {
        self.keep_all_layers = keep;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.use_symmetry = on;
        self
    }

    pub fn up_to_layer(mut self, layer: usize) -> Self {
        self.max_layer = Some(layer);
        self
    }

    pub fn top_layer(&self) -> usize {
        self.max_layer.unwrap_or(self.n).min(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > Self::MAX_N {
            return Err(Error::InvalidConfig(format!("n must be in 1..={}, got {}", Self::MAX_N, self.n)));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if self.arithmetic == Arithmetic::Rational && self.n > self.max_exact_n {
            return Err(Error::InvalidConfig(format!(
                "exact mode refused for n={} (limit {}); exact values grow to millions of digits",
                self.n, self.max_exact_n
            )));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidConfig("tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Stage games (matrix games) solved.
    pub stage_solves: u64,
    /// Values written across all computed layers.
    pub stored_values: u64,
    pub layer_times: Vec<Duration>,
    pub elapsed: Duration,
}

/// Stage games the DP solves without symmetry: `sum_j j * C(n, j)^3`.
pub fn subgame_count(n: usize) -> u64 {
    (0..=n).map(|j| j as u64 * binomial(n, j).pow(3)).sum()
}

/// Stage games solved when only `rank(V) < rank(Y)` pairs are computed.
pub fn halved_subgame_count(n: usize) -> u64 {
    (0..=n)
        .map(|j| {
            let c = binomial(n, j);
            j as u64 * c * (c * c.saturating_sub(1) / 2)
        })
        .sum()
}

/// Number of values in a complete table: `sum_j C(n, j)^3`.
pub fn stored_value_count(n: usize) -> u64 {
    (0..=n).map(|j| binomial(n, j).pow(3)).sum()
}

/// Value and equilibrium of the stage game after `upcard` is revealed.
pub fn stage_value<S, F>(state: &GameState, upcard: Card, lookup: F) -> Result<GameSolution<S>>
where
    S: Scalar,
    F: FnMut(&GameState) -> Option<S>,
{
    let m = payoff_matrix(state, upcard, lookup)?;
    Ok(solve(&m))
}

/// `f(V, Y, P)`: the mean of the stage values over all possible upcards.
pub fn game_value<S, F>(state: &GameState, mut lookup: F) -> Result<S>
where
    S: Scalar,
    F: FnMut(&GameState) -> Option<S>,
{
    if state.size() == 0 {
        return Ok(S::zero());
    }
    let mut total = S::zero();
    for upcard in state.p().iter() {
        total = total + stage_value(state, upcard, &mut lookup)?.value;
    }
    Ok(total / S::from_int(state.size() as i64))
}

/// `f(state)` from a table: the stored entry when its layer is present,
/// otherwise one step of the recursion over the layer below.
pub fn value_of<S: Scalar>(table: &ValueTable<S>, state: &GameState) -> Result<S> {
    table.check_state(state)?;
    if let Some(v) = table.get(state) {
        return Ok(v);
    }
    if state.size() > 0 && table.layer(state.size() - 1).is_some() {
        return game_value(state, |s| table.get(s));
    }
    Err(Error::LayerMissing { table_n: table.n(), layer: state.size() })
}

/// Equilibrium of a stage game, recomputed from the table's lower layer.
pub fn strategy_for<S: Scalar>(table: &ValueTable<S>, state: &GameState, upcard: Card) -> Result<GameSolution<S>> {
    let m = stage_matrix(table, state, upcard)?;
    Ok(solve(&m))
}

/// Stage-game payoff matrix reconstructed from a table.
pub fn stage_matrix<S: Scalar>(table: &ValueTable<S>, state: &GameState, upcard: Card) -> Result<PayoffMatrix<S>> {
    table.check_state(state)?;
    if !state.p().contains(upcard) {
        return Err(Error::UpcardNotInDeck(upcard.value()));
    }
    let below = state.size() - 1;
    if table.layer(below).is_none() {
        return Err(Error::LayerMissing { table_n: table.n(), layer: below });
    }
    payoff_matrix(state, upcard, |s| table.get(s))
}

/// Fill the table bottom-up.
pub fn solve_all<S: Scalar>(config: &SolveConfig) -> Result<ValueTable<S>> {
    solve_all_with_stats(config).map(|(t, _)| t)
}

pub fn solve_all_with_stats<S: Scalar>(config: &SolveConfig) -> Result<(ValueTable<S>, SolveStats)> {
    solve_streaming(config, |_, _| Ok(()))
}

/// Solve layer by layer, handing each finished layer to `sink` before older
/// layers are released. Returns the retained table and counters.
pub fn solve_streaming<S, F>(config: &SolveConfig, mut sink: F) -> Result<(ValueTable<S>, SolveStats)>
where
    S: Scalar,
    F: FnMut(usize, &[S]) -> Result<()>,
{
    config.validate()?;
    if config.arithmetic != Arithmetic::of::<S>() {
        return Err(Error::InvalidConfig(format!(
            "configured for {:?} arithmetic but solving with {}",
            config.arithmetic,
            S::NAME
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let n = config.n;
    let top = config.top_layer();
    let start = Instant::now();
    let solves = AtomicU64::new(0);
    let mut stats = SolveStats::default();
    let mut table = ValueTable::empty(n);

    let base = vec![S::zero()];
    sink(0, &base)?;
    table.put_layer(0, base);
    stats.stored_values += 1;
    stats.layer_times.push(Duration::ZERO);

    for j in 1..=top {
        let t0 = Instant::now();
        let prev = table.layer(j - 1).expect("previous layer retained");
        let layer = pool.install(|| compute_layer(n, j, prev, config.use_symmetry, &solves))?;
        sink(j, &layer)?;
        stats.stored_values += layer.len() as u64;
        table.put_layer(j, layer);
        if !config.keep_all_layers && j >= 2 {
            table.drop_layer(j - 2);
        }
        stats.layer_times.push(t0.elapsed());
    }
    stats.stage_solves = solves.load(Ordering::Relaxed);
    stats.elapsed = start.elapsed();
    Ok((table, stats))
}

/// Precomputed subset data for one layer.
pub(crate) struct LayerIndex {
    pub j: usize,
    pub c: usize,
    pub c_prev: usize,
    pub subsets: Vec<CardSet>,
    /// `drop[r * j + i]`: rank of subset `r` without its `i`-th card.
    pub drop: Vec<usize>,
}

impl LayerIndex {
    pub fn new(n: usize, j: usize) -> Self {
        let subsets = subsets_by_rank(n, j);
        let mut drop = Vec::with_capacity(subsets.len() * j);
        for s in &subsets {
            for card in s.iter() {
                drop.push(crate::model::rank(s.without(card)) as usize);
            }
        }
        LayerIndex { j, c: subsets.len(), c_prev: binomial(n, j - 1) as usize, subsets, drop }
    }

    /// Payoff entries of the stage game for upcard number `k` of `P`.
    pub fn fill_stage<S: Scalar>(&self, prev: &[S], rv: usize, ry: usize, rp: usize, k: usize, entries: &mut Vec<S>) {
        let j = self.j;
        let cp = self.c_prev;
        let (v, y) = (self.subsets[rv], self.subsets[ry]);
        let upcard = self.subsets[rp].iter().nth(k).expect("upcard index in range");
        let prize = upcard.value() as i64;
        let pk = self.drop[rp * j + k];
        let dv = &self.drop[rv * j..(rv + 1) * j];
        let dy = &self.drop[ry * j..(ry + 1) * j];
        entries.clear();
        for (vi, &dvi) in v.iter().zip(dv) {
            for (yj, &dyj) in y.iter().zip(dy) {
                let won = prize * sign(vi.value() as i64 - yj.value() as i64);
                let rest = &prev[(dvi * cp + dyj) * cp + pk];
                entries.push(S::from_int(won) + rest.clone());
            }
        }
    }

    pub fn stage_matrix<S: Scalar>(&self, prev: &[S], rv: usize, ry: usize, rp: usize, k: usize) -> PayoffMatrix<S> {
        let mut entries = Vec::with_capacity(self.j * self.j);
        self.fill_stage(prev, rv, ry, rp, k, &mut entries);
        PayoffMatrix::new(self.j, self.j, entries).expect("square")
    }

    /// `f` for one state from the previous layer; `entries` is scratch space.
    pub fn entry<S: Scalar>(&self, prev: &[S], rv: usize, ry: usize, rp: usize, entries: &mut Vec<S>) -> S {
        let j = self.j;
        let mut total = S::zero();
        for k in 0..j {
            self.fill_stage(prev, rv, ry, rp, k, entries);
            let m = PayoffMatrix::new(j, j, std::mem::take(entries)).expect("square");
            total = total + solve(&m).value;
            *entries = m.into_entries();
        }
        total / S::from_int(j as i64)
    }
}

fn compute_layer<S: Scalar>(n: usize, j: usize, prev: &[S], symmetric: bool, solves: &AtomicU64) -> Result<Vec<S>> {
    let index = LayerIndex::new(n, j);
    let c = index.c;
    let len = c * c * c;
    let mut layer: Vec<S> = Vec::new();
    layer
        .try_reserve_exact(len)
        .map_err(|_| Error::OutOfMemory { layer: j, entries: len as u64, index: 0 })?;
    layer.resize(len, S::zero());

    layer.par_chunks_mut(c * c).enumerate().for_each(|(rv, block)| {
        block.par_chunks_mut(c).enumerate().for_each(|(ry, line)| {
            if symmetric && ry <= rv {
                // mirrored below, or a zero diagonal
                return;
            }
            let mut scratch = Vec::with_capacity(j * j);
            for (rp, out) in line.iter_mut().enumerate() {
                *out = index.entry(prev, rv, ry, rp, &mut scratch);
            }
            solves.fetch_add((j * c) as u64, Ordering::Relaxed);
        });
    });

    if symmetric {
        for rv in 1..c {
            for ry in 0..rv {
                let (src, dst) = ((ry * c + rv) * c, (rv * c + ry) * c);
                for rp in 0..c {
                    layer[dst + rp] = -layer[src + rp].clone();
                }
            }
        }
    }
    Ok(layer)
}
