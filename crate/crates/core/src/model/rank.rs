//! Perfect hash for card subsets via the combinatorial number system.
//!
//! A `k`-subset with elements `c_1 < ... < c_k` (card values, 1-based) gets
//! rank `sum_i C(c_i - 1, i)`. Ranks are dense in `0..C(n, k)` and follow
//! colexicographic order of the element lists.

use crate::error::{Error, Result};

use super::cards::CardSet;
use super::MAX_CARDS;

const fn pascal() -> [[u64; MAX_CARDS + 1]; MAX_CARDS + 1] {
    let mut t = [[0u64; MAX_CARDS + 1]; MAX_CARDS + 1];
    let mut n = 0;
    while n <= MAX_CARDS {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; MAX_CARDS + 1]; MAX_CARDS + 1] = pascal();

/// `C(n, k)`, zero when `k > n`. Both arguments must be at most 16.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOMIAL[n][k]
    }
}

/// Rank of a subset among all subsets of the same size.
#[inline]
pub fn rank(s: CardSet) -> u64 {
    let mut bits = s.bits();
    let mut r = 0;
    let mut i = 1;
    while bits != 0 {
        let c = bits.trailing_zeros() as usize; // card value - 1
        r += binomial(c, i);
        bits &= bits - 1;
        i += 1;
    }
    r
}

/// Rank with an explicit cardinality check.
pub fn rank_subset(s: CardSet, k: usize) -> Result<u64> {
    if s.len() != k {
        return Err(Error::CardinalityMismatch { expected: k, actual: s.len() });
    }
    Ok(rank(s))
}

/// Inverse of [`rank_subset`] over the `k`-subsets of `1..=n`.
pub fn unrank_subset(r: u64, k: usize, n: usize) -> Result<CardSet> {
    if n > MAX_CARDS || k > n || r >= binomial(n, k) {
        return Err(Error::RankOutOfRange { rank: r, k, n });
    }
    Ok(unrank(r, k, n))
}

fn unrank(mut r: u64, k: usize, n: usize) -> CardSet {
    let mut bits = 0u32;
    let mut top = n;
    for i in (1..=k).rev() {
        // largest c (0-based) with C(c, i) <= r
        let mut c = top - 1;
        while binomial(c, i) > r {
            c -= 1;
        }
        r -= binomial(c, i);
        bits |= 1 << c;
        top = c;
    }
    CardSet::from_bits(bits)
}

/// All `k`-subsets of `1..=n` in rank order.
pub fn subsets_by_rank(n: usize, k: usize) -> Vec<CardSet> {
    let count = binomial(n, k) as usize;
    let mut out = Vec::with_capacity(count);
    if k == 0 {
        out.push(CardSet::EMPTY);
        return out;
    }
    // Gosper's hack enumerates same-popcount masks in increasing numeric
    // order, which is exactly colex order.
    let mut x: u32 = (1 << k) - 1;
    let limit = 1u64 << n;
    while (x as u64) < limit {
        out.push(CardSet::from_bits(x));
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    debug_assert_eq!(out.len(), count);
    out
}
