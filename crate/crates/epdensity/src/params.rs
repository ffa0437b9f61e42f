//! Deterministic tuning sequences and the block/threshold/cutoff scheme
//! shared by every estimator in the crate.
//!
//! All sequences grow slowly by design: `b_n = 4 + ln ln(n + 20)` stays close
//! to 5–6 for any practical sample size, the nuisance subsamples take
//! roughly `n / b_n` observations each, and the series cutoff for nuisance
//! fits is the smallest integer above `n^{1/3}`.

use crate::{Error, Result};

/// Slow-growth factor `b_n = 4 + ln ln(n + 20)`.
pub fn slow_growth(n: usize) -> f64 {
    4.0 + ((n as f64 + 20.0).ln()).ln()
}

/// Per-block threshold `t_k = ln^{-2}(2 + k)`, `k >= 1`.
pub fn threshold(k: usize) -> f64 {
    let l = (2.0 + k as f64).ln();
    1.0 / (l * l)
}

/// Deterministic sample-size sequences for a regression sample of size `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningSequences {
    /// Full sample count.
    pub n: usize,
    /// Slow-growth factor `b_n`.
    pub b_n: f64,
    /// Nuisance subsample size: smallest integer strictly greater than `n / b_n`.
    pub n_1: usize,
    /// Finite-support residual count `n_2 = n - 3 n_1`.
    pub n_2: usize,
    /// Series cutoff for nuisance fits: smallest integer with `S^3 > n`.
    pub s: usize,
}

/// Computes the tuning sequences, rejecting samples with `min(n_1, n_2) <= 4`.
pub fn compute_sequences(n: usize) -> Result<TuningSequences> {
    if n == 0 {
        return Err(Error::SampleTooSmall {
            n,
            detail: "no observations",
        });
    }
    let b_n = slow_growth(n);
    // Smallest integer strictly greater than n / b_n. b_n is irrational for
    // every n, so the quotient never lands exactly on an integer.
    let n_1 = (n as f64 / b_n).floor() as usize + 1;
    if 3 * n_1 >= n {
        return Err(Error::SampleTooSmall {
            n,
            detail: "n_2 = n - 3 n_1 would be nonpositive",
        });
    }
    let n_2 = n - 3 * n_1;
    if n_1.min(n_2) <= 4 {
        return Err(Error::SampleTooSmall {
            n,
            detail: "min(n_1, n_2) <= 4",
        });
    }
    // Smallest integer with s^3 > n, found in integer arithmetic.
    let mut s = 1usize;
    while s * s * s <= n {
        s += 1;
    }
    Ok(TuningSequences {
        n,
        b_n,
        n_1,
        n_2,
        s,
    })
}

/// Finite vs. infinite support of the estimated density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    /// Density on `[0, 1]`; blocks are ranges of integer series indices.
    Finite,
    /// Density on the real line; blocks are frequency intervals `[v_{k-1}, v_k)`.
    Infinite,
}

/// One block of the shrinkage scheme.
///
/// For finite support the block covers the integer series indices
/// `first..=last`; for infinite support it covers frequencies
/// `[lower, upper)` in radians per unit of the estimated variable. In both
/// cases the length is `k^2` for the `k`-th block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    /// 1-based block index `k`.
    pub k: usize,
    /// Block length `L_k = k^2`.
    pub len: usize,
    /// Hard-threshold level `t_k = ln^{-2}(2 + k)`.
    pub threshold: f64,
    /// First integer index (finite) — equals `lower as usize + 1`.
    pub first: usize,
    /// Last integer index (finite) — equals `upper as usize`.
    pub last: usize,
    /// Lower frequency edge (infinite).
    pub lower: f64,
    /// Upper frequency edge (infinite).
    pub upper: f64,
}

/// Block boundaries, lengths, thresholds and cutoff for a sample of size `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockScheme {
    pub support: SupportKind,
    /// Sample size the scheme was built for.
    pub r: usize,
    /// Retained blocks, ordered and contiguous.
    pub blocks: Vec<Block>,
}

impl BlockScheme {
    /// Number of retained blocks.
    pub fn cutoff(&self) -> usize {
        self.blocks.len()
    }

    /// Total covered length: the largest series index (finite) or the upper
    /// frequency edge (infinite) as an integer.
    pub fn total_len(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }
}

/// Builds the blockwise-shrinkage scheme for a sample of size `r`.
///
/// Block lengths are `L_k = k^2` and the cutoff `K` is the minimal integer
/// with `sum_{k<=K} L_k >= r^{1/5} b_r`. Finite-support blocks partition the
/// positive integers starting at 1; infinite-support blocks partition
/// `[0, sum L_k)` starting at 0 with edges at the cumulative lengths.
pub fn build_block_scheme(r: usize, support: SupportKind) -> Result<BlockScheme> {
    if r < 5 {
        return Err(Error::SampleTooSmall {
            n: r,
            detail: "block scheme needs r >= 5",
        });
    }
    let target = (r as f64).powf(0.2) * slow_growth(r);
    let mut blocks = Vec::new();
    let mut cum = 0usize;
    let mut k = 0usize;
    while (cum as f64) < target {
        k += 1;
        let len = k * k;
        blocks.push(Block {
            k,
            len,
            threshold: threshold(k),
            first: cum + 1,
            last: cum + len,
            lower: cum as f64,
            upper: (cum + len) as f64,
        });
        cum += len;
    }
    Ok(BlockScheme { support, r, blocks })
}
