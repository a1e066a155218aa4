//! Parity-check matrices in the `x·H` orientation: rows are variables,
//! columns are checks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Full-rank retries for [`sample_sparse_h`].
pub const SPARSE_H_RETRIES: usize = 100;

/// `n x (n-k)` matrix with i.i.d. Bernoulli(`lambda/n`) entries, redrawn
/// until it has full column rank.
pub fn sample_sparse_h<R: Rng + ?Sized>(n: usize, k: usize, lambda: f64, rng: &mut R) -> Result<BitMatrix> {
    if k >= n {
        return Err(Error::param("k", format!("need n - k >= 1, got n={n}, k={k}")));
    }
    if !(lambda >= 1.0 && lambda <= n as f64 / 2.0) {
        return Err(Error::param(
            "lambda",
            format!("need 1 <= lambda <= n/2 = {}, got {lambda}", n as f64 / 2.0),
        ));
    }
    let cols = n - k;
    let p = lambda / n as f64;
    let mut best = 0;
    for _ in 0..SPARSE_H_RETRIES {
        let h = if p == 0.5 {
            BitMatrix::random(n, cols, rng)
        } else {
            BitMatrix::bernoulli(n, cols, p, rng)
        };
        let rank = h.rank();
        if rank == cols {
            return Ok(h);
        }
        best = best.max(rank);
    }
    Err(Error::RankDeficient {
        rank: best,
        expected: cols,
    })
}

/// Successful swaps applied by [`structured_ldpc`].
pub const DEFAULT_SWAPS: usize = 100_000;

/// `n x 4n/5` matrix with four ones in every row and five in every column.
///
/// Starts from a 5 x 4 grid of `n/5` identity blocks, then applies
/// [`DEFAULT_SWAPS`] margin-preserving swaps.
pub fn structured_ldpc<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BitMatrix> {
    structured_ldpc_with_swaps(n, DEFAULT_SWAPS, rng)
}

pub fn structured_ldpc_with_swaps<R: Rng + ?Sized>(n: usize, swaps: usize, rng: &mut R) -> Result<BitMatrix> {
    if n == 0 || !n.is_multiple_of(5) {
        return Err(Error::param("n", format!("must be a positive multiple of 5, got {n}")));
    }
    let b = n / 5;
    let mut h = BitMatrix::zeros(n, 4 * b);
    // ones as (row, col)
    let mut ones = Vec::with_capacity(4 * n);
    for br in 0..5 {
        for bc in 0..4 {
            for i in 0..b {
                h.put(br * b + i, bc * b + i, true);
                ones.push((br * b + i, bc * b + i));
            }
        }
    }
    let mut done = 0;
    let mut tries = 0usize;
    // Tiny matrices may admit few or no swaps at all.
    let max_tries = swaps.saturating_mul(100).max(1000);
    while done < swaps && tries < max_tries {
        tries += 1;
        let a = rng.random_range(0..ones.len());
        let c = rng.random_range(0..ones.len());
        let ((i1, j1), (i2, j2)) = (ones[a], ones[c]);
        if i1 == i2 || j1 == j2 || h.at(i1, j2) || h.at(i2, j1) {
            continue;
        }
        h.put(i1, j1, false);
        h.put(i2, j2, false);
        h.put(i1, j2, true);
        h.put(i2, j1, true);
        ones[a] = (i1, j2);
        ones[c] = (i2, j1);
        done += 1;
    }
    Ok(h)
}

/// Number of length-4 cycles in the Tanner graph: pairs of variables
/// sharing two checks, counted per pair of shared checks.
pub fn four_cycles(h: &BitMatrix) -> usize {
    let mut total = 0;
    for i in 0..h.rows() {
        let ri = h.row_words(i);
        for j in i + 1..h.rows() {
            let shared: usize = ri
                .iter()
                .zip(h.row_words(j))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            total += shared * shared.saturating_sub(1) / 2;
        }
    }
    total
}

/// Probability that a sum of `l` i.i.d. Bernoulli(`lambda/n`) bits is 0.
pub fn entry_zero_prob(lambda: f64, l: usize, n: usize) -> f64 {
    0.5 * (1.0 + (1.0 - 2.0 * lambda / n as f64).powi(l as i32))
}

/// `x·H`.
pub fn syndrome_encode(h: &BitMatrix, x: &BitVec) -> Result<BitVec> {
    h.vec_mul(x)
}
