//! Matrix sparsification over GF(2): given a full-column-rank `A`, find an
//! invertible `P` making `A·P` sparse.
//!
//! [`sparsify`] sweeps the columns, replacing each `a_j` by
//! `a_j + A_{-j}·x` where `x` approximately solves Min-Unsatisfy on
//! `(A_{-j}, a_j)`. Every replacement is a unit-diagonal column operation,
//! so the accumulated `P` stays invertible. [`gauss_baseline`] is the
//! reduced column-echelon reference and [`sparsify_exhaustive`] the exact
//! per-column oracle for small instances.

mod bounds;
mod min_unsatisfy;

pub use bounds::{
    binary_entropy, binomial_sigma, distortion_rate, gauss_expected_density, lemma2_feasible, rate_distortion,
    RatePoint, DISTORTION_TOLERANCE,
};
pub(crate) use min_unsatisfy::Columns;
pub use min_unsatisfy::{min_unsatisfy_exhaustive, min_unsatisfy_randomized, MinUnsatisfy};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{popcount, test_bit, xor_words, BitMatrix};
use crate::rng;
use min_unsatisfy::{best_residual, exhaustive_residual};

/// Exhaustive Min-Unsatisfy on packed columns: `(x as integer, b + A·x)`.
pub(crate) fn exhaustive_search(columns: &[&[u64]], b: &crate::gf2::BitVec) -> (u64, crate::gf2::BitVec) {
    let (x, resid) = exhaustive_residual(columns, b.words());
    (x, crate::gf2::BitVec::from_words(b.len(), resid))
}

/// Largest `n - k` accepted by [`sparsify_exhaustive`].
pub const EXHAUSTIVE_MAX_COLUMNS: usize = 16;

/// One column visit of a sparsification sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnStep {
    pub pass: usize,
    pub column: usize,
    pub weight_before: usize,
    pub weight_after: usize,
    /// Density of the whole working matrix after this step.
    pub cumulative_density: f64,
}

#[derive(Clone, Debug)]
pub struct SparsifyResult {
    /// Invertible `(n-k) x (n-k)` transform.
    pub p: BitMatrix,
    /// `A·P`.
    pub ap: BitMatrix,
    /// `nnz(A·P) / (n (n-k))`.
    pub density: f64,
    /// Random Min-Unsatisfy trials evaluated in total.
    pub trials_used: usize,
    pub seed: u64,
    pub log: Vec<ColumnStep>,
    /// Density after each completed pass.
    pub pass_densities: Vec<f64>,
}

impl SparsifyResult {
    pub fn nnz(&self) -> usize {
        self.ap.nnz()
    }
}

fn require_full_column_rank(a: &BitMatrix) -> Result<()> {
    let rank = a.rank();
    if rank < a.cols() {
        return Err(Error::RankDeficient {
            rank,
            expected: a.cols(),
        });
    }
    Ok(())
}

/// Working state: columns of `A·P` and of `P`, updated in lockstep.
struct Sweep {
    n: usize,
    ap: Columns,
    p: Columns,
    log: Vec<ColumnStep>,
    pass_densities: Vec<f64>,
    nnz: usize,
}

impl Sweep {
    fn new(a: &BitMatrix) -> Self {
        let ap = Columns::from_matrix(a);
        let p = Columns::from_matrix(&BitMatrix::identity(a.cols()));
        let nnz = ap.nnz();
        Sweep {
            n: a.rows(),
            ap,
            p,
            log: Vec::new(),
            pass_densities: Vec::new(),
            nnz,
        }
    }

    fn density(&self) -> f64 {
        self.nnz as f64 / (self.n * self.ap.cols.len()) as f64
    }

    fn others(&self, j: usize) -> Vec<usize> {
        (0..self.ap.cols.len()).filter(|&i| i != j).collect()
    }

    /// Replaces column `j` with `residual = a_j + sum x_i a_{others[i]}` when
    /// that is strictly lighter; returns whether it did.
    fn apply(&mut self, pass: usize, j: usize, others: &[usize], residual: Vec<u64>) -> bool {
        let before = self.ap.weight(j);
        let after = popcount(&residual);
        let improved = after < before;
        if improved {
            let delta: Vec<u64> = residual.iter().zip(&self.ap.cols[j]).map(|(r, a)| r ^ a).collect();
            let refs: Vec<&[u64]> = others.iter().map(|&i| self.ap.cols[i].as_slice()).collect();
            let x = express(&refs, &delta).expect("replacement lies in the span of the other columns");
            let mut pj = self.p.cols[j].clone();
            for (k, &i) in others.iter().enumerate() {
                if x[k] {
                    xor_words(&mut pj, &self.p.cols[i]);
                }
            }
            self.p.cols[j] = pj;
            self.ap.cols[j] = residual;
            self.nnz = self.nnz - before + after;
        }
        let cumulative_density = self.density();
        self.log.push(ColumnStep {
            pass,
            column: j,
            weight_before: before,
            weight_after: before.min(after),
            cumulative_density,
        });
        improved
    }

    fn finish(self, a: &BitMatrix, trials_used: usize, seed: u64) -> SparsifyResult {
        let p = self.p.to_matrix();
        let ap = self.ap.to_matrix();
        assert_eq!(p.rank(), p.rows(), "accumulated transform lost invertibility");
        assert_eq!(
            a.mul(&p).expect("dimensions agree"),
            ap,
            "A·P out of sync with the working matrix"
        );
        SparsifyResult {
            density: ap.density(),
            p,
            ap,
            trials_used,
            seed,
            log: self.log,
            pass_densities: self.pass_densities,
        }
    }
}

/// Coefficients expressing `target` in the span of `columns`, if it lies there.
fn express(columns: &[&[u64]], target: &[u64]) -> Option<Vec<bool>> {
    let k = columns.len();
    let cw = crate::gf2::words_for(k.max(1));
    // (vector, combination of input columns, pivot row)
    let mut basis: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::with_capacity(k);
    for (idx, col) in columns.iter().enumerate() {
        let mut v = col.to_vec();
        let mut combo = vec![0u64; cw];
        crate::gf2::flip_bit(&mut combo, idx);
        for (bv, bc, row) in &basis {
            if test_bit(&v, *row) {
                xor_words(&mut v, bv);
                xor_words(&mut combo, bc);
            }
        }
        if let Some(row) = first_one(&v) {
            basis.push((v, combo, row));
        }
    }
    let mut t = target.to_vec();
    let mut combo = vec![0u64; cw];
    for (bv, bc, row) in &basis {
        if test_bit(&t, *row) {
            xor_words(&mut t, bv);
            xor_words(&mut combo, bc);
        }
    }
    if t.iter().any(|&w| w != 0) {
        return None;
    }
    Some((0..k).map(|i| test_bit(&combo, i)).collect())
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Iterated randomized sparsification.
///
/// Each of the `passes` sweeps visits every column once and runs
/// `trials_per_column` information-set trials (plus the `x = 0` candidate)
/// on the current working matrix. Trial streams are derived from
/// `(seed, pass, column, trial)`, so the result does not depend on the
/// thread count.
pub fn sparsify(a: &BitMatrix, trials_per_column: usize, passes: usize, seed: u64) -> Result<SparsifyResult> {
    if trials_per_column == 0 {
        return Err(Error::param("trials_per_column", "must be at least 1"));
    }
    if passes == 0 {
        return Err(Error::param("passes", "must be at least 1"));
    }
    require_full_column_rank(a)?;
    let mut sweep = Sweep::new(a);
    let cols = a.cols();
    let mut trials_used = 0;
    for pass in 0..passes {
        for j in 0..cols {
            let others = sweep.others(j);
            let refs: Vec<&[u64]> = others.iter().map(|&i| sweep.ap.cols[i].as_slice()).collect();
            let stream = rng::derive_seed(seed, &[pass as u64, j as u64]);
            let (_, resid) = best_residual(&refs, &sweep.ap.cols[j], sweep.n, trials_per_column, stream);
            trials_used += trials_per_column;
            sweep.apply(pass, j, &others, resid);
        }
        let d = sweep.density();
        sweep.pass_densities.push(d);
    }
    Ok(sweep.finish(a, trials_used, seed))
}

/// Sparsification with each column's Min-Unsatisfy solved exactly,
/// repeated until a full sweep makes no replacement.
pub fn sparsify_exhaustive(a: &BitMatrix) -> Result<SparsifyResult> {
    if a.cols() > EXHAUSTIVE_MAX_COLUMNS {
        return Err(Error::TooLarge(format!(
            "{} columns exceeds the exhaustive limit of {EXHAUSTIVE_MAX_COLUMNS}",
            a.cols()
        )));
    }
    require_full_column_rank(a)?;
    let mut sweep = Sweep::new(a);
    let cols = a.cols();
    let mut pass = 0;
    loop {
        let mut changed = false;
        for j in 0..cols {
            let others = sweep.others(j);
            let refs: Vec<&[u64]> = others.iter().map(|&i| sweep.ap.cols[i].as_slice()).collect();
            let (_, resid) = exhaustive_residual(&refs, &sweep.ap.cols[j]);
            changed |= sweep.apply(pass, j, &others, resid);
        }
        let d = sweep.density();
        sweep.pass_densities.push(d);
        pass += 1;
        if !changed {
            break;
        }
    }
    Ok(sweep.finish(a, 0, 0))
}

/// Reduced column-echelon form: some `(n-k)`-row subset of `A·P` becomes
/// the identity and the remaining rows are whatever elimination leaves.
pub fn gauss_baseline(a: &BitMatrix) -> Result<SparsifyResult> {
    require_full_column_rank(a)?;
    let (n, c) = (a.rows(), a.cols());
    // Row operations on [A^T | I] are column operations on A.
    let at = a.transpose();
    let mut aug = BitMatrix::zeros(c, n + c);
    for i in 0..c {
        for j in at.row(i).ones() {
            aug.put(i, j, true);
        }
        aug.put(i, n + i, true);
    }
    let pivots = aug.row_reduce();
    debug_assert!(pivots.iter().all(|&p| p < n));
    let mut ap_t = BitMatrix::zeros(c, n);
    let mut p_t = BitMatrix::zeros(c, c);
    for i in 0..c {
        for j in aug.row(i).ones() {
            if j < n {
                ap_t.put(i, j, true);
            } else {
                p_t.put(i, j - n, true);
            }
        }
    }
    let ap = ap_t.transpose();
    let p = p_t.transpose();
    debug_assert_eq!(a.mul(&p).unwrap(), ap);
    Ok(SparsifyResult {
        density: ap.density(),
        p,
        ap,
        trials_used: 0,
        seed: 0,
        log: Vec::new(),
        pass_densities: Vec::new(),
    })
}

/// `P` built column by column *without* sequencing: each column gets a unit
/// diagonal and the Min-Unsatisfy coefficients of `a_j` against the
/// original `A_{-j}`. Such a `P` need not be invertible.
pub fn independent_column_transform(a: &BitMatrix, trials: usize, seed: u64) -> Result<BitMatrix> {
    let cols = a.cols();
    if cols < 2 {
        return Ok(BitMatrix::identity(cols.max(1)));
    }
    let base = Columns::from_matrix(a);
    let mut p = BitMatrix::identity(cols);
    for j in 0..cols {
        let others: Vec<usize> = (0..cols).filter(|&i| i != j).collect();
        let refs: Vec<&[u64]> = others.iter().map(|&i| base.cols[i].as_slice()).collect();
        let (_, resid) = best_residual(
            &refs,
            &base.cols[j],
            a.rows(),
            trials,
            rng::derive_seed(seed, &[j as u64]),
        );
        let delta: Vec<u64> = resid.iter().zip(&base.cols[j]).map(|(r, c)| r ^ c).collect();
        let x = express(&refs, &delta).expect("residual lies in the coset");
        for (k, &i) in others.iter().enumerate() {
            if x[k] {
                p.put(i, j, true);
            }
        }
    }
    Ok(p)
}

/// A `size x size` matrix with unit diagonal and uniform off-diagonal bits.
pub fn random_unit_diagonal<R: Rng + ?Sized>(size: usize, rng: &mut R) -> BitMatrix {
    let mut p = BitMatrix::random(size, size, rng);
    for i in 0..size {
        p.put(i, i, true);
    }
    p
}

/// `prod_{i=1}^{size-1} (1 - 2^{-i})`.
pub fn unit_diagonal_invertible_probability(size: usize) -> f64 {
    (1..size).map(|i| 1.0 - 0.5f64.powi(i as i32)).product()
}
