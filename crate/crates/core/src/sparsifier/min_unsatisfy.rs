//! Min-Unsatisfy: given `A` and `b`, find `x` minimizing `wt(A·x + b)`.
//!
//! The randomized solver follows the information-set recipe: pick a random
//! set of `rank(A)` linearly independent rows, solve exactly on them, and
//! keep the candidate with the lightest residual. The exhaustive solver walks
//! every `x` in Gray-code order.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{popcount, test_bit, xor_words, BitMatrix, BitVec};
use crate::rng;

/// Best candidate found for one Min-Unsatisfy instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinUnsatisfy {
    pub x: BitVec,
    /// `wt(A·x + b)`.
    pub residual_weight: usize,
    /// The residual `A·x + b` itself.
    pub residual: BitVec,
}

/// Columns of a matrix as packed words, the working layout of the solvers.
#[derive(Clone, Debug)]
pub(crate) struct Columns {
    pub n: usize,
    pub cols: Vec<Vec<u64>>,
}

impl Columns {
    pub fn from_matrix(a: &BitMatrix) -> Self {
        let t = a.transpose();
        Columns {
            n: a.rows(),
            cols: (0..t.rows()).map(|j| t.row_words(j).to_vec()).collect(),
        }
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let rows: Vec<BitVec> = self
            .cols
            .iter()
            .map(|c| BitVec::from_words(self.n, c.clone()))
            .collect();
        BitMatrix::from_row_vecs(&rows).expect("nonempty").transpose()
    }

    pub fn weight(&self, j: usize) -> usize {
        popcount(&self.cols[j])
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| popcount(c)).sum()
    }
}

/// Residual of one information-set trial.
///
/// Rows are visited in `order`; each row that has a one in some not-yet-used
/// column pins that column as a pivot and eliminates the row from the
/// remaining columns and from the residual. The result is `b + A·x` for the
/// `x` that agrees with `b` on every pivot row.
pub(crate) fn info_set_residual(columns: &[&[u64]], target: &[u64], order: &[usize]) -> Vec<u64> {
    let mut work: Vec<Vec<u64>> = columns.iter().map(|c| c.to_vec()).collect();
    let mut resid = target.to_vec();
    let mut active = work.len();
    for &row in order {
        if active == 0 {
            break;
        }
        let Some(idx) = (0..active).find(|&c| test_bit(&work[c], row)) else {
            continue;
        };
        active -= 1;
        work.swap(idx, active);
        let (rest, pivot) = work.split_at_mut(active);
        let pivot = &pivot[0];
        for c in rest.iter_mut() {
            if test_bit(c, row) {
                xor_words(c, pivot);
            }
        }
        if test_bit(&resid, row) {
            xor_words(&mut resid, pivot);
        }
    }
    resid
}

fn trial_residual(columns: &[&[u64]], target: &[u64], n: usize, seed: u64, trial: u64) -> Vec<u64> {
    let mut r = rng::stream(seed, &[trial]);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    info_set_residual(columns, target, &order)
}

/// Best residual over `x = 0` and `trials` random information sets, as
/// `(trial index, residual)`; index 0 is the `x = 0` candidate.
///
/// Trials are evaluated in parallel; each uses its own stream derived from
/// `seed`, and ties go to the lowest trial index.
pub(crate) fn best_residual(
    columns: &[&[u64]],
    target: &[u64],
    n: usize,
    trials: usize,
    seed: u64,
) -> (usize, Vec<u64>) {
    let zero = (0usize, target.to_vec());
    if columns.is_empty() {
        return zero;
    }
    let best = (1..trials + 1)
        .into_par_iter()
        .with_min_len(4)
        .map(|t| (t, trial_residual(columns, target, n, seed, t as u64)))
        .min_by_key(|(t, r)| (popcount(r), *t));
    match best {
        Some(b) if popcount(&b.1) < popcount(&zero.1) => b,
        _ => zero,
    }
}

/// Exhaustive search over all `2^k` combinations in Gray-code order.
/// Returns `(x as an integer, residual)`; ties go to the smallest `x`.
pub(crate) fn exhaustive_residual(columns: &[&[u64]], target: &[u64]) -> (u64, Vec<u64>) {
    let k = columns.len();
    let mut acc = target.to_vec();
    let mut best = (popcount(&acc), 0u64);
    let mut gray = 0u64;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        xor_words(&mut acc, columns[bit]);
        let w = popcount(&acc);
        if w < best.0 || (w == best.0 && gray < best.1) {
            best = (w, gray);
        }
    }
    let x = best.1;
    let mut resid = target.to_vec();
    for (i, c) in columns.iter().enumerate() {
        if x >> i & 1 == 1 {
            xor_words(&mut resid, c);
        }
    }
    (x, resid)
}

pub(crate) const EXHAUSTIVE_MAX_UNKNOWNS: usize = 20;

fn recover_x(a: &BitMatrix, b: &BitVec, residual: &BitVec) -> BitVec {
    // residual = A·x + b, so A·x = residual + b is consistent by construction.
    a.solve(&residual.xor(b))
        .expect("dimensions checked")
        .expect("residual lies in the coset b + col(A)")
}

fn check_dims(a: &BitMatrix, b: &BitVec) -> Result<()> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} for a matrix with {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(())
}

/// Randomized Min-Unsatisfy with `trials` information-set draws plus the
/// `x = 0` candidate.
pub fn min_unsatisfy_randomized<R: Rng + ?Sized>(
    a: &BitMatrix,
    b: &BitVec,
    trials: usize,
    rng: &mut R,
) -> Result<MinUnsatisfy> {
    check_dims(a, b)?;
    if trials == 0 {
        return Err(Error::param("trials", "at least one trial is required"));
    }
    let cols = Columns::from_matrix(a);
    let refs: Vec<&[u64]> = cols.cols.iter().map(Vec::as_slice).collect();
    let seed = rng.random::<u64>();
    let (_, resid) = best_residual(&refs, b.words(), a.rows(), trials, seed);
    let residual = BitVec::from_words(a.rows(), resid);
    Ok(MinUnsatisfy {
        x: recover_x(a, b, &residual),
        residual_weight: residual.weight(),
        residual,
    })
}

/// Exact Min-Unsatisfy by enumeration; at most 20 unknowns.
pub fn min_unsatisfy_exhaustive(a: &BitMatrix, b: &BitVec) -> Result<MinUnsatisfy> {
    check_dims(a, b)?;
    if a.cols() > EXHAUSTIVE_MAX_UNKNOWNS {
        return Err(Error::TooLarge(format!(
            "{} unknowns exceeds the exhaustive limit of {EXHAUSTIVE_MAX_UNKNOWNS}",
            a.cols()
        )));
    }
    let cols = Columns::from_matrix(a);
    let refs: Vec<&[u64]> = cols.cols.iter().map(Vec::as_slice).collect();
    let (xi, resid) = exhaustive_residual(&refs, b.words());
    let mut x = BitVec::zeros(a.cols());
    for i in 0..a.cols() {
        if xi >> i & 1 == 1 {
            x.set(i, true);
        }
    }
    let residual = BitVec::from_words(a.rows(), resid);
    Ok(MinUnsatisfy {
        x,
        residual_weight: residual.weight(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn exact_solution_when_square_full_rank() {
        let mut r = seeded(1);
        for _ in 0..20 {
            let a = loop {
                let a = BitMatrix::random(10, 10, &mut r);
                if a.rank() == 10 {
                    break a;
                }
            };
            let b = BitVec::random(10, &mut r);
            let res = min_unsatisfy_randomized(&a, &b, 1, &mut r).unwrap();
            assert_eq!(res.residual_weight, 0);
            assert_eq!(a.mul_vec(&res.x).unwrap(), b);
        }
    }

    #[test]
    fn single_column_example() {
        let a = BitMatrix::from_rows(&[vec![1], vec![0], vec![0]]).unwrap();
        let b = BitVec::from_u8s(&[1, 1, 0]);
        // x = 0 leaves weight 2, x = 1 leaves weight 1
        let ex = min_unsatisfy_exhaustive(&a, &b).unwrap();
        assert_eq!((ex.x.to_u8s(), ex.residual_weight), (vec![1], 1));
        for trials in [1, 5, 50] {
            let res = min_unsatisfy_randomized(&a, &b, trials, &mut seeded(trials as u64)).unwrap();
            assert_eq!((res.x.to_u8s(), res.residual_weight), (vec![1], 1));
        }
    }

    #[test]
    fn never_worse_than_zero_candidate() {
        let mut r = seeded(2);
        for _ in 0..50 {
            let a = BitMatrix::random(15, 6, &mut r);
            let b = BitVec::bernoulli(15, 0.1, &mut r);
            let res = min_unsatisfy_randomized(&a, &b, 1, &mut r).unwrap();
            assert!(res.residual_weight <= b.weight());
            let check = a.mul_vec(&res.x).unwrap().xor(&b);
            assert_eq!(check.weight(), res.residual_weight);
        }
    }

    #[test]
    fn randomized_often_matches_exhaustive() {
        let mut r = seeded(3);
        let mut hits = 0;
        for _ in 0..100 {
            let a = BitMatrix::random(20, 8, &mut r);
            let b = BitVec::random(20, &mut r);
            // brute force over all 256 x
            let oracle = (0u32..256)
                .map(|xi| {
                    let x = BitVec::from_bits((0..8).map(|i| xi >> i & 1 == 1));
                    a.mul_vec(&x).unwrap().distance(&b)
                })
                .min()
                .unwrap();
            let res = min_unsatisfy_randomized(&a, &b, 200, &mut r).unwrap();
            assert!(res.residual_weight >= oracle);
            hits += usize::from(res.residual_weight == oracle);
        }
        assert!(hits >= 50, "randomized solver matched the optimum in {hits}/100");
    }

    #[test]
    fn exhaustive_prefers_smallest_x_on_ties() {
        // Both columns equal: x = 01 and x = 10 give the same residual.
        let a = BitMatrix::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        let b = BitVec::from_u8s(&[1, 0]);
        let ex = min_unsatisfy_exhaustive(&a, &b).unwrap();
        assert_eq!(ex.x.to_u8s(), vec![1, 0]);
        assert_eq!(ex.residual_weight, 0);
    }

    #[test]
    fn exhaustive_size_limit() {
        let a = BitMatrix::zeros(30, 21);
        assert!(matches!(
            min_unsatisfy_exhaustive(&a, &BitVec::zeros(30)),
            Err(Error::TooLarge(_))
        ));
    }
}
