//! Monte Carlo estimates of the entry statistics of `H·B` for a
//! Bernoulli(`lambda/n`) matrix `H`.

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::rng;

/// An empirical frequency with its binomial standard deviation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub sigma: f64,
    pub samples: usize,
}

impl Estimate {
    fn from_count(hits: usize, samples: usize) -> Self {
        let mean = hits as f64 / samples as f64;
        Estimate {
            mean,
            sigma: (mean * (1.0 - mean) / samples as f64).sqrt(),
            samples,
        }
    }

    /// `|mean - value| <= k·sigma`, with a floor of one sample's worth of
    /// slack so degenerate zero-variance estimates still compare sensibly.
    pub fn within(&self, value: f64, k: f64) -> bool {
        let slack = (k * self.sigma).max(1.0 / self.samples as f64);
        (self.mean - value).abs() <= slack
    }
}

fn check(n: usize, lambda: f64, resamples: usize) -> Result<f64> {
    if resamples == 0 {
        return Err(Error::param("resamples", "at least one resample is required"));
    }
    if !(lambda > 0.0 && lambda <= n as f64 / 2.0) {
        return Err(Error::param("lambda", format!("need 0 < lambda <= n/2, got {lambda}")));
    }
    Ok(lambda / n as f64)
}

/// Random column of length `len` and weight `l`.
pub fn random_column<R: Rng + ?Sized>(len: usize, l: usize, rng: &mut R) -> Result<BitVec> {
    if l > len {
        return Err(Error::param("l", format!("weight {l} exceeds length {len}")));
    }
    let mut b = BitVec::zeros(len);
    for i in sample(rng, len, l) {
        b.set(i, true);
    }
    Ok(b)
}

/// Frequency of `(H·b)(0) = 0` over fresh draws of the first row of an
/// `n x len(b)` matrix `H`.
pub fn entry_zero_frequency(n: usize, lambda: f64, b: &BitVec, resamples: usize, seed: u64) -> Result<Estimate> {
    let p = check(n, lambda, resamples)?;
    let mut r = rng::seeded(seed);
    let zeros = (0..resamples)
        .filter(|_| !BitVec::bernoulli(b.len(), p, &mut r).dot(b))
        .count();
    Ok(Estimate::from_count(zeros, resamples))
}

/// Frequency of `(H·b1)(0) != (H·b2)(0)`.
pub fn entry_difference_frequency(
    n: usize,
    lambda: f64,
    b1: &BitVec,
    b2: &BitVec,
    resamples: usize,
    seed: u64,
) -> Result<Estimate> {
    let p = check(n, lambda, resamples)?;
    if b1.len() != b2.len() {
        return Err(Error::DimensionMismatch("columns of different length".into()));
    }
    let mut r = rng::seeded(seed);
    let differ = (0..resamples)
        .filter(|_| {
            let row = BitVec::bernoulli(b1.len(), p, &mut r);
            row.dot(b1) != row.dot(b2)
        })
        .count();
    Ok(Estimate::from_count(differ, resamples))
}

/// One draw of `H·B` with `H` of size `n x B.rows()`.
pub fn sample_hb<R: Rng + ?Sized>(n: usize, lambda: f64, b: &BitMatrix, rng: &mut R) -> Result<BitMatrix> {
    let p = check(n, lambda, 1)?;
    let h = if p == 0.5 {
        BitMatrix::random(n, b.rows(), rng)
    } else {
        BitMatrix::bernoulli(n, b.rows(), p, rng)
    };
    h.mul(b)
}

/// Pearson correlation of two 0/1 sequences; 0 when either is constant.
pub fn correlation(a: &[bool], b: &[bool]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().filter(|&&x| x).count() as f64 / n;
    let mb = b.iter().filter(|&&x| x).count() as f64 / n;
    let both = a.iter().zip(b).filter(|(&x, &y)| x && y).count() as f64 / n;
    let denom = (ma * (1.0 - ma) * mb * (1.0 - mb)).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        (both - ma * mb) / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::syndrome::entry_zero_prob;

    fn full_rank_b(size: usize, r: &mut impl Rng) -> BitMatrix {
        loop {
            let b = BitMatrix::random(size, size, r);
            if b.rank() == size {
                return b;
            }
        }
    }

    #[test]
    fn zero_frequency_matches_formula() {
        let mut r = seeded(1);
        for (n, lambda, l) in [(256, 3.0, 128), (256, 3.0, 6), (256, 128.0, 40)] {
            let b = random_column(n, l, &mut r).unwrap();
            let est = entry_zero_frequency(n, lambda, &b, 4000, 7).unwrap();
            assert!(
                est.within(entry_zero_prob(lambda, l, n), 3.0),
                "{n} {lambda} {l}: {est:?}"
            );
        }
    }

    #[test]
    fn rows_of_a_column_are_uncorrelated() {
        let mut r = seeded(2);
        let b = full_rank_b(24, &mut r);
        let (mut a0, mut a1) = (Vec::new(), Vec::new());
        for _ in 0..3000 {
            let hb = sample_hb(48, 4.0, &b, &mut r).unwrap();
            a0.push(hb.get(0, 5).unwrap());
            a1.push(hb.get(1, 5).unwrap());
        }
        assert!(correlation(&a0, &a1).abs() < 3.0 / (3000f64).sqrt());
    }

    #[test]
    fn uniform_h_gives_uniform_entries() {
        let mut r = seeded(3);
        let b = full_rank_b(24, &mut r);
        let (mut e, mut f) = (Vec::new(), Vec::new());
        for _ in 0..3000 {
            let hb = sample_hb(48, 24.0, &b, &mut r).unwrap();
            e.push(hb.get(3, 2).unwrap());
            f.push(hb.get(3, 7).unwrap());
        }
        let ones = e.iter().filter(|&&x| x).count();
        assert!(Estimate::from_count(ones, 3000).within(0.5, 3.0));
        assert!(correlation(&e, &f).abs() < 3.0 / (3000f64).sqrt());
    }

    #[test]
    fn near_duplicate_columns_rarely_differ() {
        let mut r = seeded(4);
        let (n, lambda) = (512, 2.0);
        let b1 = random_column(n, 200, &mut r).unwrap();
        let mut b2 = b1.clone();
        for i in 0..5 {
            b2.flip(i * 97);
        }
        let est = entry_difference_frequency(n, lambda, &b1, &b2, 5000, 8).unwrap();
        let bound = 1.0 - entry_zero_prob(lambda, b1.distance(&b2), n);
        assert!(
            est.mean <= bound + 3.0 * est.sigma.max(1.0 / 5000.0),
            "{est:?} vs {bound}"
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        let b = BitVec::zeros(4);
        assert!(entry_zero_frequency(8, 5.0, &b, 10, 1).is_err());
        assert!(entry_zero_frequency(8, 1.0, &b, 0, 1).is_err());
        assert!(random_column(4, 5, &mut seeded(1)).is_err());
    }
}
