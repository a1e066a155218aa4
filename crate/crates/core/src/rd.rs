//! Lossy compression of binary vectors with linear codes.
//!
//! [`rd_encode`] picks a random set of `nR` independent rows of the
//! generator, solves exactly on those rows and returns the resulting
//! codeword; it agrees with the source on every chosen row.
//! [`nearest_codeword_exhaustive`] is the brute-force reference.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::sparsifier::Columns;

/// A binary linear code `{C·x}` given by a full-column-rank `n x nR`
/// generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
}

impl LinearCode {
    pub fn new(generator: BitMatrix) -> Result<Self> {
        let rank = generator.rank();
        if rank < generator.cols() {
            return Err(Error::RankDeficient {
                rank,
                expected: generator.cols(),
            });
        }
        Ok(LinearCode { generator })
    }

    /// Uniform i.i.d. generator, redrawn until it has full column rank.
    pub fn random<R: Rng + ?Sized>(n: usize, dimension: usize, rng: &mut R) -> Result<Self> {
        if dimension == 0 || dimension > n {
            return Err(Error::param(
                "dimension",
                format!("need 1 <= nR <= n, got nR={dimension}, n={n}"),
            ));
        }
        loop {
            let c = BitMatrix::random(n, dimension, rng);
            if c.rank() == dimension {
                return Ok(LinearCode { generator: c });
            }
        }
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn len(&self) -> usize {
        self.generator.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dimension(&self) -> usize {
        self.generator.cols()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.len() as f64
    }

    pub fn encode(&self, x: &BitVec) -> Result<BitVec> {
        self.generator.mul_vec(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdEncoding {
    pub x: BitVec,
    pub codeword: BitVec,
    /// Hamming distance between the codeword and the source.
    pub distortion: usize,
    /// Rows on which the codeword was pinned to the source; empty for the
    /// exhaustive search.
    pub rows: Vec<usize>,
}

/// Shuffles the rows and greedily keeps those that raise the rank.
pub fn random_independent_rows<R: Rng + ?Sized>(c: &BitMatrix, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.rows()).collect();
    order.shuffle(rng);
    let target = c.cols();
    // Echelon basis of accepted rows as (vector, pivot column).
    let mut basis: Vec<(BitVec, usize)> = Vec::with_capacity(target);
    let mut chosen = Vec::with_capacity(target);
    for i in order {
        if chosen.len() == target {
            break;
        }
        let mut v = c.row(i);
        for (bv, piv) in &basis {
            if v.get(*piv) {
                v.xor_assign(bv);
            }
        }
        let lead = v.ones().next();
        if let Some(piv) = lead {
            basis.push((v, piv));
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

fn check_source(code: &LinearCode, b: &BitVec) -> Result<()> {
    if b.len() != code.len() {
        return Err(Error::DimensionMismatch(format!(
            "source of length {} for a code of length {}",
            b.len(),
            code.len()
        )));
    }
    Ok(())
}

/// One randomized draw: a random independent row set `I`, then
/// `C(I,:)·x = b(I)` solved exactly.
pub fn rd_encode<R: Rng + ?Sized>(code: &LinearCode, b: &BitVec, rng: &mut R) -> Result<RdEncoding> {
    check_source(code, b)?;
    let rows = random_independent_rows(&code.generator, rng);
    encode_on_rows(code, b, rows)
}

/// Solves on a caller-chosen independent row set.
pub fn encode_on_rows(code: &LinearCode, b: &BitVec, rows: Vec<usize>) -> Result<RdEncoding> {
    check_source(code, b)?;
    if rows.len() != code.dimension() {
        return Err(Error::param(
            "rows",
            format!("need {} rows, got {}", code.dimension(), rows.len()),
        ));
    }
    let sub = code.generator.select_rows(&rows);
    let rhs = BitVec::from_bits(rows.iter().map(|&i| b.get(i)));
    let x = sub
        .solve(&rhs)?
        .ok_or_else(|| Error::param("rows", "row set is not independent"))?;
    let codeword = code.encode(&x)?;
    let distortion = codeword.distance(b);
    Ok(RdEncoding {
        x,
        codeword,
        distortion,
        rows,
    })
}

/// Best of `draws` sequential calls to [`rd_encode`] on the same stream;
/// ties keep the earliest draw.
pub fn rd_encode_multi<R: Rng + ?Sized>(
    code: &LinearCode,
    b: &BitVec,
    draws: usize,
    rng: &mut R,
) -> Result<RdEncoding> {
    if draws == 0 {
        return Err(Error::param("draws", "at least one draw is required"));
    }
    let mut best = rd_encode(code, b, rng)?;
    for _ in 1..draws {
        let next = rd_encode(code, b, rng)?;
        if next.distortion < best.distortion {
            best = next;
        }
    }
    Ok(best)
}

pub const EXHAUSTIVE_MAX_DIMENSION: usize = 20;

/// Exact nearest codeword over all `2^nR` messages; ties go to the smallest
/// `x` read as an integer (bit `i` = coefficient of column `i`).
pub fn nearest_codeword_exhaustive(code: &LinearCode, b: &BitVec) -> Result<RdEncoding> {
    check_source(code, b)?;
    let k = code.dimension();
    if k > EXHAUSTIVE_MAX_DIMENSION {
        return Err(Error::TooLarge(format!(
            "dimension {k} exceeds the exhaustive limit of {EXHAUSTIVE_MAX_DIMENSION}"
        )));
    }
    let cols = Columns::from_matrix(&code.generator);
    let refs: Vec<&[u64]> = cols.cols.iter().map(Vec::as_slice).collect();
    let (xi, residual) = crate::sparsifier::exhaustive_search(&refs, b);
    let x = BitVec::from_bits((0..k).map(|i| xi >> i & 1 == 1));
    let codeword = residual.xor(b);
    Ok(RdEncoding {
        x,
        distortion: residual.weight(),
        codeword,
        rows: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::sparsifier::distortion_rate;

    #[test]
    fn square_code_reproduces_source() {
        let mut r = seeded(1);
        let code = LinearCode::random(12, 12, &mut r).unwrap();
        let b = BitVec::random(12, &mut r);
        let enc = rd_encode(&code, &b, &mut r).unwrap();
        assert_eq!(enc.codeword, b);
        assert_eq!(enc.distortion, 0);
    }

    #[test]
    fn systematic_code_on_top_rows() {
        let code = LinearCode::new(BitMatrix::identity_extended(8, 3)).unwrap();
        let b = BitVec::from_u8s(&[1, 0, 1, 1, 1, 0, 0, 1]);
        let enc = encode_on_rows(&code, &b, vec![0, 1, 2]).unwrap();
        assert_eq!(enc.codeword.to_u8s(), vec![1, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(enc.distortion, 3);
        // any draw must pick exactly the top rows
        let enc = rd_encode(&code, &b, &mut seeded(4)).unwrap();
        assert_eq!(enc.rows, vec![0, 1, 2]);
    }

    #[test]
    fn codeword_membership_and_agreement() {
        let mut r = seeded(2);
        for _ in 0..50 {
            let code = LinearCode::random(24, 10, &mut r).unwrap();
            let b = BitVec::random(24, &mut r);
            let enc = rd_encode(&code, &b, &mut r).unwrap();
            assert_eq!(code.encode(&enc.x).unwrap(), enc.codeword);
            for &i in &enc.rows {
                assert_eq!(enc.codeword.get(i), b.get(i));
            }
            assert!(enc.distortion <= 24 - 10);
        }
    }

    #[test]
    fn exhaustive_examples() {
        let mut r = seeded(3);
        let code = LinearCode::random(16, 6, &mut r).unwrap();
        let x = BitVec::random(6, &mut r);
        let b = code.encode(&x).unwrap();
        assert_eq!(nearest_codeword_exhaustive(&code, &b).unwrap().distortion, 0);

        let rep = LinearCode::new(BitMatrix::from_rows(&vec![vec![1]; 9]).unwrap()).unwrap();
        for w in 0..=9 {
            let b = BitVec::from_bits((0..9).map(|i| i < w));
            assert_eq!(nearest_codeword_exhaustive(&rep, &b).unwrap().distortion, w.min(9 - w));
        }
    }

    #[test]
    fn multi_draw_degenerate_and_monotone() {
        let mut r = seeded(5);
        let code = LinearCode::random(20, 10, &mut r).unwrap();
        let b = BitVec::random(20, &mut r);
        let one = rd_encode(&code, &b, &mut seeded(77)).unwrap();
        let multi = rd_encode_multi(&code, &b, 1, &mut seeded(77)).unwrap();
        assert_eq!(one, multi);
        let mut prev = usize::MAX;
        for draws in [1, 2, 4, 8, 16, 64] {
            let d = rd_encode_multi(&code, &b, draws, &mut seeded(77)).unwrap().distortion;
            assert!(d <= prev);
            prev = d;
        }
        assert!(rd_encode_multi(&code, &b, 0, &mut r).is_err());
    }

    #[test]
    fn many_draws_match_exhaustive() {
        let mut r = seeded(6);
        let mut hits = 0;
        for _ in 0..100 {
            let code = LinearCode::random(20, 10, &mut r).unwrap();
            let b = BitVec::random(20, &mut r);
            let best = nearest_codeword_exhaustive(&code, &b).unwrap().distortion;
            let got = rd_encode_multi(&code, &b, 1024 * 10, &mut r).unwrap().distortion;
            assert!(got >= best);
            hits += usize::from(got == best);
        }
        assert!(hits >= 90, "{hits}/100");
    }

    #[test]
    fn exhaustive_distortion_near_distortion_rate() {
        let mut r = seeded(7);
        let mean = (0..200)
            .map(|_| {
                let code = LinearCode::random(20, 10, &mut r).unwrap();
                let b = BitVec::random(20, &mut r);
                nearest_codeword_exhaustive(&code, &b).unwrap().distortion as f64 / 20.0
            })
            .sum::<f64>()
            / 200.0;
        let d = distortion_rate(0.5).unwrap();
        // measured gap at n = 20 is about +0.045
        assert!(mean >= d - 0.04 && mean <= d + 0.06, "mean {mean} vs D(0.5) {d}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LinearCode::new(BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap()).is_err());
        let code = LinearCode::new(BitMatrix::identity(3)).unwrap();
        assert!(rd_encode(&code, &BitVec::zeros(4), &mut seeded(1)).is_err());
        let big = LinearCode::new(BitMatrix::identity(21)).unwrap();
        assert!(matches!(
            nearest_codeword_exhaustive(&big, &BitVec::zeros(21)),
            Err(Error::TooLarge(_))
        ));
    }
}
