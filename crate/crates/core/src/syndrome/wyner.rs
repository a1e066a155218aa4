//! Syndrome source coding with side information through a BSC.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::rng;
use crate::sparsifier::binary_entropy;
use crate::syndrome::bp::{BpConfig, TannerGraph};

/// `Y = X xor E` with `Pr(E = 1) = p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BscModel {
    p: f64,
}

impl BscModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::param("p", format!("crossover must lie in [0, 1/2], got {p}")));
        }
        Ok(BscModel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `H(X|Y)` for a uniform source.
    pub fn conditional_entropy(&self) -> f64 {
        binary_entropy(self.p).expect("p validated")
    }

    pub fn sample_error<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> BitVec {
        BitVec::bernoulli(n, self.p, rng)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BerResult {
    pub bit_errors: u64,
    pub bits: u64,
    pub ber: f64,
    pub blocks: u64,
    /// Blocks where BP itself reached the syndrome.
    pub converged_blocks: u64,
}

impl BerResult {
    pub fn converged_fraction(&self) -> f64 {
        if self.blocks == 0 {
            0.0
        } else {
            self.converged_blocks as f64 / self.blocks as f64
        }
    }

    /// Binomial standard deviation of `ber`.
    pub fn sigma(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            (self.ber * (1.0 - self.ber) / self.bits as f64).sqrt()
        }
    }
}

/// What the decoder returns for one block: `(e_hat, converged)`.
pub type BlockDecoder<'a> = dyn Fn(&BitVec, &BitVec) -> Result<(BitVec, bool)> + Sync + 'a;

/// Runs `blocks` blocks through the Wyner scheme with a caller-supplied
/// decoder, which sees the syndrome `e·H` and, for oracle experiments,
/// the true `e`.
///
/// Block `i` draws `x` and `e` from its own stream derived from `seed`.
pub fn wyner_pipeline_with(
    h: &BitMatrix,
    p: f64,
    seed: u64,
    blocks: usize,
    decode: &BlockDecoder,
) -> Result<BerResult> {
    let model = BscModel::new(p)?;
    let n = h.rows();
    let per_block: Vec<(u64, bool)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut r = rng::stream(seed, &[b as u64]);
            let x = BitVec::random(n, &mut r);
            let e = model.sample_error(n, &mut r);
            let y = x.xor(&e);
            // what the encoder sends and what the decoder can compute
            let sx = h.vec_mul(&x)?;
            let sy = h.vec_mul(&y)?;
            let (e_hat, converged) = decode(&sx.xor(&sy), &e)?;
            let x_hat = y.xor(&e_hat);
            Ok((x_hat.distance(&x) as u64, converged))
        })
        .collect::<Result<_>>()?;
    let bit_errors = per_block.iter().map(|b| b.0).sum();
    let bits = (blocks * n) as u64;
    Ok(BerResult {
        bit_errors,
        bits,
        ber: if bits == 0 {
            0.0
        } else {
            bit_errors as f64 / bits as f64
        },
        blocks: blocks as u64,
        converged_blocks: per_block.iter().filter(|b| b.1).count() as u64,
    })
}

/// Wyner scheme with BP decoding; `p = 0` needs no decoder since every
/// syndrome is zero.
pub fn wyner_pipeline(h: &BitMatrix, p: f64, seed: u64, blocks: usize, cfg: &BpConfig) -> Result<BerResult> {
    let graph = TannerGraph::new(h);
    // decode assuming a tiny crossover when the channel is noiseless
    let p_dec = p.max(1e-9);
    let decode = |s: &BitVec, _e: &BitVec| -> Result<(BitVec, bool)> {
        let d = graph.decode(s, p_dec, cfg)?;
        Ok((d.e_hat, d.converged))
    };
    wyner_pipeline_with(h, p, seed, blocks, &decode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::syndrome::matrices::structured_ldpc;

    #[test]
    fn noiseless_channel_has_no_errors() {
        let h = structured_ldpc(100, &mut seeded(1)).unwrap();
        let res = wyner_pipeline(&h, 0.0, 7, 50, &BpConfig::default()).unwrap();
        assert_eq!(res.bit_errors, 0);
        assert_eq!(res.ber, 0.0);
        assert_eq!(res.converged_blocks, 50);
    }

    #[test]
    fn oracle_decoder_is_exact() {
        let h = BitMatrix::random(40, 10, &mut seeded(2));
        let oracle = |_: &BitVec, e: &BitVec| Ok((e.clone(), true));
        let res = wyner_pipeline_with(&h, 0.3, 3, 40, &oracle).unwrap();
        assert_eq!(res.bit_errors, 0);
        assert_eq!(res.bits, 1600);
    }

    #[test]
    fn zero_decoder_counts_channel_errors() {
        let h = BitMatrix::random(40, 10, &mut seeded(2));
        let zero = |_: &BitVec, _: &BitVec| Ok((BitVec::zeros(40), false));
        let res = wyner_pipeline_with(&h, 0.2, 4, 500, &zero).unwrap();
        assert!((res.ber - 0.2).abs() < 3.0 * (0.2f64 * 0.8 / 20000.0).sqrt());
        assert_eq!(res.converged_fraction(), 0.0);
    }

    #[test]
    fn ber_grows_with_p() {
        let h = structured_ldpc(200, &mut seeded(5)).unwrap();
        let cfg = BpConfig::default();
        let bers: Vec<BerResult> = [0.01, 0.03, 0.06, 0.12]
            .iter()
            .map(|&p| wyner_pipeline(&h, p, 11, 500, &cfg).unwrap())
            .collect();
        for w in bers.windows(2) {
            assert!(w[0].ber <= w[1].ber + 3.0 * (w[0].sigma() + w[1].sigma()), "{bers:?}");
        }
    }

    #[test]
    fn bsc_model() {
        assert!(BscModel::new(0.6).is_err());
        assert_eq!(BscModel::new(0.5).unwrap().conditional_entropy(), 1.0);
        assert_eq!(BscModel::new(0.0).unwrap().conditional_entropy(), 0.0);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let h = structured_ldpc(100, &mut seeded(6)).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| wyner_pipeline(&h, 0.05, 9, 64, &BpConfig::default()).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
