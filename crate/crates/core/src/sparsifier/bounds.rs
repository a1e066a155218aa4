//! Rate-distortion quantities for the uniform binary source under Hamming
//! distortion.

use crate::error::{Error, Result};

/// Base-2 binary entropy, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(entropy_unchecked(p))
}

pub(crate) fn entropy_unchecked(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

pub const DISTORTION_TOLERANCE: f64 = 1e-12;

/// `D(R)`: the unique `D` in `[0, 1/2]` with `1 - h(D) = R`, by bisection.
pub fn distortion_rate(rate: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::param("rate", format!("rate must lie in [0, 1], got {rate}")));
    }
    if rate >= 1.0 {
        return Ok(0.0);
    }
    if rate <= 0.0 {
        return Ok(0.5);
    }
    // 1 - h(D) decreases on [0, 1/2].
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > DISTORTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if 1.0 - entropy_unchecked(mid) > rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `R(D) = 1 - h(D)` for `D` in `[0, 1/2]`, zero beyond.
pub fn rate_distortion(d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::param("d", format!("distortion must lie in [0, 1], got {d}")));
    }
    Ok(if d >= 0.5 { 0.0 } else { 1.0 - entropy_unchecked(d) })
}

/// A point on the distortion-rate curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePoint {
    pub rate: f64,
    pub distortion: f64,
}

impl RatePoint {
    pub fn at_rate(rate: f64) -> Result<Self> {
        Ok(RatePoint {
            rate,
            distortion: distortion_rate(rate)?,
        })
    }
}

/// Whether `(n-k)/n >= 1 - h(D) + 2 log2(n)/n + 1/n`, the sufficient
/// condition for an invertible `P` with every column of `AP` of weight at
/// most `nD` on a uniform i.i.d. `A`.
pub fn lemma2_feasible(n: usize, k: usize, d: f64) -> Result<bool> {
    if !(0.0..=0.5).contains(&d) {
        return Err(Error::param("d", format!("distortion must lie in [0, 1/2], got {d}")));
    }
    if n == 0 || k > n {
        return Err(Error::param("n", format!("need n >= 1 and k <= n, got n={n}, k={k}")));
    }
    let nf = n as f64;
    let lhs = (n - k) as f64 / nf;
    let rhs = 1.0 - entropy_unchecked(d) + 2.0 * nf.log2() / nf + 1.0 / nf;
    Ok(lhs >= rhs)
}

/// Standard deviation of the mean of `cells` Bernoulli(`d`) bits.
pub fn binomial_sigma(d: f64, cells: usize) -> f64 {
    (d * (1.0 - d) / cells as f64).sqrt()
}

/// Expected density of the Gauss-elimination baseline on a uniform i.i.d.
/// `n x (n-k)` matrix: the identity block plus a uniform `k x (n-k)` block.
pub fn gauss_expected_density(n: usize, k: usize) -> f64 {
    1.0 / n as f64 + k as f64 / (2.0 * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -0.11 log2 0.11 - 0.89 log2 0.89
        let direct = 0.11 * (1.0f64 / 0.11).log2() + 0.89 * (1.0f64 / 0.89).log2();
        let h = binary_entropy(0.11).unwrap();
        assert!((h - direct).abs() < 1e-15);
        assert!((h - 0.499_915_958).abs() < 1e-8);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn distortion_rate_examples() {
        assert_eq!(distortion_rate(1.0).unwrap(), 0.0);
        assert_eq!(distortion_rate(0.0).unwrap(), 0.5);
        let d = distortion_rate(0.8).unwrap();
        assert!((binary_entropy(d).unwrap() - 0.2).abs() < 1e-10);
        assert!((d - 0.0311).abs() < 1e-3);
        assert!(distortion_rate(1.2).is_err());
        assert!(distortion_rate(-0.2).is_err());
    }

    #[test]
    fn distortion_rate_is_monotone() {
        let mut prev = 0.5;
        for i in 0..=100 {
            let d = distortion_rate(i as f64 / 100.0).unwrap();
            assert!(d <= prev + 1e-15);
            prev = d;
        }
    }

    #[test]
    fn lemma2_examples() {
        assert!(lemma2_feasible(1024, 0, 0.01).unwrap());
        assert!(!lemma2_feasible(64, 60, 0.05).unwrap());
        // D = 1/2: right side is (2 log n + 1)/n
        let n = 256;
        let need = (2.0 * (n as f64).log2() + 1.0).ceil() as usize;
        assert!(lemma2_feasible(n, n - need, 0.5).unwrap());
        assert!(lemma2_feasible(64, 0, 0.6).is_err());
    }
}
