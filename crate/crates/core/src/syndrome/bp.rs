//! Syndrome-adapted sum-product decoding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BpConfig {
    pub max_iter: usize,
    /// Weight of the previous check message, 0 for none.
    pub damping: f64,
    /// Finish undecoded blocks with an order-0 ordered-statistics pass so the
    /// output always matches the syndrome.
    pub osd_fallback: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            max_iter: 50,
            damping: 0.0,
            osd_fallback: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub e_hat: BitVec,
    /// BP itself reached the syndrome.
    pub converged: bool,
    pub iterations: usize,
    pub used_osd: bool,
}

impl Decoded {
    /// `e_hat·H` equals the syndrome.
    pub fn satisfied(&self) -> bool {
        self.converged || self.used_osd
    }
}

/// Tanner graph of `H`, checks stored as CSR over the columns.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    n: usize,
    check_ptr: Vec<usize>,
    /// Variable of each edge, edges grouped by check.
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    /// Edges grouped by variable.
    var_edges: Vec<usize>,
    h: BitMatrix,
}

impl TannerGraph {
    pub fn new(h: &BitMatrix) -> Self {
        let ht = h.transpose();
        let mut check_ptr = vec![0];
        let mut edge_var = Vec::with_capacity(h.nnz());
        for c in 0..ht.rows() {
            edge_var.extend(ht.row(c).ones());
            check_ptr.push(edge_var.len());
        }
        let n = h.rows();
        let mut deg = vec![0usize; n];
        for &v in &edge_var {
            deg[v] += 1;
        }
        let mut var_ptr = vec![0; n + 1];
        for v in 0..n {
            var_ptr[v + 1] = var_ptr[v] + deg[v];
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        TannerGraph {
            n,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
            h: h.clone(),
        }
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    fn satisfies(&self, e: &[bool], syndrome: &BitVec) -> bool {
        (0..self.checks()).all(|c| {
            let par = self.edge_var[self.check_ptr[c]..self.check_ptr[c + 1]]
                .iter()
                .fold(false, |acc, &v| acc ^ e[v]);
            par == syndrome.get(c)
        })
    }

    /// Decodes the minimum-cost error pattern for `syndrome` under BSC(`p`).
    pub fn decode(&self, syndrome: &BitVec, p: f64, cfg: &BpConfig) -> Result<Decoded> {
        if syndrome.len() != self.checks() {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} for {} checks",
                syndrome.len(),
                self.checks()
            )));
        }
        if !(0.0..1.0).contains(&cfg.damping) {
            return Err(Error::param(
                "damping",
                format!("must lie in [0, 1), got {}", cfg.damping),
            ));
        }
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::param("p", format!("crossover must lie in (0, 1/2), got {p}")));
        }
        let n = self.n;
        let mut hard = vec![false; n];
        if self.satisfies(&hard, syndrome) {
            return Ok(Decoded {
                e_hat: BitVec::zeros(n),
                converged: true,
                iterations: 0,
                used_osd: false,
            });
        }
        let prior = ((1.0 - p) / p).ln();
        let edges = self.edge_var.len();
        let mut q = vec![prior; edges];
        let mut r = vec![0.0f64; edges];
        let mut total = vec![prior; n];
        let mut r_prev = vec![0.0f64; if cfg.damping > 0.0 { edges } else { 0 }];
        let mut scratch = Vec::new();
        for it in 1..=cfg.max_iter {
            for c in 0..self.checks() {
                let (lo, hi) = (self.check_ptr[c], self.check_ptr[c + 1]);
                let sign = if syndrome.get(c) { -1.0 } else { 1.0 };
                // products excluding each edge via prefix and suffix passes
                scratch.clear();
                scratch.extend(q[lo..hi].iter().map(|&x| (0.5 * x).tanh()));
                let mut prefix = 1.0;
                for (k, e) in (lo..hi).enumerate() {
                    r[e] = prefix;
                    prefix *= scratch[k];
                }
                let mut suffix = 1.0;
                for (k, e) in (lo..hi).enumerate().rev() {
                    let prod = (r[e] * suffix).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                    suffix *= scratch[k];
                    let msg = sign * 2.0 * prod.atanh();
                    r[e] = msg;
                }
            }
            if cfg.damping > 0.0 && it > 1 {
                for (rv, &old) in r.iter_mut().zip(&r_prev) {
                    *rv = (1.0 - cfg.damping) * *rv + cfg.damping * old;
                }
            }
            if cfg.damping > 0.0 {
                r_prev.copy_from_slice(&r);
            }
            for v in 0..n {
                let es = &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]];
                let t = prior + es.iter().map(|&e| r[e]).sum::<f64>();
                total[v] = t;
                hard[v] = t < 0.0;
                for &e in es {
                    q[e] = t - r[e];
                }
            }
            if self.satisfies(&hard, syndrome) {
                return Ok(Decoded {
                    e_hat: BitVec::from_bits(hard.iter().copied()),
                    converged: true,
                    iterations: it,
                    used_osd: false,
                });
            }
        }
        if cfg.osd_fallback {
            if let Some(e_hat) = self.osd0(syndrome, &total) {
                return Ok(Decoded {
                    e_hat,
                    converged: false,
                    iterations: cfg.max_iter,
                    used_osd: true,
                });
            }
        }
        Ok(Decoded {
            e_hat: BitVec::from_bits(hard.iter().copied()),
            converged: false,
            iterations: cfg.max_iter,
            used_osd: false,
        })
    }

    /// Keeps the hard decision on the most reliable variables and solves
    /// for an independent set of the least reliable ones.
    fn osd0(&self, syndrome: &BitVec, llr: &[f64]) -> Option<BitVec> {
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| llr[a].abs().total_cmp(&llr[b].abs()).then(a.cmp(&b)));
        // Columns of H^T in reliability order: rows of H permuted.
        let perm = self.h.select_rows(&order);
        let pt = perm.transpose();
        let mut hard = BitVec::from_bits(llr.iter().map(|&l| l < 0.0));
        // Clear the positions we solve for, then fix the rest.
        let mut aug = pt.clone();
        let pivots = aug.row_reduce();
        for &pc in &pivots {
            hard.set(order[pc], false);
        }
        let residual = self.h.vec_mul(&hard).ok()?.xor(syndrome);
        let sub = pt.select_columns(&pivots);
        let y = sub.solve(&residual).ok()??;
        for (k, &pc) in pivots.iter().enumerate() {
            if y.get(k) {
                hard.set(order[pc], true);
            }
        }
        debug_assert_eq!(self.h.vec_mul(&hard).ok()?, *syndrome);
        Some(hard)
    }
}

/// One-shot decode; build a [`TannerGraph`] once when decoding many blocks.
pub fn bp_decode(h: &BitMatrix, syndrome: &BitVec, p: f64, cfg: &BpConfig) -> Result<Decoded> {
    TannerGraph::new(h).decode(syndrome, p, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::syndrome::matrices::structured_ldpc;

    #[test]
    fn zero_syndrome_is_immediate() {
        let h = BitMatrix::random(20, 8, &mut seeded(1));
        let d = bp_decode(&h, &BitVec::zeros(8), 0.1, &BpConfig::default()).unwrap();
        assert!(d.e_hat.is_zero());
        assert!(d.converged);
        assert_eq!(d.iterations, 0);
    }

    #[test]
    fn single_check_gives_weight_one() {
        let mut h = BitMatrix::zeros(6, 1);
        for i in [1, 3, 4] {
            h.set(i, 0, true).unwrap();
        }
        let s = BitVec::from_u8s(&[1]);
        let d = bp_decode(&h, &s, 0.05, &BpConfig::default()).unwrap();
        assert_eq!(h.vec_mul(&d.e_hat).unwrap(), s);
        assert_eq!(d.e_hat.weight(), 1);
        // exhaustive minimum-weight coset leader has weight 1
        let leader = (0u32..64)
            .map(|b| BitVec::from_bits((0..6).map(|i| b >> i & 1 == 1)))
            .filter(|e| h.vec_mul(e).unwrap() == s)
            .map(|e| e.weight())
            .min()
            .unwrap();
        assert_eq!(leader, 1);
        let plain = BpConfig {
            osd_fallback: false,
            ..BpConfig::default()
        };
        assert!(!bp_decode(&h, &s, 0.05, &plain).unwrap().satisfied());
    }

    #[test]
    fn structured_code_decodes_light_errors() {
        let mut r = seeded(2);
        let h = structured_ldpc(100, &mut r).unwrap();
        let g = TannerGraph::new(&h);
        let mut ok = 0;
        for _ in 0..100 {
            let e = BitVec::bernoulli(100, 0.02, &mut r);
            let s = h.vec_mul(&e).unwrap();
            let d = g.decode(&s, 0.02, &BpConfig::default()).unwrap();
            assert_eq!(h.vec_mul(&d.e_hat).unwrap(), s);
            ok += usize::from(d.e_hat == e);
        }
        assert!(ok >= 80, "{ok}/100");
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = BitMatrix::identity(4);
        assert!(bp_decode(&h, &BitVec::zeros(3), 0.1, &BpConfig::default()).is_err());
        assert!(bp_decode(&h, &BitVec::zeros(4), 0.5, &BpConfig::default()).is_err());
        assert!(bp_decode(&h, &BitVec::zeros(4), 0.0, &BpConfig::default()).is_err());
    }
}
