//! Joint source-network code design: per terminal, `Hbar_t = H·B_t·P_t`
//! with `P_t` from the sparsifier.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::netcode::{build_broadcast_code, BroadcastCode};
use crate::network::NetworkSpec;
use crate::sparsifier::{binomial_sigma, distortion_rate, gauss_baseline, sparsify};
use crate::syndrome::bp::{BpConfig, TannerGraph};
use crate::syndrome::matrices::sample_sparse_h;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaPolicy {
    /// `lambda = n/2`: uniform i.i.d. `H`.
    #[default]
    Uniform,
    /// Bernoulli(`lambda/n`) entries.
    Sparse(f64),
}

impl LambdaPolicy {
    pub fn lambda(&self, n: usize) -> f64 {
        match *self {
            LambdaPolicy::Uniform => n as f64 / 2.0,
            LambdaPolicy::Sparse(l) => l,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JointParams {
    /// Source blocklength in bits.
    pub n: usize,
    /// Field degree of the network code.
    pub m: u32,
    /// One rate per terminal, in the network's terminal order.
    pub rates: Vec<f64>,
    pub lambda_policy: LambdaPolicy,
    pub trials_per_column: usize,
    pub passes: usize,
    pub max_attempts: usize,
}

impl Default for JointParams {
    fn default() -> Self {
        JointParams {
            n: 0,
            m: 4,
            rates: Vec::new(),
            lambda_policy: LambdaPolicy::Uniform,
            trials_per_column: 10,
            passes: 1,
            max_attempts: 50,
        }
    }
}

#[derive(Clone, Debug)]
pub struct JointTerminal {
    /// Node label.
    pub node: usize,
    pub rate: f64,
    /// Syndrome bits this terminal works with, `ceil(n·rate)`.
    pub r_t: usize,
    /// First `r_t` columns of the block-diagonal replication of `B_t`.
    pub b_eff: BitMatrix,
    pub p: BitMatrix,
    pub hbar: BitMatrix,
    pub density: f64,
    /// Density of `H·B_eff` before sparsification.
    pub density_before: f64,
    pub gauss_density: f64,
    /// `D(rate) - 3 sigma`.
    pub lower_bound: f64,
    pub lower_bound_holds: bool,
    /// `D(max rate - rate)`, reported only.
    pub target: f64,
}

#[derive(Clone, Debug)]
pub struct JointCodeDesign {
    pub n: usize,
    /// `H` is `n x (n - k)`.
    pub k: usize,
    pub lambda: f64,
    pub h: BitMatrix,
    pub code: BroadcastCode,
    /// Network uses per source block.
    pub uses: usize,
    pub terminals: Vec<JointTerminal>,
}

/// Builds a broadcast code with `w = max maxflow`, then designs on it.
pub fn design_joint_code<R: Rng + ?Sized>(
    net: &NetworkSpec,
    params: &JointParams,
    rng: &mut R,
) -> Result<JointCodeDesign> {
    let w = net.terminals().iter().map(|&t| net.maxflow(t)).max().unwrap_or(0);
    let code = build_broadcast_code(net, w, params.m, rng, params.max_attempts)?;
    design_on_code(code, params, rng)
}

/// Designs `H` and every `P_t` for an existing broadcast code.
pub fn design_on_code<R: Rng + ?Sized>(
    code: BroadcastCode,
    params: &JointParams,
    rng: &mut R,
) -> Result<JointCodeDesign> {
    let n = params.n;
    if n == 0 {
        return Err(Error::param("n", "blocklength must be positive"));
    }
    if params.rates.len() != code.terminals.len() {
        return Err(Error::param(
            "rates",
            format!("{} rates for {} terminals", params.rates.len(), code.terminals.len()),
        ));
    }
    if let Some(&r) = params.rates.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::param("rates", format!("rates must lie in (0, 1), got {r}")));
    }
    let r_ts: Vec<usize> = params
        .rates
        .iter()
        .map(|&r| (n as f64 * r - 1e-9).ceil() as usize)
        .collect();
    let r_max = *r_ts.iter().max().expect("at least one terminal");
    let wm = code.source_bits();
    // the source ships whole network uses, so H gets uses·wm columns
    let uses = r_max.div_ceil(wm);
    if uses * wm > n {
        return Err(Error::param(
            "n",
            format!("{uses} network uses of {wm} bits exceed the blocklength {n}"),
        ));
    }
    for (t, &r_t) in code.terminals.iter().zip(&r_ts) {
        let available = uses * code.m() * t.width();
        if available < r_t {
            return Err(Error::InfeasibleRate {
                terminal: code.network.label(t.node),
                needed: r_t,
                available,
            });
        }
    }
    let k = n - uses * wm;
    let lambda = params.lambda_policy.lambda(n);
    let h = sample_sparse_h(n, k, lambda, rng)?;
    let max_rate = params.rates.iter().copied().fold(0.0, f64::max);

    let mut terminals = Vec::with_capacity(r_ts.len());
    for ((t, &r_t), &rate) in code.terminals.iter().zip(&r_ts).zip(&params.rates) {
        let first: Vec<usize> = (0..r_t).collect();
        let b_eff = t.b_t.block_diagonal(uses).select_columns(&first);
        let a = h.mul(&b_eff)?;
        let seed = rng.random::<u64>();
        let res = sparsify(&a, params.trials_per_column, params.passes, seed)?;
        let gauss = gauss_baseline(&a)?;
        let d = distortion_rate(r_t as f64 / n as f64)?;
        let lower_bound = d - 3.0 * binomial_sigma(d, n * r_t);
        terminals.push(JointTerminal {
            node: code.network.label(t.node),
            rate,
            r_t,
            density_before: a.density(),
            gauss_density: gauss.density,
            density: res.density,
            lower_bound,
            lower_bound_holds: res.density >= lower_bound,
            target: distortion_rate(max_rate - rate)?,
            b_eff,
            p: res.p,
            hbar: res.ap,
        });
    }
    Ok(JointCodeDesign {
        n,
        k,
        lambda,
        h,
        code,
        uses,
        terminals,
    })
}

impl JointCodeDesign {
    pub fn terminal(&self, label: usize) -> Result<&JointTerminal> {
        self.terminals
            .iter()
            .find(|t| t.node == label)
            .ok_or(Error::UnknownTerminal(label))
    }

    /// `x·H`, the bits the source pushes into the network.
    pub fn source_syndrome(&self, x: &BitVec) -> Result<BitVec> {
        self.h.vec_mul(x)
    }

    /// What terminal `t` obtains from `x` by routing `x·H` through the
    /// network use by use, truncating to `r_t` bits and applying `P_t`.
    pub fn terminal_syndrome(&self, label: usize, x: &BitVec) -> Result<BitVec> {
        let term = self.terminal(label)?;
        let s = self.source_syndrome(x)?;
        let wm = self.code.source_bits();
        let parts = (0..self.uses)
            .map(|u| self.code.transfer_bits_by_propagation(label, &s.slice(u * wm, wm)))
            .collect::<Result<Vec<_>>>()?;
        let received = BitVec::concat(&parts).slice(0, term.r_t);
        term.p.vec_mul(&received)
    }

    /// `x·Hbar_t + y·Hbar_t`, the syndrome of the error pattern `x + y`.
    pub fn error_syndrome(&self, label: usize, x: &BitVec, y: &BitVec) -> Result<BitVec> {
        let term = self.terminal(label)?;
        Ok(self.terminal_syndrome(label, x)?.xor(&term.hbar.vec_mul(y)?))
    }

    /// Terminal-side reconstruction `y + e_hat`.
    pub fn decode(&self, label: usize, x_syndrome: &BitVec, y: &BitVec, p: f64, cfg: &BpConfig) -> Result<BitVec> {
        let term = self.terminal(label)?;
        let s = x_syndrome.xor(&term.hbar.vec_mul(y)?);
        let d = TannerGraph::new(&term.hbar).decode(&s, p, cfg)?;
        Ok(y.xor(&d.e_hat))
    }
}
