//! Random linear broadcast codes over GF(2^m) and their binary transfer
//! matrices.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::gf2m::{Element, GfField, GfMatrix};
use crate::matrix_io::format_bit_matrix;
use crate::network::NetworkSpec;
use crate::rng;

/// What one terminal receives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalCode {
    pub node: usize,
    pub maxflow: usize,
    /// Global vectors of the incoming edges as columns, `w x |In(t)|`.
    pub m_t: GfMatrix,
    /// Positions within `In(t)` of the kept independent columns.
    pub selected: Vec<usize>,
    /// `binary_expand` of the selected columns, `wm x m·min(w, maxflow)`.
    pub b_t: BitMatrix,
}

impl TerminalCode {
    /// `min(w, maxflow)`.
    pub fn width(&self) -> usize {
        self.selected.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BroadcastCode {
    pub field: GfField,
    pub w: usize,
    pub network: NetworkSpec,
    /// Per edge, the coefficients applied to the tail's inputs: the `w`
    /// source symbols for edges leaving the source, else `In(tail)` in order.
    pub local: Vec<Vec<Element>>,
    /// Per edge, `f_e` of length `w`.
    pub global_vectors: Vec<Vec<Element>>,
    /// In the network's terminal order.
    pub terminals: Vec<TerminalCode>,
    /// Attempts used, starting at 1.
    pub attempts: usize,
}

fn global_from_local(net: &NetworkSpec, field: GfField, w: usize, local: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let mut global = vec![Vec::new(); net.edge_count()];
    for &v in net.topological_order() {
        for &e in net.out_edges(v) {
            let coeffs = &local[e];
            global[e] = if v == net.source() {
                coeffs.clone()
            } else {
                let mut f = vec![0; w];
                for (&ein, &c) in net.in_edges(v).iter().zip(coeffs) {
                    for (fi, &gi) in f.iter_mut().zip(&global[ein]) {
                        *fi ^= field.mul(c, gi);
                    }
                }
                f
            };
        }
    }
    global
}

fn incoming_matrix(net: &NetworkSpec, field: GfField, w: usize, global: &[Vec<Element>], node: usize) -> GfMatrix {
    let cols: Vec<Vec<Element>> = net.in_edges(node).iter().map(|&e| global[e].clone()).collect();
    if cols.is_empty() {
        return GfMatrix::zeros(field, w, 0);
    }
    GfMatrix::from_columns(field, &cols).expect("columns have length w")
}

/// Local coefficients and global vectors of one successful draw.
type Coefficients = (Vec<Vec<Element>>, Vec<Vec<Element>>);

fn attempt(net: &NetworkSpec, field: GfField, w: usize, flows: &[usize], rng: &mut impl Rng) -> Option<Coefficients> {
    let local: Vec<Vec<Element>> = net
        .edges()
        .iter()
        .map(|&(tail, _)| {
            let inputs = if tail == net.source() {
                w
            } else {
                net.in_edges(tail).len()
            };
            (0..inputs).map(|_| field.random_nonzero(rng)).collect()
        })
        .collect();
    let global = global_from_local(net, field, w, &local);
    let ok = net
        .terminals()
        .iter()
        .zip(flows)
        .all(|(&t, &flow)| incoming_matrix(net, field, w, &global, t).rank() == w.min(flow));
    ok.then_some((local, global))
}

/// Draws local coefficients uniformly from the nonzero elements of GF(2^m)
/// until every terminal's incoming global vectors have rank
/// `min(w, maxflow)`.
///
/// Attempt `i` uses its own stream derived from one draw of `rng`.
pub fn build_broadcast_code<R: Rng + ?Sized>(
    net: &NetworkSpec,
    w: usize,
    m: u32,
    rng: &mut R,
    max_attempts: usize,
) -> Result<BroadcastCode> {
    if w == 0 {
        return Err(Error::param("w", "source dimension must be at least 1"));
    }
    if max_attempts == 0 {
        return Err(Error::param("max_attempts", "at least one attempt is required"));
    }
    let field = GfField::new(m)?;
    let flows: Vec<usize> = net.terminals().iter().map(|&t| net.maxflow(t)).collect();
    if let Some(i) = flows.iter().position(|&f| f == 0) {
        return Err(Error::InvalidNetwork(format!(
            "terminal {} is unreachable from the source",
            net.label(net.terminals()[i])
        )));
    }
    let seed = rng.random::<u64>();
    for a in 0..max_attempts {
        let mut r = rng::stream(seed, &[a as u64]);
        let Some((local, global)) = attempt(net, field, w, &flows, &mut r) else {
            continue;
        };
        let terminals = net
            .terminals()
            .iter()
            .zip(&flows)
            .map(|(&t, &flow)| {
                let m_t = incoming_matrix(net, field, w, &global, t);
                let selected = m_t.independent_columns();
                let b_t = m_t.select_columns(&selected).binary_expand();
                TerminalCode {
                    node: t,
                    maxflow: flow,
                    m_t,
                    selected,
                    b_t,
                }
            })
            .collect();
        return Ok(BroadcastCode {
            field,
            w,
            network: net.clone(),
            local,
            global_vectors: global,
            terminals,
            attempts: a + 1,
        });
    }
    Err(Error::FieldTooSmall {
        attempts: max_attempts,
        degree: m,
    })
}

impl BroadcastCode {
    pub fn m(&self) -> usize {
        self.field.degree() as usize
    }

    /// Source length in bits, `wm`.
    pub fn source_bits(&self) -> usize {
        self.w * self.m()
    }

    /// Looks up a terminal by node label.
    pub fn terminal(&self, label: usize) -> Result<&TerminalCode> {
        self.network
            .node_index(label)
            .and_then(|v| self.terminals.iter().find(|t| t.node == v))
            .ok_or(Error::UnknownTerminal(label))
    }

    /// Recomputes every global vector from the stored local coefficients.
    pub fn recompute_global_vectors(&self) -> Vec<Vec<Element>> {
        global_from_local(&self.network, self.field, self.w, &self.local)
    }

    /// Symbol carried by every edge when the source emits `symbols`,
    /// evaluated hop by hop with the local coefficients.
    pub fn propagate(&self, symbols: &[Element]) -> Result<Vec<Element>> {
        if symbols.len() != self.w {
            return Err(Error::DimensionMismatch(format!(
                "{} source symbols, code has w = {}",
                symbols.len(),
                self.w
            )));
        }
        for &s in symbols {
            self.field.check(s)?;
        }
        let net = &self.network;
        let f = self.field;
        let mut carried = vec![0; net.edge_count()];
        for &v in net.topological_order() {
            for &e in net.out_edges(v) {
                let inputs: Vec<Element> = if v == net.source() {
                    symbols.to_vec()
                } else {
                    net.in_edges(v).iter().map(|&i| carried[i]).collect()
                };
                carried[e] = inputs
                    .iter()
                    .zip(&self.local[e])
                    .fold(0, |acc, (&x, &c)| acc ^ f.mul(x, c));
            }
        }
        Ok(carried)
    }

    /// `source_bits · B_t` for the terminal with node label `t`.
    pub fn transfer_bits(&self, t: usize, source_bits: &BitVec) -> Result<BitVec> {
        let term = self.terminal(t)?;
        self.check_bits(source_bits)?;
        term.b_t.vec_mul(source_bits)
    }

    /// The same bits obtained by running the network symbol by symbol and
    /// reading the selected incoming edges at the terminal.
    pub fn transfer_bits_by_propagation(&self, t: usize, source_bits: &BitVec) -> Result<BitVec> {
        let term = self.terminal(t)?;
        self.check_bits(source_bits)?;
        let carried = self.propagate(&self.field.bits_to_vector(source_bits)?)?;
        let ins = self.network.in_edges(term.node);
        let got: Vec<Element> = term.selected.iter().map(|&k| carried[ins[k]]).collect();
        Ok(self.field.vector_to_bits(&got))
    }

    fn check_bits(&self, bits: &BitVec) -> Result<()> {
        if bits.len() != self.source_bits() {
            return Err(Error::DimensionMismatch(format!(
                "{} source bits, code expects wm = {}",
                bits.len(),
                self.source_bits()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let digits = self.m().div_ceil(4);
        let hex = |v: &[Element]| v.iter().map(|x| format!("{x:0digits$x}")).collect::<Vec<_>>().join(" ");
        let net = &self.network;
        let doc = CodeJson {
            m: self.field.degree(),
            poly: format!("{:x}", self.field.poly()),
            w: self.w,
            attempts: self.attempts,
            edges: net
                .edges()
                .iter()
                .zip(&self.global_vectors)
                .map(|(&(t, h), g)| EdgeJson {
                    tail: net.label(t),
                    head: net.label(h),
                    global_vector: hex(g),
                })
                .collect(),
            terminals: self
                .terminals
                .iter()
                .map(|t| TerminalJson {
                    node: net.label(t.node),
                    maxflow: t.maxflow,
                    selected_edges: t.selected.iter().map(|&k| net.in_edges(t.node)[k]).collect(),
                    b_t: format_bit_matrix(&t.b_t),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

#[derive(Serialize)]
struct CodeJson {
    m: u32,
    poly: String,
    w: usize,
    attempts: usize,
    edges: Vec<EdgeJson>,
    terminals: Vec<TerminalJson>,
}

#[derive(Serialize)]
struct EdgeJson {
    tail: usize,
    head: usize,
    global_vector: String,
}

#[derive(Serialize)]
struct TerminalJson {
    node: usize,
    maxflow: usize,
    selected_edges: Vec<usize>,
    b_t: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::random_dag;
    use crate::rng::seeded;

    fn assert_valid(code: &BroadcastCode) {
        let m = code.m();
        for t in &code.terminals {
            let want = code.w.min(t.maxflow);
            assert_eq!(t.m_t.rank(), want);
            assert_eq!(t.width(), want);
            assert_eq!(t.b_t.rows(), code.w * m);
            assert_eq!(t.b_t.cols(), want * m);
            assert_eq!(t.b_t.rank(), m * want);
        }
        assert_eq!(code.recompute_global_vectors(), code.global_vectors);
    }

    #[test]
    fn single_path_scales_the_symbol() {
        let net = NetworkSpec::path(3);
        let code = build_broadcast_code(&net, 1, 4, &mut seeded(1), 10).unwrap();
        assert_valid(&code);
        for g in &code.global_vectors {
            assert_ne!(g[0], 0);
        }
    }

    #[test]
    fn butterfly_code() {
        let net = NetworkSpec::butterfly();
        let code = build_broadcast_code(&net, 2, 4, &mut seeded(2), 20).unwrap();
        assert_valid(&code);
        let mut r = seeded(3);
        for _ in 0..50 {
            let s = BitVec::random(8, &mut r);
            for &t in &[5, 6] {
                assert_eq!(
                    code.transfer_bits(t, &s).unwrap(),
                    code.transfer_bits_by_propagation(t, &s).unwrap()
                );
            }
        }
        assert!(code.transfer_bits(5, &BitVec::zeros(8)).unwrap().is_zero());
        assert!(matches!(
            code.transfer_bits(4, &BitVec::zeros(8)),
            Err(Error::UnknownTerminal(4))
        ));
        assert!(code.transfer_bits(5, &BitVec::zeros(7)).is_err());
    }

    #[test]
    fn butterfly_needs_few_attempts() {
        let net = NetworkSpec::butterfly();
        let quick = (0..1000)
            .filter(|&s| build_broadcast_code(&net, 2, 4, &mut seeded(s), 100).unwrap().attempts <= 3)
            .count();
        assert!(quick >= 990, "{quick}/1000");
    }

    #[test]
    fn identity_like_code_passes_bits_through() {
        // w = 1 over one edge with coefficient 1
        let net = NetworkSpec::path(1);
        let mut code = build_broadcast_code(&net, 1, 3, &mut seeded(4), 5).unwrap();
        code.local[0] = vec![1];
        code.global_vectors = code.recompute_global_vectors();
        let t = &mut code.terminals[0];
        t.m_t = GfMatrix::from_columns(code.field, &[vec![1]]).unwrap();
        t.b_t = t.m_t.binary_expand();
        let s = BitVec::from_u8s(&[1, 0, 1]);
        assert_eq!(code.transfer_bits(1, &s).unwrap(), s);
        assert_eq!(code.transfer_bits_by_propagation(1, &s).unwrap(), s);
    }

    #[test]
    fn random_dags_are_linear_broadcast() {
        let mut r = seeded(5);
        for _ in 0..5 {
            let net = random_dag(70, 5, 0.3, 4, &mut r).unwrap();
            let w = net.terminals().iter().map(|&t| net.maxflow(t)).max().unwrap();
            let code = build_broadcast_code(&net, w, 4, &mut r, 50).unwrap();
            assert_valid(&code);
            let s = BitVec::random(w * 4, &mut r);
            for &t in net.terminals() {
                let l = net.label(t);
                assert_eq!(
                    code.transfer_bits(l, &s).unwrap(),
                    code.transfer_bits_by_propagation(l, &s).unwrap()
                );
            }
        }
    }

    #[test]
    fn tiny_field_can_fail() {
        // Over GF(2) every coefficient is 1, so both source edges carry
        // (1, 1) and no sink sees rank 2.
        let net = NetworkSpec::butterfly();
        let fails = (0..200)
            .filter(|&s| {
                matches!(
                    build_broadcast_code(&net, 2, 1, &mut seeded(s), 3),
                    Err(Error::FieldTooSmall { .. })
                )
            })
            .count();
        assert_eq!(fails, 200);
    }

    #[test]
    fn json_export() {
        let code = build_broadcast_code(&NetworkSpec::butterfly(), 2, 4, &mut seeded(6), 20).unwrap();
        let v: serde_json::Value = serde_json::from_str(&code.to_json().unwrap()).unwrap();
        assert_eq!(v["edges"].as_array().unwrap().len(), 9);
        assert_eq!(v["terminals"][0]["b_t"].as_str().unwrap().lines().next(), Some("8 8"));
    }
}
