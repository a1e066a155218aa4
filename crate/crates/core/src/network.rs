//! Acyclic unit-capacity multicast networks.
//!
//! Text format, one directive per line (`#` starts a comment):
//!
//! ```text
//! node 0
//! node 1
//! edge 0 1        # optional third field: capacity, must be 1
//! source 0
//! terminal 1
//! ```
//! Higher capacities are modeled with parallel edges.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// A directed acyclic multigraph with one source and a set of terminals.
///
/// Nodes carry caller-chosen integer labels; edges keep insertion order,
/// which is also the order the network code assigns coefficients in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    labels: Vec<usize>,
    index: HashMap<usize, usize>,
    /// `(tail, head)` as node indices.
    edges: Vec<(usize, usize)>,
    source: usize,
    terminals: Vec<usize>,
    topo: Vec<usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
}

impl NetworkSpec {
    /// Validates and builds a network from labeled nodes and edges.
    pub fn new(nodes: &[usize], edges: &[(usize, usize)], source: usize, terminals: &[usize]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, &label) in nodes.iter().enumerate() {
            if index.insert(label, i).is_some() {
                return Err(Error::InvalidNetwork(format!("node {label} declared twice")));
            }
        }
        let lookup = |label: usize| {
            index
                .get(&label)
                .copied()
                .ok_or_else(|| Error::InvalidNetwork(format!("unknown node {label}")))
        };
        let mut idx_edges = Vec::with_capacity(edges.len());
        for &(t, h) in edges {
            idx_edges.push((lookup(t)?, lookup(h)?));
        }
        let source = lookup(source)?;
        let mut term_idx = Vec::with_capacity(terminals.len());
        for &t in terminals {
            let ti = lookup(t)?;
            if term_idx.contains(&ti) {
                return Err(Error::InvalidNetwork(format!("terminal {t} listed twice")));
            }
            term_idx.push(ti);
        }
        NetworkSpec::from_indices(nodes.to_vec(), index, idx_edges, source, term_idx)
    }

    fn from_indices(
        labels: Vec<usize>,
        index: HashMap<usize, usize>,
        edges: Vec<(usize, usize)>,
        source: usize,
        terminals: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if terminals.is_empty() {
            return Err(Error::InvalidNetwork("no terminals".into()));
        }
        if terminals.contains(&source) {
            return Err(Error::InvalidNetwork("the source cannot be a terminal".into()));
        }
        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (e, &(t, h)) in edges.iter().enumerate() {
            out_edges[t].push(e);
            in_edges[h].push(e);
        }
        if !in_edges[source].is_empty() {
            return Err(Error::InvalidNetwork(format!(
                "source {} has incoming edges",
                labels[source]
            )));
        }
        for &t in &terminals {
            if !out_edges[t].is_empty() {
                return Err(Error::InvalidNetwork(format!(
                    "terminal {} has outgoing edges",
                    labels[t]
                )));
            }
        }
        let topo =
            topological_order(n, &edges).ok_or_else(|| Error::InvalidNetwork("graph has a directed cycle".into()))?;
        Ok(NetworkSpec {
            labels,
            index,
            edges,
            source,
            terminals,
            topo,
            in_edges,
            out_edges,
        })
    }

    /// The four-node-deep butterfly: two unit paths to each of two sinks that
    /// share the middle edge.
    pub fn butterfly() -> Self {
        // s=0, a=1, b=2, c=3, d=4, t1=5, t2=6
        let edges = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 5), (2, 6), (4, 5), (4, 6)];
        NetworkSpec::new(&[0, 1, 2, 3, 4, 5, 6], &edges, 0, &[5, 6]).expect("butterfly is valid")
    }

    /// `source -> 1 -> ... -> len` with the last node as the only terminal.
    pub fn path(len: usize) -> Self {
        assert!(len >= 1);
        let nodes: Vec<usize> = (0..=len).collect();
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, i + 1)).collect();
        NetworkSpec::new(&nodes, &edges, 0, &[len]).expect("path is valid")
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn node_index(&self, label: usize) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// Edges as `(tail, head)` node indices.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// Terminal node indices.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn in_edges(&self, node: usize) -> &[usize] {
        &self.in_edges[node]
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.out_edges[node]
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Unit-capacity max-flow from the source to `node` (an index).
    pub fn maxflow(&self, node: usize) -> usize {
        if node == self.source {
            return 0;
        }
        max_flow(self.node_count(), &self.edges, self.source, node)
    }

    /// Max-flow to a node given by label; unknown labels are an error.
    pub fn maxflow_to(&self, label: usize) -> Result<usize> {
        let node = self
            .node_index(label)
            .ok_or_else(|| Error::InvalidNetwork(format!("unknown node {label}")))?;
        Ok(self.maxflow(node))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for &l in &self.labels {
            writeln!(s, "node {l}").unwrap();
        }
        for &(t, h) in &self.edges {
            writeln!(s, "edge {} {}", self.labels[t], self.labels[h]).unwrap();
        }
        writeln!(s, "source {}", self.labels[self.source]).unwrap();
        for &t in &self.terminals {
            writeln!(s, "terminal {}", self.labels[t]).unwrap();
        }
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        parse_network(&std::fs::read_to_string(path)?)
    }
}

/// Kahn's algorithm, smallest index first; `None` on a cycle.
fn topological_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(t, h) in edges {
        indeg[h] += 1;
        succ[t].push(h);
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &h in &succ[v] {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.insert(h);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Edmonds-Karp on a unit-capacity multigraph.
fn max_flow(n: usize, edges: &[(usize, usize)], s: usize, t: usize) -> usize {
    // residual arcs: (to, cap); arc i ^ 1 is the reverse of arc i
    let mut to = Vec::with_capacity(2 * edges.len());
    let mut cap = Vec::with_capacity(2 * edges.len());
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(to.len());
        to.push(v);
        cap.push(1u32);
        adj[v].push(to.len());
        to.push(u);
        cap.push(0u32);
    }
    let mut flow = 0;
    loop {
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &a in &adj[u] {
                if cap[a] > 0 && !seen[to[a]] {
                    seen[to[a]] = true;
                    via[to[a]] = a;
                    queue.push_back(to[a]);
                }
            }
        }
        if !seen[t] {
            return flow;
        }
        let mut v = t;
        while v != s {
            let a = via[v];
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = to[a ^ 1];
        }
        flow += 1;
    }
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Parses the line-oriented network format, reporting the offending line
/// for malformed directives, capacity violations, and cycles.
pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let mut labels = Vec::new();
    let mut index = HashMap::new();
    let mut edge_lines: Vec<(usize, usize, usize)> = Vec::new();
    let mut source: Option<(usize, usize)> = None;
    let mut terminals: Vec<(usize, usize)> = Vec::new();

    let num = |tok: Option<&str>, line: usize| -> Result<usize> {
        let tok = tok.ok_or_else(|| perr(line, "missing node id"))?;
        tok.parse().map_err(|_| perr(line, format!("bad node id `{tok}`")))
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let kw = toks.next().unwrap();
        match kw {
            "node" => {
                let id = num(toks.next(), line)?;
                if index.insert(id, labels.len()).is_some() {
                    return Err(perr(line, format!("node {id} declared twice")));
                }
                labels.push(id);
            }
            "edge" => {
                let t = num(toks.next(), line)?;
                let h = num(toks.next(), line)?;
                if let Some(c) = toks.next() {
                    if c != "1" {
                        return Err(perr(
                            line,
                            format!("edge capacity must be 1, got `{c}`; use parallel edges"),
                        ));
                    }
                }
                edge_lines.push((t, h, line));
            }
            "source" => {
                let s = num(toks.next(), line)?;
                if source.is_some() {
                    return Err(perr(line, "source declared twice"));
                }
                source = Some((s, line));
            }
            "terminal" => terminals.push((num(toks.next(), line)?, line)),
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(perr(line, "trailing tokens"));
        }
    }

    let resolve = |label: usize, line: usize| -> Result<usize> {
        index
            .get(&label)
            .copied()
            .ok_or_else(|| perr(line, format!("undeclared node {label}")))
    };
    let mut edges = Vec::with_capacity(edge_lines.len());
    for &(t, h, line) in &edge_lines {
        edges.push((resolve(t, line)?, resolve(h, line)?));
    }
    let (s_label, s_line) = source.ok_or_else(|| perr(text.lines().count().max(1), "no source declared"))?;
    let s = resolve(s_label, s_line)?;
    if terminals.is_empty() {
        return Err(perr(text.lines().count().max(1), "no terminal declared"));
    }
    let mut term_idx = Vec::new();
    for &(label, line) in &terminals {
        let t = resolve(label, line)?;
        if t == s {
            return Err(perr(line, "the source cannot be a terminal"));
        }
        if term_idx.contains(&t) {
            return Err(perr(line, format!("terminal {label} listed twice")));
        }
        term_idx.push(t);
    }
    for (k, &(t, h)) in edges.iter().enumerate() {
        if h == s {
            return Err(perr(edge_lines[k].2, "edge into the source"));
        }
        if term_idx.contains(&t) {
            return Err(perr(edge_lines[k].2, "edge out of a terminal"));
        }
    }
    // Incremental cycle check so the error names the edge that closes it.
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); labels.len()];
    for (k, &(t, h)) in edges.iter().enumerate() {
        if reaches(&succ, h, t) {
            return Err(perr(
                edge_lines[k].2,
                format!("edge {} -> {} closes a cycle", labels[t], labels[h]),
            ));
        }
        succ[t].push(h);
    }
    NetworkSpec::from_indices(labels, index, edges, s, term_idx)
}

fn reaches(succ: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        stack.extend(&succ[v]);
    }
    false
}

/// Layered random DAG.
///
/// Layer 0 holds only the source, the last layer holds the `terminals`, and
/// the remaining nodes are spread round-robin over the middle layers. Each
/// pair of nodes in consecutive layers is joined with probability
/// `edge_density`. Graphs are redrawn until every terminal has max-flow at
/// least one.
pub fn random_dag<R: Rng + ?Sized>(
    nodes: usize,
    layers: usize,
    edge_density: f64,
    terminals: usize,
    rng: &mut R,
) -> Result<NetworkSpec> {
    if layers < 2 || nodes < layers {
        return Err(Error::param(
            "layers",
            format!("need nodes >= layers >= 2, got {nodes} nodes, {layers} layers"),
        ));
    }
    if terminals == 0 {
        return Err(Error::param("terminals", "need at least one terminal"));
    }
    if !(edge_density > 0.0 && edge_density <= 1.0) {
        return Err(Error::param(
            "edge_density",
            format!("must lie in (0, 1], got {edge_density}"),
        ));
    }
    let middle = nodes.checked_sub(1 + terminals).ok_or_else(|| {
        Error::param(
            "terminals",
            format!("{terminals} terminals do not fit in {nodes} nodes"),
        )
    })?;
    if layers == 2 && middle > 0 {
        return Err(Error::param(
            "nodes",
            "two layers hold only the source and the terminals",
        ));
    }
    if layers > 2 && middle < layers - 2 {
        return Err(Error::param("nodes", "every middle layer needs at least one node"));
    }
    let mut layer_of = Vec::with_capacity(nodes);
    layer_of.push(0);
    for i in 0..middle {
        layer_of.push(1 + i % (layers - 2).max(1));
    }
    layer_of.extend(std::iter::repeat_n(layers - 1, terminals));
    let by_layer: Vec<Vec<usize>> = (0..layers)
        .map(|l| (0..nodes).filter(|&v| layer_of[v] == l).collect())
        .collect();
    let labels: Vec<usize> = (0..nodes).collect();
    let term: Vec<usize> = (nodes - terminals..nodes).collect();

    for _ in 0..10_000 {
        let mut edges = Vec::new();
        for l in 0..layers - 1 {
            for &u in &by_layer[l] {
                for &v in &by_layer[l + 1] {
                    if rng.random::<f64>() < edge_density {
                        edges.push((u, v));
                    }
                }
            }
        }
        let net = NetworkSpec::new(&labels, &edges, 0, &term)?;
        if term.iter().all(|&t| net.maxflow(t) >= 1) {
            return Ok(net);
        }
    }
    Err(Error::param(
        "edge_density",
        "too sparse: no connected network found in 10000 draws",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    /// Min cut by enumerating every node subset containing the source.
    fn brute_min_cut(net: &NetworkSpec, t: usize) -> usize {
        let n = net.node_count();
        let s = net.source();
        let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
        (0u32..1 << others.len())
            .map(|mask| {
                let mut side = vec![false; n];
                side[s] = true;
                for (k, &v) in others.iter().enumerate() {
                    side[v] = mask >> k & 1 == 1;
                }
                net.edges().iter().filter(|&&(u, v)| side[u] && !side[v]).count()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn maxflow_examples() {
        let p = NetworkSpec::path(2);
        assert_eq!(p.maxflow(2), 1);
        let b = NetworkSpec::butterfly();
        for &t in b.terminals() {
            assert_eq!(b.maxflow(t), 2);
            assert_eq!(brute_min_cut(&b, t), 2);
        }
        let iso = NetworkSpec::new(&[0, 1, 2], &[(0, 1)], 0, &[1, 2]).unwrap();
        assert_eq!(iso.maxflow_to(2).unwrap(), 0);
        assert_eq!(iso.maxflow_to(1).unwrap(), 1);
        assert!(iso.maxflow_to(9).is_err());
    }

    #[test]
    fn parallel_edges_add_capacity() {
        let net = NetworkSpec::new(&[0, 1, 2], &[(0, 1), (0, 1), (0, 1), (1, 2), (1, 2)], 0, &[2]).unwrap();
        assert_eq!(net.maxflow(2), 2);
    }

    #[test]
    fn maxflow_matches_min_cut_on_random_dags() {
        let mut r = seeded(21);
        for _ in 0..50 {
            let net = random_dag(11, 4, 0.45, 2, &mut r).unwrap();
            for &t in net.terminals() {
                assert_eq!(net.maxflow(t), brute_min_cut(&net, t));
            }
        }
    }

    #[test]
    fn random_dag_structure() {
        let mut r = seeded(22);
        let two = random_dag(4, 2, 1.0, 3, &mut r).unwrap();
        assert_eq!(two.edge_count(), 3);
        for &t in two.terminals() {
            assert_eq!(two.maxflow(t), 1);
        }
        for _ in 0..10 {
            let net = random_dag(70, 5, 0.3, 4, &mut r).unwrap();
            assert_eq!(net.node_count(), 70);
            assert_eq!(net.terminals().len(), 4);
            assert!(net.in_edges(net.source()).is_empty());
            for &t in net.terminals() {
                assert!(net.out_edges(t).is_empty());
                assert!(net.maxflow(t) >= 1);
            }
            // every edge goes forward in the topological order
            let pos: HashMap<usize, usize> = net
                .topological_order()
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, i))
                .collect();
            assert!(net.edges().iter().all(|&(u, v)| pos[&u] < pos[&v]));
        }
        assert!(random_dag(3, 4, 0.5, 1, &mut r).is_err());
        assert!(random_dag(5, 1, 0.5, 1, &mut r).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let b = NetworkSpec::butterfly();
        assert_eq!(parse_network(&b.to_text()).unwrap(), b);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cyc = "node 0\nnode 1\nnode 2\nnode 3\nsource 0\nterminal 3\nedge 0 1\nedge 1 2\nedge 2 1\nedge 2 3\n";
        assert!(matches!(parse_network(cyc), Err(Error::Parse { line: 9, .. })));
        let cap = "node 0\nnode 1\nedge 0 1 2\nsource 0\nterminal 1\n";
        assert!(matches!(parse_network(cap), Err(Error::Parse { line: 3, .. })));
        let unknown = "node 0\nnode 1\nedge 0 5\nsource 0\nterminal 1\n";
        assert!(matches!(parse_network(unknown), Err(Error::Parse { line: 3, .. })));
        let into_source = "node 0\nnode 1\nnode 2\nedge 1 0\nedge 0 2\nsource 0\nterminal 2\n";
        assert!(matches!(parse_network(into_source), Err(Error::Parse { line: 4, .. })));
        let explicit_unit = "node 0\nnode 1\nedge 0 1 1 # unit\nsource 0\nterminal 1\n";
        assert!(parse_network(explicit_unit).is_ok());
    }

    #[test]
    fn constructor_rejects_invalid_graphs() {
        assert!(NetworkSpec::new(&[0, 1], &[(0, 1), (1, 0)], 0, &[1]).is_err());
        assert!(NetworkSpec::new(&[0, 1], &[(0, 1)], 0, &[]).is_err());
        assert!(NetworkSpec::new(&[0, 1, 2], &[(0, 1), (1, 2)], 0, &[1]).is_err());
    }
}
