//! Simple undirected graphs on vertices `1..=n`, per-vertex loop weights,
//! the text file format, and dense adjacency matrices.
//!
//! File format:
//!
//! ```text
//! # comment
//! n m
//! u v        (exactly m edge lines, 1-indexed, u != v)
//! l v p/q    (optional loop weights)
//! ```

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Vertex ids are 1-based throughout the public API.
pub type Vertex = usize;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    /// Canonical edge list: `u < v`, sorted.
    edges: Vec<(Vertex, Vertex)>,
    /// `adj[v - 1]` in insertion order.
    adj: Vec<Vec<Vertex>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    /// Adjacency lists follow the order of `edges`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut canonical = Vec::new();
        for (u, v) in edges {
            check_edge(n, u, v)?;
            adj[u - 1].push(v);
            adj[v - 1].push(u);
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge { u: w[0].0, v: w[0].1 });
        }
        Ok(Graph { n, edges: canonical, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Induced subgraph on `keep` (in the given order), relabeled `1..=keep.len()`.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut label = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            label[v] = i + 1;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| label[u] != 0 && label[v] != 0)
            .map(|&(u, v)| (label[u], label[v]));
        Graph::new(keep.len(), edges).expect("induced subgraph of a valid graph")
    }
}

fn check_edge(n: usize, u: Vertex, v: Vertex) -> Result<()> {
    for x in [u, v] {
        if x == 0 || x > n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(Error::SelfLoop { u, v });
    }
    Ok(())
}

/// Loop weights keyed by vertex. Absent means zero; zero is never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopWeights {
    weights: BTreeMap<Vertex, Rational>,
}

impl LoopWeights {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Vertex) -> Rational {
        self.weights.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, v: Vertex, w: Rational) {
        if w.is_zero() {
            self.weights.remove(&v);
        } else {
            self.weights.insert(v, w);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Non-zero weights in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &Rational)> {
        self.weights.iter().map(|(&v, w)| (v, w))
    }

    /// Restriction to `keep`, relabeled `1..=keep.len()` like [`Graph::induced`].
    pub fn induced(&self, keep: &[Vertex]) -> LoopWeights {
        let mut out = LoopWeights::new();
        for (i, &v) in keep.iter().enumerate() {
            out.set(i + 1, self.get(v));
        }
        out
    }
}

impl FromIterator<(Vertex, Rational)> for LoopWeights {
    fn from_iter<I: IntoIterator<Item = (Vertex, Rational)>>(iter: I) -> Self {
        let mut out = LoopWeights::new();
        for (v, w) in iter {
            out.set(v, w);
        }
        out
    }
}

/// Dense square matrix of rationals, row-major, 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    order: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(order: usize) -> Self {
        RationalMatrix { order, entries: vec![Rational::zero(); order * order] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let order = rows.len();
        assert!(rows.iter().all(|r| r.len() == order), "matrix must be square");
        RationalMatrix { order, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.order + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The matrix with rows and columns permuted: entry `(i, j)` of the result
    /// is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = RationalMatrix::zeros(self.order);
        for (i, &pi) in perm.iter().enumerate() {
            for (j, &pj) in perm.iter().enumerate() {
                out.set(i, j, self.get(pi, pj).clone());
            }
        }
        out
    }
}

/// Adjacency matrix with loop weights on the diagonal. Row `i` is vertex `i + 1`.
pub fn adjacency_matrix(graph: &Graph, weights: &LoopWeights) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(graph.vertex_count());
    for &(u, v) in graph.edges() {
        m.set(u - 1, v - 1, Rational::one());
        m.set(v - 1, u - 1, Rational::one());
    }
    for (v, w) in weights.iter() {
        m.set(v - 1, v - 1, w.clone());
    }
    m
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn connected_components(graph: &Graph) -> Vec<Vec<Vertex>> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in graph.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in graph.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected {what}, found {tok:?}")))
}

pub fn parse_graph(text: &str) -> Result<(Graph, LoopWeights)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line \"n m\""))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(hline, "header must be \"n m\""));
    }
    let n = parse_usize(hline, head[0], "vertex count")?;
    let m = parse_usize(hline, head[1], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut weights = LoopWeights::new();
    let mut weighted = HashSet::new();
    let mut last_line = hline;

    for (lineno, line) in lines {
        last_line = lineno;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "l" {
            if toks.len() != 3 {
                return Err(parse_err(lineno, "loop line must be \"l v p/q\""));
            }
            let v = parse_usize(lineno, toks[1], "vertex id")?;
            if v == 0 || v > n {
                return Err(parse_err(lineno, Error::VertexOutOfRange { vertex: v, n }.to_string()));
            }
            let w: Rational = toks[2].parse().map_err(|e: Error| parse_err(lineno, e.to_string()))?;
            if !weighted.insert(v) {
                return Err(parse_err(lineno, format!("duplicate loop weight for vertex {v}")));
            }
            weights.set(v, w);
            continue;
        }
        if !weighted.is_empty() {
            return Err(parse_err(lineno, "edge line after loop lines"));
        }
        if toks.len() != 2 {
            return Err(parse_err(lineno, "edge line must be \"u v\""));
        }
        if edges.len() == m {
            return Err(parse_err(lineno, format!("more than {m} edge lines")));
        }
        let u = parse_usize(lineno, toks[0], "vertex id")?;
        let v = parse_usize(lineno, toks[1], "vertex id")?;
        check_edge(n, u, v).map_err(|e| parse_err(lineno, e.to_string()))?;
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(lineno, Error::DuplicateEdge { u, v }.to_string()));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(last_line, format!("expected {m} edges, found {}", edges.len())));
    }
    Ok((Graph::new(n, edges)?, weights))
}

/// Canonical text: sorted edges, then loops sorted by vertex.
pub fn serialize_graph(graph: &Graph, weights: &LoopWeights) -> String {
    let mut out = String::with_capacity(12 * (graph.edge_count() + 1));
    let _ = writeln!(out, "{} {}", graph.vertex_count(), graph.edge_count());
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for (v, w) in weights.iter() {
        let _ = writeln!(out, "l {v} {w}");
    }
    out
}
