//! Fixture graphs and seeded random block graphs.
//!
//! All randomness comes from [`SplitMix64`] so that a seed reproduces the same
//! graph on any platform.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// SplitMix64 (Steele, Lea, Flood 2014). `below(n)` maps a 64-bit output to
/// `0..n` with a 128-bit multiply-high.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenSpec {
    /// Three K4 and one K3 around cut vertices 1, 2, 3 (12 vertices).
    Fig1,
    /// Four triangles, the central one on {1, 2, 3} (9 vertices).
    Fig2,
    /// The star K_{1,8} centred at 1.
    Fig3,
    Complete(usize),
    Path(usize),
    /// K_{1,n-1} centred at vertex 1.
    Star(usize),
    /// Triangles `{1, 2i, 2i+1}` sharing vertex 1; for even `n` vertex `n`
    /// hangs off vertex 1 as a pendant edge.
    StarOfTriangles(usize),
    RandomTree { n: usize, seed: u64 },
    /// A random tree of `num_blocks` cliques; each child clique shares one
    /// vertex with its parent. Sizes are uniform in `min_block..=max_block`.
    RandomBlock { num_blocks: usize, min_block: usize, max_block: usize, seed: u64 },
}

fn clique_edges(verts: &[Vertex], edges: &mut Vec<(Vertex, Vertex)>) {
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            edges.push((u, v));
        }
    }
}

fn from_cliques(n: usize, cliques: &[&[Vertex]]) -> Graph {
    let mut edges = Vec::new();
    for c in cliques {
        clique_edges(c, &mut edges);
    }
    Graph::new(n, edges).expect("fixture cliques are edge-disjoint")
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidSpec(msg.to_string()))
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    match *spec {
        GenSpec::Fig1 => Ok(from_cliques(12, &[&[3, 5, 6, 7], &[1, 4, 3, 2], &[2, 11, 12], &[1, 10, 8, 9]])),
        GenSpec::Fig2 => Ok(from_cliques(9, &[&[3, 4, 5], &[1, 8, 9], &[2, 6, 7], &[1, 2, 3]])),
        GenSpec::Fig3 => generate(&GenSpec::Star(9)),
        GenSpec::Complete(k) => {
            need(k >= 1, "complete graph needs k >= 1")?;
            let verts: Vec<Vertex> = (1..=k).collect();
            Ok(from_cliques(k, &[&verts]))
        }
        GenSpec::Path(n) => {
            need(n >= 1, "path needs n >= 1")?;
            Graph::new(n, (1..n).map(|v| (v, v + 1)))
        }
        GenSpec::Star(n) => {
            need(n >= 1, "star needs n >= 1")?;
            Graph::new(n, (2..=n).map(|v| (1, v)))
        }
        GenSpec::StarOfTriangles(n) => {
            need(n >= 1, "star of triangles needs n >= 1")?;
            let mut edges = Vec::with_capacity(3 * n / 2);
            for i in 1..=(n - 1) / 2 {
                clique_edges(&[1, 2 * i, 2 * i + 1], &mut edges);
            }
            if n % 2 == 0 {
                edges.push((1, n));
            }
            Graph::new(n, edges)
        }
        GenSpec::RandomTree { n, seed } => {
            need(n >= 1, "random tree needs n >= 1")?;
            let mut rng = SplitMix64::new(seed);
            let seq: Vec<Vertex> = (0..n.saturating_sub(2)).map(|_| 1 + rng.below(n)).collect();
            Ok(prufer_to_tree(&seq, n))
        }
        GenSpec::RandomBlock { num_blocks, min_block, max_block, seed } => {
            need(num_blocks >= 1, "random block graph needs at least one block")?;
            need(min_block >= 2, "min_block must be >= 2")?;
            need(max_block >= min_block, "max_block must be >= min_block")?;
            let mut rng = SplitMix64::new(seed);
            let mut blocks: Vec<Vec<Vertex>> = Vec::with_capacity(num_blocks);
            let mut next = 1;
            for i in 0..num_blocks {
                let size = rng.range(min_block, max_block);
                let mut verts = Vec::with_capacity(size);
                if i > 0 {
                    let parent = &blocks[rng.below(i)];
                    verts.push(parent[rng.below(parent.len())]);
                }
                while verts.len() < size {
                    verts.push(next);
                    next += 1;
                }
                blocks.push(verts);
            }
            let mut edges = Vec::new();
            for b in &blocks {
                clique_edges(b, &mut edges);
            }
            Graph::new(next - 1, edges)
        }
    }
}

/// Decodes a Prüfer sequence over `1..=n` (length `n - 2`) into a labeled tree.
pub fn prufer_to_tree(seq: &[Vertex], n: usize) -> Graph {
    if n <= 1 {
        return Graph::empty(n);
    }
    assert_eq!(seq.len(), n - 2, "Prüfer sequence must have length n - 2");
    let mut degree = vec![1usize; n + 1];
    for &x in seq {
        degree[x] += 1;
    }
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 && x < ptr {
            leaf = x;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n));
    Graph::new(n, edges).expect("Prüfer decoding yields a simple tree")
}

/// Every labeled tree on `1..=n`, once each, by walking all Prüfer sequences.
pub fn enumerate_labeled_trees(n: usize) -> Result<LabeledTrees> {
    need((1..=8).contains(&n), "labeled tree enumeration supports 1 <= n <= 8")?;
    Ok(LabeledTrees { n, seq: vec![1; n.saturating_sub(2)], done: false })
}

pub struct LabeledTrees {
    n: usize,
    seq: Vec<Vertex>,
    done: bool,
}

impl Iterator for LabeledTrees {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let tree = prufer_to_tree(&self.seq, self.n);
        // odometer increment; wraps to done
        self.done = true;
        for digit in self.seq.iter_mut().rev() {
            if *digit < self.n {
                *digit += 1;
                self.done = false;
                break;
            }
            *digit = 1;
        }
        Some(tree)
    }
}
