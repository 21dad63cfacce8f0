//! Block (biconnected component) decomposition, block-graph validation, and
//! the `BV`/`CV`/`f` bookkeeping used by the reduction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Output of [`biconnected_components`].
///
/// Blocks are sorted vertex lists in canonical order: blocks owning at least
/// one non-cut vertex come first, ordered by their smallest non-cut vertex;
/// blocks made only of cut vertices follow in lexicographic order. The order
/// depends only on the edge set, never on adjacency-list order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub blocks: Vec<Vec<Vertex>>,
    /// Number of graph edges inside each block.
    pub edge_counts: Vec<usize>,
    /// Sorted.
    pub cut_vertices: Vec<Vertex>,
}

impl Blocks {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Hopcroft-Tarjan with an explicit DFS stack and an edge stack. Bridges are
/// 2-vertex blocks, isolated vertices are 1-vertex blocks.
pub fn biconnected_components(graph: &Graph) -> Blocks {
    let n = graph.vertex_count();
    let mut disc = vec![0usize; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut is_cut = vec![false; n + 1];
    let mut stamp = vec![usize::MAX; n + 1];
    let mut time = 0usize;

    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    // (vertex, parent, next neighbor index)
    let mut frames: Vec<(Vertex, Vertex, usize)> = Vec::new();
    let mut raw: Vec<(Vec<Vertex>, usize)> = Vec::new();

    for root in graph.vertices() {
        if disc[root] != 0 {
            continue;
        }
        time += 1;
        disc[root] = time;
        low[root] = time;
        if graph.degree(root) == 0 {
            raw.push((vec![root], 0));
            continue;
        }
        let mut root_children = 0;
        frames.push((root, 0, 0));

        while let Some(frame) = frames.last_mut() {
            let (v, parent) = (frame.0, frame.1);
            let nbrs = graph.neighbors(v);
            if frame.2 < nbrs.len() {
                let w = nbrs[frame.2];
                frame.2 += 1;
                if disc[w] == 0 {
                    edge_stack.push((v, w));
                    time += 1;
                    disc[w] = time;
                    low[w] = time;
                    if v == root {
                        root_children += 1;
                    }
                    frames.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }

            frames.pop();
            let u = parent;
            if u == 0 {
                continue;
            }
            low[u] = low[u].min(low[v]);
            if low[v] >= disc[u] {
                if u != root {
                    is_cut[u] = true;
                }
                let id = raw.len();
                let mut verts = Vec::new();
                let mut edges = 0;
                while let Some(e) = edge_stack.pop() {
                    edges += 1;
                    for x in [e.0, e.1] {
                        if stamp[x] != id {
                            stamp[x] = id;
                            verts.push(x);
                        }
                    }
                    if e == (u, v) {
                        break;
                    }
                }
                raw.push((verts, edges));
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }

    for (verts, _) in raw.iter_mut() {
        verts.sort_unstable();
    }
    let key = |verts: &Vec<Vertex>| verts.iter().copied().find(|&v| !is_cut[v]);
    raw.sort_by(|(a, _), (b, _)| match (key(a), key(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.cmp(b),
    });

    let (blocks, edge_counts) = raw.into_iter().unzip();
    let cut_vertices = (1..=n).filter(|&v| is_cut[v]).collect();
    Blocks { blocks, edge_counts, cut_vertices }
}

/// Checks that every block is a clique. Each edge lies in exactly one block,
/// so comparing edge counts against `k(k-1)/2` is enough.
pub fn validate_block_graph(blocks: &Blocks) -> Result<()> {
    for (i, (verts, &edges)) in blocks.blocks.iter().zip(&blocks.edge_counts).enumerate() {
        let k = verts.len();
        if edges != k * (k - 1) / 2 {
            return Err(Error::NotBlockGraph { block: i + 1, vertices: k, edges });
        }
    }
    Ok(())
}

pub fn is_block_graph(graph: &Graph) -> bool {
    validate_block_graph(&biconnected_components(graph)).is_ok()
}

/// `BV`: vertex set per block; `CV`: cut vertices per block; `f`: number of
/// blocks that list each cut vertex in `CV`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutStructure {
    pub bv: Vec<Vec<Vertex>>,
    pub cv: Vec<Vec<Vertex>>,
    pub f: BTreeMap<Vertex, usize>,
}

impl BlockCutStructure {
    pub fn from_blocks(blocks: &Blocks) -> Self {
        let mut cut = BTreeSet::new();
        cut.extend(blocks.cut_vertices.iter().copied());
        let mut f = BTreeMap::new();
        let cv = blocks
            .blocks
            .iter()
            .map(|b| {
                let c: Vec<Vertex> = b.iter().copied().filter(|v| cut.contains(v)).collect();
                for &p in &c {
                    *f.entry(p).or_insert(0) += 1;
                }
                c
            })
            .collect();
        BlockCutStructure { bv: blocks.blocks.clone(), cv, f }
    }

    pub fn len(&self) -> usize {
        self.bv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bv.is_empty()
    }
}

/// Decomposes and validates in one go.
pub fn build_block_cut_structure(graph: &Graph) -> Result<BlockCutStructure> {
    let blocks = biconnected_components(graph);
    validate_block_graph(&blocks)?;
    Ok(BlockCutStructure::from_blocks(&blocks))
}

/// `U - S_i`: drop set `i` (0-based), keep the order of the rest.
pub fn sets_minus(sets: &[BTreeSet<Vertex>], i: usize) -> Result<Vec<BTreeSet<Vertex>>> {
    if i >= sets.len() {
        return Err(Error::IndexOutOfRange { index: i, len: sets.len() });
    }
    Ok(sets.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s.clone()).collect())
}

/// `U -* S_i`: drop set `i` (0-based) and remove its members from every other set.
pub fn sets_star_minus(sets: &[BTreeSet<Vertex>], i: usize) -> Result<Vec<BTreeSet<Vertex>>> {
    if i >= sets.len() {
        return Err(Error::IndexOutOfRange { index: i, len: sets.len() });
    }
    let removed = &sets[i];
    Ok(sets
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, s)| s.difference(removed).copied().collect())
        .collect())
}
