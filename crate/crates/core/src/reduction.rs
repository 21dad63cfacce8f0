//! Pendant-block elimination.
//!
//! Repeatedly pick a block with exactly one cut vertex `p`, look at the
//! weighted clique formed by its other vertices, and either
//!
//! * stop with a singular verdict (two or more unit weights),
//! * fold the clique into `p` by adding `gamma` to `p`'s loop weight and drop
//!   the block, or
//! * when the clique itself is singular (`S = 1`), delete the whole block
//!   including `p` from every other block.
//!
//! Once no pendant block is left every remaining block is an isolated weighted
//! clique and is checked directly.
//!
//! Each block is visited O(1) times and every vertex's block list is scanned
//! at most once when it stops being a cut vertex, so the bookkeeping is linear
//! in the graph size. Rational arithmetic is exact and unbounded.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::blocks::{biconnected_components, validate_block_graph, BlockCutStructure};
use crate::clique::{clique_case, CliqueCase, CliqueWeights};
use crate::error::{Error, Result};
use crate::gen::SplitMix64;
use crate::graph::{Graph, LoopWeights, Vertex};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    MultipleOnes,
    OneEqualsOne,
    SumNeqOne,
    SumEqOne,
    FinalComponent,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::MultipleOnes => "multiple_ones",
            CaseTag::OneEqualsOne => "one_equals_one",
            CaseTag::SumNeqOne => "sum_neq_one",
            CaseTag::SumEqOne => "sum_eq_one",
            CaseTag::FinalComponent => "final_component",
        }
    }
}

/// One elimination (or one final clique check).
///
/// `block` is the block's live vertex set at the time of the step, including
/// the cut vertex. `s` is present for the `sum_*` cases and for final
/// components whose weights contain no 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub block: Vec<Vertex>,
    pub cut_vertex: Option<Vertex>,
    pub case: CaseTag,
    #[serde(rename = "S")]
    pub s: Option<Rational>,
    pub gamma: Option<Rational>,
    pub new_weight: Option<Rational>,
}

impl TraceStep {
    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace steps always serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Singular { reason: CaseTag, block: Vec<Vertex> },
    Nonsingular,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub eliminations: usize,
    /// Largest numerator or denominator bit length of any weight, `S` or
    /// `gamma` produced along the way.
    pub max_rational_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub trace: Vec<TraceStep>,
    pub stats: ReductionStats,
}

impl Verdict {
    pub fn is_singular(&self) -> bool {
        matches!(self.outcome, Outcome::Singular { .. })
    }
}

/// How the next pendant block is chosen when several are available.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PendantOrder {
    /// Lowest live block index; reproducible traces.
    #[default]
    LowestIndex,
    /// Uniformly random among current pendants, for order-invariance tests.
    Seeded(u64),
}

enum PendantQueue {
    Lowest(BinaryHeap<Reverse<usize>>),
    Random(Vec<usize>, SplitMix64),
}

impl PendantQueue {
    fn push(&mut self, block: usize) {
        match self {
            PendantQueue::Lowest(heap) => heap.push(Reverse(block)),
            PendantQueue::Random(items, _) => items.push(block),
        }
    }

    fn pop(&mut self) -> Option<usize> {
        match self {
            PendantQueue::Lowest(heap) => heap.pop().map(|Reverse(b)| b),
            PendantQueue::Random(items, rng) => {
                if items.is_empty() {
                    None
                } else {
                    let i = rng.below(items.len());
                    Some(items.swap_remove(i))
                }
            }
        }
    }
}

/// What [`ReductionState::eliminate_pendant`] did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// The block was folded into its cut vertex or deleted; keep going.
    Continue,
    /// Two or more unit weights in the pendant clique.
    Singular { block: Vec<Vertex> },
}

/// Live `BV`/`CV`/`f` and weights during elimination.
///
/// `CV(i)` is never stored: it is the set of alive vertices of block `i`
/// that still lie in two or more live blocks, and only its size is tracked.
pub struct ReductionState {
    blocks: Vec<Vec<Vertex>>,
    block_live: Vec<bool>,
    cut_count: Vec<usize>,
    vertex_alive: Vec<bool>,
    /// Live blocks containing each vertex (`f(v)` when at least 2).
    live_count: Vec<usize>,
    /// CSR lists of the blocks containing each vertex.
    vb_start: Vec<usize>,
    vb_list: Vec<usize>,
    weights: Vec<Rational>,
    queue: PendantQueue,
    trace: Vec<TraceStep>,
    stats: ReductionStats,
}

impl ReductionState {
    /// Decomposes and validates `graph`; fails if it is not a block graph.
    pub fn new(graph: &Graph, weights: &LoopWeights, order: PendantOrder) -> Result<Self> {
        let blocks = biconnected_components(graph);
        validate_block_graph(&blocks)?;
        Ok(Self::from_structure(graph.vertex_count(), blocks.blocks, weights, order))
    }

    /// Starts from an already validated structure.
    pub fn from_block_cut_structure(
        n: usize,
        structure: &BlockCutStructure,
        weights: &LoopWeights,
        order: PendantOrder,
    ) -> Self {
        Self::from_structure(n, structure.bv.clone(), weights, order)
    }

    fn from_structure(n: usize, blocks: Vec<Vec<Vertex>>, weights: &LoopWeights, order: PendantOrder) -> Self {
        let mut live_count = vec![0usize; n + 1];
        for b in &blocks {
            for &v in b {
                live_count[v] += 1;
            }
        }
        let mut vb_start = vec![0usize; n + 2];
        for v in 1..=n {
            vb_start[v + 1] = vb_start[v] + live_count[v];
        }
        let mut fill = vb_start.clone();
        let mut vb_list = vec![0usize; vb_start[n + 1]];
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                vb_list[fill[v]] = i;
                fill[v] += 1;
            }
        }

        let cut_count: Vec<usize> =
            blocks.iter().map(|b| b.iter().filter(|&&v| live_count[v] >= 2).count()).collect();

        let mut queue = match order {
            PendantOrder::LowestIndex => PendantQueue::Lowest(BinaryHeap::new()),
            PendantOrder::Seeded(seed) => PendantQueue::Random(Vec::new(), SplitMix64::new(seed)),
        };
        for (i, &c) in cut_count.iter().enumerate() {
            if c == 1 {
                queue.push(i);
            }
        }

        let mut dense = vec![Rational::zero(); n + 1];
        let mut stats = ReductionStats::default();
        for (v, w) in weights.iter() {
            stats.max_rational_bits = stats.max_rational_bits.max(w.bits());
            dense[v] = w.clone();
        }

        ReductionState {
            block_live: vec![true; blocks.len()],
            // each block yields at most one step
            trace: Vec::with_capacity(blocks.len()),
            blocks,
            cut_count,
            vertex_alive: vec![true; n + 1],
            live_count,
            vb_start,
            vb_list,
            weights: dense,
            queue,
            stats,
        }
    }

    fn blocks_of(&self, v: Vertex) -> &[usize] {
        &self.vb_list[self.vb_start[v]..self.vb_start[v + 1]]
    }

    fn note_bits(&mut self, x: &Rational) {
        self.stats.max_rational_bits = self.stats.max_rational_bits.max(x.bits());
    }

    fn is_cut(&self, v: Vertex) -> bool {
        self.vertex_alive[v] && self.live_count[v] >= 2
    }

    fn alive_vertices(&self, i: usize) -> Vec<Vertex> {
        self.blocks[i].iter().copied().filter(|&v| self.vertex_alive[v]).collect()
    }

    pub fn is_pendant(&self, i: usize) -> bool {
        i < self.blocks.len() && self.block_live[i] && self.cut_count[i] == 1
    }

    /// Next pendant block, skipping stale queue entries.
    pub fn find_pendant(&mut self) -> Option<usize> {
        while let Some(i) = self.queue.pop() {
            if self.is_pendant(i) {
                return Some(i);
            }
        }
        None
    }

    fn push_step(&mut self, mut step: TraceStep) {
        step.step = self.trace.len() + 1;
        self.trace.push(step);
    }

    /// Eliminates pendant block `i`.
    pub fn eliminate_pendant(&mut self, i: usize) -> Result<Elimination> {
        if !self.is_pendant(i) {
            return Err(Error::Contract(format!("block index {i} is not a live pendant block")));
        }
        let block = self.alive_vertices(i);
        let p = *block
            .iter()
            .find(|&&v| self.is_cut(v))
            .expect("pendant block has a cut vertex");
        let leaf: CliqueWeights = block.iter().filter(|&&v| v != p).map(|&v| self.weights[v].clone()).collect();

        let case = clique_case(&leaf);
        let mut step = TraceStep {
            step: 0,
            block: block.clone(),
            cut_vertex: Some(p),
            case: CaseTag::MultipleOnes,
            s: None,
            gamma: None,
            new_weight: None,
        };

        match case {
            CliqueCase::MultipleOnes => {
                self.push_step(step);
                return Ok(Elimination::Singular { block });
            }
            CliqueCase::SumCase(ref s) if s.is_one() => {
                step.case = CaseTag::SumEqOne;
                step.s = Some(s.clone());
                self.delete_with_cut_vertex(i, &block, p);
            }
            _ => {
                let gamma = case.gamma()?;
                if let CliqueCase::SumCase(s) = case {
                    self.note_bits(&s);
                    step.case = CaseTag::SumNeqOne;
                    step.s = Some(s);
                } else {
                    step.case = CaseTag::OneEqualsOne;
                }
                self.weights[p] += &gamma;
                let updated = self.weights[p].clone();
                self.note_bits(&gamma);
                self.note_bits(&updated);
                step.gamma = Some(gamma);
                step.new_weight = Some(updated);
                self.fold_into_cut_vertex(i, &block, p);
            }
        }
        self.stats.eliminations += 1;
        self.push_step(step);
        Ok(Elimination::Continue)
    }

    /// Drop block `i`; `p` survives with its updated weight.
    fn fold_into_cut_vertex(&mut self, i: usize, block: &[Vertex], p: Vertex) {
        self.block_live[i] = false;
        for &v in block {
            if v != p {
                self.vertex_alive[v] = false;
                self.live_count[v] = 0;
            }
        }
        self.live_count[p] -= 1;
        if self.live_count[p] == 1 {
            // p stops being a cut vertex of its last block
            let last = self
                .blocks_of(p)
                .iter()
                .copied()
                .find(|&j| self.block_live[j])
                .expect("cut vertex lies in another live block");
            self.lose_cut_vertex(last);
        }
    }

    /// Drop block `i` together with `p`, removing `p` from every other block.
    fn delete_with_cut_vertex(&mut self, i: usize, block: &[Vertex], p: Vertex) {
        self.block_live[i] = false;
        for &v in block {
            self.vertex_alive[v] = false;
            self.live_count[v] = 0;
        }
        self.weights[p] = Rational::zero();
        for k in self.vb_start[p]..self.vb_start[p + 1] {
            let j = self.vb_list[k];
            if self.block_live[j] {
                self.lose_cut_vertex(j);
            }
        }
    }

    fn lose_cut_vertex(&mut self, j: usize) {
        self.cut_count[j] -= 1;
        if self.cut_count[j] == 1 {
            self.queue.push(j);
        }
    }

    /// Checks every remaining block as an isolated weighted clique. Call once
    /// [`find_pendant`](Self::find_pendant) has returned `None`.
    pub fn final_check(&mut self) -> Outcome {
        let mut outcome = Outcome::Nonsingular;
        for i in 0..self.blocks.len() {
            if !self.block_live[i] {
                continue;
            }
            debug_assert_eq!(self.cut_count[i], 0, "final check with pendant blocks left");
            let block = self.alive_vertices(i);
            if block.is_empty() {
                continue;
            }
            let weights: CliqueWeights = block.iter().map(|&v| self.weights[v].clone()).collect();
            let case = clique_case(&weights);
            let singular = case.is_singular();
            let s = match case {
                CliqueCase::SumCase(s) => {
                    self.note_bits(&s);
                    Some(s)
                }
                _ => None,
            };
            if singular && outcome == Outcome::Nonsingular {
                outcome = Outcome::Singular { reason: CaseTag::FinalComponent, block: block.clone() };
            }
            self.push_step(TraceStep {
                step: 0,
                block,
                cut_vertex: None,
                case: CaseTag::FinalComponent,
                s,
                gamma: None,
                new_weight: None,
            });
        }
        outcome
    }

    /// Runs elimination to completion.
    pub fn run(mut self) -> Verdict {
        while let Some(i) = self.find_pendant() {
            match self.eliminate_pendant(i).expect("find_pendant yields live pendant blocks") {
                Elimination::Continue => {}
                Elimination::Singular { block } => {
                    let outcome = Outcome::Singular { reason: CaseTag::MultipleOnes, block };
                    return self.into_verdict(outcome);
                }
            }
        }
        let outcome = self.final_check();
        self.into_verdict(outcome)
    }

    fn into_verdict(self, outcome: Outcome) -> Verdict {
        Verdict { outcome, trace: self.trace, stats: self.stats }
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    pub fn stats(&self) -> &ReductionStats {
        &self.stats
    }

    /// Current weight of `v` (zero once deleted).
    pub fn weight(&self, v: Vertex) -> Rational {
        if self.vertex_alive[v] {
            self.weights[v].clone()
        } else {
            Rational::zero()
        }
    }

    /// Weights of alive vertices; zeros are not stored.
    pub fn weights(&self) -> LoopWeights {
        (1..self.weights.len())
            .filter(|&v| self.vertex_alive[v])
            .map(|v| (v, self.weights[v].clone()))
            .collect()
    }

    /// Live blocks as `(index, alive vertices)` in index order.
    pub fn live_blocks(&self) -> Vec<(usize, Vec<Vertex>)> {
        (0..self.blocks.len()).filter(|&i| self.block_live[i]).map(|i| (i, self.alive_vertices(i))).collect()
    }

    /// Current `BV`/`CV`/`f` restricted to live blocks, in index order.
    pub fn structure(&self) -> BlockCutStructure {
        let mut bv = Vec::new();
        let mut cv = Vec::new();
        let mut f = std::collections::BTreeMap::new();
        for (_, verts) in self.live_blocks() {
            let cuts: Vec<Vertex> = verts.iter().copied().filter(|&v| self.is_cut(v)).collect();
            for &p in &cuts {
                f.insert(p, self.live_count[p]);
            }
            bv.push(verts);
            cv.push(cuts);
        }
        BlockCutStructure { bv, cv, f }
    }

    /// The weighted graph still under consideration: the union of live blocks,
    /// relabeled `1..=k`, with the original ids in the returned label vector.
    pub fn current_graph(&self) -> (Graph, LoopWeights, Vec<Vertex>) {
        let n = self.vertex_alive.len() - 1;
        let mut label = vec![0usize; n + 1];
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        for (_, verts) in self.live_blocks() {
            for &v in &verts {
                if label[v] == 0 {
                    labels.push(v);
                    label[v] = labels.len();
                }
            }
            for (a, &u) in verts.iter().enumerate() {
                for &v in &verts[a + 1..] {
                    edges.push((label[u], label[v]));
                }
            }
        }
        let weights = labels.iter().enumerate().map(|(i, &v)| (i + 1, self.weights[v].clone())).collect();
        let graph = Graph::new(labels.len(), edges).expect("live blocks are edge-disjoint cliques");
        (graph, weights, labels)
    }
}

pub fn is_singular(graph: &Graph) -> Result<Verdict> {
    is_singular_with(graph, &LoopWeights::new(), PendantOrder::LowestIndex)
}

/// Singularity of `A(G)` with `weights` on the diagonal.
pub fn is_singular_with(graph: &Graph, weights: &LoopWeights, order: PendantOrder) -> Result<Verdict> {
    Ok(ReductionState::new(graph, weights, order)?.run())
}
