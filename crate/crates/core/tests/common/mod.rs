#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gsing::blocks::{build_block_cut_structure, sets_minus, sets_star_minus, BlockCutStructure};
use gsing::clique::{clique_case, clique_is_singular, CliqueCase, CliqueWeights};
use gsing::gen::{generate, GenSpec, SplitMix64};
use gsing::graph::{adjacency_matrix, Graph, LoopWeights, Vertex};
use gsing::oracle::exact_determinant;
use gsing::reduction::{CaseTag, TraceStep};
use gsing::Rational;

pub fn oracle_singular(g: &Graph, w: &LoopWeights) -> bool {
    exact_determinant(&adjacency_matrix(g, w)).is_zero()
}

/// Random block graph with `lo..=hi` vertices (rejection on the block count).
pub fn random_block_graph(rng: &mut SplitMix64, lo: usize, hi: usize, max_block: usize) -> Graph {
    loop {
        let num_blocks = 1 + rng.below(hi / 2);
        let spec = GenSpec::RandomBlock { num_blocks, min_block: 2, max_block, seed: rng.next_u64() };
        let g = generate(&spec).unwrap();
        if (lo..=hi).contains(&g.vertex_count()) {
            return g;
        }
    }
}

/// Small rationals biased toward 0 and 1 so every branch gets exercised.
pub fn random_weight(rng: &mut SplitMix64) -> Rational {
    match rng.below(8) {
        0..=2 => Rational::zero(),
        3 => Rational::one(),
        _ => Rational::new(rng.below(9) as i64 - 4, 1 + rng.below(3) as i64).unwrap(),
    }
}

pub fn random_weights(rng: &mut SplitMix64, g: &Graph, density: usize) -> LoopWeights {
    let mut w = LoopWeights::new();
    for v in g.vertices() {
        if rng.below(density) == 0 {
            w.set(v, random_weight(rng));
        }
    }
    w
}

pub fn set(xs: &[Vertex]) -> BTreeSet<Vertex> {
    xs.iter().copied().collect()
}

/// Literal set-based elimination over `BV`/`CV`/`f`, rebuilt with the
/// auxiliary operations at every step. Quadratic; test-only reference.
pub struct Reference {
    pub bv: Vec<BTreeSet<Vertex>>,
    pub cv: Vec<BTreeSet<Vertex>>,
    pub f: BTreeMap<Vertex, usize>,
    pub w: BTreeMap<Vertex, Rational>,
}

impl Reference {
    pub fn new(s: &BlockCutStructure, weights: &LoopWeights) -> Self {
        Reference {
            bv: s.bv.iter().map(|b| set(b)).collect(),
            cv: s.cv.iter().map(|c| set(c)).collect(),
            f: s.f.clone(),
            w: weights.iter().map(|(v, x)| (v, x.clone())).collect(),
        }
    }

    pub fn weight(&self, v: Vertex) -> Rational {
        self.w.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    /// Applies the elimination of pendant set `i`. Returns `Some(true)` on an
    /// early singular stop.
    pub fn eliminate(&mut self, i: usize) -> Option<bool> {
        assert_eq!(self.cv[i].len(), 1);
        let p = *self.cv[i].iter().next().unwrap();
        let leaf: CliqueWeights = self.bv[i].iter().filter(|&&v| v != p).map(|&v| self.weight(v)).collect();
        match clique_case(&leaf) {
            CliqueCase::MultipleOnes => return Some(true),
            CliqueCase::SumCase(s) if s.is_one() => {
                self.bv = sets_star_minus(&self.bv, i).unwrap();
                self.cv = sets_star_minus(&self.cv, i).unwrap();
                self.w.remove(&p);
            }
            case => {
                let gamma = case.gamma().unwrap();
                let new = self.weight(p) + gamma;
                self.w.insert(p, new);
                self.bv = sets_minus(&self.bv, i).unwrap();
                if self.f[&p] == 2 {
                    self.cv = sets_star_minus(&self.cv, i).unwrap();
                    self.f.remove(&p);
                } else {
                    self.cv = sets_minus(&self.cv, i).unwrap();
                    *self.f.get_mut(&p).unwrap() -= 1;
                }
            }
        }
        None
    }

    pub fn final_singular(&self) -> bool {
        self.bv.iter().any(|b| {
            let w: CliqueWeights = b.iter().map(|&v| self.weight(v)).collect();
            clique_is_singular(&w)
        })
    }

    /// First-pendant-in-order run to completion.
    pub fn run(mut self) -> bool {
        while let Some(i) = self.cv.iter().position(|c| c.len() == 1) {
            if let Some(s) = self.eliminate(i) {
                return s;
            }
        }
        self.final_singular()
    }

    pub fn index_of(&self, block: &[Vertex]) -> usize {
        let b = set(block);
        self.bv.iter().position(|x| *x == b).expect("trace block present in replay state")
    }

    /// Replays one elimination step from a trace.
    pub fn replay(&mut self, step: &TraceStep) {
        assert_ne!(step.case, CaseTag::FinalComponent);
        let i = self.index_of(&step.block);
        assert_eq!(self.cv[i].iter().copied().collect::<Vec<_>>(), vec![step.cut_vertex.unwrap()]);
        let stopped = self.eliminate(i);
        assert_eq!(stopped.is_some(), step.case == CaseTag::MultipleOnes);
        if let Some(w) = &step.new_weight {
            assert_eq!(&self.weight(step.cut_vertex.unwrap()), w);
        }
    }
}

pub fn reference_singular(g: &Graph, w: &LoopWeights) -> bool {
    Reference::new(&build_block_cut_structure(g).unwrap(), w).run()
}

/// Random relabeling with the edges fed in shuffled order.
pub fn scramble(rng: &mut SplitMix64, g: &Graph, w: &LoopWeights) -> (Graph, LoopWeights, Vec<Vertex>) {
    let n = g.vertex_count();
    let mut perm: Vec<Vertex> = (0..=n).collect();
    for i in (2..=n).rev() {
        let j = 1 + rng.below(i);
        perm.swap(i, j);
    }
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().iter().map(|&(u, v)| (perm[v], perm[u])).collect();
    for i in (1..edges.len()).rev() {
        let j = rng.below(i + 1);
        edges.swap(i, j);
    }
    let weights = w.iter().map(|(v, x)| (perm[v], x.clone())).collect();
    (Graph::new(n, edges).unwrap(), weights, perm)
}

/// Disjoint union; `h` is shifted past `g`.
pub fn disjoint_union(g: &Graph, wg: &LoopWeights, h: &Graph, wh: &LoopWeights) -> (Graph, LoopWeights) {
    let n = g.vertex_count();
    let edges = g.edges().iter().copied().chain(h.edges().iter().map(|&(u, v)| (u + n, v + n)));
    let weights = wg.iter().map(|(v, x)| (v, x.clone())).chain(wh.iter().map(|(v, x)| (v + n, x.clone()))).collect();
    (Graph::new(n + h.vertex_count(), edges).unwrap(), weights)
}

fn rank_of(g: &Graph, w: &LoopWeights) -> usize {
    gsing::oracle::exact_rank(&adjacency_matrix(g, w))
}

fn clique_rank(w: &CliqueWeights) -> usize {
    if w.is_empty() {
        return 0;
    }
    let g = generate(&GenSpec::Complete(w.len())).unwrap();
    let lw = w.0.iter().enumerate().map(|(i, x)| (i + 1, x.clone())).collect();
    rank_of(&g, &lw)
}

#[derive(Debug, Default, Clone, Copy)]
pub struct StepCounts {
    pub folds: usize,
    pub deletions: usize,
}

/// Runs the reduction step by step and checks, with the oracle, that every
/// fold splits the rank as `rank(before) = rank(leaf) + rank(after)` and that
/// every unit-sum deletion keeps the singularity status (it removes
/// `|leaf| + 1` from the rank).
pub fn check_step_ranks(g: &Graph, w: &LoopWeights) -> Result<StepCounts, String> {
    use gsing::reduction::{Elimination, ReductionState};
    use gsing::PendantOrder;

    let mut counts = StepCounts::default();
    let mut state = ReductionState::new(g, w, PendantOrder::LowestIndex).map_err(|e| e.to_string())?;
    while let Some(i) = state.find_pendant() {
        let (before, wb, _) = state.current_graph();
        let r_before = rank_of(&before, &wb);
        let snapshot = state.weights();
        let result = state.eliminate_pendant(i).map_err(|e| e.to_string())?;
        let step = state.trace().last().unwrap().clone();
        if let Elimination::Singular { .. } = result {
            if r_before == before.vertex_count() {
                return Err(format!("early singular stop on a nonsingular graph at step {}", step.step));
            }
            break;
        }
        let p = step.cut_vertex.unwrap();
        let leaf: CliqueWeights = step.block.iter().filter(|&&v| v != p).map(|&v| snapshot.get(v)).collect();
        let (after, wa, _) = state.current_graph();
        let r_after = rank_of(&after, &wa);
        if step.case == CaseTag::SumEqOne {
            counts.deletions += 1;
            let kept = (r_before == before.vertex_count()) == (r_after == after.vertex_count());
            if !kept || r_before != r_after + leaf.len() + 1 {
                return Err(format!("unit-sum step {} changed singularity ({r_before} vs {r_after})", step.step));
            }
        } else {
            counts.folds += 1;
            let r_leaf = clique_rank(&leaf);
            if r_before != r_leaf + r_after {
                return Err(format!("step {}: rank {r_before} != {r_leaf} + {r_after}", step.step));
            }
        }
    }
    Ok(counts)
}
