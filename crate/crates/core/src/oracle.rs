//! Slow exact ground truth: fraction-free determinant and rank, the
//! coalescence determinant identity, and perfect matchings in trees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{adjacency_matrix, connected_components, Graph, LoopWeights, RationalMatrix, Vertex};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub nullity: usize,
    pub det: Rational,
}

/// Scales each row by the lcm of its denominators. Returns the integer rows
/// and the product of the scale factors.
fn clear_denominators(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.order())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    (rows, scale)
}

/// One Bareiss update of rows below `pivot_row`, from column `col` on.
fn bareiss_step(a: &mut [Vec<BigInt>], pivot_row: usize, col: usize, prev: &BigInt) {
    let (top, rest) = a.split_at_mut(pivot_row + 1);
    let pr = &top[pivot_row];
    let pivot = &pr[col];
    for row in rest.iter_mut() {
        let lead = std::mem::take(&mut row[col]);
        for j in col + 1..row.len() {
            let num = &row[j] * pivot - &lead * &pr[j];
            let (q, r) = num.div_rem(prev);
            debug_assert!(r.is_zero(), "Bareiss division must be exact");
            row[j] = q;
        }
    }
}

/// Exact determinant by fraction-free elimination. The empty matrix has determinant 1.
pub fn exact_determinant(m: &RationalMatrix) -> Rational {
    let n = m.order();
    let (mut a, scale) = clear_denominators(m);
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        bareiss_step(&mut a, k, k, &prev);
        prev = a[k][k].clone();
    }
    let det = if negate { -prev } else { prev };
    Rational::new(det, scale).expect("scale is a product of denominators")
}

/// Rank by fraction-free row echelon form; pivots are the first nonzero entry
/// in each column, scanning rows in order.
pub fn exact_rank(m: &RationalMatrix) -> usize {
    let n = m.order();
    let (mut a, _) = clear_denominators(m);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(p) = (rank..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        bareiss_step(&mut a, rank, col, &prev);
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

pub fn exact_rank_nullity(m: &RationalMatrix) -> RankReport {
    let rank = exact_rank(m);
    let det = exact_determinant(m);
    debug_assert_eq!(det.is_zero(), rank < m.order());
    RankReport { rank, nullity: m.order() - rank, det }
}

/// Determinant of the weighted adjacency matrix.
pub fn graph_determinant(graph: &Graph, weights: &LoopWeights) -> Rational {
    exact_determinant(&adjacency_matrix(graph, weights))
}

fn check_vertex(graph: &Graph, v: Vertex) -> Result<()> {
    if v == 0 || v > graph.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: v, n: graph.vertex_count() });
    }
    Ok(())
}

/// Glues `v1` of `g1` to `v2` of `g2`. The merged vertex keeps label `v1`;
/// the other vertices of `g2` follow `g1`'s in order. The merged vertex gets
/// loop weight `alpha`.
pub fn coalesce(
    g1: &Graph,
    w1: &LoopWeights,
    v1: Vertex,
    g2: &Graph,
    w2: &LoopWeights,
    v2: Vertex,
    alpha: &Rational,
) -> Result<(Graph, LoopWeights)> {
    check_vertex(g1, v1)?;
    check_vertex(g2, v2)?;
    let n1 = g1.vertex_count();
    let map = |v: Vertex| match v.cmp(&v2) {
        std::cmp::Ordering::Equal => v1,
        std::cmp::Ordering::Less => n1 + v,
        std::cmp::Ordering::Greater => n1 + v - 1,
    };
    let n = n1 + g2.vertex_count() - 1;
    let edges = g1.edges().iter().copied().chain(g2.edges().iter().map(|&(u, v)| (map(u), map(v))));
    let graph = Graph::new(n, edges)?;
    let mut weights: LoopWeights = w1.iter().map(|(v, w)| (v, w.clone())).collect();
    for (v, w) in w2.iter() {
        if v != v2 {
            weights.set(map(v), w.clone());
        }
    }
    weights.set(v1, alpha.clone());
    Ok((graph, weights))
}

fn without(graph: &Graph, weights: &LoopWeights, v: Vertex) -> Rational {
    let keep: Vec<Vertex> = graph.vertices().filter(|&u| u != v).collect();
    graph_determinant(&graph.induced(&keep), &weights.induced(&keep))
}

/// Evaluates both sides of
///
/// `det(G) = det(G1) det(G2 - v) + det(G1 - v) det(G2) - alpha det(G1 - v) det(G2 - v)`
///
/// where `G` glues `v1` and `v2` into `v`, and `v` carries the loop weight
/// `alpha` in `G1`, `G2` and `G` alike (any weights `w1`/`w2` give to `v1`/`v2`
/// are replaced by `alpha`).
pub fn coalescence_identity_holds(
    g1: &Graph,
    w1: &LoopWeights,
    v1: Vertex,
    g2: &Graph,
    w2: &LoopWeights,
    v2: Vertex,
    alpha: &Rational,
) -> Result<bool> {
    let (lhs, rhs) = coalescence_sides(g1, w1, v1, g2, w2, v2, alpha)?;
    Ok(lhs == rhs)
}

/// `(det(G), right-hand side)` of the coalescence identity.
pub fn coalescence_sides(
    g1: &Graph,
    w1: &LoopWeights,
    v1: Vertex,
    g2: &Graph,
    w2: &LoopWeights,
    v2: Vertex,
    alpha: &Rational,
) -> Result<(Rational, Rational)> {
    let (g, w) = coalesce(g1, w1, v1, g2, w2, v2, alpha)?;
    let mut w1 = w1.clone();
    w1.set(v1, alpha.clone());
    let mut w2 = w2.clone();
    w2.set(v2, alpha.clone());

    let d1 = graph_determinant(g1, &w1);
    let d2 = graph_determinant(g2, &w2);
    let d1v = without(g1, &w1, v1);
    let d2v = without(g2, &w2, v2);
    let rhs = &d1 * &d2v + &d1v * &d2 - alpha * &d1v * &d2v;
    Ok((graph_determinant(&g, &w), rhs))
}

/// Greedy leaf matching: a leaf must be matched to its only neighbour.
pub fn tree_has_perfect_matching(tree: &Graph) -> Result<bool> {
    let n = tree.vertex_count();
    if n == 0 || tree.edge_count() + 1 != n || connected_components(tree).len() != 1 {
        return Err(Error::NotATree);
    }
    let mut degree: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { tree.degree(v) }).collect();
    let mut gone = vec![false; n + 1];
    let mut leaves: Vec<Vertex> = tree.vertices().filter(|&v| degree[v] == 1).collect();
    let mut matched = 0;
    while let Some(leaf) = leaves.pop() {
        if gone[leaf] {
            continue;
        }
        let Some(&mate) = tree.neighbors(leaf).iter().find(|&&u| !gone[u]) else {
            return Ok(false);
        };
        gone[leaf] = true;
        gone[mate] = true;
        matched += 2;
        for &x in tree.neighbors(mate) {
            if gone[x] {
                continue;
            }
            degree[x] -= 1;
            match degree[x] {
                0 => return Ok(false),
                1 => leaves.push(x),
                _ => {}
            }
        }
    }
    Ok(matched == n)
}
