//! Timing harness for the scaling experiments.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::gen::{generate, GenSpec};
use crate::graph::{adjacency_matrix, Graph, LoopWeights};
use crate::oracle::exact_determinant;
use crate::reduction::is_singular;

/// Families parameterised by vertex count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchFamily {
    Path,
    Star,
    StarOfTriangles,
    Complete,
    RandomTree,
}

impl BenchFamily {
    pub fn spec(self, n: usize) -> GenSpec {
        match self {
            BenchFamily::Path => GenSpec::Path(n),
            BenchFamily::Star => GenSpec::Star(n),
            BenchFamily::StarOfTriangles => GenSpec::StarOfTriangles(n),
            BenchFamily::Complete => GenSpec::Complete(n),
            BenchFamily::RandomTree => GenSpec::RandomTree { n, seed: n as u64 },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchFamily::Path => "path",
            BenchFamily::Star => "star",
            BenchFamily::StarOfTriangles => "star-k3",
            BenchFamily::Complete => "complete",
            BenchFamily::RandomTree => "random-tree",
        }
    }
}

impl std::str::FromStr for BenchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => BenchFamily::Path,
            "star" => BenchFamily::Star,
            "star-k3" => BenchFamily::StarOfTriangles,
            "complete" => BenchFamily::Complete,
            "random-tree" => BenchFamily::RandomTree,
            _ => return Err(Error::InvalidSpec(format!("unknown bench family {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub size: usize,
    pub median_ns: u128,
    pub max_rational_bits: u64,
    pub singular: bool,
    pub oracle_median_ns: Option<u128>,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "size,median_ns,max_rational_bits,singular,oracle_median_ns";

    pub fn to_csv(&self) -> String {
        let oracle = self.oracle_median_ns.map(|x| x.to_string()).unwrap_or_default();
        format!("{},{},{},{},{}", self.size, self.median_ns, self.max_rational_bits, self.singular, oracle)
    }
}

fn median(mut xs: Vec<u128>) -> u128 {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

/// Median over `repeats` runs of the full singularity check (decomposition
/// included, graph generation excluded).
pub fn time_check(graph: &Graph, repeats: usize) -> Result<(u128, u64, bool)> {
    Ok(time_checks_interleaved(std::slice::from_ref(graph), repeats)?.remove(0))
}

/// Like [`time_check`] for several graphs, cycling through them once per
/// repeat so that drift in machine speed hits every graph alike.
pub fn time_checks_interleaved(graphs: &[Graph], repeats: usize) -> Result<Vec<(u128, u64, bool)>> {
    let mut times = vec![Vec::with_capacity(repeats.max(1)); graphs.len()];
    let mut facts = vec![(0, false); graphs.len()];
    for _ in 0..repeats.max(1) {
        for (i, graph) in graphs.iter().enumerate() {
            let start = Instant::now();
            let verdict = is_singular(graph)?;
            times[i].push(start.elapsed().as_nanos().max(1));
            facts[i] = (verdict.stats.max_rational_bits, verdict.is_singular());
        }
    }
    Ok(times.into_iter().zip(facts).map(|(t, (bits, singular))| (median(t), bits, singular)).collect())
}

pub fn time_oracle(graph: &Graph, repeats: usize) -> u128 {
    let a = adjacency_matrix(graph, &LoopWeights::new());
    let times = (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(exact_determinant(&a));
            start.elapsed().as_nanos().max(1)
        })
        .collect();
    median(times)
}

/// Sizes at or below this also get an oracle timing when requested.
pub const ORACLE_SIZE_LIMIT: usize = 200;

pub fn bench_family(family: BenchFamily, sizes: &[usize], repeats: usize, with_oracle: bool) -> Result<Vec<BenchRow>> {
    let graphs = sizes.iter().map(|&n| generate(&family.spec(n))).collect::<Result<Vec<_>>>()?;
    let timings = time_checks_interleaved(&graphs, repeats)?;
    Ok(sizes
        .iter()
        .zip(&graphs)
        .zip(timings)
        .map(|((&size, graph), (median_ns, max_rational_bits, singular))| {
            let oracle_median_ns = (with_oracle && size <= ORACLE_SIZE_LIMIT).then(|| time_oracle(graph, repeats));
            BenchRow { size, median_ns, max_rational_bits, singular, oracle_median_ns }
        })
        .collect())
}
