//! Linear-time singularity test for block graphs.
//!
//! A block graph is a graph whose biconnected components are all cliques.
//! [`is_singular`] decides whether its adjacency matrix is singular by
//! repeatedly folding pendant cliques into their cut vertex as exact rational
//! loop weights, then checking the cliques that remain. The [`oracle`] module
//! computes the same answer the slow way (fraction-free elimination) and is
//! what the test suites compare against.
//!
//! ```
//! use gsing::gen::{generate, GenSpec};
//! use gsing::is_singular;
//!
//! let star = generate(&GenSpec::Star(9)).unwrap();
//! assert!(is_singular(&star).unwrap().is_singular());
//! ```

pub mod bench;
pub mod blocks;
pub mod clique;
pub mod error;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod reduction;

pub use error::{Error, Result};
pub use graph::{Graph, LoopWeights, RationalMatrix, Vertex};
pub use rational::Rational;
pub use reduction::{is_singular, is_singular_with, CaseTag, Outcome, PendantOrder, TraceStep, Verdict};
