//! Singularity of weighted cliques.
//!
//! A clique on `k` vertices with loop weights `x_1..x_k` has adjacency matrix
//! `J - D` with `D = diag(1 - x_i)`. Its singularity is decided from the
//! weights alone:
//!
//! * two or more `x_i = 1`: two equal rows, singular;
//! * exactly one `x_i = 1`: nonsingular;
//! * otherwise, with `S = sum 1/(1 - x_i)`, nonsingular iff `S != 1`.
//!
//! Bordering a nonsingular clique by a vertex adjacent to all of it with loop
//! weight `alpha` is, after congruence, the same as a lone vertex of weight
//! `alpha + gamma`, where `gamma = -S/(S - 1)` or `-1` in the one-unit case.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Diagonal of a `J - D` matrix. Empty means the void clique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueWeights(pub Vec<Rational>);

impl CliqueWeights {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Rational> for CliqueWeights {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        CliqueWeights(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueCase {
    MultipleOnes,
    ExactlyOneOne,
    /// No weight equals 1; carries `S = sum 1/(1 - x_i)`.
    SumCase(Rational),
}

pub fn clique_case(weights: &CliqueWeights) -> CliqueCase {
    let ones = weights.0.iter().filter(|x| x.is_one()).count();
    match ones {
        0 => {
            let one = Rational::one();
            let s = weights
                .0
                .iter()
                .map(|x| (&one - x).recip().expect("x != 1"))
                .sum();
            CliqueCase::SumCase(s)
        }
        1 => CliqueCase::ExactlyOneOne,
        _ => CliqueCase::MultipleOnes,
    }
}

impl CliqueCase {
    pub fn is_singular(&self) -> bool {
        match self {
            CliqueCase::MultipleOnes => true,
            CliqueCase::ExactlyOneOne => false,
            CliqueCase::SumCase(s) => s.is_one(),
        }
    }

    /// Loop-weight correction pushed onto a vertex bordering this clique.
    pub fn gamma(&self) -> Result<Rational> {
        match self {
            CliqueCase::MultipleOnes => {
                Err(Error::Contract("gamma is undefined when two or more weights equal 1".into()))
            }
            CliqueCase::ExactlyOneOne => Ok(-Rational::one()),
            CliqueCase::SumCase(s) => {
                let denom = s - &Rational::one();
                if denom.is_zero() {
                    return Err(Error::Contract("gamma is undefined for a singular clique (S = 1)".into()));
                }
                Ok(-s.checked_div(&denom)?)
            }
        }
    }
}

/// The void clique counts as nonsingular.
pub fn clique_is_singular(weights: &CliqueWeights) -> bool {
    !weights.is_empty() && clique_case(weights).is_singular()
}

pub fn gamma(weights: &CliqueWeights) -> Result<Rational> {
    clique_case(weights).gamma()
}
