//! Algebra morphisms between presentations, their multiplicative extension,
//! and the chain-map check f∘d = d∘f on generators.

use crate::exactalg::ExactError;

use super::{AlgebraElement, DgPresentation};

/// A morphism determined by a generator assignment into the target algebra.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: DgPresentation,
    pub target: DgPresentation,
    /// Image of each source generator, indexed like `source.gens`.
    pub assignment: Vec<AlgebraElement>,
}

#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub is_chain_map: bool,
    /// Name of the first generator violating f∘d = d∘f, if any.
    pub first_failure: Option<String>,
}

impl AlgebraMorphism {
    pub fn new(
        source: DgPresentation,
        target: DgPresentation,
        assignment: Vec<AlgebraElement>,
    ) -> Result<Self, ExactError> {
        if assignment.len() != source.gens.len() {
            return Err(ExactError::DimensionMismatch {
                context: format!(
                    "morphism assigns {} generators, source has {}",
                    assignment.len(),
                    source.gens.len()
                ),
            });
        }
        for (g, img) in source.gens.iter().zip(&assignment) {
            if !img.is_zero() && img.degree(&target) != Some(g.degree) {
                return Err(ExactError::Invalid(format!(
                    "morphism does not preserve the degree of '{}'",
                    g.name
                )));
            }
            let has_weights = source.gens.iter().any(|s| s.weight != 0)
                || target.gens.iter().any(|s| s.weight != 0);
            if has_weights && !img.is_zero() && img.weight(&target) != Some(g.weight) {
                return Err(ExactError::Invalid(format!(
                    "morphism does not preserve the weight of '{}'",
                    g.name
                )));
            }
        }
        Ok(AlgebraMorphism { source, target, assignment })
    }

    /// Multiplicative, unital extension of the generator assignment.
    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut acc = AlgebraElement::zero();
        for (word, c) in a.terms() {
            let mut prod = self.target.one();
            for &g in word {
                prod = self.target.multiply(&prod, &self.assignment[g as usize]);
            }
            acc = acc.add(&prod.scale(c));
        }
        acc
    }

    /// Verify f(d(g)) = d(f(g)) on every source generator.
    pub fn chain_map_report(&self) -> MorphismReport {
        for (i, g) in self.source.gens.iter().enumerate() {
            let lhs = self.apply(&self.source.diff[i]);
            let rhs = self.target.differential(&self.assignment[i]);
            if lhs != rhs {
                return MorphismReport { is_chain_map: false, first_failure: Some(g.name.clone()) };
            }
        }
        MorphismReport { is_chain_map: true, first_failure: None }
    }
}

pub fn is_chain_algebra_map(f: &AlgebraMorphism) -> MorphismReport {
    f.chain_map_report()
}
