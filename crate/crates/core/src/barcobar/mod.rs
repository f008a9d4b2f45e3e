//! Bar and cobar constructions at bounded weight, Koszul-dual endomorphism
//! algebras via convolution on the dual bar complex, the deformed tensor
//! algebra with its word-length filtration, and the Amitsur-complex
//! contracting homotopy. Everything is chain-level over Q with exact
//! arithmetic; weight bounds keep every complex finite, and the weight
//! grading is preserved by all differentials, so no degree-window
//! truncation is ever needed here.

mod amitsur;
mod bar;
mod coalgebra;
mod deformed;
mod koszul;

pub use amitsur::{amitsur_homotopy, AmitsurReport, SectionCoalgebra};
pub use bar::{bar, bar_cobar_roundtrip, cobar, BarCoalgebra, RoundtripReport};
pub use coalgebra::{homology_dims, CoalgebraData};
pub use deformed::{deformed_tensor_algebra, DeformedInput, DeformedTensor, GrReport};
pub use koszul::{koszul_dual_endomorphisms, KoszulReport};

use std::collections::BTreeMap;

use crate::exactalg::{ExactError, FreeComplex};

/// A free complex with an extra weight attached to every basis vector.
/// Graded complexes have a weight-preserving differential; filtered ones
/// allow the differential to lower weight.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    complex: FreeComplex,
    /// Weight per basis vector, keyed by degree, aligned with the labels.
    weights: BTreeMap<i64, Vec<i64>>,
}

impl WeightedComplex {
    fn validated(
        complex: FreeComplex,
        weights: BTreeMap<i64, Vec<i64>>,
        strict: bool,
    ) -> Result<Self, ExactError> {
        for k in complex.degrees() {
            let w = weights.get(&k).map(|v| v.len()).unwrap_or(0);
            if w != complex.rank(k) {
                return Err(ExactError::DimensionMismatch {
                    context: format!("weights at degree {}: {} entries, rank {}", k, w, complex.rank(k)),
                });
            }
        }
        for k in complex.degrees() {
            if k <= complex.d_min() {
                continue;
            }
            let d = complex.diff(k);
            for (i, j, _) in d.iter() {
                let ws = weights[&k][j];
                let wt = weights[&(k - 1)][i];
                let ok = if strict { wt == ws } else { wt <= ws };
                if !ok {
                    return Err(ExactError::Invalid(format!(
                        "differential raises weight {} -> {} out of degree {}",
                        ws, wt, k
                    )));
                }
            }
        }
        Ok(WeightedComplex { complex, weights })
    }

    /// A complex whose differential preserves the weight grading.
    pub fn graded(
        complex: FreeComplex,
        weights: BTreeMap<i64, Vec<i64>>,
    ) -> Result<Self, ExactError> {
        Self::validated(complex, weights, true)
    }

    /// A complex whose differential may lower (but never raise) weight.
    pub fn filtered(
        complex: FreeComplex,
        weights: BTreeMap<i64, Vec<i64>>,
    ) -> Result<Self, ExactError> {
        Self::validated(complex, weights, false)
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn weight_of(&self, degree: i64, index: usize) -> i64 {
        self.weights[&degree][index]
    }

    pub fn rank_at(&self, degree: i64, weight: i64) -> usize {
        self.weights
            .get(&degree)
            .map(|v| v.iter().filter(|&&w| w == weight).count())
            .unwrap_or(0)
    }

    /// Drop every weight-lowering differential entry. The result is graded
    /// and is again a complex (the kept entries are the leading terms).
    pub fn associated_graded(&self) -> WeightedComplex {
        let ring = self.complex.ring();
        let d_min = self.complex.d_min();
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for k in self.complex.degrees() {
            labels.push(self.complex.labels(k).to_vec());
            if k > d_min {
                let d = self.complex.diff(k);
                let kept = d.iter().filter_map(|(i, j, v)| {
                    if self.weights[&(k - 1)][i] == self.weights[&k][j] {
                        Some((i, j, v.clone()))
                    } else {
                        None
                    }
                });
                diffs.push(crate::exactalg::SparseMatrix::from_entries(
                    ring,
                    d.rows(),
                    d.cols(),
                    kept,
                ));
            }
        }
        let complex = FreeComplex::new(ring, d_min, labels, diffs)
            .expect("leading terms of a filtered differential form a complex");
        WeightedComplex::graded(complex, self.weights.clone())
            .expect("associated graded preserves weight by construction")
    }
}
