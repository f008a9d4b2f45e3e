//! Windowed Hochschild mixed complexes (first and second kind), the naive
//! complex built from noncommutative differentials, negative cyclic
//! complexes truncated in the u-direction, dualization, and homology with
//! the induced u-action.
//!
//! Sign conventions (fixed once, validated at construction time by the
//! identities b² = 0, B² = 0, bB + Bb = 0):
//!   * A chain (a₀, a₁, …, a_k) carries the degree P_k, where
//!     P_i = |a₀| + Σ_{j≤i} (|a_j| + 1) is the degree of the prefix through
//!     slot i in the shifted grading.
//!   * Differential term at slot 0: sign +1; at slot i ≥ 1 the sign is
//!     (−1)^{P_{i−1}+1} (the extra flip comes from d crossing the
//!     suspension of the slot being differentiated).
//!   * Merge of slots i, i+1: sign (−1)^{P_i}.
//!   * Cyclic merge (a_k a₀, …): sign −(−1)^{(|a_k|+1)·P_{k−1}}.
//!   * Curvature insertion after slot i: sign (−1)^{P_i + 1}.
//!   * B, rotation starting at slot i: sign (−1)^{p·q} with p the shifted
//!     degree of the rotated block (a₀ … a_{i−1}) and q that of the rest.

mod cyclic;
mod maps;
mod naive;
mod tensor;

pub use cyclic::{
    homology_with_u_action, negative_cyclic, negative_cyclic_of, u_action_on, CyclicComplex,
};
pub use maps::{
    chain_iso_up_to_scalars, curved_dual_pairing, dualize_mixed, induced_mixed_map, MixedMap,
};
pub use naive::{comparison_map, naive_hochschild, ComparisonReport};
pub(crate) use naive::NaiveElem;
pub use tensor::{hochschild_mixed, hochschild_second_kind, Tensor};

use crate::exactalg::{ExactError, FreeComplex, SparseMatrix};

/// Finitization of an unbounded complex: homological window, u-order, and
/// the margin inside which degrees count as trusted.
#[derive(Clone, Debug)]
pub struct TruncationPolicy {
    pub d_min: i64,
    pub d_max: i64,
    /// Compute the cyclic complex modulo u^N.
    pub u_order: usize,
    /// Degrees within this distance of a truncated window edge are flagged
    /// untrusted.
    pub trust_margin: i64,
    pub weight_bound: Option<i64>,
}

impl TruncationPolicy {
    pub fn new(d_min: i64, d_max: i64, u_order: usize) -> Self {
        assert!(d_min <= d_max, "empty degree window");
        assert!(u_order >= 1, "u-order must be at least 1");
        TruncationPolicy { d_min, d_max, u_order, trust_margin: 2, weight_bound: None }
    }

    pub fn with_margin(mut self, m: i64) -> Self {
        assert!(m >= 1);
        self.trust_margin = m;
        self
    }

    pub fn with_weight_bound(mut self, w: i64) -> Self {
        self.weight_bound = Some(w);
        self
    }
}

/// Whether the tensor-length-zero block is the full algebra or its reduced
/// part. `Relative` computes homology relative to the base ring (the unit
/// monomial is removed from the length-zero block), which matches the
/// reduced homology answers for truncated polynomial algebras; `Full` keeps
/// the unit and is the right choice when comparing against the naive
/// complex, whose degree-zero part is all of A.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnitPolicy {
    Full,
    Relative,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    FirstKind,
    SecondKind,
    Naive,
    DeRham,
    Explicit,
}

/// A windowed complex with two anticommuting differentials: b of degree −1
/// (stored in the underlying `FreeComplex`) and B of degree +1. The
/// identities b² = 0, B² = 0 and bB + Bb = 0 are machine-checked at interior
/// degrees on construction; at the window edges the truncated operators are
/// exempt.
#[derive(Clone, Debug)]
pub struct MixedComplex {
    complex: FreeComplex,
    /// `b_up[k - d_min]` is B out of degree k (into degree k+1); the matrix
    /// out of d_max has zero rows.
    b_up: Vec<SparseMatrix>,
    pub provenance: Provenance,
    /// True when the chain module in degree d_min − 1 (resp. d_max + 1) of
    /// the untruncated complex is zero, so that edge is not a truncation.
    pub exact_low: bool,
    pub exact_high: bool,
    /// Structured basis, attached by the tensor-complex builders; used by
    /// the induced-map and comparison machinery.
    pub(crate) basis_tensors: Option<Vec<Vec<Tensor>>>,
    /// Structured basis of naive complexes (algebra and form parts).
    pub(crate) basis_forms: Option<Vec<Vec<naive::NaiveElem>>>,
}

impl MixedComplex {
    pub fn new(
        complex: FreeComplex,
        b_up: Vec<SparseMatrix>,
        provenance: Provenance,
    ) -> Result<Self, ExactError> {
        let d_min = complex.d_min();
        let d_max = complex.d_max();
        if b_up.len() as i64 != d_max - d_min + 1 {
            return Err(ExactError::DimensionMismatch {
                context: format!(
                    "mixed complex needs {} B-matrices, got {}",
                    d_max - d_min + 1,
                    b_up.len()
                ),
            });
        }
        for k in d_min..=d_max {
            let m = &b_up[(k - d_min) as usize];
            let target = if k == d_max { 0 } else { complex.rank(k + 1) };
            if m.rows() != target || m.cols() != complex.rank(k) {
                return Err(ExactError::DimensionMismatch {
                    context: format!("B out of degree {} has shape {}x{}", k, m.rows(), m.cols()),
                });
            }
        }
        let mc = MixedComplex {
            complex,
            b_up,
            provenance,
            exact_low: false,
            exact_high: false,
            basis_tensors: None,
            basis_forms: None,
        };
        // B² = 0 wherever both factors stay inside the window.
        for k in d_min..=(d_max - 2) {
            if !mc.big_b(k + 1).mul(&mc.big_b(k)).is_zero() {
                return Err(ExactError::Invalid(format!("B² ≠ 0 out of degree {}", k)));
            }
        }
        // bB + Bb = 0 at interior degrees.
        for k in (d_min + 1)..d_max {
            let lhs = mc.complex.diff(k + 1).mul(&mc.big_b(k));
            let rhs = mc.big_b(k - 1).mul(&mc.complex.diff(k));
            if !lhs.add(&rhs).is_zero() {
                return Err(ExactError::Invalid(format!("bB + Bb ≠ 0 at degree {}", k)));
            }
        }
        Ok(mc)
    }

    pub fn with_exactness(mut self, low: bool, high: bool) -> Self {
        self.exact_low = low;
        self.exact_high = high;
        self
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    /// The b-differential out of `degree` (zero outside the window).
    pub fn b(&self, degree: i64) -> SparseMatrix {
        self.complex.diff(degree)
    }

    /// The B-operator out of `degree` (zero outside the window).
    pub fn big_b(&self, degree: i64) -> SparseMatrix {
        let d_min = self.complex.d_min();
        let d_max = self.complex.d_max();
        if degree < d_min || degree > d_max || degree == d_max {
            return SparseMatrix::zero(
                self.complex.ring(),
                self.complex.rank(degree + 1),
                self.complex.rank(degree),
            );
        }
        self.b_up[(degree - d_min) as usize].clone()
    }

    pub(crate) fn tensors_at(&self, degree: i64) -> Option<&[Tensor]> {
        let i = (degree - self.complex.d_min()) as usize;
        self.basis_tensors.as_ref().and_then(|b| b.get(i)).map(|v| v.as_slice())
    }

    pub(crate) fn forms_at(&self, degree: i64) -> Option<&[naive::NaiveElem]> {
        let i = (degree - self.complex.d_min()) as usize;
        self.basis_forms.as_ref().and_then(|b| b.get(i)).map(|v| v.as_slice())
    }

    /// Degrees of the window whose homology is unaffected by truncation,
    /// given the policy's margin: a margin is kept away from every edge
    /// that is an actual truncation.
    pub fn trusted_range(&self, margin: i64) -> (i64, i64) {
        let lo = if self.exact_low { self.complex.d_min() } else { self.complex.d_min() + margin };
        let hi = if self.exact_high { self.complex.d_max() } else { self.complex.d_max() - margin };
        (lo, hi)
    }
}
