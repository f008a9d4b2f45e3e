//! The Amitsur complex of a counited coalgebra with a strict section law,
//! and its contracting homotopy: K_n = C^{⊗(n+1)} with
//!   d_n = Σ_{i=1}^n (-1)^{i-1} id^{⊗i} ⊗ ε ⊗ id^{⊗(n-i)},
//!   h_n = Δ ⊗ id^{⊗n},
//! and the identity d h + h d = id, which holds exactly whenever
//! (id ⊗ ε)∘Δ = id.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactalg::{ExactError, PolyScalar, RingTag, SparseMatrix};

/// A finite-dimensional Q-module with a counit and a comultiplication
/// subject only to the strict section law (id ⊗ ε)∘Δ = id. No
/// coassociativity is assumed.
#[derive(Clone, Debug)]
pub struct SectionCoalgebra {
    pub dim: usize,
    /// ε on the basis.
    pub eps: Vec<BigRational>,
    /// Δ on the basis: terms (left, right, coeff).
    pub delta: Vec<Vec<(usize, usize, BigRational)>>,
}

impl SectionCoalgebra {
    pub fn new(
        dim: usize,
        eps: Vec<BigRational>,
        delta: Vec<Vec<(usize, usize, BigRational)>>,
    ) -> Result<Self, ExactError> {
        if eps.len() != dim || delta.len() != dim {
            return Err(ExactError::DimensionMismatch {
                context: "section coalgebra arrays of unequal length".into(),
            });
        }
        for terms in &delta {
            for &(l, r, _) in terms {
                if l >= dim || r >= dim {
                    return Err(ExactError::Invalid("comultiplication index out of range".into()));
                }
            }
        }
        Ok(SectionCoalgebra { dim, eps, delta })
    }

    /// The base ring Q with ε = id, Δ = id.
    pub fn base() -> SectionCoalgebra {
        SectionCoalgebra {
            dim: 1,
            eps: vec![BigRational::one()],
            delta: vec![vec![(0, 0, BigRational::one())]],
        }
    }

    /// The section-law defect (id ⊗ ε)Δ(e_k) - e_k, as basis coefficients.
    fn section_defect(&self, k: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim];
        for &(l, r, ref c) in &self.delta[k] {
            out[l] += c * &self.eps[r];
        }
        out[k] -= BigRational::one();
        out
    }
}

#[derive(Clone, Debug)]
pub struct AmitsurReport {
    pub levels_checked: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Build K_n = C^{⊗(n+1)} for n ≤ `length` and verify d h + h d = id on
/// every level. Rejects inputs violating the section law, naming a witness
/// basis vector.
pub fn amitsur_homotopy(
    c: &SectionCoalgebra,
    length: usize,
) -> Result<AmitsurReport, ExactError> {
    for k in 0..c.dim {
        if c.section_defect(k).iter().any(|v| !v.is_zero()) {
            return Err(ExactError::Invalid(format!(
                "section law (id⊗ε)Δ = id fails on basis vector {}",
                k
            )));
        }
    }
    let dim_pow = |n: usize| -> usize { c.dim.pow(n as u32) };
    // Basis of C^{⊗m}: index = digits base dim, most significant first.
    let d_matrix = |n: usize| -> SparseMatrix {
        // d_n : K_n -> K_{n-1}, n >= 1.
        let mut m = SparseMatrix::zero(RingTag::Q, dim_pow(n), dim_pow(n + 1));
        for col in 0..dim_pow(n + 1) {
            let mut digits = vec![0usize; n + 1];
            let mut rest = col;
            for slot in (0..=n).rev() {
                digits[slot] = rest % c.dim;
                rest /= c.dim;
            }
            for i in 1..=n {
                let sgn = if (i - 1) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
                let coeff = &c.eps[digits[i]] * &sgn;
                if coeff.is_zero() {
                    continue;
                }
                let mut row = 0usize;
                for (slot, &d) in digits.iter().enumerate() {
                    if slot != i {
                        row = row * c.dim + d;
                    }
                }
                m.add_to(row, col, &PolyScalar::from_rational(RingTag::Q, coeff));
            }
        }
        m
    };
    let h_matrix = |n: usize| -> SparseMatrix {
        // h_n = Δ ⊗ id^{⊗n} : K_n -> K_{n+1}.
        let mut m = SparseMatrix::zero(RingTag::Q, dim_pow(n + 2), dim_pow(n + 1));
        for col in 0..dim_pow(n + 1) {
            let first = col / dim_pow(n);
            let tail = col % dim_pow(n);
            for &(l, r, ref coeff) in &c.delta[first] {
                let row = (l * c.dim + r) * dim_pow(n) + tail;
                m.add_to(row, col, &PolyScalar::from_rational(RingTag::Q, coeff.clone()));
            }
        }
        m
    };

    let mut failures = Vec::new();
    for n in 0..=length {
        let dh = d_matrix(n + 1).mul(&h_matrix(n));
        let total = if n >= 1 {
            dh.add(&h_matrix(n - 1).mul(&d_matrix(n)))
        } else {
            dh
        };
        if total != SparseMatrix::identity(RingTag::Q, dim_pow(n + 1)) {
            failures.push(format!("dh + hd differs from the identity on level {}", n));
        }
    }
    Ok(AmitsurReport { levels_checked: length + 1, pass: failures.is_empty(), failures })
}
