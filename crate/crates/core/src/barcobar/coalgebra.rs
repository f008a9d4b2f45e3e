//! Counital coaugmented conilpotent dg coalgebras over Q in normalized
//! form: only the reduced part is stored, with the reduced comultiplication
//! and a differential. Every cogenerator carries a positive weight and the
//! comultiplication is additive in weight, which makes conilpotency
//! automatic and machine-checkable.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::exactalg::{
    homology_with, ExactError, FreeComplex, Limits, RingTag, SparseMatrix,
};

/// The reduced part of a counital coaugmented conilpotent dg coalgebra
/// C = Q·1 ⊕ C̄ over Q. The full comultiplication is
/// Δ(c) = c⊗1 + 1⊗c + Δ̄(c), the counit kills C̄, and the coaugmentation is
/// the unit summand; all of that is implicit in this normal form.
#[derive(Clone, Debug)]
pub struct CoalgebraData {
    names: Vec<String>,
    degrees: Vec<i64>,
    weights: Vec<i64>,
    /// Reduced comultiplication per cogenerator: terms (left, right, coeff).
    delta: Vec<Vec<(usize, usize, BigRational)>>,
    /// Differential per cogenerator: terms (target, coeff), degree -1.
    diff: Vec<Vec<(usize, BigRational)>>,
}

type Tensor2 = BTreeMap<(usize, usize), BigRational>;

impl CoalgebraData {
    /// Validates: positive weights, degree/weight additivity of Δ̄ (which
    /// gives conilpotency), coassociativity, d of degree -1 preserving
    /// weight, d² = 0, and the co-Leibniz rule
    /// Δ̄(dc) = (d⊗1)Δ̄c + (-1)^{|left|}(1⊗d)Δ̄c.
    pub fn new(
        names: Vec<String>,
        degrees: Vec<i64>,
        weights: Vec<i64>,
        delta: Vec<Vec<(usize, usize, BigRational)>>,
        diff: Vec<Vec<(usize, BigRational)>>,
    ) -> Result<Self, ExactError> {
        let n = names.len();
        if degrees.len() != n || weights.len() != n || delta.len() != n || diff.len() != n {
            return Err(ExactError::DimensionMismatch {
                context: "coalgebra data arrays of unequal length".into(),
            });
        }
        for (k, &w) in weights.iter().enumerate() {
            if w < 1 {
                return Err(ExactError::Invalid(format!(
                    "cogenerator '{}' has weight {} < 1",
                    names[k], w
                )));
            }
        }
        let c = CoalgebraData { names, degrees, weights, delta, diff };
        for k in 0..n {
            for &(l, r, _) in &c.delta[k] {
                if l >= n || r >= n {
                    return Err(ExactError::Invalid("comultiplication index out of range".into()));
                }
                if c.degrees[l] + c.degrees[r] != c.degrees[k]
                    || c.weights[l] + c.weights[r] != c.weights[k]
                {
                    return Err(ExactError::Invalid(format!(
                        "comultiplication of '{}' is not bigraded",
                        c.names[k]
                    )));
                }
            }
            for &(j, _) in &c.diff[k] {
                if j >= n {
                    return Err(ExactError::Invalid("differential index out of range".into()));
                }
                if c.degrees[j] != c.degrees[k] - 1 || c.weights[j] != c.weights[k] {
                    return Err(ExactError::Invalid(format!(
                        "differential of '{}' is not of degree -1, weight 0",
                        c.names[k]
                    )));
                }
            }
        }
        // Coassociativity: (Δ̄⊗1)Δ̄ = (1⊗Δ̄)Δ̄ into C̄⊗³.
        for k in 0..n {
            let mut lhs: BTreeMap<(usize, usize, usize), BigRational> = BTreeMap::new();
            let mut rhs = lhs.clone();
            for &(l, r, ref cf) in &c.delta[k] {
                for &(l1, l2, ref cg) in &c.delta[l] {
                    *lhs.entry((l1, l2, r)).or_insert_with(BigRational::zero) += cf * cg;
                }
                for &(r1, r2, ref cg) in &c.delta[r] {
                    *rhs.entry((l, r1, r2)).or_insert_with(BigRational::zero) += cf * cg;
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                return Err(ExactError::Invalid(format!(
                    "comultiplication is not coassociative at '{}'",
                    c.names[k]
                )));
            }
        }
        // d² = 0.
        for k in 0..n {
            let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
            for &(j, ref cf) in &c.diff[k] {
                for &(i, ref cg) in &c.diff[j] {
                    *acc.entry(i).or_insert_with(BigRational::zero) += cf * cg;
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                return Err(ExactError::NotAComplex { degree: c.degrees[k] - 2 });
            }
        }
        // Co-Leibniz rule.
        for k in 0..n {
            let mut lhs: Tensor2 = BTreeMap::new();
            for &(j, ref cf) in &c.diff[k] {
                for &(l, r, ref cg) in &c.delta[j] {
                    *lhs.entry((l, r)).or_insert_with(BigRational::zero) += cf * cg;
                }
            }
            let mut rhs: Tensor2 = BTreeMap::new();
            for &(l, r, ref cf) in &c.delta[k] {
                for &(l2, ref cg) in &c.diff[l] {
                    *rhs.entry((l2, r)).or_insert_with(BigRational::zero) += cf * cg;
                }
                let sign = if c.degrees[l].rem_euclid(2) == 1 {
                    -BigRational::from_integer(1.into())
                } else {
                    BigRational::from_integer(1.into())
                };
                for &(r2, ref cg) in &c.diff[r] {
                    *rhs.entry((l, r2)).or_insert_with(BigRational::zero) += cf * cg * &sign;
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                return Err(ExactError::Invalid(format!(
                    "differential is not a coderivation at '{}'",
                    c.names[k]
                )));
            }
        }
        Ok(c)
    }

    /// The unit coalgebra Q (empty reduced part).
    pub fn unit() -> CoalgebraData {
        CoalgebraData {
            names: Vec::new(),
            degrees: Vec::new(),
            weights: Vec::new(),
            delta: Vec::new(),
            diff: Vec::new(),
        }
    }

    /// The linear dual of Q[s]/sⁿ: cogenerators σ_k dual to s^k for
    /// 1 ≤ k ≤ n-1, degree 0, weight k, with Δ̄(σ_k) = Σ_{i+j=k} σ_i⊗σ_j
    /// and zero differential.
    pub fn truncated_dual(n: u32) -> CoalgebraData {
        assert!(n >= 1);
        let m = (n - 1) as usize;
        let names = (1..=m).map(|k| format!("s{}*", k)).collect();
        let degrees = vec![0i64; m];
        let weights = (1..=m as i64).collect();
        let mut delta = Vec::with_capacity(m);
        for k in 1..=m {
            let mut terms = Vec::new();
            for i in 1..k {
                terms.push((i - 1, k - i - 1, BigRational::from_integer(1.into())));
            }
            delta.push(terms);
        }
        let diff = vec![Vec::new(); m];
        CoalgebraData::new(names, degrees, weights, delta, diff)
            .expect("truncated dual coalgebra is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.degrees[k]
    }

    pub fn weight(&self, k: usize) -> i64 {
        self.weights[k]
    }

    pub fn delta(&self, k: usize) -> &[(usize, usize, BigRational)] {
        &self.delta[k]
    }

    pub fn diff(&self, k: usize) -> &[(usize, BigRational)] {
        &self.diff[k]
    }

    /// Dimensions of the reduced part per (weight, degree).
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for k in 0..self.len() {
            *out.entry((self.weights[k], self.degrees[k])).or_insert(0) += 1;
        }
        out
    }

    /// The underlying complex of the weight-w part of the reduced
    /// cogenerators, or None when that part is zero.
    pub fn weight_complex(&self, w: i64) -> Option<FreeComplex> {
        let idx: Vec<usize> = (0..self.len()).filter(|&k| self.weights[k] == w).collect();
        if idx.is_empty() {
            return None;
        }
        let d_min = idx.iter().map(|&k| self.degrees[k]).min().unwrap();
        let d_max = idx.iter().map(|&k| self.degrees[k]).max().unwrap();
        let mut per_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for k in d_min..=d_max {
            per_degree.insert(k, Vec::new());
        }
        for &k in &idx {
            per_degree.get_mut(&self.degrees[k]).unwrap().push(k);
        }
        let pos: BTreeMap<usize, usize> = per_degree
            .values()
            .flat_map(|v| v.iter().enumerate().map(|(i, &k)| (k, i)))
            .collect();
        let labels: Vec<Vec<String>> = per_degree
            .values()
            .map(|v| v.iter().map(|&k| self.names[k].clone()).collect())
            .collect();
        let mut diffs = Vec::new();
        for k in (d_min + 1)..=d_max {
            let rows = per_degree[&(k - 1)].len();
            let cols = per_degree[&k].len();
            let mut m = SparseMatrix::zero(RingTag::Q, rows, cols);
            for (j, &src) in per_degree[&k].iter().enumerate() {
                for &(tgt, ref cf) in &self.diff[src] {
                    m.add_to(pos[&tgt], j, &crate::exactalg::PolyScalar::from_rational(RingTag::Q, cf.clone()));
                }
            }
            diffs.push(m);
        }
        Some(
            FreeComplex::new(RingTag::Q, d_min, labels, diffs)
                .expect("validated coalgebra differential squares to zero"),
        )
    }
}

/// Homology dimensions of the reduced part per (weight, degree) for all
/// weights up to `w_max`. Weight pieces are finite and closed under the
/// differential, so every entry is exact (no truncation).
pub fn homology_dims(
    c: &CoalgebraData,
    w_max: i64,
) -> Result<BTreeMap<(i64, i64), usize>, ExactError> {
    let mut out = BTreeMap::new();
    for w in 1..=w_max {
        if let Some(cx) = c.weight_complex(w) {
            let h = homology_with(&cx, Limits::default())?;
            for d in &h.degrees {
                if d.free_rank > 0 {
                    out.insert((w, d.degree), d.free_rank);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_dual_is_valid_and_graded() {
        for n in 1..=5 {
            let c = CoalgebraData::truncated_dual(n);
            assert_eq!(c.len(), (n - 1) as usize);
            for k in 0..c.len() {
                assert_eq!(c.degree(k), 0);
                assert_eq!(c.weight(k), k as i64 + 1);
            }
        }
        // σ_3 splits as σ_1⊗σ_2 + σ_2⊗σ_1.
        let c = CoalgebraData::truncated_dual(4);
        assert_eq!(c.delta(2).len(), 2);
    }

    #[test]
    fn rejects_non_coassociative_data() {
        // Δ̄(c) = a⊗a on weight bookkeeping that forces (Δ̄⊗1)Δ̄ ≠ (1⊗Δ̄)Δ̄:
        // make Δ̄(b) = a⊗a, Δ̄(c) = a⊗b only; then the two triple maps on c
        // differ (a⊗a⊗a appears on one side only).
        let one = BigRational::from_integer(1.into());
        let r = CoalgebraData::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0, 0, 0],
            vec![1, 2, 3],
            vec![vec![], vec![(0, 0, one.clone())], vec![(0, 1, one)]],
            vec![vec![], vec![], vec![]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn homology_dims_of_rigid_coalgebra_match_generators() {
        let c = CoalgebraData::truncated_dual(3);
        let dims = homology_dims(&c, 4).unwrap();
        assert_eq!(dims.get(&(1, 0)), Some(&1));
        assert_eq!(dims.get(&(2, 0)), Some(&1));
        assert_eq!(dims.get(&(3, 0)), None);
    }
}
