//! The deformed tensor algebra of a graded module V with a contraction
//! v: V → Q[1]: the tensor algebra T(V) with differential
//!   d(a₁…a_m) = Σ_i ± a₁…(d a_i)…a_m + Σ_i ± v(a_i)·a₁…â_i…a_m,
//! filtered by word length. The contraction lowers word length by one, so
//! the associated graded is the plain tensor algebra with its induced
//! differential.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::exactalg::{ExactError, FreeComplex, PolyScalar, RingTag, SparseMatrix};

use super::WeightedComplex;

/// A degreewise finite graded Q-module with an internal differential and a
/// contraction toward the shifted unit.
#[derive(Clone, Debug)]
pub struct DeformedInput {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    /// v: V → Q[1]; may be nonzero only on degree-1 basis vectors.
    pub v: Vec<BigRational>,
    /// Internal differential, degree -1, with v∘d = 0.
    pub d: Vec<Vec<(usize, BigRational)>>,
}

/// The chain model of the deformed tensor algebra up to word length
/// `word_bound`, with the word length recorded as a filtration weight.
#[derive(Clone, Debug)]
pub struct DeformedTensor {
    pub complex: WeightedComplex,
    pub word_bound: usize,
}

/// Outcome of comparing the associated graded with the plain tensor algebra.
#[derive(Clone, Debug)]
pub struct GrReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

fn validate(input: &DeformedInput) -> Result<(), ExactError> {
    let n = input.names.len();
    if input.degrees.len() != n || input.v.len() != n || input.d.len() != n {
        return Err(ExactError::DimensionMismatch {
            context: "deformed tensor input arrays of unequal length".into(),
        });
    }
    for k in 0..n {
        if !input.v[k].is_zero() && input.degrees[k] != 1 {
            return Err(ExactError::Invalid(format!(
                "contraction is nonzero on '{}' of degree {} (must be 1)",
                input.names[k], input.degrees[k]
            )));
        }
        let mut vd = BigRational::zero();
        for &(j, ref c) in &input.d[k] {
            if j >= n {
                return Err(ExactError::Invalid("differential index out of range".into()));
            }
            if input.degrees[j] != input.degrees[k] - 1 {
                return Err(ExactError::Invalid(format!(
                    "differential of '{}' is not of degree -1",
                    input.names[k]
                )));
            }
            vd += c * &input.v[j];
        }
        if !vd.is_zero() {
            return Err(ExactError::Invalid(format!(
                "contraction does not vanish on d('{}')",
                input.names[k]
            )));
        }
        // d² = 0 on V.
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for &(j, ref c) in &input.d[k] {
            for &(i, ref c2) in &input.d[j] {
                *acc.entry(i).or_insert_with(BigRational::zero) += c * c2;
            }
        }
        if acc.values().any(|v| !v.is_zero()) {
            return Err(ExactError::NotAComplex { degree: input.degrees[k] - 2 });
        }
    }
    Ok(())
}

pub fn deformed_tensor_algebra(
    input: &DeformedInput,
    word_bound: usize,
) -> Result<DeformedTensor, ExactError> {
    validate(input)?;
    let n = input.names.len();
    // All words of length <= word_bound, the empty word included.
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..word_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..n {
                let mut w2 = w.clone();
                w2.push(g);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let degree_of = |w: &[usize]| -> i64 { w.iter().map(|&g| input.degrees[g]).sum() };
    words.sort_by_key(|w| (degree_of(w), w.len(), w.clone()));

    let d_min = words.iter().map(|w| degree_of(w)).min().unwrap();
    let d_max = words.iter().map(|w| degree_of(w)).max().unwrap();
    let mut per_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for k in d_min..=d_max {
        per_degree.insert(k, Vec::new());
    }
    for (i, w) in words.iter().enumerate() {
        per_degree.get_mut(&degree_of(w)).unwrap().push(i);
    }
    let word_index: BTreeMap<&[usize], usize> =
        words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let pos_in_degree: BTreeMap<usize, usize> = per_degree
        .values()
        .flat_map(|v| v.iter().enumerate().map(|(p, &i)| (i, p)))
        .collect();

    let render = |w: &[usize]| -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.iter().map(|&g| input.names[g].clone()).collect::<Vec<_>>().join("*")
        }
    };
    let labels: Vec<Vec<String>> = per_degree
        .values()
        .map(|v| v.iter().map(|&i| render(&words[i])).collect())
        .collect();

    let mut diffs = Vec::new();
    for k in (d_min + 1)..=d_max {
        let rows = per_degree[&(k - 1)].len();
        let cols = per_degree[&k].len();
        let mut m = SparseMatrix::zero(RingTag::Q, rows, cols);
        for (cj, &wi) in per_degree[&k].iter().enumerate() {
            let w = &words[wi];
            let mut prefix_deg = 0i64;
            for (slot, &g) in w.iter().enumerate() {
                let sgn = if prefix_deg.rem_euclid(2) == 1 {
                    -BigRational::from_integer(1.into())
                } else {
                    BigRational::from_integer(1.into())
                };
                for &(j, ref c) in &input.d[g] {
                    let mut t = w.clone();
                    t[slot] = j;
                    let ti = word_index[t.as_slice()];
                    m.add_to(
                        pos_in_degree[&ti],
                        cj,
                        &PolyScalar::from_rational(RingTag::Q, c * &sgn),
                    );
                }
                if !input.v[g].is_zero() {
                    let mut t = w.clone();
                    t.remove(slot);
                    let ti = word_index[t.as_slice()];
                    m.add_to(
                        pos_in_degree[&ti],
                        cj,
                        &PolyScalar::from_rational(RingTag::Q, &input.v[g] * &sgn),
                    );
                }
                prefix_deg += input.degrees[g];
            }
        }
        diffs.push(m);
    }

    let complex = FreeComplex::new(RingTag::Q, d_min, labels, diffs)?;
    let weights: BTreeMap<i64, Vec<i64>> = per_degree
        .iter()
        .map(|(&k, v)| (k, v.iter().map(|&i| words[i].len() as i64).collect()))
        .collect();
    let complex = WeightedComplex::filtered(complex, weights)?;
    Ok(DeformedTensor { complex, word_bound })
}

impl DeformedTensor {
    /// Verify that the associated graded of the filtered model is the plain
    /// tensor algebra: the length-preserving part of the differential must
    /// equal the differential of the undeformed model, and the ranks per
    /// (degree, word length) must agree.
    pub fn gr_matches_tensor_algebra(&self, input: &DeformedInput) -> Result<GrReport, ExactError> {
        let mut plain_input = input.clone();
        plain_input.v = vec![BigRational::zero(); input.v.len()];
        let plain = deformed_tensor_algebra(&plain_input, self.word_bound)?;
        let mut failures = Vec::new();
        let gr = self.complex.associated_graded();
        let a = gr.complex();
        let b = plain.complex.complex();
        if a.d_min() != b.d_min() || a.d_max() != b.d_max() {
            failures.push("window mismatch between gr and tensor algebra".into());
        } else {
            for k in a.degrees() {
                if a.rank(k) != b.rank(k) {
                    failures.push(format!("rank mismatch at degree {}", k));
                } else if a.diff(k) != b.diff(k) {
                    failures.push(format!("gr differential differs at degree {}", k));
                }
                for (i, lbl) in a.labels(k).iter().enumerate() {
                    if lbl != &b.labels(k)[i] {
                        failures.push(format!("basis mismatch at degree {}", k));
                        break;
                    }
                }
            }
        }
        Ok(GrReport { pass: failures.is_empty(), failures })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> BigRational {
        BigRational::from_integer(1.into())
    }

    #[test]
    fn zero_contraction_gives_plain_tensor_algebra() {
        let input = DeformedInput {
            names: vec!["a".into(), "b".into()],
            degrees: vec![2, 1],
            v: vec![BigRational::zero(), BigRational::zero()],
            d: vec![vec![(1, one())], vec![]],
        };
        let t = deformed_tensor_algebra(&input, 3).unwrap();
        let r = t.gr_matches_tensor_algebra(&input).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        // Rank 1 per word length at the top weight in each degree: words in
        // a, b of length <= 3.
        assert_eq!(t.complex.rank_at(0, 0), 1);
        assert_eq!(t.complex.rank_at(3, 2), 2); // ab, ba
    }

    #[test]
    fn contraction_strictly_lowers_word_length() {
        let input = DeformedInput {
            names: vec!["e".into()],
            degrees: vec![1],
            v: vec![one()],
            d: vec![vec![]],
        };
        let t = deformed_tensor_algebra(&input, 4).unwrap();
        let r = t.gr_matches_tensor_algebra(&input).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        // d(e^m) contracts one letter with alternating signs: zero for even
        // m, e^{m-1} for odd m; the complex is exact except at the bottom.
        let c = t.complex.complex();
        for m in 1..=4i64 {
            let d = c.diff(m);
            let expected_zero = m % 2 == 0;
            assert_eq!(d.is_zero(), expected_zero, "length {}", m);
        }
    }

    #[test]
    fn filtration_stages_are_compatible() {
        let input = DeformedInput {
            names: vec!["e".into(), "f".into()],
            degrees: vec![1, 2],
            v: vec![one(), BigRational::zero()],
            d: vec![vec![], vec![(0, one())]],
        };
        // d(f) = e with v(e) = 1 violates v∘d = 0; fix with v(e) = 0 case
        // handled above, so here use d = 0 instead.
        let input = DeformedInput { d: vec![vec![], vec![]], ..input };
        let small = deformed_tensor_algebra(&input, 2).unwrap();
        let large = deformed_tensor_algebra(&input, 4).unwrap();
        for k in small.complex.complex().degrees() {
            for w in 0..=2i64 {
                assert_eq!(
                    small.complex.rank_at(k, w),
                    large.complex.rank_at(k, w),
                    "degree {}, length {}",
                    k,
                    w
                );
            }
        }
    }

    #[test]
    fn rejects_contraction_off_degree_one() {
        let input = DeformedInput {
            names: vec!["z".into()],
            degrees: vec![0],
            v: vec![one()],
            d: vec![vec![]],
        };
        assert!(deformed_tensor_algebra(&input, 2).is_err());
    }
}
