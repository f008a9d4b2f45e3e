//! Bar construction of an augmented dg algebra at bounded weight, the cobar
//! construction of a conilpotent coalgebra, and the roundtrip comparison.
//!
//! Conventions. Bar words [a₁|…|a_m] have degree Σ(|a_i|+1) and weight the
//! sum of the letters' algebra weights; with S_i = Σ_{j≤i}(|a_j|+1) the bar
//! differential is
//!   d[a₁|…|a_m] = Σ_i (-1)^{S_{i-1}} [a₁|…|d a_i|…|a_m]
//!               + Σ_i (-1)^{S_i} [a₁|…|a_i·a_{i+1}|…|a_m],
//! where the product is reduced (scalar components are dropped). The
//! comultiplication is deconcatenation, without signs. The cobar algebra of
//! C is free on y_c = s⁻¹c with |y_c| = |c| - 1 and
//!   d(y_c) = -y_{dc} - Σ_{Δ̄c = Σ l⊗r} (-1)^{|l|} y_l·y_r.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::dgcore::{monomial_basis, AlgebraElement, DgPresentation, GeneratorSpec, MulKind};
use crate::exactalg::{ExactError, PolyScalar, RingTag};

use super::coalgebra::{homology_dims, CoalgebraData};

/// Free associative dg algebra on the shifted reduced cogenerators.
pub fn cobar(c: &CoalgebraData) -> Result<DgPresentation, ExactError> {
    let gens: Vec<GeneratorSpec> = (0..c.len())
        .map(|k| GeneratorSpec::with_weight(c.name(k), c.degree(k) - 1, c.weight(k)))
        .collect();
    let mut p = DgPresentation::new(RingTag::Q, MulKind::FreeAssociative, gens);
    for k in 0..c.len() {
        let mut d = AlgebraElement::zero();
        for &(j, ref cf) in c.diff(k) {
            let term = AlgebraElement::from_word(
                vec![j as u16],
                PolyScalar::from_rational(RingTag::Q, -cf.clone()),
            );
            d = d.add(&term);
        }
        for &(l, r, ref cf) in c.delta(k) {
            let sign = if c.degree(l).rem_euclid(2) == 1 { cf.clone() } else { -cf.clone() };
            let term = AlgebraElement::from_word(
                vec![l as u16, r as u16],
                PolyScalar::from_rational(RingTag::Q, sign),
            );
            d = d.add(&term);
        }
        p.diff[k] = d;
    }
    p.validate()?;
    Ok(p)
}

/// The bar construction as a coalgebra, with the word structure kept
/// alongside (each cogenerator is a sequence of normal-form letters).
#[derive(Clone, Debug)]
pub struct BarCoalgebra {
    pub data: CoalgebraData,
    /// Bar words aligned with the cogenerators of `data`.
    pub words: Vec<Vec<Vec<u16>>>,
}

fn render_letter(p: &DgPresentation, w: &[u16]) -> String {
    w.iter().map(|&g| p.gens[g as usize].name.clone()).collect::<Vec<_>>().join(".")
}

fn to_rational(c: &PolyScalar) -> BigRational {
    debug_assert!(c.degree().map_or(true, |d| d == 0));
    c.coeff(0)
}

/// Letters of the bar construction: nonzero normal-form monomials of the
/// augmentation ideal, with weight at most `weight_bound`.
fn bar_letters(p: &DgPresentation, weight_bound: i64) -> Result<Vec<Vec<u16>>, ExactError> {
    if p.base != RingTag::Q {
        return Err(ExactError::Invalid("bar construction requires base ring Q".into()));
    }
    if !p.curvature.is_zero() {
        return Err(ExactError::Invalid("bar construction requires zero curvature".into()));
    }
    if let Some(g) = p.gens.iter().find(|g| g.weight < 1) {
        return Err(ExactError::Invalid(format!(
            "bar construction needs positive generator weights ('{}' has weight {})",
            g.name, g.weight
        )));
    }
    // Every generator has weight >= 1, so letters of bounded weight have
    // bounded length and their degrees lie in a computable span.
    let dmax = p.gens.iter().map(|g| g.degree.abs()).max().unwrap_or(0);
    let span = weight_bound.max(0) * dmax;
    let basis = monomial_basis(p, -span, span, Some(weight_bound))?;
    let mut letters: Vec<Vec<u16>> = basis.into_values().flatten().filter(|w| !w.is_empty()).collect();
    letters.sort();
    Ok(letters)
}

/// Bar construction of an augmented dg algebra over Q, complete up to total
/// weight `weight_bound`. The augmentation sends every generator to zero.
/// Weight pieces are finite and closed under the differential, so the
/// result needs no degree truncation; validity (d² = 0, coassociativity,
/// co-Leibniz) is machine-checked on construction.
pub fn bar(p: &DgPresentation, weight_bound: i64) -> Result<BarCoalgebra, ExactError> {
    p.validate()?;
    let letters = bar_letters(p, weight_bound)?;
    let letter_index: BTreeMap<&[u16], usize> =
        letters.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let lweight: Vec<i64> = letters.iter().map(|w| p.weight_of_word(w)).collect();
    let ldegree: Vec<i64> = letters.iter().map(|w| p.degree_of_word(w)).collect();

    // Enumerate words (sequences of letter indices) of total weight <= bound.
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 0)];
    while let Some((w, wt)) = stack.pop() {
        if !w.is_empty() {
            words.push(w.clone());
        }
        for (i, &lw) in lweight.iter().enumerate() {
            if wt + lw <= weight_bound {
                let mut w2 = w.clone();
                w2.push(i);
                stack.push((w2, wt + lw));
            }
        }
    }
    let word_weight = |w: &[usize]| -> i64 { w.iter().map(|&i| lweight[i]).sum() };
    let word_degree = |w: &[usize]| -> i64 { w.iter().map(|&i| ldegree[i] + 1).sum() };
    words.sort_by_key(|w| (word_weight(w), word_degree(w), w.clone()));
    let word_index: BTreeMap<&[usize], usize> =
        words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();

    let names: Vec<String> = words
        .iter()
        .map(|w| {
            format!(
                "[{}]",
                w.iter().map(|&i| render_letter(p, &letters[i])).collect::<Vec<_>>().join("|")
            )
        })
        .collect();
    let degrees: Vec<i64> = words.iter().map(|w| word_degree(w)).collect();
    let weights: Vec<i64> = words.iter().map(|w| word_weight(w)).collect();

    // Deconcatenation.
    let mut delta = Vec::with_capacity(words.len());
    for w in &words {
        let mut terms = Vec::new();
        for cut in 1..w.len() {
            let l = word_index[&w[..cut]];
            let r = word_index[&w[cut..]];
            terms.push((l, r, BigRational::from_integer(1.into())));
        }
        delta.push(terms);
    }

    // Bar differential.
    let one = PolyScalar::one(RingTag::Q);
    let mut diff = Vec::with_capacity(words.len());
    for w in &words {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        let mut add = |target: Vec<usize>, c: BigRational| {
            let idx = word_index[target.as_slice()];
            let e = acc.entry(idx).or_insert_with(BigRational::zero);
            *e += c;
        };
        let mut prefix_shift = 0i64; // S_{i-1}
        for (slot, &li) in w.iter().enumerate() {
            let sign_in = if prefix_shift.rem_euclid(2) == 1 { -1 } else { 1 };
            let elem = AlgebraElement::from_word(letters[li].clone(), one.clone());
            for (tw, tc) in p.differential(&elem).terms() {
                if tw.is_empty() {
                    return Err(ExactError::Invalid(
                        "differential does not preserve the augmentation ideal".into(),
                    ));
                }
                let mut target = w.clone();
                target[slot] = letter_index[tw.as_slice()];
                add(target, to_rational(tc) * BigRational::from_integer(sign_in.into()));
            }
            prefix_shift += ldegree[li] + 1;
            if slot + 1 < w.len() {
                let sign_mul = if prefix_shift.rem_euclid(2) == 1 { -1 } else { 1 };
                let a = AlgebraElement::from_word(letters[li].clone(), one.clone());
                let b = AlgebraElement::from_word(letters[w[slot + 1]].clone(), one.clone());
                for (tw, tc) in p.multiply(&a, &b).terms() {
                    if tw.is_empty() {
                        // Reduced product: the scalar component is projected out.
                        continue;
                    }
                    let mut target = w.clone();
                    target[slot] = letter_index[tw.as_slice()];
                    target.remove(slot + 1);
                    add(target, to_rational(tc) * BigRational::from_integer(sign_mul.into()));
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        diff.push(acc.into_iter().map(|(i, c)| (i, c)).collect());
    }

    let data = CoalgebraData::new(names, degrees, weights, delta, diff)?;
    let word_letters = words.iter().map(|w| w.iter().map(|&i| letters[i].clone()).collect()).collect();
    Ok(BarCoalgebra { data, words: word_letters })
}

/// Weightwise comparison of H(Bar(Cobar(C))) against H(C).
#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub weight_bound: i64,
    pub pass: bool,
    pub mismatches: Vec<String>,
}

/// Compares the homology of Bar(Cobar(C)) with the homology of C itself,
/// per (weight, degree), for all weights up to the bound. Both sides are
/// weight-complete, so the comparison is exact.
pub fn bar_cobar_roundtrip(
    c: &CoalgebraData,
    weight_bound: i64,
) -> Result<RoundtripReport, ExactError> {
    let a = cobar(c)?;
    let b = bar(&a, weight_bound)?;
    let got = homology_dims(&b.data, weight_bound)?;
    let want = homology_dims(c, weight_bound)?;
    let mut mismatches = Vec::new();
    let keys: std::collections::BTreeSet<_> = got.keys().chain(want.keys()).collect();
    for &(w, k) in keys {
        let g = got.get(&(w, k)).copied().unwrap_or(0);
        let e = want.get(&(w, k)).copied().unwrap_or(0);
        if g != e {
            mismatches.push(format!("weight {}, degree {}: dim {} expected {}", w, k, g, e));
        }
    }
    Ok(RoundtripReport { weight_bound, pass: mismatches.is_empty(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{homology, Limits};

    #[test]
    fn cobar_of_small_truncated_duals() {
        // (Q[s]/s²)^*: one generator of degree -1, d = 0.
        let a2 = cobar(&CoalgebraData::truncated_dual(2)).unwrap();
        assert_eq!(a2.gens.len(), 1);
        assert_eq!(a2.gens[0].degree, -1);
        assert!(a2.diff[0].is_zero());
        // (Q[s]/s³)^*: two generators, d(y₂) = -y₁y₁.
        let a3 = cobar(&CoalgebraData::truncated_dual(3)).unwrap();
        assert_eq!(a3.gens.len(), 2);
        assert_eq!(a3.diff[1].num_terms(), 1);
        let (w, c) = a3.diff[1].terms().next().unwrap();
        assert_eq!(w, &vec![0u16, 0u16]);
        assert_eq!(c, &PolyScalar::from_int(RingTag::Q, -1));
    }

    #[test]
    fn cobar_of_unit_is_base_ring() {
        let p = cobar(&CoalgebraData::unit()).unwrap();
        assert!(p.gens.is_empty());
    }

    #[test]
    fn bar_of_exterior_algebra_has_line_per_weight() {
        // A = Q ⊕ Q·h with |h| = -1, h² = 0: the bar words [h|…|h] all sit
        // in degree 0 and give one homology class in every weight.
        let p = DgPresentation::new(
            RingTag::Q,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::with_weight("h", -1, 1)],
        );
        let b = bar(&p, 5).unwrap();
        for m in 1..=5i64 {
            let cx = b.data.weight_complex(m).unwrap();
            let h = homology(&cx).unwrap();
            let total: usize = h.degrees.iter().map(|d| d.free_rank).sum();
            assert_eq!(total, 1, "weight {}", m);
            assert_eq!(h.at(0).unwrap().free_rank, 1, "weight {}", m);
        }
    }

    #[test]
    fn bar_weightwise_euler_characteristic_counts_words() {
        // With d = 0 impossible in general, compare ranks instead: the
        // weight-m piece of Bar(Q[s]/s³) has one word per composition of m
        // into parts 1 and 2, each in degree = number of letters.
        let mut p = DgPresentation::new(
            RingTag::Q,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::with_weight("s", 0, 1)],
        );
        p.set_nilpotent("s", 3);
        let b = bar(&p, 4).unwrap();
        let mut count = BTreeMap::new();
        for (k, w) in b.words.iter().enumerate() {
            *count.entry((b.data.weight(k), w.len())).or_insert(0usize) += 1;
        }
        // weight 3: [s|s|s], [s|s²], [s²|s].
        assert_eq!(count.get(&(3, 3)), Some(&1));
        assert_eq!(count.get(&(3, 2)), Some(&2));
    }

    #[test]
    fn roundtrip_matches_truncated_duals() {
        for n in 2..=3 {
            let c = CoalgebraData::truncated_dual(n);
            let r = bar_cobar_roundtrip(&c, 4).unwrap();
            assert!(r.pass, "n = {}: {:?}", n, r.mismatches);
        }
        let r = bar_cobar_roundtrip(&CoalgebraData::unit(), 3).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn bar_homology_of_cobar_vanishes_above_top_weight() {
        let a = cobar(&CoalgebraData::truncated_dual(2)).unwrap();
        let b = bar(&a, 4).unwrap();
        let dims = homology_dims(&b.data, 4).unwrap();
        assert_eq!(dims.get(&(1, 0)), Some(&1));
        for w in 2..=4 {
            assert!(dims.keys().all(|&(ww, _)| ww != w), "weight {} should vanish", w);
        }
    }

    fn limits_guard() -> Limits {
        Limits::default()
    }

    #[test]
    fn bar_output_survives_revalidation() {
        // CoalgebraData::new re-checks d², coassociativity and co-Leibniz;
        // build a case with both inner differentials and merges active.
        let a = cobar(&CoalgebraData::truncated_dual(4)).unwrap();
        let b = bar(&a, 4).unwrap();
        assert!(b.data.len() > 0);
        let _ = limits_guard();
    }
}
