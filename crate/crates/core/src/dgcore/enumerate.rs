//! Enumeration of normal-form monomials within a degree window.

use std::collections::BTreeMap;

use crate::exactalg::ExactError;

use super::{DgPresentation, MulKind};

/// True when the total multiplicity of the generator in any monomial is
/// bounded (nilpotency, or an odd generator in a commutative algebra).
fn bounded_multiplicity(p: &DgPresentation, g: usize) -> Option<u32> {
    if let Some(&k) = p.nilpotency.get(&g) {
        return Some(k - 1);
    }
    if p.kind == MulKind::GradedCommutative && p.gens[g].degree.rem_euclid(2) == 1 {
        return Some(1);
    }
    None
}

/// All normal-form monomials with homological degree in [d_min, d_max]
/// (and weight at most `weight_bound` when given), keyed by degree and
/// ordered by (weight, word). Errors when the window would contain
/// infinitely many monomials.
pub fn monomial_basis(
    p: &DgPresentation,
    d_min: i64,
    d_max: i64,
    weight_bound: Option<i64>,
) -> Result<BTreeMap<i64, Vec<Vec<u16>>>, ExactError> {
    assert!(d_min <= d_max);
    // Multiplicity cap coming from a weight bound on a weight-positive
    // generator.
    let weight_cap = |g: usize| -> Option<u32> {
        let wb = weight_bound?;
        let w = p.gens[g].weight;
        if w > 0 {
            Some((wb.max(0) / w) as u32)
        } else {
            None
        }
    };
    // Finiteness guard: generators that can repeat without bound must all
    // have degrees of one strict sign.
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut zero = Vec::new();
    for (g, spec) in p.gens.iter().enumerate() {
        // A weight cap bounds a free word only when every letter costs
        // weight, so that the enumerator's weight pruning terminates.
        let weight_bounded = weight_cap(g).is_some()
            && (p.kind == MulKind::GradedCommutative
                || p.gens.iter().all(|spec| spec.weight > 0));
        let unbounded = match p.kind {
            MulKind::GradedCommutative => bounded_multiplicity(p, g).is_none(),
            // Run-based nilpotency does not bound total multiplicity in a
            // free word, so every free generator counts as unbounded here.
            MulKind::FreeAssociative => true,
        } && !weight_bounded;
        if unbounded {
            match spec.degree.signum() {
                1 => pos.push(g),
                -1 => neg.push(g),
                _ => zero.push(spec.name.clone()),
            }
        }
    }
    if !zero.is_empty() {
        return Err(ExactError::Invalid(format!(
            "basis not finite in window: degree-0 generators without nilpotency: {}",
            zero.join(", ")
        )));
    }
    if !pos.is_empty() && !neg.is_empty() {
        return Err(ExactError::Invalid(
            "basis not finite in window: unbounded generators of both degree signs".into(),
        ));
    }

    let mut found: Vec<Vec<u16>> = Vec::new();
    match p.kind {
        MulKind::GradedCommutative => {
            // Degree span contributed by multiplicity-bounded generators.
            let mut span_lo = 0i64;
            let mut span_hi = 0i64;
            for (g, spec) in p.gens.iter().enumerate() {
                if let Some(m) = bounded_multiplicity(p, g) {
                    let total = spec.degree * m as i64;
                    span_lo += total.min(0);
                    span_hi += total.max(0);
                }
            }
            let caps: Vec<u32> = p
                .gens
                .iter()
                .enumerate()
                .map(|(g, spec)| {
                    let nil = bounded_multiplicity(p, g);
                    let wcap = weight_cap(g);
                    let dcap = if spec.degree == 0 {
                        None
                    } else {
                        // Loose but safe cap from the degree budget.
                        let reach = if spec.degree > 0 {
                            d_max - span_lo
                        } else {
                            span_hi - d_min
                        };
                        Some(if reach < 0 { 0 } else { (reach / spec.degree.abs()) as u32 })
                    };
                    [nil, wcap, dcap]
                        .into_iter()
                        .flatten()
                        .min()
                        .expect("the finiteness guard leaves at least one cap")
                })
                .collect();
            let mut exps = vec![0u32; p.gens.len()];
            enumerate_commutative(p, &caps, 0, &mut exps, d_min, d_max, weight_bound, &mut found);
        }
        MulKind::FreeAssociative => {
            let mut word = Vec::new();
            enumerate_free(p, &mut word, d_min, d_max, weight_bound, &mut found);
        }
    }

    let mut by_degree: BTreeMap<i64, Vec<Vec<u16>>> = BTreeMap::new();
    for k in d_min..=d_max {
        by_degree.insert(k, Vec::new());
    }
    found.sort_by(|a, b| {
        (p.weight_of_word(a), a.clone()).cmp(&(p.weight_of_word(b), b.clone()))
    });
    for w in found {
        by_degree.get_mut(&p.degree_of_word(&w)).unwrap().push(w);
    }
    Ok(by_degree)
}

fn enumerate_commutative(
    p: &DgPresentation,
    caps: &[u32],
    g: usize,
    exps: &mut Vec<u32>,
    d_min: i64,
    d_max: i64,
    weight_bound: Option<i64>,
    found: &mut Vec<Vec<u16>>,
) {
    if g == p.gens.len() {
        let mut word = Vec::new();
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                word.push(i as u16);
            }
        }
        let deg = p.degree_of_word(&word);
        if deg < d_min || deg > d_max {
            return;
        }
        if let Some(wb) = weight_bound {
            if p.weight_of_word(&word) > wb {
                return;
            }
        }
        found.push(word);
        return;
    }
    for e in 0..=caps[g] {
        exps[g] = e;
        enumerate_commutative(p, caps, g + 1, exps, d_min, d_max, weight_bound, found);
    }
    exps[g] = 0;
}

fn enumerate_free(
    p: &DgPresentation,
    word: &mut Vec<u16>,
    d_min: i64,
    d_max: i64,
    weight_bound: Option<i64>,
    found: &mut Vec<Vec<u16>>,
) {
    let deg = p.degree_of_word(word);
    // When every generator carries positive weight, the weight bound makes
    // overshooting it final.
    if let Some(wb) = weight_bound {
        if p.gens.iter().all(|g| g.weight > 0) && p.weight_of_word(word) > wb {
            return;
        }
    }
    // All free generators share a degree sign, so overshooting is final.
    let all_pos = p.gens.iter().all(|g| g.degree > 0);
    if all_pos && deg > d_max {
        return;
    }
    if !all_pos && deg < d_min {
        return;
    }
    if deg >= d_min && deg <= d_max {
        let weight_ok = weight_bound.map_or(true, |wb| p.weight_of_word(word) <= wb);
        if weight_ok {
            found.push(word.clone());
        }
    }
    for g in 0..p.gens.len() {
        word.push(g as u16);
        // A word killed by a nilpotency run stays dead under extension.
        let alive = {
            let mut run = 0usize;
            let mut ok = true;
            if let Some(&k) = p.nilpotency.get(&g) {
                for &a in word.iter() {
                    if a as usize == g {
                        run += 1;
                        if run >= k as usize {
                            ok = false;
                            break;
                        }
                    } else {
                        run = 0;
                    }
                }
            }
            ok
        };
        if alive {
            enumerate_free(p, word, d_min, d_max, weight_bound, found);
        }
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::presets;

    #[test]
    fn tower_rank_one_per_degree() {
        // Q[x]<y1> with |y1| = 1: one word per degree k (the k-letter word).
        let p = presets::free_odd_tower(1);
        let basis = monomial_basis(&p, 0, 4, None).unwrap();
        for k in 0..=4 {
            assert_eq!(basis[&k].len(), 1, "degree {}", k);
            assert_eq!(basis[&k][0].len(), k as usize);
        }
    }

    #[test]
    fn truncated_negative_generator() {
        // Q[x,t]/(t^3) with |t| = -2: basis 1, t, t^2 in degrees 0, -2, -4.
        let p = presets::curved_truncation(2);
        let basis = monomial_basis(&p, -4, 0, None).unwrap();
        assert_eq!(basis[&0].len(), 1);
        assert_eq!(basis[&-1].len(), 0);
        assert_eq!(basis[&-2].len(), 1);
        assert_eq!(basis[&-3].len(), 0);
        assert_eq!(basis[&-4].len(), 1);
    }

    #[test]
    fn odd_generator_caps_at_one() {
        let p = presets::odd_resolution(1);
        let basis = monomial_basis(&p, 0, 3, None).unwrap();
        assert_eq!(basis[&0].len(), 1);
        assert_eq!(basis[&1].len(), 1);
        assert_eq!(basis[&2].len(), 0);
        assert_eq!(basis[&3].len(), 0);
    }

    #[test]
    fn rejects_unbounded_degree_zero() {
        let p = crate::dgcore::DgPresentation::new(
            crate::exactalg::RingTag::Q,
            crate::dgcore::MulKind::GradedCommutative,
            vec![crate::dgcore::GeneratorSpec::new("z", 0)],
        );
        assert!(monomial_basis(&p, 0, 2, None).is_err());
    }

    #[test]
    fn semifree_tower_counts() {
        // Q[x][t, xi] with |t| = -2, |xi| = -3 (n = 1): degree -2k has t^k,
        // degree -2k-3 has t^k xi.
        let p = presets::semifree_tower(1);
        let basis = monomial_basis(&p, -7, 0, None).unwrap();
        assert_eq!(basis[&0].len(), 1); // 1
        assert_eq!(basis[&-2].len(), 1); // t
        assert_eq!(basis[&-3].len(), 1); // xi
        assert_eq!(basis[&-4].len(), 1); // t^2
        assert_eq!(basis[&-5].len(), 1); // t xi
        assert_eq!(basis[&-7].len(), 1); // t^2 xi
        assert_eq!(basis[&-1].len(), 0);
    }
}
