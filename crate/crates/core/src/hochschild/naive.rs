//! The small ("naive") Hochschild model of a semi-free algebra: the cone of
//! the commutator map from cyclic 1-forms to the algebra, with the cyclic
//! derivative as the degree +1 operator, plus the comparison map from the
//! tensor complex.
//!
//! Cyclic 1-forms: the quotient of the bimodule of noncommutative 1-forms
//! by graded commutators. Canonical basis: w·d(g) with w a normal-form
//! monomial and g a generator; the rewrite moving a tail monomial to the
//! front is a(dg)b ≡ (−1)^{|b|·(|a|+|g|+1)} (ba)(dg) — the form d(g)
//! carries the shifted degree |g|+1 in commutator signs. The cone degree of
//! w·d(g) is |w|+|g|+1. Differentials (validated by the machine checks at
//! construction):
//!   * on the algebra part: the algebra differential; B is the cyclic
//!     derivative δ (Koszul sign (−1)^{|prefix|} per letter, then rewrite);
//!   * on the form part:
//!       d(w·dg) = (−1)^{|w|}(wg − (−1)^{|w||g|} gw)
//!               + (dw)·dg + (−1)^{|w|+1} w·δ(dg-image),
//!     where the left multiplication happens before projecting to cyclic
//!     forms. These signs are forced by requiring the comparison map
//!     a₀ ⊗ a₁ ↦ a₀·d(a₁) (no extra sign; d the odd universal derivation)
//!     to be a chain map from the tensor complex.

use std::collections::{BTreeMap, HashMap};

use crate::dgcore::{monomial_basis, AlgebraElement, DgPresentation};
use crate::exactalg::{
    homology_with, ExactError, FreeComplex, Limits, PolyScalar, SparseMatrix,
};

use super::{MixedComplex, Provenance, TruncationPolicy};

type Word = Vec<u16>;

/// A basis element of the naive complex: a monomial of the algebra, or a
/// cyclic 1-form w·d(g).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) enum NaiveElem {
    Alg(Word),
    Form(Word, u16),
}

impl NaiveElem {
    fn degree(&self, p: &DgPresentation) -> i64 {
        match self {
            NaiveElem::Alg(w) => p.degree_of_word(w),
            NaiveElem::Form(w, g) => {
                p.degree_of_word(w) + p.gens[*g as usize].degree + 1
            }
        }
    }

    fn label(&self, p: &DgPresentation) -> String {
        let render = |w: &Word| -> String {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(|&g| p.gens[g as usize].name.clone())
                    .collect::<Vec<_>>()
                    .join("*")
            }
        };
        match self {
            NaiveElem::Alg(w) => render(w),
            NaiveElem::Form(w, g) => {
                let dg = format!("d({})", p.gens[*g as usize].name);
                if w.is_empty() {
                    dg
                } else {
                    format!("{}*{}", render(w), dg)
                }
            }
        }
    }
}

fn neg_pow(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

fn word_elem(p: &DgPresentation, w: &Word) -> AlgebraElement {
    AlgebraElement::from_word(w.clone(), PolyScalar::one(p.base))
}

/// Accumulates linear combinations of cyclic forms.
fn push_form(out: &mut Vec<(NaiveElem, PolyScalar)>, w: Word, g: u16, c: PolyScalar) {
    if !c.is_zero() {
        out.push((NaiveElem::Form(w, g), c));
    }
}

/// Project an uncanonical 1-form a·(dg)·b onto the cyclic basis: each
/// homogeneous term of `a` is rewritten as ±(b·a)·dg.
fn project(
    p: &DgPresentation,
    a: &AlgebraElement,
    g: u16,
    b: &Word,
    scale: &PolyScalar,
    out: &mut Vec<(NaiveElem, PolyScalar)>,
) {
    let deg_b = p.degree_of_word(b);
    let deg_g = p.gens[g as usize].degree;
    for (wa, ca) in a.terms() {
        let flip = neg_pow(deg_b * (p.degree_of_word(wa) + deg_g + 1));
        let prod = p.multiply(&word_elem(p, b), &word_elem(p, wa));
        for (u, cu) in prod.terms() {
            let mut c = scale.mul(ca).mul(cu);
            if flip {
                c = c.neg();
            }
            push_form(out, u.clone(), g, c);
        }
    }
}

/// The uncanonical 1-form triples of the derivative of a word: one per
/// letter, with the Koszul sign of moving the odd operator past the prefix.
fn delta_triples(p: &DgPresentation, w: &Word) -> Vec<(Word, u16, Word, bool)> {
    let mut out = Vec::new();
    let mut prefix_deg = 0i64;
    for (j, &g) in w.iter().enumerate() {
        out.push((w[..j].to_vec(), g, w[j + 1..].to_vec(), neg_pow(prefix_deg)));
        prefix_deg += p.gens[g as usize].degree;
    }
    out
}

/// The cyclic derivative δ of an algebra element, as a combination of basis
/// forms.
fn cyclic_derivative(
    p: &DgPresentation,
    a: &AlgebraElement,
) -> Vec<(NaiveElem, PolyScalar)> {
    let mut out = Vec::new();
    for (w, c) in a.terms() {
        for (pre, g, suf, flip) in delta_triples(p, w) {
            let scale = if flip { c.neg() } else { c.clone() };
            project(p, &word_elem(p, &pre), g, &suf, &scale, &mut out);
        }
    }
    out
}

/// The cone differential applied to one basis element.
fn cone_diff(p: &DgPresentation, e: &NaiveElem) -> Vec<(NaiveElem, PolyScalar)> {
    let mut out = Vec::new();
    match e {
        NaiveElem::Alg(w) => {
            for (v, c) in p.differential(&word_elem(p, w)).terms() {
                out.push((NaiveElem::Alg(v.clone()), c.clone()));
            }
        }
        NaiveElem::Form(w, g) => {
            let gi = *g as usize;
            let deg_w = p.degree_of_word(w);
            let deg_g = p.gens[gi].degree;
            // (−1)^{|w|}·(the graded commutator of w and g).
            let sign_w = neg_pow(deg_w);
            let wg = p.multiply(&word_elem(p, w), &p.gen_elem(&p.gens[gi].name));
            for (v, c) in wg.terms() {
                out.push((NaiveElem::Alg(v.clone()), if sign_w { c.neg() } else { c.clone() }));
            }
            let gw = p.multiply(&p.gen_elem(&p.gens[gi].name), &word_elem(p, w));
            let flip_comm = neg_pow(deg_w * deg_g) ^ sign_w;
            for (v, c) in gw.terms() {
                out.push((
                    NaiveElem::Alg(v.clone()),
                    if flip_comm { c.clone() } else { c.neg() },
                ));
            }
            // (d_A w)·dg, already canonical.
            for (v, c) in p.differential(&word_elem(p, w)).terms() {
                push_form(&mut out, v.clone(), *g, c.clone());
            }
            // −(−1)^{|w|} w·δ(d_A g), projected after the left multiplication.
            let extra_flip = !neg_pow(deg_w);
            for (v, cv) in p.diff[gi].terms() {
                for (pre, l, suf, flip) in delta_triples(p, v) {
                    let mut c = cv.clone();
                    if flip ^ extra_flip {
                        c = c.neg();
                    }
                    let a = p.multiply(&word_elem(p, w), &word_elem(p, &pre));
                    project(p, &a, l, &suf, &c, &mut out);
                }
            }
        }
    }
    out
}

/// B on the naive complex: the cyclic derivative on the algebra part, zero
/// on forms.
fn cone_big_b(p: &DgPresentation, e: &NaiveElem) -> Vec<(NaiveElem, PolyScalar)> {
    match e {
        NaiveElem::Alg(w) => cyclic_derivative(p, &word_elem(p, w)),
        NaiveElem::Form(_, _) => Vec::new(),
    }
}

fn enumerate(
    p: &DgPresentation,
    policy: &TruncationPolicy,
) -> Result<BTreeMap<i64, Vec<NaiveElem>>, ExactError> {
    let lo_ext = policy.d_min - 1;
    let hi_ext = policy.d_max + 1;
    let negative = p.gens.iter().any(|g| g.degree < 0);
    let (pool_lo, pool_hi) = if negative {
        (lo_ext.min(0), 0)
    } else {
        (0, hi_ext.max(0))
    };
    let pool = monomial_basis(p, pool_lo, pool_hi, policy.weight_bound)?;
    let mut buckets: BTreeMap<i64, Vec<NaiveElem>> = BTreeMap::new();
    for k in lo_ext..=hi_ext {
        buckets.insert(k, Vec::new());
    }
    let mut push = |e: NaiveElem| {
        let d = e.degree(p);
        if let Some(v) = buckets.get_mut(&d) {
            v.push(e);
        }
    };
    for words in pool.values() {
        for w in words {
            push(NaiveElem::Alg(w.clone()));
            for g in 0..p.gens.len() as u16 {
                push(NaiveElem::Form(w.clone(), g));
            }
        }
    }
    for v in buckets.values_mut() {
        v.sort();
    }
    Ok(buckets)
}

/// The naive Hochschild complex of a semi-free presentation on the policy
/// window: the cone of the commutator map from cyclic 1-forms to the
/// algebra, with the cyclic derivative as mixed structure.
pub fn naive_hochschild(
    p: &DgPresentation,
    policy: &TruncationPolicy,
) -> Result<MixedComplex, ExactError> {
    p.validate()?;
    if !p.nilpotency.is_empty() {
        return Err(ExactError::Invalid(
            "naive complex requires a semi-free presentation (no nilpotency relations)".into(),
        ));
    }
    if !p.curvature.is_zero() {
        return Err(ExactError::Invalid(
            "naive complex requires zero curvature".into(),
        ));
    }
    let buckets = enumerate(p, policy)?;
    let exact_low = buckets[&(policy.d_min - 1)].is_empty();
    let exact_high = buckets[&(policy.d_max + 1)].is_empty();

    let mut index: HashMap<NaiveElem, (i64, usize)> = HashMap::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for k in policy.d_min..=policy.d_max {
        for (i, e) in buckets[&k].iter().enumerate() {
            index.insert(e.clone(), (k, i));
        }
        labels.push(buckets[&k].iter().map(|e| e.label(p)).collect());
    }
    let rank = |k: i64| -> usize {
        if k < policy.d_min || k > policy.d_max {
            0
        } else {
            buckets[&k].len()
        }
    };

    let mut diffs = Vec::new();
    for k in (policy.d_min + 1)..=policy.d_max {
        let mut m = SparseMatrix::zero(p.base, rank(k - 1), rank(k));
        for (j, e) in buckets[&k].iter().enumerate() {
            for (e2, c) in cone_diff(p, e) {
                if let Some(&(deg, i)) = index.get(&e2) {
                    debug_assert_eq!(deg, k - 1);
                    m.add_to(i, j, &c);
                }
            }
        }
        diffs.push(m);
    }
    let mut b_up = Vec::new();
    for k in policy.d_min..=policy.d_max {
        let target = if k == policy.d_max { 0 } else { rank(k + 1) };
        let mut m = SparseMatrix::zero(p.base, target, rank(k));
        if k < policy.d_max {
            for (j, e) in buckets[&k].iter().enumerate() {
                for (e2, c) in cone_big_b(p, e) {
                    if let Some(&(deg, i)) = index.get(&e2) {
                        debug_assert_eq!(deg, k + 1);
                        m.add_to(i, j, &c);
                    }
                }
            }
        }
        b_up.push(m);
    }

    let complex = FreeComplex::new(p.base, policy.d_min, labels, diffs)?;
    let mut mc = MixedComplex::new(complex, b_up, Provenance::Naive)?
        .with_exactness(exact_low, exact_high);
    mc.basis_forms =
        Some((policy.d_min..=policy.d_max).map(|k| buckets[&k].clone()).collect());
    Ok(mc)
}

/// Result of checking the comparison map from the tensor complex to the
/// naive complex: a₀ ↦ a₀ on tensor length 0, a₀[a₁] ↦ a₀·δ(a₁) on length
/// 1, zero on length ≥ 2.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub is_chain_map: bool,
    pub first_failure: Option<String>,
    /// True when both homology reports agree (free rank and invariant
    /// factors) on every degree trusted on both sides.
    pub quasi_iso: bool,
    /// `maps[k - d_min]`: the comparison matrix at degree k.
    pub maps: Vec<SparseMatrix>,
}

/// Build and verify the comparison map between a tensor-built mixed complex
/// and a naive complex of the same presentation on the same window.
pub fn comparison_map(
    p: &DgPresentation,
    hoch: &MixedComplex,
    nv: &MixedComplex,
    margin: i64,
    limits: Limits,
) -> Result<ComparisonReport, ExactError> {
    let ch = hoch.complex();
    let cn = nv.complex();
    if ch.d_min() != cn.d_min() || ch.d_max() != cn.d_max() {
        return Err(ExactError::Invalid("windows differ".into()));
    }
    let d_min = ch.d_min();
    let d_max = ch.d_max();

    let mut nv_index: HashMap<NaiveElem, (i64, usize)> = HashMap::new();
    for k in d_min..=d_max {
        let Some(es) = nv.forms_at(k) else {
            return Err(ExactError::Invalid("naive complex lacks its form basis".into()));
        };
        for (i, e) in es.iter().enumerate() {
            nv_index.insert(e.clone(), (k, i));
        }
    }

    let mut maps = Vec::new();
    for k in d_min..=d_max {
        let Some(ts) = hoch.tensors_at(k) else {
            return Err(ExactError::Invalid("tensor complex lacks its tensor basis".into()));
        };
        let mut m = SparseMatrix::zero(p.base, cn.rank(k), ts.len());
        for (col, t) in ts.iter().enumerate() {
            let terms: Vec<(NaiveElem, PolyScalar)> = match t.length() {
                0 => vec![(NaiveElem::Alg(t.slots[0].clone()), PolyScalar::one(p.base))],
                1 => {
                    // a₀ · δ(a₁): left-multiply before projecting.
                    let mut out = Vec::new();
                    for (pre, g, suf, flip) in delta_triples(p, &t.slots[1]) {
                        let c = if flip {
                            PolyScalar::one(p.base).neg()
                        } else {
                            PolyScalar::one(p.base)
                        };
                        let a = p.multiply(&word_elem(p, &t.slots[0]), &word_elem(p, &pre));
                        project(p, &a, g, &suf, &c, &mut out);
                    }
                    out
                }
                _ => Vec::new(),
            };
            for (e, c) in terms {
                if let Some(&(deg, i)) = nv_index.get(&e) {
                    debug_assert_eq!(deg, k);
                    m.add_to(i, col, &c);
                }
            }
        }
        maps.push(m);
    }

    let map_at = |k: i64| -> &SparseMatrix { &maps[(k - d_min) as usize] };
    let mut is_chain_map = true;
    let mut first_failure = None;
    for k in (d_min + 1)..=d_max {
        let lhs = map_at(k - 1).mul(&hoch.b(k));
        let rhs = nv.b(k).mul(map_at(k));
        if lhs != rhs {
            is_chain_map = false;
            first_failure = Some(format!("b at degree {}", k));
            break;
        }
    }
    if is_chain_map {
        for k in d_min..d_max {
            let lhs = map_at(k + 1).mul(&hoch.big_b(k));
            let rhs = nv.big_b(k).mul(map_at(k));
            if lhs != rhs {
                is_chain_map = false;
                first_failure = Some(format!("B at degree {}", k));
                break;
            }
        }
    }

    let hh = homology_with(ch, limits)?;
    let hn = homology_with(cn, limits)?;
    let (lo_h, hi_h) = hoch.trusted_range(margin);
    let (lo_n, hi_n) = nv.trusted_range(margin);
    let lo = lo_h.max(lo_n);
    let hi = hi_h.min(hi_n);
    let mut quasi_iso = true;
    for k in lo..=hi {
        let a = hh.at(k);
        let b = hn.at(k);
        let ok = match (a, b) {
            (Some(a), Some(b)) => {
                a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors
            }
            _ => false,
        };
        if !ok {
            quasi_iso = false;
            if first_failure.is_none() {
                first_failure = Some(format!("homology at degree {}", k));
            }
            break;
        }
    }

    Ok(ComparisonReport { is_chain_map, first_failure, quasi_iso, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::{presets, DgPresentation, MulKind};
    use crate::exactalg::RingTag;
    use crate::hochschild::{hochschild_mixed, UnitPolicy};

    #[test]
    fn base_algebra_is_concentrated_in_degree_zero() {
        let p = DgPresentation::new(RingTag::Qx, MulKind::GradedCommutative, vec![]);
        let policy = TruncationPolicy::new(0, 3, 1);
        let m = naive_hochschild(&p, &policy).unwrap();
        assert_eq!(m.complex().rank(0), 1);
        for k in 1..=3 {
            assert_eq!(m.complex().rank(k), 0);
        }
        assert!(m.exact_low && m.exact_high);
    }

    #[test]
    fn tower_ranks_match_direct_enumeration() {
        // C₁ = free algebra on one odd generator y (degree 1) over Q[x]:
        // algebra part has one word per degree; forms w·d(y) have degree
        // |w| + 2.
        let p = presets::free_odd_tower(1);
        let policy = TruncationPolicy::new(0, 6, 1);
        let m = naive_hochschild(&p, &policy).unwrap();
        assert_eq!(m.complex().rank(0), 1); // 1
        assert_eq!(m.complex().rank(1), 1); // y
        for k in 2..=6 {
            assert_eq!(m.complex().rank(k), 2, "degree {}", k); // y^k, y^{k-2} d(y)
        }
        assert!(m.exact_low && !m.exact_high);
    }

    #[test]
    fn nilpotent_presentations_rejected() {
        let p = presets::truncated_affine(2);
        let policy = TruncationPolicy::new(0, 3, 1);
        assert!(naive_hochschild(&p, &policy).is_err());
    }

    #[test]
    fn comparison_map_is_chain_quasi_iso_for_small_towers() {
        for n in 1..=2u32 {
            let p = presets::free_odd_tower(n);
            let policy = TruncationPolicy::new(0, 6, 1);
            let hoch = hochschild_mixed(&p, &policy, UnitPolicy::Full).unwrap();
            let nv = naive_hochschild(&p, &policy).unwrap();
            let rep = comparison_map(&p, &hoch, &nv, 2, Limits::default()).unwrap();
            assert!(rep.is_chain_map, "n={}: {:?}", n, rep.first_failure);
            assert!(rep.quasi_iso, "n={}: {:?}", n, rep.first_failure);
        }
    }

    #[test]
    fn cyclic_derivative_of_odd_square_vanishes() {
        // δ(y²) = y·dy − y·dy = 0 for odd y: the two rewrites cancel.
        let p = presets::free_odd_tower(1);
        let y2 = p.multiply(&p.gen_elem("y1"), &p.gen_elem("y1"));
        let mut acc: std::collections::HashMap<NaiveElem, PolyScalar> =
            std::collections::HashMap::new();
        for (e, c) in cyclic_derivative(&p, &y2) {
            let entry = acc.entry(e).or_insert_with(|| PolyScalar::zero(RingTag::Qx));
            *entry = entry.add(&c);
        }
        assert!(acc.values().all(|c| c.is_zero()));
    }
}


