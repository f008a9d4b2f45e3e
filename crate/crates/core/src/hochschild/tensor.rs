//! Chain bases of reduced Hochschild complexes as tensors of normal-form
//! monomials, the operators b (with optional curvature insertion) and B on
//! them, and assembly into validated mixed complexes.

use std::collections::{BTreeMap, HashMap};

use crate::dgcore::{monomial_basis, AlgebraElement, DgPresentation};
use crate::exactalg::{ExactError, FreeComplex, PolyScalar, SparseMatrix};

use super::{MixedComplex, Provenance, TruncationPolicy, UnitPolicy};

type Word = Vec<u16>;

/// A basis chain (a₀, a₁, …, a_k): `slots[0]` is the A-monomial a₀ (the
/// empty word is the unit), the remaining slots are nonunit monomials of
/// the reduced part.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Tensor {
    pub slots: Vec<Word>,
}

impl Tensor {
    pub fn length(&self) -> usize {
        self.slots.len() - 1
    }

    pub fn degree(&self, p: &DgPresentation) -> i64 {
        let mut d = p.degree_of_word(&self.slots[0]);
        for s in &self.slots[1..] {
            d += p.degree_of_word(s) + 1;
        }
        d
    }

    pub fn weight(&self, p: &DgPresentation) -> i64 {
        self.slots.iter().map(|s| p.weight_of_word(s)).sum()
    }

    pub fn label(&self, p: &DgPresentation) -> String {
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
        if self.slots.len() == 1 {
            render(&self.slots[0])
        } else {
            format!(
                "{}[{}]",
                render(&self.slots[0]),
                self.slots[1..].iter().map(render).collect::<Vec<_>>().join("|")
            )
        }
    }
}

fn neg_pow(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

fn signed(c: &PolyScalar, flip: bool) -> PolyScalar {
    if flip {
        c.neg()
    } else {
        c.clone()
    }
}

/// Degrees of the prefixes (a₀, …, a_i) in the shifted grading.
fn prefix_degrees(p: &DgPresentation, t: &Tensor) -> Vec<i64> {
    let mut pd = Vec::with_capacity(t.slots.len());
    let mut acc = p.degree_of_word(&t.slots[0]);
    pd.push(acc);
    for s in &t.slots[1..] {
        acc += p.degree_of_word(s) + 1;
        pd.push(acc);
    }
    pd
}

pub(crate) struct HochBuilder<'a> {
    pub p: &'a DgPresentation,
    pub curved: bool,
}

impl<'a> HochBuilder<'a> {
    fn word_elem(&self, w: &Word) -> AlgebraElement {
        AlgebraElement::from_word(w.clone(), PolyScalar::one(self.p.base))
    }

    /// b = b_{m2} + b_{m1} (+ b_{m0} when curved), as a combination of basis
    /// tensors one degree down. Unit monomials landing in inner slots are
    /// dropped (they span the degenerate subcomplex).
    pub fn b_image(&self, t: &Tensor) -> Vec<(Tensor, PolyScalar)> {
        let p = self.p;
        let k = t.length();
        let pd = prefix_degrees(p, t);
        let mut out: Vec<(Tensor, PolyScalar)> = Vec::new();

        // b_{m1}: differentiate slot i; Koszul sign of moving d past the
        // prefix strictly before slot i, plus one sign from d crossing the
        // suspension of slot i itself (absent at the unsuspended slot 0).
        for i in 0..=k {
            let flip = i > 0 && !neg_pow(pd[i - 1]);
            let da = p.differential(&self.word_elem(&t.slots[i]));
            for (w, c) in da.terms() {
                if i > 0 && w.is_empty() {
                    continue;
                }
                let mut slots = t.slots.clone();
                slots[i] = w.clone();
                out.push((Tensor { slots }, signed(c, flip)));
            }
        }

        // b_{m2}, inner merges: multiply slots i and i+1.
        for i in 0..k {
            let flip = neg_pow(pd[i]);
            let prod = p.multiply(&self.word_elem(&t.slots[i]), &self.word_elem(&t.slots[i + 1]));
            for (w, c) in prod.terms() {
                if i > 0 && w.is_empty() {
                    continue;
                }
                let mut slots = Vec::with_capacity(t.slots.len() - 1);
                slots.extend_from_slice(&t.slots[..i]);
                slots.push(w.clone());
                slots.extend_from_slice(&t.slots[i + 2..]);
                out.push((Tensor { slots }, signed(c, flip)));
            }
        }

        // b_{m2}, cyclic merge: a_k wraps around onto a₀.
        if k >= 1 {
            let a_k = &t.slots[k];
            let shifted = p.degree_of_word(a_k) + 1;
            let flip = !neg_pow(shifted * pd[k - 1]); // −(−1)^{‖a_k‖·P_{k−1}}
            let prod = p.multiply(&self.word_elem(a_k), &self.word_elem(&t.slots[0]));
            for (w, c) in prod.terms() {
                let mut slots = Vec::with_capacity(k);
                slots.push(w.clone());
                slots.extend_from_slice(&t.slots[1..k]);
                out.push((Tensor { slots }, signed(c, flip)));
            }
        }

        // b_{m0}: insert the curvature after slot i, with an overall minus.
        if self.curved && !p.curvature.is_zero() {
            for i in 0..=k {
                let flip = !neg_pow(pd[i]); // (−1)^{P_i + 1}
                for (w, c) in p.curvature.terms() {
                    if w.is_empty() {
                        continue;
                    }
                    let mut slots = Vec::with_capacity(t.slots.len() + 1);
                    slots.extend_from_slice(&t.slots[..=i]);
                    slots.push(w.clone());
                    slots.extend_from_slice(&t.slots[i + 1..]);
                    out.push((Tensor { slots }, signed(c, flip)));
                }
            }
        }
        out
    }

    /// Connes–Tsygan operator: cyclic rotations prepended with the unit.
    /// Vanishes on unit-led tensors, since every rotation puts the unit
    /// into an inner slot.
    pub fn big_b_image(&self, t: &Tensor) -> Vec<(Tensor, PolyScalar)> {
        let p = self.p;
        if t.slots[0].is_empty() {
            return Vec::new();
        }
        let k = t.length();
        let pd = prefix_degrees(p, t);
        let total = pd[k] + 1; // everything shifted, a₀ included
        let one = PolyScalar::one(p.base);
        let mut out = Vec::new();
        for i in 0..=k {
            let block = if i == 0 { 0 } else { pd[i - 1] + 1 };
            let flip = neg_pow(block * (total - block));
            let mut slots = Vec::with_capacity(t.slots.len() + 1);
            slots.push(Vec::new());
            slots.extend_from_slice(&t.slots[i..]);
            slots.extend_from_slice(&t.slots[..i]);
            out.push((Tensor { slots }, signed(&one, flip)));
        }
        out
    }
}

/// Classification of the reduced part's shifted degrees: all ≥ 1 or all
/// ≤ −1, which bounds the tensor length inside any window.
fn shifted_sign(p: &DgPresentation) -> Result<i64, ExactError> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut bad = Vec::new();
    for g in &p.gens {
        if g.degree >= 0 {
            pos.push(g.name.clone());
        } else if g.degree == -1 {
            bad.push(g.name.clone());
        } else {
            neg.push(g.name.clone());
        }
    }
    if !bad.is_empty() {
        return Err(ExactError::Invalid(format!(
            "unbounded tensor length in window: generators of degree -1 (shifted degree 0): {}",
            bad.join(", ")
        )));
    }
    if !pos.is_empty() && !neg.is_empty() {
        return Err(ExactError::Invalid(format!(
            "unbounded tensor length in window: generators of mixed shifted-degree signs: {} vs {}",
            pos.join(", "),
            neg.join(", ")
        )));
    }
    Ok(if neg.is_empty() { 1 } else { -1 })
}

/// All basis tensors with degree in [d_min−1, d_max+1], bucketed by degree.
/// The two extra edge degrees tell the caller whether the window edges are
/// genuine truncations.
fn enumerate_tensors(
    p: &DgPresentation,
    policy: &TruncationPolicy,
    unit: UnitPolicy,
) -> Result<BTreeMap<i64, Vec<Tensor>>, ExactError> {
    let sign = shifted_sign(p)?;
    let lo_ext = policy.d_min - 1;
    let hi_ext = policy.d_max + 1;
    let (pool_lo, pool_hi) = if sign > 0 {
        (0, hi_ext.max(0))
    } else {
        (lo_ext - 1, 0)
    };
    let pool = monomial_basis(p, pool_lo, pool_hi, policy.weight_bound)?;

    // a₀ candidates (all pool words) and inner candidates (nonunit words),
    // with their degrees; iteration order is deterministic.
    let mut a0_list: Vec<(Word, i64)> = Vec::new();
    let mut inner: Vec<(Word, i64)> = Vec::new();
    for (&deg, words) in &pool {
        for w in words {
            a0_list.push((w.clone(), deg));
            if !w.is_empty() {
                inner.push((w.clone(), deg + 1)); // shifted degree
            }
        }
    }

    let mut buckets: BTreeMap<i64, Vec<Tensor>> = BTreeMap::new();
    for k in lo_ext..=hi_ext {
        buckets.insert(k, Vec::new());
    }
    let weight_ok = |t: &Tensor| match policy.weight_bound {
        Some(wb) => t.weight(p) <= wb,
        None => true,
    };

    // DFS over tensor lengths; every inner slot moves the degree strictly
    // toward the far window edge, so recursion terminates.
    fn extend(
        slots: &mut Vec<Word>,
        deg: i64,
        sign: i64,
        lo_ext: i64,
        hi_ext: i64,
        inner: &[(Word, i64)],
        p: &DgPresentation,
        weight_ok: &dyn Fn(&Tensor) -> bool,
        buckets: &mut BTreeMap<i64, Vec<Tensor>>,
    ) {
        if deg >= lo_ext && deg <= hi_ext {
            let t = Tensor { slots: slots.clone() };
            if weight_ok(&t) {
                buckets.get_mut(&deg).unwrap().push(t);
            }
        }
        for (w, sd) in inner {
            let next = deg + sd;
            if (sign > 0 && next > hi_ext) || (sign < 0 && next < lo_ext) {
                continue;
            }
            slots.push(w.clone());
            extend(slots, next, sign, lo_ext, hi_ext, inner, p, weight_ok, buckets);
            slots.pop();
        }
    }

    for (a0, d0) in &a0_list {
        if (sign > 0 && *d0 > hi_ext) || (sign < 0 && *d0 < lo_ext) {
            continue;
        }
        let mut slots = vec![a0.clone()];
        extend(&mut slots, *d0, sign, lo_ext, hi_ext, &inner, p, &weight_ok, &mut buckets);
    }

    if unit == UnitPolicy::Relative {
        for v in buckets.values_mut() {
            v.retain(|t| !(t.slots.len() == 1 && t.slots[0].is_empty()));
        }
    }
    for v in buckets.values_mut() {
        v.sort();
    }
    Ok(buckets)
}

fn assemble(
    p: &DgPresentation,
    policy: &TruncationPolicy,
    unit: UnitPolicy,
    curved: bool,
    provenance: Provenance,
) -> Result<MixedComplex, ExactError> {
    p.validate()?;
    let buckets = enumerate_tensors(p, policy, unit)?;
    let exact_low = buckets[&(policy.d_min - 1)].is_empty();
    let exact_high = buckets[&(policy.d_max + 1)].is_empty();

    let mut index: HashMap<Tensor, (i64, usize)> = HashMap::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for k in policy.d_min..=policy.d_max {
        let bucket = &buckets[&k];
        for (i, t) in bucket.iter().enumerate() {
            index.insert(t.clone(), (k, i));
        }
        labels.push(bucket.iter().map(|t| t.label(p)).collect());
    }
    let rank = |k: i64| -> usize {
        if k < policy.d_min || k > policy.d_max {
            0
        } else {
            buckets[&k].len()
        }
    };

    let builder = HochBuilder { p, curved };
    let mut diffs = Vec::new();
    for k in (policy.d_min + 1)..=policy.d_max {
        let mut m = SparseMatrix::zero(p.base, rank(k - 1), rank(k));
        for (j, t) in buckets[&k].iter().enumerate() {
            for (t2, c) in builder.b_image(t) {
                if let Some(&(deg, i)) = index.get(&t2) {
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
            for (j, t) in buckets[&k].iter().enumerate() {
                for (t2, c) in builder.big_b_image(t) {
                    if let Some(&(deg, i)) = index.get(&t2) {
                        debug_assert_eq!(deg, k + 1);
                        m.add_to(i, j, &c);
                    }
                }
            }
        }
        b_up.push(m);
    }

    let complex = FreeComplex::new(p.base, policy.d_min, labels, diffs)?;
    let mut mc = MixedComplex::new(complex, b_up, provenance)?.with_exactness(exact_low, exact_high);
    mc.basis_tensors =
        Some((policy.d_min..=policy.d_max).map(|k| buckets[&k].clone()).collect());
    Ok(mc)
}

/// The reduced Hochschild mixed complex of an uncurved presentation,
/// restricted to the policy window.
pub fn hochschild_mixed(
    p: &DgPresentation,
    policy: &TruncationPolicy,
    unit: UnitPolicy,
) -> Result<MixedComplex, ExactError> {
    if !p.curvature.is_zero() {
        return Err(ExactError::Invalid(
            "first-kind Hochschild complex requires zero curvature; use hochschild_second_kind"
                .into(),
        ));
    }
    assemble(p, policy, unit, false, Provenance::FirstKind)
}

/// The mixed Hochschild complex of the second kind: b gains the curvature
/// insertion term. With zero curvature this coincides with the first-kind
/// complex blockwise.
pub fn hochschild_second_kind(
    p: &DgPresentation,
    policy: &TruncationPolicy,
    unit: UnitPolicy,
) -> Result<MixedComplex, ExactError> {
    assemble(p, policy, unit, true, Provenance::SecondKind)
}
