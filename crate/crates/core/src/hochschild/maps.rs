//! Chain maps between mixed complexes: functorial maps induced by algebra
//! morphisms, dualization over the coefficient ring, and verification of
//! basis-level isomorphisms up to a diagonal rescaling.

use std::collections::HashMap;

use crate::dgcore::AlgebraMorphism;
use crate::exactalg::{
    homology_degrees_with, solve_factor_with, ExactError, Limits, PolyScalar, SparseMatrix,
};

use super::tensor::Tensor;
use super::{
    hochschild_mixed, hochschild_second_kind, MixedComplex, NaiveElem, TruncationPolicy,
    UnitPolicy,
};

/// A degree-0 chain map of mixed complexes commuting with both b and B
/// (machine-checked at construction on all stored operator blocks).
#[derive(Clone, Debug)]
pub struct MixedMap {
    pub source: MixedComplex,
    pub target: MixedComplex,
    /// `maps[k - d_min]`: matrix from source degree k to target degree k.
    maps: Vec<SparseMatrix>,
}

impl MixedMap {
    pub fn new(
        source: MixedComplex,
        target: MixedComplex,
        maps: Vec<SparseMatrix>,
    ) -> Result<Self, ExactError> {
        let (d_min, d_max) = (source.complex().d_min(), source.complex().d_max());
        let s = source.complex();
        let t = target.complex();
        if s.d_min() != t.d_min() || s.d_max() != t.d_max() {
            return Err(ExactError::Invalid(
                "mixed map requires matching degree windows".into(),
            ));
        }
        if maps.len() as i64 != s.d_max() - s.d_min() + 1 {
            return Err(ExactError::DimensionMismatch {
                context: format!("mixed map needs {} blocks, got {}", s.d_max() - s.d_min() + 1, maps.len()),
            });
        }
        for k in s.degrees() {
            let m = &maps[(k - s.d_min()) as usize];
            if m.rows() != t.rank(k) || m.cols() != s.rank(k) {
                return Err(ExactError::DimensionMismatch {
                    context: format!("mixed map block at degree {} has shape {}x{}", k, m.rows(), m.cols()),
                });
            }
        }
        let mm = MixedMap { source, target, maps };
        for k in (d_min + 1)..=d_max {
            let lhs = mm.map(k - 1).mul(&mm.source.b(k));
            let rhs = mm.target.b(k).mul(&mm.map(k));
            if lhs != rhs {
                return Err(ExactError::Invalid(format!(
                    "induced map does not commute with b at degree {}",
                    k
                )));
            }
        }
        for k in d_min..d_max {
            let lhs = mm.map(k + 1).mul(&mm.source.big_b(k));
            let rhs = mm.target.big_b(k).mul(&mm.map(k));
            if lhs != rhs {
                return Err(ExactError::Invalid(format!(
                    "induced map does not commute with B at degree {}",
                    k
                )));
            }
        }
        Ok(mm)
    }

    pub fn map(&self, degree: i64) -> SparseMatrix {
        let s = self.source.complex();
        if degree < s.d_min() || degree > s.d_max() {
            return SparseMatrix::zero(
                s.ring(),
                self.target.complex().rank(degree),
                s.rank(degree),
            );
        }
        self.maps[(degree - s.d_min()) as usize].clone()
    }

    /// The induced map on b-homology at one degree, as a matrix from the
    /// source homology generators to the target ones (torsion generators
    /// first, matching `DegreeHomology::generators`).
    pub fn induced_on_homology(
        &self,
        degree: i64,
        limits: Limits,
    ) -> Result<SparseMatrix, ExactError> {
        let ring = self.source.complex().ring();
        let hs = homology_degrees_with(self.source.complex(), &[degree], limits)?;
        let ht = homology_degrees_with(self.target.complex(), &[degree], limits)?;
        let src = hs.at(degree).ok_or_else(|| {
            ExactError::Invalid(format!("degree {} outside source window", degree))
        })?;
        let tgt = ht.at(degree).ok_or_else(|| {
            ExactError::Invalid(format!("degree {} outside target window", degree))
        })?;
        let n_t = self.target.complex().rank(degree);
        let mut basis = SparseMatrix::zero(ring, n_t, tgt.generators.len());
        for (c, g) in tgt.generators.iter().enumerate() {
            basis.set_column(c, g);
        }
        let presented = basis.hstack(&self.target.complex().diff(degree + 1));
        let block = self.map(degree);
        let mut m = SparseMatrix::zero(ring, tgt.generators.len(), src.generators.len());
        for (c, g) in src.generators.iter().enumerate() {
            let img = block.apply(g);
            match solve_factor_with(&presented, &img, limits)? {
                Some(y) => {
                    for (r, val) in y.iter().take(tgt.generators.len()).enumerate() {
                        if !val.is_zero() {
                            m.set(r, c, val.clone());
                        }
                    }
                }
                None => {
                    return Err(ExactError::Invalid(format!(
                        "image of a homology class at degree {} is not a cycle class",
                        degree
                    )));
                }
            }
        }
        Ok(m)
    }

    /// True when the map is an isomorphism on b-homology at `degree`:
    /// source and target reports agree (free rank and invariant factors)
    /// and the induced matrix on homology generators is invertible (all
    /// invariant factors units).
    pub fn is_iso_on_homology(&self, degree: i64, limits: Limits) -> Result<bool, ExactError> {
        let hs = homology_degrees_with(self.source.complex(), &[degree], limits)?;
        let ht = homology_degrees_with(self.target.complex(), &[degree], limits)?;
        let (src, tgt) = match (hs.at(degree), ht.at(degree)) {
            (Some(s), Some(t)) => (s, t),
            _ => return Ok(false),
        };
        if src.free_rank != tgt.free_rank || src.invariant_factors != tgt.invariant_factors {
            return Ok(false);
        }
        let n = src.generators.len();
        if n == 0 {
            return Ok(true);
        }
        let m = self.induced_on_homology(degree, limits)?;
        if m.rows() != n || m.cols() != n {
            return Ok(false);
        }
        let snf = crate::exactalg::smith_normal_form_with(&m, limits)?;
        Ok(snf.rank == n && (0..n).all(|i| snf.d.get(i, i).is_unit()))
    }
}

/// The chain map of reduced mixed complexes induced by an algebra morphism:
/// slotwise application with inner unit components dropped. Both complexes
/// are built on the same policy window; the second-kind differential is
/// used exactly when the presentations are curved, in which case the
/// morphism must carry the source curvature to the target curvature.
pub fn induced_mixed_map(
    f: &AlgebraMorphism,
    policy: &TruncationPolicy,
    unit: UnitPolicy,
) -> Result<MixedMap, ExactError> {
    let src_curved = !f.source.curvature.is_zero();
    let tgt_curved = !f.target.curvature.is_zero();
    if src_curved || tgt_curved {
        if f.apply(&f.source.curvature) != f.target.curvature {
            return Err(ExactError::Invalid(
                "morphism does not carry the source curvature to the target curvature".into(),
            ));
        }
    }
    let report = f.chain_map_report();
    if !report.is_chain_map {
        return Err(ExactError::Invalid(format!(
            "not a chain algebra map: fails on generator '{}'",
            report.first_failure.unwrap_or_default()
        )));
    }
    let build = |p: &crate::dgcore::DgPresentation| {
        if p.curvature.is_zero() {
            hochschild_mixed(p, policy, unit)
        } else {
            hochschild_second_kind(p, policy, unit)
        }
    };
    let source = build(&f.source)?;
    let target = build(&f.target)?;

    // Index of the target tensor basis.
    let mut tgt_index: HashMap<Tensor, (i64, usize)> = HashMap::new();
    for k in policy.d_min..=policy.d_max {
        let ts = target.tensors_at(k).expect("tensor-built complex");
        for (i, t) in ts.iter().enumerate() {
            tgt_index.insert(t.clone(), (k, i));
        }
    }

    let ring = f.target.base;
    let mut maps = Vec::new();
    for k in policy.d_min..=policy.d_max {
        let src_ts = source.tensors_at(k).expect("tensor-built complex");
        let mut m = SparseMatrix::zero(ring, target.complex().rank(k), src_ts.len());
        for (col, t) in src_ts.iter().enumerate() {
            // Expand the slotwise image multiplicatively, slot by slot.
            let mut partial: Vec<(Vec<Vec<u16>>, PolyScalar)> =
                vec![(Vec::new(), PolyScalar::one(ring))];
            for (si, slot) in t.slots.iter().enumerate() {
                let img = f.apply(&crate::dgcore::AlgebraElement::from_word(
                    slot.clone(),
                    PolyScalar::one(ring),
                ));
                let mut next = Vec::new();
                for (slots, c) in &partial {
                    for (w, cw) in img.terms() {
                        if si > 0 && w.is_empty() {
                            // Inner unit: degenerate, quotiented out.
                            continue;
                        }
                        let mut s2 = slots.clone();
                        s2.push(w.clone());
                        next.push((s2, c.mul(cw)));
                    }
                }
                partial = next;
            }
            for (slots, c) in partial {
                let t2 = Tensor { slots };
                if let Some(&(deg, i)) = tgt_index.get(&t2) {
                    debug_assert_eq!(deg, k);
                    m.add_to(i, col, &c);
                }
            }
        }
        maps.push(m);
    }
    MixedMap::new(source, target, maps)
}

/// Degreewise dual of a mixed complex over its coefficient ring: the
/// b-complex is dualized with the sign (−1)^{k+1} on the transpose of the
/// differential out of degree k+1, and B dualizes with the same
/// degree-dependent sign, which preserves all three mixed-complex
/// identities. Exactness flags swap sides; structured bases carry over.
pub fn dualize_mixed(mc: &MixedComplex) -> Result<MixedComplex, ExactError> {
    let c = mc.complex();
    let dual = c.dualize();
    let d_min = dual.d_min();
    let d_max = dual.d_max();
    let mut b_up = Vec::new();
    for m in d_min..=d_max {
        if m == d_max {
            b_up.push(SparseMatrix::zero(c.ring(), 0, dual.rank(m)));
            continue;
        }
        // Dual B out of degree m is the transpose of B out of original
        // degree −m−1, with the sign (−1)^{−m} = (−1)^m.
        let k = -m - 1;
        let t = mc.big_b(k).transpose();
        let signed = if m.rem_euclid(2) == 1 { t.neg() } else { t };
        b_up.push(signed);
    }
    let mut out = MixedComplex::new(dual, b_up, mc.provenance)?
        .with_exactness(mc.exact_high, mc.exact_low);
    if let Some(forms) = &mc.basis_forms {
        out.basis_forms = Some(forms.iter().rev().cloned().collect());
    }
    if let Some(tensors) = &mc.basis_tensors {
        out.basis_tensors = Some(tensors.iter().rev().cloned().collect());
    }
    Ok(out)
}

/// Check that two mixed complexes on the same window are isomorphic via the
/// given basis bijection composed with a diagonal rescaling by nonzero ring
/// units. `pairing(degree, i)` gives the paired basis index in `b`. Returns
/// the scalars (one per `a`-basis element, per degree) on success.
pub fn chain_iso_up_to_scalars(
    a: &MixedComplex,
    b: &MixedComplex,
    pairing: &dyn Fn(i64, usize) -> Option<usize>,
) -> Result<Vec<Vec<PolyScalar>>, ExactError> {
    let ca = a.complex();
    let cb = b.complex();
    let ring = ca.ring();
    if ca.d_min() != cb.d_min() || ca.d_max() != cb.d_max() {
        return Err(ExactError::Invalid("windows differ".into()));
    }
    let d_min = ca.d_min();
    let d_max = ca.d_max();

    // Resolve the pairing into permutations and check bijectivity.
    let mut perm: Vec<Vec<usize>> = Vec::new();
    for k in d_min..=d_max {
        if ca.rank(k) != cb.rank(k) {
            return Err(ExactError::Invalid(format!(
                "ranks differ at degree {}: {} vs {}",
                k,
                ca.rank(k),
                cb.rank(k)
            )));
        }
        let mut seen = vec![false; cb.rank(k)];
        let mut p = Vec::with_capacity(ca.rank(k));
        for i in 0..ca.rank(k) {
            let j = pairing(k, i).ok_or_else(|| {
                ExactError::Invalid(format!("basis element ({}, {}) unpaired", k, i))
            })?;
            if j >= seen.len() || seen[j] {
                return Err(ExactError::Invalid(format!(
                    "pairing not a bijection at degree {}",
                    k
                )));
            }
            seen[j] = true;
            p.push(j);
        }
        perm.push(p);
    }
    let pi = |k: i64, i: usize| perm[(k - d_min) as usize][i];

    // Constraints λ_u = ratio · λ_v between basis nodes (degree, index),
    // collected from matching entries of b-differentials and B-operators.
    // Entry mismatches (zero on exactly one side) fail immediately.
    let node = |k: i64, i: usize| (k, i);
    let mut edges: Vec<((i64, usize), (i64, usize), PolyScalar)> = Vec::new();
    let add_pair = |da: &SparseMatrix,
                        db: &SparseMatrix,
                        k_src: i64,
                        k_tgt: i64,
                        edges: &mut Vec<((i64, usize), (i64, usize), PolyScalar)>|
     -> Result<(), ExactError> {
        // Every nonzero entry on one side must pair with a nonzero entry on
        // the other; with equal nonzero counts, checking one direction
        // suffices.
        if da.nnz() != db.nnz() {
            return Err(ExactError::Invalid(format!(
                "operator sparsity differs at degrees {} -> {}: {} vs {} entries",
                k_src,
                k_tgt,
                da.nnz(),
                db.nnz()
            )));
        }
        for (r, cidx, va) in da.iter() {
            let vb = db.get(pi(k_tgt, r), pi(k_src, cidx));
            if vb.is_zero() {
                return Err(ExactError::Invalid(format!(
                    "operator entry present only on the left at degrees {} -> {}",
                    k_src, k_tgt
                )));
            }
            let ratio = va.exact_div(&vb).filter(|q| q.is_unit());
            let Some(q) = ratio else {
                return Err(ExactError::Invalid(format!(
                    "operator entries differ by a non-unit factor at degrees {} -> {}",
                    k_src, k_tgt
                )));
            };
            // λ_{tgt,r} · va = λ_{src,c} · vb  ⇒  λ_{tgt,r} = λ_{src,c} / q.
            let inv = PolyScalar::one(ring).exact_div(&q).expect("unit");
            edges.push((node(k_tgt, r), node(k_src, cidx), inv));
        }
        Ok(())
    };

    for k in (d_min + 1)..=d_max {
        add_pair(&a.b(k), &b.b(k), k, k - 1, &mut edges)?;
    }
    for k in d_min..d_max {
        add_pair(&a.big_b(k), &b.big_b(k), k, k + 1, &mut edges)?;
    }

    // Propagate scalars over the constraint graph.
    let mut lambda: HashMap<(i64, usize), PolyScalar> = HashMap::new();
    let mut adj: HashMap<(i64, usize), Vec<((i64, usize), PolyScalar)>> = HashMap::new();
    for (u, v, ratio) in &edges {
        // λ_u = ratio · λ_v and λ_v = ratio⁻¹ · λ_u.
        adj.entry(*v).or_default().push((*u, ratio.clone()));
        let inv = PolyScalar::one(ring).exact_div(ratio).expect("unit ratio");
        adj.entry(*u).or_default().push((*v, inv));
    }
    for k in d_min..=d_max {
        for i in 0..ca.rank(k) {
            let root = node(k, i);
            if lambda.contains_key(&root) {
                continue;
            }
            lambda.insert(root, PolyScalar::one(ring));
            let mut queue = vec![root];
            while let Some(v) = queue.pop() {
                let lv = lambda[&v].clone();
                if let Some(nbrs) = adj.get(&v) {
                    for (u, ratio) in nbrs.clone() {
                        let lu = ratio.mul(&lv);
                        match lambda.get(&u) {
                            None => {
                                lambda.insert(u, lu);
                                queue.push(u);
                            }
                            Some(existing) => {
                                if *existing != lu {
                                    return Err(ExactError::Invalid(format!(
                                        "inconsistent rescaling at degree {} index {}",
                                        u.0, u.1
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Final verification of every constraint (cycles included).
    for (u, v, ratio) in &edges {
        if lambda[u] != ratio.mul(&lambda[v]) {
            return Err(ExactError::Invalid(format!(
                "rescaling verification failed at degree {} index {}",
                u.0, u.1
            )));
        }
    }

    let mut out = Vec::new();
    for k in d_min..=d_max {
        out.push((0..ca.rank(k)).map(|i| lambda[&node(k, i)].clone()).collect());
    }
    Ok(out)
}

/// The canonical basis bijection between the dual of the naive complex of a
/// free tower on odd generators y_1, …, y_n and the second-kind tensor
/// complex of the curved truncated polynomial algebra on one generator t
/// with t^{n+1} = 0. Dualization reverses multiplication order, so the dual
/// of the word y_{i_1}⋯y_{i_k} pairs with the order-reversed tensor
/// 1[t^{i_k}|…|t^{i_1}], and the dual of (y_{i_1}⋯y_{i_k})·d(y_i) pairs
/// with t^i[t^{i_k}|…|t^{i_1}].
pub fn curved_dual_pairing(
    dual_naive: &MixedComplex,
    curved: &MixedComplex,
) -> Result<HashMap<(i64, usize), usize>, ExactError> {
    let cd = dual_naive.complex();
    let mut tgt_index: HashMap<Tensor, (i64, usize)> = HashMap::new();
    for k in curved.complex().d_min()..=curved.complex().d_max() {
        let Some(ts) = curved.tensors_at(k) else {
            return Err(ExactError::Invalid("curved complex lacks a tensor basis".into()));
        };
        for (i, t) in ts.iter().enumerate() {
            tgt_index.insert(t.clone(), (k, i));
        }
    }
    // In the curved presentation t is generator 0; t^i is the word of i
    // copies. In the tower, generator index g is y_{g+1}.
    let power = |i: usize| vec![0u16; i];
    let mut out = HashMap::new();
    for k in cd.d_min()..=cd.d_max() {
        let Some(forms) = dual_naive.forms_at(k) else {
            return Err(ExactError::Invalid("dual complex lacks a form basis".into()));
        };
        for (i, f) in forms.iter().enumerate() {
            let tensor = match f {
                NaiveElem::Alg(w) => {
                    let mut slots = vec![Vec::new()];
                    slots.extend(w.iter().rev().map(|&g| power(g as usize + 1)));
                    Tensor { slots }
                }
                NaiveElem::Form(w, g) => {
                    let mut slots = vec![power(*g as usize + 1)];
                    slots.extend(w.iter().rev().map(|&gi| power(gi as usize + 1)));
                    Tensor { slots }
                }
            };
            let Some(&(deg, j)) = tgt_index.get(&tensor) else {
                return Err(ExactError::Invalid(format!(
                    "no curved tensor pairs with basis element {} at degree {}",
                    i, k
                )));
            };
            if deg != k {
                return Err(ExactError::Invalid(format!(
                    "degree mismatch in canonical pairing: {} vs {}",
                    deg, k
                )));
            }
            out.insert((k, i), j);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::{presets, AlgebraElement};
    use crate::exactalg::Limits;

    #[test]
    fn tower_inclusion_induces_mixed_map() {
        let small = presets::free_odd_tower(1);
        let big = presets::free_odd_tower(2);
        let f = AlgebraMorphism::new(
            small,
            big.clone(),
            vec![big.gen_elem("y1")],
        )
        .unwrap();
        let policy = TruncationPolicy::new(0, 5, 1);
        let mm = induced_mixed_map(&f, &policy, UnitPolicy::Relative).unwrap();
        // Nonzero somewhere: y1-words exist on both sides.
        assert!((0..=5).any(|k| !mm.map(k).is_zero()));
    }

    #[test]
    fn quotient_map_on_homology_of_truncated_polynomials() {
        // Q[a]/a³ -> Q[a]/a², a ↦ a. On reduced degree-0 homology the image
        // of the class of a is the class of a (nonzero map).
        let src = presets::truncated_affine(3);
        let tgt = presets::truncated_affine(2);
        let f = AlgebraMorphism::new(src, tgt.clone(), vec![tgt.gen_elem("a")]).unwrap();
        let policy = TruncationPolicy::new(0, 5, 1);
        let mm = induced_mixed_map(&f, &policy, UnitPolicy::Relative).unwrap();
        let m = mm.induced_on_homology(1, Limits::default()).unwrap();
        assert!(!m.is_zero());
    }

    #[test]
    fn dual_of_dual_has_original_ranks() {
        let p = presets::truncated_affine(2);
        let policy = TruncationPolicy::new(0, 4, 1);
        let mc = hochschild_mixed(&p, &policy, UnitPolicy::Relative).unwrap();
        let dd = dualize_mixed(&dualize_mixed(&mc).unwrap()).unwrap();
        for k in 0..=4 {
            assert_eq!(dd.complex().rank(k), mc.complex().rank(k));
        }
    }

    #[test]
    fn identity_pairing_on_same_complex() {
        let p = presets::truncated_affine(2);
        let policy = TruncationPolicy::new(0, 4, 1);
        let mc = hochschild_mixed(&p, &policy, UnitPolicy::Relative).unwrap();
        let scalars = chain_iso_up_to_scalars(&mc, &mc, &|_, i| Some(i)).unwrap();
        for per_degree in &scalars {
            for s in per_degree {
                assert!(s.is_unit());
            }
        }
    }

    #[test]
    fn rescaled_complex_detected() {
        // Multiply the complex's differential by 3 via a scaled morphism
        // stand-in: compare a complex with itself under a scrambled pairing
        // that breaks the operator pattern.
        let p = presets::truncated_affine(3);
        let policy = TruncationPolicy::new(0, 3, 1);
        let mc = hochschild_mixed(&p, &policy, UnitPolicy::Relative).unwrap();
        // A wrong pairing (reversing indices) should fail unless the
        // operators happen to be symmetric under it.
        let r = chain_iso_up_to_scalars(&mc, &mc, &|k, i| {
            let n = mc.complex().rank(k);
            Some(n - 1 - i)
        });
        // Either an honest failure or a coincidental symmetry; for this
        // complex the reversal breaks the b-pattern.
        assert!(r.is_err());
    }

    #[test]
    fn curvature_mismatch_rejected() {
        let src = presets::curved_truncation(1);
        let mut tgt = presets::curved_truncation(1);
        tgt.curvature = AlgebraElement::zero();
        let f = AlgebraMorphism::new(src, tgt.clone(), vec![tgt.gen_elem("t")]).unwrap();
        let policy = TruncationPolicy::new(-4, 0, 1);
        assert!(induced_mixed_map(&f, &policy, UnitPolicy::Full).is_err());
    }
}

