//! Negative cyclic complexes truncated modulo u^N, built from a mixed
//! complex, with the induced u-action on homology.
//!
//! A basis element of cyclic degree k is a pair u^j ⊗ e with 0 ≤ j < N and
//! e a mixed basis element of degree k + 2j (u has degree −2). The
//! differential is b + uB; the term landing at u^N is dropped, which is a
//! genuine quotient complex, so d² = 0 survives truncation as long as every
//! included element has its complete B-image available. That forces the
//! mixed window top to reach c_max + 2(N−1) unless the mixed complex is
//! exact at its high edge.

use std::collections::{BTreeMap, HashMap};

use crate::dgcore::DgPresentation;
use crate::exactalg::{
    homology_with, solve_factor_with, ExactError, FreeComplex, HomologyReport, Limits,
    SparseMatrix,
};

use super::{
    hochschild_mixed, hochschild_second_kind, MixedComplex, TruncationPolicy, UnitPolicy,
};

/// A u-truncated negative cyclic complex over the same ring as its mixed
/// complex, on the cyclic degree window [c_min, c_max].
#[derive(Clone, Debug)]
pub struct CyclicComplex {
    complex: FreeComplex,
    pub u_order: usize,
    /// `blocks[k - c_min][col]` = (j, mixed_degree, mixed_index) of the
    /// basis element in that column.
    blocks: Vec<Vec<(usize, i64, usize)>>,
    pub exact_low: bool,
    pub exact_high: bool,
}

impl CyclicComplex {
    /// Assemble the truncation on [c_min, c_max] from a mixed complex.
    pub fn from_mixed(
        mc: &MixedComplex,
        u_order: usize,
        c_min: i64,
        c_max: i64,
    ) -> Result<Self, ExactError> {
        if u_order < 1 {
            return Err(ExactError::Invalid("u-order must be at least 1".into()));
        }
        if c_min > c_max {
            return Err(ExactError::Invalid("empty cyclic degree window".into()));
        }
        let m = mc.complex();
        let n = u_order as i64;
        if c_min < m.d_min() {
            return Err(ExactError::Invalid(format!(
                "cyclic window bottom {} below mixed window bottom {}",
                c_min,
                m.d_min()
            )));
        }
        if !mc.exact_high && m.d_max() < c_max + 2 * (n - 1) {
            return Err(ExactError::Invalid(format!(
                "mixed window top {} too low for u-order {}: need at least {}",
                m.d_max(),
                u_order,
                c_max + 2 * (n - 1)
            )));
        }

        // Basis blocks, u-power major.
        let mut blocks: Vec<Vec<(usize, i64, usize)>> = Vec::new();
        let mut labels: Vec<Vec<String>> = Vec::new();
        for k in c_min..=c_max {
            let mut block = Vec::new();
            let mut lab = Vec::new();
            for j in 0..u_order {
                let mdeg = k + 2 * j as i64;
                for (mi, name) in m.labels(mdeg).iter().enumerate() {
                    block.push((j, mdeg, mi));
                    lab.push(if j == 0 {
                        name.clone()
                    } else {
                        format!("u^{}*{}", j, name)
                    });
                }
            }
            blocks.push(block);
            labels.push(lab);
        }
        let index: Vec<HashMap<(usize, usize), usize>> = blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .enumerate()
                    .map(|(col, &(j, _, mi))| ((j, mi), col))
                    .collect()
            })
            .collect();

        let ring = m.ring();
        let mut diffs = Vec::new();
        for k in (c_min + 1)..=c_max {
            let src = &blocks[(k - c_min) as usize];
            let tgt_index = &index[(k - 1 - c_min) as usize];
            let rows = blocks[(k - 1 - c_min) as usize].len();
            let mut d = SparseMatrix::zero(ring, rows, src.len());
            for (col, &(j, mdeg, mi)) in src.iter().enumerate() {
                let b = mc.b(mdeg);
                for (r, v) in b.col_entries(mi) {
                    let row = tgt_index[&(j, r)];
                    d.add_to(row, col, &v);
                }
                if j + 1 < u_order {
                    let big = mc.big_b(mdeg);
                    for (r, v) in big.col_entries(mi) {
                        let row = tgt_index[&(j + 1, r)];
                        d.add_to(row, col, &v);
                    }
                }
            }
            diffs.push(d);
        }
        let complex = FreeComplex::new(ring, c_min, labels, diffs)?;

        // An edge is genuinely empty only when every mixed degree feeding it
        // is zero: degrees inside the window by rank, degrees outside it by
        // exactness at the corresponding mixed edge.
        let edge_empty = |k: i64| {
            (0..u_order).all(|j| {
                let d = k + 2 * j as i64;
                if d < m.d_min() {
                    mc.exact_low
                } else if d > m.d_max() {
                    mc.exact_high
                } else {
                    m.rank(d) == 0
                }
            })
        };
        let exact_low = edge_empty(c_min - 1);
        let exact_high = edge_empty(c_max + 1);

        Ok(CyclicComplex { complex, u_order, blocks, exact_low, exact_high })
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn blocks(&self, degree: i64) -> &[(usize, i64, usize)] {
        static EMPTY: [(usize, i64, usize); 0] = [];
        let d_min = self.complex.d_min();
        if degree < d_min || degree > self.complex.d_max() {
            &EMPTY
        } else {
            &self.blocks[(degree - d_min) as usize]
        }
    }

    /// Degrees whose homology is unaffected by the window truncation.
    pub fn trusted_range(&self, margin: i64) -> (i64, i64) {
        let lo = if self.exact_low { self.complex.d_min() } else { self.complex.d_min() + margin };
        let hi = if self.exact_high { self.complex.d_max() } else { self.complex.d_max() - margin };
        (lo, hi)
    }
}

/// The matrix of multiplication by u from cyclic degree `degree` to
/// `degree − 2`, in the chosen bases (u^j ⊗ e ↦ u^{j+1} ⊗ e, zero at the
/// truncation order).
pub fn u_action_on(cc: &CyclicComplex, degree: i64) -> SparseMatrix {
    let ring = cc.complex.ring();
    let src = cc.blocks(degree);
    let tgt = cc.blocks(degree - 2);
    let index: HashMap<(usize, usize), usize> =
        tgt.iter().enumerate().map(|(col, &(j, _, mi))| ((j, mi), col)).collect();
    let mut m = SparseMatrix::zero(ring, tgt.len(), src.len());
    let one = crate::exactalg::PolyScalar::one(ring);
    for (col, &(j, _, mi)) in src.iter().enumerate() {
        if j + 1 < cc.u_order {
            if let Some(&row) = index.get(&(j + 1, mi)) {
                m.set(row, col, one.clone());
            }
        }
    }
    m
}

/// Homology of the truncated negative cyclic complex together with the
/// induced u-action H_k → H_{k−2} expressed in the homology generator
/// bases. Degrees within `margin` of a truncated edge are untrusted.
pub fn homology_with_u_action(
    cc: &CyclicComplex,
    margin: i64,
    limits: Limits,
) -> Result<HomologyReport, ExactError> {
    let mut report = homology_with(&cc.complex, limits)?;
    let (lo, hi) = cc.trusted_range(margin);
    for d in &mut report.degrees {
        d.trusted = d.degree >= lo && d.degree <= hi;
    }

    let ring = cc.complex.ring();
    let mut u_maps: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    let degree_data: Vec<(i64, Vec<Vec<crate::exactalg::PolyScalar>>)> =
        report.degrees.iter().map(|d| (d.degree, d.generators.clone())).collect();
    for (k, gens) in &degree_data {
        let k = *k;
        let target = degree_data.iter().find(|(d, _)| *d == k - 2);
        let Some((_, tgens)) = target else { continue };
        let u = u_action_on(cc, k);
        let n_t = cc.blocks(k - 2).len();
        // Solve [generators | boundaries] · y = u·g for each generator g;
        // the generator-block coordinates define the induced map.
        let mut basis = SparseMatrix::zero(ring, n_t, tgens.len());
        for (c, g) in tgens.iter().enumerate() {
            basis.set_column(c, g);
        }
        let d_in = cc.complex.diff(k - 1);
        let presented = basis.hstack(&d_in);
        let mut m = SparseMatrix::zero(ring, tgens.len(), gens.len());
        for (c, g) in gens.iter().enumerate() {
            let ug = u.apply(g);
            match solve_factor_with(&presented, &ug, limits)? {
                Some(y) => {
                    for (r, val) in y.iter().take(tgens.len()).enumerate() {
                        if !val.is_zero() {
                            m.set(r, c, val.clone());
                        }
                    }
                }
                None => {
                    return Err(ExactError::Invalid(format!(
                        "u-image of a homology class at degree {} is not a cycle class",
                        k
                    )));
                }
            }
        }
        u_maps.insert(k, m);
    }
    report.u_action = u_maps;
    Ok(report)
}

/// The negative cyclic complex of a mixed complex, truncated at the
/// policy's u-order on the policy window.
pub fn negative_cyclic(
    mc: &MixedComplex,
    policy: &TruncationPolicy,
) -> Result<CyclicComplex, ExactError> {
    CyclicComplex::from_mixed(mc, policy.u_order, policy.d_min, policy.d_max)
}

/// Convenience constructor: build the mixed complex of the presentation on
/// a window extended far enough upward for the requested u-order, then
/// truncate the negative cyclic complex back to the policy window. Uses the
/// second-kind complex exactly when the presentation is curved.
pub fn negative_cyclic_of(
    p: &DgPresentation,
    policy: &TruncationPolicy,
    unit: UnitPolicy,
) -> Result<CyclicComplex, ExactError> {
    let n = policy.u_order as i64;
    let mut mixed_policy =
        TruncationPolicy::new(policy.d_min, policy.d_max + 2 * (n - 1), 1)
            .with_margin(policy.trust_margin);
    if let Some(w) = policy.weight_bound {
        mixed_policy = mixed_policy.with_weight_bound(w);
    }
    let curved = !p.curvature.is_zero();
    let mc = if curved {
        hochschild_second_kind(p, &mixed_policy, unit)?
    } else {
        hochschild_mixed(p, &mixed_policy, unit)?
    };
    CyclicComplex::from_mixed(&mc, policy.u_order, policy.d_min, policy.d_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::presets;
    use crate::exactalg::RingTag;

    #[test]
    fn point_algebra_negative_cyclic_is_power_series_truncation() {
        // The base ring itself: reduced homology vanishes, full homology of
        // the cyclic complex mod u^N is one copy of the ring in each even
        // degree −2j, j < N, with u acting as the identity shift.
        let p = presets::truncated_polynomial(1); // Q[a]/a^1 = Q
        let policy = TruncationPolicy::new(-6, 2, 3).with_margin(1);
        let cc = negative_cyclic_of(&p, &policy, UnitPolicy::Full).unwrap();
        let h = homology_with_u_action(&cc, 1, Limits::default()).unwrap();
        for k in -4..=0 {
            let dk = h.at(k).unwrap();
            let expected = if k <= 0 && k >= -4 && k % 2 == 0 { 1 } else { 0 };
            assert_eq!(dk.free_rank, expected, "degree {}", k);
        }
        // u: H_0 -> H_-2 and H_-2 -> H_-4 are isomorphisms.
        for k in [0i64, -2] {
            let m = h.u_action.get(&k).unwrap();
            assert_eq!(m.rows(), 1);
            assert_eq!(m.cols(), 1);
            assert!(!m.get(0, 0).is_zero());
        }
        // u out of degree -4 hits the truncation.
        let m = h.u_action.get(&-4).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn window_too_small_for_u_order_is_rejected() {
        let p = presets::truncated_polynomial(2);
        let policy = TruncationPolicy::new(0, 4, 1);
        let mc = hochschild_mixed(&p, &policy, UnitPolicy::Relative).unwrap();
        // Without high exactness, u-order 3 needs the mixed top at 4+2·2.
        assert!(CyclicComplex::from_mixed(&mc, 3, 0, 4).is_err());
        assert!(CyclicComplex::from_mixed(&mc, 1, 0, 4).is_ok());
    }

    #[test]
    fn truncation_order_stability_on_low_degrees() {
        // For the curved truncation of order 1, homology in degrees well
        // above −2(N−1) must agree between u-orders N and N+1.
        let p = presets::curved_truncation(1);
        let pol_small = TruncationPolicy::new(-8, 0, 2).with_margin(2);
        let pol_big = TruncationPolicy::new(-8, 0, 3).with_margin(2);
        let small = negative_cyclic_of(&p, &pol_small, UnitPolicy::Full).unwrap();
        let big = negative_cyclic_of(&p, &pol_big, UnitPolicy::Full).unwrap();
        let hs = homology_with_u_action(&small, 2, Limits::default()).unwrap();
        let hb = homology_with_u_action(&big, 2, Limits::default()).unwrap();
        for k in -2..=0 {
            let a = hs.at(k).unwrap();
            let b = hb.at(k).unwrap();
            assert_eq!(a.free_rank, b.free_rank, "degree {}", k);
            assert_eq!(a.invariant_factors.len(), b.invariant_factors.len());
        }
    }

    #[test]
    fn labels_carry_u_powers() {
        let p = presets::truncated_polynomial(1);
        let policy = TruncationPolicy::new(-2, 0, 2);
        let cc = negative_cyclic_of(&p, &policy, UnitPolicy::Full).unwrap();
        let lab = cc.complex().labels(-2);
        assert!(lab.iter().any(|l| l.starts_with("u^1*")), "labels: {:?}", lab);
        assert_eq!(cc.complex().ring(), RingTag::Q);
    }
}
