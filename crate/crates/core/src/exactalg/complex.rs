//! Bounded complexes of finite-rank free modules and their homology.

use std::collections::BTreeMap;

use super::matrix::SparseMatrix;
use super::scalar::{PolyScalar, RingTag};
use super::snf::{smith_normal_form_tracked, Limits, TrackTransforms};
use super::ExactError;

/// A complex of free modules in a homological degree window [d_min, d_max],
/// with differentials of degree -1. `diffs[i]` maps degree d_min+i+1 to
/// degree d_min+i. The constructor checks shapes and d∘d = 0; everything
/// below d_min and above d_max is treated as zero, which is why homology at
/// the window edges is flagged untrusted.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: RingTag,
    d_min: i64,
    d_max: i64,
    labels: Vec<Vec<String>>,
    diffs: Vec<SparseMatrix>,
}

impl FreeComplex {
    pub fn new(
        ring: RingTag,
        d_min: i64,
        labels: Vec<Vec<String>>,
        diffs: Vec<SparseMatrix>,
    ) -> Result<Self, ExactError> {
        if labels.is_empty() {
            return Err(ExactError::Invalid("empty degree window".into()));
        }
        let d_max = d_min + labels.len() as i64 - 1;
        if diffs.len() + 1 != labels.len() {
            return Err(ExactError::DimensionMismatch {
                context: format!(
                    "complex with {} degrees needs {} differentials, got {}",
                    labels.len(),
                    labels.len() - 1,
                    diffs.len()
                ),
            });
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.ring() != ring {
                return Err(ExactError::Invalid("differential over wrong ring".into()));
            }
            if d.rows() != labels[i].len() || d.cols() != labels[i + 1].len() {
                return Err(ExactError::DimensionMismatch {
                    context: format!(
                        "differential into degree {} has shape {}x{}, expected {}x{}",
                        d_min + i as i64,
                        d.rows(),
                        d.cols(),
                        labels[i].len(),
                        labels[i + 1].len()
                    ),
                });
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i].mul(&diffs[i + 1]).is_zero() {
                return Err(ExactError::NotAComplex { degree: d_min + i as i64 });
            }
        }
        Ok(FreeComplex { ring, d_min, d_max, labels, diffs })
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn d_min(&self) -> i64 {
        self.d_min
    }

    pub fn d_max(&self) -> i64 {
        self.d_max
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.d_min..=self.d_max
    }

    pub fn rank(&self, degree: i64) -> usize {
        if degree < self.d_min || degree > self.d_max {
            0
        } else {
            self.labels[(degree - self.d_min) as usize].len()
        }
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        static EMPTY: [String; 0] = [];
        if degree < self.d_min || degree > self.d_max {
            &EMPTY
        } else {
            &self.labels[(degree - self.d_min) as usize]
        }
    }

    pub fn label_index(&self, degree: i64, label: &str) -> Option<usize> {
        self.labels(degree).iter().position(|l| l == label)
    }

    /// The differential out of `degree` (into degree-1). Zero when either
    /// endpoint falls outside the window.
    pub fn diff(&self, degree: i64) -> SparseMatrix {
        if degree <= self.d_min || degree > self.d_max {
            return SparseMatrix::zero(self.ring, self.rank(degree - 1), self.rank(degree));
        }
        self.diffs[(degree - self.d_min - 1) as usize].clone()
    }

    pub fn total_rank(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    /// Degreewise direct sum; both complexes must share the ring and window.
    pub fn direct_sum(&self, other: &FreeComplex) -> Result<FreeComplex, ExactError> {
        if self.ring != other.ring || self.d_min != other.d_min || self.d_max != other.d_max {
            return Err(ExactError::Invalid(
                "direct sum requires matching ring and degree window".into(),
            ));
        }
        let mut labels = Vec::new();
        for k in self.degrees() {
            let mut l: Vec<String> =
                self.labels(k).iter().map(|s| format!("L.{}", s)).collect();
            l.extend(other.labels(k).iter().map(|s| format!("R.{}", s)));
            labels.push(l);
        }
        let mut diffs = Vec::new();
        for k in (self.d_min + 1)..=self.d_max {
            let a = self.diff(k);
            let b = other.diff(k);
            let mut m =
                SparseMatrix::zero(self.ring, a.rows() + b.rows(), a.cols() + b.cols());
            for (i, j, v) in a.iter() {
                m.set(i, j, v.clone());
            }
            for (i, j, v) in b.iter() {
                m.set(i + a.rows(), j + a.cols(), v.clone());
            }
            diffs.push(m);
        }
        FreeComplex::new(self.ring, self.d_min, labels, diffs)
    }

    /// Degreewise linear dual: degree k becomes -k and differentials are
    /// transposed with a degree-dependent sign. Applying it twice gives the
    /// original complex with all differentials negated, which is canonically
    /// isomorphic to the original via (-1)^k on degree k.
    pub fn dualize(&self) -> FreeComplex {
        let d_min = -self.d_max;
        let mut labels = Vec::new();
        for k in (self.d_min..=self.d_max).rev() {
            labels.push(
                self.labels(k).iter().map(|s| format!("{}*", s)).collect::<Vec<_>>(),
            );
        }
        // Dual differential out of degree -k is (d out of degree k+1)^T,
        // with sign (-1)^{k+1}: the dual of d_{k+1}: C_{k+1} -> C_k is a map
        // C_k^* -> C_{k+1}^*, i.e. degree -k -> degree -(k+1).
        let mut diffs = Vec::new();
        for m in (d_min + 1)..=(-self.d_min) {
            // source degree m = -k, original differential out of degree k+1 = 1-m
            let k = -m;
            let orig = self.diff(k + 1);
            let t = orig.transpose();
            let signed = if (k + 1).rem_euclid(2) == 1 { t.neg() } else { t };
            diffs.push(signed);
        }
        FreeComplex::new(self.ring, d_min, labels, diffs)
            .expect("dual of a complex is a complex")
    }
}

/// Homology of one degree of a complex.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub degree: i64,
    /// Rank of the free part over the coefficient ring.
    pub free_rank: usize,
    /// Nonunit invariant factors (monic), forming a divisibility chain.
    pub invariant_factors: Vec<PolyScalar>,
    /// Chosen homology generators as coefficient vectors in the chain basis:
    /// torsion generators first (aligned with `invariant_factors`), then the
    /// free generators.
    pub generators: Vec<Vec<PolyScalar>>,
    /// False at the window edges, where truncation can corrupt homology.
    pub trusted: bool,
}

impl DegreeHomology {
    /// Total dimension over Q; only meaningful for complexes over Q,
    /// where there is no torsion.
    pub fn dim_q(&self) -> usize {
        self.free_rank
    }
}

/// Homology of a complex: one entry per degree of the window, plus the
/// matrices of any degree -2 action recorded by a caller (the cyclic
/// machinery fills `u_action`; it stays empty otherwise).
#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub ring: RingTag,
    pub degrees: Vec<DegreeHomology>,
    /// Map degree k -> matrix of the induced action H_k -> H_{k-2}, written
    /// in the `generators` bases of the two degrees.
    pub u_action: BTreeMap<i64, SparseMatrix>,
}

impl HomologyReport {
    pub fn at(&self, degree: i64) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|d| d.degree == degree)
    }

    pub fn trusted(&self) -> impl Iterator<Item = &DegreeHomology> {
        self.degrees.iter().filter(|d| d.trusted)
    }
}

pub fn homology(c: &FreeComplex) -> Result<HomologyReport, ExactError> {
    homology_with(c, Limits::default())
}

pub fn homology_with(c: &FreeComplex, limits: Limits) -> Result<HomologyReport, ExactError> {
    let all: Vec<i64> = c.degrees().collect();
    homology_degrees_with(c, &all, limits)
}

/// Homology at the listed degrees only. Transform tracking in the underlying
/// eliminations is restricted to the sides actually used, which keeps large
/// chain modules feasible; degrees outside the window are ignored.
pub fn homology_degrees_with(
    c: &FreeComplex,
    wanted: &[i64],
    limits: Limits,
) -> Result<HomologyReport, ExactError> {
    let ring = c.ring();
    let mut ks: Vec<i64> =
        wanted.iter().copied().filter(|&k| k >= c.d_min() && k <= c.d_max()).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut degrees = Vec::new();
    for k in ks {
        let d_out = c.diff(k); // C_k -> C_{k-1}
        let d_in = c.diff(k + 1); // C_{k+1} -> C_k

        // Kernel of d_out as columns r.. of the right SNF transform; the
        // left transform is never consulted.
        let snf_out = smith_normal_form_tracked(
            &d_out,
            limits,
            TrackTransforms { left: false, right: true },
        )?;
        let kernel_cols: Vec<usize> = (snf_out.rank..d_out.cols()).collect();
        let kernel = snf_out.v.select_columns(&kernel_cols);

        // Coordinates of the incoming boundaries in the kernel basis: the
        // first `rank` coordinates of v_inv * d_in vanish because boundaries
        // are cycles; the rest present the homology module.
        let coords = snf_out.v_inv.mul(&d_in);
        let mut x = SparseMatrix::zero(ring, kernel_cols.len(), d_in.cols());
        for (i, j, v) in coords.iter() {
            if i < snf_out.rank {
                debug_assert!(v.is_zero(), "boundary outside the kernel");
            } else {
                x.set(i - snf_out.rank, j, v.clone());
            }
        }
        // Only the left transform of the presentation matrix is needed, to
        // adapt the kernel basis to the invariant factors.
        let snf_x = smith_normal_form_tracked(
            &x,
            limits,
            TrackTransforms { left: true, right: false },
        )?;

        // Adapted kernel basis: homology is the cokernel of the diagonal
        // presentation in the basis kernel * u_inv.
        let adapted = kernel.mul(&snf_x.u_inv);
        let mut invariant_factors = Vec::new();
        let mut generators = Vec::new();
        for (i, f) in snf_x.diag.iter().enumerate() {
            if !f.is_unit() {
                invariant_factors.push(f.clone());
                generators.push(adapted.column(i));
            }
        }
        let free_rank = kernel_cols.len() - snf_x.rank;
        for i in snf_x.rank..kernel_cols.len() {
            generators.push(adapted.column(i));
        }

        degrees.push(DegreeHomology {
            degree: k,
            free_rank,
            invariant_factors,
            generators,
            trusted: k > c.d_min() && k < c.d_max(),
        });
    }
    Ok(HomologyReport { ring, degrees, u_action: BTreeMap::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_complex_over_qx() {
        // Q[x] --(x)--> Q[x] in degrees 1 -> 0: H_0 has torsion (x), H_1 = 0.
        let x = PolyScalar::x();
        let d = SparseMatrix::from_entries(RingTag::Qx, 1, 1, [(0, 0, x.clone())]);
        let c = FreeComplex::new(
            RingTag::Qx,
            0,
            vec![vec!["e0".into()], vec!["e1".into()]],
            vec![d],
        )
        .unwrap();
        let h = homology(&c).unwrap();
        let h0 = h.at(0).unwrap();
        assert_eq!(h0.free_rank, 0);
        assert_eq!(h0.invariant_factors, vec![x]);
        let h1 = h.at(1).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert!(h1.invariant_factors.is_empty());
    }

    #[test]
    fn zero_differentials_give_free_ranks() {
        let d = SparseMatrix::zero(RingTag::Q, 2, 3);
        let c = FreeComplex::new(
            RingTag::Q,
            0,
            vec![
                vec!["a".into(), "b".into()],
                vec!["c".into(), "d".into(), "e".into()],
            ],
            vec![d],
        )
        .unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.at(0).unwrap().free_rank, 2);
        assert_eq!(h.at(1).unwrap().free_rank, 3);
    }

    #[test]
    fn rejects_non_complex() {
        let d1 = SparseMatrix::identity(RingTag::Q, 1);
        let d2 = SparseMatrix::identity(RingTag::Q, 1);
        let err = FreeComplex::new(
            RingTag::Q,
            0,
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            vec![d1, d2],
        );
        assert!(matches!(err, Err(ExactError::NotAComplex { degree: 0 })));
    }

    #[test]
    fn double_dual_is_identity() {
        let x = PolyScalar::x();
        let d = SparseMatrix::from_entries(
            RingTag::Qx,
            1,
            2,
            [(0, 0, x.clone()), (0, 1, x.mul(&x))],
        );
        let c = FreeComplex::new(
            RingTag::Qx,
            -1,
            vec![vec!["b".into()], vec!["a0".into(), "a1".into()]],
            vec![d],
        )
        .unwrap();
        let dd = c.dualize().dualize();
        assert_eq!(dd.d_min(), c.d_min());
        // The double dual negates every differential; v |-> (-1)^k v in
        // degree k is then a chain isomorphism onto the original.
        for k in c.degrees() {
            assert_eq!(dd.rank(k), c.rank(k));
            assert_eq!(dd.diff(k), c.diff(k).neg());
        }
    }

    #[test]
    fn dual_is_a_complex_with_signs() {
        // Two composable nonzero differentials with d*d = 0.
        let d2 = SparseMatrix::from_dense_i64(RingTag::Q, &[&[1], &[1]]);
        let d1 = SparseMatrix::from_dense_i64(RingTag::Q, &[&[1, -1]]);
        let c = FreeComplex::new(
            RingTag::Q,
            0,
            vec![vec!["z".into()], vec!["a".into(), "b".into()], vec!["t".into()]],
            vec![d1, d2],
        )
        .unwrap();
        let dual = c.dualize();
        assert_eq!(dual.d_min(), -2);
        assert_eq!(dual.rank(-1), 2);
        // FreeComplex::new inside dualize would have failed if signs were off.
        let h = homology(&dual).unwrap();
        assert_eq!(h.at(-1).unwrap().free_rank, 0);
    }
}
