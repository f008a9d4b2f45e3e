//! Smith normal form over Q and Q[x] with tracked (invertible) transforms.
//!
//! Pivot rule: among the remaining entries, pick one of minimal Euclidean
//! norm (0 over Q, polynomial degree over Q[x]), ties broken by (row, column)
//! lexicographic order. This keeps intermediate degree growth down and makes
//! the output deterministic.

use super::matrix::SparseMatrix;
use super::scalar::PolyScalar;
use super::ExactError;

/// Resource limits for elimination routines. Exact polynomial elimination
/// can blow up; the cap turns runaway instances into a clean error.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of stored nonzero entries in the work matrix.
    pub max_nonzeros: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nonzeros: 5000 }
    }
}

/// Result of a Smith normal form computation: u * m * v = d with d diagonal,
/// the diagonal forming a divisibility chain of monic elements, and
/// u, v invertible (u_inv, v_inv are their exact inverses).
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: SparseMatrix,
    /// The nonzero diagonal entries (monic over Q[x], 1 over Q), in order.
    pub diag: Vec<PolyScalar>,
    pub rank: usize,
    pub u: SparseMatrix,
    pub v: SparseMatrix,
    pub u_inv: SparseMatrix,
    pub v_inv: SparseMatrix,
}

impl Snf {
    /// The nonunit invariant factors, i.e. the torsion part of the cokernel.
    pub fn nonunit_factors(&self) -> Vec<PolyScalar> {
        self.diag.iter().filter(|f| !f.is_unit()).cloned().collect()
    }
}

/// Which transform pairs to track during elimination. Skipping a side saves
/// a lot of memory on large matrices when only ranks, factors, or one-sided
/// bases are needed.
#[derive(Clone, Copy, Debug)]
pub struct TrackTransforms {
    pub left: bool,
    pub right: bool,
}

impl TrackTransforms {
    pub fn both() -> Self {
        TrackTransforms { left: true, right: true }
    }

    pub fn none() -> Self {
        TrackTransforms { left: false, right: false }
    }
}

struct Work {
    a: SparseMatrix,
    u: SparseMatrix,
    v: SparseMatrix,
    u_inv: SparseMatrix,
    v_inv: SparseMatrix,
    track: TrackTransforms,
    limits: Limits,
}

impl Work {
    fn check(&self) -> Result<(), ExactError> {
        if self.a.nnz() > self.limits.max_nonzeros {
            return Err(ExactError::ResourceLimit {
                nonzeros: self.a.nnz(),
                limit: self.limits.max_nonzeros,
            });
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if self.track.left {
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if self.track.right {
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, c: &PolyScalar) {
        self.a.add_row_multiple(target, source, c);
        if self.track.left {
            self.u.add_row_multiple(target, source, c);
            self.u_inv.add_col_multiple(source, target, &c.neg());
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, c: &PolyScalar) {
        self.a.add_col_multiple(target, source, c);
        if self.track.right {
            self.v.add_col_multiple(target, source, c);
            self.v_inv.add_row_multiple(source, target, &c.neg());
        }
    }

    fn scale_row(&mut self, i: usize, unit: &PolyScalar) {
        self.a.scale_row(i, unit);
        if self.track.left {
            let inv = PolyScalar::one(unit.ring())
                .exact_div(unit)
                .expect("scale_row by non-unit");
            self.u.scale_row(i, unit);
            self.u_inv.scale_col(i, &inv);
        }
    }

    /// Minimal-norm pivot in the trailing submatrix starting at (t, t).
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None; // (norm, i, j)
        for (i, j, val) in self.a.iter() {
            if i < t || j < t {
                continue;
            }
            let norm = val.euclidean_norm().expect("stored zero entry");
            let cand = (norm, i, j);
            if best.map_or(true, |b| cand < b) {
                best = Some(cand);
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Smith normal form with the default resource limits.
pub fn smith_normal_form(m: &SparseMatrix) -> Result<Snf, ExactError> {
    smith_normal_form_with(m, Limits::default())
}

pub fn smith_normal_form_with(m: &SparseMatrix, limits: Limits) -> Result<Snf, ExactError> {
    smith_normal_form_tracked(m, limits, TrackTransforms::both())
}

/// Smith normal form tracking only the requested transform sides. Untracked
/// transforms come back as 0×0 matrices so accidental use fails loudly.
pub fn smith_normal_form_tracked(
    m: &SparseMatrix,
    limits: Limits,
    track: TrackTransforms,
) -> Result<Snf, ExactError> {
    let ring = m.ring();
    let left_dim = if track.left { m.rows() } else { 0 };
    let right_dim = if track.right { m.cols() } else { 0 };
    let mut w = Work {
        a: m.clone(),
        u: SparseMatrix::identity(ring, left_dim),
        v: SparseMatrix::identity(ring, right_dim),
        u_inv: SparseMatrix::identity(ring, left_dim),
        v_inv: SparseMatrix::identity(ring, right_dim),
        track,
        limits,
    };
    w.check()?;

    let steps = m.rows().min(m.cols());
    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = w.find_pivot(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        // Clear the cross at (t, t); each failed division shrinks the pivot
        // norm, so this terminates.
        'cross: loop {
            w.check()?;
            let pivot = w.a.get(t, t);
            debug_assert!(!pivot.is_zero());

            // Column t below/above the pivot.
            for (i, val) in w.a.col_entries(t) {
                if i == t {
                    continue;
                }
                let (q, r) = val.div_rem(&pivot);
                w.add_row_multiple(i, t, &q.neg());
                if !r.is_zero() {
                    w.swap_rows(t, i);
                    continue 'cross;
                }
            }
            // Row t to the right of the pivot.
            for (j, val) in w.a.row_entries(t) {
                if j == t {
                    continue;
                }
                let (q, r) = val.div_rem(&pivot);
                w.add_col_multiple(j, t, &q.neg());
                if !r.is_zero() {
                    w.swap_cols(t, j);
                    continue 'cross;
                }
            }
            // Cross is clear; make the pivot divide the rest of the block.
            let offender = w.a.iter().find_map(|(i, j, val)| {
                if i > t && j > t && !pivot.divides(val) {
                    Some(i)
                } else {
                    None
                }
            });
            match offender {
                Some(i) => {
                    w.add_row_multiple(t, i, &PolyScalar::one(ring));
                    continue 'cross;
                }
                None => break 'cross,
            }
        }
        t += 1;
    }

    // Normalize pivots to monic (over Q this makes every pivot 1).
    let mut diag = Vec::new();
    for k in 0..t {
        let val = w.a.get(k, k);
        let (unit, monic) = val.monic();
        if !unit.is_one() {
            let inv = PolyScalar::one(ring).exact_div(&unit).expect("leading coeff is a unit");
            w.scale_row(k, &inv);
        }
        diag.push(monic);
    }

    Ok(Snf { d: w.a, diag, rank: t, u: w.u, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv })
}

/// Solve m * w = rhs exactly over the coefficient ring. Returns `None` when
/// no solution exists (including divisibility failures). The answer is the
/// deterministic one induced by the Smith normal form of `m`.
pub fn solve_factor(
    m: &SparseMatrix,
    rhs: &[PolyScalar],
) -> Result<Option<Vec<PolyScalar>>, ExactError> {
    solve_factor_with(m, rhs, Limits::default())
}

pub fn solve_factor_with(
    m: &SparseMatrix,
    rhs: &[PolyScalar],
    limits: Limits,
) -> Result<Option<Vec<PolyScalar>>, ExactError> {
    if rhs.len() != m.rows() {
        return Err(ExactError::DimensionMismatch {
            context: format!("solve_factor: rhs length {} vs {} rows", rhs.len(), m.rows()),
        });
    }
    let snf = smith_normal_form_with(m, limits)?;
    let b = snf.u.apply(rhs);
    let mut y = vec![PolyScalar::zero(m.ring()); m.cols()];
    for (i, bi) in b.iter().enumerate() {
        if i < snf.rank {
            match bi.exact_div(&snf.d.get(i, i)) {
                Some(q) => y[i] = q,
                None => return Ok(None),
            }
        } else if !bi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.apply(&y)))
}

/// A basis of the kernel of `m`, as columns of the returned matrix.
/// The columns extend to a basis of the ambient free module, so the kernel
/// is returned as a direct summand (always true over a PID).
pub fn kernel_basis(m: &SparseMatrix, limits: Limits) -> Result<SparseMatrix, ExactError> {
    let snf = smith_normal_form_with(m, limits)?;
    let keep: Vec<usize> = (snf.rank..m.cols()).collect();
    Ok(snf.v.select_columns(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::RingTag;

    fn check_transforms(m: &SparseMatrix, snf: &Snf) {
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v != d");
        let idr = SparseMatrix::identity(m.ring(), m.rows());
        let idc = SparseMatrix::identity(m.ring(), m.cols());
        assert_eq!(snf.u.mul(&snf.u_inv), idr, "u not invertible");
        assert_eq!(snf.u_inv.mul(&snf.u), idr);
        assert_eq!(snf.v.mul(&snf.v_inv), idc, "v not invertible");
        assert_eq!(snf.v_inv.mul(&snf.v), idc);
        for k in 1..snf.diag.len() {
            assert!(snf.diag[k - 1].divides(&snf.diag[k]), "divisibility chain broken");
        }
    }

    #[test]
    fn unit_over_q() {
        let m = SparseMatrix::from_dense_i64(RingTag::Q, &[&[2]]);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.diag, vec![PolyScalar::one(RingTag::Q)]);
        check_transforms(&m, &snf);
    }

    #[test]
    fn already_diagonal_chain() {
        let x = PolyScalar::x();
        let x2 = x.mul(&x);
        let m = SparseMatrix::from_entries(
            RingTag::Qx,
            2,
            2,
            [(0, 0, x.clone()), (1, 1, x2.clone())],
        );
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.diag, vec![x, x2]);
        check_transforms(&m, &snf);
    }

    #[test]
    fn upper_triangular_x_block() {
        // [[x, 1], [0, x]] reduces to factors (1, x^2): pivot on the unit,
        // clear the cross, the remaining 1x1 block has determinant x^2.
        let x = PolyScalar::x();
        let m = SparseMatrix::from_entries(
            RingTag::Qx,
            2,
            2,
            [
                (0, 0, x.clone()),
                (0, 1, PolyScalar::one(RingTag::Qx)),
                (1, 1, x.clone()),
            ],
        );
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.diag, vec![PolyScalar::one(RingTag::Qx), x.mul(&x)]);
        check_transforms(&m, &snf);
    }

    #[test]
    fn solve_examples() {
        let ring = RingTag::Qx;
        let x = PolyScalar::x();
        let id = SparseMatrix::identity(ring, 3);
        let v = vec![x.clone(), PolyScalar::one(ring), PolyScalar::zero(ring)];
        assert_eq!(solve_factor(&id, &v).unwrap(), Some(v.clone()));

        let m = SparseMatrix::from_entries(ring, 1, 1, [(0, 0, x.clone())]);
        let x2 = x.mul(&x);
        assert_eq!(solve_factor(&m, &[x2]).unwrap(), Some(vec![x.clone()]));
        assert_eq!(solve_factor(&m, &[PolyScalar::one(ring)]).unwrap(), None);
    }

    #[test]
    fn kernel_of_multiplication_map() {
        // (a, b) -> a*x + b*x has kernel spanned by (1, -1).
        let x = PolyScalar::x();
        let m = SparseMatrix::from_entries(RingTag::Qx, 1, 2, [(0, 0, x.clone()), (0, 1, x)]);
        let k = kernel_basis(&m, Limits::default()).unwrap();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // The kernel generator must be unimodular (gcd of entries a unit).
        let g = k.get(0, 0).gcd(&k.get(1, 0));
        assert!(g.is_unit());
    }
}
