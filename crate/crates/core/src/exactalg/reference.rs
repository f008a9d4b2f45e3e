//! Slow dense reference implementations used to cross-check the sparse
//! elimination kernels in tests.
//!
//! These are deliberately written along different lines than the production
//! code: invariant factors come from gcds of k×k minors (determinantal
//! divisors), ranks from dense fraction-free elimination, and homology
//! torsion from the incoming differential's cokernel rather than from an
//! adapted kernel basis. Desk-scale only.

use super::complex::FreeComplex;
use super::matrix::SparseMatrix;
use super::scalar::PolyScalar;

fn to_dense(m: &SparseMatrix) -> Vec<Vec<PolyScalar>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Rank over the fraction field by fraction-free Gaussian elimination.
pub fn dense_rank(m: &SparseMatrix) -> usize {
    let mut a = to_dense(m);
    let rows = m.rows();
    let cols = m.cols();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot_row = (row..rows).find(|&i| !a[i][col].is_zero());
        let Some(p) = pivot_row else { continue };
        a.swap(row, p);
        let pivot = a[row][col].clone();
        for i in (row + 1)..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone();
            for j in col..cols {
                let t = a[i][j].mul(&pivot).sub(&a[row][j].mul(&factor));
                a[i][j] = t;
            }
        }
        row += 1;
        rank += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn det(a: &[Vec<PolyScalar>], ring: super::scalar::RingTag) -> PolyScalar {
    let n = a.len();
    if n == 0 {
        return PolyScalar::one(ring);
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = PolyScalar::zero(ring);
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<PolyScalar>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&jj| jj != j)
                    .map(|jj| a[i][jj].clone())
                    .collect()
            })
            .collect();
        let cof = a[0][j].mul(&det(&minor, ring));
        acc = if j % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors (monic, units included) via determinantal divisors:
/// f_k = gcd(k-minors) / gcd((k-1)-minors). Exponential; keep matrices small.
pub fn minors_invariant_factors(m: &SparseMatrix) -> Vec<PolyScalar> {
    let ring = m.ring();
    let dense = to_dense(m);
    let maxk = m.rows().min(m.cols());
    let mut factors = Vec::new();
    let mut prev = PolyScalar::one(ring);
    for k in 1..=maxk {
        let mut g = PolyScalar::zero(ring);
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                let sub: Vec<Vec<PolyScalar>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| dense[i][j].clone()).collect())
                    .collect();
                let d = det(&sub, ring);
                if !d.is_zero() {
                    g = g.gcd(&d);
                }
                if g.is_unit() {
                    break;
                }
            }
            if g.is_unit() {
                break;
            }
        }
        if g.is_zero() {
            break; // all k-minors vanish: rank < k
        }
        let f = g.exact_div(&prev).expect("determinantal divisors divide in turn");
        factors.push(f.monic().1);
        prev = g;
    }
    factors
}

/// Per-degree (free rank, nonunit invariant factors) computed from dense
/// ranks and determinantal divisors of the incoming differential. Torsion of
/// ker(d_k)/im(d_{k+1}) equals torsion of coker(d_{k+1}) because cycles are
/// exactly where torsion of the cokernel can live.
pub fn dense_homology(c: &FreeComplex) -> Vec<(i64, usize, Vec<PolyScalar>)> {
    let mut out = Vec::new();
    for k in c.degrees() {
        let d_out = c.diff(k);
        let d_in = c.diff(k + 1);
        let rank_out = dense_rank(&d_out);
        let rank_in = dense_rank(&d_in);
        let free = c.rank(k) - rank_out - rank_in;
        let torsion: Vec<PolyScalar> = minors_invariant_factors(&d_in)
            .into_iter()
            .filter(|f| !f.is_unit())
            .collect();
        out.push((k, free, torsion));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::RingTag;

    #[test]
    fn minors_match_triangular_example() {
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
        assert_eq!(
            minors_invariant_factors(&m),
            vec![PolyScalar::one(RingTag::Qx), x.mul(&x)]
        );
        assert_eq!(dense_rank(&m), 2);
    }
}
