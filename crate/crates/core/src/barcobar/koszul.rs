//! Endomorphisms of the augmentation module via the dual bar complex: the
//! weightwise linear dual of Bar(A) is a dg algebra under convolution
//! (f·g)(w) = Σ (-1)^{|g|·|w'|} f(w')g(w'') over all deconcatenations
//! w = w'·w''; its homology is the Koszul-dual endomorphism algebra, up to
//! the chosen weight bound.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::dgcore::DgPresentation;
use crate::exactalg::{
    homology_with, solve_factor_with, ExactError, Limits, PolyScalar, RingTag, SparseMatrix,
};

use super::bar::{bar, BarCoalgebra};

/// A dual cochain on the bar coalgebra: its value on the empty word plus
/// values on the reduced bar words (by cogenerator index).
#[derive(Clone, Debug, Default)]
struct Cochain {
    empty: BigRational,
    red: BTreeMap<usize, BigRational>,
}

impl Cochain {
    fn is_zero(&self) -> bool {
        self.empty.is_zero() && self.red.values().all(|v| v.is_zero())
    }
}

fn sign(parity: i64) -> BigRational {
    if parity.rem_euclid(2) == 1 {
        -BigRational::from_integer(1.into())
    } else {
        BigRational::from_integer(1.into())
    }
}

/// Convolution f·g; `g_bdeg` is the bar degree of g's (homogeneous) support,
/// entering the Koszul sign against the left deconcatenation piece.
fn conv(b: &BarCoalgebra, f: &Cochain, g: &Cochain, g_bdeg: i64) -> Cochain {
    let mut out = Cochain::default();
    out.empty = &f.empty * &g.empty;
    let n = b.data.len();
    for i in 0..n {
        let mut acc = BigRational::zero();
        // Split (empty, w): the left piece has degree 0.
        if let Some(gv) = g.red.get(&i) {
            acc += &f.empty * gv;
        }
        // Split (w, empty).
        if let Some(fv) = f.red.get(&i) {
            acc += fv * &g.empty * sign(g_bdeg * b.data.degree(i));
        }
        for &(l, r, ref c) in b.data.delta(i) {
            if let (Some(fv), Some(gv)) = (f.red.get(&l), g.red.get(&r)) {
                acc += fv * gv * c * sign(g_bdeg * b.data.degree(l));
            }
        }
        if !acc.is_zero() {
            out.red.insert(i, acc);
        }
    }
    out
}

/// Graded report on the Koszul-dual endomorphism algebra of an augmented
/// dg algebra, computed from the dual bar complex at bounded weight.
#[derive(Clone, Debug)]
pub struct KoszulReport {
    pub weight_bound: i64,
    /// Homology dimension per (weight, dual homological degree); the unit
    /// contributes the (0, 0) entry.
    pub dims: BTreeMap<(i64, i64), usize>,
    pub total_dim: usize,
    /// Least k with the k-th convolution power of the distinguished
    /// weight-1 dual class zero in homology; None when there is no single
    /// distinguished class or nilpotency is not reached within the bound.
    pub nilpotency_degree: Option<u32>,
    /// Convolution associativity, checked exactly on all triples of the
    /// collected homology representatives.
    pub associative: bool,
}

/// Words of one weight grouped by bar degree, in cogenerator-index order —
/// the same layout `weight_complex` uses, so homology generator vectors can
/// be pulled back to cochains on the words.
fn layout(b: &BarCoalgebra, w: i64) -> BTreeMap<i64, Vec<usize>> {
    let mut per_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for k in 0..b.data.len() {
        if b.data.weight(k) == w {
            per_degree.entry(b.data.degree(k)).or_default().push(k);
        }
    }
    per_degree
}

pub fn koszul_dual_endomorphisms(
    p: &DgPresentation,
    weight_bound: i64,
) -> Result<KoszulReport, ExactError> {
    let b = bar(p, weight_bound)?;
    let limits = Limits::default();

    let mut dims: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    dims.insert((0, 0), 1);
    // Homology representatives: (weight, bar degree of support, cochain).
    let mut reps: Vec<(i64, i64, Cochain)> = Vec::new();
    let unit = Cochain { empty: BigRational::from_integer(1.into()), red: BTreeMap::new() };
    reps.push((0, 0, unit));

    for w in 1..=weight_bound {
        let Some(cx) = b.data.weight_complex(w) else { continue };
        let dual = cx.dualize();
        let h = homology_with(&dual, limits)?;
        let per_degree = layout(&b, w);
        for d in &h.degrees {
            if d.free_rank == 0 {
                continue;
            }
            dims.insert((w, d.degree), d.free_rank);
            // Dual degree m corresponds to bar degree -m; chain coordinates
            // follow the per-degree word order.
            let words = &per_degree[&(-d.degree)];
            for gen in &d.generators {
                let mut red = BTreeMap::new();
                for (pos, v) in gen.iter().enumerate() {
                    if !v.is_zero() {
                        red.insert(words[pos], v.coeff(0));
                    }
                }
                reps.push((w, -d.degree, Cochain { empty: BigRational::zero(), red }));
            }
        }
    }
    let total_dim = dims.values().sum();

    // Distinguished class: the weight-1 dual homology must be a line.
    let weight_one: Vec<&(i64, i64, Cochain)> = reps.iter().filter(|r| r.0 == 1).collect();
    let nilpotency_degree = if weight_one.len() == 1 {
        let (_, f_bdeg, f) = weight_one[0];
        let mut g = f.clone();
        let mut g_bdeg = *f_bdeg;
        let mut found = None;
        for k in 2..=weight_bound {
            g = conv(&b, &g, f, *f_bdeg);
            g_bdeg += f_bdeg;
            if g.is_zero() || is_coboundary(&b, k, g_bdeg, &g, limits)? {
                found = Some(k as u32);
                break;
            }
        }
        found
    } else {
        None
    };

    // Associativity of convolution on all triples of representatives.
    let mut associative = true;
    'outer: for (_, _, a) in &reps {
        for (_, bd, bb) in &reps {
            for (_, cd, cc) in &reps {
                let lhs = conv(&b, &conv(&b, a, bb, *bd), cc, *cd);
                let rhs = conv(&b, a, &conv(&b, bb, cc, *cd), bd + cd);
                let mut diff = lhs.red.clone();
                for (i, v) in &rhs.red {
                    *diff.entry(*i).or_insert_with(BigRational::zero) -= v;
                }
                if !(&lhs.empty - &rhs.empty).is_zero() || diff.values().any(|v| !v.is_zero()) {
                    associative = false;
                    break 'outer;
                }
            }
        }
    }

    Ok(KoszulReport { weight_bound, dims, total_dim, nilpotency_degree, associative })
}

/// Whether g (supported on weight-w words of bar degree `bdeg`) is a dual
/// coboundary, i.e. g(x) = h(dx) for some h on bar degree `bdeg` - 1.
fn is_coboundary(
    b: &BarCoalgebra,
    w: i64,
    bdeg: i64,
    g: &Cochain,
    limits: Limits,
) -> Result<bool, ExactError> {
    let per_degree = layout(b, w);
    let rows: &[usize] = per_degree.get(&bdeg).map(|v| v.as_slice()).unwrap_or(&[]);
    let cols: &[usize] = per_degree.get(&(bdeg - 1)).map(|v| v.as_slice()).unwrap_or(&[]);
    if rows.is_empty() {
        return Ok(g.is_zero());
    }
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut a = SparseMatrix::zero(RingTag::Q, rows.len(), cols.len());
    for (ri, &word) in rows.iter().enumerate() {
        for &(tgt, ref c) in b.data.diff(word) {
            if let Some(&cj) = col_pos.get(&tgt) {
                a.add_to(ri, cj, &PolyScalar::from_rational(RingTag::Q, c.clone()));
            }
        }
    }
    let rhs: Vec<PolyScalar> = rows
        .iter()
        .map(|&word| {
            PolyScalar::from_rational(
                RingTag::Q,
                g.red.get(&word).cloned().unwrap_or_else(BigRational::zero),
            )
        })
        .collect();
    Ok(solve_factor_with(&a, &rhs, limits)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcobar::{cobar, CoalgebraData};
    use crate::dgcore::MulKind;

    #[test]
    fn base_ring_has_one_dimensional_endomorphisms() {
        let p = DgPresentation::new(RingTag::Q, MulKind::FreeAssociative, vec![]);
        let r = koszul_dual_endomorphisms(&p, 3).unwrap();
        assert_eq!(r.total_dim, 1);
        assert!(r.associative);
        assert_eq!(r.nilpotency_degree, None);
    }

    #[test]
    fn koszul_dual_of_cobar_recovers_truncated_polynomials() {
        for n in 2..=4u32 {
            let a = cobar(&CoalgebraData::truncated_dual(n)).unwrap();
            let r = koszul_dual_endomorphisms(&a, n as i64 + 1).unwrap();
            assert_eq!(r.total_dim, n as usize, "n = {}", n);
            assert_eq!(r.nilpotency_degree, Some(n), "n = {}", n);
            assert!(r.associative, "n = {}", n);
            // One class per weight 0..n-1, all in dual degree 0.
            for w in 0..n as i64 {
                assert_eq!(r.dims.get(&(w, 0)), Some(&1), "n = {}, weight {}", n, w);
            }
        }
    }
}
