//! Randomized cross-checks of the sparse elimination kernels against the
//! dense reference implementations, plus structural properties (divisibility
//! chains, invertible transforms, homology additivity). Seeded for
//! reproducibility.

use exacthom::exactalg::{
    homology, reference, smith_normal_form, solve_factor, FreeComplex, PolyScalar, RingTag,
    SparseMatrix,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_scalar(rng: &mut ChaCha8Rng, ring: RingTag, max_deg: usize) -> PolyScalar {
    let deg = if ring == RingTag::Q { 0 } else { rng.gen_range(0..=max_deg) };
    let coeffs: Vec<BigRational> = (0..=deg)
        .map(|_| BigRational::from(BigInt::from(rng.gen_range(-4i64..=4))))
        .collect();
    PolyScalar::new(ring, coeffs)
}

fn random_matrix(
    rng: &mut ChaCha8Rng,
    ring: RingTag,
    rows: usize,
    cols: usize,
    max_deg: usize,
) -> SparseMatrix {
    let mut m = SparseMatrix::zero(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(0.6) {
                m.set(i, j, random_scalar(rng, ring, max_deg));
            }
        }
    }
    m
}

/// A random unimodular matrix together with its exact inverse, built from
/// elementary row operations.
fn random_unimodular(rng: &mut ChaCha8Rng, ring: RingTag, n: usize) -> (SparseMatrix, SparseMatrix) {
    let mut p = SparseMatrix::identity(ring, n);
    let mut p_inv = SparseMatrix::identity(ring, n);
    if n == 0 {
        return (p, p_inv);
    }
    for _ in 0..(2 * n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let c = random_scalar(rng, ring, 1);
        // p <- p * E where E adds c*col_b to col_a; p_inv <- E^{-1} * p_inv.
        p.add_col_multiple(a, b, &c);
        p_inv.add_row_multiple(b, a, &c.neg());
    }
    (p, p_inv)
}

#[test]
fn snf_properties_random_qx() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..40 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let m = random_matrix(&mut rng, RingTag::Qx, rows, cols, 3);
        let snf = smith_normal_form(&m).unwrap();

        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d, "case {case}: u*m*v != d");
        assert_eq!(
            snf.u.mul(&snf.u_inv),
            SparseMatrix::identity(RingTag::Qx, rows),
            "case {case}: u not invertible"
        );
        assert_eq!(
            snf.v.mul(&snf.v_inv),
            SparseMatrix::identity(RingTag::Qx, cols),
            "case {case}: v not invertible"
        );
        for k in 1..snf.diag.len() {
            assert!(
                snf.diag[k - 1].divides(&snf.diag[k]),
                "case {case}: divisibility chain broken"
            );
        }
        for f in &snf.diag {
            assert_eq!(f.leading_coeff(), BigRational::from(BigInt::from(1)), "not monic");
        }

        // Independent oracle: determinantal divisors.
        assert_eq!(snf.diag, reference::minors_invariant_factors(&m), "case {case}");
        assert_eq!(snf.rank, reference::dense_rank(&m), "case {case}: rank");
    }
}

#[test]
fn snf_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_matrix(&mut rng, RingTag::Qx, 5, 5, 3);
    let a = smith_normal_form(&m).unwrap();
    let b = smith_normal_form(&m).unwrap();
    assert_eq!(a.d, b.d);
    assert_eq!(a.u, b.u);
    assert_eq!(a.v, b.v);
}

/// Build a complex with known homology: per adjacent degree pair insert
/// exact pieces (R -1-> R), torsion pieces (R -f-> R), and free summands,
/// then conjugate each degree by a random unimodular change of basis.
fn random_complex_with_answer(
    rng: &mut ChaCha8Rng,
    ring: RingTag,
    width: usize,
    budget: usize,
) -> (FreeComplex, Vec<(i64, usize, Vec<PolyScalar>)>) {
    let d_min = rng.gen_range(-3i64..=3);
    let degrees = width + 1;
    let mut ranks = vec![0usize; degrees];
    // expected[(k, free, factors)]
    let mut free = vec![0usize; degrees];
    let mut torsion: Vec<Vec<PolyScalar>> = vec![Vec::new(); degrees];
    // blocks[i] describes d: C_{i+1} -> C_i as (row, col, scalar) over block indices.
    let mut blocks: Vec<Vec<(usize, usize, PolyScalar)>> = vec![Vec::new(); degrees - 1];

    let mut used = 0;
    // Free summands.
    for k in 0..degrees {
        let n = rng.gen_range(0..=2);
        ranks[k] += n;
        free[k] += n;
        used += n;
    }
    // Two-term pieces.
    for i in 0..degrees - 1 {
        while used + 2 <= budget && rng.gen_bool(0.5) {
            let f = if ring == RingTag::Q || rng.gen_bool(0.3) {
                PolyScalar::one(ring)
            } else {
                let d = rng.gen_range(1..=2);
                let mut c: Vec<BigRational> = (0..=d)
                    .map(|_| BigRational::from(BigInt::from(rng.gen_range(-3i64..=3))))
                    .collect();
                c[d] = BigRational::from(BigInt::from(1));
                PolyScalar::new(ring, c)
            };
            let row = ranks[i];
            let col = ranks[i + 1];
            ranks[i] += 1;
            ranks[i + 1] += 1;
            used += 2;
            if !f.is_unit() {
                torsion[i].push(f.clone());
            }
            blocks[i].push((row, col, f));
        }
    }

    let mut labels = Vec::new();
    for (k, &r) in ranks.iter().enumerate() {
        labels.push((0..r).map(|i| format!("g{}_{}", k, i)).collect::<Vec<_>>());
    }
    // Assemble block differentials, then conjugate.
    let changes: Vec<(SparseMatrix, SparseMatrix)> = ranks
        .iter()
        .map(|&r| random_unimodular(rng, ring, r))
        .collect();
    let mut diffs = Vec::new();
    for i in 0..degrees - 1 {
        let mut d = SparseMatrix::zero(ring, ranks[i], ranks[i + 1]);
        for (r, c, f) in &blocks[i] {
            d.set(*r, *c, f.clone());
        }
        // d' = P_i^{-1} * d * P_{i+1}
        let d2 = changes[i].1.mul(&d).mul(&changes[i + 1].0);
        diffs.push(d2);
    }
    let complex = FreeComplex::new(ring, d_min, labels, diffs).unwrap();

    let mut expected = Vec::new();
    for k in 0..degrees {
        let mut t = torsion[k].clone();
        t.sort_by_key(|f| (f.degree(), f.coeffs().to_vec().len()));
        expected.push((d_min + k as i64, free[k], t));
    }
    (complex, expected)
}

/// Normalize a multiset of monic torsion factors into the canonical
/// divisibility chain (the invariant-factor form of the same module):
/// repeatedly replace a non-comparable pair by (gcd, lcm).
fn chain_normalize(mut fs: Vec<PolyScalar>) -> Vec<String> {
    loop {
        let mut changed = false;
        'outer: for i in 0..fs.len() {
            for j in (i + 1)..fs.len() {
                if !fs[i].divides(&fs[j]) && !fs[j].divides(&fs[i]) {
                    let g = fs[i].gcd(&fs[j]);
                    let l = fs[i].mul(&fs[j]).exact_div(&g).unwrap().monic().1;
                    fs[i] = g;
                    fs[j] = l;
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            break;
        }
    }
    fs.retain(|f| !f.is_unit());
    let mut out: Vec<String> = fs.into_iter().map(|f| f.to_string()).collect();
    out.sort();
    out
}

#[test]
fn homology_matches_construction_and_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..30 {
        let ring = if case % 2 == 0 { RingTag::Qx } else { RingTag::Q };
        let (c, expected) = random_complex_with_answer(&mut rng, ring, 3, 10);
        let h = homology(&c).unwrap();
        let oracle = reference::dense_homology(&c);
        for (k, exp_free, exp_tors) in &expected {
            let got = h.at(*k).unwrap();
            assert_eq!(got.free_rank, *exp_free, "case {case} degree {k}: free rank");
            assert_eq!(
                chain_normalize(got.invariant_factors.clone()),
                chain_normalize(exp_tors.clone()),
                "case {case} degree {k}: torsion"
            );
            let (ok, ofree, otors) = oracle
                .iter()
                .find(|(kk, _, _)| kk == k)
                .cloned()
                .unwrap();
            assert_eq!(ok, *k);
            assert_eq!(ofree, *exp_free, "case {case} degree {k}: oracle free rank");
            assert_eq!(
                chain_normalize(otors),
                chain_normalize(exp_tors.clone()),
                "case {case} degree {k}: oracle torsion"
            );
        }
    }
}

#[test]
fn homology_is_additive_on_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let (a, _) = random_complex_with_answer(&mut rng, RingTag::Qx, 3, 8);
        // Rebuild b over the same window.
        let d_min = a.d_min();
        let (b0, _) = random_complex_with_answer(&mut rng, RingTag::Qx, 3, 8);
        let labels: Vec<Vec<String>> =
            b0.degrees().map(|k| b0.labels(k).to_vec()).collect();
        let diffs: Vec<SparseMatrix> =
            ((b0.d_min() + 1)..=b0.d_max()).map(|k| b0.diff(k)).collect();
        let b = FreeComplex::new(RingTag::Qx, d_min, labels, diffs).unwrap();

        let sum = a.direct_sum(&b).unwrap();
        let ha = homology(&a).unwrap();
        let hb = homology(&b).unwrap();
        let hs = homology(&sum).unwrap();
        for k in a.degrees() {
            let (xa, xb, xs) = (ha.at(k).unwrap(), hb.at(k).unwrap(), hs.at(k).unwrap());
            assert_eq!(xs.free_rank, xa.free_rank + xb.free_rank);
            let mut both = xa.invariant_factors.clone();
            both.extend(xb.invariant_factors.clone());
            assert_eq!(
                chain_normalize(xs.invariant_factors.clone()),
                chain_normalize(both)
            );
        }
    }
}

#[test]
fn solve_factor_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..25 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = random_matrix(&mut rng, RingTag::Qx, rows, cols, 2);
        let w: Vec<PolyScalar> =
            (0..cols).map(|_| random_scalar(&mut rng, RingTag::Qx, 2)).collect();
        let v = m.apply(&w);
        let sol = solve_factor(&m, &v).unwrap().expect("consistent system must solve");
        assert_eq!(m.apply(&sol), v);
    }
}
