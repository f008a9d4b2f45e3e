//! Randomized structural properties of algebra presentations: associativity,
//! the graded Leibniz rule, Koszul-sign coherence under permutations, and
//! weight preservation of the differentials.

use exacthom::dgcore::{presets, AlgebraElement, DgPresentation};
use exacthom::exactalg::PolyScalar;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_element(rng: &mut ChaCha8Rng, p: &DgPresentation, max_len: usize) -> AlgebraElement {
    let mut acc = AlgebraElement::zero();
    let n_terms = rng.gen_range(1..=3);
    for _ in 0..n_terms {
        let len = rng.gen_range(0..=max_len);
        let mut factor = p.one();
        for _ in 0..len {
            let g = rng.gen_range(0..p.gens.len());
            factor = p.multiply(&factor, &p.gen_elem(&p.gens[g].name));
        }
        let c = PolyScalar::from_int(p.base, rng.gen_range(-3i64..=3));
        acc = acc.add(&factor.scale(&c));
    }
    acc
}

fn random_homogeneous(rng: &mut ChaCha8Rng, p: &DgPresentation, max_len: usize) -> AlgebraElement {
    // One monomial is always homogeneous.
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut factor = p.one();
        for _ in 0..len {
            let g = rng.gen_range(0..p.gens.len());
            factor = p.multiply(&factor, &p.gen_elem(&p.gens[g].name));
        }
        if !factor.is_zero() {
            return factor;
        }
    }
}

#[test]
fn associativity_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let presentations = [
        presets::free_odd_tower(3),
        presets::semifree_tower(2),
        presets::curved_truncation(2),
        presets::truncated_polynomial(3),
    ];
    for p in &presentations {
        for _ in 0..20 {
            let a = random_element(&mut rng, p, 4);
            let b = random_element(&mut rng, p, 4);
            let c = random_element(&mut rng, p, 4);
            assert_eq!(
                p.multiply(&p.multiply(&a, &b), &c),
                p.multiply(&a, &p.multiply(&b, &c))
            );
        }
    }
}

#[test]
fn graded_leibniz_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let presentations = [presets::free_odd_tower(3), presets::semifree_tower(2)];
    for p in &presentations {
        for _ in 0..25 {
            let a = random_homogeneous(&mut rng, p, 3);
            let b = random_homogeneous(&mut rng, p, 3);
            let lhs = p.differential(&p.multiply(&a, &b));
            let da_b = p.multiply(&p.differential(&a), &b);
            let mut a_db = p.multiply(&a, &p.differential(&b));
            if a.degree(p).unwrap().rem_euclid(2) == 1 {
                a_db = a_db.neg();
            }
            assert_eq!(lhs, da_b.add(&a_db));
        }
    }
}

#[test]
fn koszul_sign_coherence_under_permutations() {
    // In a graded-commutative algebra, reordering k homogeneous factors
    // changes the product by the sign of the odd-odd crossings.
    use exacthom::dgcore::{GeneratorSpec, MulKind};
    use exacthom::exactalg::RingTag;
    let p = DgPresentation::new(
        RingTag::Q,
        MulKind::GradedCommutative,
        vec![
            GeneratorSpec::new("a", 1),
            GeneratorSpec::new("b", 3),
            GeneratorSpec::new("c", 2),
            GeneratorSpec::new("d", 5),
        ],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..30 {
        let mut factors: Vec<usize> = vec![0, 1, 2, 3];
        factors.shuffle(&mut rng);
        // Compute the product in shuffled order and the crossing sign of
        // restoring declaration order.
        let mut prod = p.one();
        for &g in &factors {
            prod = p.multiply(&prod, &p.gen_elem(&p.gens[g].name));
        }
        let mut sign = 1i64;
        let mut arr = factors.clone();
        for i in 1..arr.len() {
            let mut j = i;
            while j > 0 && arr[j - 1] > arr[j] {
                let odd_a = p.gens[arr[j - 1]].degree % 2 != 0;
                let odd_b = p.gens[arr[j]].degree % 2 != 0;
                if odd_a && odd_b {
                    sign = -sign;
                }
                arr.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut sorted_prod = p.one();
        for g in 0..4 {
            sorted_prod = p.multiply(&sorted_prod, &p.gen_elem(&p.gens[g].name));
        }
        let expected = if sign < 0 { sorted_prod.neg() } else { sorted_prod };
        assert_eq!(prod, expected);
    }
}

#[test]
fn weighted_presentations_have_weight_preserving_differentials() {
    for n in 1..=3 {
        let p = presets::semifree_tower(n);
        p.validate().unwrap();
        for (i, g) in p.gens.iter().enumerate() {
            if !p.diff[i].is_zero() {
                assert_eq!(p.diff[i].weight(&p), Some(g.weight));
            }
        }
    }
}
