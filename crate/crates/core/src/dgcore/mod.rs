//! Presentations of finitely generated (possibly curved) dg algebras over
//! Q or Q[x], with unique normal forms, Koszul-sign-correct multiplication,
//! derivations, and validation.
//!
//! Normal forms: for free-associative presentations a monomial is the word
//! itself; for graded-commutative ones generators are sorted by declaration
//! order, accumulating a sign for each transposition of two odd generators.
//! The coefficient variable x (over Q[x]) is a central even element of the
//! coefficient ring, never a generator.

mod element;
mod enumerate;
mod morphism;

pub use element::AlgebraElement;
pub use enumerate::monomial_basis;
pub use morphism::{is_chain_algebra_map, AlgebraMorphism, MorphismReport};

use crate::exactalg::{ExactError, PolyScalar, RingTag};
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MulKind {
    FreeAssociative,
    GradedCommutative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

impl GeneratorSpec {
    pub fn new(name: &str, degree: i64) -> Self {
        GeneratorSpec { name: name.into(), degree, weight: 0 }
    }

    pub fn with_weight(name: &str, degree: i64, weight: i64) -> Self {
        GeneratorSpec { name: name.into(), degree, weight }
    }
}

/// A finitely generated (curved) dg algebra presentation. Relations are
/// restricted to nilpotency bounds g^k = 0 on single generators, which is
/// all the constructions here need.
#[derive(Clone, Debug)]
pub struct DgPresentation {
    pub base: RingTag,
    pub kind: MulKind,
    pub gens: Vec<GeneratorSpec>,
    /// gen index -> k, meaning the k-th power of that generator vanishes.
    pub nilpotency: BTreeMap<usize, u32>,
    /// d(g) for each generator; must be homogeneous of degree |g| - 1.
    pub diff: Vec<AlgebraElement>,
    /// Curvature element of degree -2 (zero for honest dg algebras).
    pub curvature: AlgebraElement,
}

impl DgPresentation {
    pub fn new(base: RingTag, kind: MulKind, gens: Vec<GeneratorSpec>) -> Self {
        let n = gens.len();
        DgPresentation {
            base,
            kind,
            gens,
            nilpotency: BTreeMap::new(),
            diff: vec![AlgebraElement::zero(); n],
            curvature: AlgebraElement::zero(),
        }
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn set_nilpotent(&mut self, name: &str, power: u32) {
        let i = self.gen_index(name).expect("unknown generator");
        assert!(power >= 1);
        self.nilpotency.insert(i, power);
    }

    pub fn set_differential(&mut self, name: &str, value: AlgebraElement) {
        let i = self.gen_index(name).expect("unknown generator");
        self.diff[i] = value;
    }

    pub fn set_curvature(&mut self, value: AlgebraElement) {
        self.curvature = value;
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::constant(PolyScalar::one(self.base))
    }

    pub fn gen_elem(&self, name: &str) -> AlgebraElement {
        let i = self.gen_index(name).expect("unknown generator");
        AlgebraElement::from_word(vec![i as u16], PolyScalar::one(self.base))
    }

    pub fn scalar(&self, c: PolyScalar) -> AlgebraElement {
        assert_eq!(c.ring(), self.base);
        AlgebraElement::constant(c)
    }

    pub fn degree_of_word(&self, word: &[u16]) -> i64 {
        word.iter().map(|&g| self.gens[g as usize].degree).sum()
    }

    pub fn weight_of_word(&self, word: &[u16]) -> i64 {
        word.iter().map(|&g| self.gens[g as usize].weight).sum()
    }

    fn is_odd(&self, g: u16) -> bool {
        self.gens[g as usize].degree.rem_euclid(2) == 1
    }

    /// Normalize a raw word into (sign, normal word), or None when the word
    /// dies (odd square or nilpotency). The sign is the Koszul sign of the
    /// sorting permutation for graded-commutative presentations.
    fn normalize_word(&self, word: &[u16]) -> Option<(i64, Vec<u16>)> {
        let mut w = word.to_vec();
        let mut sign = 1i64;
        if self.kind == MulKind::GradedCommutative {
            // Insertion sort by declaration index, tracking odd-odd swaps.
            for i in 1..w.len() {
                let mut j = i;
                while j > 0 && w[j - 1] > w[j] {
                    if self.is_odd(w[j - 1]) && self.is_odd(w[j]) {
                        sign = -sign;
                    }
                    w.swap(j - 1, j);
                    j -= 1;
                }
            }
            // Odd generators square to zero over Q.
            for i in 1..w.len() {
                if w[i] == w[i - 1] && self.is_odd(w[i]) {
                    return None;
                }
            }
            // Nilpotency bounds by total multiplicity.
            for (&g, &k) in &self.nilpotency {
                let count = w.iter().filter(|&&a| a as usize == g).count();
                if count >= k as usize {
                    return None;
                }
            }
        } else {
            // Free-associative: nilpotency kills k consecutive occurrences.
            for (&g, &k) in &self.nilpotency {
                let mut run = 0usize;
                for &a in &w {
                    if a as usize == g {
                        run += 1;
                        if run >= k as usize {
                            return None;
                        }
                    } else {
                        run = 0;
                    }
                }
            }
        }
        Some((sign, w))
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut terms: BTreeMap<Vec<u16>, PolyScalar> = BTreeMap::new();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let mut raw = wa.clone();
                raw.extend_from_slice(wb);
                if let Some((sign, w)) = self.normalize_word(&raw) {
                    let mut c = ca.mul(cb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    let entry = terms
                        .entry(w)
                        .or_insert_with(|| PolyScalar::zero(self.base));
                    *entry = entry.add(&c);
                }
            }
        }
        AlgebraElement::from_terms(terms)
    }

    pub fn multiply_all(&self, factors: &[AlgebraElement]) -> AlgebraElement {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f);
        }
        acc
    }

    /// Extend the generator assignments as a degree -1 derivation with the
    /// Koszul sign rule: d(uv) = d(u)v + (-1)^{|u|} u d(v).
    pub fn differential(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut acc = AlgebraElement::zero();
        for (w, c) in a.terms() {
            for pos in 0..w.len() {
                let g = w[pos] as usize;
                let dg = &self.diff[g];
                if dg.is_zero() {
                    continue;
                }
                let prefix_deg: i64 =
                    w[..pos].iter().map(|&x| self.gens[x as usize].degree).sum();
                let sign = if prefix_deg.rem_euclid(2) == 1 { -1 } else { 1 };
                let prefix =
                    AlgebraElement::from_word(w[..pos].to_vec(), PolyScalar::one(self.base));
                let suffix =
                    AlgebraElement::from_word(w[pos + 1..].to_vec(), PolyScalar::one(self.base));
                let mut term = self.multiply(&self.multiply(&prefix, dg), &suffix);
                term = term.scale(c);
                if sign < 0 {
                    term = term.neg();
                }
                acc = acc.add(&term);
            }
        }
        acc
    }

    /// Graded commutator [a, b] = ab - (-1)^{|a||b|} ba for homogeneous a, b.
    pub fn commutator(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let da = a.degree(self).unwrap_or(0);
        let db = b.degree(self).unwrap_or(0);
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        if (da * db).rem_euclid(2) == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    /// Checks degree homogeneity of every d(g), weight preservation where
    /// weights are declared, d(h) = 0, and the curved identity
    /// d(d(g)) = h*g - g*h on every generator.
    pub fn validate(&self) -> Result<(), ExactError> {
        let mut names = std::collections::BTreeSet::new();
        for g in &self.gens {
            if !names.insert(&g.name) {
                return Err(ExactError::Invalid(format!(
                    "duplicate generator name '{}'",
                    g.name
                )));
            }
        }
        if !self.curvature.is_zero() {
            if self.curvature.degree(self) != Some(-2) {
                return Err(ExactError::Invalid(
                    "curvature is not homogeneous of degree -2".into(),
                ));
            }
            if !self.differential(&self.curvature).is_zero() {
                return Err(ExactError::Invalid("d(curvature) != 0".into()));
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            let dg = &self.diff[i];
            if dg.is_zero() {
                continue;
            }
            if dg.degree(self) != Some(g.degree - 1) {
                return Err(ExactError::Invalid(format!(
                    "d({}) is not homogeneous of degree {}",
                    g.name,
                    g.degree - 1
                )));
            }
            let has_weights = self.gens.iter().any(|g| g.weight != 0);
            if has_weights {
                if dg.weight(self) != Some(g.weight) {
                    return Err(ExactError::Invalid(format!(
                        "d({}) does not preserve the weight grading",
                        g.name
                    )));
                }
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            let ge = AlgebraElement::from_word(vec![i as u16], PolyScalar::one(self.base));
            let dd = self.differential(&self.diff[i]);
            let expected = self
                .multiply(&self.curvature, &ge)
                .sub(&self.multiply(&ge, &self.curvature));
            if dd != expected {
                return Err(ExactError::Invalid(format!(
                    "curved identity d^2 = [h, -] fails at generator '{}'",
                    g.name
                )));
            }
        }
        Ok(())
    }
}

/// Standard presentations used across the test-suite and the CLI scenarios.
pub mod presets {
    use super::*;

    /// Truncated polynomials Q[s]/s^n over Q with s in degree 0, d = 0.
    pub fn truncated_polynomial(n: u32) -> DgPresentation {
        let mut p = DgPresentation::new(
            RingTag::Q,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::new("s", 0)],
        );
        p.set_nilpotent("s", n);
        p
    }

    /// The free graded-commutative algebra Q[x, xi] over Q[x] with
    /// deg(xi) = 1 and d(xi) = x^n.
    pub fn odd_resolution(n: u32) -> DgPresentation {
        let mut p = DgPresentation::new(
            RingTag::Qx,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::new("xi", 1)],
        );
        let xn = PolyScalar::x().pow(n);
        let val = p.scalar(xn);
        p.set_differential("xi", val);
        p
    }

    /// The free associative dg algebra over Q[x] on y_1..y_n with
    /// deg(y_i) = 2i - 1, d(y_1) = x, d(y_{i+1}) = sum_j y_j y_{i+1-j}.
    pub fn free_odd_tower(n: u32) -> DgPresentation {
        let gens: Vec<GeneratorSpec> = (1..=n)
            .map(|i| GeneratorSpec::new(&format!("y{}", i), 2 * i as i64 - 1))
            .collect();
        let mut p = DgPresentation::new(RingTag::Qx, MulKind::FreeAssociative, gens);
        let x = p.scalar(PolyScalar::x());
        p.set_differential("y1", x);
        for i in 1..n {
            // d(y_{i+1}) = sum_{j=1}^{i} y_j * y_{i+1-j}
            let mut acc = AlgebraElement::zero();
            for j in 1..=i {
                let a = p.gen_elem(&format!("y{}", j));
                let b = p.gen_elem(&format!("y{}", i + 1 - j));
                acc = acc.add(&p.multiply(&a, &b));
            }
            p.set_differential(&format!("y{}", i + 1), acc);
        }
        p
    }

    /// The curved algebra (Q[x, t]/(t^{n+1}), d = 0, h = -x t) over Q[x]
    /// with t in degree -2 and weight 1.
    pub fn curved_truncation(n: u32) -> DgPresentation {
        let mut p = DgPresentation::new(
            RingTag::Qx,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::with_weight("t", -2, 1)],
        );
        p.set_nilpotent("t", n + 1);
        let t = p.gen_elem("t");
        let h = t.scale(&PolyScalar::x()).neg();
        p.set_curvature(h);
        p
    }

    /// The semi-free resolution Q[x, t, xi] over Q[x] with deg(t) = -2,
    /// deg(xi) = -2n - 1, d(xi) = t^{n+1}, weights w(t) = 1, w(xi) = n + 1.
    pub fn semifree_tower(n: u32) -> DgPresentation {
        let mut p = DgPresentation::new(
            RingTag::Qx,
            MulKind::GradedCommutative,
            vec![
                GeneratorSpec::with_weight("t", -2, 1),
                GeneratorSpec::with_weight("xi", -2 * n as i64 - 1, n as i64 + 1),
            ],
        );
        let t = p.gen_elem("t");
        let mut tn1 = p.one();
        for _ in 0..=n {
            tn1 = p.multiply(&tn1, &t);
        }
        p.set_differential("xi", tn1);
        p
    }

    /// Truncated polynomials Q[x]/x^n presented over Q: one even generator
    /// in degree 0 named "a" with a^n = 0. (The coefficient variable x is
    /// reserved for the Q[x] base, so over Q the generator gets its own
    /// name.)
    pub fn truncated_affine(n: u32) -> DgPresentation {
        let mut p = DgPresentation::new(
            RingTag::Q,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::new("a", 0)],
        );
        p.set_nilpotent("a", n);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_squares_vanish() {
        let p = presets::odd_resolution(2);
        let xi = p.gen_elem("xi");
        assert!(p.multiply(&xi, &xi).is_zero());
    }

    #[test]
    fn free_words_stay_ordered() {
        let p = presets::free_odd_tower(2);
        let y1 = p.gen_elem("y1");
        let y2 = p.gen_elem("y2");
        let a = p.multiply(&y1, &y2);
        let b = p.multiply(&y2, &y1);
        assert_ne!(a, b);
        assert!(!a.is_zero() && !b.is_zero());
    }

    #[test]
    fn nilpotency_truncates() {
        let p = presets::curved_truncation(2); // t^3 = 0
        let t = p.gen_elem("t");
        let t2 = p.multiply(&t, &t);
        assert!(!t2.is_zero());
        assert!(p.multiply(&t, &t2).is_zero());
    }

    #[test]
    fn tower_differential_values() {
        let p = presets::free_odd_tower(3);
        let y1 = p.gen_elem("y1");
        let d_y2 = p.differential(&p.gen_elem("y2"));
        assert_eq!(d_y2, p.multiply(&y1, &y1));
        // Leibniz: d(y1 y1) = x*y1 - y1*x = 0 because x is central.
        assert!(p.differential(&p.multiply(&y1, &y1)).is_zero());
    }

    #[test]
    fn presets_validate() {
        presets::truncated_polynomial(3).validate().unwrap();
        presets::odd_resolution(2).validate().unwrap();
        presets::free_odd_tower(3).validate().unwrap();
        presets::curved_truncation(2).validate().unwrap();
        presets::semifree_tower(2).validate().unwrap();
        presets::truncated_affine(4).validate().unwrap();
    }

    #[test]
    fn wrong_degree_differential_rejected() {
        let mut p = presets::free_odd_tower(2);
        let y1 = p.gen_elem("y1");
        p.set_differential("y2", y1); // degree 1, but needs degree 2
        assert!(p.validate().is_err());
    }

    #[test]
    fn koszul_sign_on_odd_transposition() {
        let p = DgPresentation::new(
            RingTag::Q,
            MulKind::GradedCommutative,
            vec![GeneratorSpec::new("u", 1), GeneratorSpec::new("v", 1)],
        );
        let u = p.gen_elem("u");
        let v = p.gen_elem("v");
        let uv = p.multiply(&u, &v);
        let vu = p.multiply(&v, &u);
        assert_eq!(vu, uv.neg());
    }

    #[test]
    fn associativity_spot_checks() {
        let p = presets::free_odd_tower(3);
        let elems = [
            p.gen_elem("y1"),
            p.gen_elem("y2").add(&p.gen_elem("y1")),
            p.multiply(&p.gen_elem("y1"), &p.gen_elem("y3")),
        ];
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let left = p.multiply(&p.multiply(a, b), c);
                    let right = p.multiply(a, &p.multiply(b, c));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn graded_leibniz_spot_checks() {
        let p = presets::semifree_tower(1);
        let t = p.gen_elem("t");
        let xi = p.gen_elem("xi");
        for a in [&t, &xi, &p.multiply(&t, &xi)] {
            for b in [&t, &xi] {
                let lhs = p.differential(&p.multiply(a, b));
                let da_b = p.multiply(&p.differential(a), b);
                let deg_a = a.degree(&p).unwrap();
                let mut a_db = p.multiply(a, &p.differential(b));
                if deg_a.rem_euclid(2) == 1 {
                    a_db = a_db.neg();
                }
                assert_eq!(lhs, da_b.add(&a_db));
            }
        }
    }
}
