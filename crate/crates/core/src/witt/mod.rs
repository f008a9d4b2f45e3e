//! Big Witt vectors over Q-algebras at finite precision: elements are unit
//! power series 1 + a₁t + … + a_L t^L, addition is series multiplication,
//! multiplication is defined through the ghost coordinates
//! gh(w) = −t·(d/dt) log w(t), which are a ring isomorphism onto the product
//! ring over any Q-algebra. Also: Frobenius and Verschiebung operators and
//! a rationality test with an explicit certificate.

use num_rational::BigRational;

use crate::exactalg::{solve_factor_with, ExactError, Limits, PolyScalar, RingTag, SparseMatrix};

/// A big Witt vector at precision L: the unit series 1 + a₁t + … + a_L t^L
/// with exact coefficients in Q or Q[x].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    ring: RingTag,
    /// a₁ … a_L.
    coeffs: Vec<PolyScalar>,
}

impl WittVector {
    pub fn new(ring: RingTag, coeffs: Vec<PolyScalar>) -> Result<Self, ExactError> {
        if coeffs.is_empty() {
            return Err(ExactError::Invalid("Witt precision must be at least 1".into()));
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(ExactError::Invalid("Witt coefficient over wrong ring".into()));
        }
        Ok(WittVector { ring, coeffs })
    }

    /// The additive neutral element, the series 1.
    pub fn zero(ring: RingTag, precision: usize) -> Self {
        WittVector { ring, coeffs: vec![PolyScalar::zero(ring); precision] }
    }

    /// The multiplicative unit, the series 1 - t (all ghost components 1).
    pub fn one(ring: RingTag, precision: usize) -> Self {
        let mut coeffs = vec![PolyScalar::zero(ring); precision];
        coeffs[0] = PolyScalar::from_int(ring, -1);
        WittVector { ring, coeffs }
    }

    /// The Teichmüller-style line 1 - a·t.
    pub fn line(a: &PolyScalar, precision: usize) -> Self {
        let mut coeffs = vec![PolyScalar::zero(a.ring()); precision];
        coeffs[0] = a.neg();
        WittVector { ring: a.ring(), coeffs }
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient a_i of tⁱ, 1 ≤ i ≤ L.
    pub fn coeff(&self, i: usize) -> &PolyScalar {
        &self.coeffs[i - 1]
    }

    /// The full series 1, a₁, …, a_L.
    fn series(&self) -> Vec<PolyScalar> {
        let mut s = Vec::with_capacity(self.coeffs.len() + 1);
        s.push(PolyScalar::one(self.ring));
        s.extend(self.coeffs.iter().cloned());
        s
    }

    pub fn truncate(&self, precision: usize) -> Result<Self, ExactError> {
        if precision == 0 || precision > self.coeffs.len() {
            return Err(ExactError::Invalid(format!(
                "cannot truncate precision {} to {}",
                self.coeffs.len(),
                precision
            )));
        }
        Ok(WittVector { ring: self.ring, coeffs: self.coeffs[..precision].to_vec() })
    }
}

fn check_compatible(a: &WittVector, b: &WittVector) -> Result<(), ExactError> {
    if a.ring != b.ring {
        return Err(ExactError::Invalid("Witt vectors over different rings".into()));
    }
    if a.precision() != b.precision() {
        return Err(ExactError::DimensionMismatch {
            context: format!("Witt precision {} vs {}", a.precision(), b.precision()),
        });
    }
    Ok(())
}

/// Product of two power series (given as full coefficient lists), truncated
/// to the length of the first factor.
fn series_mul(a: &[PolyScalar], b: &[PolyScalar]) -> Vec<PolyScalar> {
    let ring = a[0].ring();
    let n = a.len();
    let mut out = vec![PolyScalar::zero(ring); n];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    out
}

/// Inverse of a unit series (constant term 1), to the same length.
fn series_inv(a: &[PolyScalar]) -> Vec<PolyScalar> {
    let ring = a[0].ring();
    debug_assert!(a[0].is_one());
    let n = a.len();
    let mut inv = vec![PolyScalar::zero(ring); n];
    inv[0] = PolyScalar::one(ring);
    for m in 1..n {
        let mut acc = PolyScalar::zero(ring);
        for k in 1..=m {
            if !a[k].is_zero() {
                acc = acc.add(&a[k].mul(&inv[m - k]));
            }
        }
        inv[m] = acc.neg();
    }
    inv
}

/// Witt addition: multiplication of the unit series mod t^{L+1}.
pub fn witt_add(a: &WittVector, b: &WittVector) -> Result<WittVector, ExactError> {
    check_compatible(a, b)?;
    let prod = series_mul(&a.series(), &b.series());
    WittVector::new(a.ring, prod[1..].to_vec())
}

/// Witt negation: the inverse unit series.
pub fn witt_neg(a: &WittVector) -> WittVector {
    let inv = series_inv(&a.series());
    WittVector { ring: a.ring, coeffs: inv[1..].to_vec() }
}

/// Ghost coordinates gh₁ … gh_L, the coefficients of −t·(d/dt) log w(t).
/// Componentwise they form a ring homomorphism: ghost(w +_W w') adds and
/// ghost(w ·_W w') multiplies componentwise.
pub fn ghost(w: &WittVector) -> Vec<PolyScalar> {
    let s = w.series();
    let n = s.len();
    let ring = w.ring;
    // -t·w'(t) has coefficients -m·a_m at t^m.
    let mut num = vec![PolyScalar::zero(ring); n];
    for m in 1..n {
        num[m] = s[m].mul(&PolyScalar::from_int(ring, -(m as i64)));
    }
    let q = series_mul(&num, &series_inv(&s));
    q[1..].to_vec()
}

/// Inverse of `ghost` over Q-algebras, by the Newton-identity recursion
/// m·a_m = -Σ_{i=0}^{m-1} a_i·gh_{m-i}.
pub fn from_ghost(ring: RingTag, gh: &[PolyScalar]) -> Result<WittVector, ExactError> {
    if gh.is_empty() {
        return Err(ExactError::Invalid("Witt precision must be at least 1".into()));
    }
    let n = gh.len() + 1;
    let mut a = vec![PolyScalar::zero(ring); n];
    a[0] = PolyScalar::one(ring);
    for m in 1..n {
        let mut acc = PolyScalar::zero(ring);
        for i in 0..m {
            if !a[i].is_zero() {
                acc = acc.add(&a[i].mul(&gh[m - i - 1]));
            }
        }
        let inv_m = PolyScalar::from_fraction(ring, -1, m as i64);
        a[m] = acc.mul(&inv_m);
    }
    WittVector::new(ring, a[1..].to_vec())
}

/// Witt multiplication: the unique vector whose ghost coordinates are the
/// componentwise products.
pub fn witt_mul(a: &WittVector, b: &WittVector) -> Result<WittVector, ExactError> {
    check_compatible(a, b)?;
    let ga = ghost(a);
    let gb = ghost(b);
    let g: Vec<PolyScalar> = ga.iter().zip(&gb).map(|(x, y)| x.mul(y)).collect();
    from_ghost(a.ring, &g)
}

/// Verschiebung V_n(w)(t) = w(tⁿ), truncated back to the input precision.
pub fn verschiebung(w: &WittVector, n: usize) -> Result<WittVector, ExactError> {
    if n == 0 {
        return Err(ExactError::Invalid("Verschiebung index must be positive".into()));
    }
    let l = w.precision();
    let mut coeffs = vec![PolyScalar::zero(w.ring); l];
    for (i, c) in w.coeffs.iter().enumerate() {
        let pos = (i + 1) * n;
        if pos <= l {
            coeffs[pos - 1] = c.clone();
        }
    }
    WittVector::new(w.ring, coeffs)
}

/// Frobenius, defined on ghost coordinates by gh_m(F_n w) = gh_{nm}(w);
/// the result has precision ⌊L/n⌋ (error when that is zero).
pub fn frobenius(w: &WittVector, n: usize) -> Result<WittVector, ExactError> {
    if n == 0 {
        return Err(ExactError::Invalid("Frobenius index must be positive".into()));
    }
    let l = w.precision() / n;
    if l == 0 {
        return Err(ExactError::Invalid(format!(
            "precision {} too small for Frobenius index {}",
            w.precision(),
            n
        )));
    }
    let g = ghost(w);
    let gf: Vec<PolyScalar> = (1..=l).map(|m| g[n * m - 1].clone()).collect();
    from_ghost(w.ring, &gf)
}

/// Certificate of rationality: w ≡ f/g mod t^{L+1} with deg f, deg g ≤ D
/// and f(0) = g(0) = 1; coefficient lists include the constant term.
#[derive(Clone, Debug)]
pub struct RationalityCertificate {
    pub degree_bound: usize,
    pub precision: usize,
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
}

/// Kronecker–Hankel rationality test over Q at degree bound D: w is a ratio
/// of polynomials of degree ≤ D exactly when the Hankel system
/// Σ_j g_j·b_{m-j} = -b_m (m = D+1 … L) in the series coefficients b of w
/// is solvable; the solution yields the certificate. Requires L ≥ 2D + 2.
pub fn is_rational(
    w: &WittVector,
    degree_bound: usize,
) -> Result<Option<RationalityCertificate>, ExactError> {
    if w.ring != RingTag::Q {
        return Err(ExactError::Invalid("rationality test requires coefficients in Q".into()));
    }
    let l = w.precision();
    if l < 2 * degree_bound + 2 {
        return Err(ExactError::Invalid(format!(
            "precision {} insufficient for degree bound {} (need {})",
            l,
            degree_bound,
            2 * degree_bound + 2
        )));
    }
    let b = w.series();
    let d = degree_bound;
    // Unknowns g_1..g_d; one equation per coefficient t^m, m = d+1..l.
    let rows = l - d;
    let mut mat = SparseMatrix::zero(RingTag::Q, rows, d);
    let mut rhs = Vec::with_capacity(rows);
    for (r, m) in (d + 1..=l).enumerate() {
        for j in 1..=d {
            mat.set(r, j - 1, b[m - j].clone());
        }
        rhs.push(b[m].neg());
    }
    let Some(g_sol) = solve_factor_with(&mat, &rhs, Limits::default())? else {
        return Ok(None);
    };
    let mut g = vec![PolyScalar::one(RingTag::Q)];
    g.extend(g_sol);
    // f = g · w, which by construction has degree ≤ d.
    let mut gl = g.clone();
    gl.resize(l + 1, PolyScalar::zero(RingTag::Q));
    let f_full = series_mul(&gl, &b);
    debug_assert!(f_full[d + 1..].iter().all(|c| c.is_zero()));
    let to_q = |v: &[PolyScalar]| -> Vec<BigRational> { v.iter().map(|c| c.coeff(0)).collect() };
    Ok(Some(RationalityCertificate {
        degree_bound,
        precision: l,
        numerator: to_q(&f_full[..=d]),
        denominator: to_q(&g),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn qi(n: i64) -> PolyScalar {
        PolyScalar::from_int(RingTag::Q, n)
    }

    fn random_witt(rng: &mut impl Rng, l: usize) -> WittVector {
        let coeffs = (0..l)
            .map(|_| {
                PolyScalar::from_fraction(RingTag::Q, rng.gen_range(-5..=5), rng.gen_range(1..=3))
            })
            .collect();
        WittVector::new(RingTag::Q, coeffs).unwrap()
    }

    #[test]
    fn lines_add_and_multiply_as_expected() {
        let a = qi(3);
        let b = qi(5);
        let wa = WittVector::line(&a, 4);
        let wb = WittVector::line(&b, 4);
        // (1 - at)(1 - bt) = 1 - (a+b)t + abt².
        let s = witt_add(&wa, &wb).unwrap();
        assert_eq!(s.coeff(1), &qi(-8));
        assert_eq!(s.coeff(2), &qi(15));
        // Teichmüller multiplicativity: (1-at)·_W(1-bt) = 1-abt.
        let p = witt_mul(&wa, &wb).unwrap();
        assert_eq!(p, WittVector::line(&qi(15), 4));
        // Unit element 1 - t.
        let u = WittVector::one(RingTag::Q, 4);
        assert_eq!(witt_mul(&u, &wa).unwrap(), wa);
    }

    #[test]
    fn ghost_of_line_is_power_sequence() {
        let w = WittVector::line(&qi(2), 5);
        let g = ghost(&w);
        for (m, gm) in g.iter().enumerate() {
            assert_eq!(gm, &qi(2i64.pow(m as u32 + 1)));
        }
        // Geometric-series inverse of 1 - at.
        let neg = witt_neg(&w);
        for i in 1..=3 {
            assert_eq!(neg.coeff(i), &qi(2i64.pow(i as u32)));
        }
    }

    #[test]
    fn ghost_is_a_ring_isomorphism_on_random_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_witt(&mut rng, 6);
            let b = random_witt(&mut rng, 6);
            assert_eq!(from_ghost(RingTag::Q, &ghost(&a)).unwrap(), a);
            let sum = witt_add(&a, &b).unwrap();
            let prod = witt_mul(&a, &b).unwrap();
            let (ga, gb) = (ghost(&a), ghost(&b));
            for m in 0..6 {
                assert_eq!(ghost(&sum)[m], ga[m].add(&gb[m]));
                assert_eq!(ghost(&prod)[m], ga[m].mul(&gb[m]));
            }
        }
    }

    #[test]
    fn ring_axioms_hold_at_precision_six() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let a = random_witt(&mut rng, 6);
            let b = random_witt(&mut rng, 6);
            let c = random_witt(&mut rng, 6);
            let ab_c = witt_mul(&witt_mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = witt_mul(&a, &witt_mul(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            let lhs = witt_mul(&a, &witt_add(&b, &c).unwrap()).unwrap();
            let rhs = witt_add(&witt_mul(&a, &b).unwrap(), &witt_mul(&a, &c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let z = witt_add(&a, &witt_neg(&a)).unwrap();
            assert_eq!(z, WittVector::zero(RingTag::Q, 6));
        }
    }

    #[test]
    fn frobenius_and_verschiebung_identities() {
        let w = WittVector::line(&qi(3), 6);
        assert_eq!(verschiebung(&w, 2).unwrap().coeff(2), &qi(-3));
        assert_eq!(frobenius(&w, 2).unwrap(), WittVector::line(&qi(9), 3));
        // F_n V_n = n·(-) in Witt addition.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 2..=3usize {
            for _ in 0..10 {
                let a = random_witt(&mut rng, 6);
                let fv = frobenius(&verschiebung(&a, n).unwrap(), n).unwrap();
                let mut acc = WittVector::zero(RingTag::Q, 6);
                for _ in 0..n {
                    acc = witt_add(&acc, &a).unwrap();
                }
                assert_eq!(fv, acc.truncate(6 / n).unwrap());
            }
        }
    }

    #[test]
    fn truncation_commutes_with_arithmetic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let a8 = random_witt(&mut rng, 8);
        let b8 = random_witt(&mut rng, 8);
        let a5 = a8.truncate(5).unwrap();
        let b5 = b8.truncate(5).unwrap();
        assert_eq!(witt_add(&a8, &b8).unwrap().truncate(5).unwrap(), witt_add(&a5, &b5).unwrap());
        assert_eq!(witt_mul(&a8, &b8).unwrap().truncate(5).unwrap(), witt_mul(&a5, &b5).unwrap());
    }

    #[test]
    fn rationality_certificates() {
        // (1 - t)/(1 - 2t) at precision 10, degree bound 1.
        let num = [qi(1), qi(-1)];
        let mut series = vec![PolyScalar::zero(RingTag::Q); 11];
        // Expand by dividing: series of 1/(1-2t) is 2^m, times (1 - t).
        for (m, s) in series.iter_mut().enumerate() {
            let two_m = qi(2i64.pow(m as u32));
            let prev = if m >= 1 { qi(2i64.pow(m as u32 - 1)) } else { qi(0) };
            *s = two_m.mul(&num[0]).add(&prev.mul(&num[1]));
        }
        let w = WittVector::new(RingTag::Q, series[1..].to_vec()).unwrap();
        let cert = is_rational(&w, 1).unwrap().expect("rational series detected");
        assert_eq!(cert.numerator, vec![BigRational::from_integer(1.into()), BigRational::from_integer((-1).into())]);
        assert_eq!(cert.denominator, vec![BigRational::from_integer(1.into()), BigRational::from_integer((-2).into())]);

        // A polynomial numerator alone is rational.
        let mut coeffs = vec![PolyScalar::zero(RingTag::Q); 10];
        coeffs[0] = qi(4);
        coeffs[1] = qi(-7);
        let wp = WittVector::new(RingTag::Q, coeffs).unwrap();
        assert!(is_rational(&wp, 2).unwrap().is_some());

        // 1/m! coefficients are not rational at this precision and bound.
        let mut fact = vec![PolyScalar::one(RingTag::Q)];
        for m in 1..=10i64 {
            let last = fact.last().unwrap().clone();
            fact.push(last.mul(&PolyScalar::from_fraction(RingTag::Q, 1, m)));
        }
        let we = WittVector::new(RingTag::Q, fact[1..].to_vec()).unwrap();
        assert!(is_rational(&we, 3).unwrap().is_none());

        // Products of certified-rational vectors stay rational at doubled bound.
        let prod = witt_add(&w, &wp).unwrap();
        assert!(is_rational(&prod, 3).unwrap().is_some());
    }

    #[test]
    fn insufficient_precision_is_an_error() {
        let w = WittVector::line(&qi(1), 4);
        assert!(is_rational(&w, 2).is_err());
    }
}
