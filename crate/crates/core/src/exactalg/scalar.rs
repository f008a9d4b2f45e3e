//! Exact scalars: elements of Q or of the polynomial ring Q[x].
//!
//! Both rings are Euclidean, which is all the elimination routines need.
//! A `PolyScalar` is a dense coefficient list by exponent with trailing
//! zeros trimmed; the rational variant has at most one coefficient.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Which coefficient ring a scalar (or matrix, or complex) lives over.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RingTag {
    /// The rationals Q.
    Q,
    /// Univariate polynomials Q[x].
    Qx,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Q => write!(f, "Q"),
            RingTag::Qx => write!(f, "Q[x]"),
        }
    }
}

/// An exact element of Q or Q[x].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyScalar {
    ring: RingTag,
    /// Coefficient of x^i at index i; empty means zero; last entry nonzero.
    coeffs: Vec<BigRational>,
}

impl PolyScalar {
    fn trim(mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        coeffs
    }

    pub fn new(ring: RingTag, coeffs: Vec<BigRational>) -> Self {
        let coeffs = Self::trim(coeffs);
        if ring == RingTag::Q {
            assert!(coeffs.len() <= 1, "rational scalar with x-coefficients");
        }
        PolyScalar { ring, coeffs }
    }

    pub fn zero(ring: RingTag) -> Self {
        PolyScalar { ring, coeffs: vec![] }
    }

    pub fn one(ring: RingTag) -> Self {
        PolyScalar { ring, coeffs: vec![BigRational::one()] }
    }

    pub fn from_int(ring: RingTag, n: i64) -> Self {
        Self::new(ring, vec![BigRational::from(BigInt::from(n))])
    }

    pub fn from_rational(ring: RingTag, q: BigRational) -> Self {
        Self::new(ring, vec![q])
    }

    pub fn from_fraction(ring: RingTag, num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::from_rational(ring, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The variable x as an element of Q[x].
    pub fn x() -> Self {
        PolyScalar {
            ring: RingTag::Qx,
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    /// c * x^exp over Q[x] (or just c over Q when exp = 0).
    pub fn monomial(ring: RingTag, c: BigRational, exp: usize) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        let mut coeffs = vec![BigRational::zero(); exp + 1];
        coeffs[exp] = c;
        Self::new(ring, coeffs)
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Polynomial degree; `None` for the zero element.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Euclidean size used for pivot selection: 0 over Q, degree over Q[x].
    pub fn euclidean_norm(&self) -> Option<usize> {
        match self.ring {
            RingTag::Q => {
                if self.is_zero() {
                    None
                } else {
                    Some(0)
                }
            }
            RingTag::Qx => self.degree(),
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.coeffs.len() == 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    fn assert_same_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "mixed coefficient rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(self.ring, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PolyScalar {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring);
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.ring, coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        PolyScalar::new(
            self.ring,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Euclidean division: self = q * divisor + r with r = 0 or
    /// deg r < deg divisor. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        self.assert_same_ring(divisor);
        assert!(!divisor.is_zero(), "division by zero");
        match self.ring {
            RingTag::Q => {
                let q = self.coeff(0) / divisor.coeff(0);
                (Self::from_rational(RingTag::Q, q), Self::zero(RingTag::Q))
            }
            RingTag::Qx => {
                let mut rem = self.coeffs.clone();
                let d = divisor.coeffs.len();
                if rem.len() < d {
                    return (Self::zero(self.ring), self.clone());
                }
                let lead = divisor.coeffs[d - 1].clone();
                let mut quot = vec![BigRational::zero(); rem.len() - d + 1];
                for k in (0..quot.len()).rev() {
                    let c = &rem[k + d - 1] / &lead;
                    if c.is_zero() {
                        continue;
                    }
                    for (j, b) in divisor.coeffs.iter().enumerate() {
                        let t = &c * b;
                        rem[k + j] -= t;
                    }
                    quot[k] = c;
                }
                (Self::new(self.ring, quot), Self::new(self.ring, rem))
            }
        }
    }

    /// Exact quotient if divisor | self, else `None`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero(self.ring));
        }
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    /// Split into (unit, monic) with self = unit * monic.
    /// For zero returns (1, 0).
    pub fn monic(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Self::one(self.ring), self.clone());
        }
        let lead = self.leading_coeff();
        let unit = Self::from_rational(self.ring, lead.clone());
        let inv = BigRational::one() / lead;
        (unit, self.scale(&inv))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic().1
    }

    /// Evaluate at a rational point (identity on Q).
    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let body = if i == 0 {
                fmt_rational(&abs)
            } else {
                let var = if i == 1 { "x".to_string() } else { format!("x^{}", i) };
                if abs.is_one() {
                    var
                } else {
                    format!("{}*{}", fmt_rational(&abs), var)
                }
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            parts.push((sign, body));
        }
        for (k, (sign, body)) in parts.iter().enumerate() {
            if k == 0 {
                if *sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            write!(f, "{}", body)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qx(coeffs: &[i64]) -> PolyScalar {
        PolyScalar::new(
            RingTag::Qx,
            coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect(),
        )
    }

    #[test]
    fn arithmetic_basics() {
        let p = qx(&[1, 2]); // 1 + 2x
        let q = qx(&[0, 0, 3]); // 3x^2
        assert_eq!(p.add(&q), qx(&[1, 2, 3]));
        assert_eq!(p.mul(&q), qx(&[0, 0, 3, 6]));
        assert_eq!(p.sub(&p), PolyScalar::zero(RingTag::Qx));
        assert_eq!(p.degree(), Some(1));
        assert!(PolyScalar::zero(RingTag::Qx).degree().is_none());
    }

    #[test]
    fn division_with_remainder() {
        let a = qx(&[-1, 0, 0, 1]); // x^3 - 1
        let b = qx(&[-1, 1]); // x - 1
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, qx(&[1, 1, 1]));

        let a = qx(&[1, 1]); // x + 1
        let b = qx(&[0, 0, 1]); // x^2
        let (q, r) = a.div_rem(&b);
        assert!(q.is_zero());
        assert_eq!(r, a);
    }

    #[test]
    fn exact_division_and_units() {
        let x = PolyScalar::x();
        let x2 = x.mul(&x);
        assert_eq!(x2.exact_div(&x), Some(x.clone()));
        assert_eq!(PolyScalar::one(RingTag::Qx).exact_div(&x), None);
        assert!(PolyScalar::from_int(RingTag::Qx, 5).is_unit());
        assert!(!x.is_unit());
        assert!(PolyScalar::from_int(RingTag::Q, 7).is_unit());
    }

    #[test]
    fn monic_and_gcd() {
        let p = qx(&[2, 4]); // 4x + 2
        let (u, m) = p.monic();
        assert_eq!(u, PolyScalar::from_int(RingTag::Qx, 4));
        assert_eq!(u.mul(&m), p);
        let a = qx(&[0, 1]).mul(&qx(&[-1, 1])); // x(x-1)
        let b = qx(&[0, 2]).mul(&qx(&[1, 1])); // 2x(x+1)
        assert_eq!(a.gcd(&b), qx(&[0, 1]));
    }

    #[test]
    fn evaluation() {
        let p = qx(&[1, 2, 1]); // (x+1)^2
        assert_eq!(p.eval(&BigRational::from(BigInt::from(2))), BigRational::from(BigInt::from(9)));
    }
}
