//! Monomial-module models: graded Q-vector spaces spanned by monomials
//! x^i·u^j cut out by a linear constraint, together with the comparison
//! against a computed homology-with-u-action report.

use crate::exactalg::{HomologyReport, PolyScalar};

/// The span of {x^i u^j : α·i + β·j + γ ≥ 0, i ≥ i_floor, j ≥ j_floor},
/// graded by degree(x^i u^j) = −2j. Per degree the model is a free rank-1
/// module over the polynomial ring in x with recorded generator valuation
/// i_min(j); since u sends the generator x^{i_min(j)}u^j to
/// x^{i_min(j)}u^{j+1}, it acts by x^{i_min(j) − i_min(j+1)} on generators.
#[derive(Clone, Debug)]
pub struct MonomialModel {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    /// Smallest admissible x-exponent, if any (0 for polynomial models,
    /// none for Laurent-type models whose valuation drops with each
    /// u-power).
    pub i_floor: Option<i64>,
    /// Smallest admissible u-exponent, if any.
    pub j_floor: Option<i64>,
}

/// Build a model; α must be positive so that every admissible u-power has a
/// well-defined generator valuation.
pub fn monomial_model(
    alpha: i64,
    beta: i64,
    gamma: i64,
    i_floor: Option<i64>,
    j_floor: Option<i64>,
) -> MonomialModel {
    assert!(alpha > 0, "constraint must be increasing in the x-exponent");
    MonomialModel { alpha, beta, gamma, i_floor, j_floor }
}

impl MonomialModel {
    /// The u-exponent indexing homological degree k, when k is even.
    fn j_of_degree(k: i64) -> Option<i64> {
        if k.rem_euclid(2) == 0 {
            Some(-k / 2)
        } else {
            None
        }
    }

    /// Generator valuation at u-power j, or None when the degree is not in
    /// the model.
    pub fn i_min(&self, j: i64) -> Option<i64> {
        if let Some(f) = self.j_floor {
            if j < f {
                return None;
            }
        }
        // Smallest i with alpha*i >= -beta*j - gamma.
        let need = -self.beta * j - self.gamma;
        let q = need.div_euclid(self.alpha)
            + if need.rem_euclid(self.alpha) != 0 { 1 } else { 0 };
        Some(match self.i_floor {
            Some(f) => q.max(f),
            None => q,
        })
    }

    /// Expected free rank at homological degree k.
    pub fn rank_at(&self, k: i64) -> usize {
        match Self::j_of_degree(k) {
            Some(j) if self.i_min(j).is_some() => 1,
            _ => 0,
        }
    }

    /// Expected u-action exponent out of degree k (into k − 2), when both
    /// ends are in the model.
    pub fn u_exponent(&self, k: i64) -> Option<i64> {
        let j = Self::j_of_degree(k)?;
        Some(self.i_min(j)? - self.i_min(j + 1)?)
    }
}

/// Outcome of comparing a homology report with a monomial model over the
/// degrees listed in `checked`.
#[derive(Clone, Debug)]
pub struct ModelReport {
    pub checked: Vec<i64>,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// What the model predicts in one homological degree at a finite u-order.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Expected {
    Zero,
    Free,
    /// Cyclic torsion module with the given x-power as invariant factor.
    Torsion(i64),
}

impl MonomialModel {
    /// Prediction at degree k when the computation truncates the u-power
    /// staircase at `u_order` levels. Truncation cuts the relation chain
    /// below u-power j0 − N; when the generator at that level still lies in
    /// the model, the chain closes up into the cyclic module
    /// Q[x]/x^{i_min(j0−N) − i_min(j0)}, otherwise the module stays free.
    fn expected_at(&self, k: i64, u_order: usize) -> Expected {
        let Some(j0) = Self::j_of_degree(k) else { return Expected::Zero };
        let Some(v0) = self.i_min(j0) else { return Expected::Zero };
        match self.i_min(j0 - u_order as i64) {
            None => Expected::Free,
            Some(v) if v > v0 => Expected::Torsion(v - v0),
            Some(_) => Expected::Zero,
        }
    }
}

/// Index of the lowest nonzero coefficient, if any.
fn valuation(v: &PolyScalar) -> Option<usize> {
    use num_traits::Zero;
    v.coeffs().iter().position(|c| !c.is_zero())
}

/// Compare the trusted part of a homology-with-u-action report, computed at
/// finite u-order `u_order`, against a monomial model: per degree the free
/// rank and invariant factors predicted by `expected_at`, plus the u-action
/// exponent pattern. The u-action entry is checked by x-adic valuation,
/// since generators of torsion modules are unique only up to units.
pub fn compare_with_model(
    report: &HomologyReport,
    model: &MonomialModel,
    u_order: usize,
) -> ModelReport {
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for d in &report.degrees {
        if !d.trusted {
            continue;
        }
        let k = d.degree;
        checked.push(k);
        let want = model.expected_at(k, u_order);
        let want_free = usize::from(want == Expected::Free);
        if d.free_rank != want_free {
            failures.push(format!("degree {}: free rank {} expected {}", k, d.free_rank, want_free));
            continue;
        }
        match want {
            Expected::Torsion(e) => {
                let ok = d.invariant_factors.len() == 1 && {
                    let f = &d.invariant_factors[0];
                    f.degree() == Some(e as usize)
                        && f.sub(&PolyScalar::monomial(f.ring(), f.leading_coeff(), e as usize))
                            .is_zero()
                };
                if !ok {
                    failures.push(format!(
                        "degree {}: invariant factors {:?} expected [x^{}]",
                        k,
                        d.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        e
                    ));
                    continue;
                }
            }
            _ => {
                if !d.invariant_factors.is_empty() {
                    failures.push(format!("degree {}: unexpected torsion", k));
                    continue;
                }
            }
        }
        // u-action exponent: only when both endpoints are trusted and the
        // model is nonzero at both.
        let lower_ok = report.degrees.iter().any(|t| t.degree == k - 2 && t.trusted)
            && model.expected_at(k - 2, u_order) != Expected::Zero;
        if want != Expected::Zero && lower_ok {
            let Some(exp) = model.u_exponent(k) else { continue };
            if exp < 0 {
                continue;
            }
            let Some(m) = report.u_action.get(&k) else {
                failures.push(format!("degree {}: missing u-action", k));
                continue;
            };
            if m.rows() != 1 || m.cols() != 1 {
                continue;
            }
            let v = m.get(0, 0);
            if valuation(&v) != Some(exp as usize) {
                failures.push(format!(
                    "degree {}: u-action {} does not have x-valuation {}",
                    k, v, exp
                ));
            }
        }
    }
    ModelReport { pass: failures.is_empty(), checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_match_hand_arithmetic() {
        // n = 1 model: i + 2j + 1 >= 0, i >= 0.
        let m = monomial_model(1, 2, 1, Some(0), None);
        assert_eq!(m.i_min(0), Some(0));
        assert_eq!(m.i_min(-1), Some(1));
        assert_eq!(m.i_min(-2), Some(3));
        assert_eq!(m.u_exponent(2), Some(1));
        assert_eq!(m.u_exponent(4), Some(2));
        // n = 2 model: 2i + 3j + 2 >= 0.
        let m2 = monomial_model(2, 3, 2, Some(0), None);
        assert_eq!(m2.i_min(-2), Some(2));
    }

    #[test]
    fn laurent_model_steps_by_n() {
        // x^{-n}·Q[x, u/x^n]: monomials x^i u^j with i + n·j + n >= 0 and
        // j >= 0, so the valuation drops by n with each u-power.
        for n in 1..=3i64 {
            let m = monomial_model(1, n, n, None, Some(0));
            assert_eq!(m.i_min(0), Some(-n));
            for j in 0..4 {
                assert_eq!(m.u_exponent(-2 * j), Some(n));
            }
            assert_eq!(m.rank_at(2), 0);
            assert_eq!(m.rank_at(-3), 0);
        }
    }
}
