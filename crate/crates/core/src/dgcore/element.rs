//! Elements of a presented algebra: coefficient-ring linear combinations of
//! normal-form monomials. The normal form is maintained by the presentation
//! (see `DgPresentation::normalize_word`); an element by itself is just the
//! term map, so equal elements always have identical representations.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::PolyScalar;

use super::DgPresentation;

/// A linear combination of monomials (words of generator indices) with
/// coefficients in the base ring. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement {
    terms: BTreeMap<Vec<u16>, PolyScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn constant(c: PolyScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        AlgebraElement { terms }
    }

    pub fn from_word(word: Vec<u16>, c: PolyScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        AlgebraElement { terms }
    }

    pub fn from_terms(terms: BTreeMap<Vec<u16>, PolyScalar>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        AlgebraElement { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[u16]) -> Option<&PolyScalar> {
        self.terms.get(word)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            match terms.get_mut(w) {
                Some(e) => {
                    *e = e.add(c);
                    if e.is_zero() {
                        terms.remove(w);
                    }
                }
                None => {
                    terms.insert(w.clone(), c.clone());
                }
            }
        }
        AlgebraElement { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &PolyScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a.mul(c))).collect(),
        }
    }

    /// Homological degree if homogeneous, `None` for zero or inhomogeneous.
    pub fn degree(&self, p: &DgPresentation) -> Option<i64> {
        let mut deg = None;
        for w in self.terms.keys() {
            let d = p.degree_of_word(w);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Auxiliary weight if homogeneous for it, as for `degree`.
    pub fn weight(&self, p: &DgPresentation) -> Option<i64> {
        let mut wt = None;
        for w in self.terms.keys() {
            let d = p.weight_of_word(w);
            match wt {
                None => wt = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        wt
    }

    /// The part of the element in the given homological degree.
    pub fn homogeneous_part(&self, p: &DgPresentation, degree: i64) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| p.degree_of_word(w) == degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, p: &'a DgPresentation) -> ElementDisplay<'a> {
        ElementDisplay { elem: self, pres: p }
    }
}

pub struct ElementDisplay<'a> {
    elem: &'a AlgebraElement,
    pres: &'a DgPresentation,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.elem.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(|&g| self.pres.gens[g as usize].name.clone())
                    .collect::<Vec<_>>()
                    .join("*")
            };
            if c.is_one() && !w.is_empty() {
                write!(f, "{}", word)?;
            } else if w.is_empty() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, word)?;
            }
        }
        Ok(())
    }
}
