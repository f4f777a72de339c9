//! Laurent functions and fields supported in a declared box of ℤⁿ.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::multi_index::{format_monomial, MultiIndex};
use crate::poly::{accumulate, bracket_terms, check_n, derive_terms, format_field_terms, purge, PolyVectorField};
use crate::scalar::Scalar;

/// Axis-aligned box `lo_i ≤ m_i ≤ hi_i` of exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentBox {
    lo: Vec<i32>,
    hi: Vec<i32>,
}

impl LaurentBox {
    pub fn new(lo: Vec<i32>, hi: Vec<i32>) -> Result<Self> {
        check_n(lo.len(), hi.len())?;
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidParameter("empty Laurent box".into()));
        }
        Ok(Self { lo, hi })
    }

    /// `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: i32, hi: i32) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, m: &MultiIndex) -> bool {
        m.len() == self.lo.len()
            && m
                .entries()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (a, b))| a <= x && x <= b)
    }

    /// All indices in the box, in canonical order.
    pub fn indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for (a, b) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i32>| {
                    (*a..=*b).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        let mut idx: Vec<MultiIndex> = out.into_iter().map(MultiIndex::new).collect();
        idx.sort();
        idx
    }
}

/// `Σ c_m z^m` with every `m` in the box.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentFunction<S: Scalar> {
    bounds: LaurentBox,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> LaurentFunction<S> {
    pub fn from_terms<I>(bounds: LaurentBox, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            check_n(bounds.n(), m.len())?;
            if !bounds.contains(&m) {
                return Err(Error::OutsideBox { index: m });
            }
            accumulate(&mut map, m, c);
        }
        purge(&mut map);
        Ok(Self { bounds, terms: map })
    }

    pub fn bounds(&self) -> &LaurentBox {
        &self.bounds
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `ξ(f)` as an unrestricted Laurent term map (the result may leave the box).
    pub fn derive_by(&self, xi: &PolyVectorField<S>) -> Result<BTreeMap<MultiIndex, S>> {
        check_n(xi.n(), self.bounds.n())?;
        Ok(derive_terms(xi.terms(), &self.terms))
    }
}

/// `Σ c_{s,m} z^m ∂_s` with every `m` in the box.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentVectorField<S: Scalar> {
    bounds: LaurentBox,
    terms: BTreeMap<(usize, MultiIndex), S>,
}

impl<S: Scalar> LaurentVectorField<S> {
    pub fn from_terms<I>(bounds: LaurentBox, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, MultiIndex, S)>,
    {
        let n = bounds.n();
        let mut map = BTreeMap::new();
        for (j, m, c) in terms {
            if j >= n {
                return Err(Error::ComponentOutOfRange { component: j + 1, n });
            }
            check_n(n, m.len())?;
            if !bounds.contains(&m) {
                return Err(Error::OutsideBox { index: m });
            }
            accumulate(&mut map, (j, m), c);
        }
        purge(&mut map);
        Ok(Self { bounds, terms: map })
    }

    pub fn bounds(&self) -> &LaurentBox {
        &self.bounds
    }

    pub fn terms(&self) -> &BTreeMap<(usize, MultiIndex), S> {
        &self.terms
    }

    /// `[ξ, X]` as an unrestricted term map.
    pub fn bracket_with(&self, xi: &PolyVectorField<S>) -> Result<BTreeMap<(usize, MultiIndex), S>> {
        check_n(xi.n(), self.bounds.n())?;
        Ok(bracket_terms(xi.terms(), &self.terms))
    }
}

impl<S: Scalar> fmt::Display for LaurentFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}·{}", format_monomial(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Display for LaurentVectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_field_terms(f, &self.terms)
    }
}
