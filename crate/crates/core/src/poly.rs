//! Sparse polynomial functions and vector fields on ℂⁿ.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multi_index::{format_monomial, MultiIndex};
use crate::scalar::Scalar;

/// Relative purge threshold for float coefficients.
pub const FLOAT_PURGE_REL: f64 = 1e-14;

/// Drops zero coefficients: exact zeros in exact mode, anything at or below
/// `1e-14 · max|coeff|` in float mode.
pub(crate) fn purge<K: Ord + Clone, S: Scalar>(terms: &mut BTreeMap<K, S>) {
    if S::EXACT {
        terms.retain(|_, v| !v.is_zero());
    } else {
        let max = terms.values().map(|v| v.abs()).fold(0.0, f64::max);
        let cut = FLOAT_PURGE_REL * max;
        terms.retain(|_, v| !v.is_zero() && v.abs() > cut);
    }
}

pub(crate) fn accumulate<K: Ord, S: Scalar>(terms: &mut BTreeMap<K, S>, key: K, value: S) {
    match terms.get_mut(&key) {
        Some(v) => *v = v.clone() + value,
        None => {
            terms.insert(key, value);
        }
    }
}

pub(crate) fn check_n(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Raw bracket on monomial fields with arbitrary integer exponents:
/// `[a z^m ∂_k, b z^l ∂_j] = a b (l_k z^{m+l-e_k} ∂_j − m_j z^{m+l-e_j} ∂_k)`.
pub(crate) fn bracket_terms<S: Scalar>(
    x: &BTreeMap<(usize, MultiIndex), S>,
    y: &BTreeMap<(usize, MultiIndex), S>,
) -> BTreeMap<(usize, MultiIndex), S> {
    let mut out = BTreeMap::new();
    for ((k, m), a) in x {
        for ((j, l), b) in y {
            let ab = a.clone() * b.clone();
            let lk = l.get(*k);
            if lk != 0 {
                let idx = m.add(l).shifted(*k, -1);
                accumulate(&mut out, (*j, idx), ab.scale_i64(lk as i64));
            }
            let mj = m.get(*j);
            if mj != 0 {
                let idx = m.add(l).shifted(*j, -1);
                accumulate(&mut out, (*k, idx), -ab.scale_i64(mj as i64));
            }
        }
    }
    purge(&mut out);
    out
}

/// Raw derivation of a function by a field: `a z^l ∂_k (b z^m) = a b m_k z^{l+m-e_k}`.
pub(crate) fn derive_terms<S: Scalar>(
    x: &BTreeMap<(usize, MultiIndex), S>,
    f: &BTreeMap<MultiIndex, S>,
) -> BTreeMap<MultiIndex, S> {
    let mut out = BTreeMap::new();
    for ((k, l), a) in x {
        for (m, b) in f {
            let mk = m.get(*k);
            if mk != 0 {
                let idx = l.add(m).shifted(*k, -1);
                accumulate(&mut out, idx, (a.clone() * b.clone()).scale_i64(mk as i64));
            }
        }
    }
    purge(&mut out);
    out
}

fn check_index(n: usize, m: &MultiIndex) -> Result<()> {
    check_n(n, m.len())?;
    if !m.is_nonnegative() {
        return Err(Error::NegativeExponent { index: m.clone() });
    }
    Ok(())
}

/// Polynomial function `Σ c_m z^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFunction<S: Scalar> {
    n: usize,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> PolyFunction<S> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::monomial(n, MultiIndex::zero(n), c)
    }

    /// The coordinate function `z_k` (0-based `k`).
    pub fn coordinate(n: usize, k: usize) -> Self {
        Self::monomial(n, MultiIndex::unit(n, k), S::one())
    }

    pub fn monomial(n: usize, m: MultiIndex, c: S) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, c);
        purge(&mut terms);
        Self { n, terms }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            check_index(n, &m)?;
            accumulate(&mut map, m, c);
        }
        purge(&mut map);
        Ok(Self { n, terms: map })
    }

    pub(crate) fn from_map_unchecked(n: usize, mut terms: BTreeMap<MultiIndex, S>) -> Self {
        purge(&mut terms);
        Self { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, S> {
        &self.terms
    }

    pub fn coeff(&self, m: &MultiIndex) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|m|` present; `None` for the zero function.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Lowest `|m|` present.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn truncated(&self, max_degree: i64) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, d: i64) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_n(self.n, other.n)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        purge(&mut terms);
        Ok(Self { n: self.n, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
            .collect();
        purge(&mut terms);
        Self { n: self.n, terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, i64::MAX)
    }

    /// Product keeping only terms with `|m| ≤ max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: i64) -> Result<Self> {
        check_n(self.n, other.n)?;
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            for (l, b) in &other.terms {
                if m.degree() + l.degree() > max_degree {
                    continue;
                }
                accumulate(&mut terms, m.add(l), a.clone() * b.clone());
            }
        }
        purge(&mut terms);
        Ok(Self { n: self.n, terms })
    }

    /// `∂f/∂z_k` (0-based `k`).
    pub fn partial(&self, k: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.get(k);
            if e != 0 {
                accumulate(&mut terms, m.shifted(k, -1), c.scale_i64(e as i64));
            }
        }
        purge(&mut terms);
        Self { n: self.n, terms }
    }

    pub fn evaluate(&self, z: &[S]) -> Result<S> {
        check_n(self.n, z.len())?;
        let max_exp = self.terms.keys().flat_map(|m| m.entries().iter().cloned()).max();
        let powers = power_table(z, max_exp.unwrap_or(0).max(0) as usize);
        Ok(eval_with(&self.terms, &powers))
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PolyFunction<T> {
        PolyFunction::from_map_unchecked(
            self.n,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        )
    }

    pub fn to_float(&self) -> PolyFunction<Complex64> {
        self.map_scalars(|c| c.to_c64())
    }
}

fn power_table<S: Scalar>(z: &[S], max_exp: usize) -> Vec<Vec<S>> {
    z.iter()
            .map(|zk| {
                let mut row = Vec::with_capacity(max_exp + 1);
                row.push(S::one());
                for e in 1..=max_exp {
                    let prev: S = row[e - 1].clone();
                    row.push(prev * zk.clone());
                }
                row
            })
            .collect()
}

fn eval_with<S: Scalar>(terms: &BTreeMap<MultiIndex, S>, powers: &[Vec<S>]) -> S {
    let mut acc = S::zero();
    for (m, c) in terms {
        let mut t = c.clone();
        for (k, &e) in m.entries().iter().enumerate() {
            if e > 0 {
                t = t * powers[k][e as usize].clone();
            }
        }
        acc = acc + t;
    }
    acc
}

fn format_coeff<S: Scalar>(c: &S, first: bool) -> (String, String) {
    // returns (sign, magnitude text) with "1" elided by the caller
    let text = c.to_string();
    if let Some(rest) = text.strip_prefix('-') {
        ("-".into(), rest.to_string())
    } else if first {
        (String::new(), text)
    } else {
        ("+".into(), text)
    }
}

impl<S: Scalar> fmt::Display for PolyFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = format_coeff(c, i == 0);
            let mono = format_monomial(m);
            let sep = if i == 0 { "" } else { " " };
            let sign_sp = if sign.is_empty() || i == 0 { sign.clone() } else { format!("{sign} ") };
            if mono == "1" {
                write!(f, "{sep}{sign_sp}{mag}")?;
            } else if mag == "1" {
                write!(f, "{sep}{sign_sp}{mono}")?;
            } else {
                write!(f, "{sep}{sign_sp}{mag}·{mono}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial vector field `Σ a_{j,m} z^m ∂/∂z_j`. Keys are `(j, m)` with
/// 0-based `j`, ordered component-major then by [`MultiIndex`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyVectorField<S: Scalar> {
    n: usize,
    terms: BTreeMap<(usize, MultiIndex), S>,
}

impl<S: Scalar> PolyVectorField<S> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `ξ₀ = Σ λ_j z_j ∂_j`.
    pub fn diagonal(lambda: &[S]) -> Self {
        let n = lambda.len();
        let mut terms = BTreeMap::new();
        for (j, l) in lambda.iter().enumerate() {
            terms.insert((j, MultiIndex::unit(n, j)), l.clone());
        }
        purge(&mut terms);
        Self { n, terms }
    }

    /// `c · z^m ∂_j` (0-based `j`).
    pub fn monomial(n: usize, j: usize, m: MultiIndex, c: S) -> Result<Self> {
        Self::from_terms(n, [(j, m, c)])
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, MultiIndex, S)>,
    {
        let mut map = BTreeMap::new();
        for (j, m, c) in terms {
            if j >= n {
                return Err(Error::ComponentOutOfRange {
                    component: j + 1,
                    n,
                });
            }
            check_index(n, &m)?;
            accumulate(&mut map, (j, m), c);
        }
        purge(&mut map);
        Ok(Self { n, terms: map })
    }

    pub(crate) fn from_map_unchecked(n: usize, mut terms: BTreeMap<(usize, MultiIndex), S>) -> Self {
        purge(&mut terms);
        Self { n, terms }
    }

    pub fn from_components(components: &[PolyFunction<S>]) -> Result<Self> {
        let n = components.len();
        let mut terms = BTreeMap::new();
        for (j, f) in components.iter().enumerate() {
            check_n(n, f.n())?;
            for (m, c) in f.terms() {
                terms.insert((j, m.clone()), c.clone());
            }
        }
        Ok(Self::from_map_unchecked(n, terms))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(usize, MultiIndex), S> {
        &self.terms
    }

    pub fn coeff(&self, j: usize, m: &MultiIndex) -> S {
        self.terms
            .get(&(j, m.clone()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|(_, m)| m.degree()).max()
    }

    /// `j`-th component function (0-based).
    pub fn component(&self, j: usize) -> PolyFunction<S> {
        PolyFunction::from_map_unchecked(
            self.n,
            self.terms
                .iter()
                .filter(|((k, _), _)| *k == j)
                .map(|((_, m), c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    pub fn components(&self) -> Vec<PolyFunction<S>> {
        (0..self.n).map(|j| self.component(j)).collect()
    }

    pub fn filter(&self, keep: impl Fn(usize, &MultiIndex) -> bool) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|((j, m), _)| keep(*j, m))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncated(&self, max_degree: i64) -> Self {
        self.filter(|_, m| m.degree() <= max_degree)
    }

    pub fn homogeneous_part(&self, d: i64) -> Self {
        self.filter(|_, m| m.degree() == d)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_n(self.n, other.n)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            accumulate(&mut terms, k.clone(), c.clone());
        }
        purge(&mut terms);
        Ok(Self { n: self.n, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
            .collect();
        purge(&mut terms);
        Self { n: self.n, terms }
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        check_n(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            terms: bracket_terms(&self.terms, &other.terms),
        })
    }

    /// Pointwise evaluation at `z`.
    pub fn evaluate(&self, z: &[S]) -> Result<Vec<S>> {
        check_n(self.n, z.len())?;
        let max_exp = self
            .terms
            .keys()
            .flat_map(|(_, m)| m.entries().iter().cloned())
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        let powers = power_table(z, max_exp);
        let mut out = vec![S::zero(); self.n];
        for ((j, m), c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.entries().iter().enumerate() {
                if e > 0 {
                    t = t * powers[k][e as usize].clone();
                }
            }
            out[*j] = out[*j].clone() + t;
        }
        Ok(out)
    }

    /// Evaluation at a float point regardless of the coefficient mode.
    pub fn evaluate_c64(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        check_n(self.n, z.len())?;
        self.to_float().evaluate(z)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PolyVectorField<T> {
        PolyVectorField::from_map_unchecked(
            self.n,
            self.terms.iter().map(|(k, c)| (k.clone(), f(c))).collect(),
        )
    }

    pub fn to_float(&self) -> PolyVectorField<Complex64> {
        self.map_scalars(|c| c.to_c64())
    }
}

/// `L_ξ(X) = [ξ, X]`.
pub fn lie_derivative_field<S: Scalar>(
    xi: &PolyVectorField<S>,
    x: &PolyVectorField<S>,
) -> Result<PolyVectorField<S>> {
    xi.bracket(x)
}

/// `L_ξ(f) = ξ(f) = Σ_k ξ^k ∂f/∂z_k`.
pub fn lie_derivative_function<S: Scalar>(
    xi: &PolyVectorField<S>,
    f: &PolyFunction<S>,
) -> Result<PolyFunction<S>> {
    check_n(xi.n(), f.n())?;
    let mut acc = PolyFunction::zero(f.n());
    for k in 0..f.n() {
        let dk = f.partial(k);
        if dk.is_zero() {
            continue;
        }
        acc = acc.add(&xi.component(k).mul(&dk)?)?;
    }
    Ok(acc)
}

/// `f · X`.
pub fn multiply_function_field<S: Scalar>(
    f: &PolyFunction<S>,
    x: &PolyVectorField<S>,
) -> Result<PolyVectorField<S>> {
    check_n(x.n(), f.n())?;
    let mut terms = BTreeMap::new();
    for (m, a) in f.terms() {
        for ((j, l), b) in x.terms() {
            accumulate(&mut terms, (*j, m.add(l)), a.clone() * b.clone());
        }
    }
    Ok(PolyVectorField::from_map_unchecked(x.n(), terms))
}

pub(crate) fn format_field_terms<S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<(usize, MultiIndex), S>,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, ((j, m), c)) in terms.iter().enumerate() {
        let (sign, mag) = format_coeff(c, i == 0);
        let mono = format_monomial(m);
        if i > 0 {
            write!(f, " {sign} ")?;
        } else {
            write!(f, "{sign}")?;
        }
        let body = match (mag.as_str(), mono.as_str()) {
            ("1", "1") => String::new(),
            ("1", mono) => mono.to_string(),
            (mag, "1") => mag.to_string(),
            (mag, mono) => format!("{mag}·{mono}"),
        };
        if body.is_empty() {
            write!(f, "∂{}", j + 1)?;
        } else {
            write!(f, "{body}∂{}", j + 1)?;
        }
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for PolyVectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_field_terms(f, &self.terms)
    }
}
