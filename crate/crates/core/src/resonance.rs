//! Poincaré-domain certificates, resonances and the resonant algebra `g_λ`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hull::{convex_hull, hull_distance_sq};
use crate::multi_index::{indices_of_degree, indices_up_to, MultiIndex};
use crate::poly::{check_n, PolyVectorField};
use crate::scalar::{RealScalar, Scalar};

/// Relative tolerance of the float resonance test.
pub const RES_TOL: f64 = 1e-9;
/// Non-resonant divisors below this relative size are reported as near misses.
pub const NEAR_MISS_TOL: f64 = 1e-6;

/// Eigenvalues `λ = (λ_1, …, λ_n)` of the linear part.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<S: Scalar> {
    lambda: Vec<S>,
    res_tol: f64,
}

impl<S: Scalar> Spectrum<S> {
    pub fn new(lambda: Vec<S>) -> Result<Self> {
        Self::with_tolerance(lambda, RES_TOL)
    }

    /// `res_tol` only matters in float mode.
    pub fn with_tolerance(lambda: Vec<S>, res_tol: f64) -> Result<Self> {
        if lambda.len() < 2 {
            return Err(Error::InvalidDimension(lambda.len()));
        }
        if res_tol.is_nan() || res_tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("resonance tolerance must be positive, got {res_tol}")));
        }
        Ok(Self { lambda, res_tol })
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[S] {
        &self.lambda
    }

    pub fn res_tol(&self) -> f64 {
        self.res_tol
    }

    /// `(m, λ)`; `m` may have negative entries.
    pub fn dot(&self, m: &MultiIndex) -> S {
        let mut acc = S::zero();
        for (k, &e) in m.entries().iter().enumerate() {
            if e != 0 {
                acc = acc + self.lambda[k].scale_i64(e as i64);
            }
        }
        acc
    }

    /// `(m, λ) − λ_j`, the eigenvalue of `L_{ξ₀}` on `z^m ∂_j`.
    pub fn divisor(&self, j: usize, m: &MultiIndex) -> S {
        self.dot(m) - self.lambda[j].clone()
    }

    /// Size of `divisor(j, m)` relative to `1 + |λ_j|` (float diagnostics).
    pub fn relative_divisor(&self, j: usize, m: &MultiIndex) -> f64 {
        self.divisor(j, m).abs() / (1.0 + self.lambda[j].abs())
    }

    /// `λ_j = (m, λ)`: exact in exact mode, within `res_tol·(1+|λ_j|)` otherwise.
    pub fn is_resonant(&self, j: usize, m: &MultiIndex) -> bool {
        let d = self.divisor(j, m);
        if S::EXACT {
            d.is_zero()
        } else {
            d.abs() <= self.res_tol * (1.0 + self.lambda[j].abs())
        }
    }

    /// `ξ₀ = Σ λ_j z_j ∂_j`.
    pub fn diagonal_field(&self) -> PolyVectorField<S> {
        PolyVectorField::diagonal(&self.lambda)
    }
}

/// Result of the Poincaré-domain test.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareCertificate<S: Scalar> {
    pub in_domain: bool,
    /// Extreme points of `conv{λ_j}`, counter-clockwise.
    pub hull: Vec<S>,
    /// Distance from 0 to the hull.
    pub delta: f64,
    /// `delta²`, exact in exact mode.
    pub delta_squared: S::Real,
    /// Largest `|m|` a resonance can have; `None` outside the domain.
    pub bound_c: Option<u32>,
}

pub fn poincare_check<S: Scalar>(spec: &Spectrum<S>) -> PoincareCertificate<S> {
    let pts: Vec<(S::Real, S::Real)> = spec.lambda.iter().map(|l| (l.re(), l.im())).collect();
    let hull = convex_hull(&pts);
    let d2 = hull_distance_sq(&hull);
    let delta = d2.to_f64().max(0.0).sqrt();
    let in_domain = if S::EXACT {
        !d2.vanishes()
    } else {
        delta > 10.0 * spec.res_tol
    };
    let bound_c = in_domain.then(|| bound_from(spec, &d2, delta));
    PoincareCertificate {
        in_domain,
        hull: hull.into_iter().map(|(x, y)| S::from_parts(x, y)).collect(),
        delta,
        delta_squared: d2,
        bound_c,
    }
}

/// `⌈max_s |λ_s| / δ⌉`; in exact mode the smallest `C` with `C²δ² ≥ max|λ_s|²`.
fn bound_from<S: Scalar>(spec: &Spectrum<S>, d2: &S::Real, delta: f64) -> u32 {
    if S::EXACT {
        let mut max2 = S::Real::zero();
        for l in &spec.lambda {
            let v = l.norm_sqr();
            if v > max2 {
                max2 = v;
            }
        }
        let estimate = (max2.to_f64() / d2.to_f64()).sqrt().ceil().max(1.0) as u32;
        let fits = |c: u32| {
            let c = S::Real::from_i64(c as i64);
            c.clone() * c * d2.clone() >= max2
        };
        let mut c = estimate;
        while c > 1 && fits(c - 1) {
            c -= 1;
        }
        while !fits(c) {
            c += 1;
        }
        c
    } else {
        let max = spec.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
        // guard against a ratio like 2.0000000001 produced by rounding
        ((max / delta) - 1e-9).ceil().max(1.0) as u32
    }
}

pub fn resonance_bound<S: Scalar>(cert: &PoincareCertificate<S>) -> Result<u32> {
    cert.bound_c.ok_or(Error::NotInPoincareDomain)
}

fn certified_bound<S: Scalar>(spec: &Spectrum<S>) -> Result<u32> {
    resonance_bound(&poincare_check(spec))
}

/// A relation `λ_s = (m, λ)` with `|m| ≥ 1`. `s` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Resonance {
    pub s: usize,
    pub m: MultiIndex,
    pub trivial: bool,
}

/// All resonances with `1 ≤ |m| ≤ C`, ordered by `m` (graded reverse-lex) then `s`.
pub fn enumerate_resonances<S: Scalar>(spec: &Spectrum<S>, include_trivial: bool) -> Result<Vec<Resonance>> {
    let c = certified_bound(spec)?;
    let n = spec.n();
    let mut out = Vec::new();
    for d in 1..=c {
        for m in indices_of_degree(n, d) {
            let unit = m.is_unit();
            for s in 0..n {
                let trivial = unit == Some(s);
                if trivial && !include_trivial {
                    continue;
                }
                if trivial || spec.is_resonant(s, &m) {
                    out.push(Resonance { s, m: m.clone(), trivial });
                }
            }
        }
    }
    Ok(out)
}

/// Non-resonant `(s, m)` with `2 ≤ |m| ≤ C + 1` whose relative divisor is
/// below [`NEAR_MISS_TOL`]. Only meaningful in float mode.
pub fn near_misses<S: Scalar>(spec: &Spectrum<S>) -> Result<Vec<(usize, MultiIndex, f64)>> {
    let c = certified_bound(spec)?;
    let mut out = Vec::new();
    for m in indices_up_to(spec.n(), 1, c + 1) {
        for s in 0..spec.n() {
            if m.is_unit() == Some(s) || spec.is_resonant(s, &m) {
                continue;
            }
            let rel = spec.relative_divisor(s, &m);
            if rel <= NEAR_MISS_TOL {
                out.push((s, m.clone(), rel));
            }
        }
    }
    Ok(out)
}

/// Ordered basis of `g_λ` made of resonant monomial fields `z^m ∂_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonantBasis {
    n: usize,
    elements: Vec<(usize, MultiIndex)>,
    position: HashMap<(usize, MultiIndex), usize>,
}

impl ResonantBasis {
    pub fn from_elements(n: usize, elements: Vec<(usize, MultiIndex)>) -> Result<Self> {
        let mut position = HashMap::new();
        for (i, (s, m)) in elements.iter().enumerate() {
            if *s >= n {
                return Err(Error::ComponentOutOfRange { component: s + 1, n });
            }
            check_n(n, m.len())?;
            if position.insert((*s, m.clone()), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate basis element ({}, {m})", s + 1)));
            }
        }
        Ok(Self { n, elements, position })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(usize, MultiIndex)] {
        &self.elements
    }

    pub fn position(&self, s: usize, m: &MultiIndex) -> Option<usize> {
        self.position.get(&(s, m.clone())).copied()
    }

    pub fn contains(&self, s: usize, m: &MultiIndex) -> bool {
        self.position(s, m).is_some()
    }

    /// The `k`-th basis field with coefficient 1.
    pub fn field<S: Scalar>(&self, k: usize) -> PolyVectorField<S> {
        let (s, m) = &self.elements[k];
        PolyVectorField::from_terms(self.n, [(*s, m.clone(), S::one())]).expect("basis keys are valid")
    }

    /// Coordinates of `x`; `None` if `x` has a term outside the basis.
    pub fn coordinates<S: Scalar>(&self, x: &PolyVectorField<S>) -> Option<Vec<S>> {
        let mut v = vec![S::zero(); self.len()];
        for ((s, m), c) in x.terms() {
            v[self.position(*s, m)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_coordinates<S: Scalar>(&self, coords: &[S]) -> PolyVectorField<S> {
        let terms = self
            .elements
            .iter()
            .zip(coords)
            .map(|((s, m), c)| (*s, m.clone(), c.clone()));
        PolyVectorField::from_terms(self.n, terms).expect("basis keys are valid")
    }
}

pub fn resonant_basis<S: Scalar>(spec: &Spectrum<S>) -> Result<ResonantBasis> {
    let res = enumerate_resonances(spec, true)?;
    ResonantBasis::from_elements(spec.n(), res.into_iter().map(|r| (r.s, r.m)).collect())
}

/// `X = X_r + X_nr` with `X_r` on resonant keys.
pub fn split_resonant<S: Scalar>(
    x: &PolyVectorField<S>,
    spec: &Spectrum<S>,
) -> Result<(PolyVectorField<S>, PolyVectorField<S>)> {
    check_n(spec.n(), x.n())?;
    let r = x.filter(|s, m| spec.is_resonant(s, m));
    let nr = x.filter(|s, m| !spec.is_resonant(s, m));
    Ok((r, nr))
}

/// `(j, m)` has the triangular shape: `j ≥ 2` (1-based), `|m| ≥ 2` and
/// `m_k = 0` for every `k ≥ j`.
pub fn is_triangular_shape(j: usize, m: &MultiIndex) -> bool {
    j >= 1 && m.degree() >= 2 && m.is_nonnegative() && m.entries()[j..].iter().all(|&e| e == 0)
}

/// Support set of the compact Poincaré–Dulac form.
#[derive(Clone, Debug, PartialEq)]
pub struct PdSupport {
    /// Resonant `(j, m)` of triangular shape.
    pub triangular: Vec<(usize, MultiIndex)>,
    /// Pairs `(j, e_{j−1})` that a Jordan block could occupy. Listed
    /// unconditionally and never filled in by this crate.
    pub jordan_slots: Vec<(usize, MultiIndex)>,
}

pub fn poincare_dulac_support<S: Scalar>(spec: &Spectrum<S>) -> Result<PdSupport> {
    let n = spec.n();
    let triangular = enumerate_resonances(spec, false)?
        .into_iter()
        .filter(|r| is_triangular_shape(r.s, &r.m))
        .map(|r| (r.s, r.m))
        .collect();
    let jordan_slots = (1..n).map(|j| (j, MultiIndex::unit(n, j - 1))).collect();
    Ok(PdSupport { triangular, jordan_slots })
}

/// Fails with the first non-resonant term of `x`.
pub fn require_resonant<S: Scalar>(x: &PolyVectorField<S>, spec: &Spectrum<S>) -> Result<()> {
    check_n(spec.n(), x.n())?;
    match x.terms().keys().find(|(s, m)| !spec.is_resonant(*s, m)) {
        Some((s, m)) => Err(Error::NotResonant {
            component: s + 1,
            index: m.clone(),
        }),
        None => Ok(()),
    }
}

/// Checks that the constant and linear part of `x` is exactly `Σ λ_j z_j ∂_j`
/// (within `res_tol·(1+|λ_j|)` in float mode).
pub fn check_linear_part<S: Scalar>(x: &PolyVectorField<S>, spec: &Spectrum<S>) -> Result<()> {
    check_n(spec.n(), x.n())?;
    let n = spec.n();
    for ((j, m), c) in x.terms() {
        match m.degree() {
            0 => {
                return Err(Error::LinearPartMismatch(format!("constant term {c} in component {}", j + 1)));
            }
            1 if m.is_unit() != Some(*j) => {
                return Err(Error::LinearPartMismatch(format!(
                    "off-diagonal linear term z{}∂{}",
                    m.is_unit().map_or(0, |k| k + 1),
                    j + 1
                )));
            }
            _ => {}
        }
    }
    for j in 0..n {
        let c = x.coeff(j, &MultiIndex::unit(n, j));
        let lambda = &spec.lambda()[j];
        let ok = if S::EXACT {
            c == *lambda
        } else {
            (c.clone() - lambda.clone()).abs() <= spec.res_tol() * (1.0 + lambda.abs())
        };
        if !ok {
            return Err(Error::LinearPartMismatch(format!(
                "coefficient of z{k}∂{k} is {c}, expected {lambda}",
                k = j + 1
            )));
        }
    }
    Ok(())
}
