//! Degree-by-degree Poincaré–Dulac normalization and coefficient rescaling.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::{check_n, lie_derivative_function, PolyVectorField};
use crate::poly_map::{compose_truncated, pushforward_truncated, PolyMap};
use crate::resonance::{check_linear_part, is_triangular_shape, poincare_check, resonance_bound, Spectrum};
use crate::scalar::Scalar;

/// Divisors with `|(m,λ) − λ_j| < SMALL_DIVISOR_REL·(1+|λ_j|)` abort (float mode).
pub const SMALL_DIVISOR_REL: f64 = 1e-8;
/// Divisors below `SMALL_DIVISOR_WARN·(1+|λ_j|)` are logged as warnings.
pub const SMALL_DIVISOR_WARN: f64 = 1e-5;

/// One removed term `a·z^m ∂_j` and the divisor it was divided by.
#[derive(Clone, Debug, PartialEq)]
pub struct Division<S: Scalar> {
    pub j: usize,
    pub m: MultiIndex,
    pub coeff: S,
    pub divisor: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalSolution<S: Scalar> {
    pub h: PolyVectorField<S>,
    pub divisions: Vec<Division<S>>,
    pub warnings: Vec<String>,
}

/// Solves `L_{ξ₀}(h) = y` for a homogeneous, entirely non-resonant `y` of degree ≥ 2.
pub fn homological_solve<S: Scalar>(spec: &Spectrum<S>, y: &PolyVectorField<S>) -> Result<PolyVectorField<S>> {
    homological_solve_logged(spec, y).map(|s| s.h)
}

pub fn homological_solve_logged<S: Scalar>(
    spec: &Spectrum<S>,
    y: &PolyVectorField<S>,
) -> Result<HomologicalSolution<S>> {
    check_n(spec.n(), y.n())?;
    let mut degree = None;
    let mut terms = Vec::new();
    let mut divisions = Vec::new();
    let mut warnings = Vec::new();
    for ((j, m), c) in y.terms() {
        let d = m.degree();
        match degree {
            None if d < 2 => {
                return Err(Error::InvalidParameter(format!("homological degree must be ≥ 2, got {d}")));
            }
            None => degree = Some(d),
            Some(e) if e != d => return Err(Error::NotHomogeneous { expected: e, found: d }),
            _ => {}
        }
        if spec.is_resonant(*j, m) {
            return Err(Error::ResonantTerm {
                component: j + 1,
                index: m.clone(),
            });
        }
        let divisor = spec.divisor(*j, m);
        if !S::EXACT {
            let rel = spec.relative_divisor(*j, m);
            if rel < SMALL_DIVISOR_REL {
                return Err(Error::SmallDivisor {
                    component: j + 1,
                    index: m.clone(),
                    divisor: divisor.abs(),
                });
            }
            if rel < SMALL_DIVISOR_WARN {
                warnings.push(format!(
                    "small divisor {:e} for z^{m}∂{}",
                    divisor.abs(),
                    j + 1
                ));
            }
        }
        terms.push((*j, m.clone(), c.clone() / divisor.clone()));
        divisions.push(Division {
            j: *j,
            m: m.clone(),
            coeff: c.clone(),
            divisor,
        });
    }
    Ok(HomologicalSolution {
        h: PolyVectorField::from_terms(y.n(), terms)?,
        divisions,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRecord<S: Scalar> {
    pub degree: i64,
    pub divisions: Vec<Division<S>>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormResult<S: Scalar> {
    /// Resonant through `degree`, truncated there.
    pub normal_form: PolyVectorField<S>,
    /// `w = Φ(z)`, composition of the per-degree changes.
    pub transform: PolyMap<S>,
    pub degree: i64,
    pub degree_log: Vec<DegreeRecord<S>>,
}

impl<S: Scalar> NormalFormResult<S> {
    pub fn warnings(&self) -> impl Iterator<Item = &String> {
        self.degree_log.iter().flat_map(|r| r.warnings.iter())
    }
}

/// Removes the non-resonant part of `x` degree by degree up to `degree`.
///
/// At degree `d` the change `w = z − h_d(z)` with `L_{ξ₀}(h_d) = Y_d^{nr}` is
/// applied by a full truncated push-forward, so later degrees see every
/// induced term.
pub fn poincare_dulac_normalize<S: Scalar>(
    x: &PolyVectorField<S>,
    spec: &Spectrum<S>,
    degree: u32,
) -> Result<NormalFormResult<S>> {
    check_n(spec.n(), x.n())?;
    resonance_bound(&poincare_check(spec))?;
    check_linear_part(x, spec)?;
    let n = spec.n();
    let top = degree.max(1) as i64;
    let mut y = x.truncated(top);
    let mut transform = PolyMap::identity(n, top);
    let mut log = Vec::new();
    for d in 2..=top {
        let nr = y.homogeneous_part(d).filter(|j, m| !spec.is_resonant(j, m));
        let step = homological_solve_logged(spec, &nr)?;
        if !nr.is_zero() {
            let phi = PolyMap::identity_plus(&step.h.scale(&-S::one()), top)?;
            y = pushforward_truncated(&phi, &y, top)?;
            transform = compose_truncated(&phi, &transform, top)?;
        }
        log.push(DegreeRecord {
            degree: d,
            divisions: step.divisions,
            warnings: step.warnings,
        });
    }
    Ok(NormalFormResult {
        normal_form: y,
        transform,
        degree: top,
        degree_log: log,
    })
}

/// `dΦ(w)·X(w) − Y(Φ(w))`, which vanishes to order `N + 1` at 0 when `Y` is
/// the normal form of `X` through degree `N` and `Φ` its transform.
pub fn conjugacy_residual<S: Scalar>(
    x: &PolyVectorField<S>,
    result: &NormalFormResult<S>,
    w: &[S],
) -> Result<Vec<S>> {
    check_n(x.n(), w.len())?;
    let phi = &result.transform;
    let phi_w = phi.evaluate(w)?;
    let y_at = result.normal_form.evaluate(&phi_w)?;
    phi.components()
        .iter()
        .zip(y_at)
        .map(|(phi_i, yi)| Ok(lie_derivative_function(x, phi_i)?.evaluate(w)? - yi))
        .collect()
}

/// Exponent `1/j − Σ_k m_k/k` (1-based indices) of the rescaling factor on `z^m ∂_j`.
pub fn rescale_exponent(j: usize, m: &MultiIndex) -> Rational64 {
    let mut e = Rational64::new(1, j as i64 + 1);
    for (k, &mk) in m.entries().iter().enumerate() {
        e -= Rational64::new(mk as i64, k as i64 + 1);
    }
    e
}

/// `base^e` when it is rational (`base > 0`), `None` otherwise.
pub fn exact_rational_power(base: &BigRational, e: Rational64) -> Option<BigRational> {
    if !base.is_positive() {
        return None;
    }
    let q = *e.denom();
    let p = *e.numer();
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(q as u32);
        (num_traits::pow(r.clone(), q as usize) == *x).then_some(r)
    };
    let r = BigRational::new(root(base.numer())?, root(base.denom())?);
    let powered = num_traits::pow(r, p.unsigned_abs() as usize);
    Some(if p < 0 { powered.recip() } else { powered })
}

/// Checks that every non-linear term of `x` is a resonant triangular term and
/// the linear part is diagonal.
pub fn check_triangular_support<S: Scalar>(x: &PolyVectorField<S>, spec: &Spectrum<S>) -> Result<()> {
    check_n(spec.n(), x.n())?;
    for (j, m) in x.terms().keys() {
        if m.is_unit() == Some(*j) {
            continue;
        }
        if !is_triangular_shape(*j, m) {
            return Err(Error::NotTriangular {
                component: j + 1,
                index: m.clone(),
            });
        }
        if !spec.is_resonant(*j, m) {
            return Err(Error::NotResonant {
                component: j + 1,
                index: m.clone(),
            });
        }
    }
    Ok(())
}

/// Conjugates by `h = diag(A, A^{1/2}, …, A^{1/n})`:
/// `a_{j,m} ↦ A^{1/j − Σ m_k/k}·a_{j,m}`. The factors are irrational in
/// general, so the result is always a float field.
pub fn rescale_coefficients<S: Scalar>(
    x: &PolyVectorField<S>,
    spec: &Spectrum<S>,
    a: f64,
) -> Result<PolyVectorField<Complex64>> {
    if a.is_nan() || a <= 1.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("rescaling base must be > 1, got {a}")));
    }
    check_triangular_support(x, spec)?;
    let terms = x.terms().iter().map(|((j, m), c)| {
        let e = rescale_exponent(*j, m);
        let factor = a.powf(*e.numer() as f64 / *e.denom() as f64);
        (*j, m.clone(), c.to_c64() * factor)
    });
    PolyVectorField::from_terms(x.n(), terms)
}

/// Exact rescaling when every factor is rational (e.g. `A = 4` on exponents
/// with denominator 2); `None` otherwise.
pub fn rescale_coefficients_exact(
    x: &PolyVectorField<crate::scalar::GaussianRational>,
    spec: &Spectrum<crate::scalar::GaussianRational>,
    a: &BigRational,
) -> Result<Option<PolyVectorField<crate::scalar::GaussianRational>>> {
    if *a <= BigRational::one() {
        return Err(Error::InvalidParameter(format!("rescaling base must be > 1, got {a}")));
    }
    check_triangular_support(x, spec)?;
    let mut terms = Vec::new();
    for ((j, m), c) in x.terms() {
        let Some(f) = exact_rational_power(a, rescale_exponent(*j, m)) else {
            return Ok(None);
        };
        let f = crate::scalar::GaussianRational::new(f, BigRational::zero());
        terms.push((*j, m.clone(), c.clone() * f));
    }
    PolyVectorField::from_terms(x.n(), terms).map(Some)
}
